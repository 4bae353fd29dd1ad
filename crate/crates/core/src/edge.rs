//! Edge indexing for `K_{2d}`: pairs `(i, j)` with `1 <= i < j <= 2d` ranked in
//! lexicographic order.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of colors. Vertex sets are kept in `u32` masks.
pub const MAX_D: usize = 16;

/// Lexicographic rank of a vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u16);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Precomputed pair <-> index tables for one `d`.
#[derive(Debug)]
pub struct EdgeTable {
    d: usize,
    n: usize,
    pairs: Vec<(u8, u8)>,
    // n*n, 0-based vertices, u16::MAX on the diagonal
    rank: Vec<u16>,
}

static TABLES: OnceLock<Vec<EdgeTable>> = OnceLock::new();

impl EdgeTable {
    fn build(d: usize) -> Self {
        let n = 2 * d;
        let mut pairs = Vec::with_capacity(d * (2 * d).saturating_sub(1));
        let mut rank = vec![u16::MAX; n * n];
        for i in 1..=n {
            for j in (i + 1)..=n {
                let id = pairs.len() as u16;
                rank[(i - 1) * n + (j - 1)] = id;
                rank[(j - 1) * n + (i - 1)] = id;
                pairs.push((i as u8, j as u8));
            }
        }
        EdgeTable { d, n, pairs, rank }
    }

    /// Shared table for `d`. Panics if `d` is 0 or above [`MAX_D`].
    pub fn get(d: usize) -> &'static EdgeTable {
        assert!((1..=MAX_D).contains(&d), "d = {d} outside 1..={MAX_D}");
        let tables = TABLES.get_or_init(|| (1..=MAX_D).map(EdgeTable::build).collect());
        &tables[d - 1]
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All pairs in EdgeId order, 1-based.
    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    pub fn pair(&self, e: EdgeId) -> (u8, u8) {
        self.pairs[e.index()]
    }

    /// Rank of `{a, b}` for distinct 1-based vertices in either order.
    #[inline]
    pub fn id(&self, a: u8, b: u8) -> EdgeId {
        debug_assert!(a != b);
        EdgeId(self.rank[(a as usize - 1) * self.n + (b as usize - 1)])
    }
}

/// Lexicographic rank of `(i, j)` among all pairs on `2d` vertices.
pub fn edge_encode(i: u8, j: u8, d: usize) -> Result<EdgeId> {
    if d == 0 || d > MAX_D {
        return Err(Error::input(format!("d = {d} outside 1..={MAX_D}")));
    }
    let n = 2 * d;
    if i == 0 || j as usize > n || i >= j {
        return Err(Error::input(format!("edge ({i},{j}) is not a pair 1 <= i < j <= {n}")));
    }
    Ok(EdgeTable::get(d).id(i, j))
}

pub fn edge_decode(e: EdgeId, d: usize) -> Result<(u8, u8)> {
    if d == 0 || d > MAX_D {
        return Err(Error::input(format!("d = {d} outside 1..={MAX_D}")));
    }
    let t = EdgeTable::get(d);
    t.pairs
        .get(e.index())
        .copied()
        .ok_or_else(|| Error::input(format!("edge id {} out of range for d = {d}", e.0)))
}
