//! The triple involutions.
//!
//! For a cycle-free partition `p` and vertices `x < y < z` there is exactly one
//! cycle-free partition that agrees with `p` off the triangle `xy, xz, yz` and
//! differs from it on at least two of the triangle's edges.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edge::{EdgeId, EdgeTable};
use crate::error::{Error, Result};
use crate::partition::{ClassMasks, Partition};
use crate::symmetry::Perm;

/// An ordered vertex triple `x < y < z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    x: u8,
    y: u8,
    z: u8,
}

impl Triple {
    pub fn new(x: u8, y: u8, z: u8) -> Result<Self> {
        if x == 0 || !(x < y && y < z) {
            return Err(Error::input(format!("({x},{y},{z}) is not a triple 1 <= x < y < z")));
        }
        Ok(Triple { x, y, z })
    }

    /// The triple with the three distinct vertices in increasing order.
    pub fn sorted(a: u8, b: u8, c: u8) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        Triple::new(v[0], v[1], v[2])
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn y(self) -> u8 {
        self.y
    }

    pub fn z(self) -> u8 {
        self.z
    }

    pub fn vertices(self) -> [u8; 3] {
        [self.x, self.y, self.z]
    }

    /// Edge ids of `xy, xz, yz`.
    pub fn edges(self, table: &EdgeTable) -> [EdgeId; 3] {
        [
            table.id(self.x, self.y),
            table.id(self.x, self.z),
            table.id(self.y, self.z),
        ]
    }

    /// Sorted image under a vertex permutation.
    pub fn mapped(self, sigma: &Perm) -> Triple {
        Triple::sorted(sigma.apply(self.x), sigma.apply(self.y), sigma.apply(self.z))
            .expect("permutation images of distinct vertices are distinct")
    }

    fn check_in(self, n: usize) -> Result<()> {
        if self.z as usize > n {
            return Err(Error::input(format!("triple {self:?} outside 1..={n}")));
        }
        Ok(())
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[u8; 3]>::deserialize(de)?;
        Triple::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Triple {
    type Err = Error;

    /// Parses `x,y,z`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u8> = s
            .split(',')
            .map(|p| p.trim().parse::<u8>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::input(format!("bad triple {s:?}, expected x,y,z")))?;
        match parts[..] {
            [x, y, z] => Triple::new(x, y, z),
            _ => Err(Error::input(format!("bad triple {s:?}, expected x,y,z"))),
        }
    }
}

/// All `C(2d, 3)` triples in lexicographic order.
pub fn all_triples(d: usize) -> Vec<Triple> {
    let n = 2 * d as u8;
    let mut out = Vec::new();
    for x in 1..=n {
        for y in (x + 1)..=n {
            for z in (y + 1)..=n {
                out.push(Triple { x, y, z });
            }
        }
    }
    out
}

/// Precomputed triangle data for one triple.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Triangle {
    pub triple: Triple,
    pub edges: [EdgeId; 3],
    // 0-based endpoints of xy, xz, yz
    pub ends: [(usize, usize); 3],
}

impl Triangle {
    pub(crate) fn new(t: Triple, table: &EdgeTable) -> Self {
        let (x, y, z) = (t.x as usize - 1, t.y as usize - 1, t.z as usize - 1);
        Triangle {
            triple: t,
            edges: t.edges(table),
            ends: [(x, y), (x, z), (y, z)],
        }
    }

    pub(crate) fn all(d: usize) -> Vec<Triangle> {
        let table = EdgeTable::get(d);
        all_triples(d).into_iter().map(|t| Triangle::new(t, table)).collect()
    }
}

// Permutations of three slots other than the identity; the ones moving at least
// two positions are all five.
const SLOT_PERMS: [[usize; 3]; 5] = [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

/// New 0-based colors for the triangle's edges under the involution.
///
/// Any cycle-free result keeps every class at `2d - 1` edges, so the new colors
/// are a rearrangement of the old ones; only rearrangements that change at
/// least two edges are candidates.
pub(crate) fn involve_raw(raw: &[u8], masks: &ClassMasks, tri: &Triangle) -> Result<[u8; 3]> {
    let old = [
        raw[tri.edges[0].index()],
        raw[tri.edges[1].index()],
        raw[tri.edges[2].index()],
    ];
    let mut found: Option<[u8; 3]> = None;
    let mut tried: [[u8; 3]; 5] = [[u8::MAX; 3]; 5];
    for (slot, perm) in SLOT_PERMS.iter().enumerate() {
        let cand = [old[perm[0]], old[perm[1]], old[perm[2]]];
        let changed = (0..3).filter(|&s| cand[s] != old[s]).count();
        if changed < 2 || tried[..slot].contains(&cand) {
            continue;
        }
        tried[slot] = cand;
        if candidate_is_cycle_free(masks, tri, &old, &cand) {
            if let Some(prev) = found {
                return Err(Error::invariant(format!(
                    "triple {:?}: two cycle-free results {prev:?} and {cand:?}",
                    tri.triple
                )));
            }
            found = Some(cand);
        }
    }
    found.ok_or_else(|| {
        Error::invariant(format!(
            "triple {:?}: no cycle-free result (is the input cycle-free?)",
            tri.triple
        ))
    })
}

fn candidate_is_cycle_free(masks: &ClassMasks, tri: &Triangle, old: &[u8; 3], cand: &[u8; 3]) -> bool {
    // Class sizes are preserved, so each touched class is a tree iff connected.
    let mut classes = [u8::MAX; 3];
    let mut nclasses = 0;
    for &c in old.iter() {
        if !classes[..nclasses].contains(&c) {
            classes[nclasses] = c;
            nclasses += 1;
        }
    }
    classes[..nclasses].iter().all(|&k| {
        let mut toggles = [(0usize, 0usize); 3];
        let mut nt = 0;
        for s in 0..3 {
            if (old[s] == k) != (cand[s] == k) {
                toggles[nt] = tri.ends[s];
                nt += 1;
            }
        }
        nt == 0 || masks.connected_with(k as usize, &toggles[..nt])
    })
}

/// Applies the involution of triple `t` to the cycle-free partition `p`.
pub fn involution(p: &Partition, t: Triple) -> Result<Partition> {
    t.check_in(p.n())?;
    let table = p.table();
    let tri = Triangle::new(t, table);
    let masks = ClassMasks::new(p);
    let new = involve_raw(p.raw(), &masks, &tri)?;
    let mut raw: Box<[u8]> = p.raw().into();
    for s in 0..3 {
        raw[tri.edges[s].index()] = new[s];
    }
    Ok(Partition::from_raw(p.d(), raw))
}

/// All involution images of `p`, in [`all_triples`] order.
pub(crate) fn neighbors_raw(p: &Partition, triangles: &[Triangle]) -> Result<Vec<Partition>> {
    let masks = ClassMasks::new(p);
    triangles
        .iter()
        .map(|tri| {
            let new = involve_raw(p.raw(), &masks, tri)?;
            let mut raw: Box<[u8]> = p.raw().into();
            for s in 0..3 {
                raw[tri.edges[s].index()] = new[s];
            }
            Ok(Partition::from_raw(p.d(), raw))
        })
        .collect()
}

/// Packed keys of all involution images of `p` (`d <= 4`).
pub(crate) fn neighbor_keys(p: &Partition, triangles: &[Triangle], bits: usize) -> Result<Vec<u128>> {
    let masks = ClassMasks::new(p);
    let base = p.pack();
    let field = (1u128 << bits) - 1;
    triangles
        .iter()
        .map(|tri| {
            let new = involve_raw(p.raw(), &masks, tri)?;
            let mut key = base;
            for (e, c) in tri.edges.iter().zip(new) {
                let shift = bits * e.index();
                key = (key & !(field << shift)) | ((c as u128) << shift);
            }
            Ok(key)
        })
        .collect()
}

/// A sequence of triple involutions, applied first to last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvolutionWord {
    pub steps: Vec<Triple>,
}

impl InvolutionWord {
    pub fn new(steps: Vec<Triple>) -> Self {
        InvolutionWord { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the word to `p`, checking that every intermediate state is
    /// cycle-free.
    pub fn apply(&self, p: &Partition) -> Result<Partition> {
        let mut cur = p.clone();
        for &t in &self.steps {
            cur = involution(&cur, t)?;
            if !cur.is_cycle_free() {
                return Err(Error::invariant(format!(
                    "word step {t:?} produced a partition with a cycle"
                )));
            }
        }
        Ok(cur)
    }

    /// The same word with every triple relabeled through `sigma`.
    pub fn mapped(&self, sigma: &Perm) -> InvolutionWord {
        InvolutionWord::new(self.steps.iter().map(|t| t.mapped(sigma)).collect())
    }

    /// The inverse word (involutions applied in reverse order).
    pub fn reversed(&self) -> InvolutionWord {
        InvolutionWord::new(self.steps.iter().rev().copied().collect())
    }

    pub fn extend(&mut self, other: &InvolutionWord) {
        self.steps.extend_from_slice(&other.steps);
    }
}
