//! The partition data model: one color per edge of `K_{2d}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edge::{EdgeId, EdgeTable, MAX_D};
use crate::error::{Error, Result};
use crate::forest::masks_connected;

/// A total `d`-coloring of the edges of `K_{2d}`.
///
/// Colors are stored 0-based in EdgeId order; every accessor speaks 1-based
/// colors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    d: u8,
    colors: Box<[u8]>,
}

impl Partition {
    /// Builds a partition from 1-based colors listed in EdgeId order.
    pub fn new(d: usize, colors: &[u8]) -> Result<Self> {
        check_d(d)?;
        let table = EdgeTable::get(d);
        if colors.len() != table.len() {
            return Err(Error::input(format!(
                "expected {} colors for d = {d}, got {}",
                table.len(),
                colors.len()
            )));
        }
        let mut raw = Vec::with_capacity(colors.len());
        for (e, &c) in colors.iter().enumerate() {
            if c == 0 || c as usize > d {
                let (i, j) = table.pairs()[e];
                return Err(Error::input(format!("edge ({i},{j}) has color {c} outside 1..={d}")));
            }
            raw.push(c - 1);
        }
        Ok(Partition {
            d: d as u8,
            colors: raw.into_boxed_slice(),
        })
    }

    /// Builds a partition from its color classes; `classes[k]` lists the edges of
    /// color `k + 1`. Every edge must appear exactly once.
    pub fn from_classes(d: usize, classes: &[Vec<(u8, u8)>]) -> Result<Self> {
        check_d(d)?;
        if classes.len() != d {
            return Err(Error::input(format!("expected {d} classes, got {}", classes.len())));
        }
        let table = EdgeTable::get(d);
        let mut colors = vec![0u8; table.len()];
        for (k, class) in classes.iter().enumerate() {
            for &(a, b) in class {
                let e = checked_id(table, a, b)?;
                if colors[e.index()] != 0 {
                    return Err(Error::input(format!("edge ({a},{b}) listed twice")));
                }
                colors[e.index()] = k as u8 + 1;
            }
        }
        if let Some(e) = colors.iter().position(|&c| c == 0) {
            let (i, j) = table.pairs()[e];
            return Err(Error::input(format!("edge ({i},{j}) has no color")));
        }
        Partition::new(d, &colors)
    }

    pub(crate) fn from_raw(d: usize, raw: Box<[u8]>) -> Self {
        debug_assert_eq!(raw.len(), EdgeTable::get(d).len());
        debug_assert!(raw.iter().all(|&c| (c as usize) < d));
        Partition {
            d: d as u8,
            colors: raw,
        }
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    /// Number of vertices, `2d`.
    pub fn n(&self) -> usize {
        2 * self.d as usize
    }

    pub fn num_edges(&self) -> usize {
        self.colors.len()
    }

    pub fn table(&self) -> &'static EdgeTable {
        EdgeTable::get(self.d())
    }

    /// 1-based color of the edge `{i, j}`.
    pub fn color(&self, i: u8, j: u8) -> u8 {
        self.colors[self.table().id(i, j).index()] + 1
    }

    pub fn color_at(&self, e: EdgeId) -> u8 {
        self.colors[e.index()] + 1
    }

    /// 1-based colors in EdgeId order.
    pub fn colors(&self) -> Vec<u8> {
        self.colors.iter().map(|c| c + 1).collect()
    }

    /// 0-based colors in EdgeId order.
    pub(crate) fn raw(&self) -> &[u8] {
        &self.colors
    }

    /// Edges of color `k` (1-based), in EdgeId order.
    pub fn class_edges(&self, k: u8) -> Vec<(u8, u8)> {
        let pairs = self.table().pairs();
        self.colors
            .iter()
            .zip(pairs)
            .filter(|(&c, _)| c + 1 == k)
            .map(|(_, &p)| p)
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.d()];
        for &c in self.colors.iter() {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Returns a copy with the given edges recolored (1-based colors).
    pub fn with_colors(&self, changes: &[(EdgeId, u8)]) -> Result<Partition> {
        let mut raw = self.colors.clone();
        for &(e, c) in changes {
            if c == 0 || c as usize > self.d() || e.index() >= raw.len() {
                return Err(Error::input(format!("bad recoloring ({}, {c})", e.0)));
            }
            raw[e.index()] = c - 1;
        }
        Ok(Partition::from_raw(self.d(), raw))
    }

    /// True iff every color class is a forest.
    ///
    /// A cycle-free partition has every class of size exactly `2d - 1`; this is
    /// asserted rather than assumed.
    pub fn is_cycle_free(&self) -> bool {
        let masks = ClassMasks::new(self);
        let sizes = self.class_sizes();
        let n = self.n();
        let forest = (0..self.d()).all(|k| {
            // n - 1 edges: forest iff spanning tree iff connected
            if sizes[k] == n - 1 {
                masks_connected(masks.class(k), n)
            } else {
                crate::forest::is_forest(&self.class_edges(k as u8 + 1), n)
            }
        });
        if forest {
            assert!(
                sizes.iter().all(|&s| s == n - 1),
                "cycle-free partition with class sizes {sizes:?}"
            );
        }
        forest
    }

    /// Packs the colors into a `u128` at `ceil(log2 d)` bits per edge.
    /// Only defined for `d <= 4`.
    pub fn pack(&self) -> u128 {
        let bits = pack_bits(self.d());
        debug_assert!(bits * self.colors.len() <= 128);
        let mut key = 0u128;
        for (e, &c) in self.colors.iter().enumerate() {
            key |= (c as u128) << (bits * e);
        }
        key
    }

    pub fn unpack(d: usize, key: u128) -> Partition {
        let bits = pack_bits(d);
        let m = EdgeTable::get(d).len();
        let mask = (1u128 << bits) - 1;
        let raw: Box<[u8]> = (0..m).map(|e| ((key >> (bits * e)) & mask) as u8).collect();
        Partition::from_raw(d, raw)
    }

    /// Text form: a `d=<d>` header, then one `i j c` line per edge in EdgeId order.
    pub fn to_text(&self) -> String {
        let mut out = format!("d={}\n", self.d);
        for (&(i, j), &c) in self.table().pairs().iter().zip(self.colors.iter()) {
            out.push_str(&format!("{i} {j} {}\n", c + 1));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::input("empty partition text"))?;
        let d: usize = header
            .strip_prefix("d=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::input(format!("bad header {header:?}, expected d=<d>")))?;
        check_d(d)?;
        let table = EdgeTable::get(d);
        let mut colors = vec![0u8; table.len()];
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<u8>> = if fields.len() == 3 {
                fields.iter().map(|f| f.parse().ok()).collect()
            } else {
                None
            };
            let [i, j, c] = parsed
                .as_deref()
                .and_then(|v| <[u8; 3]>::try_from(v).ok())
                .ok_or_else(|| Error::input(format!("bad edge line {line:?}")))?;
            if i >= j {
                return Err(Error::input(format!("edge line {line:?} needs i < j")));
            }
            let e = checked_id(table, i, j)?;
            if colors[e.index()] != 0 {
                return Err(Error::input(format!("edge ({i},{j}) listed twice")));
            }
            if c == 0 || c as usize > d {
                return Err(Error::input(format!("color {c} outside 1..={d}")));
            }
            colors[e.index()] = c;
        }
        if let Some(e) = colors.iter().position(|&c| c == 0) {
            let (i, j) = table.pairs()[e];
            return Err(Error::input(format!("edge ({i},{j}) missing")));
        }
        Partition::new(d, &colors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition(d={}; ", self.d)?;
        for k in 1..=self.d {
            let edges: Vec<String> = self.class_edges(k).iter().map(|(i, j)| format!("{i}{j}")).collect();
            write!(f, "{}{}", if k > 1 { " | " } else { "" }, edges.join(","))?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    d: usize,
    colors: Vec<u8>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson {
            d: self.d(),
            colors: self.colors(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(de)?;
        Partition::new(raw.d, &raw.colors).map_err(serde::de::Error::custom)
    }
}

/// Per-class neighbor masks: `class(k)[v]` has bit `u` set iff `{u, v}` has
/// 0-based color `k` (vertices 0-based).
#[derive(Clone, Debug)]
pub(crate) struct ClassMasks {
    n: usize,
    adj: Vec<u32>,
}

impl ClassMasks {
    pub(crate) fn new(p: &Partition) -> Self {
        Self::from_raw(p.d(), p.raw())
    }

    pub(crate) fn from_raw(d: usize, raw: &[u8]) -> Self {
        let table = EdgeTable::get(d);
        let n = 2 * d;
        let mut adj = vec![0u32; d * n];
        for (&(i, j), &c) in table.pairs().iter().zip(raw) {
            let (a, b) = (i as usize - 1, j as usize - 1);
            adj[c as usize * n + a] |= 1 << b;
            adj[c as usize * n + b] |= 1 << a;
        }
        ClassMasks { n, adj }
    }

    #[inline]
    pub(crate) fn class(&self, k: usize) -> &[u32] {
        &self.adj[k * self.n..(k + 1) * self.n]
    }

    /// Degree of 0-based vertex `v` in 0-based class `k`.
    #[inline]
    pub(crate) fn degree(&self, k: usize, v: usize) -> u32 {
        self.adj[k * self.n + v].count_ones()
    }

    /// Whether class `k` stays connected after toggling the listed 0-based edges.
    #[inline]
    pub(crate) fn connected_with(&self, k: usize, toggles: &[(usize, usize)]) -> bool {
        let mut local = [0u32; 32];
        local[..self.n].copy_from_slice(self.class(k));
        for &(a, b) in toggles {
            local[a] ^= 1 << b;
            local[b] ^= 1 << a;
        }
        masks_connected(&local[..self.n], self.n)
    }
}

pub(crate) fn pack_bits(d: usize) -> usize {
    let mut bits = 1;
    while (1usize << bits) < d {
        bits += 1;
    }
    bits
}

pub(crate) fn check_d(d: usize) -> Result<()> {
    if d == 0 || d > MAX_D {
        return Err(Error::input(format!("d = {d} outside 1..={MAX_D}")));
    }
    Ok(())
}

pub(crate) fn checked_id(table: &EdgeTable, a: u8, b: u8) -> Result<EdgeId> {
    let n = table.n() as u8;
    if a == b || a == 0 || b == 0 || a > n || b > n {
        return Err(Error::input(format!("({a},{b}) is not an edge of K_{n}")));
    }
    Ok(table.id(a, b))
}

/// The reference partition `E_d`.
///
/// With `S_a = {2a-1, 2a}`, an edge `(i, j)`, `i < j`, of even sum gets color `a`
/// where `i` is in `S_a`; an edge of odd sum gets color `b` where `j` is in `S_b`.
/// Every class is a twin-star centered on `{2k-1, 2k}`.
pub fn build_e(d: usize) -> Partition {
    let table = EdgeTable::get(d);
    let raw: Box<[u8]> = table
        .pairs()
        .iter()
        .map(|&(i, j)| {
            let block = |v: u8| (v - 1) / 2;
            if (i + j) % 2 == 0 {
                block(i)
            } else {
                block(j)
            }
        })
        .collect();
    Partition::from_raw(d, raw)
}
