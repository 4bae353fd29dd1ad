//! Exhaustive enumeration of cycle-free partitions by backtracking.
//!
//! Edges are assigned in EdgeId order and colors in ascending order. A color
//! is rejected when it would close a cycle in its class or push the class past
//! `2d - 1` edges, and when some endpoint could no longer touch every class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::edge::EdgeTable;
use crate::error::{Error, Result};
use crate::forest::is_forest;
use crate::par;
use crate::partition::{check_d, checked_id, Partition};

/// A partial color assignment that enumerated partitions must extend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedAssignment {
    d: usize,
    // 0-based color per EdgeId
    entries: Vec<Option<u8>>,
}

impl FixedAssignment {
    pub fn new(d: usize) -> Result<Self> {
        check_d(d)?;
        Ok(FixedAssignment {
            d,
            entries: vec![None; EdgeTable::get(d).len()],
        })
    }

    /// Fixes every edge of `edges` to color `k`.
    pub fn with_class(d: usize, k: u8, edges: &[(u8, u8)]) -> Result<Self> {
        let mut f = FixedAssignment::new(d)?;
        for &(i, j) in edges {
            f.set(i, j, k)?;
        }
        f.validate()?;
        Ok(f)
    }

    /// Fixes the edge `{i, j}` to the 1-based color `c`.
    pub fn set(&mut self, i: u8, j: u8, c: u8) -> Result<()> {
        let e = checked_id(EdgeTable::get(self.d), i, j)?;
        if c == 0 || c as usize > self.d {
            return Err(Error::input(format!("color {c} outside 1..={}", self.d)));
        }
        match self.entries[e.index()] {
            Some(old) if old != c - 1 => Err(Error::input(format!(
                "edge ({i},{j}) fixed to both {} and {c}",
                old + 1
            ))),
            _ => {
                self.entries[e.index()] = Some(c - 1);
                Ok(())
            }
        }
    }

    /// Parses a comma-free list such as `"1-2:1 3-4:2"`.
    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let mut f = FixedAssignment::new(d)?;
        for item in text.split_whitespace() {
            let bad = || Error::input(format!("bad fixed edge {item:?}, expected i-j:c"));
            let (edge, color) = item.split_once(':').ok_or_else(bad)?;
            let (i, j) = edge.split_once('-').ok_or_else(bad)?;
            let i: u8 = i.parse().map_err(|_| bad())?;
            let j: u8 = j.parse().map_err(|_| bad())?;
            let c: u8 = color.parse().map_err(|_| bad())?;
            f.set(i, j, c)?;
        }
        f.validate()?;
        Ok(f)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// 1-based color fixed for EdgeId index `e`, if any.
    pub fn get(&self, e: usize) -> Option<u8> {
        self.entries[e].map(|c| c + 1)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every fixed class must be a forest with at most `2d - 1` edges.
    pub fn validate(&self) -> Result<()> {
        let table = EdgeTable::get(self.d);
        let n = 2 * self.d;
        for k in 0..self.d as u8 {
            let edges: Vec<(u8, u8)> = self
                .entries
                .iter()
                .zip(table.pairs())
                .filter(|(c, _)| **c == Some(k))
                .map(|(_, &p)| p)
                .collect();
            if edges.len() > n - 1 {
                return Err(Error::input(format!(
                    "color {} fixed on {} edges, more than {}",
                    k + 1,
                    edges.len(),
                    n - 1
                )));
            }
            if !is_forest(&edges, n) {
                return Err(Error::input(format!("fixed edges of color {} contain a cycle", k + 1)));
            }
        }
        Ok(())
    }
}

/// The backtracking search. `end` is the number of edges assigned before a
/// leaf is reported; prefix searches stop early.
#[derive(Clone)]
struct Search<R> {
    d: usize,
    n: usize,
    end: usize,
    start: usize,
    pairs: &'static [(u8, u8)],
    fixed: Vec<Option<u8>>,
    colors: Vec<u8>,
    // component label per (color, vertex)
    labels: Vec<u8>,
    saved: Vec<[u8; 32]>,
    deg: Vec<u8>,
    rem: Vec<u8>,
    sizes: Vec<u8>,
    order: Vec<Vec<u8>>,
    cursor: Vec<u8>,
    pos: usize,
    done: bool,
    // placement attempts left before `advance` gives up
    budget: u64,
    rng: Option<R>,
}

/// Placeholder RNG type for deterministic searches.
type NoRng = rand::rngs::mock::StepRng;

impl<R: Rng> Search<R> {
    fn new(d: usize, fixed: Option<&FixedAssignment>, end: Option<usize>, rng: Option<R>) -> Result<Self> {
        check_d(d)?;
        let table = EdgeTable::get(d);
        let m = table.len();
        let n = 2 * d;
        let fixed = match fixed {
            Some(f) if f.d != d => {
                return Err(Error::input(format!(
                    "fixed assignment for d = {} used with d = {d}",
                    f.d
                )))
            }
            Some(f) => {
                f.validate()?;
                f.entries.clone()
            }
            None => vec![None; m],
        };
        let mut labels = vec![0u8; d * n];
        for k in 0..d {
            for v in 0..n {
                labels[k * n + v] = v as u8;
            }
        }
        let mut s = Search {
            d,
            n,
            end: end.unwrap_or(m).min(m),
            start: 0,
            pairs: table.pairs(),
            fixed,
            colors: vec![0; m],
            labels,
            saved: vec![[0; 32]; m],
            deg: vec![0; d * n],
            rem: vec![(n - 1) as u8; n],
            sizes: vec![0; d],
            order: vec![(0..d as u8).collect(); m],
            cursor: vec![0; m + 1],
            pos: 0,
            done: false,
            budget: u64::MAX,
            rng,
        };
        s.enter_level();
        Ok(s)
    }

    /// Pre-places a prefix of 0-based colors; fails if it is not admissible.
    fn with_prefix(mut self, prefix: &[u8]) -> Option<Self> {
        for (e, &c) in prefix.iter().enumerate() {
            if !self.place(e, c) {
                return None;
            }
        }
        self.pos = prefix.len();
        self.start = prefix.len();
        self.enter_level();
        Some(self)
    }

    fn enter_level(&mut self) {
        if self.pos < self.end {
            self.cursor[self.pos] = 0;
            if let Some(rng) = self.rng.as_mut() {
                self.order[self.pos].shuffle(rng);
            }
        }
    }

    fn place(&mut self, e: usize, c: u8) -> bool {
        let (n, k) = (self.n, c as usize);
        if self.sizes[k] as usize == n - 1 {
            return false;
        }
        if let Some(f) = self.fixed[e] {
            if f != c {
                return false;
            }
        }
        let (a, b) = self.pairs[e];
        let (a, b) = (a as usize - 1, b as usize - 1);
        let row = &mut self.labels[k * n..(k + 1) * n];
        let (la, lb) = (row[a], row[b]);
        if la == lb {
            return false;
        }
        self.saved[e][..n].copy_from_slice(row);
        for l in row.iter_mut() {
            if *l == lb {
                *l = la;
            }
        }
        self.sizes[k] += 1;
        self.deg[k * n + a] += 1;
        self.deg[k * n + b] += 1;
        self.rem[a] -= 1;
        self.rem[b] -= 1;
        self.colors[e] = c;
        if !self.coverable(a) || !self.coverable(b) {
            self.unplace(e);
            return false;
        }
        true
    }

    // Every class needs an edge at `v`; enough unassigned edges must remain.
    fn coverable(&self, v: usize) -> bool {
        let missing = (0..self.d).filter(|&k| self.deg[k * self.n + v] == 0).count();
        missing <= self.rem[v] as usize
    }

    fn unplace(&mut self, e: usize) {
        let n = self.n;
        let k = self.colors[e] as usize;
        let (a, b) = self.pairs[e];
        let (a, b) = (a as usize - 1, b as usize - 1);
        self.labels[k * n..(k + 1) * n].copy_from_slice(&self.saved[e][..n]);
        self.sizes[k] -= 1;
        self.deg[k * n + a] -= 1;
        self.deg[k * n + b] -= 1;
        self.rem[a] += 1;
        self.rem[b] += 1;
    }

    fn backtrack(&mut self) {
        if self.pos == self.start {
            self.done = true;
        } else {
            self.pos -= 1;
            self.unplace(self.pos);
        }
    }

    /// Advances to the next leaf; its colors are `self.colors[..self.end]`.
    fn advance(&mut self) -> bool {
        loop {
            if self.done {
                return false;
            }
            if self.pos == self.end {
                // resume below the leaf on the next call
                self.backtrack();
                continue;
            }
            let e = self.pos;
            let mut placed = false;
            while (self.cursor[e] as usize) < self.d {
                if self.budget == 0 {
                    return false;
                }
                self.budget -= 1;
                let c = self.order[e][self.cursor[e] as usize];
                self.cursor[e] += 1;
                if self.place(e, c) {
                    placed = true;
                    break;
                }
            }
            if placed {
                self.pos += 1;
                self.enter_level();
                if self.pos == self.end {
                    return true;
                }
            } else {
                self.backtrack();
            }
        }
    }

    fn leaf(&self) -> &[u8] {
        &self.colors[..self.end]
    }
}

/// Lazily enumerates every cycle-free partition extending `fixed`.
pub struct Enumeration {
    search: Search<NoRng>,
}

impl Iterator for Enumeration {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.search.advance() {
            Some(Partition::from_raw(self.search.d, self.search.leaf().into()))
        } else {
            None
        }
    }
}

/// Streams all cycle-free `d`-partitions extending `fixed`, in lexicographic
/// order of their color vectors.
pub fn enumerate(d: usize, fixed: Option<&FixedAssignment>) -> Result<Enumeration> {
    Ok(Enumeration {
        search: Search::new(d, fixed, None, None)?,
    })
}

/// Admissible color prefixes of a given depth, in order.
fn prefixes(d: usize, fixed: Option<&FixedAssignment>, depth: usize) -> Result<Vec<Vec<u8>>> {
    let mut s: Search<NoRng> = Search::new(d, fixed, Some(depth), None)?;
    let mut out = Vec::new();
    if s.end == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    while s.advance() {
        out.push(s.leaf().to_vec());
    }
    Ok(out)
}

fn split_depth(d: usize) -> usize {
    let m = EdgeTable::get(d).len();
    // enough subtrees to keep every worker busy, few enough to stay cheap
    m.min(if d <= 2 { 2 } else { 2 * d + 2 })
}

fn subtree(d: usize, fixed: Option<&FixedAssignment>, prefix: &[u8]) -> Option<Search<NoRng>> {
    Search::new(d, fixed, None, None).ok()?.with_prefix(prefix)
}

/// Visits every partition extending `fixed` with `f`, splitting the search tree
/// at a prefix depth so subtrees run in parallel. The result of subtree `i` is
/// `f` folded over its leaves; results are returned in prefix order.
pub fn fold_subtrees<A, F>(d: usize, fixed: Option<&FixedAssignment>, init: A, f: F) -> Result<Vec<A>>
where
    A: Send + Clone + Sync,
    F: Fn(&mut A, &[u8]) + Sync + Send,
{
    check_d(d)?;
    let pre = prefixes(d, fixed, split_depth(d))?;
    Ok(par::map(&pre, |prefix| {
        let mut acc = init.clone();
        if let Some(mut s) = subtree(d, fixed, prefix) {
            if s.pos == s.end {
                f(&mut acc, s.leaf());
            } else {
                while s.advance() {
                    f(&mut acc, s.leaf());
                }
            }
        }
        acc
    }))
}

/// All cycle-free partitions extending `fixed`, in the same order as
/// [`enumerate`], computed in parallel.
pub fn enumerate_all(d: usize, fixed: Option<&FixedAssignment>) -> Result<Vec<Partition>> {
    let parts = fold_subtrees(d, fixed, Vec::new(), |acc: &mut Vec<Partition>, leaf| {
        acc.push(Partition::from_raw(d, leaf.into()))
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Number of cycle-free partitions extending `fixed`.
pub fn count(d: usize, fixed: Option<&FixedAssignment>) -> Result<u64> {
    let parts = fold_subtrees(d, fixed, 0u64, |acc: &mut u64, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

/// A random cycle-free completion of `fixed`, found by backtracking with a
/// random color order at every edge. Returns `None` when no completion exists.
///
/// A randomized search can stall in a dead subtree, so it restarts with fresh
/// orders under a doubling budget; the last attempt is always complete.
pub fn sample_completion<R: Rng>(d: usize, fixed: Option<&FixedAssignment>, rng: &mut R) -> Result<Option<Partition>> {
    let mut budget = 4096u64;
    loop {
        let local = rand_chacha::ChaCha8Rng::from_rng(&mut *rng).map_err(|e| Error::input(e.to_string()))?;
        let mut s = Search::new(d, fixed, None, Some(local))?;
        s.budget = budget;
        if s.advance() {
            return Ok(Some(Partition::from_raw(d, s.leaf().into())));
        }
        if s.done {
            return Ok(None);
        }
        budget = budget.saturating_mul(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: all d^m total assignments filtered by cycle-freeness.
    fn naive(d: usize) -> Vec<Partition> {
        let m = EdgeTable::get(d).len();
        let total = (d as u64).pow(m as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut x = code;
            let mut colors = vec![0u8; m];
            for e in (0..m).rev() {
                colors[e] = (x % d as u64) as u8 + 1;
                x /= d as u64;
            }
            let p = Partition::new(d, &colors).unwrap();
            if p.is_cycle_free() {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn d2_matches_naive_oracle() {
        let fast: Vec<Partition> = enumerate(2, None).unwrap().collect();
        assert_eq!(fast.len(), 12);
        assert_eq!(fast, naive(2));
    }

    #[test]
    fn d1_single_partition() {
        let all: Vec<Partition> = enumerate(1, None).unwrap().collect();
        assert_eq!(all, vec![crate::build_e(1)]);
        assert_eq!(count(1, None).unwrap(), 1);
        assert_eq!(enumerate_all(1, None).unwrap().len(), 1);
    }

    #[test]
    fn fixed_first_edge_halves_d2() {
        let mut f = FixedAssignment::new(2).unwrap();
        f.set(1, 2, 1).unwrap();
        let all: Vec<Partition> = enumerate(2, Some(&f)).unwrap().collect();
        let oracle: Vec<Partition> = naive(2).into_iter().filter(|p| p.color(1, 2) == 1).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all, oracle);
    }

    #[test]
    fn parallel_matches_sequential_d3() {
        let seq: Vec<Partition> = enumerate(3, None).unwrap().collect();
        assert_eq!(seq.len(), 66240);
        assert_eq!(enumerate_all(3, None).unwrap(), seq);
        assert_eq!(count(3, None).unwrap(), 66240);
        assert!(seq.windows(2).all(|w| w[0].colors() < w[1].colors()));
    }

    #[test]
    fn fully_fixed_assignment() {
        let e2 = crate::build_e(2);
        let mut f = FixedAssignment::new(2).unwrap();
        for (e, &(i, j)) in EdgeTable::get(2).pairs().iter().enumerate() {
            f.set(i, j, e2.colors()[e]).unwrap();
        }
        assert_eq!(enumerate(2, Some(&f)).unwrap().collect::<Vec<_>>(), vec![e2.clone()]);
        assert_eq!(enumerate_all(2, Some(&f)).unwrap(), vec![e2]);
    }

    #[test]
    fn inconsistent_fixed_assignments() {
        let mut f = FixedAssignment::new(2).unwrap();
        f.set(1, 2, 1).unwrap();
        assert!(f.set(1, 2, 2).is_err());
        assert!(f.set(1, 2, 3).is_err());
        assert!(FixedAssignment::with_class(2, 1, &[(1, 2), (2, 3), (1, 3)]).is_err());
        assert!(FixedAssignment::with_class(2, 1, &[(1, 2), (2, 3), (3, 4), (1, 4)]).is_err());
        assert!(FixedAssignment::parse(2, "1-2:1 junk").is_err());
        assert_eq!(FixedAssignment::parse(2, "1-2:1 3-4:2").unwrap().len(), 2);
        let f3 = FixedAssignment::new(3).unwrap();
        assert!(enumerate(2, Some(&f3)).is_err());
    }

    #[test]
    fn samples_extend_fixed_class() {
        let path: Vec<(u8, u8)> = (1..8).map(|i| (i, i + 1)).collect();
        let f = FixedAssignment::with_class(4, 4, &path).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = sample_completion(4, Some(&f), &mut rng).unwrap().unwrap();
            assert!(p.is_cycle_free());
            assert_eq!(p.class_edges(4), path);
        }
    }

    #[test]
    fn samples_vary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..50 {
            seen.insert(sample_completion(3, None, &mut rng).unwrap().unwrap());
        }
        assert!(seen.len() > 10);
    }

    #[test]
    fn sampling_large_d_terminates() {
        for d in [6, 8] {
            for seed in 0..20 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = sample_completion(d, None, &mut rng).unwrap().unwrap();
                assert!(p.is_cycle_free());
            }
        }
    }

    #[test]
    fn out_of_range_d_is_an_error() {
        assert!(count(0, None).is_err());
        assert!(enumerate_all(17, None).is_err());
        assert!(enumerate(0, None).is_err());
    }
}
