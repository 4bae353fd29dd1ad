//! Breadth-first exploration of involution orbits.
//!
//! States are colors packed into a `u128` at `ceil(log2 d)` bits per edge, so
//! explicit searches support `d <= 4`. Each layer's neighbors are computed in
//! parallel and inserted sequentially in frontier order, which makes sizes,
//! depths and checkpoints independent of the worker count.

pub mod checkpoint;
mod classes;
mod path;
mod sign;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_packed;
use crate::error::{Error, Result};
use crate::involution::{neighbor_keys, neighbors_raw, Triangle};
use crate::par;
use crate::partition::{pack_bits, Partition};

pub use classes::{verify_transitive, weak_classes, Transitivity, WeakClasses};
pub use path::involution_path;
pub use sign::SignTable;

/// Largest `d` whose states fit the packed key.
pub const MAX_BFS_D: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSet {
    InvolutionsOnly,
    InvolutionsPlusSymmetry,
}

/// Search limits; `None` means unbounded. Both limits are checked between
/// layers, so a stopped search holds whole layers only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_states: Option<u64>,
    pub max_depth: Option<u32>,
    /// Write a checkpoint every this many layers (when a path is given).
    pub checkpoint_interval: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub start: Partition,
    pub generator_set: GeneratorSet,
    pub size: u64,
    /// Whether no generator joins two states of equal BFS parity. Only
    /// meaningful for [`GeneratorSet::InvolutionsOnly`].
    pub parity_consistent: Option<bool>,
    pub diameter_reached: u32,
    pub elapsed_secs: f64,
    pub checkpoint_ref: Option<String>,
    /// False when a limit stopped the search.
    pub complete: bool,
}

pub(crate) struct Explorer {
    d: usize,
    start: Partition,
    generators: GeneratorSet,
    triangles: Vec<Triangle>,
    bits: usize,
    pub(crate) visited: HashMap<u128, u8>,
    frontier: Vec<u128>,
    depth: u32,
    parity_ok: bool,
    elapsed_before: f64,
}

pub(crate) fn check_bfs_d(d: usize) -> Result<()> {
    if d > MAX_BFS_D {
        return Err(Error::input(format!(
            "explicit searches support d <= {MAX_BFS_D}, got {d}"
        )));
    }
    Ok(())
}

impl Explorer {
    pub(crate) fn new(start: &Partition, generators: GeneratorSet) -> Result<Self> {
        let d = start.d();
        check_bfs_d(d)?;
        if !start.is_cycle_free() {
            return Err(Error::input("orbit start is not cycle-free"));
        }
        let key = match generators {
            GeneratorSet::InvolutionsOnly => start.pack(),
            GeneratorSet::InvolutionsPlusSymmetry => canonical_packed(start),
        };
        Ok(Explorer {
            d,
            start: start.clone(),
            generators,
            triangles: Triangle::all(d),
            bits: pack_bits(d),
            visited: HashMap::from([(key, 0)]),
            frontier: vec![key],
            depth: 0,
            parity_ok: true,
            elapsed_before: 0.0,
        })
    }

    fn from_snapshot(s: checkpoint::Snapshot) -> Result<Self> {
        let start = Partition::new(s.head.d, &s.head.start)
            .map_err(|e| Error::Checkpoint(format!("bad start partition: {e}")))?;
        let mut ex = Explorer::new(&start, s.head.generator_set)?;
        ex.visited = s.visited.into_iter().collect();
        ex.frontier = s.frontier;
        ex.depth = s.head.depth;
        ex.parity_ok = s.head.parity_consistent;
        ex.elapsed_before = s.head.elapsed_secs;
        Ok(ex)
    }

    fn snapshot(&self, elapsed: f64) -> checkpoint::Snapshot {
        let mut visited: Vec<(u128, u8)> = self.visited.iter().map(|(&k, &p)| (k, p)).collect();
        visited.sort_unstable();
        checkpoint::Snapshot {
            head: checkpoint::Head {
                d: self.d,
                start: self.start.colors(),
                generator_set: self.generators,
                depth: self.depth,
                parity_consistent: self.parity_ok,
                elapsed_secs: elapsed,
            },
            visited,
            frontier: self.frontier.clone(),
        }
    }

    fn neighbors(&self, key: u128) -> Result<Vec<u128>> {
        let p = Partition::unpack(self.d, key);
        match self.generators {
            GeneratorSet::InvolutionsOnly => neighbor_keys(&p, &self.triangles, self.bits),
            GeneratorSet::InvolutionsPlusSymmetry => Ok(neighbors_raw(&p, &self.triangles)?
                .iter()
                .map(canonical_packed)
                .collect()),
        }
    }

    /// Runs until the orbit is exhausted or a limit is hit.
    pub(crate) fn run(&mut self, limits: &Limits, checkpoint: Option<&Path>) -> Result<OrbitReport> {
        let clock = Instant::now();
        let mut layers = 0u32;
        let complete = loop {
            if self.frontier.is_empty() {
                break true;
            }
            if limits.max_depth.is_some_and(|m| self.depth >= m)
                || limits.max_states.is_some_and(|m| self.visited.len() as u64 >= m)
            {
                break false;
            }
            let expanded = par::map(&self.frontier, |&k| self.neighbors(k));
            let child = ((self.depth + 1) % 2) as u8;
            let mut next = Vec::new();
            for list in expanded {
                for k in list? {
                    match self.visited.get(&k) {
                        Some(&parity) => {
                            if parity != child {
                                self.parity_ok = false;
                            }
                        }
                        None => {
                            self.visited.insert(k, child);
                            next.push(k);
                        }
                    }
                }
            }
            self.frontier = next;
            if !self.frontier.is_empty() {
                self.depth += 1;
            }
            layers += 1;
            if let (Some(path), Some(every)) = (checkpoint, limits.checkpoint_interval) {
                if every > 0 && layers.is_multiple_of(every) {
                    let elapsed = self.elapsed_before + clock.elapsed().as_secs_f64();
                    checkpoint::save(path, &self.snapshot(elapsed))?;
                }
            }
        };
        let elapsed = self.elapsed_before + clock.elapsed().as_secs_f64();
        if let Some(path) = checkpoint {
            checkpoint::save(path, &self.snapshot(elapsed))?;
        }
        Ok(OrbitReport {
            start: self.start.clone(),
            generator_set: self.generators,
            size: self.visited.len() as u64,
            parity_consistent: match self.generators {
                GeneratorSet::InvolutionsOnly => Some(self.parity_ok),
                GeneratorSet::InvolutionsPlusSymmetry => None,
            },
            diameter_reached: self.depth,
            elapsed_secs: elapsed,
            checkpoint_ref: checkpoint.map(|p| p.display().to_string()),
            complete,
        })
    }
}

/// Explores the closure of `start` under every triple involution (and, with
/// [`GeneratorSet::InvolutionsPlusSymmetry`], under relabeling, by collapsing
/// states to canonical forms).
pub fn orbit_bfs(start: &Partition, generators: GeneratorSet, limits: &Limits) -> Result<OrbitReport> {
    Explorer::new(start, generators)?.run(limits, None)
}

/// Like [`orbit_bfs`], writing snapshots to `path` every
/// `limits.checkpoint_interval` layers and once at the end.
pub fn orbit_bfs_checkpointed(
    start: &Partition,
    generators: GeneratorSet,
    limits: &Limits,
    path: &Path,
) -> Result<OrbitReport> {
    Explorer::new(start, generators)?.run(limits, Some(path))
}

/// Continues a search from its checkpoint file.
pub fn resume(path: &Path, limits: &Limits) -> Result<OrbitReport> {
    Explorer::from_snapshot(checkpoint::load(path)?)?.run(limits, Some(path))
}

/// Default checkpoint file name for a search from `start` inside `dir`.
pub fn checkpoint_file(dir: &Path, start: &Partition, generators: GeneratorSet) -> PathBuf {
    let tag = match generators {
        GeneratorSet::InvolutionsOnly => "inv",
        GeneratorSet::InvolutionsPlusSymmetry => "sym",
    };
    dir.join(format!("orbit-d{}-{tag}-{:x}.ckpt", start.d(), start.pack()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::{all_triples, involution};
    use crate::partition::build_e;
    use std::collections::HashSet;

    #[test]
    fn e2_orbit_is_everything() {
        let r = orbit_bfs(&build_e(2), GeneratorSet::InvolutionsOnly, &Limits::default()).unwrap();
        assert_eq!(r.size, 12);
        assert!(r.complete);
        assert_eq!(r.parity_consistent, Some(true));
    }

    #[test]
    fn depth_one_counts_distinct_neighbors() {
        let e2 = build_e(2);
        let oracle: HashSet<Partition> = all_triples(2)
            .into_iter()
            .map(|t| involution(&e2, t).unwrap())
            .collect();
        let limits = Limits {
            max_depth: Some(1),
            ..Limits::default()
        };
        let r = orbit_bfs(&e2, GeneratorSet::InvolutionsOnly, &limits).unwrap();
        assert_eq!(r.size, 1 + oracle.len() as u64);
        assert!(r.size <= 5);
        assert!(!r.complete);
        assert_eq!(r.diameter_reached, 1);
    }

    #[test]
    fn symmetry_mode_collapses_d2() {
        let r = orbit_bfs(&build_e(2), GeneratorSet::InvolutionsPlusSymmetry, &Limits::default()).unwrap();
        assert_eq!(r.size, 1);
        assert_eq!(r.parity_consistent, None);
    }

    #[test]
    fn d1_single_state() {
        let r = orbit_bfs(&build_e(1), GeneratorSet::InvolutionsOnly, &Limits::default()).unwrap();
        assert_eq!(r.size, 1);
        assert_eq!(r.diameter_reached, 0);
    }

    #[test]
    fn refuses_large_d_and_cyclic_start() {
        assert!(orbit_bfs(&build_e(5), GeneratorSet::InvolutionsOnly, &Limits::default()).is_err());
        let bad = Partition::new(2, &[1, 1, 1, 1, 2, 2]).unwrap();
        assert!(orbit_bfs(&bad, GeneratorSet::InvolutionsOnly, &Limits::default()).is_err());
    }

    #[test]
    fn report_json_fields() {
        let r = orbit_bfs(&build_e(2), GeneratorSet::InvolutionsOnly, &Limits::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["generator_set"], "involutions_only");
        assert_eq!(v["size"], 12);
        assert!(v["checkpoint_ref"].is_null());
    }
}
