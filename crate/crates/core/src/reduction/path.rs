use serde::{Deserialize, Serialize};

use super::trace::ReductionTrace;
use crate::error::{Error, Result};
use crate::involution::Triple;
use crate::partition::Partition;
use crate::tree::Tree;

/// A path reduction together with the potential `(t, a)` observed before
/// every step and at the end (`a = 0` once the class is a path).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathReduction {
    pub trace: ReductionTrace,
    pub potentials: Vec<(usize, usize)>,
}

fn path_present(tree: &Tree, path: &[usize]) -> bool {
    path.windows(2).all(|w| tree.adj[w[0]].contains(&w[1]))
}

/// Turns class `class` of `p` into a path on `2d` vertices by involutions.
///
/// Each round takes a longest path `v_0 .. v_t` of the class (the previous one
/// while the length is unchanged and it survives), the branch vertex `v_a`
/// nearest `v_t` and its least off-path neighbor `w`, and applies
/// `(v_{t-1}, v_t, w)` when `t - a = 1`, otherwise `(v_a, v_{a+1}, w)`. The pair
/// `(t, a)` must grow lexicographically every round.
pub fn reduce_to_path(p: &Partition, class: u8) -> Result<ReductionTrace> {
    reduce_to_path_detailed(p, class).map(|r| r.trace)
}

pub fn reduce_to_path_detailed(p: &Partition, class: u8) -> Result<PathReduction> {
    if class == 0 || class as usize > p.d() {
        return Err(Error::input(format!("class {class} outside 1..={}", p.d())));
    }
    if !p.is_cycle_free() {
        return Err(Error::input("partition is not cycle-free"));
    }
    let n = p.n();
    let mut trace = ReductionTrace::new(p, class);
    let mut potentials: Vec<(usize, usize)> = Vec::new();
    let mut kept: Option<Vec<usize>> = None;
    loop {
        let tree = Tree::new(&trace.final_partition.class_edges(class), n)?;
        let fresh = tree.diameter_path();
        let t = fresh.len() - 1;
        let path = match kept.take() {
            Some(old) if old.len() == fresh.len() && path_present(&tree, &old) => old,
            _ => fresh,
        };
        let potential = if t == n - 1 {
            (t, 0)
        } else {
            let a = (1..t)
                .rev()
                .find(|&i| tree.adj[path[i]].len() >= 3)
                .ok_or_else(|| Error::invariant("a non-path tree has no branch vertex on a longest path"))?;
            (t, a)
        };
        if let Some(&prev) = potentials.last() {
            if potential <= prev {
                return Err(Error::invariant(format!(
                    "path potential did not increase: {prev:?} -> {potential:?}"
                )));
            }
        }
        potentials.push(potential);
        if t == n - 1 {
            break;
        }
        let a = potential.1;
        let w = *tree.adj[path[a]]
            .iter()
            .find(|&&x| x != path[a - 1] && x != path[a + 1])
            .expect("branch vertex has an off-path neighbor");
        let (u, v) = if t - a == 1 {
            (path[t - 1], path[t])
        } else {
            (path[a], path[a + 1])
        };
        let triple = Triple::sorted(u as u8 + 1, v as u8 + 1, w as u8 + 1)?;
        trace.push_inv(triple)?;
        kept = Some(path);
    }
    Ok(PathReduction { trace, potentials })
}
