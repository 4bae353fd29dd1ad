use std::collections::HashMap;

use super::check_bfs_d;
use crate::error::{Error, Result};
use crate::involution::{neighbor_keys, InvolutionWord, Triangle};
use crate::par;
use crate::partition::{pack_bits, Partition};

// key -> (parent key, triangle index); the roots point at themselves
type Parents = HashMap<u128, (u128, u16)>;

struct Side {
    parents: Parents,
    frontier: Vec<u128>,
    depth: usize,
}

impl Side {
    fn new(root: u128) -> Self {
        Side {
            parents: HashMap::from([(root, (root, u16::MAX))]),
            frontier: vec![root],
            depth: 0,
        }
    }

    fn chain(&self, mut key: u128) -> Vec<u16> {
        let mut out = Vec::new();
        while let Some(&(parent, t)) = self.parents.get(&key) {
            if t == u16::MAX {
                break;
            }
            out.push(t);
            key = parent;
        }
        out
    }
}

/// A shortest involution word taking `p` to `q`, by bidirectional BFS that
/// expands whole layers of the smaller side. `max_states` bounds the total
/// number of stored states.
pub fn involution_path(p: &Partition, q: &Partition, max_states: Option<u64>) -> Result<InvolutionWord> {
    let d = p.d();
    if q.d() != d {
        return Err(Error::input("partitions have different d"));
    }
    check_bfs_d(d)?;
    if !p.is_cycle_free() || !q.is_cycle_free() {
        return Err(Error::input("both partitions must be cycle-free"));
    }
    let triangles = Triangle::all(d);
    let bits = pack_bits(d);
    let (kp, kq) = (p.pack(), q.pack());
    if kp == kq {
        return Ok(InvolutionWord::default());
    }
    let mut sides = [Side::new(kp), Side::new(kq)];
    loop {
        let s = if sides[0].frontier.len() <= sides[1].frontier.len() {
            0
        } else {
            1
        };
        if sides[s].frontier.is_empty() {
            return Err(Error::NotFound("the partitions are not involution equivalent".into()));
        }
        let stored = (sides[0].parents.len() + sides[1].parents.len()) as u64;
        if max_states.is_some_and(|m| stored >= m) {
            return Err(Error::NotFound(format!("no word found within {stored} states")));
        }
        let expanded = par::map(&sides[s].frontier, |&k| {
            neighbor_keys(&Partition::unpack(d, k), &triangles, bits)
        });
        let (this, other) = {
            let (a, b) = sides.split_at_mut(1);
            if s == 0 {
                (&mut a[0], &mut b[0])
            } else {
                (&mut b[0], &mut a[0])
            }
        };
        let mut next = Vec::new();
        let mut best: Option<(usize, u128)> = None;
        for (&parent, list) in this.frontier.iter().zip(expanded) {
            for (t, k) in list?.into_iter().enumerate() {
                if this.parents.contains_key(&k) {
                    continue;
                }
                this.parents.insert(k, (parent, t as u16));
                next.push(k);
                if other.parents.contains_key(&k) {
                    let len = this.depth + 1 + other.chain(k).len();
                    if best.is_none_or(|(b, _)| len < b) {
                        best = Some((len, k));
                    }
                }
            }
        }
        this.frontier = next;
        this.depth += 1;
        if let Some((_, meet)) = best {
            let mut from_p = sides[0].chain(meet);
            from_p.reverse();
            let to_q = sides[1].chain(meet);
            let steps = from_p
                .into_iter()
                .chain(to_q)
                .map(|t| triangles[t as usize].triple)
                .collect();
            return Ok(InvolutionWord::new(steps));
        }
    }
}
