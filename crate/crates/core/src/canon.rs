//! Canonical forms under vertex and color relabeling.
//!
//! Vertices are refined by a color-blind signature (per class, the sorted
//! labels of the neighbors; the class lists themselves sorted), then the
//! first non-singleton cell is individualized vertex by vertex. Every leaf of
//! that search fixes a vertex order; the colors are renamed in order of first
//! appearance and the least resulting color vector is the canonical key.

use serde::{Deserialize, Serialize};

use crate::edge::EdgeTable;
use crate::partition::{ClassMasks, Partition};
use crate::symmetry::{act_unchecked, Perm, SymmetryElement};

/// The canonical representative of an orbit together with the group element
/// that maps the input onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// 1-based colors of the canonical representative in EdgeId order.
    pub key: Vec<u8>,
    /// `act(p, element)` is the canonical representative.
    pub element: SymmetryElement,
}

impl CanonicalForm {
    pub fn partition(&self) -> Partition {
        Partition::new(self.element.d(), &self.key).expect("canonical key is a partition")
    }
}

struct Ctx<'a> {
    d: usize,
    n: usize,
    // nbrs[v * d + k]: neighbors of v in class k
    nbrs: Vec<Vec<usize>>,
    p: &'a Partition,
    best: Option<(Vec<u8>, Vec<u8>, Vec<u8>)>,
}

impl Ctx<'_> {
    fn refine(&self, lab: &mut [u32]) {
        let (n, d) = (self.n, self.d);
        let mut cells = distinct(lab);
        loop {
            let sigs: Vec<Vec<u32>> = (0..n)
                .map(|v| {
                    let mut per: Vec<Vec<u32>> = (0..d)
                        .map(|k| {
                            let mut l: Vec<u32> = self.nbrs[v * d + k].iter().map(|&w| lab[w]).collect();
                            l.sort_unstable();
                            l
                        })
                        .collect();
                    per.sort_unstable();
                    let mut sig = vec![lab[v]];
                    for l in per {
                        sig.push(l.len() as u32);
                        sig.extend(l);
                    }
                    sig
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut pos = 0;
            for i in 0..n {
                if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                    pos = i;
                }
                lab[order[i]] = pos as u32;
            }
            let now = distinct(lab);
            if now == cells {
                return;
            }
            cells = now;
        }
    }

    fn search(&mut self, mut lab: Vec<u32>) {
        self.refine(&mut lab);
        let n = self.n;
        let mut count = vec![0usize; n];
        for &l in &lab {
            count[l as usize] += 1;
        }
        match (0..n).find(|&l| count[l] > 1) {
            None => self.leaf(&lab),
            Some(target) => {
                for v in 0..n {
                    if lab[v] as usize == target {
                        let mut child = lab.clone();
                        for (w, l) in child.iter_mut().enumerate() {
                            if *l as usize == target && w != v {
                                *l += 1;
                            }
                        }
                        self.search(child);
                    }
                }
            }
        }
    }

    fn leaf(&mut self, lab: &[u32]) {
        let sigma: Vec<u8> = lab.iter().map(|&l| l as u8).collect();
        let g = SymmetryElement {
            sigma: Perm::from_raw(sigma.clone().into()),
            tau: Perm::identity(self.d),
        };
        let q = act_unchecked(self.p, &g);
        let (key, tau) = normalize_colors(q.raw(), self.d);
        if self.best.as_ref().is_none_or(|(b, _, _)| key < *b) {
            self.best = Some((key, sigma, tau));
        }
    }
}

fn distinct(lab: &[u32]) -> usize {
    let mut v = lab.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Renames colors in order of first appearance; returns the renamed 0-based
/// vector and the 0-based renaming.
pub(crate) fn normalize_colors(raw: &[u8], d: usize) -> (Vec<u8>, Vec<u8>) {
    let mut tau = vec![u8::MAX; d];
    let mut next = 0u8;
    for &c in raw {
        if tau[c as usize] == u8::MAX {
            tau[c as usize] = next;
            next += 1;
        }
    }
    for t in tau.iter_mut() {
        if *t == u8::MAX {
            *t = next;
            next += 1;
        }
    }
    (raw.iter().map(|&c| tau[c as usize]).collect(), tau)
}

/// Canonical form of `p` under the action of `S_{2d} x S_d`.
pub fn canonical_form(p: &Partition) -> CanonicalForm {
    let d = p.d();
    let n = p.n();
    let masks = ClassMasks::new(p);
    let mut nbrs = Vec::with_capacity(n * d);
    for v in 0..n {
        for k in 0..d {
            let m = masks.class(k)[v];
            nbrs.push((0..n).filter(|&w| m >> w & 1 == 1).collect());
        }
    }
    let mut ctx = Ctx {
        d,
        n,
        nbrs,
        p,
        best: None,
    };
    ctx.search(vec![0; n]);
    let (key, sigma, tau) = ctx.best.expect("the search reaches a leaf");
    CanonicalForm {
        key: key.iter().map(|c| c + 1).collect(),
        element: SymmetryElement {
            sigma: Perm::from_raw(sigma.into()),
            tau: Perm::from_raw(tau.into()),
        },
    }
}

/// Canonical key of `p`: equal for two partitions iff one is a relabeling of
/// the other.
pub fn canonical_key(p: &Partition) -> Vec<u8> {
    canonical_form(p).key
}

/// Canonical key packed like [`Partition::pack`] (`d <= 4`).
pub fn canonical_packed(p: &Partition) -> u128 {
    let form = canonical_form(p);
    let bits = crate::partition::pack_bits(p.d());
    form.key
        .iter()
        .enumerate()
        .fold(0u128, |acc, (e, &c)| acc | ((c as u128 - 1) << (bits * e)))
}

/// Exhaustive minimum over every vertex order (colors renamed by first
/// appearance). Exponential; for testing small cases.
pub fn brute_force_key(p: &Partition) -> Vec<u8> {
    let n = p.n();
    let d = p.d();
    let table = EdgeTable::get(d);
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut q = vec![0u8; table.len()];
    loop {
        for (&(i, j), &c) in table.pairs().iter().zip(p.raw()) {
            q[table.id(perm[i as usize - 1] + 1, perm[j as usize - 1] + 1).index()] = c;
        }
        let (key, _) = normalize_colors(&q, d);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap().iter().map(|c| c + 1).collect()
}

fn next_permutation(a: &mut [u8]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
