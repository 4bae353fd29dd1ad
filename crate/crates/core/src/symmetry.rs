//! The action of `S_{2d} x S_d` on partitions: vertex relabeling and color
//! relabeling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edge::EdgeTable;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A permutation of `{1, .., len}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    // 0-based images
    img: Box<[u8]>,
}

impl Perm {
    pub fn identity(len: usize) -> Self {
        Perm {
            img: (0..len as u8).collect(),
        }
    }

    /// From 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[u8]) -> Result<Self> {
        let len = images.len();
        let mut seen = vec![false; len];
        for &v in images {
            if v == 0 || v as usize > len || std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(Error::input(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm {
            img: images.iter().map(|v| v - 1).collect(),
        })
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(len: usize, cycles: &[&[u8]]) -> Result<Self> {
        let mut perm = Perm::identity(len);
        for cycle in cycles.iter().rev() {
            let mut img: Vec<u8> = (1..=len as u8).collect();
            for (k, &v) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if v == 0 || v as usize > len || next == 0 || next as usize > len {
                    return Err(Error::input(format!("cycle {cycle:?} leaves 1..={len}")));
                }
                img[v as usize - 1] = next;
            }
            let c = Perm::from_images(&img)?;
            perm = c.compose(&perm);
        }
        Ok(perm)
    }

    pub fn transposition(len: usize, a: u8, b: u8) -> Result<Self> {
        Perm::from_cycles(len, &[&[a, b]])
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    /// Image of the 1-based point `v`.
    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.img[v as usize - 1] + 1
    }

    pub fn images(&self) -> Vec<u8> {
        self.img.iter().map(|v| v + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.img
    }

    pub(crate) fn from_raw(img: Box<[u8]>) -> Self {
        Perm { img }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.img.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm { img: inv.into() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Perm {
            img: other.img.iter().map(|&v| self.img[v as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Indices `i` (1-based) such that `self = s_{i_1} ∘ s_{i_2} ∘ ... ∘ s_{i_k}`
    /// with `s_i = (i, i+1)`.
    pub fn adjacent_transpositions(&self) -> Vec<u8> {
        // Bubble-sorting the image array right-multiplies by s_i; the word read
        // backwards is a factorization.
        let mut arr = self.img.to_vec();
        let mut swaps = Vec::new();
        let len = arr.len();
        for pass in 0..len {
            for i in 0..len.saturating_sub(1 + pass) {
                if arr[i] > arr[i + 1] {
                    arr.swap(i, i + 1);
                    swaps.push(i as u8 + 1);
                }
            }
        }
        swaps.reverse();
        swaps
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<u8>::deserialize(de)?;
        Perm::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// A pair `(σ, τ)` of a vertex permutation and a color permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub sigma: Perm,
    pub tau: Perm,
}

impl SymmetryElement {
    pub fn new(sigma: Perm, tau: Perm) -> Result<Self> {
        if sigma.len() != 2 * tau.len() {
            return Err(Error::input(format!(
                "sigma acts on {} vertices but tau on {} colors",
                sigma.len(),
                tau.len()
            )));
        }
        Ok(SymmetryElement { sigma, tau })
    }

    pub fn identity(d: usize) -> Self {
        SymmetryElement {
            sigma: Perm::identity(2 * d),
            tau: Perm::identity(d),
        }
    }

    pub fn vertex(sigma: Perm) -> Self {
        let d = sigma.len() / 2;
        SymmetryElement {
            sigma,
            tau: Perm::identity(d),
        }
    }

    pub fn color(tau: Perm) -> Self {
        let d = tau.len();
        SymmetryElement {
            sigma: Perm::identity(2 * d),
            tau,
        }
    }

    pub fn d(&self) -> usize {
        self.tau.len()
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.is_identity() && self.tau.is_identity()
    }

    /// `self · other`: act by `other` first.
    pub fn compose(&self, other: &SymmetryElement) -> SymmetryElement {
        SymmetryElement {
            sigma: self.sigma.compose(&other.sigma),
            tau: self.tau.compose(&other.tau),
        }
    }

    pub fn inverse(&self) -> SymmetryElement {
        SymmetryElement {
            sigma: self.sigma.inverse(),
            tau: self.tau.inverse(),
        }
    }
}

/// `(σ, τ) · p`: the edge `{σ(i), σ(j)}` of the result has color `τ(k)` where
/// `{i, j}` has color `k` in `p`.
pub fn act(p: &Partition, g: &SymmetryElement) -> Result<Partition> {
    let d = p.d();
    if g.d() != d {
        return Err(Error::input(format!(
            "symmetry element for d = {} applied to a d = {d} partition",
            g.d()
        )));
    }
    Ok(act_unchecked(p, g))
}

pub(crate) fn act_unchecked(p: &Partition, g: &SymmetryElement) -> Partition {
    let d = p.d();
    let table = EdgeTable::get(d);
    let src = p.raw();
    let sigma = g.sigma.raw();
    let tau = g.tau.raw();
    let mut out = vec![0u8; src.len()].into_boxed_slice();
    for (&(i, j), &c) in table.pairs().iter().zip(src) {
        let e = table.id(sigma[i as usize - 1] + 1, sigma[j as usize - 1] + 1);
        out[e.index()] = tau[c as usize];
    }
    Partition::from_raw(d, out)
}
