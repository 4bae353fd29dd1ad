//! Cycle-free `d`-partitions of the complete graph `K_{2d}`.
//!
//! A `d`-partition colors every edge of `K_{2d}` with one of `d` colors; it is
//! cycle-free when every color class is a forest, which forces each class to be
//! a spanning tree with `2d - 1` edges. On that set every vertex triple
//! `x < y < z` induces an involution (recolor the triangle on `x, y, z` so that at
//! least two of its edges change and the result stays cycle-free; the result is
//! unique). This crate enumerates the partitions, explores the orbits of the
//! involution group, canonicalizes under vertex/color relabeling, runs the
//! constructive reductions (to a path class, the `K_8` tree-type pipeline, the
//! twin-star search and symmetry normalization) and evaluates the signed
//! multilinear expansion `det^{S^2}` exactly.
//!
//! Vertices and colors are 1-based everywhere in the public API.

pub mod canon;
pub mod dets2;
pub mod edge;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod involution;
pub mod orbit;
pub mod par;
pub mod partition;
pub mod reduction;
pub mod symmetry;
pub mod tree;

pub use canon::{canonical_form, canonical_key, CanonicalForm};
pub use edge::{edge_decode, edge_encode, EdgeId, EdgeTable, MAX_D};
pub use enumerate::{enumerate, FixedAssignment};
pub use error::{Error, Result};
pub use forest::{is_forest, DisjointSets};
pub use involution::{involution, InvolutionWord, Triple};
pub use partition::{build_e, Partition};
pub use symmetry::{act, Perm, SymmetryElement};
pub use tree::{classify_tree, diameter_path, TreeCertificate};
