//! The tree-type pipeline on `K_8`: from a path class to type 19.

use super::path::reduce_to_path;
use super::trace::ReductionTrace;
use crate::error::{Error, Result};
use crate::involution::Triple;
use crate::partition::Partition;
use crate::symmetry::{Perm, SymmetryElement};
use crate::tree::{classify_tree, tree_type};

const CLASS: u8 = 4;

/// Involution applied to each type of the path-to-targets diagram, in the
/// standard labeling of that type.
const DAG_TRIPLES: [(u8, (u8, u8, u8)); 7] = [
    (1, (5, 6, 7)),
    (2, (4, 5, 6)),
    (3, (2, 3, 4)),
    (14, (2, 3, 4)),
    (17, (3, 4, 5)),
    (23, (2, 3, 4)),
    (6, (3, 4, 5)),
];

/// Type transitions allowed in the diagram.
const DAG_EDGES: [(u8, u8); 12] = [
    (1, 2),
    (1, 3),
    (2, 6),
    (2, 17),
    (3, 14),
    (3, 16),
    (17, 23),
    (17, 19),
    (14, 19),
    (14, 20),
    (23, 19),
    (6, 20),
];

const FROM_16: [u8; 3] = [23, 17, 16];
const FROM_20: [u8; 4] = [19, 17, 23, 20];

/// Whether `from -> to` is an allowed step of the pipeline.
pub fn allowed_transition(from: u8, to: u8) -> bool {
    match from {
        16 => FROM_16.contains(&to),
        20 => FROM_20.contains(&to),
        _ => DAG_EDGES.contains(&(from, to)),
    }
}

fn label(p: &Partition) -> Result<u8> {
    let cert = classify_tree(&p.class_edges(CLASS), 8)?;
    Ok(cert.t_label.expect("trees on eight vertices carry a label"))
}

/// The lexicographically least vertex bijection (as an image sequence) that
/// maps `edges` onto `target`, both trees on `n` vertices.
pub fn least_isomorphism(edges: &[(u8, u8)], target: &[(u8, u8)], n: usize) -> Option<Perm> {
    let adj = |es: &[(u8, u8)]| {
        let mut m = vec![0u32; n];
        for &(a, b) in es {
            m[a as usize - 1] |= 1 << (b - 1);
            m[b as usize - 1] |= 1 << (a - 1);
        }
        m
    };
    let (src, dst) = (adj(edges), adj(target));
    let mut img = vec![usize::MAX; n];
    let mut used = 0u32;

    fn go(v: usize, src: &[u32], dst: &[u32], img: &mut [usize], used: &mut u32) -> bool {
        let n = src.len();
        if v == n {
            return true;
        }
        for c in 0..n {
            if *used >> c & 1 == 1 || src[v].count_ones() != dst[c].count_ones() {
                continue;
            }
            let consistent = (0..v).all(|u| (src[v] >> u & 1) == (dst[c] >> img[u] & 1));
            if !consistent {
                continue;
            }
            img[v] = c;
            *used |= 1 << c;
            if go(v + 1, src, dst, img, used) {
                return true;
            }
            *used &= !(1 << c);
        }
        false
    }

    go(0, &src, &dst, &mut img, &mut used).then(|| Perm::from_raw(img.iter().map(|&c| c as u8).collect()))
}

/// Relabels vertices so that class 4 becomes the standard representative of
/// its type; returns the type.
fn standardize(trace: &mut ReductionTrace) -> Result<u8> {
    let l = label(&trace.final_partition)?;
    let target = &tree_type(l)?.edges;
    let sigma = least_isomorphism(&trace.final_partition.class_edges(CLASS), target, 8)
        .ok_or_else(|| Error::invariant("isomorphic trees without an isomorphism"))?;
    trace.push_sym(SymmetryElement::vertex(sigma))?;
    debug_assert!({
        let mut t = target.clone();
        t.sort_unstable();
        trace.final_partition.class_edges(CLASS) == t
    });
    Ok(l)
}

fn apply(trace: &mut ReductionTrace, from: u8, (x, y, z): (u8, u8, u8)) -> Result<u8> {
    trace.push_inv(Triple::new(x, y, z)?)?;
    let to = label(&trace.final_partition)?;
    if to == 9 {
        return Err(Error::invariant("class 4 became type 9"));
    }
    if !allowed_transition(from, to) {
        return Err(Error::invariant(format!("type {from} stepped to type {to}")));
    }
    Ok(to)
}

/// Case split for type 16 on the colors of `(1,5), (1,6), (2,5), (2,6)`.
fn t16_triple(p: &Partition) -> (u8, u8, u8) {
    let (c15, c16, c25, c26) = (p.color(1, 5), p.color(1, 6), p.color(2, 5), p.color(2, 6));
    if c25 == c26 {
        (2, 5, 6)
    } else if c15 == c25 {
        (1, 2, 5)
    } else if c16 == c26 {
        (1, 2, 6)
    } else if c15 == c16 {
        (1, 5, 6)
    } else if c15 == c26 {
        (2, 5, 6)
    } else {
        // three colors on four edges: the last pair must match
        debug_assert_eq!(c16, c25);
        (1, 5, 6)
    }
}

/// Case split for type 20 on the colors of `(1,4), (1,8), (2,4), (2,8)`.
fn t20_triple(p: &Partition) -> Result<(u8, u8, u8)> {
    let (c14, c18, c24, c28) = (p.color(1, 4), p.color(1, 8), p.color(2, 4), p.color(2, 8));
    Ok(if c18 == c28 {
        (1, 2, 8)
    } else if c14 == c18 {
        (1, 4, 8)
    } else if c24 == c28 {
        (2, 4, 8)
    } else if c14 == c24 {
        return Err(Error::invariant(
            "type 20 with (1,4) and (2,4) of one color cannot be cycle-free",
        ));
    } else if c24 == c18 {
        (1, 2, 4)
    } else {
        debug_assert_eq!(c14, c28);
        (1, 2, 8)
    })
}

fn check_d4(p: &Partition) -> Result<()> {
    if p.d() != 4 {
        return Err(Error::input(format!("the K_8 pipeline needs d = 4, got {}", p.d())));
    }
    if !p.is_cycle_free() {
        return Err(Error::input("partition is not cycle-free"));
    }
    Ok(())
}

fn is_target(l: u8) -> bool {
    matches!(l, 16 | 19 | 20)
}

fn in_dag(l: u8) -> bool {
    DAG_TRIPLES.iter().any(|&(k, _)| k == l)
}

/// Drives class 4 along the diagram until it is of type 16, 19 or 20.
pub fn reduce_i8_to_targets(p: &Partition) -> Result<ReductionTrace> {
    check_d4(p)?;
    let l = label(p)?;
    if !in_dag(l) && !is_target(l) {
        return Err(Error::input(format!(
            "class 4 has type {l}, which is outside the diagram"
        )));
    }
    let mut trace = ReductionTrace::new(p, CLASS);
    loop {
        let l = label(&trace.final_partition)?;
        if is_target(l) {
            return Ok(trace);
        }
        standardize(&mut trace)?;
        let &(_, triple) = DAG_TRIPLES.iter().find(|&&(k, _)| k == l).unwrap();
        apply(&mut trace, l, triple)?;
    }
}

/// One case-split step from type 16 or 20.
fn case_step(trace: &mut ReductionTrace, l: u8) -> Result<u8> {
    standardize(trace)?;
    let triple = if l == 16 {
        t16_triple(&trace.final_partition)
    } else {
        t20_triple(&trace.final_partition)?
    };
    apply(trace, l, triple)
}

fn drive_to_t19(trace: &mut ReductionTrace) -> Result<()> {
    let mut swaps = 0;
    let mut rounds = 0;
    loop {
        let l = label(&trace.final_partition)?;
        match l {
            19 => return Ok(()),
            16 | 20 => {
                let to = case_step(trace, l)?;
                if to == l {
                    swaps += 1;
                    if swaps > 1 {
                        return Err(Error::invariant(format!("type {l} repeated its preliminary swap")));
                    }
                } else {
                    swaps = 0;
                }
            }
            9 => return Err(Error::invariant("class 4 is of type 9")),
            _ if in_dag(l) => {
                swaps = 0;
                standardize(trace)?;
                let &(_, triple) = DAG_TRIPLES.iter().find(|&&(k, _)| k == l).unwrap();
                apply(trace, l, triple)?;
            }
            _ => {
                return Err(Error::input(format!(
                    "class 4 has type {l}, which is outside the pipeline"
                )))
            }
        }
        rounds += 1;
        if rounds > 64 {
            return Err(Error::invariant("pipeline does not terminate"));
        }
    }
}

/// Type 16 to type 19 through the case split on `(1,5), (1,6), (2,5), (2,6)`.
pub fn reduce_t16(p: &Partition) -> Result<ReductionTrace> {
    check_d4(p)?;
    if label(p)? != 16 {
        return Err(Error::input("class 4 is not of type 16"));
    }
    let mut trace = ReductionTrace::new(p, CLASS);
    drive_to_t19(&mut trace)?;
    Ok(trace)
}

/// Type 20 to type 19 through the case split on `(1,4), (1,8), (2,4), (2,8)`.
pub fn reduce_t20(p: &Partition) -> Result<ReductionTrace> {
    check_d4(p)?;
    if label(p)? != 20 {
        return Err(Error::input("class 4 is not of type 20"));
    }
    let mut trace = ReductionTrace::new(p, CLASS);
    drive_to_t19(&mut trace)?;
    Ok(trace)
}

/// From any type in the pipeline (the diagram types and 16, 19, 20) to 19.
pub fn reduce_to_t19(p: &Partition) -> Result<ReductionTrace> {
    check_d4(p)?;
    let mut trace = ReductionTrace::new(p, CLASS);
    drive_to_t19(&mut trace)?;
    Ok(trace)
}

/// The whole `d = 4` chain: class 4 to a path, then along the pipeline to
/// type 19.
pub fn reduce_d4(p: &Partition) -> Result<ReductionTrace> {
    check_d4(p)?;
    let mut trace = reduce_to_path(p, CLASS)?;
    drive_to_t19(&mut trace)?;
    Ok(trace)
}

/// Types visited by the class-4 certificates of a trace, without repeats.
pub fn type_sequence(trace: &ReductionTrace) -> Result<Vec<u8>> {
    let mut seq = vec![label(&trace.start)?];
    for s in &trace.steps {
        let l = s.cert.t_label.unwrap_or(0);
        if seq.last() != Some(&l) {
            seq.push(l);
        }
    }
    Ok(seq)
}
