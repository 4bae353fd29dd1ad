//! Involution words realizing relabelings of `E_d`.
//!
//! A vertex permutation is factored into adjacent transpositions. For
//! `s = (2a-1, 2a)` the difference between `E_d` and `s . E_d` is resolved one
//! `K_4` on `S_a + S_x` at a time. For `s = (2a, 2a+1)` each block `S_x` outside
//! `S_a + S_{a+1}` is first brought to its final colors inside the `K_6` on
//! `S_x + S_a + S_{a+1}` (leaving the `K_4` on `S_a + S_{a+1}` alone), then that
//! `K_4` is resolved. A color swap `(c, c+1)` is the block swap
//! `(2c-1 2c+1)(2c 2c+2)` followed by a fix of the four edges between the two
//! blocks. Every local piece is a shortest word found by search in the small
//! sub-partition space, lifted back verbatim.

use crate::error::{Error, Result};
use crate::involution::{InvolutionWord, Triple};
use crate::orbit::involution_path;
use crate::partition::{build_e, check_d, Partition};
use crate::symmetry::{act, Perm, SymmetryElement};

fn block(v: u8) -> u8 {
    v.div_ceil(2)
}

fn block_vertices(blocks: &[u8]) -> Vec<u8> {
    let mut v: Vec<u8> = blocks.iter().flat_map(|&b| [2 * b - 1, 2 * b]).collect();
    v.sort_unstable();
    v
}

/// Restriction of `p` to the complete graph on `verts` (sorted), with vertices
/// and colors renumbered in increasing order. Fails unless it is a cycle-free
/// partition with `verts.len() / 2` colors.
fn restrict(p: &Partition, verts: &[u8], colors: &[u8]) -> Result<Partition> {
    let k = verts.len() / 2;
    let mut local = Vec::new();
    for (a, &x) in verts.iter().enumerate() {
        for &y in &verts[a + 1..] {
            let c = p.color(x, y);
            let rank = colors
                .iter()
                .position(|&l| l == c)
                .ok_or_else(|| Error::invariant(format!("edge ({x},{y}) leaves the local colors")))?;
            local.push(rank as u8 + 1);
        }
    }
    let q = Partition::new(k, &local)?;
    if !q.is_cycle_free() {
        return Err(Error::invariant(format!("restriction to {verts:?} is not cycle-free")));
    }
    Ok(q)
}

/// A word taking `p` to `target`, which must differ from `p` only on edges
/// inside `verts`, found in the restricted space and lifted back.
fn local_word(p: &Partition, target: &Partition, verts: &[u8]) -> Result<InvolutionWord> {
    let mut colors: Vec<u8> = Vec::new();
    for (a, &x) in verts.iter().enumerate() {
        for &y in &verts[a + 1..] {
            colors.push(p.color(x, y));
        }
    }
    colors.sort_unstable();
    colors.dedup();
    if colors.len() * 2 != verts.len() {
        return Err(Error::invariant(format!("{verts:?} carries {} colors", colors.len())));
    }
    let lp = restrict(p, verts, &colors)?;
    let lt = restrict(target, verts, &colors)?;
    let w = involution_path(&lp, &lt, None)
        .map_err(|e| Error::invariant(format!("local search on {verts:?} failed: {e}")))?;
    let lifted = InvolutionWord::new(
        w.steps
            .iter()
            .map(|t| {
                Triple::new(
                    verts[t.x() as usize - 1],
                    verts[t.y() as usize - 1],
                    verts[t.z() as usize - 1],
                )
            })
            .collect::<Result<_>>()?,
    );
    let got = lifted.apply(p)?;
    if got != *target {
        return Err(Error::invariant(format!("lifted word on {verts:?} misses its target")));
    }
    Ok(lifted)
}

/// `p` with the edges selected by `pick` taken from `from`.
fn splice(p: &Partition, from: &Partition, pick: impl Fn(u8, u8) -> bool) -> Partition {
    let changes: Vec<_> = p
        .table()
        .pairs()
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| pick(i, j))
        .map(|(e, &(i, j))| (crate::edge::EdgeId(e as u16), from.color(i, j)))
        .collect();
    p.with_colors(&changes)
        .expect("colors come from a partition of the same d")
}

/// A word taking `E_d` to `s_i . E_d` for `s_i = (i, i+1)`.
pub fn transposition_word(d: usize, i: u8) -> Result<InvolutionWord> {
    check_d(d)?;
    let n = 2 * d as u8;
    if i == 0 || i >= n {
        return Err(Error::input(format!("transposition ({i},{}) outside 1..={n}", i + 1)));
    }
    let e = build_e(d);
    let s = Perm::transposition(2 * d, i, i + 1)?;
    let goal = act(&e, &SymmetryElement::vertex(s))?;
    let mut word = InvolutionWord::default();
    let mut cur = e;
    if i % 2 == 1 {
        let a = block(i);
        for x in (1..=d as u8).filter(|&x| x != a) {
            let verts = block_vertices(&[a, x]);
            let target = splice(&cur, &goal, |u, v| verts.contains(&u) && verts.contains(&v));
            let w = local_word(&cur, &target, &verts)?;
            cur = target;
            word.extend(&w);
        }
    } else {
        let a = block(i);
        let pair = block_vertices(&[a, a + 1]);
        for x in (1..=d as u8).filter(|&x| x != a && x != a + 1) {
            let verts = block_vertices(&[a, a + 1, x]);
            let sx = block_vertices(&[x]);
            let target = splice(&cur, &goal, |u, v| {
                (sx.contains(&u) && pair.contains(&v)) || (pair.contains(&u) && sx.contains(&v))
            });
            let w = local_word(&cur, &target, &verts)?;
            cur = target;
            word.extend(&w);
        }
        let w = local_word(&cur, &goal, &pair)?;
        cur = goal.clone();
        word.extend(&w);
    }
    if cur != goal {
        return Err(Error::invariant(format!("transposition ({i},{}) not reached", i + 1)));
    }
    Ok(word)
}

/// A word taking `E_d` to `sigma . E_d`.
pub fn vertex_word(d: usize, sigma: &Perm) -> Result<InvolutionWord> {
    let mut word = InvolutionWord::default();
    let mut rho = Perm::identity(2 * d);
    for i in sigma.adjacent_transpositions() {
        // rho . E_d  ->  rho . s_i . E_d  is rho applied to the word for s_i
        word.extend(&transposition_word(d, i)?.mapped(&rho));
        rho = rho.compose(&Perm::transposition(2 * d, i, i + 1)?);
    }
    Ok(word)
}

/// A word taking `E_d` to the color swap `(c, c+1)` of `E_d`.
pub fn color_swap_word(d: usize, c: u8) -> Result<InvolutionWord> {
    check_d(d)?;
    if c == 0 || c as usize >= d {
        return Err(Error::input(format!("color swap ({c},{}) outside 1..={d}", c + 1)));
    }
    let e = build_e(d);
    let sigma = Perm::from_cycles(2 * d, &[&[2 * c - 1, 2 * c + 1], &[2 * c, 2 * c + 2]])?;
    let mut word = vertex_word(d, &sigma)?;
    let swapped = word.apply(&e)?;
    let goal = act(&e, &SymmetryElement::color(Perm::transposition(d, c, c + 1)?))?;
    word.extend(&local_word(&swapped, &goal, &block_vertices(&[c, c + 1]))?);
    Ok(word)
}

/// A word `w` with `w` applied to `E_d` equal to `act(E_d, g)`, verified by
/// replay.
pub fn symmetry_to_involutions(d: usize, g: &SymmetryElement) -> Result<InvolutionWord> {
    check_d(d)?;
    if g.d() != d {
        return Err(Error::input(format!(
            "symmetry element for d = {} used with d = {d}",
            g.d()
        )));
    }
    let e = build_e(d);
    let goal = act(&e, g)?;
    let mut word = InvolutionWord::default();
    if d >= 2 {
        // the color action commutes with involutions, so color words chain
        // unchanged and the vertex word applies after them
        for c in g.tau.adjacent_transpositions() {
            word.extend(&color_swap_word(d, c)?);
        }
        word.extend(&vertex_word(d, &g.sigma)?);
    }
    if word.apply(&e)? != goal {
        return Err(Error::invariant("normalization word does not reproduce the relabeling"));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_empty() {
        for d in 1..=3 {
            assert!(symmetry_to_involutions(d, &SymmetryElement::identity(d))
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn d1_swap_is_trivial() {
        let g = SymmetryElement::vertex(Perm::transposition(2, 1, 2).unwrap());
        assert!(symmetry_to_involutions(1, &g).unwrap().is_empty());
    }

    #[test]
    fn swap_12_on_e2() {
        let g = SymmetryElement::vertex(Perm::transposition(4, 1, 2).unwrap());
        let w = symmetry_to_involutions(2, &g).unwrap();
        assert_eq!(w.apply(&build_e(2)).unwrap(), act(&build_e(2), &g).unwrap());
    }

    #[test]
    fn within_block_swap_stays_in_its_k4s() {
        for d in 2..=4 {
            for a in 1..=d as u8 {
                let w = transposition_word(d, 2 * a - 1).unwrap();
                for t in &w.steps {
                    let blocks: std::collections::BTreeSet<u8> = t.vertices().iter().map(|&v| block(v)).collect();
                    assert!(blocks.contains(&a) && blocks.len() <= 2, "{t:?} for a = {a}");
                }
            }
        }
    }

    #[test]
    fn every_adjacent_transposition_d3() {
        let e3 = build_e(3);
        for i in 1..6 {
            let w = transposition_word(3, i).unwrap();
            let s = Perm::transposition(6, i, i + 1).unwrap();
            assert_eq!(w.apply(&e3).unwrap(), act(&e3, &SymmetryElement::vertex(s)).unwrap());
        }
    }

    #[test]
    fn color_swaps() {
        for d in 2..=3 {
            for c in 1..d as u8 {
                let tau = Perm::transposition(d, c, c + 1).unwrap();
                let g = SymmetryElement::color(tau);
                let w = symmetry_to_involutions(d, &g).unwrap();
                assert_eq!(w.apply(&build_e(d)).unwrap(), act(&build_e(d), &g).unwrap());
            }
        }
    }
}
