//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p cfpart-cli --test acceptance -- --nocapture` to see
//! the report.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfpart::dets2::{eval_dets2, indicator, EdgeVectorFamily};
use cfpart::enumerate::{count, sample_completion};
use cfpart::involution::all_triples;
use cfpart::orbit::{orbit_bfs, weak_classes, GeneratorSet, Limits, SignTable};
use cfpart::reduction::{reduce_to_path_detailed, reduce_to_t19, symmetry_to_involutions, verify_twinstar_t19, Action};
use cfpart::tree::{tree_census, tree_type};
use cfpart::{act, build_e, classify_tree, involution, FixedAssignment, Partition, Perm, SymmetryElement, Triple};

// Time limits and sample sizes.
const ENUM_D2_LIMIT: Duration = Duration::from_secs(1);
const ENUM_D3_LIMIT: Duration = Duration::from_secs(60);
const ORBIT_D3_LIMIT: Duration = Duration::from_secs(600);
const DETS2_LIMIT: Duration = Duration::from_secs(10);
const NORMALIZE_LIMIT: Duration = Duration::from_secs(60);
const LAW_SAMPLES: usize = 10_000;
const VANISHING_FAMILIES: usize = 1_000;
const PATH_SAMPLES_D3: u64 = 1_000;
const PATH_SAMPLES_D4: u64 = 100;
const PIPELINE_SAMPLES: u64 = 50;
const TWINSTAR_INSTANCES: u64 = 100;
const TWINSTAR_BUDGET: u64 = 1_000_000;
const TWINSTAR_SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cfpart"))
        .args(args)
        .output()
        .expect("cfpart binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
    )
}

fn sample(d: usize, fixed: Option<&FixedAssignment>, rng: &mut ChaCha8Rng) -> Partition {
    sample_completion(d, fixed, rng).unwrap().expect("a completion exists")
}

fn random_perm(len: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut img: Vec<u8> = (1..=len as u8).collect();
    img.shuffle(rng);
    Perm::from_images(&img).unwrap()
}

/// Degrees of a class, vertices 1-based at index `v - 1`.
fn degrees(p: &Partition, k: u8) -> Vec<usize> {
    let mut deg = vec![0; p.n()];
    for (i, j) in p.class_edges(k) {
        deg[i as usize - 1] += 1;
        deg[j as usize - 1] += 1;
    }
    deg
}

/// A spanning tree with maximum degree 2 is a path.
fn is_path_class(p: &Partition, k: u8) -> bool {
    p.class_edges(k).len() == p.n() - 1 && degrees(p, k).iter().all(|&x| (1..=2).contains(&x))
}

/// A spanning tree with two vertices of degree `d` and leaves elsewhere.
fn is_twin_star_class(p: &Partition, k: u8) -> bool {
    let deg = degrees(p, k);
    let d = p.d();
    deg.iter().filter(|&&x| x == d).count() == 2 && deg.iter().all(|&x| x == d || x == 1)
}

fn c1_count_d2() -> Check {
    let t = Instant::now();
    let (code, out) = cli(&["enumerate", "--d", "2", "--count-only"]);
    within(ENUM_D2_LIMIT, t)?;
    ensure(code == 0 && out == "12", || format!("exit {code}, output {out:?}"))?;
    let lib = count(2, None).map_err(|e| e.to_string())?;
    ensure(lib == 12, || format!("library count {lib}"))?;
    Ok("12 partitions".into())
}

fn c2_count_d3() -> Check {
    let t = Instant::now();
    let (code, out) = cli(&["enumerate", "--d", "3", "--count-only"]);
    within(ENUM_D3_LIMIT, t)?;
    ensure(code == 0 && out == "66240", || format!("exit {code}, output {out:?}"))?;
    Ok("66240 partitions".into())
}

fn c3_transitivity() -> Check {
    let none = Limits::default();
    let r2 = orbit_bfs(&build_e(2), GeneratorSet::InvolutionsOnly, &none).map_err(|e| e.to_string())?;
    ensure(r2.complete && r2.size == 12, || format!("d=2 orbit size {}", r2.size))?;
    let t = Instant::now();
    let r3 = orbit_bfs(&build_e(3), GeneratorSet::InvolutionsOnly, &none).map_err(|e| e.to_string())?;
    within(ORBIT_D3_LIMIT, t)?;
    ensure(r3.complete && r3.size == 66240, || {
        format!("d=3 orbit size {}", r3.size)
    })?;
    let (code, out) = cli(&["verify-transitive", "--d", "3"]);
    ensure(
        code == 0 && out == r#"{"size":66240,"total":66240,"transitive":true}"#,
        || format!("cli exit {code}, output {out:?}"),
    )?;
    Ok(format!("orbit sizes 12 and 66240, d=3 in {:.2}s", r3.elapsed_secs))
}

fn c4_weak_classes() -> Check {
    let w = weak_classes(3, false).map_err(|e| e.to_string())?;
    let total: u64 = w.sizes.iter().sum();
    ensure(w.count == 19 && total == 66240, || {
        format!("{} classes covering {total}", w.count)
    })?;
    Ok("19 classes".into())
}

fn c5_tree_census() -> Check {
    let census = tree_census(8);
    let mut certs: Vec<_> = census.iter().map(|(c, _)| c.canon.clone()).collect();
    certs.sort();
    certs.dedup();
    ensure(census.len() == 23 && certs.len() == 23, || {
        format!("{} types", census.len())
    })?;
    Ok("23 certificates".into())
}

/// Number of violated laws for one (state, triple, relabeling) sample.
fn law_violations(p: &Partition, t: Triple, g: &SymmetryElement) -> usize {
    let Ok(q) = involution(p, t) else { return 1 };
    let mut bad = 0;
    if involution(&q, t).ok().as_ref() != Some(p) {
        bad += 1;
    }
    let inside = [(t.x(), t.y()), (t.x(), t.z()), (t.y(), t.z())];
    let mut changed = 0;
    for &(i, j) in p.table().pairs() {
        if p.color(i, j) != q.color(i, j) {
            if !inside.contains(&(i, j)) {
                bad += 1;
            }
            changed += 1;
        }
    }
    if changed < 2 || !q.is_cycle_free() {
        bad += 1;
    }
    let moved = act(p, g).and_then(|gp| involution(&gp, t.mapped(&g.sigma)));
    if moved.ok() != act(&q, g).ok() {
        bad += 1;
    }
    bad
}

fn c6_involution_laws() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    let mut checked = 0;
    for p in cfpart::enumerate(2, None).unwrap() {
        for t in all_triples(2) {
            let g = SymmetryElement::new(random_perm(4, &mut rng), random_perm(2, &mut rng)).unwrap();
            bad += law_violations(&p, t, &g);
            checked += 1;
        }
    }
    ensure(checked == 48, || format!("{checked} exhaustive d=2 pairs"))?;
    for d in [3, 4] {
        let triples = all_triples(d);
        for _ in 0..LAW_SAMPLES {
            let p = sample(d, None, &mut rng);
            let t = triples[rng.gen_range(0..triples.len())];
            let g = SymmetryElement::new(random_perm(2 * d, &mut rng), random_perm(d, &mut rng)).unwrap();
            bad += law_violations(&p, t, &g);
            checked += 1;
        }
    }
    ensure(bad == 0, || format!("{bad} violations"))?;
    Ok(format!("{checked} pairs, 0 violations"))
}

fn c7_sign_consistency() -> Check {
    for d in [2, 3] {
        let table = SignTable::build(d, false).map_err(|e| e.to_string())?;
        ensure(table.parity_consistent(), || format!("d={d} has parity conflicts"))?;
        // every involution flips the sign
        for p in cfpart::enumerate(d, None).unwrap().step_by(if d == 2 { 1 } else { 97 }) {
            let s = table.sign(&p).map_err(|e| e.to_string())?;
            for t in all_triples(d) {
                let q = involution(&p, t).map_err(|e| e.to_string())?;
                ensure(table.sign(&q).unwrap() == -s, || {
                    format!("{t:?} keeps the sign of {p:?}")
                })?;
            }
        }
        ensure(table.sign(&build_e(d)).unwrap() == 1, || "E_d has sign -1".into())?;
    }
    Ok("d=2 and d=3 consistent".into())
}

fn c8_dets2() -> Check {
    let t = Instant::now();
    let table = SignTable::build(2, false).map_err(|e| e.to_string())?;
    for code in 0u32..64 {
        let colors: Vec<u8> = (0..6).map(|b| (code >> b & 1) as u8 + 1).collect();
        let p = Partition::new(2, &colors).unwrap();
        let v = eval_dets2(&indicator(&p), &table, false).map_err(|e| e.to_string())?;
        ensure(v.is_zero() != p.is_cycle_free(), || {
            format!("coloring {colors:?} gives {v}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let triples = all_triples(2);
    for _ in 0..VANISHING_FAMILIES {
        let coords = (0..6)
            .map(|_| {
                (0..2)
                    .map(|_| num::BigRational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=20).into()))
                    .collect()
            })
            .collect();
        let mut f = EdgeVectorFamily::new(2, coords).unwrap();
        let t = triples[rng.gen_range(0..triples.len())];
        let v = f.vector(t.x(), t.y()).to_vec();
        f.set(t.x(), t.z(), v.clone()).unwrap();
        f.set(t.y(), t.z(), v).unwrap();
        let value = eval_dets2(&f, &table, false).map_err(|e| e.to_string())?;
        ensure(value.is_zero(), || {
            format!("family with equal triple {t:?} gives {value}")
        })?;
    }
    within(DETS2_LIMIT, t)?;
    Ok(format!("64 colorings, {VANISHING_FAMILIES} vanishing families"))
}

fn c9_reduce_to_path() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut runs = 0;
    for (d, n) in [(3usize, PATH_SAMPLES_D3), (4, PATH_SAMPLES_D4)] {
        for _ in 0..n {
            let p = sample(d, None, &mut rng);
            let k = rng.gen_range(1..=d as u8);
            let r = reduce_to_path_detailed(&p, k).map_err(|e| format!("d={d} class {k}: {e}"))?;
            let end = r.trace.replay().map_err(|e| e.to_string())?;
            ensure(is_path_class(&end, k), || {
                format!("d={d}: class {k} ends as {:?}", end.class_edges(k))
            })?;
            ensure(r.potentials.windows(2).all(|w| w[0] < w[1]), || {
                format!("potential sequence {:?}", r.potentials)
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} reductions"))
}

/// Allowed type steps: the diagram edges and the two case routes.
fn allowed(from: u8, to: u8) -> bool {
    const DIAGRAM: [(u8, u8); 12] = [
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
    DIAGRAM.contains(&(from, to))
        || (from == 16 && [23, 17, 16].contains(&to))
        || (from == 20 && [19, 17, 23, 20].contains(&to))
}

fn c10_pipeline() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut runs = 0;
    for label in [1u8, 2, 3, 6, 14, 16, 17, 20, 23] {
        let edges = &tree_type(label).unwrap().edges;
        let fixed = FixedAssignment::with_class(4, 4, edges).unwrap();
        for _ in 0..PIPELINE_SAMPLES {
            let p = sample(4, Some(&fixed), &mut rng);
            let tr = reduce_to_t19(&p).map_err(|e| format!("type {label}: {e}"))?;
            let mut cur = tr.start.clone();
            let mut ty = label;
            for s in &tr.steps {
                cur = match &s.action {
                    Action::Inv(t) => involution(&cur, *t).unwrap(),
                    Action::Sym(g) => act(&cur, g).unwrap(),
                };
                let next = classify_tree(&cur.class_edges(4), 8).unwrap().t_label.unwrap();
                if matches!(s.action, Action::Inv(_)) {
                    ensure(allowed(ty, next), || format!("type {ty} stepped to {next}"))?;
                } else {
                    ensure(next == ty, || "a relabeling changed the type".into())?;
                }
                ty = next;
            }
            ensure(ty == 19, || format!("type {label} ended at {ty}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, 0 violations"))
}

fn c11_twin_star() -> Check {
    let (report, records) =
        verify_twinstar_t19(TWINSTAR_INSTANCES, TWINSTAR_SEED, TWINSTAR_BUDGET).map_err(|e| e.to_string())?;
    let mut rep = tree_type(19).unwrap().edges.clone();
    rep.sort_unstable();
    ensure(records.len() as u64 == TWINSTAR_INSTANCES, || "missing records".into())?;
    for r in &records {
        ensure(r.start.class_edges(4) == rep, || {
            format!("instance {} class 4 is not the representative", r.index)
        })?;
        let w = r
            .witness
            .as_ref()
            .ok_or_else(|| format!("instance {} unresolved", r.index))?;
        ensure(w.start == r.start, || "witness starts elsewhere".into())?;
        ensure(r.expanded <= TWINSTAR_BUDGET, || "budget exceeded".into())?;
        let end = w.replay().map_err(|e| e.to_string())?;
        ensure(is_twin_star_class(&end, w.class), || {
            format!("instance {} ends without a twin-star", r.index)
        })?;
    }
    ensure(report.successes == TWINSTAR_INSTANCES, || {
        format!("{} successes", report.successes)
    })?;
    Ok(format!(
        "{} of {} resolved, seed {}, max expanded {}",
        report.successes, report.instances, TWINSTAR_SEED, report.max_expanded
    ))
}

fn c12_normalization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut words = 0;
    for d in [2usize, 3] {
        let e = build_e(d);
        for i in 1..2 * d as u8 {
            let t = Instant::now();
            let sigma = Perm::transposition(2 * d, i, i + 1).unwrap();
            for tau in [Perm::identity(d), random_perm(d, &mut rng)] {
                let g = SymmetryElement::new(sigma.clone(), tau).unwrap();
                let w = symmetry_to_involutions(d, &g).map_err(|e| format!("d={d} ({i},{}): {e}", i + 1))?;
                let mut cur = e.clone();
                for &t in &w.steps {
                    cur = involution(&cur, t).unwrap();
                }
                ensure(cur == act(&e, &g).unwrap(), || {
                    format!("d={d} ({i},{}) word misses", i + 1)
                })?;
                words += 1;
            }
            within(NORMALIZE_LIMIT, t)?;
        }
    }
    Ok(format!("{words} words replayed"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (1, "count d=2", c1_count_d2),
        (2, "count d=3", c2_count_d3),
        (3, "transitivity d=2, d=3", c3_transitivity),
        (4, "weak classes d=3", c4_weak_classes),
        (5, "tree census n=8", c5_tree_census),
        (6, "involution laws", c6_involution_laws),
        (7, "sign consistency", c7_sign_consistency),
        (8, "signed expansion at d=2", c8_dets2),
        (9, "reduction to path", c9_reduce_to_path),
        (10, "d=4 type pipeline", c10_pipeline),
        (11, "twin-star from type 19", c11_twin_star),
        (12, "relabelings as involution words", c12_normalization),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2}: PASS  {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                println!("criterion {id:>2}: FAIL  {name}: {why} [{secs:.2}s]");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
