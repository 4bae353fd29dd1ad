use cfpart::orbit::{
    self, orbit_bfs, orbit_bfs_checkpointed, verify_transitive, weak_classes, GeneratorSet, Limits, SignTable,
};
use cfpart::{build_e, enumerate, involution, Partition, Triple};

#[test]
fn d3_orbit_covers_all_partitions_with_consistent_parity() {
    let t = verify_transitive(3, false).unwrap();
    assert_eq!(t.size, 66240);
    assert_eq!(t.total, 66240);
    assert!(t.transitive);
    assert_eq!(t.report.parity_consistent, Some(true));
}

#[test]
fn d3_nineteen_weak_classes() {
    let w = weak_classes(3, false).unwrap();
    assert_eq!(w.count, 19);
    assert_eq!(w.sizes.iter().sum::<u64>(), 66240);
    assert!(w.representatives.iter().all(Partition::is_cycle_free));
}

#[test]
fn every_enumerated_state_has_a_sign_flipping_under_involutions() {
    let table = SignTable::build(3, false).unwrap();
    assert!(table.parity_consistent());
    let all: Vec<Partition> = enumerate(3, None).unwrap().step_by(13).collect();
    for p in all {
        let s = table.sign(&p).unwrap();
        for (x, y, z) in [(1, 2, 3), (2, 4, 6), (1, 5, 6)] {
            let q = involution(&p, Triple::new(x, y, z).unwrap()).unwrap();
            assert!(q.is_cycle_free());
            assert_eq!(table.sign(&q).unwrap(), -s);
        }
    }
}

#[test]
fn checkpoint_resume_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e3.ckpt");
    let e3 = build_e(3);
    let full = orbit_bfs(&e3, GeneratorSet::InvolutionsOnly, &Limits::default()).unwrap();

    let stopped = orbit_bfs_checkpointed(
        &e3,
        GeneratorSet::InvolutionsOnly,
        &Limits {
            max_depth: Some(4),
            checkpoint_interval: Some(1),
            ..Limits::default()
        },
        &path,
    )
    .unwrap();
    assert!(!stopped.complete);
    assert!(stopped.size < 66240);

    let resumed = orbit::resume(&path, &Limits::default()).unwrap();
    assert!(resumed.complete);
    assert_eq!(resumed.size, full.size);
    assert_eq!(resumed.diameter_reached, full.diameter_reached);
    assert_eq!(resumed.parity_consistent, full.parity_consistent);
    assert_eq!(resumed.start, full.start);

    // a finished search resumes to the same report again
    let again = orbit::resume(&path, &Limits::default()).unwrap();
    assert_eq!(again.size, full.size);
}

#[test]
fn symmetry_orbit_of_e3_is_all_weak_classes() {
    let r = orbit_bfs(&build_e(3), GeneratorSet::InvolutionsPlusSymmetry, &Limits::default()).unwrap();
    assert_eq!(r.size, 19);
    assert_eq!(r.parity_consistent, None);
}

#[test]
fn expansion_at_d3_behind_the_override() {
    use cfpart::dets2::{eval_dets2, indicator};
    use num::{One, Zero};
    let table = cfpart::orbit::SignTable::build(3, false).unwrap();
    assert!(eval_dets2(&indicator(&cfpart::build_e(3)), &table, false).is_err());
    assert!(eval_dets2(&indicator(&cfpart::build_e(3)), &table, true)
        .unwrap()
        .is_one());
    let mut colors = cfpart::build_e(3).colors();
    // (1,2), (1,3), (2,3) share a color: the triangle closes a cycle
    colors[0] = 1;
    colors[1] = 1;
    colors[5] = 1;
    let bad = cfpart::Partition::new(3, &colors).unwrap();
    assert!(!bad.is_cycle_free());
    assert!(eval_dets2(&indicator(&bad), &table, true).unwrap().is_zero());
}
