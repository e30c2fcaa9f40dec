mod common;

use common::oracles::cech_cohomology;
use common::*;
use coxcat::cohomology::*;
use coxcat::divisor::*;
use coxcat::exactlin::*;
use coxcat::fan::*;
use coxcat::model::ToricModel;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn fin(v: &[usize]) -> Vec<Dim> {
    v.iter().map(|&x| Dim::Finite(x)).collect()
}

#[test]
fn reduced_homology_examples() {
    assert_eq!(reduced_homology(&[], 0), vec![1]);
    assert_eq!(reduced_homology(&[vec![0], vec![1]], 0), vec![0, 1]);
    assert_eq!(reduced_homology(&[vec![0, 1], vec![1, 2], vec![0, 2]], 0), vec![0, 0, 1]);
    assert_eq!(reduced_homology(&[vec![0, 1, 2]], 0), vec![0, 0, 0, 0]);
    // projective plane, six-vertex triangulation: torsion shows up only mod 2
    let rp2: Vec<Vec<usize>> =
        [[1, 2, 4], [1, 2, 6], [1, 3, 5], [1, 3, 6], [1, 4, 5], [2, 3, 4], [2, 3, 5], [2, 5, 6], [3, 4, 6], [4, 5, 6]]
            .iter()
            .map(|f| f.iter().map(|v| v - 1).collect())
            .collect();
    assert_eq!(reduced_homology(&rp2, 0), vec![0, 0, 0, 0]);
    assert_eq!(reduced_homology(&rp2, 2), vec![0, 0, 1, 1]);
}

#[test]
fn classical_examples() {
    let p1 = StackyFan::plain(pn(1));
    let t = line_bundle_cohomology(&p1, &ints(&[-3, 0]), 0).unwrap();
    assert_eq!(t.dims, fin(&[0, 2]));
    let p2 = StackyFan::plain(pn(2));
    let t = line_bundle_cohomology(&p2, &ints(&[-3, 0, 0]), 0).unwrap();
    assert_eq!(t.dims, fin(&[0, 0, 1]));
    let t = line_bundle_cohomology(&p2, &ints(&[2, 0, 0]), 0).unwrap();
    assert_eq!(t.dims, fin(&[6, 0, 0]));
    // weighted projective plane: O(−4) has no cohomology, O(−5) is canonical
    let p = StackyFan::plain(p113());
    let t = line_bundle_cohomology(&p, &ints(&[-4, 0, 0]), 0).unwrap();
    assert_eq!(t.dims, fin(&[0, 0, 0]));
    assert_eq!(t.dims, fin(&cech_cohomology(&p, &ints(&[-4, 0, 0]))));
    let t = line_bundle_cohomology(&p, &ints(&[-5, 0, 0]), 0).unwrap();
    assert_eq!(t.dims, fin(&[0, 0, 1]));
}

#[test]
fn h0_is_section_polyhedron_count() {
    let sf = StackyFan::plain(h3());
    for a in [ints(&[1, 1, 0, 2]), ints(&[0, 0, 0, 3]), ints(&[2, 0, 1, 1])] {
        let t = line_bundle_cohomology(&sf, &a, 0).unwrap();
        let n = section_polyhedron_int(&sf.betas(), &a).lattice_points(None).unwrap().len();
        assert_eq!(t.dims[0], Dim::Finite(n));
    }
}

#[test]
fn non_complete_fan_gives_infinite_h0() {
    let sf = StackyFan::plain(flop_plus());
    let t = line_bundle_cohomology(&sf, &ints(&[0, 0, 0, 0]), 0).unwrap();
    assert_eq!(t.dims[0], Dim::Infinite);
    assert!(t.higher_vanish());
}

fn example_fans() -> Vec<(&'static str, StackyFan)> {
    vec![
        ("P1", StackyFan::plain(pn(1))),
        ("P2", StackyFan::plain(pn(2))),
        ("P3", StackyFan::plain(pn(3))),
        ("H3", StackyFan::plain(h3())),
        ("H1", StackyFan::plain(h1())),
        ("P1xP1", StackyFan::plain(p1xp1())),
        ("P113", StackyFan::plain(p113())),
        ("stacky H3", StackyFan::new(h3(), ints(&[1, 3, 1, 1])).unwrap()),
        ("Bl2P3", StackyFan::plain(bl2p3())),
    ]
}

#[test]
fn engine_matches_cech_oracle() {
    for (name, sf) in example_fans() {
        let engine = CohomologyEngine::new(&sf, 0).unwrap();
        let k = sf.fan.nrays();
        let mut runner = TestRunner::new(Config { cases: 50, ..Config::default() });
        runner
            .run(&prop::collection::vec(-4i64..4, k), |a| {
                let a = ints(&a);
                let fast = engine.cohomology(&a).unwrap();
                prop_assert_eq!(&fast.dims, &fin(&cech_cohomology(&sf, &a)), "{}", name);
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn serre_duality_on_smooth_complete_examples() {
    for (_, sf) in example_fans().into_iter().filter(|(n, _)| !["P113", "stacky H3"].contains(n)) {
        let engine = CohomologyEngine::new(&sf, 0).unwrap();
        let n = sf.fan.dim;
        let mut runner = TestRunner::new(Config { cases: 20, ..Config::default() });
        runner
            .run(&prop::collection::vec(-3i64..3, sf.fan.nrays()), |a| {
                let dual: Vec<i64> = a.iter().map(|x| -1 - x).collect();
                let h = engine.cohomology(&ints(&a)).unwrap().dims;
                let k = engine.cohomology(&ints(&dual)).unwrap().dims;
                for p in 0..=n {
                    prop_assert_eq!(&h[p], &k[n - p]);
                }
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn characteristic_switch_agrees_on_fans() {
    let sf = StackyFan::plain(bl2p3());
    let a = ints(&[-2, 1, 0, -1, 0, 1]);
    let c0 = line_bundle_cohomology(&sf, &a, 0).unwrap().dims;
    let c2 = line_bundle_cohomology(&sf, &a, 2).unwrap().dims;
    assert_eq!(c0, c2);
    assert!(line_bundle_cohomology(&sf, &a, 4).is_err());
}

#[test]
fn hom_examples() {
    let sf = StackyFan::plain(h3());
    let betas = sf.betas();
    let model = ToricModel::from_fan("H3", sf.clone(), None).unwrap();
    let zero = vec![rat(0, 1); 2];
    let h = hom_theta(&betas, &zero, &zero).unwrap();
    assert_eq!(h.dim, Dim::Finite(1));
    // witnesses for d5 = (1,1) and d2 = (−2,1)
    let t5 = vec![rat(1, 2), rat(-1, 12)];
    let t2 = vec![rat(1, 2), rat(1, 12)];
    assert_eq!(model.cl.degree(&ceiling_divisor(&betas, &t5)), ints(&[1, 1]));
    assert_eq!(model.cl.degree(&ceiling_divisor(&betas, &t2)), ints(&[-2, 1]));
    let h = hom_theta(&betas, &t5, &t2).unwrap();
    assert_eq!(h.dim, Dim::Finite(4));
    assert_eq!(h.basis, vec![ints(&[3, 0, 0, 0]), ints(&[2, 0, 1, 0]), ints(&[1, 0, 2, 0]), ints(&[0, 0, 3, 0])]);
}

#[test]
fn homzero_examples() {
    let sf = StackyFan::plain(h3());
    let engine = CohomologyEngine::new(&sf, 0).unwrap();
    let r = verify_homzero(&engine, &ints(&[0, 0, 0, 0]), &[rat(0, 1), rat(0, 1)]).unwrap();
    assert!(r.pass);
    assert_eq!(r.dims[0], Dim::Finite(1));
    // A = d5 divisor, θ witness of d2
    let model = ToricModel::from_fan("H3", sf.clone(), None).unwrap();
    let a = model.cl.lift(&ints(&[1, 1]));
    let r = verify_homzero(&engine, &a, &[rat(1, 2), rat(1, 12)]).unwrap();
    assert!(r.pass);
    assert_eq!(r.dims, fin(&[4, 0, 0]));
    // P(1,1,3), A = O(4), θ with class −1
    let p = StackyFan::plain(p113());
    let engine = CohomologyEngine::new(&p, 0).unwrap();
    let theta = [rat(1, 2), rat(1, 6)];
    let d = ceiling_divisor(&p.betas(), &theta);
    let pm = ToricModel::from_fan("P113", p.clone(), None).unwrap();
    assert_eq!(pm.cl.degree(&d), ints(&[1]));
    let r = verify_homzero(&engine, &ints(&[4, 0, 0]), &theta).unwrap();
    assert!(r.pass);
    let diff: Vec<Int> = ints(&[4, 0, 0]).iter().zip(&d).map(|(x, y)| x - y).collect();
    assert_eq!(r.dims, fin(&cech_cohomology(&p, &diff)));
    assert!(verify_homzero(&engine, &ints(&[-1, 0, 0]), &theta).is_err());
}

#[test]
fn demazure_battery_and_homzero_on_random_pairs() {
    let (n, fails) = common::suites::demazure(100, 17);
    assert!(fails.is_empty(), "{fails:#?}");
    assert!(n >= 1000);
}
