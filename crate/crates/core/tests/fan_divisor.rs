use coxcat::divisor::*;
use coxcat::exactlin::*;
use coxcat::fan::*;
use coxcat::model::ToricModel;
use num_traits::Zero;
use proptest::prelude::*;

fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    validate_fan(dim, rays.iter().map(|r| ints(r)).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

fn h3() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 3], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

fn p113() -> Fan {
    fan(2, &[&[1, 0], &[-1, 3], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

fn pn(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    validate_fan(n, rays.iter().map(|r| ints(r)).collect(), cones).unwrap()
}

fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

#[test]
fn validation_examples() {
    let p1 = fan(1, &[&[1], &[-1]], &[&[0], &[1]]);
    assert!(p1.is_complete());
    let bad = validate_fan(2, vec![ints(&[2, 0]), ints(&[0, 1])], vec![vec![0, 1]]).unwrap_err();
    assert_eq!(bad, vec![FanViolation::NonPrimitiveRay { ray: 0 }]);
    let f = h3();
    assert!(f.is_simplicial() && f.is_complete());
    // overlapping cones
    let bad =
        validate_fan(2, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])], vec![vec![0, 1], vec![0, 2]]).unwrap_err();
    assert_eq!(bad, vec![FanViolation::BadIntersection { a: 0, b: 1 }]);
    let bad = validate_fan(1, vec![ints(&[1]), ints(&[-1])], vec![vec![0, 1]]).unwrap_err();
    assert_eq!(bad, vec![FanViolation::NotStronglyConvex { cone: 0 }]);
}

#[test]
fn minimal_cone_relations() {
    let f = h3();
    let r = minimal_cone_relation(&f, &ints(&[0, 1])).unwrap();
    assert_eq!((r.cone.clone(), r.a_v.clone(), r.coeffs.clone()), (vec![1], int(1), ints(&[1])));
    let p = p113();
    let r = minimal_cone_relation(&p, &ints(&[0, 1])).unwrap();
    assert_eq!((r.cone, r.a_v, r.coeffs), (vec![0, 1], int(3), ints(&[1, 1])));
    let r = minimal_cone_relation(&f, &ints(&[1, 1])).unwrap();
    assert_eq!((r.cone, r.a_v, r.coeffs), (vec![0, 1], int(1), ints(&[1, 1])));
    let half = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
    assert!(minimal_cone_relation(&half, &ints(&[-1, 0])).is_err());
}

fn check_refinement(fans: &[Fan], r: &Refinement) {
    let lam = &r.lambda;
    let bl = beta_matrix(lam);
    for (f, phi) in fans.iter().zip(&r.certificates) {
        let bf = beta_matrix(&StackyFan::plain(f.clone()));
        assert_eq!(bf.mul(phi), bl);
        // every Λ cone sits in a cone of f
        for c in &lam.fan.cones {
            let inside = f.cones.iter().any(|fc| {
                c.iter().all(|&i| {
                    let v = rats_of(&lam.fan.rays[i]);
                    let sub = Fan { dim: f.dim, rays: f.rays.clone(), cones: vec![fc.clone()] };
                    sub.locate(&v).is_some()
                })
            });
            assert!(inside);
        }
    }
    for (rho, rels) in r.relations.iter().enumerate() {
        let l = rels.iter().fold(int(1), |acc, x| lcm(&acc, &x.a_v));
        assert_eq!(l, lam.mult[rho]);
    }
}

#[test]
fn refinement_examples() {
    let f = h3();
    let r = common_stacky_refinement(std::slice::from_ref(&f)).unwrap();
    assert_eq!(r.lambda.fan.cones, f.cones);
    assert!(r.lambda.is_plain());
    check_refinement(std::slice::from_ref(&f), &r);

    let fans = [h3(), p113()];
    let r = common_stacky_refinement(&fans).unwrap();
    assert_eq!(r.lambda.fan.rays, f.rays);
    assert_eq!(r.lambda.mult, ints(&[1, 3, 1, 1]));
    check_refinement(&fans, &r);

    // the two small resolutions of the conifold
    let rays: &[&[i64]] = &[&[0, 0, 1], &[1, 1, 1], &[1, 0, 1], &[0, 1, 1]];
    let plus = fan(3, rays, &[&[0, 2, 3], &[1, 2, 3]]);
    let minus = fan(3, rays, &[&[0, 1, 2], &[0, 1, 3]]);
    let fans = [plus, minus];
    let r = common_stacky_refinement(&fans).unwrap();
    assert!(r.lambda.is_plain());
    assert_eq!(r.lambda.fan.cones.len(), 4);
    assert_eq!(r.lambda.fan.rays.len(), 5);
    assert_eq!(r.lambda.fan.rays[4], ints(&[1, 1, 2]));
    check_refinement(&fans, &r);
}

#[test]
fn class_group_examples() {
    let m = ToricModel::from_fan("P2", StackyFan::plain(pn(2)), None).unwrap();
    assert_eq!(m.cl.free_rank, 1);
    assert_eq!(m.degrees(), vec![ints(&[1]); 3]);
    let m = ToricModel::from_fan("H3", StackyFan::plain(h3()), None).unwrap();
    assert_eq!(m.degrees(), vec![ints(&[1, 0]), ints(&[-3, 1]), ints(&[1, 0]), ints(&[0, 1])]);
    let m = ToricModel::from_fan("P113", StackyFan::plain(p113()), None).unwrap();
    assert_eq!(m.degrees(), vec![ints(&[1]), ints(&[1]), ints(&[3])]);
    // torsion: P^1 with multipliers (2, 2) has Cl = Z ⊕ Z/2
    let sf = StackyFan::new(fan(1, &[&[1], &[-1]], &[&[0], &[1]]), ints(&[2, 2])).unwrap();
    let m = ToricModel::from_fan("stacky P1", sf, None).unwrap();
    assert_eq!(m.cl.free_rank, 1);
    assert_eq!(m.cl.torsion, ints(&[2]));
    for c in [ints(&[1, 0]), ints(&[0, 1]), ints(&[-2, 1])] {
        assert_eq!(m.cl.degree(&m.cl.lift(&c)), m.cl.reduce(&c));
    }
}

#[test]
fn cox_mode_matches_fan_mode() {
    let m = ToricModel::from_fan("H3", StackyFan::plain(h3()), None).unwrap();
    let c = ToricModel::from_cox("H3", &m.degrees(), 2, vec![]).unwrap();
    assert_eq!(c.degrees(), m.degrees());
    assert!(c.is_plain());
    let cl = &c.cl;
    // exactness
    let betas = c.betas();
    for k in 0..2 {
        let mut m_vec = vec![int(0); 2];
        m_vec[k] = int(1);
        assert!(cl.degree(&principal(&betas, &m_vec)).iter().all(|x| x.is_zero()));
    }
    let flop = ToricModel::from_cox("flop", &[ints(&[1]), ints(&[1]), ints(&[-1]), ints(&[-1])], 1, vec![]).unwrap();
    assert_eq!(flop.dim, 3);
}

#[test]
fn support_functions_and_nef() {
    let sf = StackyFan::plain(h3());
    let z = support_function(&sf, &rats(&[0, 0, 0, 0])).unwrap();
    assert!(z.forms.iter().all(|f| f.iter().all(|x| x.is_zero())));
    let a = rats(&[0, 0, 0, 1]);
    let f = support_function(&sf, &a).unwrap();
    assert_eq!(f.eval(&sf, &rats(&[0, -1])), Some(rat(-1, 1)));
    let p1 = StackyFan::plain(fan(1, &[&[1], &[-1]], &[&[0], &[1]]));
    let f = support_function(&p1, &rats(&[1, 0])).unwrap();
    assert_eq!(f.forms, vec![rats(&[-1]), rats(&[0])]);

    assert!(is_nef(&sf, &rats(&[0, 0, 0, 0])).unwrap());
    let m = ToricModel::from_fan("H3", sf.clone(), None).unwrap();
    assert!(is_nef_int(&sf, &m.cl.lift(&ints(&[1, 1]))).unwrap());
    assert!(!is_nef_int(&sf, &m.cl.lift(&ints(&[-1, 0]))).unwrap());
}

#[test]
fn section_polyhedra() {
    let p1 = StackyFan::plain(fan(1, &[&[1], &[-1]], &[&[0], &[1]]));
    let p = section_polyhedron_int(&p1.betas(), &ints(&[3, 0]));
    assert_eq!(p.lattice_points(None).unwrap().len(), 4);
    let p2 = StackyFan::plain(pn(2));
    let p = section_polyhedron_int(&p2.betas(), &ints(&[-1, 0, 0]));
    assert!(p.lattice_points(None).unwrap().is_empty());
}

#[test]
fn effectivity() {
    let m = ToricModel::from_fan("H3", StackyFan::plain(h3()), None).unwrap();
    assert_eq!(effective(&m.cl, &ints(&[0, 0])), Some(vec![int(0); 4]));
    assert_eq!(effective(&m.cl, &ints(&[3, -1])), None);
    assert_eq!(effective(&m.cl, &ints(&[-3, 1])), Some(ints(&[0, 1, 0, 0])));
}

fn nef_cone_sample(v: &[u8]) -> Vec<Int> {
    // nef classes on H3 are the cone spanned by (1,0) and (0,1)
    ints(&[v[0] as i64, v[1] as i64])
}

proptest! {
    #[test]
    fn nef_closed_under_sum_and_principal(a in prop::collection::vec(0u8..4, 2), b in prop::collection::vec(0u8..4, 2), m in prop::collection::vec(-3i64..4, 2)) {
        let sf = StackyFan::plain(h3());
        let model = ToricModel::from_fan("H3", sf.clone(), None).unwrap();
        let da = model.cl.lift(&nef_cone_sample(&a));
        let db = model.cl.lift(&nef_cone_sample(&b));
        prop_assert!(is_nef_int(&sf, &da).unwrap());
        prop_assert!(is_nef_int(&sf, &db).unwrap());
        let sum: Vec<Int> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
        prop_assert!(is_nef_int(&sf, &sum).unwrap());
        let pr = principal(&sf.betas(), &ints(&m));
        let shifted: Vec<Int> = da.iter().zip(&pr).map(|(x, y)| x + y).collect();
        prop_assert!(is_nef_int(&sf, &shifted).unwrap());
        // section polyhedron translates by −m
        let p0 = section_polyhedron_int(&sf.betas(), &da).lattice_points(None).unwrap();
        let p1 = section_polyhedron_int(&sf.betas(), &shifted).lattice_points(None).unwrap();
        let moved: Vec<Vec<Int>> = p0.iter().map(|p| p.iter().zip(&m).map(|(x, y)| x - int(*y)).collect()).collect();
        let mut moved = moved;
        moved.sort();
        prop_assert_eq!(moved, p1);
    }

    #[test]
    fn effective_matches_brute_force(c0 in -6i64..7, c1 in -3i64..4) {
        let model = ToricModel::from_fan("H3", StackyFan::plain(h3()), None).unwrap();
        let degs = model.degrees();
        let fast = effective(&model.cl, &ints(&[c0, c1]));
        if let Some(x) = &fast {
            prop_assert!(x.iter().all(|v| *v >= int(0)));
            prop_assert_eq!(model.cl.degree(x), ints(&[c0, c1]));
        }
        let mut slow = false;
        for e0 in 0..8 { for e1 in 0..4 { for e2 in 0..8 { for e3 in 0..4 {
            let e = [e0, e1, e2, e3];
            let d0: i64 = (0..4).map(|i| e[i] * i64::try_from(degs[i][0].clone()).unwrap()).sum();
            let d1: i64 = (0..4).map(|i| e[i] * i64::try_from(degs[i][1].clone()).unwrap()).sum();
            if d0 == c0 && d1 == c1 { slow = true; }
        }}}}
        prop_assert_eq!(fast.is_some(), slow);
    }
}

#[test]
fn zero_is_principal() {
    let sf = StackyFan::plain(h3());
    assert!(principal(&sf.betas(), &ints(&[0, 0])).iter().all(|x| x.is_zero()));
}
