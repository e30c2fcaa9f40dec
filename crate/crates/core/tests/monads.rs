#![allow(clippy::type_complexity, clippy::needless_range_loop)]

use coxcat::cohomology::line_bundle_cohomology;
use coxcat::exactlin::*;
use coxcat::gkz::*;
use coxcat::io::{parse_complex, parse_model};
use coxcat::model::ToricModel;
use coxcat::monads::*;
use coxcat::Result;
use std::collections::BTreeMap;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn complex(name: &str) -> (ToricModel, ThetaComplex) {
    parse_complex(&fixture(name)).unwrap()
}

fn single(model: &ToricModel, class: &[i64]) -> ThetaComplex {
    let mut terms = BTreeMap::new();
    terms.insert(0, vec![Summand { class: ints(class), multiplicity: 1, witness: None }]);
    ThetaComplex { variables: ThetaComplex::default_variables(model.nrays()), terms, differentials: BTreeMap::new() }
}

fn shape(r: &RestrictedComplex) -> Vec<(i64, Vec<(Vec<i64>, usize)>)> {
    r.shape()
        .into_iter()
        .map(|(k, v)| (k, v.into_iter().map(|(c, m)| (c.iter().map(|x| x.try_into().unwrap()).collect(), m)).collect()))
        .collect()
}

fn sh(v: &[(i64, &[(&[i64], usize)])]) -> Vec<(i64, Vec<(Vec<i64>, usize)>)> {
    v.iter().map(|(k, t)| (*k, t.iter().map(|(c, m)| (c.to_vec(), *m)).collect())).collect()
}

fn face_at(g: &SecondaryFan, sample: &[i64]) -> usize {
    g.faces.iter().position(|f| f.sample == ints(sample)).unwrap()
}

/// Banded monad of O(c) on P1: S(-1)^c → S^{c+1} in degrees −1, 0 for c ≥ 0,
/// S(-1)^{-c} → S^{-c-1} in degrees 0, 1 for c ≤ −2, and S(c) for c = −1.
fn p1_line_bundle(model: &ToricModel, c: i64) -> ThetaComplex {
    let vars = ThetaComplex::default_variables(2);
    let (x0, x1) = (Poly::parse("x0", &vars).unwrap(), Poly::parse("x1", &vars).unwrap());
    let mut terms = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    let s = |class: i64, m: usize| Summand { class: ints(&[class]), multiplicity: m, witness: None };
    if c == -1 {
        return single(model, &[-1]);
    }
    let (a, b, lo) = if c >= 0 { (c as usize, c as usize + 1, -1) } else { ((-c) as usize, (-c - 1) as usize, 0) };
    terms.insert(lo, vec![s(-1, a)]);
    terms.insert(lo + 1, vec![s(0, b)]);
    let mut m = vec![vec![Poly::zero(); a]; b];
    for j in 0..a {
        if c >= 0 {
            m[j][j] = x0.clone();
            m[j + 1][j] = x1.clone();
        } else {
            if j < b {
                m[j][j] = x0.clone();
            }
            if j >= 1 {
                m[j - 1][j] = x1.clone();
            }
        }
    }
    differentials.insert(lo, m);
    ThetaComplex { variables: vars, terms, differentials }
}

#[test]
fn polynomial_parse_and_render() {
    let v = ThetaComplex::default_variables(6);
    let p = Poly::parse("x1*x3 - x2^2*x4", &v).unwrap();
    assert_eq!(p.terms.len(), 2);
    assert_eq!(Poly::parse(&p.render(&v), &v).unwrap(), p);
    let q = Poly::parse(" -3*x0^2 + 2 + x0^2*2 ", &v).unwrap();
    assert_eq!(q.render(&v), "-x0^2 + 2");
    assert!(Poly::parse("x0 - x0", &v).unwrap().is_zero());
    for bad in ["", "x9", "x0^", "x0 x1", "2*"] {
        assert!(matches!(Poly::parse(bad, &v), Err(coxcat::Error::Schema(_))), "{bad}");
    }
    let prod = Poly::parse("x0 + x1", &v).unwrap().mul(&Poly::parse("x0 - x1", &v).unwrap());
    assert_eq!(prod, Poly::parse("x0^2 - x1^2", &v).unwrap());
}

#[test]
fn validate_examples() {
    let p1 = parse_model(&fixture("p1")).unwrap();
    assert!(validate_complex(&single(&p1, &[0]), &p1).valid);
    for name in ["diagonal_p1", "twisted_cubic", "five_points", "p1_o_minus3"] {
        let (m, c) = complex(name);
        let v = validate_complex(&c, &m);
        assert!(v.valid, "{name}: {:?}", v.violations);
    }
    let (m, c) = complex("twisted_cubic");
    assert_eq!(validate_complex(&c, &m).composites_checked, vec![-2]);
}

#[test]
fn validate_rejects_broken_complexes() {
    let (m, mut c) = complex("twisted_cubic");
    // swap two entries of a syzygy column between rows of different degree
    let d = c.differentials.get_mut(&-2).unwrap();
    let t = d[0][0].clone();
    d[0][0] = d[1][0].clone();
    d[1][0] = t;
    let v = validate_complex(&c, &m);
    assert!(!v.valid);
    assert!(v.violations.iter().any(|s| s.contains("degree")));

    let (m, mut c) = complex("twisted_cubic");
    let vars = c.variables.clone();
    c.differentials.get_mut(&-2).unwrap()[2][0] = Poly::parse("x1 + x2", &vars).unwrap();
    let v = validate_complex(&c, &m);
    assert!(v.violations.iter().any(|s| s.contains("is not zero")), "{:?}", v.violations);

    let (m, mut c) = complex("five_points");
    c.differentials.get_mut(&-1).unwrap()[0][0] = Poly::parse("x2 + x3", &c.variables.clone()).unwrap();
    let v = validate_complex(&c, &m);
    assert!(v.violations.iter().any(|s| s.contains("not homogeneous")));

    let (m, mut c) = complex("five_points");
    c.differentials.get_mut(&-1).unwrap().pop();
    assert!(validate_complex(&c, &m).violations.iter().any(|s| s.contains("should be")));
}

#[test]
fn koszul_complex_on_p2() {
    let p2 = parse_model(&fixture("p2")).unwrap();
    let v = ThetaComplex::default_variables(3);
    let p = |s: &str| Poly::parse(s, &v).unwrap();
    let s = |c: i64, m: usize| vec![Summand { class: ints(&[c]), multiplicity: m, witness: None }];
    let mut terms = BTreeMap::new();
    terms.insert(0, s(1, 1));
    terms.insert(-1, s(0, 3));
    terms.insert(-2, s(-1, 3));
    terms.insert(-3, s(-2, 1));
    let mut d = BTreeMap::new();
    d.insert(-1, vec![vec![p("x0"), p("x1"), p("x2")]]);
    d.insert(
        -2,
        vec![vec![p("-x1"), p("-x2"), p("0")], vec![p("x0"), p("0"), p("-x2")], vec![p("0"), p("x0"), p("x1")]],
    );
    d.insert(-3, vec![vec![p("x2")], vec![p("-x1")], vec![p("x0")]]);
    let c = ThetaComplex { variables: v.clone(), terms, differentials: d };
    assert!(validate_complex(&c, &p2).valid);
    // exact complex: the strand k^3 → k^3 has full rank
    for ch in [0, 2, 7] {
        let st = degree_zero_strand(&p2, &c, ch).unwrap();
        assert_eq!(st.dims[&0], 3);
        assert_eq!(st.dims[&-1], 3);
        assert_eq!(st.ranks[&-1], 3);
        assert!(st.cohomology.values().all(|&h| h == 0));
    }
    // the summand S(1) is not in Θ: restriction needs a witness
    let g = secondary_fan(&p2).unwrap();
    assert!(matches!(restrict_to_face(&p2, &c, &g.faces[0]), Err(coxcat::Error::Precondition(_))));
}

#[test]
fn twisted_cubic_restrictions() {
    let (m, c) = complex("twisted_cubic");
    let g = secondary_fan(&m).unwrap();
    let mut seen = (0, 0, 0);
    let conic = Poly::parse("x1*x3 - x2^2*x4", &c.variables).unwrap();
    for f in &g.faces {
        let r = restrict_to_face(&m, &c, f).unwrap();
        assert!(r.d_squared_zero);
        let (dim, nr) = (r.space.dim, r.space.rays.len());
        if dim == 3 && nr == 4 {
            seen.0 += 1;
            assert_eq!(shape(&r), sh(&[(-2, &[(&[-3], 2)]), (-1, &[(&[-2], 3)]), (0, &[(&[0], 1)])]));
        }
        if dim == 2 && nr == 4 && shape(&r) == sh(&[(-1, &[(&[-2, -1], 1)]), (0, &[(&[0, 0], 1)])]) {
            // two copies of H1; we want the one whose map is the conic
            if r.differentials[&-1] == vec![vec![conic.clone()]] {
                seen.1 += 1;
            }
        }
        if dim == 2 && nr == 3 && shape(&r) == sh(&[(-1, &[(&[-2], 1)]), (0, &[(&[0], 1)])]) {
            seen.2 += 1;
        }
    }
    assert_eq!(seen.0, 4);
    assert_eq!(seen.1, 1);
    assert!(seen.2 >= 2);
    // the P2 whose conic is x1x3 − x2²x4 (x4 a unit there)
    let p2_conic = g.faces.iter().any(|f| {
        let r = restrict_to_face(&m, &c, f).unwrap();
        r.space.rays.len() == 3 && r.differentials.get(&-1) == Some(&vec![vec![conic.clone()]])
    });
    assert!(p2_conic);
}

#[test]
fn hirzebruch_restriction_table() {
    let h3 = parse_model(&fixture("h3")).unwrap();
    let g = secondary_fan(&h3).unwrap();
    let cols = [g.chambers[0].face, g.chambers[1].face, face_at(&g, &[1, 0]), face_at(&g, &[0, 0])];
    assert_eq!(g.faces[cols[1]].data.quotient_rays.len(), 3);
    // None = the summand restricts to zero
    let table: [(&[i64], [Option<&[i64]>; 4]); 6] = [
        (&[0, 0], [Some(&[0, 0]), Some(&[0]), Some(&[0]), Some(&[])]),
        (&[-1, 0], [Some(&[-1, 0]), Some(&[-1]), Some(&[-1]), None]),
        (&[2, -1], [Some(&[2, -1]), Some(&[-1]), None, None]),
        (&[1, -1], [Some(&[1, -1]), Some(&[-2]), None, None]),
        (&[0, -1], [Some(&[0, -1]), Some(&[-3]), None, None]),
        (&[-1, -1], [Some(&[-1, -1]), Some(&[-4]), None, None]),
    ];
    for (row, expect) in table {
        let c = single(&h3, row);
        for (col, want) in cols.iter().zip(expect) {
            let r = restrict_to_face(&h3, &c, &g.faces[*col]).unwrap();
            let got = r.terms[&0].first().map(|s| s.label.clone());
            assert_eq!(got, want.map(ints), "row {row:?} face {col}");
        }
    }
    // the wall (0,1) gives the same P(1,1,3) column
    let wall = face_at(&g, &[0, 1]);
    for (row, expect) in table {
        let r = restrict_to_face(&h3, &single(&h3, row), &g.faces[wall]).unwrap();
        assert_eq!(r.terms[&0].first().map(|s| s.label.clone()), expect[1].map(ints));
    }
}

#[test]
fn five_points_restrictions() {
    let (m, c) = complex("five_points");
    let g = secondary_fan(&m).unwrap();
    let p1 = restrict_to_face(&m, &c, &g.faces[face_at(&g, &[1, 0])]).unwrap();
    assert_eq!(shape(&p1), sh(&[(-1, &[(&[-1], 5)]), (0, &[(&[0], 5)])]));
    assert!(p1.d_squared_zero);
    let pt = restrict_to_face(&m, &c, &g.faces[face_at(&g, &[0, 0])]).unwrap();
    assert_eq!(shape(&pt), sh(&[(0, &[(&[], 5)])]));
    assert!(pt.differentials.is_empty());
    let p113 = restrict_to_face(&m, &c, &g.faces[g.chambers[1].face]).unwrap();
    assert_eq!(shape(&p113), sh(&[(-2, &[(&[-4], 5)]), (-1, &[(&[-3], 5), (&[-1], 5)]), (0, &[(&[0], 5)])]));
    let h3 = restrict_to_face(&m, &c, &g.faces[g.chambers[0].face]).unwrap();
    assert!(h3.dropped.is_empty());
    let st = degree_zero_strand(&m, &c, 0).unwrap();
    assert_eq!(st.cohomology, [(-2, 0), (-1, 0), (0, 5)].into_iter().collect());
}

#[test]
fn strands() {
    let p1 = parse_model(&fixture("p1")).unwrap();
    let st = degree_zero_strand(&p1, &single(&p1, &[0]), 0).unwrap();
    assert_eq!(st.cohomology, [(0, 1)].into_iter().collect());
    let (m, c) = complex("p1_o_minus3");
    let st = degree_zero_strand(&m, &c, 0).unwrap();
    assert_eq!(st.dims, [(0, 0), (1, 2)].into_iter().collect());
    assert_eq!(st.cohomology, [(0, 0), (1, 2)].into_iter().collect());
    let (m, c) = complex("diagonal_p1");
    let st = degree_zero_strand(&m, &c, 0).unwrap();
    assert_eq!(st.cohomology, [(-1, 0), (0, 1)].into_iter().collect());
    // the flop's S_0 is infinite
    let flop = parse_model(&fixture("flop")).unwrap();
    assert!(degree_zero_strand(&flop, &single(&flop, &[0]), 0).is_err());
}

#[test]
fn strand_matches_line_bundle_cohomology() {
    let p1 = parse_model(&fixture("p1")).unwrap();
    let sf = p1.stacky().unwrap();
    for c in -6..=4 {
        let cx = p1_line_bundle(&p1, c);
        assert!(validate_complex(&cx, &p1).valid, "{c}");
        let st = degree_zero_strand(&p1, &cx, 0).unwrap();
        let h = line_bundle_cohomology(&sf, &ints(&[c, 0]), 0).unwrap();
        for i in 0..2 {
            let got = st.cohomology.get(&(i as i64)).copied().unwrap_or(0);
            assert_eq!(Dim::Finite(got), h.dims[i], "O({c}) h^{i}");
        }
    }
    // each Θ element of the examples, as a one-term complex
    for name in ["h3", "bl2p3", "p113", "p3"] {
        let m = parse_model(&fixture(name)).unwrap();
        let sf = m.stacky().unwrap();
        for e in coxcat::theta::enumerate_theta(&m.betas(), &m.cl, coxcat::theta::Variant::Standard) {
            let st = degree_zero_strand(&m, &single_class(&m, &e.class), 0).unwrap();
            let h = line_bundle_cohomology(&sf, &m.cl.lift(&e.class), 0).unwrap();
            assert_eq!(Dim::Finite(st.cohomology[&0]), h.dims[0]);
            assert!(h.higher_vanish());
        }
    }
}

fn single_class(m: &ToricModel, c: &[Int]) -> ThetaComplex {
    let mut cx = single(m, &[0]);
    cx.terms.get_mut(&0).unwrap()[0].class = c.to_vec();
    cx
}

#[test]
fn vanishing_reports() {
    let (m, c) = complex("twisted_cubic");
    let g = secondary_fan(&m).unwrap();
    let r = vanishing_report(&m, &g, &c).unwrap();
    assert!(r.pass);
    assert_eq!(r.faces.len(), g.faces.len());
    assert!(r.faces.iter().all(|f| f.positive_survivors.is_empty()));
    let (m, c) = complex("p1_o_minus3");
    let g = secondary_fan(&m).unwrap();
    let r = vanishing_report(&m, &g, &c).unwrap();
    assert!(!r.pass);
    assert_eq!(r.offending, vec![1]);
    let s = vanishing_report(&m, &g, &single(&m, &[0])).unwrap();
    assert!(s.pass);
}

/// Sections of O_{X_Γ}(label) against {m ∈ M : m − θ ∈ L^⊥, ⟨m,u_ρ⟩ ≥ ⟨θ,u_ρ⟩ on tight rays}.
fn dichotomy_check(m: &ToricModel, g: &SecondaryFan) -> Result<usize> {
    let th = coxcat::theta::enumerate_theta(&m.betas(), &m.cl, coxcat::theta::Variant::Standard);
    let mut checked = 0;
    for f in &g.faces {
        let data = &f.data;
        for e in &th {
            let r = restrict_to_face(m, &single_class(m, &e.class), f)?;
            let kept = r.terms[&0].len();
            assert_eq!(kept + r.dropped.len(), 1);
            let mut p = RationalPolyhedron::new(m.dim);
            for l in &data.lineality {
                p.equal(rats_of(l), dot_ri(&e.witness, l));
            }
            for j in 0..m.nrays() {
                if !data.contracted.contains(&j) {
                    p.ge(rats_of(&m.rays[j]), dot_ri(&e.witness, &m.rays[j]));
                }
            }
            let direct = p.count_lattice();
            if kept == 0 {
                assert_eq!(direct, Dim::Finite(0));
                continue;
            }
            let label = &r.terms[&0][0].label;
            let on_face = match &r.space.cl {
                None => Dim::Finite(1),
                Some(cl) => {
                    let a = cl.lift(label);
                    coxcat::divisor::section_polyhedron_int(&r.space.rays, &a).count_lattice()
                }
            };
            assert_eq!(direct, on_face, "{} face {} class {:?}", m.name, f.id, e.class);
            checked += 1;
        }
    }
    Ok(checked)
}

#[test]
fn restriction_dichotomy_on_every_face() {
    for name in ["h3", "bl2p3", "p113", "h1", "p2"] {
        let m = parse_model(&fixture(name)).unwrap();
        let g = secondary_fan(&m).unwrap();
        assert!(dichotomy_check(&m, &g).unwrap() > 0);
    }
}

#[test]
fn lperp_test_worked_example() {
    // P1 face of H3: L is spanned by (0,1)
    let l = vec![ints(&[0, 1])];
    assert!(in_lperp_plus_m(&l, &[rat(-1, 2), rat(0, 1)]).unwrap());
    assert!(in_lperp_plus_m(&l, &[rat(1, 3), rat(2, 1)]).unwrap());
    assert!(!in_lperp_plus_m(&l, &[rat(0, 1), rat(-1, 3)]).unwrap());
    assert!(in_lperp_plus_m(&[ints(&[0, 2])], &[rat(0, 1), rat(1, 2)]).is_err());
}
