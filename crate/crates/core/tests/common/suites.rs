//! Seeded randomized suites shared by the test files and the acceptance runner.
//! Each returns (cases checked, failure descriptions).

use super::oracles::{cech_cohomology, frobenius_grid};
use super::*;
use coxcat::cohomology::{verify_homzero, CohomologyEngine};
use coxcat::divisor::is_nef_int;
use coxcat::exactlin::*;
use coxcat::fan::StackyFan;
use coxcat::gkz::secondary_fan;
use coxcat::model::ToricModel;
use coxcat::theta::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub type Outcome = (usize, Vec<String>);

pub fn complete_fans() -> Vec<(&'static str, StackyFan)> {
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

pub fn example_models() -> Vec<ToricModel> {
    let mut v: Vec<ToricModel> =
        complete_fans().into_iter().map(|(n, sf)| ToricModel::from_fan(n, sf, None).unwrap()).collect();
    v.push(ToricModel::from_fan("flop", StackyFan::plain(flop_plus()), None).unwrap());
    v
}

/// Engine against the Čech complex on random line bundles.
pub fn cech(cases: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    for (name, sf) in complete_fans() {
        let engine = CohomologyEngine::new(&sf, 0).unwrap();
        for _ in 0..cases {
            let a: Vec<Int> = (0..sf.fan.nrays()).map(|_| Int::from(rng.gen_range(-4i64..4))).collect();
            let fast = engine.cohomology(&a).unwrap().dims;
            let slow: Vec<Dim> = cech_cohomology(&sf, &a).into_iter().map(Dim::Finite).collect();
            n += 1;
            if fast != slow {
                fails.push(format!("{name} {a:?}: {fast:?} vs {slow:?}"));
            }
        }
    }
    (n, fails)
}

/// Random nef A (small combinations of the nef cone rays) and random Θ witnesses:
/// higher cohomology of A − d vanishes and h⁰ equals the lattice count of P_A ∩ (M − θ).
pub fn demazure(pairs: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    for m in example_models() {
        let sf = m.stacky().unwrap();
        let engine = CohomologyEngine::new(&sf, 0).unwrap();
        let gkz = secondary_fan(&m).unwrap();
        let nef = &gkz.chambers[0].rays;
        let th = enumerate_theta(&m.betas(), &m.cl, Variant::Standard);
        let mut got = 0;
        let mut tries = 0;
        while got < pairs && tries < 20 * pairs {
            tries += 1;
            let mut class = m.cl.zero();
            for r in nef {
                let c = Int::from(rng.gen_range(0i64..4));
                for (x, y) in class.iter_mut().zip(r) {
                    *x += &c * y;
                }
            }
            let a = m.cl.lift(&m.cl.reduce(&class));
            if !is_nef_int(&sf, &a).unwrap() {
                continue;
            }
            let e = &th[rng.gen_range(0..th.len())];
            got += 1;
            match verify_homzero(&engine, &a, &e.witness) {
                Ok(r) if r.pass => {}
                Ok(r) => {
                    fails.push(format!("{} A={a:?} θ={:?}: {:?} vs {:?}", m.name, e.witness, r.dims, r.predicted_h0))
                }
                Err(err) => fails.push(format!("{} A={a:?}: {err}", m.name)),
            }
        }
        if got < pairs {
            fails.push(format!("{}: only {got} nef samples", m.name));
        }
        n += got;
    }
    (n, fails)
}

/// Library oracle and an independent grid at the denominator bound both equal Θ.
pub fn frobenius() -> Outcome {
    let mut fails = Vec::new();
    let mut n = 0;
    for m in example_models() {
        let th = enumerate_theta(&m.betas(), &m.cl, Variant::Standard);
        let set: BTreeSet<Vec<Int>> = th.iter().map(|e| e.class.clone()).collect();
        let l = denominator_bound(&th);
        let l64 = i64::try_from(l).unwrap();
        let oracle = frobenius_oracle(&m.betas(), &m.cl, l64 as u64).unwrap();
        let grid: BTreeSet<Vec<Int>> =
            frobenius_grid(&m.betas(), m.dim, l64).iter().map(|d| m.cl.neg(&m.cl.degree(d))).collect();
        n += 1;
        if oracle != set || grid != set {
            fails.push(format!("{} at level {l64}", m.name));
        }
    }
    (n, fails)
}

/// Random points of the closed zonotope on P plus the open one on its complement lie in
/// the full zonotope (and in Θ when integral), for every interior wall of rank-2 examples.
pub fn minkowski(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    let mut n = 0;
    let zero = Rat::from_integer(Int::from(0));
    for m in example_models().into_iter().filter(|m| m.cl.free_rank == 2 && m.cl.torsion.is_empty()) {
        let gkz = secondary_fan(&m).unwrap();
        let ch = &gkz.chambers[0];
        let nef: Vec<Vec<Rat>> = ch.rays.iter().map(|r| rats_of(r)).collect();
        let full = Zonotope::full(&m.cl);
        for pc in interior_walls(&m.cl, &ch.fan, &nef).unwrap() {
            let comp: Vec<usize> = (0..m.cl.nrays()).filter(|r| !pc.rays.contains(r)).collect();
            let closed = Zonotope::on(&m.cl, &pc.rays, Side::Closed);
            let open = Zonotope::on(&m.cl, &comp, Side::Open);
            // random points of the sum; lattice ones must also be in Θ
            for _ in 0..samples {
                let den = rng.gen_range(1i64..7);
                let mut x = vec![zero.clone(); 2];
                for (g, side) in
                    closed.generators.iter().map(|g| (g, true)).chain(open.generators.iter().map(|g| (g, false)))
                {
                    let t = if side {
                        Rat::new(Int::from(-rng.gen_range(0..=den)), Int::from(den))
                    } else {
                        Rat::new(Int::from(-rng.gen_range(1..=den)), Int::from(den + 1))
                    };
                    for c in 0..2 {
                        x[c] += &t * Rat::from_integer(g[c].clone());
                    }
                }
                if !full.contains(&x) {
                    fails.push(format!("{} wall {:?}: {x:?} outside Z", m.name, pc.rays));
                }
                if x.iter().all(|v| v.is_integer()) {
                    let p: Vec<Int> = x.iter().map(|v| v.to_integer()).collect();
                    if theta_membership(&m.betas(), &m.cl, &p).is_none() {
                        fails.push(format!("{} wall {:?}: {p:?} not in Θ", m.name, pc.rays));
                    }
                }
            }
            n += samples;
            // and exhaustively on the lattice points of the sum
            for a in closed.lattice_points() {
                for b in open.lattice_points() {
                    let p: Vec<Int> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
                    n += 1;
                    if !full.contains(&rats_of(&p)) {
                        fails.push(format!("{} wall {:?}: {p:?} outside Z", m.name, pc.rays));
                    }
                }
            }
        }
    }
    (n, fails)
}
