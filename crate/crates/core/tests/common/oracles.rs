//! Independent brute-force oracles.

use coxcat::exactlin::*;
use coxcat::fan::StackyFan;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Čech cohomology of O(D) on the affine cover by maximal cones, weight by weight.
/// Only valid when every cohomology group is finite dimensional (complete fans).
pub fn cech_cohomology(sf: &StackyFan, a: &[Int]) -> Vec<usize> {
    let n = sf.fan.dim;
    let betas = sf.betas();
    let cones = &sf.fan.cones;
    let k = cones.len();
    // weights live in the box spanned by vertices of the hyperplanes ⟨m,β⟩ = −a, −a−1
    let mut hyper: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (b, x) in betas.iter().zip(a) {
        hyper.push((rats_of(b), to_rat(&-x)));
        hyper.push((rats_of(b), to_rat(&(-x - 1))));
    }
    let mut lo = vec![Int::zero(); n];
    let mut hi = vec![Int::zero(); n];
    for sub in combinations(hyper.len(), n) {
        let m: Vec<Vec<Rat>> = sub.iter().map(|&i| hyper[i].0.clone()).collect();
        if rank_rat(&m) < n {
            continue;
        }
        let b: Vec<Rat> = sub.iter().map(|&i| hyper[i].1.clone()).collect();
        let v = solve_rat(&m, &b).unwrap();
        for i in 0..n {
            lo[i] = lo[i].clone().min(floor(&v[i]) - 1);
            hi[i] = hi[i].clone().max(ceil(&v[i]) + 1);
        }
    }
    // index sets of the Čech complex with the intersection cone rays
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    for p in 0..k {
        simplices[p] = combinations(k, p + 1);
    }
    let inter = |idx: &[usize]| -> Vec<usize> {
        let mut rays = cones[idx[0]].clone();
        for &j in &idx[1..] {
            rays.retain(|r| cones[j].contains(r));
        }
        rays
    };
    let rays_of: Vec<Vec<Vec<usize>>> = simplices.iter().map(|l| l.iter().map(|s| inter(s)).collect()).collect();
    let mut cache: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    let mut total = vec![0usize; n + 1];
    let poly = RationalPolyhedron::new(n);
    poly.visit_box(&lo, &hi, &mut |m| {
        let ok: Vec<bool> = betas.iter().zip(a).map(|(b, x)| dot_int(m, b) >= -x).collect();
        let dims = cache.entry(ok.clone()).or_insert_with(|| {
            let present: Vec<Vec<usize>> = (0..k)
                .map(|p| (0..simplices[p].len()).filter(|&i| rays_of[p][i].iter().all(|&r| ok[r])).collect())
                .collect();
            let mut ranks = vec![0usize; k + 1];
            for p in 0..k.saturating_sub(1) {
                // δ: C^p → C^{p+1}
                let src = &present[p];
                let tgt = &present[p + 1];
                let mut mat = vec![vec![Int::zero(); src.len()]; tgt.len()];
                for (r, &t) in tgt.iter().enumerate() {
                    let ts = &simplices[p + 1][t];
                    for skip in 0..ts.len() {
                        let face: Vec<usize> =
                            ts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                        if let Some(c) = src.iter().position(|&s| simplices[p][s] == face) {
                            mat[r][c] = if skip % 2 == 0 { Int::one() } else { -Int::one() };
                        }
                    }
                }
                ranks[p + 1] = rank_rat(&mat.iter().map(|r| rats_of(r)).collect::<Vec<_>>());
            }
            (0..k).map(|p| present[p].len() - ranks[p] - ranks[p + 1]).collect()
        });
        for p in 0..=n.min(k - 1) {
            total[p] += dims[p];
        }
        true
    });
    total
}

/// Brute-force Θ via the Frobenius grid (1/ℓ)M/M.
pub fn frobenius_grid(betas: &[Vec<Int>], n: usize, l: i64) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    let mut idx = vec![0i64; n];
    loop {
        let theta: Vec<Rat> = idx.iter().map(|&x| rat(x, l)).collect();
        out.push(betas.iter().map(|b| ceil(&dot_ri(&theta, b))).collect());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            idx[i] += 1;
            if idx[i] < l {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
