//! Cohomology of line bundles on toric stacks through the reduced homology of
//! the sets V_{D,m}, and Hom spaces between Bondal–Thomsen line bundles.

use crate::error::{pre, Result};
use crate::exactlin::{
    ceil, combinations, dot_int, dot_ri, rank_mod_p, rank_rat, rats_of, to_rat, Dim, Int, Rat, RationalPolyhedron,
};
use crate::fan::StackyFan;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Reduced Betti numbers; entry `k` is the rank of H̃_{k−1}.
pub fn reduced_homology(facets: &[Vec<usize>], characteristic: u64) -> Vec<usize> {
    let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        for k in 1..=f.len() {
            if faces.len() < k {
                faces.resize(k, BTreeSet::new());
            }
            for s in combinations(f.len(), k) {
                faces[k - 1].insert(s.iter().map(|&i| f[i]).collect());
            }
        }
    }
    // chain groups: C_{-1} = one empty face, C_k = faces with k+1 vertices
    let mut sizes = vec![1usize];
    let mut lists: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for layer in &faces {
        sizes.push(layer.len());
        lists.push(layer.iter().cloned().collect());
    }
    // rank of ∂: C_k → C_{k−1} for k = 0.. (index k+1 in lists)
    let mut ranks = vec![0usize; lists.len() + 1];
    for j in 1..lists.len() {
        let src = &lists[j];
        let tgt = &lists[j - 1];
        let pos: std::collections::BTreeMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut m = vec![vec![Int::zero(); src.len()]; tgt.len()];
        for (c, face) in src.iter().enumerate() {
            for skip in 0..face.len() {
                let b: Vec<usize> = face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let sign = if skip % 2 == 0 { Int::one() } else { -Int::one() };
                m[pos[&b]][c] = sign;
            }
        }
        ranks[j] = if characteristic == 0 {
            rank_rat(&m.iter().map(|r| rats_of(r)).collect::<Vec<_>>())
        } else {
            rank_mod_p(&m, characteristic)
        };
    }
    (0..lists.len()).map(|j| sizes[j] - ranks[j] - ranks[j + 1]).collect()
}

/// A region of weights sharing the same V-set, with its homology contribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellContribution {
    pub degree: usize,
    /// Rays ρ with ⟨m, β_ρ⟩ < −a_ρ.
    pub negative_rays: Vec<usize>,
    pub rank: usize,
    pub weights: Dim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub dims: Vec<Dim>,
    pub cells: Vec<CellContribution>,
    pub characteristic: u64,
    /// Some multiplier exceeds 1, so the raw β-pairing formula was used.
    pub stacky: bool,
}

impl CohomologyTable {
    pub fn higher_vanish(&self) -> bool {
        self.dims.iter().skip(1).all(|d| d.is_zero())
    }

    pub fn h0(&self) -> &Dim {
        &self.dims[0]
    }
}

pub fn add_dim(a: &Dim, b: &Dim, times: usize) -> Dim {
    match (a, b) {
        (_, Dim::Finite(0)) => a.clone(),
        _ if times == 0 => a.clone(),
        (Dim::Finite(x), Dim::Finite(y)) => Dim::Finite(x + y * times),
        _ => Dim::Infinite,
    }
}

/// Nerve data of a simplicial stacky fan, reusable across divisors.
#[derive(Clone, Debug)]
pub struct CohomologyEngine {
    pub sf: StackyFan,
    betas: Vec<Vec<Int>>,
    used: Vec<usize>,
    /// Non-acyclic full subcomplexes: (vertex set, ranks of H̃^{p−1} indexed by p).
    cells: Vec<(Vec<usize>, Vec<usize>)>,
    characteristic: u64,
}

impl CohomologyEngine {
    pub fn new(sf: &StackyFan, characteristic: u64) -> Result<Self> {
        if !sf.fan.is_simplicial() {
            return pre("cohomology needs a simplicial fan");
        }
        if characteristic != 0 && !is_prime(characteristic) {
            return pre("characteristic must be 0 or a prime");
        }
        let used = sf.fan.used_rays();
        let betas = sf.betas();
        let span = rank_rat(&used.iter().map(|&r| rats_of(&betas[r])).collect::<Vec<_>>());
        if span != sf.fan.dim {
            return pre("rays of the fan do not span N_R");
        }
        let n = sf.fan.dim;
        let mut cells = Vec::new();
        for mask in 0u64..(1u64 << used.len()) {
            let s: Vec<usize> = (0..used.len()).filter(|&i| mask >> i & 1 == 1).map(|i| used[i]).collect();
            if !s.is_empty() && sf.fan.cones.iter().any(|c| s.iter().all(|x| c.contains(x))) {
                continue;
            }
            let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
            for c in &sf.fan.cones {
                let f: Vec<usize> = c.iter().copied().filter(|x| s.contains(x)).collect();
                if !f.is_empty() {
                    facets.insert(f);
                }
            }
            let facets: Vec<Vec<usize>> = facets.into_iter().collect();
            let b = reduced_homology(&facets, characteristic);
            if b.iter().any(|&x| x > 0) {
                let mut by_p = vec![0usize; n + 1];
                for (k, &x) in b.iter().enumerate() {
                    if x > 0 && k <= n {
                        by_p[k] = x;
                    }
                }
                cells.push((s, by_p));
            }
        }
        Ok(CohomologyEngine { sf: sf.clone(), betas, used, cells, characteristic })
    }

    /// Weights m with V_{D,m} spanned by exactly the rays in `neg`.
    pub fn cell_polyhedron(&self, a: &[Int], neg: &[usize]) -> RationalPolyhedron {
        let mut p = RationalPolyhedron::new(self.sf.fan.dim);
        for &r in &self.used {
            let b: Vec<Rat> = rats_of(&self.betas[r]);
            if neg.contains(&r) {
                p.le(b, to_rat(&(-&a[r] - 1)));
            } else {
                p.ge(b, to_rat(&-&a[r]));
            }
        }
        p
    }

    pub fn cohomology(&self, a: &[Int]) -> Result<CohomologyTable> {
        if a.len() != self.betas.len() {
            return pre("divisor length differs from ray count");
        }
        let n = self.sf.fan.dim;
        let mut dims = vec![Dim::Finite(0); n + 1];
        let mut cells = Vec::new();
        for (s, by_p) in &self.cells {
            let w = self.cell_polyhedron(a, s).count_lattice();
            if w.is_zero() {
                continue;
            }
            for (p, &rank) in by_p.iter().enumerate() {
                if rank > 0 {
                    dims[p] = add_dim(&dims[p], &w, rank);
                    cells.push(CellContribution { degree: p, negative_rays: s.clone(), rank, weights: w.clone() });
                }
            }
        }
        cells.sort_by(|x, y| (x.degree, &x.negative_rays).cmp(&(y.degree, &y.negative_rays)));
        Ok(CohomologyTable { dims, cells, characteristic: self.characteristic, stacky: !self.sf.is_plain() })
    }

    /// Explicit weights of a finite cell.
    pub fn cell_weights(&self, a: &[Int], neg: &[usize]) -> Result<Vec<Vec<Int>>> {
        self.cell_polyhedron(a, neg).lattice_points(None)
    }

    /// V_{D,m} for a single weight.
    pub fn negative_set(&self, a: &[Int], m: &[Int]) -> Vec<usize> {
        self.used.iter().copied().filter(|&r| dot_int(m, &self.betas[r]) < -&a[r]).collect()
    }
}

pub fn line_bundle_cohomology(sf: &StackyFan, a: &[Int], characteristic: u64) -> Result<CohomologyTable> {
    CohomologyEngine::new(sf, characteristic)?.cohomology(a)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

/// d(θ)_ρ = ⌈⟨θ, β_ρ⟩⌉.
pub fn ceiling_divisor(betas: &[Vec<Int>], theta: &[Rat]) -> Vec<Int> {
    betas.iter().map(|b| ceil(&dot_ri(theta, b))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub dim: Dim,
    /// Exponent vectors of the monomial basis (finite case), descending lex.
    pub basis: Vec<Vec<Int>>,
}

/// Hom(O(−d) → O(−d′)) for Θ elements with witnesses θ, θ′, where d, d′ are the
/// ceiling divisors. Counted as #(P_d ∩ (M − θ′)) and as monomials of degree
/// d − d′; the two must agree.
pub fn hom_theta(betas: &[Vec<Int>], theta: &[Rat], theta2: &[Rat]) -> Result<HomSpace> {
    let n = theta.len();
    let d = ceiling_divisor(betas, theta);
    let d2 = ceiling_divisor(betas, theta2);
    let mut first = RationalPolyhedron::new(n);
    let mut second = RationalPolyhedron::new(n);
    for (j, b) in betas.iter().enumerate() {
        first.ge(rats_of(b), dot_ri(theta2, b) - to_rat(&d[j]));
        second.ge(rats_of(b), to_rat(&(&d2[j] - &d[j])));
    }
    let c1 = first.count_lattice();
    let c2 = second.count_lattice();
    if c1 != c2 {
        return crate::error::inv(format!("Hom counts disagree: {c1} vs {c2}"));
    }
    let mut basis = Vec::new();
    match c1 {
        Dim::Finite(_) => {
            let p1 = first.lattice_points(None)?;
            let p2 = second.lattice_points(None)?;
            if p1 != p2 {
                return crate::error::inv("Hom lattice sets disagree");
            }
            for k in &p2 {
                basis.push(betas.iter().enumerate().map(|(j, b)| &d[j] - &d2[j] + dot_int(k, b)).collect::<Vec<Int>>());
            }
            basis.sort_by(|x, y| y.cmp(x));
        }
        Dim::Infinite => {
            let lo = vec![Int::from(-6); n];
            let hi = vec![Int::from(6); n];
            if first.lattice_points_in_box(&lo, &hi) != second.lattice_points_in_box(&lo, &hi) {
                return crate::error::inv("Hom lattice sets disagree");
            }
        }
    }
    Ok(HomSpace { dim: c1, basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomZeroReport {
    pub dims: Vec<Dim>,
    pub predicted_h0: Dim,
    pub pass: bool,
    /// First offending cell (degree, negative rays) on failure.
    pub offending: Option<(usize, Vec<usize>)>,
}

/// For nef A and θ: h⁰(O(A − d(θ))) = #(P_A ∩ (M − θ)) and higher cohomology vanishes.
pub fn verify_homzero(engine: &CohomologyEngine, a: &[Int], theta: &[Rat]) -> Result<HomZeroReport> {
    let sf = &engine.sf;
    if !crate::divisor::is_nef_int(sf, a)? {
        return pre("A is not nef");
    }
    let betas = sf.betas();
    let used = sf.fan.used_rays();
    let d = ceiling_divisor(&betas, theta);
    let diff: Vec<Int> = a.iter().zip(&d).map(|(x, y)| x - y).collect();
    let table = engine.cohomology(&diff)?;
    let mut p = RationalPolyhedron::new(sf.fan.dim);
    for &r in &used {
        p.ge(rats_of(&betas[r]), dot_ri(theta, &betas[r]) - to_rat(&a[r]));
    }
    let predicted = p.count_lattice();
    let offending = table.cells.iter().find(|c| c.degree > 0).map(|c| (c.degree, c.negative_rays.clone()));
    let pass = offending.is_none() && table.dims[0] == predicted;
    Ok(HomZeroReport { dims: table.dims, predicted_h0: predicted, pass, offending })
}
