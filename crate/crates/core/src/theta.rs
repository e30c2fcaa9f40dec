//! The Bondal–Thomsen collection Θ: enumeration with witnesses, membership,
//! the Frobenius grid, ordering, zonotopes, primitive collections and the
//! single-wall sharpened reduction.

use crate::cohomology::ceiling_divisor;
use crate::divisor::{effective, Class, ClassGroup};
use crate::error::{inv, pre, Result};
use crate::exactlin::{combinations, denom_lcm, gcd_all, lcm, rats_of, to_rat, Int, Rat, RationalPolyhedron};
use crate::fan::{minimal_cone_relation, Fan};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Standard,
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaElement {
    /// The class −d.
    pub class: Class,
    /// d(θ)_ρ = ⌈⟨θ, β_ρ⟩⌉.
    pub divisor: Vec<Int>,
    pub witness: Vec<Rat>,
    /// Star variant: the class is ω + deg d(θ) instead of −deg d(θ).
    pub star: bool,
}

impl ThetaElement {
    /// Recompute the class from the witness.
    pub fn check(&self, betas: &[Vec<Int>], cl: &ClassGroup) -> bool {
        let d = ceiling_divisor(betas, &self.witness);
        let c = if self.star { cl.add(&cl.canonical(), &cl.degree(&d)) } else { cl.neg(&cl.degree(&d)) };
        d == self.divisor && c == self.class
    }
}

fn unit_box(n: usize) -> RationalPolyhedron {
    let mut p = RationalPolyhedron::new(n);
    for i in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        p.ge(e.clone(), Rat::zero());
        p.lt(e, Rat::one());
    }
    p
}

/// Cells of the arrangement ⟨θ, β_ρ⟩ ∈ Z inside [0,1)^n, one witness each.
pub fn theta_cells(betas: &[Vec<Int>], n: usize) -> Vec<(Vec<Int>, Vec<Rat>)> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    cells_rec(betas, unit_box(n), &mut chosen, &mut out);
    out
}

fn cells_rec(betas: &[Vec<Int>], p: RationalPolyhedron, chosen: &mut Vec<Int>, out: &mut Vec<(Vec<Int>, Vec<Rat>)>) {
    let k = chosen.len();
    if k == betas.len() {
        if let Some(w) = p.feasible() {
            out.push((chosen.clone(), w));
        }
        return;
    }
    let b = &betas[k];
    let lo: Int = b.iter().filter(|x| x.is_negative()).sum();
    let hi: Int = b.iter().filter(|x| x.is_positive()).sum();
    let mut a = lo;
    while a <= hi {
        let mut q = p.clone();
        q.gt(rats_of(b), to_rat(&(&a - 1)));
        q.le(rats_of(b), to_rat(&a));
        if q.feasible().is_some() {
            chosen.push(a.clone());
            cells_rec(betas, q, chosen, out);
            chosen.pop();
        }
        a += 1;
    }
}

fn lex_less(a: &[Rat], b: &[Rat]) -> bool {
    a < b
}

pub fn enumerate_theta(betas: &[Vec<Int>], cl: &ClassGroup, variant: Variant) -> Vec<ThetaElement> {
    let n = betas.first().map_or(0, |b| b.len());
    let mut best: BTreeMap<Class, ThetaElement> = BTreeMap::new();
    for (d, w) in theta_cells(betas, n) {
        let class = match variant {
            Variant::Standard => cl.neg(&cl.degree(&d)),
            Variant::Star => cl.add(&cl.canonical(), &cl.degree(&d)),
        };
        let e = ThetaElement { class: class.clone(), divisor: d, witness: w, star: variant == Variant::Star };
        match best.get(&class) {
            Some(old) if !lex_less(&e.witness, &old.witness) => {}
            _ => {
                best.insert(class, e);
            }
        }
    }
    let mut v: Vec<ThetaElement> = best.into_values().collect();
    v.sort_by(|a, b| b.class.cmp(&a.class));
    v
}

/// Membership of a class in Θ with a witness θ: some integer lift k of the
/// class and θ with k + Bθ ∈ (−1, 0]^{rays}; then −d(θ) = k.
pub fn theta_membership(betas: &[Vec<Int>], cl: &ClassGroup, class: &[Int]) -> Option<Vec<Rat>> {
    let n = betas.first().map_or(0, |b| b.len());
    let k = cl.lift(class);
    let mut p = RationalPolyhedron::new(n);
    for (b, kr) in betas.iter().zip(&k) {
        p.gt(rats_of(b), to_rat(&(-kr - 1)));
        p.le(rats_of(b), to_rat(&-kr));
    }
    let w = p.feasible()?;
    let d = ceiling_divisor(betas, &w);
    debug_assert_eq!(cl.neg(&cl.degree(&d)), cl.reduce(class));
    Some(w)
}

/// { −d(θ) : θ ∈ (1/ℓ)M/M }.
pub fn frobenius_oracle(betas: &[Vec<Int>], cl: &ClassGroup, l: u64) -> Result<BTreeSet<Class>> {
    if l == 0 {
        return pre("Frobenius level must be positive");
    }
    let n = betas.first().map_or(0, |b| b.len());
    let l = Int::from(l);
    let mut out = BTreeSet::new();
    let mut idx = vec![Int::zero(); n];
    loop {
        let theta: Vec<Rat> = idx.iter().map(|x| Rat::new(x.clone(), l.clone())).collect();
        out.insert(cl.neg(&cl.degree(&ceiling_divisor(betas, &theta))));
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < l {
                break;
            }
            idx[i] = Int::zero();
            i += 1;
        }
    }
}

/// lcm of all witness denominators.
pub fn denominator_bound(elements: &[ThetaElement]) -> Int {
    elements.iter().fold(Int::one(), |acc, e| lcm(&acc, &denom_lcm(&e.witness)))
}

/// Integer box containing the lattice points of Z (free part).
pub fn zonotope_box(cl: &ClassGroup) -> (Vec<Int>, Vec<Int>) {
    let degs = cl.degrees();
    let r = cl.free_rank;
    let lo = (0..r).map(|k| -degs.iter().map(|g| g[k].clone().max(Int::zero())).sum::<Int>()).collect();
    let hi = (0..r).map(|k| degs.iter().map(|g| (-g[k].clone()).max(Int::zero())).sum::<Int>()).collect();
    (lo, hi)
}

fn is_pointed(cl: &ClassGroup) -> bool {
    let n = cl.nrays();
    let mut p = RationalPolyhedron::new(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        p.ge(e, Rat::zero());
    }
    p.equal(vec![Rat::one(); n], Rat::one());
    for row in cl.free_matrix() {
        p.equal(rats_of(&row), Rat::zero());
    }
    p.feasible().is_none()
}

/// Positions in the order: Hom from an earlier to a later element vanishes.
/// Ties are broken by the larger coordinate sum, then lexicographically larger
/// class; with a seed, ties are shuffled instead.
pub fn order_theta(cl: &ClassGroup, elements: &[ThetaElement], seed: Option<u64>) -> Result<Vec<usize>> {
    if !is_pointed(cl) {
        return pre("ordering needs a pointed effective cone");
    }
    let k = elements.len();
    // preds[a] holds b when Hom(a → b) ≠ 0, so b must precede a
    let mut preds = vec![BTreeSet::new(); k];
    for a in 0..k {
        for b in 0..k {
            if a != b && effective(cl, &cl.sub(&elements[b].class, &elements[a].class)).is_some() {
                preds[a].insert(b);
            }
        }
    }
    let mut rng = seed.map(rand_chacha::ChaCha8Rng::seed_from_u64);
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    let key = |i: usize| {
        let c = &elements[i].class;
        let s: Int = c[..cl.free_rank].iter().sum();
        (s, c.clone())
    };
    while order.len() < k {
        let mut ready: Vec<usize> = (0..k).filter(|&i| !placed[i] && preds[i].iter().all(|&p| placed[p])).collect();
        if ready.is_empty() {
            return inv("effectivity relation has a cycle");
        }
        ready.sort_by_key(|&i| std::cmp::Reverse(key(i)));
        if let Some(r) = rng.as_mut() {
            ready.shuffle(r);
        }
        let pick = ready[0];
        placed[pick] = true;
        order.push(pick);
    }
    Ok(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// t ∈ (−1, 0]
    HalfOpen,
    /// t ∈ [−1, 0]
    Closed,
    /// t ∈ (−1, 0)
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zonotope {
    pub generators: Vec<Vec<Int>>,
    pub sides: Vec<Side>,
}

impl Zonotope {
    /// The image of (−1,0]^{rays} in Cl_R.
    pub fn full(cl: &ClassGroup) -> Self {
        let generators: Vec<Vec<Int>> = cl.degrees().iter().map(|d| cl.free_part(d)).collect();
        let sides = vec![Side::HalfOpen; generators.len()];
        Zonotope { generators, sides }
    }

    pub fn on(cl: &ClassGroup, rays: &[usize], side: Side) -> Self {
        let degs = cl.degrees();
        Zonotope { generators: rays.iter().map(|&r| cl.free_part(&degs[r])).collect(), sides: vec![side; rays.len()] }
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.len())
    }

    /// Points as {t : sides, Σ t_i g_i = x}.
    fn preimage(&self, x: &[Rat]) -> RationalPolyhedron {
        let k = self.generators.len();
        let mut p = RationalPolyhedron::new(k);
        for (i, s) in self.sides.iter().enumerate() {
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            match s {
                Side::HalfOpen => {
                    p.gt(e.clone(), -Rat::one());
                    p.le(e, Rat::zero());
                }
                Side::Closed => {
                    p.ge(e.clone(), -Rat::one());
                    p.le(e, Rat::zero());
                }
                Side::Open => {
                    p.gt(e.clone(), -Rat::one());
                    p.lt(e, Rat::zero());
                }
            }
        }
        for c in 0..self.dim() {
            p.equal(self.generators.iter().map(|g| to_rat(&g[c])).collect(), x[c].clone());
        }
        p
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.generators.is_empty() {
            return false;
        }
        self.preimage(x).feasible().is_some()
    }

    pub fn bounding_box(&self) -> (Vec<Int>, Vec<Int>) {
        let r = self.dim();
        let lo = (0..r).map(|k| -self.generators.iter().map(|g| g[k].clone().max(Int::zero())).sum::<Int>()).collect();
        let hi =
            (0..r).map(|k| self.generators.iter().map(|g| (-g[k].clone()).max(Int::zero())).sum::<Int>()).collect();
        (lo, hi)
    }

    pub fn lattice_points(&self) -> Vec<Vec<Int>> {
        if self.generators.is_empty() {
            return Vec::new();
        }
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        RationalPolyhedron::new(self.dim()).visit_box(&lo, &hi, &mut |x| {
            if self.contains(&rats_of(x)) {
                out.push(x.to_vec());
            }
            true
        });
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveCollection {
    pub rays: Vec<usize>,
    /// Σ b_ρ u_ρ = 0, coprime, positive exactly on the collection.
    pub circuit: Vec<Int>,
}

impl PrimitiveCollection {
    /// deg_Γ(x_ρ) = b_ρ as a functional on Cl_R (free part).
    pub fn functional(&self, cl: &ClassGroup) -> Option<Vec<Rat>> {
        let degs: Vec<Vec<Rat>> = cl.degrees().iter().map(|d| rats_of(&cl.free_part(d))).collect();
        crate::exactlin::solve_rat(&degs, &rats_of(&self.circuit))
    }
}

pub fn primitive_collections(fan: &Fan) -> Result<Vec<PrimitiveCollection>> {
    if !fan.is_simplicial() {
        return pre("primitive collections need a simplicial fan");
    }
    let used = fan.used_rays();
    let in_cone = |s: &[usize]| fan.cones.iter().any(|c| s.iter().all(|x| c.contains(x)));
    let mut out = Vec::new();
    for k in 2..=used.len() {
        for idx in combinations(used.len(), k) {
            let s: Vec<usize> = idx.iter().map(|&i| used[i]).collect();
            if in_cone(&s) {
                continue;
            }
            let minimal = (0..s.len()).all(|skip| {
                let t: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                in_cone(&t)
            });
            if !minimal {
                continue;
            }
            let mut v = vec![Int::zero(); fan.dim];
            for &r in &s {
                for (vi, ui) in v.iter_mut().zip(&fan.rays[r]) {
                    *vi += ui;
                }
            }
            let mut circuit = vec![Int::zero(); fan.nrays()];
            if v.iter().any(|x| !x.is_zero()) {
                let rel = match minimal_cone_relation(fan, &v) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                for &r in &s {
                    circuit[r] += &rel.a_v;
                }
                for (t, c) in rel.cone.iter().zip(&rel.coeffs) {
                    circuit[*t] -= c;
                }
            } else {
                for &r in &s {
                    circuit[r] = Int::one();
                }
            }
            let g = gcd_all(&circuit);
            let circuit: Vec<Int> = circuit.iter().map(|x| x / &g).collect();
            out.push(PrimitiveCollection { rays: s, circuit });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulTerm {
    pub subset: Vec<usize>,
    pub class: Class,
    pub in_theta: bool,
    pub level: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulCertificate {
    /// The element −d, as a class.
    pub class: Class,
    /// Terms grouped by homological position (|T| = 0, 1, …).
    pub terms: Vec<Vec<KoszulTerm>>,
    pub all_in_theta: bool,
    /// deg_Γ strictly decreases with |T|.
    pub descending: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpenedReport {
    pub collection: PrimitiveCollection,
    pub functional: Vec<Rat>,
    pub closed_generators: Vec<Vec<Int>>,
    pub open_generators: Vec<Vec<Int>>,
    /// Θ_Γ°.
    pub removable: Vec<Class>,
    /// Θ ∖ Θ_Γ°.
    pub remaining: Vec<Class>,
    pub certificates: Vec<KoszulCertificate>,
}

/// Primitive collections of `fan` whose wall lies inside the effective cone
/// and is a facet of the nef cone of `fan` (given as its chamber's rays).
pub fn interior_walls(cl: &ClassGroup, fan: &Fan, nef_rays: &[Vec<Rat>]) -> Result<Vec<PrimitiveCollection>> {
    let degs: Vec<Vec<Rat>> = cl.degrees().iter().map(|d| rats_of(&cl.free_part(d))).collect();
    let r = cl.free_rank;
    let mut out = Vec::new();
    for pc in primitive_collections(fan)? {
        let Some(f) = pc.functional(cl) else { continue };
        let on: Vec<&Vec<Rat>> = nef_rays.iter().filter(|v| crate::exactlin::dot_rat(&f, v).is_zero()).collect();
        if crate::exactlin::rank_rat(&on.iter().map(|v| (*v).clone()).collect::<Vec<_>>()) + 1 != r {
            continue;
        }
        // a relative-interior point of the wall, pushed slightly across it
        let mut mid = vec![Rat::zero(); r];
        for v in &on {
            for (m, x) in mid.iter_mut().zip(v.iter()) {
                *m += x;
            }
        }
        // interior of the effective cone: strictly positive combination of all degrees
        let mut p = RationalPolyhedron::new(degs.len());
        for j in 0..degs.len() {
            let mut e = vec![Rat::zero(); degs.len()];
            e[j] = Rat::one();
            p.gt(e, Rat::zero());
        }
        for c in 0..r {
            p.equal(degs.iter().map(|g| g[c].clone()).collect(), mid[c].clone());
        }
        if p.feasible().is_some() {
            out.push(pc);
        }
    }
    Ok(out)
}

pub fn sharpened_reduction(
    betas: &[Vec<Int>],
    cl: &ClassGroup,
    pc: &PrimitiveCollection,
    theta: &[ThetaElement],
) -> Result<SharpenedReport> {
    if !cl.torsion.is_empty() {
        return pre("sharpened reduction needs a torsion-free class group");
    }
    let Some(functional) = pc.functional(cl) else {
        return pre("circuit does not factor through the class group");
    };
    let comp: Vec<usize> = (0..cl.nrays()).filter(|r| !pc.rays.contains(r)).collect();
    let closed = Zonotope::on(cl, &pc.rays, Side::Closed);
    let open = Zonotope::on(cl, &comp, Side::Open);
    let removable: Vec<Class> = open.lattice_points();
    let classes: Vec<Class> = theta.iter().map(|e| e.class.clone()).collect();
    let remaining: Vec<Class> = classes.iter().filter(|c| !removable.contains(&cl.free_part(c))).cloned().collect();
    let degs = cl.degrees();
    let mut certificates = Vec::new();
    for c in &removable {
        let mut terms = Vec::new();
        let mut all_in = true;
        for k in 0..=pc.rays.len() {
            let mut layer = Vec::new();
            for idx in combinations(pc.rays.len(), k) {
                let subset: Vec<usize> = idx.iter().map(|&i| pc.rays[i]).collect();
                let mut class = c.clone();
                for &r in &subset {
                    class = cl.sub(&class, &degs[r]);
                }
                let in_theta = theta_membership(betas, cl, &class).is_some();
                all_in &= in_theta;
                let level = crate::exactlin::dot_ri(&functional, &class);
                layer.push(KoszulTerm { subset, class, in_theta, level: level.clone() });
            }
            terms.push(layer);
        }
        let descending = terms.windows(2).all(|w| {
            w[1].iter().all(|big| {
                w[0].iter()
                    .filter(|small| small.subset.iter().all(|x| big.subset.contains(x)))
                    .all(|small| big.level < small.level)
            })
        });
        certificates.push(KoszulCertificate { class: c.clone(), terms, all_in_theta: all_in, descending });
    }
    Ok(SharpenedReport {
        collection: pc.clone(),
        functional,
        closed_generators: closed.generators,
        open_generators: open.generators,
        removable,
        remaining,
        certificates,
    })
}
