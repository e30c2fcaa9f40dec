//! Fans, stacky fans, generalized fans and common stacky refinements.

use crate::error::{pre, Error, Result};
use crate::exactlin::{
    combinations, gcd_all, int, lcm, rank_rat, rats_of, solve_rat, to_rat, Int, IntMatrix, Rat, RationalPolyhedron,
};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<Int>>,
    /// Maximal cones as sorted ray-index lists.
    pub cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    RayDimension { ray: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    BadIndex { cone: usize },
    NotStronglyConvex { cone: usize },
    BadIntersection { a: usize, b: usize },
}

impl std::fmt::Display for FanViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FanViolation::RayDimension { ray } => write!(f, "ray {ray} has the wrong length"),
            FanViolation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            FanViolation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            FanViolation::BadIndex { cone } => write!(f, "cone {cone} references a missing ray"),
            FanViolation::NotStronglyConvex { cone } => write!(f, "cone {cone} is not strongly convex"),
            FanViolation::BadIntersection { a, b } => {
                write!(f, "cones {a} and {b} do not meet in a common face")
            }
        }
    }
}

fn rat_rows(rays: &[Vec<Int>], idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| rats_of(&rays[i])).collect()
}

fn strongly_convex(dim: usize, gens: &[Vec<Int>]) -> bool {
    if rank_rat(&gens.iter().map(|g| rats_of(g)).collect::<Vec<_>>()) == gens.len() {
        return true;
    }
    // no λ >= 0 with sum 1 and Σ λ g = 0
    let k = gens.len();
    let mut p = RationalPolyhedron::new(k);
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::one();
        p.ge(e, Rat::zero());
    }
    p.equal(vec![Rat::one(); k], Rat::one());
    for c in 0..dim {
        p.equal(gens.iter().map(|g| to_rat(&g[c])).collect(), Rat::zero());
    }
    p.feasible().is_none()
}

/// Cones meet in the cone spanned by their common rays, which is a face of both.
fn meet_in_face(dim: usize, rays: &[Vec<Int>], a: &[usize], b: &[usize]) -> bool {
    let mut p = RationalPolyhedron::new(dim);
    for &i in a {
        let u = rats_of(&rays[i]);
        if b.contains(&i) {
            p.equal(u, Rat::zero());
        } else {
            p.gt(u, Rat::zero());
        }
    }
    for &i in b {
        if !a.contains(&i) {
            p.lt(rats_of(&rays[i]), Rat::zero());
        }
    }
    p.feasible().is_some()
}

pub fn validate_fan(
    dim: usize,
    rays: Vec<Vec<Int>>,
    cones: Vec<Vec<usize>>,
) -> std::result::Result<Fan, Vec<FanViolation>> {
    let mut bad = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            bad.push(FanViolation::RayDimension { ray: i });
        } else if r.iter().all(|x| x.is_zero()) {
            bad.push(FanViolation::ZeroRay { ray: i });
        } else if !gcd_all(r).is_one() {
            bad.push(FanViolation::NonPrimitiveRay { ray: i });
        }
    }
    let mut cones: Vec<Vec<usize>> = cones
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    for (j, c) in cones.iter().enumerate() {
        if c.iter().any(|&i| i >= rays.len()) {
            bad.push(FanViolation::BadIndex { cone: j });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    for (j, c) in cones.iter().enumerate() {
        let gens: Vec<Vec<Int>> = c.iter().map(|&i| rays[i].clone()).collect();
        if !strongly_convex(dim, &gens) {
            bad.push(FanViolation::NotStronglyConvex { cone: j });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            if !meet_in_face(dim, &rays, &cones[a], &cones[b]) {
                bad.push(FanViolation::BadIntersection { a, b });
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    // drop cones that are faces of others
    let all = cones.clone();
    cones.retain(|c| !all.iter().any(|d| d != c && c.iter().all(|x| d.contains(x))));
    Ok(Fan { dim, rays, cones })
}

impl Fan {
    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| rank_rat(&rat_rows(&self.rays, c)) == c.len())
    }

    /// Rays appearing in some cone.
    pub fn used_rays(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.cones.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    /// Simplicial and pure of full dimension, with every facet shared by exactly two cones.
    pub fn is_complete(&self) -> bool {
        if !self.is_simplicial() || self.cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.cones {
            for skip in 0..c.len() {
                let f: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                *facets.entry(f).or_default() += 1;
            }
        }
        !self.cones.is_empty() && facets.values().all(|&k| k == 2)
    }

    /// Coefficients of `v` in a maximal simplicial cone containing it.
    pub fn locate(&self, v: &[Rat]) -> Option<(usize, Vec<Rat>)> {
        for (j, c) in self.cones.iter().enumerate() {
            let m = rat_rows(&self.rays, c);
            let mt: Vec<Vec<Rat>> = (0..self.dim).map(|k| m.iter().map(|r| r[k].clone()).collect()).collect();
            if rank_rat(&m) != c.len() {
                continue;
            }
            if let Some(l) = solve_rat(&mt, v) {
                if l.iter().all(|x| !x.is_negative()) {
                    return Some((j, l));
                }
            }
        }
        None
    }

    /// Pairs of maximal cones sharing a codimension-one face: (σ, σ', shared rays).
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut out = Vec::new();
        for a in 0..self.cones.len() {
            for b in a + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[a].iter().filter(|x| self.cones[b].contains(x)).copied().collect();
                if common.len() + 1 == self.cones[a].len() && common.len() + 1 == self.cones[b].len() {
                    out.push((a, b, common));
                }
            }
        }
        out
    }

    /// Restriction to the rays that appear in cones, reindexed; returns the old indices.
    pub fn compact(&self) -> (Fan, Vec<usize>) {
        let used = self.used_rays();
        let pos: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let fan = Fan {
            dim: self.dim,
            rays: used.iter().map(|&r| self.rays[r].clone()).collect(),
            cones: self.cones.iter().map(|c| c.iter().map(|r| pos[r]).collect()).collect(),
        };
        (fan, used)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    pub fan: Fan,
    pub mult: Vec<Int>,
}

impl StackyFan {
    pub fn new(fan: Fan, mult: Vec<Int>) -> Result<Self> {
        if mult.len() != fan.nrays() {
            return Err(Error::Schema("multiplier count differs from ray count".into()));
        }
        if mult.iter().any(|b| !b.is_positive()) {
            return Err(Error::Schema("multipliers must be positive".into()));
        }
        Ok(StackyFan { fan, mult })
    }

    pub fn plain(fan: Fan) -> Self {
        let mult = vec![Int::one(); fan.nrays()];
        StackyFan { fan, mult }
    }

    pub fn beta(&self, i: usize) -> Vec<Int> {
        self.fan.rays[i].iter().map(|x| x * &self.mult[i]).collect()
    }

    pub fn betas(&self) -> Vec<Vec<Int>> {
        (0..self.fan.nrays()).map(|i| self.beta(i)).collect()
    }

    pub fn is_plain(&self) -> bool {
        self.mult.iter().all(|b| b.is_one())
    }
}

/// `a_v·v = Σ a_τ u_τ` over the minimal cone containing `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRelation {
    pub cone: Vec<usize>,
    pub a_v: Int,
    pub coeffs: Vec<Int>,
}

pub fn minimal_cone_relation(fan: &Fan, v: &[Int]) -> Result<ConeRelation> {
    if !fan.is_simplicial() {
        return pre("minimal cone relation needs a simplicial fan");
    }
    let Some((j, l)) = fan.locate(&rats_of(v)) else {
        return pre("vector lies outside the support of the fan");
    };
    let den = l.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    let mut cone = Vec::new();
    let mut coeffs = Vec::new();
    for (k, q) in l.iter().enumerate() {
        if q.is_positive() {
            cone.push(fan.cones[j][k]);
            coeffs.push((q * to_rat(&den)).to_integer());
        }
    }
    let g = coeffs.iter().fold(den.clone(), |acc, x| acc.gcd(x));
    Ok(ConeRelation { cone, a_v: &den / &g, coeffs: coeffs.iter().map(|x| x / &g).collect() })
}

/// Refinement `Λ` with multipliers and, per input fan, Φ with β_i∘Φ = β_Λ
/// (rows indexed by the rays of the input fan, columns by the rays of Λ).
#[derive(Clone, Debug)]
pub struct Refinement {
    pub lambda: StackyFan,
    pub certificates: Vec<IntMatrix>,
    /// For each ray of Λ and each input fan, the relation used.
    pub relations: Vec<Vec<ConeRelation>>,
}

fn dual_normals(rays: &[Vec<Int>], cone: &[usize], dim: usize) -> Vec<Vec<Rat>> {
    // rows w_i with ⟨w_i, u_j⟩ = δ_ij
    let m = rat_rows(rays, cone);
    (0..cone.len())
        .map(|i| {
            let mut b = vec![Rat::zero(); cone.len()];
            b[i] = Rat::one();
            solve_rat(&m, &b).expect("full-dimensional simplicial cone")
        })
        .inspect(|w| {
            assert_eq!(w.len(), dim);
        })
        .collect()
}

fn facets_of(rays: &[Vec<Int>], cone: &[usize], normals: &[Vec<Rat>], dim: usize) -> Vec<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for w in normals {
        let f: Vec<usize> = cone.iter().copied().filter(|&r| crate::exactlin::dot_ri(w, &rays[r]).is_zero()).collect();
        if !f.is_empty() && rank_rat(&rat_rows(rays, &f)) + 1 == dim {
            out.insert(f);
        }
    }
    out.into_iter().collect()
}

/// Pulling triangulation of a face, w.r.t. the global ray order.
fn pulling(rays: &[Vec<Int>], face: &[usize], facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let rk = rank_rat(&rat_rows(rays, face));
    if face.len() == rk {
        return vec![face.to_vec()];
    }
    let v = *face.iter().min().unwrap();
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in facets {
        let g: Vec<usize> = face.iter().copied().filter(|x| f.contains(x)).collect();
        if !g.contains(&v) && !g.is_empty() && rank_rat(&rat_rows(rays, &g)) + 1 == rk {
            subfaces.insert(g);
        }
    }
    let mut out = Vec::new();
    for g in subfaces {
        for mut s in pulling(rays, &g, facets) {
            s.push(v);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

fn refine_pair(a: &Fan, b: &Fan) -> Result<Fan> {
    let dim = a.dim;
    let mut rays: Vec<Vec<Int>> = a.rays.clone();
    let mut index: BTreeMap<Vec<Int>, usize> = rays.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let mut pieces: Vec<(Vec<Vec<Int>>, Vec<Vec<Rat>>)> = Vec::new();
    let mut fresh: BTreeSet<Vec<Int>> = BTreeSet::new();
    for ca in &a.cones {
        for cb in &b.cones {
            let mut p = RationalPolyhedron::new(dim);
            let mut normals = dual_normals(&a.rays, ca, dim);
            normals.extend(dual_normals(&b.rays, cb, dim));
            for w in &normals {
                p.gt(w.clone(), Rat::zero());
            }
            if p.feasible().is_none() {
                continue;
            }
            let gens = p.closure().recession_rays();
            for g in &gens {
                if !index.contains_key(g) {
                    fresh.insert(g.clone());
                }
            }
            pieces.push((gens, normals));
        }
    }
    for g in fresh {
        index.insert(g.clone(), rays.len());
        rays.push(g);
    }
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (gens, normals) in pieces {
        let mut idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        idx.sort_unstable();
        let facets = facets_of(&rays, &idx, &normals, dim);
        for s in pulling(&rays, &idx, &facets) {
            cones.insert(s);
        }
    }
    let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    if used.len() != rays.len() {
        return pre("fans do not have equal support");
    }
    validate_fan(dim, rays, cones.into_iter().collect())
        .map_err(|v| Error::Invariant(format!("refinement is not a fan: {}", v[0])))
}

pub fn common_stacky_refinement(fans: &[Fan]) -> Result<Refinement> {
    let Some(first) = fans.first() else {
        return pre("no fans given");
    };
    for f in fans {
        if !f.is_simplicial() {
            return pre("common refinement needs simplicial fans");
        }
        if f.dim != first.dim || f.cones.iter().any(|c| c.len() != f.dim) {
            return pre("common refinement needs pure full-dimensional fans of equal dimension");
        }
    }
    let mut lam = first.clone();
    for f in &fans[1..] {
        lam = refine_pair(&lam, f)?;
    }
    let mut mult = Vec::with_capacity(lam.nrays());
    let mut relations = Vec::with_capacity(lam.nrays());
    for r in &lam.rays {
        let mut rels = Vec::new();
        for f in fans {
            rels.push(
                minimal_cone_relation(f, r)
                    .map_err(|_| Error::Precondition("fans do not have equal support".into()))?,
            );
        }
        mult.push(rels.iter().fold(Int::one(), |acc, x| lcm(&acc, &x.a_v)));
        relations.push(rels);
    }
    let mut certificates = Vec::new();
    for (i, f) in fans.iter().enumerate() {
        let mut phi = IntMatrix::zeros(f.nrays(), lam.nrays());
        for (rho, rels) in relations.iter().enumerate() {
            let rel = &rels[i];
            let scale = &mult[rho] / &rel.a_v;
            for (t, c) in rel.cone.iter().zip(&rel.coeffs) {
                phi.set(*t, rho, c * &scale);
            }
        }
        certificates.push(phi);
    }
    Ok(Refinement { lambda: StackyFan { fan: lam, mult }, certificates, relations })
}

/// Rows = β(e_ρ) as an n × rays integer matrix (columns are the β vectors).
pub fn beta_matrix(sf: &StackyFan) -> IntMatrix {
    let b = sf.betas();
    IntMatrix::from_rows(&b).transpose()
}

/// Lineality space, quotient fan and contracted rays of a face of the secondary fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedFan {
    /// Z-basis of L ∩ N.
    pub lineality: Vec<Vec<Int>>,
    /// Z-basis of L^⊥ ∩ M; quotient coordinates of u are the pairings with these.
    pub quotient_basis: Vec<Vec<Int>>,
    /// Maximal cones of the normal quasi-fan, as sets of tight original rays.
    pub cones: Vec<Vec<usize>>,
    pub quotient_rays: Vec<Vec<Int>>,
    pub quotient_cones: Vec<Vec<usize>>,
    /// Original ray index → quotient ray index, for rays that are rays of the quotient fan.
    pub ray_image: Vec<Option<usize>>,
    /// Rays whose inequality is never tight on the section polyhedron.
    pub contracted: Vec<usize>,
}

impl GeneralizedFan {
    pub fn quotient_dim(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn project(&self, u: &[Int]) -> Vec<Int> {
        self.quotient_basis.iter().map(|w| crate::exactlin::dot_int(w, u)).collect()
    }
}

/// All nonempty subsets of a cone's rays, i.e. the nerve faces (simplicial case).
pub fn nerve_faces(fan: &Fan) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for c in &fan.cones {
        for k in 1..=c.len() {
            for s in combinations(c.len(), k) {
                out.insert(s.iter().map(|&i| c[i]).collect());
            }
        }
    }
    out
}

pub fn ints_of(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}
