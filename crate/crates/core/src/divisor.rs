//! Class groups, torus-invariant divisors, support functions and section polyhedra.

use crate::error::{pre, Error, Result};
use crate::exactlin::{
    combinations, dot_ri, hermite_rows, smith_normal_form, solve_int, solve_rat, to_rat, Int, IntMatrix, Rat,
    RationalPolyhedron,
};
use crate::fan::StackyFan;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Free coordinates followed by torsion coordinates (reduced).
pub type Class = Vec<Int>;

/// Cl = Z^r ⊕ ⊕ Z/t_i with the degree map Z^{rays} → Cl.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    /// (free_rank + torsion) × rays.
    proj: IntMatrix,
    /// Lifts of the generators of Cl.
    sections: Vec<Vec<Int>>,
}

impl ClassGroup {
    /// Cokernel of the pairing `Z^n → Z^{rays}`, rows of `pairing` being the β vectors.
    pub fn from_pairing(pairing: &[Vec<Int>], class_basis: Option<&[usize]>) -> Result<Self> {
        let nrays = pairing.len();
        if nrays == 0 {
            return pre("no rays");
        }
        let b = IntMatrix::from_rows(pairing);
        let s = smith_normal_form(&b);
        let p = &s.u_inv;
        let r = nrays - s.rank;
        let tors: Vec<(usize, Int)> =
            s.diagonal.iter().enumerate().filter(|(_, d)| !d.is_one()).map(|(i, d)| (i, d.clone())).collect();
        let mut free = IntMatrix::zeros(r, nrays);
        for k in 0..r {
            for j in 0..nrays {
                free.set(k, j, p.get(s.rank + k, j).clone());
            }
        }
        let chosen = match class_basis {
            Some(sub) => {
                if sub.len() != r || sub.iter().any(|&j| j >= nrays) || !minor(&free, sub).is_unimodular() {
                    return Err(Error::Schema("class_basis is not a unimodular ray subset".into()));
                }
                Some(sub.to_vec())
            }
            None => {
                let mut subs = combinations(nrays, r);
                subs.sort_by(|x, y| y.iter().rev().cmp(x.iter().rev()));
                subs.into_iter().find(|sub| minor(&free, sub).is_unimodular())
            }
        };
        let (free, free_sections) = match &chosen {
            Some(sub) => {
                let t = inverse_unimodular(&minor(&free, sub));
                let f = t.mul(&free);
                let secs = sub
                    .iter()
                    .map(|&j| {
                        let mut e = vec![Int::zero(); nrays];
                        e[j] = Int::one();
                        e
                    })
                    .collect::<Vec<_>>();
                (f, secs)
            }
            None => {
                let h = hermite_rows(&free);
                let secs: Vec<Vec<Int>> = (0..r)
                    .map(|k| {
                        let mut target = vec![Int::zero(); r];
                        target[k] = Int::one();
                        solve_int(&h, &target).expect("surjective")
                    })
                    .collect();
                (h, secs)
            }
        };
        let rows = r + tors.len();
        let mut proj = IntMatrix::zeros(rows, nrays);
        for k in 0..r {
            for j in 0..nrays {
                proj.set(k, j, free.get(k, j).clone());
            }
        }
        for (t, (i, d)) in tors.iter().enumerate() {
            for j in 0..nrays {
                proj.set(r + t, j, p.get(*i, j).mod_floor(d));
            }
        }
        let torsion: Vec<Int> = tors.iter().map(|(_, d)| d.clone()).collect();
        let tors_lifts: Vec<Vec<Int>> = tors.iter().map(|(i, _)| s.u.col(*i)).collect();
        let mut cg = ClassGroup { free_rank: r, torsion, proj, sections: Vec::new() };
        let mut sections = Vec::with_capacity(rows);
        for sec in free_sections {
            let c = cg.degree(&sec);
            let mut x = sec;
            for (t, lift) in tors_lifts.iter().enumerate() {
                for (xi, li) in x.iter_mut().zip(lift) {
                    *xi -= &c[r + t] * li;
                }
            }
            sections.push(x);
        }
        sections.extend(tors_lifts);
        cg.sections = sections;
        Ok(cg)
    }

    /// Degrees given per variable (free part then torsion part).
    pub fn from_degrees(degrees: &[Vec<Int>], free_rank: usize, torsion: Vec<Int>) -> Result<Self> {
        let nrays = degrees.len();
        let rows = free_rank + torsion.len();
        if degrees.iter().any(|d| d.len() != rows) {
            return Err(Error::Schema("degree rows must have free_rank + torsion entries".into()));
        }
        if torsion.iter().any(|t| *t <= Int::one()) {
            return Err(Error::Schema("torsion orders must exceed 1".into()));
        }
        let mut proj = IntMatrix::zeros(rows, nrays);
        for (j, d) in degrees.iter().enumerate() {
            for k in 0..rows {
                let v = if k < free_rank { d[k].clone() } else { d[k].mod_floor(&torsion[k - free_rank]) };
                proj.set(k, j, v);
            }
        }
        let aug = augmented(&proj, free_rank, &torsion);
        let mut sections = Vec::with_capacity(rows);
        for k in 0..rows {
            let mut e = vec![Int::zero(); rows];
            e[k] = Int::one();
            match solve_int(&aug, &e) {
                Some(z) => sections.push(z[..nrays].to_vec()),
                None => return pre("degree map is not surjective onto the given class group"),
            }
        }
        Ok(ClassGroup { free_rank, torsion, proj, sections })
    }

    /// Rays whose degrees are the free unit vectors, when every one exists.
    pub fn basis_rays(&self) -> Option<Vec<usize>> {
        (0..self.free_rank)
            .map(|k| {
                (0..self.nrays()).find(|&j| {
                    let d = self.ray_degree(j);
                    d.iter().enumerate().all(|(i, x)| if i == k { x.is_one() } else { x.is_zero() })
                })
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.free_rank
    }

    pub fn nrays(&self) -> usize {
        self.proj.cols
    }

    pub fn reduce(&self, c: &[Int]) -> Class {
        let mut out = c.to_vec();
        for (t, d) in self.torsion.iter().enumerate() {
            out[self.free_rank + t] = out[self.free_rank + t].mod_floor(d);
        }
        out
    }

    pub fn degree(&self, a: &[Int]) -> Class {
        self.reduce(&self.proj.mul_vec(a))
    }

    /// Degree of a rational divisor, free part only.
    pub fn degree_rat(&self, a: &[Rat]) -> Vec<Rat> {
        (0..self.free_rank).map(|k| a.iter().enumerate().map(|(j, x)| x * to_rat(self.proj.get(k, j))).sum()).collect()
    }

    pub fn ray_degree(&self, j: usize) -> Class {
        self.proj.col(j)
    }

    pub fn degrees(&self) -> Vec<Class> {
        (0..self.nrays()).map(|j| self.ray_degree(j)).collect()
    }

    pub fn free_part(&self, c: &[Int]) -> Vec<Int> {
        c[..self.free_rank].to_vec()
    }

    /// A divisor with the given class.
    pub fn lift(&self, c: &[Int]) -> Vec<Int> {
        let mut x = vec![Int::zero(); self.nrays()];
        for (ci, s) in c.iter().zip(&self.sections) {
            if ci.is_zero() {
                continue;
            }
            for (xi, si) in x.iter_mut().zip(s) {
                *xi += ci * si;
            }
        }
        x
    }

    pub fn zero(&self) -> Class {
        vec![Int::zero(); self.free_rank + self.torsion.len()]
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Class {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[Int], b: &[Int]) -> Class {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[Int]) -> Class {
        self.reduce(&a.iter().map(|x| -x).collect::<Vec<_>>())
    }

    /// ω = −Σ deg(x_ρ).
    pub fn canonical(&self) -> Class {
        let ones = vec![Int::one(); self.nrays()];
        self.neg(&self.degree(&ones))
    }

    /// Free rows of the degree matrix, one per free coordinate.
    pub fn free_matrix(&self) -> Vec<Vec<Int>> {
        (0..self.free_rank).map(|k| self.proj.row(k)).collect()
    }

    /// Integer points x ≥ 0 of degree c, as a polyhedron in (x, k) with
    /// one auxiliary coordinate per torsion factor.
    pub fn fiber_polyhedron(&self, c: &[Int]) -> RationalPolyhedron {
        let n = self.nrays();
        let t = self.torsion.len();
        let mut p = RationalPolyhedron::new(n + t);
        for j in 0..n {
            let mut e = vec![Rat::zero(); n + t];
            e[j] = Rat::one();
            p.ge(e, Rat::zero());
        }
        for k in 0..self.free_rank + t {
            let mut row: Vec<Rat> = (0..n).map(|j| to_rat(self.proj.get(k, j))).collect();
            row.extend((0..t).map(|i| if k == self.free_rank + i { -to_rat(&self.torsion[i]) } else { Rat::zero() }));
            p.equal(row, to_rat(&c[k]));
        }
        p
    }
}

fn augmented(proj: &IntMatrix, r: usize, torsion: &[Int]) -> IntMatrix {
    let t = torsion.len();
    let mut a = IntMatrix::zeros(proj.rows, proj.cols + t);
    for k in 0..proj.rows {
        for j in 0..proj.cols {
            a.set(k, j, proj.get(k, j).clone());
        }
    }
    for (i, d) in torsion.iter().enumerate() {
        a.set(r + i, proj.cols + i, d.clone());
    }
    a
}

fn minor(m: &IntMatrix, cols: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows, cols.len());
    for i in 0..m.rows {
        for (k, &j) in cols.iter().enumerate() {
            out.set(i, k, m.get(i, j).clone());
        }
    }
    out
}

fn inverse_unimodular(m: &IntMatrix) -> IntMatrix {
    let rows = m.to_rat_rows();
    let n = m.rows;
    let mut inv = IntMatrix::zeros(n, n);
    for k in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[k] = Rat::one();
        let col = solve_rat(&rows, &e).expect("invertible");
        for i in 0..n {
            inv.set(i, k, col[i].to_integer());
        }
    }
    inv
}

/// Kernel lattice M of the degree map, as rows β_ρ (rays × rank M).
pub fn kernel_pairing(cg: &ClassGroup) -> Vec<Vec<Int>> {
    let aug = augmented(&cg.proj, cg.free_rank, &cg.torsion);
    let s = smith_normal_form(&aug);
    let n = cg.nrays();
    let vecs: Vec<Vec<Int>> = (s.rank..aug.cols).map(|j| s.v_inv.col(j)[..n].to_vec()).collect();
    if vecs.is_empty() {
        return vec![Vec::new(); n];
    }
    let h = hermite_rows(&IntMatrix::from_rows(&vecs));
    let basis = h.to_rows();
    (0..n).map(|rho| basis.iter().map(|b| b[rho].clone()).collect()).collect()
}

/// F given per maximal cone by m_σ with ⟨m_σ, β_ρ⟩ = −a_ρ on σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub cones: Vec<Vec<usize>>,
    pub forms: Vec<Vec<Rat>>,
}

impl SupportFunction {
    /// F(v) for v in the support of the fan.
    pub fn eval(&self, sf: &StackyFan, v: &[Rat]) -> Option<Rat> {
        let (j, _) = sf.fan.locate(v)?;
        Some(crate::exactlin::dot_rat(&self.forms[j], v))
    }
}

pub fn support_function(sf: &StackyFan, a: &[Rat]) -> Result<SupportFunction> {
    if a.len() != sf.fan.nrays() {
        return Err(Error::Schema("divisor length differs from ray count".into()));
    }
    let betas = sf.betas();
    let mut forms = Vec::with_capacity(sf.fan.cones.len());
    for c in &sf.fan.cones {
        let m: Vec<Vec<Rat>> = c.iter().map(|&r| betas[r].iter().map(to_rat).collect()).collect();
        let b: Vec<Rat> = c.iter().map(|&r| -a[r].clone()).collect();
        match solve_rat(&m, &b) {
            Some(x) => forms.push(x),
            None => return pre("divisor is not Q-Cartier on a non-simplicial cone"),
        }
    }
    Ok(SupportFunction { cones: sf.fan.cones.clone(), forms })
}

/// Some m_σ in every cone that lies in the section polyhedron of the used rays.
pub fn is_nef(sf: &StackyFan, a: &[Rat]) -> Result<bool> {
    support_function(sf, a)?;
    let betas = sf.betas();
    let used = sf.fan.used_rays();
    for c in &sf.fan.cones {
        let mut p = RationalPolyhedron::new(sf.fan.dim);
        for &r in &used {
            let n: Vec<Rat> = betas[r].iter().map(to_rat).collect();
            if c.contains(&r) {
                p.equal(n, -a[r].clone());
            } else {
                p.ge(n, -a[r].clone());
            }
        }
        if p.feasible().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_nef_int(sf: &StackyFan, a: &[Int]) -> Result<bool> {
    is_nef(sf, &a.iter().map(to_rat).collect::<Vec<_>>())
}

/// {m : ⟨m, β_ρ⟩ ≥ −a_ρ} over the given rays.
pub fn section_polyhedron(betas: &[Vec<Int>], a: &[Rat]) -> RationalPolyhedron {
    let dim = betas.first().map_or(0, |b| b.len());
    let mut p = RationalPolyhedron::new(dim);
    for (b, x) in betas.iter().zip(a) {
        p.ge(b.iter().map(to_rat).collect(), -x.clone());
    }
    p
}

pub fn section_polyhedron_int(betas: &[Vec<Int>], a: &[Int]) -> RationalPolyhedron {
    section_polyhedron(betas, &a.iter().map(to_rat).collect::<Vec<_>>())
}

/// Principal divisor (⟨m, β_ρ⟩)_ρ.
pub fn principal(betas: &[Vec<Int>], m: &[Int]) -> Vec<Int> {
    betas.iter().map(|b| crate::exactlin::dot_int(b, m)).collect()
}

pub fn principal_rat(betas: &[Vec<Int>], m: &[Rat]) -> Vec<Rat> {
    betas.iter().map(|b| dot_ri(m, b)).collect()
}

/// A monomial exponent vector of the given degree, if any.
pub fn effective(cg: &ClassGroup, c: &[Int]) -> Option<Vec<Int>> {
    let c = cg.reduce(c);
    if c.iter().all(|x| x.is_zero()) {
        return Some(vec![Int::zero(); cg.nrays()]);
    }
    let p = cg.fiber_polyhedron(&c);
    p.integer_point().map(|z| z[..cg.nrays()].to_vec())
}

/// Nonnegativity of an exponent vector.
pub fn is_monomial(x: &[Int]) -> bool {
    x.iter().all(|v| !v.is_negative())
}
