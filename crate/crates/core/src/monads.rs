//! Θ-graded free complexes over the Cox ring, their restriction to faces of
//! the secondary fan, and degree-zero strands.
//!
//! A summand is written S(c) by its class c; a map S(c) → S(c′) is
//! multiplication by a polynomial of degree c′ − c.

use crate::cohomology::ceiling_divisor;
use crate::divisor::{section_polyhedron_int, Class, ClassGroup};
use crate::error::{inv, pre, Error, Result};
use crate::exactlin::{
    ceil, dot_int, rank_mod_p, rank_rat, rats_of, smith_normal_form, solve_int, solve_rat, to_rat, Dim, Int, IntMatrix,
    Rat,
};
use crate::gkz::{Face, SecondaryFan};
use crate::model::ToricModel;
use crate::theta::theta_membership;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, Int>,
}

/// Terms of different degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inhomogeneous;

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(exp: Vec<u32>, c: Int) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            let v = self.terms.entry(e.clone()).or_insert_with(Int::zero);
            *v += c;
            if v.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_assign(&Poly::monomial(e, c1 * c2));
            }
        }
        out
    }

    /// Common degree of all terms; `Ok(None)` for the zero polynomial.
    pub fn degree(&self, cl: &ClassGroup) -> std::result::Result<Option<Class>, Inhomogeneous> {
        let mut deg: Option<Class> = None;
        for e in self.terms.keys() {
            let d = cl.degree(&e.iter().map(|&x| Int::from(x)).collect::<Vec<_>>());
            match &deg {
                None => deg = Some(d),
                Some(prev) if *prev != d => return Err(Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn parse(s: &str, names: &[String]) -> Result<Poly> {
        Parser { chars: s.chars().collect(), pos: 0, names }.poly()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (j, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(names[j].clone()),
                    _ => factors.push(format!("{}^{}", names[j], x)),
                }
            }
            let a = c.abs();
            let body = match (factors.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => factors.join("*"),
                (false, false) => format!("{}*{}", a, factors.join("*")),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                out.push_str(if c.is_negative() { "-" } else { "" });
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&body);
        }
        out
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        let s: String = self.chars.iter().collect();
        Err(Error::Schema(format!("polynomial {s:?}, column {}: {msg}", self.pos + 1)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<Int> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (start < self.pos).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut out = Poly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                None => return self.err("empty expression"),
                Some('+') => {
                    self.pos += 1;
                    Int::one()
                }
                Some('-') => {
                    self.pos += 1;
                    -Int::one()
                }
                Some(_) if first => Int::one(),
                Some(_) => return self.err("expected + or -"),
            };
            first = false;
            let (exp, c) = self.term()?;
            out.add_assign(&Poly::monomial(exp, sign * c));
        }
        Ok(out)
    }

    /// Product of integer and variable factors joined by '*'.
    fn term(&mut self) -> Result<(Vec<u32>, Int)> {
        let mut exp = vec![0u32; self.names.len()];
        let mut coef = Int::one();
        loop {
            if let Some(n) = self.number() {
                coef *= n;
            } else {
                let Some(name) = self.ident() else { return self.err("expected a variable or a number") };
                let Some(j) = self.names.iter().position(|x| *x == name) else {
                    return self.err(&format!("unknown variable {name}"));
                };
                let mut power = 1u32;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let Some(p) = self.number().and_then(|p| p.to_u32()) else { return self.err("bad exponent") };
                    power = p;
                }
                exp[j] += power;
            }
            if self.peek() != Some('*') {
                return Ok((exp, coef));
            }
            self.pos += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub class: Class,
    pub multiplicity: usize,
    /// θ with −deg d(θ) = class; filled from Θ membership when absent.
    pub witness: Option<Vec<Rat>>,
}

/// Terms per cohomological degree; `differentials[k]` maps degree k to k+1,
/// rows indexed by the expanded summands of degree k+1, columns by those of k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaComplex {
    pub variables: Vec<String>,
    pub terms: BTreeMap<i64, Vec<Summand>>,
    pub differentials: BTreeMap<i64, Vec<Vec<Poly>>>,
}

impl ThetaComplex {
    pub fn default_variables(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    /// Summand index per basis element of the free module in degree k.
    pub fn expanded(&self, k: i64) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(ts) = self.terms.get(&k) {
            for (i, s) in ts.iter().enumerate() {
                out.extend(std::iter::repeat_n(i, s.multiplicity));
            }
        }
        out
    }

    pub fn rank(&self, k: i64) -> usize {
        self.terms.get(&k).map_or(0, |ts| ts.iter().map(|s| s.multiplicity).sum())
    }

    /// The differential out of degree k, zero-filled when not given.
    pub fn differential(&self, k: i64) -> Vec<Vec<Poly>> {
        self.differentials.get(&k).cloned().unwrap_or_else(|| vec![vec![Poly::zero(); self.rank(k)]; self.rank(k + 1)])
    }

    /// Degrees carrying a nonzero term.
    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().filter(|&k| self.rank(k) > 0).collect()
    }

    fn degree_range(&self) -> Vec<i64> {
        let s = self.support();
        match (s.first(), s.last()) {
            (Some(&a), Some(&b)) => (a..=b).collect(),
            _ => Vec::new(),
        }
    }
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], inner: usize) -> Vec<Vec<Poly>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Poly::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc.add_assign(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexVerdict {
    pub valid: bool,
    /// Degrees k with d^{k+1} d^k checked.
    pub composites_checked: Vec<i64>,
    pub violations: Vec<String>,
}

fn check_shapes(c: &ThetaComplex, nvars: usize, out: &mut Vec<String>) {
    if c.variables.len() != nvars {
        out.push(format!("{} variables declared, the model has {nvars}", c.variables.len()));
    }
    for (&k, m) in &c.differentials {
        let (rows, cols) = (c.rank(k + 1), c.rank(k));
        if m.len() != rows || m.iter().any(|r| r.len() != cols) {
            out.push(format!("d^{k} should be {rows}x{cols}"));
        }
        for row in m {
            for p in row {
                if p.terms.keys().any(|e| e.len() != nvars) {
                    out.push(format!("d^{k} has an entry over the wrong number of variables"));
                }
            }
        }
    }
}

/// Shapes, homogeneity of every entry, and d∘d = 0 by exact polynomial arithmetic.
pub fn validate_complex(c: &ThetaComplex, model: &ToricModel) -> ComplexVerdict {
    let cl = &model.cl;
    let mut violations = Vec::new();
    for (&k, ts) in &c.terms {
        for (i, s) in ts.iter().enumerate() {
            if s.class.len() != cl.free_rank + cl.torsion.len() || cl.reduce(&s.class) != s.class {
                violations.push(format!("term {i} in degree {k}: class is not a reduced class"));
            }
        }
    }
    check_shapes(c, model.nrays(), &mut violations);
    if !violations.is_empty() {
        return ComplexVerdict { valid: false, composites_checked: Vec::new(), violations };
    }
    for (&k, m) in &c.differentials {
        let src = c.expanded(k);
        let tgt = c.expanded(k + 1);
        for (r, row) in m.iter().enumerate() {
            for (col, p) in row.iter().enumerate() {
                let want = cl.sub(&c.terms[&(k + 1)][tgt[r]].class, &c.terms[&k][src[col]].class);
                match p.degree(cl) {
                    Err(Inhomogeneous) => violations.push(format!("d^{k}[{r}][{col}] is not homogeneous")),
                    Ok(Some(d)) if d != want => {
                        violations.push(format!("d^{k}[{r}][{col}] has degree {d:?}, expected {want:?}"))
                    }
                    _ => {}
                }
            }
        }
    }
    let mut checked = Vec::new();
    for &k in c.differentials.keys() {
        if let Some(next) = c.differentials.get(&(k + 1)) {
            let comp = mat_mul(next, &c.differentials[&k], c.rank(k + 1));
            if comp.iter().flatten().any(|p| !p.is_zero()) {
                violations.push(format!("d^{} d^{k} is not zero", k + 1));
            }
            checked.push(k);
        }
    }
    ComplexVerdict { valid: violations.is_empty(), composites_checked: checked, violations }
}

/// θ ∈ L^⊥ + M, for a Z-basis of L ∩ N: exactly when every ⟨θ, l⟩ is an integer.
/// The basis must be saturated (all SNF invariants 1), which is checked.
pub fn in_lperp_plus_m(lineality: &[Vec<Int>], theta: &[Rat]) -> Result<bool> {
    if lineality.is_empty() {
        return Ok(true);
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(lineality));
    if snf.rank != lineality.len() || snf.diagonal.iter().any(|d| !d.is_one()) {
        return inv("lineality basis is not a saturated lattice basis");
    }
    Ok(lineality.iter().all(|l| crate::exactlin::dot_ri(theta, l).is_integer()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSpace {
    pub face: usize,
    pub dim: usize,
    pub rays: Vec<Vec<Int>>,
    /// None for a point.
    pub cl: Option<ClassGroup>,
}

impl FaceSpace {
    /// The class basis of X_Γ uses the surviving images of the model's basis
    /// rays when they form one, so that a chamber keeps the model's coordinates.
    pub fn of(model: &ToricModel, face: &Face) -> Result<Self> {
        let g = &face.data;
        let preferred: Option<Vec<usize>> =
            model.cl.basis_rays().map(|b| b.iter().filter_map(|&j| g.ray_image[j]).collect());
        let cl = if g.quotient_rays.is_empty() {
            None
        } else {
            let tried = preferred.and_then(|b| ClassGroup::from_pairing(&g.quotient_rays, Some(&b)).ok());
            Some(match tried {
                Some(c) => c,
                None => ClassGroup::from_pairing(&g.quotient_rays, None)?,
            })
        };
        Ok(FaceSpace { face: face.id, dim: g.quotient_dim(), rays: g.quotient_rays.clone(), cl })
    }

    /// Class of O(−d) on X_Γ for a witness θ ∈ L^⊥ + M: move θ into L^⊥ by an
    /// element of M, write it in the quotient basis and take the ceiling divisor
    /// on the quotient rays.
    pub fn label(&self, face: &Face, theta: &[Rat]) -> Result<Class> {
        let g = &face.data;
        let Some(cl) = &self.cl else { return Ok(Vec::new()) };
        let theta_q = if g.lineality.is_empty() {
            theta.to_vec()
        } else {
            let z: Vec<Int> = g
                .lineality
                .iter()
                .map(|l| {
                    let v = crate::exactlin::dot_ri(theta, l);
                    v.to_integer()
                })
                .collect();
            let Some(m0) = solve_int(&IntMatrix::from_rows(&g.lineality), &z) else {
                return inv("no lattice point with prescribed lineality pairings");
            };
            theta.iter().zip(&m0).map(|(t, m)| t - to_rat(m)).collect()
        };
        // θ' = Σ t_k w_k
        let n = theta.len();
        let wt: Vec<Vec<Rat>> = (0..n).map(|i| g.quotient_basis.iter().map(|w| to_rat(&w[i])).collect()).collect();
        let Some(t) = solve_rat(&wt, &theta_q) else { return inv("shifted witness is not in L^⊥") };
        let d: Vec<Int> = self.rays.iter().map(|u| ceil(&crate::exactlin::dot_ri(&t, u))).collect();
        Ok(cl.neg(&cl.degree(&d)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedSummand {
    /// Index of the summand in its degree of the original complex.
    pub source: usize,
    pub class: Class,
    pub multiplicity: usize,
    /// O_{X_Γ}(label).
    pub label: Class,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedComplex {
    pub face: usize,
    pub space: FaceSpace,
    pub terms: BTreeMap<i64, Vec<RestrictedSummand>>,
    pub differentials: BTreeMap<i64, Vec<Vec<Poly>>>,
    /// (degree, summand index) of dropped summands.
    pub dropped: Vec<(i64, usize)>,
    pub d_squared_zero: bool,
}

impl RestrictedComplex {
    pub fn rank(&self, k: i64) -> usize {
        self.terms.get(&k).map_or(0, |ts| ts.iter().map(|s| s.multiplicity).sum())
    }

    /// (degree, [(label, multiplicity)]) for nonzero degrees.
    pub fn shape(&self) -> Vec<(i64, Vec<(Class, usize)>)> {
        self.terms
            .iter()
            .filter(|(_, ts)| !ts.is_empty())
            .map(|(&k, ts)| {
                let mut agg: BTreeMap<Class, usize> = BTreeMap::new();
                for s in ts {
                    *agg.entry(s.label.clone()).or_default() += s.multiplicity;
                }
                (k, agg.into_iter().collect())
            })
            .collect()
    }
}

fn witness_of(model: &ToricModel, s: &Summand) -> Result<Vec<Rat>> {
    let betas = model.betas();
    match &s.witness {
        Some(w) => {
            let d = ceiling_divisor(&betas, w);
            if model.cl.neg(&model.cl.degree(&d)) != s.class {
                return Err(Error::Schema(format!("witness does not give class {:?}", s.class)));
            }
            Ok(w.clone())
        }
        None => theta_membership(&betas, &model.cl, &s.class)
            .ok_or_else(|| Error::Precondition(format!("class {:?} is not in Θ and has no witness", s.class))),
    }
}

/// Keep exactly the summands whose witness lies in L^⊥ + M, delete their rows
/// and columns, relabel the survivors on X_Γ, and recheck d∘d = 0.
pub fn restrict_to_face(model: &ToricModel, c: &ThetaComplex, face: &Face) -> Result<RestrictedComplex> {
    let space = FaceSpace::of(model, face)?;
    let mut terms = BTreeMap::new();
    let mut dropped = Vec::new();
    let mut keep_basis: BTreeMap<i64, Vec<bool>> = BTreeMap::new();
    for (&k, ts) in &c.terms {
        let mut kept = Vec::new();
        let mut mask = Vec::new();
        for (i, s) in ts.iter().enumerate() {
            let w = witness_of(model, s)?;
            let ok = in_lperp_plus_m(&face.data.lineality, &w)?;
            mask.extend(std::iter::repeat_n(ok, s.multiplicity));
            if ok {
                let label = space.label(face, &w)?;
                kept.push(RestrictedSummand { source: i, class: s.class.clone(), multiplicity: s.multiplicity, label });
            } else {
                dropped.push((k, i));
            }
        }
        terms.insert(k, kept);
        keep_basis.insert(k, mask);
    }
    let mut differentials = BTreeMap::new();
    for k in c.degree_range() {
        let m = c.differential(k);
        let rows = keep_basis.get(&(k + 1)).cloned().unwrap_or_default();
        let cols = keep_basis.get(&k).cloned().unwrap_or_default();
        let sub: Vec<Vec<Poly>> = m
            .iter()
            .zip(&rows)
            .filter(|(_, &r)| r)
            .map(|(row, _)| row.iter().zip(&cols).filter(|(_, &c)| c).map(|(p, _)| p.clone()).collect())
            .collect();
        differentials.insert(k, sub);
    }
    let mut zero = true;
    for (&k, m) in &differentials {
        if let Some(next) = differentials.get(&(k + 1)) {
            let inner = keep_basis.get(&(k + 1)).map_or(0, |v| v.iter().filter(|&&b| b).count());
            zero &= mat_mul(next, m, inner).iter().flatten().all(|p| p.is_zero());
        }
    }
    differentials.retain(|_, m| m.iter().flatten().any(|p| !p.is_zero()));
    Ok(RestrictedComplex { face: face.id, space, terms, differentials, dropped, d_squared_zero: zero })
}

/// Monomial basis of S_c (exponent vectors), or an error when it is infinite.
pub fn graded_piece(model: &ToricModel, class: &[Int]) -> Result<Vec<Vec<u32>>> {
    let betas = model.betas();
    let a = model.cl.lift(class);
    let p = section_polyhedron_int(&betas, &a);
    if p.count_lattice() == Dim::Infinite {
        return pre(format!("S_{class:?} is infinite-dimensional"));
    }
    let mut out: Vec<Vec<u32>> = p
        .lattice_points(None)?
        .iter()
        .map(|k| betas.iter().zip(&a).map(|(b, x)| (x + dot_int(k, b)).to_u32().expect("monomial exponent")).collect())
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    /// dim of the degree-zero piece per cohomological degree.
    pub dims: BTreeMap<i64, usize>,
    /// rank of the strand differential out of each degree.
    pub ranks: BTreeMap<i64, usize>,
    pub cohomology: BTreeMap<i64, usize>,
    pub characteristic: u64,
}

/// The degree-zero strand: S(c)_0 = S_c, differentials on monomial bases, exact ranks.
pub fn degree_zero_strand(model: &ToricModel, c: &ThetaComplex, characteristic: u64) -> Result<Strand> {
    let mut bases: BTreeMap<i64, Vec<(usize, Vec<u32>)>> = BTreeMap::new();
    for k in c.degree_range() {
        let mut basis = Vec::new();
        let ts = c.terms.get(&k).cloned().unwrap_or_default();
        let exp = c.expanded(k);
        for (pos, &i) in exp.iter().enumerate() {
            for mono in graded_piece(model, &ts[i].class)? {
                basis.push((pos, mono));
            }
        }
        bases.insert(k, basis);
    }
    let mut ranks = BTreeMap::new();
    for k in c.degree_range() {
        let (Some(src), Some(tgt)) = (bases.get(&k), bases.get(&(k + 1))) else {
            ranks.insert(k, 0);
            continue;
        };
        let index: BTreeMap<(usize, &Vec<u32>), usize> =
            tgt.iter().enumerate().map(|(i, (p, m))| ((*p, m), i)).collect();
        let d = c.differential(k);
        let mut mat = vec![vec![Int::zero(); src.len()]; tgt.len()];
        for (col, (p, mono)) in src.iter().enumerate() {
            for (row, entries) in d.iter().enumerate() {
                for (e, coef) in &entries[*p].terms {
                    let prod: Vec<u32> = e.iter().zip(mono).map(|(a, b)| a + b).collect();
                    let Some(&r) = index.get(&(row, &prod)) else {
                        return inv("strand differential leaves its graded piece");
                    };
                    mat[r][col] += coef;
                }
            }
        }
        let r = if mat.is_empty() || src.is_empty() {
            0
        } else if characteristic == 0 {
            rank_rat(&mat.iter().map(|r| rats_of(r)).collect::<Vec<_>>())
        } else {
            rank_mod_p(&mat, characteristic)
        };
        ranks.insert(k, r);
    }
    let dims: BTreeMap<i64, usize> = bases.iter().map(|(&k, b)| (k, b.len())).collect();
    let cohomology = dims
        .iter()
        .map(|(&k, &n)| (k, n - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k - 1)).copied().unwrap_or(0)))
        .collect();
    Ok(Strand { dims, ranks, cohomology, characteristic })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVanishing {
    pub face: usize,
    pub quotient_dim: usize,
    /// Positive degrees still carrying a summand after restriction.
    pub positive_survivors: Vec<i64>,
    pub ranks: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    /// Degrees > 0 where the complex has terms.
    pub offending: Vec<i64>,
    pub faces: Vec<FaceVanishing>,
    pub pass: bool,
}

/// Higher direct images vanish on every face when the complex lives in degrees ≤ 0.
pub fn vanishing_report(model: &ToricModel, gkz: &SecondaryFan, c: &ThetaComplex) -> Result<VanishingReport> {
    let offending: Vec<i64> = c.support().into_iter().filter(|&k| k > 0).collect();
    let mut faces = Vec::new();
    for f in &gkz.faces {
        let r = restrict_to_face(model, c, f)?;
        if !r.d_squared_zero {
            return inv(format!("restriction to face {} broke d∘d = 0", f.id));
        }
        let ranks: BTreeMap<i64, usize> = r.terms.keys().map(|&k| (k, r.rank(k))).filter(|(_, n)| *n > 0).collect();
        let positive_survivors = ranks.keys().copied().filter(|&k| k > 0).collect();
        faces.push(FaceVanishing { face: f.id, quotient_dim: f.data.quotient_dim(), positive_survivors, ranks });
    }
    Ok(VanishingReport { pass: offending.is_empty(), offending, faces })
}

/// The differential as rendered strings, for reports.
pub fn render_matrix(m: &[Vec<Poly>], names: &[String]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|p| p.render(names)).collect()).collect()
}
