use super::{
    ceil, denom_lcm, floor, maximize, nullspace, primitive_of_rat, rank_rat, solve_rat, to_rat, Int, LpOutcome, Rat,
};
use crate::error::{pre, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// `⟨normal, x⟩ ≥ offset`, or `>` when strict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub strict: bool,
}

/// Finite count or infinitely many.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl Dim {
    pub fn is_zero(&self) -> bool {
        *self == Dim::Finite(0)
    }
    pub fn finite(&self) -> Option<usize> {
        match self {
            Dim::Finite(n) => Some(*n),
            Dim::Infinite => None,
        }
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyhedron {
    pub dim: usize,
    pub ineqs: Vec<Inequality>,
}

struct IntIneq {
    normal: Vec<Int>,
    offset: Int,
}

impl RationalPolyhedron {
    pub fn new(dim: usize) -> Self {
        RationalPolyhedron { dim, ineqs: Vec::new() }
    }

    pub fn push(&mut self, normal: Vec<Rat>, offset: Rat, strict: bool) {
        assert_eq!(normal.len(), self.dim, "inequality dimension mismatch");
        self.ineqs.push(Inequality { normal, offset, strict });
    }

    pub fn ge(&mut self, normal: Vec<Rat>, offset: Rat) {
        self.push(normal, offset, false);
    }

    pub fn gt(&mut self, normal: Vec<Rat>, offset: Rat) {
        self.push(normal, offset, true);
    }

    pub fn le(&mut self, normal: Vec<Rat>, offset: Rat) {
        self.push(normal.into_iter().map(|x| -x).collect(), -offset, false);
    }

    pub fn lt(&mut self, normal: Vec<Rat>, offset: Rat) {
        self.push(normal.into_iter().map(|x| -x).collect(), -offset, true);
    }

    pub fn equal(&mut self, normal: Vec<Rat>, offset: Rat) {
        self.ge(normal.clone(), offset.clone());
        self.le(normal, offset);
    }

    pub fn ge_int(&mut self, normal: &[Int], offset: Int) {
        self.ge(normal.iter().map(to_rat).collect(), to_rat(&offset));
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|q| {
            let v = super::dot_rat(&q.normal, x);
            if q.strict {
                v > q.offset
            } else {
                v >= q.offset
            }
        })
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&x.iter().map(to_rat).collect::<Vec<_>>())
    }

    /// Same system with every strict inequality relaxed.
    pub fn closure(&self) -> RationalPolyhedron {
        let mut c = self.clone();
        for q in c.ineqs.iter_mut() {
            q.strict = false;
        }
        c
    }

    fn slack_lp(&self, on_all: bool) -> LpOutcome {
        let n = self.dim;
        let mut a = Vec::with_capacity(self.ineqs.len() + 1);
        let mut b = Vec::with_capacity(self.ineqs.len() + 1);
        for q in &self.ineqs {
            let mut row: Vec<Rat> = q.normal.iter().map(|x| -x).collect();
            row.push(if on_all || q.strict { Rat::one() } else { Rat::zero() });
            a.push(row);
            b.push(-q.offset.clone());
        }
        let mut cap = vec![Rat::zero(); n + 1];
        cap[n] = Rat::one();
        a.push(cap.clone());
        b.push(Rat::one());
        maximize(&cap, &a, &b)
    }

    /// Exact feasibility with a rational witness satisfying every inequality.
    pub fn feasible(&self) -> Option<Vec<Rat>> {
        let n = self.dim;
        let first = self.slack_lp(true);
        let LpOutcome::Optimal { value, mut point } = first else {
            unreachable!("slack LP is always feasible and bounded")
        };
        if value.is_positive() {
            point.truncate(n);
            return Some(point);
        }
        if !self.ineqs.iter().any(|q| q.strict) {
            if value.is_negative() {
                return None;
            }
            point.truncate(n);
            return Some(point);
        }
        if value.is_negative() {
            return None;
        }
        match self.slack_lp(false) {
            LpOutcome::Optimal { value, mut point } if value.is_positive() => {
                point.truncate(n);
                Some(point)
            }
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.feasible().is_none()
    }

    /// Maximize over the closure.
    pub fn maximize(&self, c: &[Rat]) -> LpOutcome {
        let a: Vec<Vec<Rat>> = self.ineqs.iter().map(|q| q.normal.iter().map(|x| -x).collect()).collect();
        let b: Vec<Rat> = self.ineqs.iter().map(|q| -q.offset.clone()).collect();
        maximize(c, &a, &b)
    }

    /// Coordinate bounds of the closure; `Ok(None)` when empty, error when unbounded.
    pub fn bounds(&self) -> Result<Option<Vec<(Rat, Rat)>>> {
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut c = vec![Rat::zero(); self.dim];
            c[i] = Rat::one();
            let hi = match self.maximize(&c) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return pre("polyhedron is unbounded; a box is required"),
                LpOutcome::Optimal { value, .. } => value,
            };
            c[i] = -Rat::one();
            let lo = match self.maximize(&c) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return pre("polyhedron is unbounded; a box is required"),
                LpOutcome::Optimal { value, .. } => -value,
            };
            out.push((lo, hi));
        }
        Ok(Some(out))
    }

    /// Whether the recession cone of the closure is zero.
    pub fn recession_is_zero(&self) -> bool {
        let mut cone = RationalPolyhedron::new(self.dim);
        for q in &self.ineqs {
            cone.ge(q.normal.clone(), Rat::zero());
        }
        for i in 0..self.dim {
            for s in [1, -1] {
                let mut c = vec![Rat::zero(); self.dim];
                c[i] = Rat::from_integer(s.into());
                if !matches!(cone.maximize(&c), LpOutcome::Optimal { ref value, .. } if value.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the lineality space {x : ⟨normal, x⟩ = 0 for all inequalities}.
    pub fn lineality(&self) -> Vec<Vec<Rat>> {
        let rows: Vec<Vec<Rat>> = self.ineqs.iter().map(|q| q.normal.clone()).collect();
        nullspace(&rows, self.dim)
    }

    /// Vertices of the closure (requires a pointed polyhedron), in lexicographic order.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let n = self.dim;
        let closed = self.closure();
        let mut out: BTreeSet<Vec<Rat>> = BTreeSet::new();
        if n == 0 {
            if closed.feasible().is_some() {
                out.insert(Vec::new());
            }
            return out.into_iter().collect();
        }
        for subset in combinations(self.ineqs.len(), n) {
            let m: Vec<Vec<Rat>> = subset.iter().map(|&i| self.ineqs[i].normal.clone()).collect();
            if rank_rat(&m) < n {
                continue;
            }
            let b: Vec<Rat> = subset.iter().map(|&i| self.ineqs[i].offset.clone()).collect();
            if let Some(x) = solve_rat(&m, &b) {
                if closed.contains(&x) {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Primitive integer generators of the extreme rays of the recession cone (pointed case).
    pub fn recession_rays(&self) -> Vec<Vec<Int>> {
        let n = self.dim;
        let normals: Vec<Vec<Rat>> = self.ineqs.iter().map(|q| q.normal.clone()).collect();
        let mut out: BTreeSet<Vec<Int>> = BTreeSet::new();
        if n == 0 {
            return Vec::new();
        }
        for subset in combinations(normals.len(), n - 1) {
            let m: Vec<Vec<Rat>> = subset.iter().map(|&i| normals[i].clone()).collect();
            if rank_rat(&m) != n - 1 {
                continue;
            }
            let ns = nullspace(&m, n);
            if ns.len() != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let r: Vec<Rat> = ns[0].iter().map(|x| x * Rat::from_integer(s.into())).collect();
                if normals.iter().all(|q| !super::dot_rat(q, &r).is_negative()) {
                    out.insert(primitive_of_rat(&r));
                }
            }
        }
        out.into_iter().collect()
    }

    fn integer_form(&self) -> Vec<IntIneq> {
        self.ineqs
            .iter()
            .map(|q| {
                let l = denom_lcm(&q.normal);
                let lr = to_rat(&l);
                let normal: Vec<Int> = q.normal.iter().map(|x| (x * &lr).to_integer()).collect();
                let off = &q.offset * &lr;
                let offset = if q.strict { floor(&off) + Int::one() } else { ceil(&off) };
                IntIneq { normal, offset }
            })
            .collect()
    }

    /// Integer points inside `[lo, hi]` in lexicographic order.
    pub fn lattice_points_in_box(&self, lo: &[Int], hi: &[Int]) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        self.visit_box(lo, hi, &mut |p| {
            out.push(p.to_vec());
            true
        });
        out
    }

    /// Calls `f` on each lattice point in the box until it returns false.
    pub fn visit_box(&self, lo: &[Int], hi: &[Int], f: &mut dyn FnMut(&[Int]) -> bool) {
        let n = self.dim;
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return;
        }
        let iq = self.integer_form();
        // suffix maxima: smax[i][k] = max over coords >= k of sum n_ij x_j
        let smax: Vec<Vec<Int>> = iq
            .iter()
            .map(|q| {
                let mut s = vec![Int::zero(); n + 1];
                for k in (0..n).rev() {
                    let a = &q.normal[k] * &lo[k];
                    let b = &q.normal[k] * &hi[k];
                    s[k] = &s[k + 1] + if a > b { a } else { b };
                }
                s
            })
            .collect();
        let mut partial = vec![Int::zero(); iq.len()];
        let mut point = vec![Int::zero(); n];
        if n == 0 {
            if iq.iter().all(|q| !q.offset.is_positive()) {
                f(&point);
            }
            return;
        }
        rec(0, n, &iq, &smax, lo, hi, &mut partial, &mut point, f);
    }

    /// Exactly the integer points; the box is derived from the vertices.
    pub fn lattice_points(&self, bounds: Option<(&[Int], &[Int])>) -> Result<Vec<Vec<Int>>> {
        if let Some((lo, hi)) = bounds {
            return Ok(self.lattice_points_in_box(lo, hi));
        }
        match self.bounds()? {
            None => Ok(Vec::new()),
            Some(b) => {
                let lo: Vec<Int> = b.iter().map(|(l, _)| ceil(l)).collect();
                let hi: Vec<Int> = b.iter().map(|(_, h)| floor(h)).collect();
                Ok(self.lattice_points_in_box(&lo, &hi))
            }
        }
    }

    /// Box that contains an integer point of P whenever P has one
    /// (vertices plus the unit parallelepiped of the extreme recession rays).
    /// Requires a pointed polyhedron; `None` when empty.
    pub fn integer_search_box(&self) -> Option<(Vec<Int>, Vec<Int>)> {
        self.closure().feasible()?;
        let verts = self.vertices();
        if verts.is_empty() {
            return None;
        }
        let rays = self.recession_rays();
        let n = self.dim;
        let mut lo: Vec<Int> = (0..n).map(|i| verts.iter().map(|v| floor(&v[i])).min().unwrap()).collect();
        let mut hi: Vec<Int> = (0..n).map(|i| verts.iter().map(|v| ceil(&v[i])).max().unwrap()).collect();
        for r in &rays {
            for i in 0..n {
                if r[i].is_negative() {
                    lo[i] += &r[i];
                } else {
                    hi[i] += &r[i];
                }
            }
        }
        Some((lo, hi))
    }

    pub fn integer_point(&self) -> Option<Vec<Int>> {
        let (lo, hi) = self.integer_search_box()?;
        let mut found = None;
        self.visit_box(&lo, &hi, &mut |p| {
            found = Some(p.to_vec());
            false
        });
        found
    }

    /// Number of integer points (pointed polyhedra).
    pub fn count_lattice(&self) -> Dim {
        if self.closure().feasible().is_none() {
            return Dim::Finite(0);
        }
        if self.recession_is_zero() {
            return Dim::Finite(self.lattice_points(None).map(|v| v.len()).unwrap_or(0));
        }
        if self.integer_point().is_some() {
            Dim::Infinite
        } else {
            Dim::Finite(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rec(
    k: usize,
    n: usize,
    iq: &[IntIneq],
    smax: &[Vec<Int>],
    lo: &[Int],
    hi: &[Int],
    partial: &mut [Int],
    point: &mut [Int],
    f: &mut dyn FnMut(&[Int]) -> bool,
) -> bool {
    // bounds for coordinate k from each inequality
    let mut l = lo[k].clone();
    let mut h = hi[k].clone();
    for (q, (s, p)) in iq.iter().zip(smax.iter().zip(partial.iter())) {
        let a = &q.normal[k];
        let need = &q.offset - p - &s[k + 1];
        if a.is_positive() {
            let b = need.div_ceil(a);
            if b > l {
                l = b;
            }
        } else if a.is_negative() {
            let b = (-need).div_floor(&-a);
            if b < h {
                h = b;
            }
        } else if need.is_positive() {
            return true;
        }
    }
    let mut x = l;
    while x <= h {
        point[k] = x.clone();
        for (p, q) in partial.iter_mut().zip(iq) {
            *p += &q.normal[k] * &x;
        }
        let cont = if k + 1 == n {
            if iq.iter().zip(partial.iter()).all(|(q, p)| *p >= q.offset) {
                f(point)
            } else {
                true
            }
        } else {
            rec(k + 1, n, iq, smax, lo, hi, partial, point, f)
        };
        for (p, q) in partial.iter_mut().zip(iq) {
            *p -= &q.normal[k] * &x;
        }
        if !cont {
            return false;
        }
        x += 1;
    }
    true
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    'outer: loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 {
            i -= 1;
            if cur[i] != i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return out;
    }
}
