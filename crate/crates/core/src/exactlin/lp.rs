use super::Rat;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Rat], objval: &mut Rat, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            *objval += &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Bland's rule; returns false when unbounded.
    fn optimize(&mut self, obj: &mut [Rat], objval: &mut Rat, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(obj, objval, r, c);
        }
    }
}

/// Maximize `c·x` subject to `a x ≤ b`, with `x` free.
pub fn maximize(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // columns: x+ (n), x- (n), slack (m), artificial (k)
    let neg: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let width = 2 * n + m + neg.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i].is_negative() { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
        let mut row = vec![Rat::zero(); width];
        for j in 0..n {
            if !a[i][j].is_zero() {
                row[j] = &a[i][j] * &sign;
                row[n + j] = -&row[j];
            }
        }
        row[2 * n + i] = sign.clone();
        if let Some(k) = neg.iter().position(|&x| x == i) {
            row[2 * n + m + k] = Rat::from_integer(1.into());
            basis.push(2 * n + m + k);
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
        rhs.push(&b[i] * &sign);
    }
    let mut t = Tableau { rows, rhs, basis };
    let real = 2 * n + m;

    if !neg.is_empty() {
        // phase 1: maximize -(sum of artificials)
        let mut obj = vec![Rat::zero(); width];
        for j in real..width {
            obj[j] = -Rat::from_integer(1.into());
        }
        let mut val = Rat::zero();
        for i in 0..m {
            let bv = t.basis[i];
            if bv >= real {
                for (o, x) in obj.iter_mut().zip(&t.rows[i]) {
                    if !x.is_zero() {
                        *o += x;
                    }
                }
                val -= &t.rhs[i];
            }
        }
        t.optimize(&mut obj, &mut val, width);
        if val.is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= real {
                if let Some(c) = (0..real).find(|&j| !t.rows[i][j].is_zero()) {
                    let mut dummy = vec![Rat::zero(); width];
                    let mut dv = Rat::zero();
                    t.pivot(&mut dummy, &mut dv, i, c);
                } else {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for row in t.rows.iter_mut() {
            row.truncate(real);
        }
    }

    let mut obj = vec![Rat::zero(); real];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -c[j].clone();
    }
    let mut val = Rat::zero();
    for i in 0..t.rows.len() {
        let bv = t.basis[i];
        if bv < real && !obj[bv].is_zero() {
            let f = obj[bv].clone();
            for (o, x) in obj.iter_mut().zip(&t.rows[i]) {
                if !x.is_zero() {
                    *o -= &f * x;
                }
            }
            val += &f * &t.rhs[i];
        }
    }
    if !t.optimize(&mut obj, &mut val, real) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Rat::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            point[bv] += &t.rhs[i];
        } else if bv < 2 * n {
            point[bv - n] -= &t.rhs[i];
        }
    }
    LpOutcome::Optimal { value: val, point }
}
