use super::{Int, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `A = U·D·V` with `U`, `V` unimodular and `d_1 | d_2 | …` on the diagonal.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
    /// Nonzero diagonal entries d_1 … d_rank.
    pub diagonal: Vec<Int>,
}

impl SnfResult {
    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diagonal.iter().filter(|x| !x.is_one()).cloned().collect()
    }
}

struct Work {
    d: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.p.swap_rows(a, b);
        self.p_inv.swap_cols(a, b);
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.q.swap_cols(a, b);
        self.q_inv.swap_rows(a, b);
    }
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        self.d.add_row(dst, src, c);
        self.p.add_row(dst, src, c);
        self.p_inv.add_col(src, dst, &-c);
    }
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        self.d.add_col(dst, src, c);
        self.q.add_col(dst, src, c);
        self.q_inv.add_row(src, dst, &-c);
    }
    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work {
        d: a.clone(),
        p: IntMatrix::identity(m),
        p_inv: IntMatrix::identity(m),
        q: IntMatrix::identity(n),
        q_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = w.d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let x = w.d.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(w.d.get(t, t));
                w.add_row(i, t, &-q);
                if !w.d.get(i, t).is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let x = w.d.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(w.d.get(t, t));
                w.add_col(j, t, &-q);
                if !w.d.get(t, j).is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block
            let piv = w.d.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.d.get(i, j).is_multiple_of(&piv)));
            match bad {
                Some(i) => w.add_row(t, i, &Int::one()),
                None => break,
            }
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..m.min(n)).take_while(|&i| !w.d.get(i, i).is_zero()).count();
    let diagonal = (0..rank).map(|i| w.d.get(i, i).clone()).collect();
    // P A Q = D  =>  A = P^{-1} D Q^{-1}
    SnfResult { u: w.p_inv, d: w.d, v: w.q_inv, u_inv: w.p, v_inv: w.q, rank, diagonal }
}

/// Row Hermite normal form; zero rows are dropped. Rows span the same lattice.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !h.get(i, c).is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h.get(i, c).abs()).unwrap();
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                let x = h.get(i, c).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(h.get(r, c));
                h.add_row(i, r, &-q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
        }
        let piv = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&piv);
            h.add_row(i, r, &-q);
        }
        r += 1;
    }
    let rows: Vec<Vec<Int>> = (0..r).map(|i| h.row(i)).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, n);
    }
    IntMatrix::from_rows(&rows)
}
