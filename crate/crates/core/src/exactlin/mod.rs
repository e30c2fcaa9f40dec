//! Exact integer and rational linear algebra, Smith normal form, an exact
//! simplex solver and rational polyhedra with lattice-point enumeration.

mod lp;
mod matrix;
mod polyhedron;
mod snf;

pub use lp::{maximize, LpOutcome};
pub use matrix::{det_rat, int_kernel_basis, nullspace, rank_mod_p, rank_rat, rref, solve_int, solve_rat, IntMatrix};
pub use polyhedron::{combinations, Dim, Inequality, RationalPolyhedron};
pub use snf::{hermite_rows, smith_normal_form, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rat(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn rats_of(v: &[Int]) -> Vec<Rat> {
    v.iter().map(to_rat).collect()
}

pub fn ceil(q: &Rat) -> Int {
    q.ceil().to_integer()
}

pub fn floor(q: &Rat) -> Int {
    q.floor().to_integer()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Pairing of a rational vector with an integer vector.
pub fn dot_ri(a: &[Rat], b: &[Int]) -> Rat {
    let mut num = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !y.is_zero() && !x.is_zero() {
            num += x * to_rat(y);
        }
    }
    num
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

/// Divide out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scale a rational vector to a primitive integer vector on the same ray.
pub fn primitive_of_rat(v: &[Rat]) -> Vec<Int> {
    let den = v.iter().fold(Int::one(), |l, q| l.lcm(q.denom()));
    let scaled: Vec<Int> = v.iter().map(|q| (q * to_rat(&den)).to_integer()).collect();
    primitive(&scaled)
}

/// Least common multiple of the denominators.
pub fn denom_lcm(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, q| l.lcm(q.denom()))
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_int(v: &Int) -> Int {
    v.abs()
}

/// `p/q` or `p`.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
