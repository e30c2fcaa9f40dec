#![allow(dead_code, clippy::needless_range_loop)]

pub mod oracles;
pub mod suites;

use coxcat::exactlin::*;
use coxcat::fan::*;

pub fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    validate_fan(dim, rays.iter().map(|r| ints(r)).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

pub fn pn(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    validate_fan(n, rays.iter().map(|r| ints(r)).collect(), cones).unwrap()
}

pub fn h3() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 3], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn h1() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn p1xp1() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn p113() -> Fan {
    fan(2, &[&[1, 0], &[-1, 3], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

pub fn bl2p3() -> Fan {
    fan(
        3,
        &[&[-1, -1, -1], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -1], &[1, 1, 1]],
        &[&[0, 1, 3], &[0, 2, 3], &[0, 1, 4], &[0, 2, 4], &[1, 2, 4], &[1, 2, 5], &[1, 3, 5], &[2, 3, 5]],
    )
}

pub fn flop_rays() -> Vec<&'static [i64]> {
    vec![&[0, 0, 1], &[1, 1, 1], &[1, 0, 1], &[0, 1, 1]]
}

pub fn flop_plus() -> Fan {
    fan(3, &flop_rays(), &[&[0, 2, 3], &[1, 2, 3]])
}

pub fn flop_minus() -> Fan {
    fan(3, &flop_rays(), &[&[0, 1, 2], &[0, 1, 3]])
}
