#![allow(dead_code)]

use tkrylov::{gaussian_tensor, tprod, tqr, Tensor3};

/// Seeded standard-normal tensor.
pub fn randn(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
    gaussian_tensor(n1, n2, n3, seed)
}

/// Tensor with orthonormal lateral slices (`n1 × cols × n3`, `cols ≤ n1`).
pub fn orthogonal(n1: usize, cols: usize, n3: usize, seed: u64) -> Tensor3 {
    tqr(&randn(n1, cols, n3, seed)).unwrap().q
}

/// Product of Gaussian factors: tubal rank `rank` with probability one.
pub fn low_rank(n1: usize, n2: usize, n3: usize, rank: usize, seed: u64) -> Tensor3 {
    tprod(&randn(n1, rank, n3, seed), &randn(rank, n2, n3, seed.wrapping_add(7_777))).unwrap()
}

/// `‖a − b‖_F / max(‖a‖_F, tiny)`.
pub fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
    a.sub(b).unwrap().fro_norm() / a.fro_norm().max(f64::MIN_POSITIVE)
}

pub fn t(x: &Tensor3) -> Tensor3 {
    x.t_transpose()
}

pub fn mul(a: &Tensor3, b: &Tensor3) -> Tensor3 {
    tprod(a, b).unwrap()
}

pub fn mul3(a: &Tensor3, b: &Tensor3, c: &Tensor3) -> Tensor3 {
    mul(&mul(a, b), c)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
