mod common;

use common::*;
use proptest::prelude::*;
use tkrylov::fourier::{idft_mode3_with_residue, spectral_product};
use tkrylov::oracle::{bcirc, full_spectrum_tprod, reference_spectral_norm, reference_tprod};
use tkrylov::{dft_mode3, idft_mode3, tprod, Tensor3};

#[test]
fn bcirc_of_transpose_is_transpose_of_bcirc() {
    let x = randn(3, 2, 4, 1);
    let lhs = bcirc(&x.t_transpose()).unwrap().m;
    let rhs = bcirc(&x).unwrap().m.transpose();
    assert!((lhs - rhs).abs().max() < 1e-12);
}

#[test]
fn identity_law_random() {
    let x = randn(3, 2, 4, 2);
    assert!(mul(&Tensor3::identity(3, 4), &x).max_abs_diff(&x).unwrap() < 1e-14);
}

#[test]
fn fro_norm_matches_fourier_formula() {
    let x = randn(3, 2, 4, 3);
    let spectral = dft_mode3(&x).fro_norm() / 4f64.sqrt();
    assert!((x.fro_norm() - spectral).abs() <= 1e-12 * x.fro_norm());
}

#[test]
fn spectral_norm_matches_bcirc_svd() {
    let x = randn(3, 2, 4, 4);
    let oracle = reference_spectral_norm(&x).unwrap();
    assert!((x.spectral_norm() - oracle).abs() < 1e-10);
}

#[test]
fn spectral_norm_is_submultiplicative() {
    for s in 0..10 {
        let x = randn(4, 3, 5, 100 + s);
        let y = randn(3, 6, 5, 200 + s);
        assert!(mul(&x, &y).spectral_norm() <= x.spectral_norm() * y.spectral_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn transpose_reverses_products() {
    let x = randn(4, 3, 5, 5);
    let y = randn(3, 2, 5, 6);
    let lhs = t(&mul(&x, &y));
    let rhs = mul(&t(&y), &t(&x));
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
}

#[test]
fn tprod_matches_oracle() {
    let x = randn(3, 2, 5, 7);
    let y = randn(2, 4, 5, 8);
    let fast = tprod(&x, &y).unwrap();
    let slow = reference_tprod(&x, &y).unwrap();
    assert!(fast.max_abs_diff(&slow).unwrap() < 1e-11);
}

#[test]
fn tprod_is_associative() {
    for s in 0..5 {
        let x = randn(3, 4, 6, 10 + s);
        let y = randn(4, 2, 6, 20 + s);
        let z = randn(2, 5, 6, 30 + s);
        assert!(rel(&mul(&mul(&x, &y), &z), &mul(&x, &mul(&y, &z))) < 1e-9);
    }
}

#[test]
fn fourier_slices_multiply() {
    let x = randn(3, 4, 7, 11);
    let y = randn(4, 2, 7, 12);
    let prod = dft_mode3(&mul(&x, &y));
    let (xf, yf) = (dft_mode3(&x), dft_mode3(&y));
    for k in 0..7 {
        let expect = xf.slice(k) * yf.slice(k);
        assert!((prod.slice(k) - expect).norm() < 1e-10);
    }
}

#[test]
fn symmetric_shortcut_matches_full_spectrum() {
    for n3 in [1usize, 2, 3, 4, 5, 6, 7, 8] {
        let x = randn(3, 4, n3, 40 + n3 as u64);
        let y = randn(4, 3, n3, 50 + n3 as u64);
        let fast = tprod(&x, &y).unwrap();
        let naive = full_spectrum_tprod(&x, &y).unwrap();
        assert!(fast.max_abs_diff(&naive).unwrap() <= 1e-12 * naive.fro_norm().max(1.0), "n3 = {n3}");
    }
}

#[test]
fn real_inputs_give_real_products() {
    for n3 in [2usize, 5, 8] {
        let x = randn(5, 4, n3, 60 + n3 as u64);
        let y = randn(4, 6, n3, 70 + n3 as u64);
        let spectrum = spectral_product(&dft_mode3(&x), &dft_mode3(&y)).unwrap();
        let (out, residue) = idft_mode3_with_residue(&spectrum).unwrap();
        assert!(residue < 1e-10 * out.fro_norm());
    }
}

#[test]
fn forward_transform_of_real_tensor_is_conjugate_symmetric() {
    let x = randn(2, 3, 6, 9);
    let xf = dft_mode3(&x);
    assert!(xf.slice(0).iter().all(|z| z.im.abs() < 1e-9));
    for k in 1..6 {
        assert!((xf.slice(k) - xf.slice(6 - k).map(|z| z.conj())).norm() < 1e-12);
    }
}

fn tensor_strategy() -> impl Strategy<Value = Tensor3> {
    (1usize..5, 1usize..5, 1usize..7).prop_flat_map(|(n1, n2, n3)| {
        prop::collection::vec(-10.0f64..10.0, n1 * n2 * n3).prop_map(move |d| Tensor3::new(n1, n2, n3, d).unwrap())
    })
}

proptest! {
    #[test]
    fn transpose_is_involution(x in tensor_strategy()) {
        prop_assert_eq!(x.t_transpose().t_transpose(), x);
    }

    #[test]
    fn dft_round_trip(x in tensor_strategy()) {
        let back = idft_mode3(&dft_mode3(&x)).unwrap();
        prop_assert!(x.max_abs_diff(&back).unwrap() <= 1e-12 * (1.0 + x.fro_norm()));
    }

    #[test]
    fn concat_then_slice_recovers_parts(a in tensor_strategy(), extra in 1usize..4, seed in 0u64..1000) {
        let b = randn(a.n1(), extra, a.n3(), seed);
        let c = Tensor3::concat_lateral(&[&a, &b]).unwrap();
        prop_assert_eq!(c.lateral_range(0, a.n2()).unwrap(), a.clone());
        prop_assert_eq!(c.lateral_range(a.n2(), a.n2() + extra).unwrap(), b);
    }

    #[test]
    fn squared_fro_norm_parseval(x in tensor_strategy()) {
        let spatial = x.fro_norm().powi(2);
        let fourier = dft_mode3(&x).fro_norm().powi(2) / x.n3() as f64;
        prop_assert!((spatial - fourier).abs() <= 1e-12 * spatial.max(1e-300));
    }
}
