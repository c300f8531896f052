use proptest::prelude::*;
use tkrylov::io::{decode_tensor, encode_tensor, load_image, read_tensor, save_image, write_tensor};
use tkrylov::{Error, Tensor3};

#[test]
fn png_round_trip_is_exact_for_integer_pixels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ramp.png");
    let x = Tensor3::from_fn(5, 7, 3, |i, j, k| ((i * 31 + j * 17 + k * 60) % 256) as f64);
    save_image(&x, &path).unwrap();
    assert_eq!(load_image(&path).unwrap(), x);
}

#[test]
fn saving_clamps_and_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clamp.ppm");
    let x = Tensor3::from_fn(2, 2, 3, |i, j, _| [-20.0, 300.0, 12.4, 12.6][2 * i + j]);
    save_image(&x, &path).unwrap();
    let y = load_image(&path).unwrap();
    assert_eq!(y.slice_data(0), &[0.0, 255.0, 12.0, 13.0]);
}

#[test]
fn grayscale_is_promoted_to_three_channels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gray.png");
    image::GrayImage::from_fn(4, 3, |x, y| image::Luma([(10 * x + y) as u8])).save(&path).unwrap();
    let t = load_image(&path).unwrap();
    assert_eq!(t.shape(), (3, 4, 3));
    assert_eq!(t[(2, 3, 0)], 32.0);
    assert_eq!(t[(2, 3, 2)], 32.0);
}

#[test]
fn unreadable_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.png");
    assert!(load_image(&missing).is_err());
    let bogus = dir.path().join("bogus.png");
    std::fs::write(&bogus, b"not an image").unwrap();
    assert!(matches!(load_image(&bogus), Err(Error::Image(_))));
    assert!(matches!(read_tensor(&missing), Err(Error::Io(_))));
    assert!(matches!(save_image(&Tensor3::zeros(2, 2, 2), dir.path().join("x.png")), Err(Error::Dimension(_))));
}

#[test]
fn tensor_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.t3f");
    let x = Tensor3::from_fn(3, 4, 5, |i, j, k| (i as f64).sin() + j as f64 * 1e-7 - (k as f64).exp());
    write_tensor(&x, &path).unwrap();
    assert_eq!(read_tensor(&path).unwrap(), x);
}

proptest! {
    #[test]
    fn encoding_is_lossless(n1 in 1usize..5, n2 in 1usize..5, n3 in 1usize..5, seed in any::<u64>()) {
        let x = tkrylov::gaussian_tensor(n1, n2, n3, seed).scale(1e3);
        prop_assert_eq!(decode_tensor(&encode_tensor(&x)).unwrap(), x);
    }

    #[test]
    fn garbage_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..80)) {
        let _ = decode_tensor(&bytes);
    }
}
