mod common;

use proptest::prelude::*;
use rmg::denoise::{
    denoise_at_sigma, denoiser_by_name, refine, strength, strength_map, DctDenoiser, Denoiser,
    ModelParams, StrengthMap, DEFAULT_LEVELS, SIGMA2_MAX,
};
use rmg::harness::synthetic_scene;
use rmg::{psnr, Image, MeshSamples, PreparedMesh, ReliabilityMap, Sample};

use common::{rng, unit};

fn gaussian(r: &mut rand_chacha::ChaCha8Rng) -> f64 {
    let (u, v) = (unit(r).max(1e-300), unit(r));
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

#[test]
fn zero_strength_is_identity() {
    let img = synthetic_scene(40, 30, 3);
    assert_eq!(denoise_at_sigma(&img, 0.0).unwrap(), img);
    assert!(denoise_at_sigma(&img, -1.0).is_err());
}

#[test]
fn constants_survive_any_strength() {
    let img = Image::constant(20, 13, 0.42);
    for s2 in [1.0, 10.0, 40.0, 400.0] {
        assert_eq!(denoise_at_sigma(&img, s2).unwrap(), img);
    }
}

#[test]
fn noisy_image_improves() {
    let clean = synthetic_scene(96, 96, 12);
    let mut r = rng(99);
    let noisy = Image::from_fn(96, 96, |x, y| {
        clean.get(x, y) + 5.0 / 255.0 * gaussian(&mut r)
    });
    let before = psnr(&noisy, &clean).unwrap();
    let after = psnr(&denoise_at_sigma(&noisy, 25.0).unwrap(), &clean).unwrap();
    assert!(after > before, "{after} <= {before}");
}

#[test]
fn translation_covariant_away_from_border() {
    let big = synthetic_scene(72, 72, 5);
    let (dx, dy) = (3, 2);
    let a = Image::from_fn(60, 60, |x, y| big.get(x, y));
    let b = Image::from_fn(60, 60, |x, y| big.get(x + dx, y + dy));
    let da = denoise_at_sigma(&a, 30.0).unwrap();
    let db = denoise_at_sigma(&b, 30.0).unwrap();
    for y in 8..(60 - 8 - dy) {
        for x in 8..(60 - 8 - dx) {
            assert!((db.get(x, y) - da.get(x + dx, y + dy)).abs() < 1e-12);
        }
    }
}

#[test]
fn two_region_map() {
    let img = synthetic_scene(32, 16, 7);
    let sigma2 = (0..16 * 32)
        .map(|i| if i % 32 < 16 { 0.0 } else { 40.0 })
        .collect();
    let s = StrengthMap::new(32, 16, SIGMA2_MAX, sigma2).unwrap();
    let out = refine(&img, &s, DEFAULT_LEVELS, &DctDenoiser::default()).unwrap();
    let full = denoise_at_sigma(&img, 40.0).unwrap();
    for y in 0..16 {
        for x in 0..32 {
            let expect = if x < 16 {
                img.get(x, y)
            } else {
                full.get(x, y)
            };
            assert_eq!(out.get(x, y), expect);
        }
    }
}

#[test]
fn refine_validates() {
    let img = synthetic_scene(8, 8, 1);
    let s = StrengthMap::constant(8, 8, SIGMA2_MAX, 10.0).unwrap();
    assert!(refine(&img, &s, 1, &DctDenoiser::default()).is_err());
    let wrong = StrengthMap::constant(8, 9, SIGMA2_MAX, 10.0).unwrap();
    assert!(refine(&img, &wrong, 9, &DctDenoiser::default()).is_err());
    assert!(StrengthMap::constant(8, 8, SIGMA2_MAX, 41.0).is_err());
}

#[test]
fn denoiser_lookup() {
    assert_eq!(denoiser_by_name("dct").unwrap().name(), "dct");
    let err = denoiser_by_name("wiener").err().unwrap().to_string();
    assert!(err.contains("wiener") && err.contains("dct"));
}

#[test]
fn lambda_mismatch_rejected() {
    let (mesh, _) = MeshSamples::new(
        vec![
            Sample::new(0.0, 0.0, 0.1),
            Sample::new(4.0, 0.5, 0.3),
            Sample::new(1.0, 3.5, 0.9),
        ],
        5,
        4,
    )
    .unwrap();
    let map = ReliabilityMap::compute(&PreparedMesh::new(mesh).unwrap(), 0.5).unwrap();
    assert!(strength_map(&map, &ModelParams::new(214.0, -4.3, 0.6).unwrap()).is_err());
    assert!(strength_map(&map, &ModelParams::new(214.0, -4.3, 0.5).unwrap()).is_ok());
}

#[test]
fn parameter_validation() {
    assert!(ModelParams::new(-1.0, -1.0, 0.5).is_err());
    assert!(ModelParams::new(1.0, -1.0, 1.5).is_err());
    assert!(ModelParams::new(0.0, -1.0, 0.5).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strength_is_antitone(alpha in 0.0f64..1000.0, beta in -8.0f64..0.0, r1 in 0.0f64..3.0, dr in 0.0f64..3.0) {
        prop_assert!(strength(alpha, beta, r1, SIGMA2_MAX) >= strength(alpha, beta, r1 + dr, SIGMA2_MAX));
        let s = strength(alpha, beta, r1, SIGMA2_MAX);
        prop_assert!((0.0..=SIGMA2_MAX).contains(&s));
    }

    #[test]
    fn level_zero_pixels_untouched(seed in 0u64..1000) {
        let img = synthetic_scene(24, 20, seed);
        let mut r = rng(seed);
        let sigma2: Vec<f64> = (0..480).map(|_| unit(&mut r) * SIGMA2_MAX).collect();
        let s = StrengthMap::new(24, 20, SIGMA2_MAX, sigma2.clone()).unwrap();
        let out = refine(&img, &s, DEFAULT_LEVELS, &DctDenoiser::default()).unwrap();
        for (i, &v) in sigma2.iter().enumerate() {
            if s.quantize(v, DEFAULT_LEVELS) == 0 {
                prop_assert_eq!(out.data()[i], img.data()[i]);
            }
        }
    }

    #[test]
    fn constant_map_equals_direct_call(seed in 0u64..1000, value in 0.0f64..=40.0, levels in 2usize..12) {
        let img = synthetic_scene(20, 20, seed);
        let s = StrengthMap::constant(20, 20, SIGMA2_MAX, value).unwrap();
        let out = refine(&img, &s, levels, &DctDenoiser::default()).unwrap();
        let level = s.quantize(value, levels);
        let d = DctDenoiser::default();
        let direct = if level == 0 { img.clone() } else { d.denoise(&img, s.level_value(level, levels)).unwrap() };
        prop_assert_eq!(out, direct);
    }
}
