mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use zaklab_core::{
    build_mollifier, dilate, identity_residuals, inverse_zak, l2_norm, riesz_bounds,
    sample_function, zak_transform, zak_transform_padded, Family, Generator, GridSpec, Rectangle,
    ZakArray,
};

fn line(q: usize, m: usize) -> GridSpec {
    GridSpec::new(1, q, m).unwrap()
}

fn families() -> Vec<(&'static str, Generator, f64)> {
    vec![
        ("indicator", Generator::indicator(), 1e-6),
        (
            "modulated-indicator",
            Generator::indicator().modulated(vec![1.0]),
            1e-6,
        ),
        ("gaussian", Generator::gaussian(), 1e-3),
        (
            "synthetic",
            Generator::new(Family::Synthetic { seed: 3 }),
            1e-6,
        ),
    ]
}

#[test]
fn unitarity_for_registered_families() {
    for n in [16usize, 32] {
        for (name, gen, tol) in families() {
            let f = sample_function(&gen, &line(64, 8)).unwrap();
            let z = zak_transform_padded(&f, n).unwrap();
            let rel = (z.l2_norm() - l2_norm(&f)).abs() / l2_norm(&f);
            assert!(rel <= tol, "{name} at N = {n}: {rel}");
        }
    }
}

#[test]
fn gaussian_matches_theta_series() {
    let f = sample_function(&Generator::gaussian(), &line(64, 8)).unwrap();
    let z = zak_transform(&f).unwrap();
    for a in (0..64).step_by(7) {
        for b in 0..16 {
            let oracle = common::theta(a as f64 / 64.0, b as f64 / 16.0, 16);
            assert!((z.get(&[a], &[b]) - oracle).norm() < 1e-8);
        }
    }
    assert!(common::theta(0.5, 0.5, 16).norm() <= 1e-6);
    assert!(z.get(&[32], &[8]).norm() <= 1e-6);
}

#[test]
fn inverse_round_trip_and_norm() {
    let f = sample_function(&Generator::gaussian(), &line(64, 8)).unwrap();
    let z = zak_transform(&f).unwrap();
    let back = inverse_zak(&z).unwrap();
    let diff = back
        .combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0))
        .unwrap();
    assert!(l2_norm(&diff) <= 1e-8 * l2_norm(&f));
    assert!((l2_norm(&back) - z.l2_norm()).abs() <= 1e-6);
    let again = zak_transform(&back).unwrap();
    for (u, v) in again.values().iter().zip(z.values()) {
        assert!((u - v).norm() < 1e-10);
    }
}

#[test]
fn zak_of_arbitrary_array_round_trips() {
    let values: Vec<Complex64> = (0..64 * 8)
        .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
        .collect();
    let z = ZakArray::new(1, 64, 8, 4, values).unwrap();
    let again = zak_transform(&inverse_zak(&z).unwrap()).unwrap();
    for (u, v) in again.values().iter().zip(z.values()) {
        assert!((u - v).norm() < 1e-10);
    }
}

#[test]
fn near_delta_kernel_leaves_p3_exact() {
    let grid = line(256, 8);
    let m = build_mollifier(&grid).unwrap();
    let pair = dilate(
        &m,
        &Rectangle::new(vec![64.0]).unwrap(),
        &Rectangle::new(vec![1.0]).unwrap(),
    )
    .unwrap();
    let f = sample_function(&Generator::indicator(), &grid).unwrap();
    let r = identity_residuals(&f, Some(&pair.phi)).unwrap();
    assert!(r.p3.unwrap() <= 1e-6);
    assert_eq!(r.qp, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn extension_is_quasiperiodic(x in 0.0f64..3.0, y in -2.0f64..2.0, which in 0usize..3) {
        thread_local! {
            static ZAKS: Vec<ZakArray> = families()
                .into_iter()
                .take(3)
                .map(|(_, g, _)| zak_transform(&sample_function(&g, &GridSpec::new(1, 64, 8).unwrap()).unwrap()).unwrap())
                .collect();
        }
        ZAKS.with(|zaks| {
            let z = &zaks[which];
            let base = z.evaluate_extended(&[x, y]).unwrap();
            prop_assert_eq!(z.evaluate_extended(&[x, y + 1.0]).unwrap(), base);
            let b = (y * 16.0).round() as i64;
            let w = Complex64::from_polar(1.0, 2.0 * PI * b.rem_euclid(16) as f64 / 16.0);
            prop_assert_eq!(z.evaluate_extended(&[x + 1.0, y]).unwrap(), base * w);
            Ok(())
        })?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn riesz_bounds_ignore_integer_modulation_and_translation(
        which in 0usize..4,
        m in -2i32..=2,
        n in -2i32..=2,
    ) {
        let grid = line(32, 8);
        let base = match which {
            0 => Generator::indicator(),
            1 => Generator::gaussian(),
            2 => Generator::new(Family::Gaussian { width: 0.7 }),
            _ => Generator::new(Family::Synthetic { seed: 5 }),
        };
        let moved = base.clone().modulated(vec![m as f64]).translated(vec![n as f64]);
        let r0 = riesz_bounds(&zak_transform(&sample_function(&base, &grid).unwrap()).unwrap());
        let r1 = riesz_bounds(&zak_transform(&sample_function(&moved, &grid).unwrap()).unwrap());
        prop_assert!((r0.a - r1.a).abs() <= 1e-10);
        prop_assert!((r0.b - r1.b).abs() <= 1e-10);
        prop_assert_eq!(r0.is_riesz, r1.is_riesz);
    }
}
