mod common;

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use zaklab_core::sharpness::{axis_tail, companion_scale, tail_cap, tail_model};
use zaklab_core::{
    contradiction_ratio, l2_norm, riesz_bounds, sample_function, sharpness_sweep,
    synthesize_generator, tail_mass, tensor_product, tensor_tail_decomposition, zak_transform,
    Error, Generator, GridSpec, PhaseSpec, Rectangle, SampledFunction,
};

fn unit_generators(q: usize, m: usize) -> Vec<SampledFunction> {
    let grid = GridSpec::new(1, q, m).unwrap();
    vec![
        sample_function(&Generator::indicator(), &grid).unwrap(),
        sample_function(
            &Generator::gaussian().with_amplitude(2f64.powf(0.25)),
            &grid,
        )
        .unwrap(),
        synthesize_generator(&PhaseSpec::random_smooth(q, 2 * m, 3), &grid).unwrap(),
    ]
}

#[test]
fn zak_of_tensor_products_factorizes() {
    for f in unit_generators(32, 4) {
        let zf = zak_transform(&f).unwrap();
        let zg = zak_transform(&tensor_product(&[f.clone(), f]).unwrap()).unwrap();
        let (q, n) = (zf.spatial_resolution(), zf.frequency_resolution());
        let mut worst: f64 = 0.0;
        for a1 in 0..q {
            for a2 in 0..q {
                for b1 in 0..n {
                    for b2 in 0..n {
                        let prod = zf.get(&[a1], &[b1]) * zf.get(&[a2], &[b2]);
                        worst = worst.max((zg.get(&[a1, a2], &[b1, b2]) - prod).norm());
                    }
                }
            }
        }
        assert!(worst <= 1e-9, "{worst}");
    }
}

#[test]
fn axis_tails_reduce_to_the_line() {
    for f in unit_generators(32, 4) {
        assert!((l2_norm(&f) - 1.0).abs() < 1e-6);
        let g = tensor_product(&[f.clone(), f.clone()]).unwrap();
        for r in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            let line = tail_mass(&f, &Rectangle::new(vec![r]).unwrap()).unwrap();
            for axis in 0..2 {
                let v = axis_tail(&g, axis, r).unwrap();
                assert!((v - line).abs() <= 1e-8, "R = {r}: {v} vs {line}");
            }
        }
    }
}

#[test]
fn one_dimensional_decomposition_is_exact() {
    for f in unit_generators(64, 8) {
        let t = tensor_tail_decomposition(
            &f,
            1,
            &Rectangle::cube(1, 0.5).unwrap(),
            &Rectangle::cube(1, 3.0).unwrap(),
        )
        .unwrap();
        assert!((t.lhs - t.rhs).abs() <= 1e-10);
        assert!(t.holds);
    }
}

#[test]
fn indicator_tensor_tails_against_sinc() {
    let grid = GridSpec::new(1, 256, 4).unwrap();
    let f = sample_function(&Generator::indicator(), &grid).unwrap();
    let oracle = common::lattice_sinc_sq_tail(4.0, 0.0, 1.0 / 8.0);
    let t = tensor_tail_decomposition(
        &f,
        2,
        &Rectangle::cube(2, 1.0).unwrap(),
        &Rectangle::cube(2, 4.0).unwrap(),
    )
    .unwrap();
    assert!(t.holds);
    assert_eq!(t.space_terms, vec![0.0, 0.0]);
    assert!(
        (t.rhs - 2.0 * oracle).abs() <= 0.02 * 2.0 * oracle,
        "{} vs {}",
        t.rhs,
        2.0 * oracle
    );
    assert!(t.lhs <= 2.0 * oracle);

    let grid = GridSpec::new(1, 32, 2).unwrap();
    let f = sample_function(&Generator::indicator(), &grid).unwrap();
    for l in [1.0, 2.0, 4.0] {
        let t = tensor_tail_decomposition(
            &f,
            3,
            &Rectangle::cube(3, 1.0).unwrap(),
            &Rectangle::cube(3, l).unwrap(),
        )
        .unwrap();
        assert!(t.holds);
        assert!(t.space_terms.iter().all(|&s| s == 0.0));
        assert!(t.lhs <= 3.0 * common::lattice_sinc_sq_tail(l, 0.0, 0.25));
    }
}

#[test]
fn decomposition_requires_unit_norm() {
    let f = sample_function(&Generator::gaussian(), &GridSpec::new(1, 32, 4).unwrap()).unwrap();
    let r = Rectangle::cube(1, 1.0).unwrap();
    assert!(matches!(
        tensor_tail_decomposition(&f, 1, &r, &r),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn synthesis_inverts_the_zak_transform() {
    let grid = GridSpec::new(1, 64, 8).unwrap();
    let p = PhaseSpec::from_fn(64, 16, |x, y| {
        x + 0.05 * (2.0 * PI * x).sin() * (2.0 * PI * y).cos()
    })
    .unwrap();
    let f = synthesize_generator(&p, &grid).unwrap();
    let z = zak_transform(&f).unwrap();
    for a in 0..64 {
        for b in 0..16 {
            let want = Complex64::from_polar(1.0, 2.0 * PI * p.values()[a * 16 + b]);
            assert!((z.get(&[a], &[b]) - want).norm() < 1e-10);
        }
    }
    let trivial = synthesize_generator(&PhaseSpec::constant(64, 16, 0.0).unwrap(), &grid).unwrap();
    let ind = sample_function(&Generator::indicator(), &grid).unwrap();
    assert!(trivial
        .values()
        .iter()
        .zip(ind.values())
        .all(|(u, v)| (u - v).norm() < 1e-12));
}

#[test]
fn synthesis_rejects_bad_inputs() {
    let mut values = vec![0.0; 16 * 8];
    values[3] = f64::NAN;
    assert!(matches!(
        PhaseSpec::new(16, 8, values),
        Err(Error::SeamInconsistency { .. })
    ));
    let p = PhaseSpec::constant(16, 8, 0.0).unwrap();
    let err = synthesize_generator(&p, &GridSpec::new(1, 16, 8).unwrap()).unwrap_err();
    assert!(matches!(err, Error::ResolutionMismatch(_)));
}

#[test]
fn sweep_model_arithmetic() {
    let direct = |d: f64, r: f64| {
        let l = r * r.ln().sqrt();
        d * (1.0 / (r * r) + l.ln() / (l * l))
    };
    for d in 1..=3usize {
        let rows = sharpness_sweep(None, d, &[3.0, 10.0, 100.0, 1000.0]).unwrap();
        for row in rows {
            assert!((row.l - row.r * row.r.ln().sqrt()).abs() < 1e-12 * row.l);
            assert!((row.model - direct(d as f64, row.r)).abs() < 1e-15);
            assert_eq!(row.cap, 3.0 * d as f64 / (row.r * row.r));
            assert!(row.model_within_cap && row.model <= row.cap);
            assert!(row.measured.is_none());
        }
    }
    assert!((tail_model(1, 10.0) - 0.021811).abs() < 5e-7);
    assert!(tail_model(1, 10.0) <= 0.03);
    assert!(tail_model(3, 100.0) <= 9e-4 && tail_cap(3, 100.0) == 9e-4);
    assert_eq!(companion_scale(E), E);
}

#[test]
fn contradiction_guard() {
    let r9 = 9f64.exp();
    assert!((contradiction_ratio(r9) - 1.0).abs() < 1e-12);
    for r in [r9 * 1.01, 1e4, 1e6, 1e12] {
        let d = 2.0;
        assert!(3.0 * d / (r * r) < d * r.ln().sqrt() / (r * r));
        assert!(contradiction_ratio(r) < 1.0);
    }
    assert!(contradiction_ratio(1e12) < contradiction_ratio(1e6));
}

#[test]
fn measured_indicator_row_is_frequency_only() {
    let grid = GridSpec::new(1, 64, 8).unwrap();
    let f = sample_function(&Generator::indicator(), &grid).unwrap();
    let rows = sharpness_sweep(Some(&f), 1, &[3.0, 10.0]).unwrap();
    let fhat = zaklab_core::fourier_transform(&f).unwrap();
    for row in rows {
        let freq = tail_mass(&fhat, &Rectangle::new(vec![row.l]).unwrap()).unwrap();
        assert_eq!(row.measured, Some(freq));
    }
    assert!(matches!(
        sharpness_sweep(Some(&f), 1, &[2.0]),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        sharpness_sweep(Some(&f), 1, &[1000.0]),
        Err(Error::InsufficientResolution(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesized_generators_are_unimodular(seed in any::<u64>()) {
        let grid = GridSpec::new(1, 32, 8).unwrap();
        let f = synthesize_generator(&PhaseSpec::random_smooth(32, 16, seed), &grid).unwrap();
        let b = riesz_bounds(&zak_transform(&f).unwrap());
        prop_assert!((b.a - 1.0).abs() <= 1e-6 && (b.b - 1.0).abs() <= 1e-6);
        prop_assert!((l2_norm(&f) - 1.0).abs() <= 1e-6);
    }
}
