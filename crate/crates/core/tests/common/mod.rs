//! Reference quadratures shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

pub fn sinc_sq(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let s = (PI * x).sin() / (PI * x);
        s * s
    }
}

/// `∫_{|ξ| ≥ L} sinc²(ξ - shift) dξ`.
pub fn sinc_sq_tail(l: f64, shift: f64) -> f64 {
    let inside = simpson(-l, l, 200_000, |x| sinc_sq(x - shift));
    1.0 - inside
}

/// `2∫_R^∞ e^{-2πx²} dx`.
pub fn gaussian_tail(r: f64) -> f64 {
    2.0 * simpson(r, r + 8.0, 200_000, |x| (-2.0 * PI * x * x).exp())
}

/// `Σ_{|k| ≤ terms} e^{-π(x-k)²} e^{2πiky}`.
pub fn theta(x: f64, y: f64, terms: i64) -> Complex64 {
    (-terms..=terms)
        .map(|k| {
            let u = x - k as f64;
            Complex64::from_polar((-PI * u * u).exp(), 2.0 * PI * k as f64 * y)
        })
        .sum()
}

/// `‖ρ'‖₁` in one dimension by direct quadrature of
/// `ρ'(x) = -4π∫₀² ξ ρ̂(ξ) sin(2πxξ) dξ` and a Riemann sum in `x`.
pub fn rho_prime_l1(samples_per_unit: usize, extent: f64) -> f64 {
    let sigma = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let step = |t: f64| sigma(2.0 - t) / (sigma(2.0 - t) + sigma(t - 1.0));
    let nodes = 1024;
    let h = 2.0 / nodes as f64;
    let weights: Vec<(f64, f64)> = (0..=nodes)
        .map(|i| {
            let xi = i as f64 * h;
            let w = if i == 0 || i == nodes {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (xi, w * h / 3.0 * xi * step(xi))
        })
        .collect();
    let dx = 1.0 / samples_per_unit as f64;
    let count = (extent * samples_per_unit as f64) as usize;
    let mut total = 0.0;
    for j in 0..count {
        let x = (j as f64 + 0.5) * dx;
        let v: f64 = weights
            .iter()
            .map(|(xi, w)| w * (2.0 * PI * x * xi).sin())
            .sum();
        total += (4.0 * PI * v).abs();
    }
    2.0 * total * dx
}

/// The closed-complement lattice sum counts the nodes at `±L` with full
/// weight; the trapezoid correction adds the other half.
pub fn lattice_sinc_sq_tail(l: f64, shift: f64, spacing: f64) -> f64 {
    sinc_sq_tail(l, shift) + 0.5 * spacing * (sinc_sq(l - shift) + sinc_sq(-l - shift))
}

/// `2∫_R^∞ e^{-2πx²} dx = erfc(R√(2π))/√2`, via the continued fraction
/// tail for moderate arguments.
pub fn gaussian_tail_closed_form(r: f64) -> f64 {
    let z = r * (2.0 * PI).sqrt();
    let mut cf = 0.0;
    for k in (1..200).rev() {
        cf = (k as f64 / 2.0) / (z + cf);
    }
    let erfc = (-z * z).exp() / PI.sqrt() / (z + cf);
    erfc / 2f64.sqrt()
}
