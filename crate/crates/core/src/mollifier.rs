//! The radial bump `ρ` with `ρ̂ = 1` on the unit ball and `ρ̂ = 0` outside
//! radius 2, its anisotropic dilations, and the smoothing-versus-jump
//! machinery built on them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    fourier_transform, inverse_fourier_transform, Domain, GridSpec, Rectangle, SampledFunction,
};
use crate::topology::JumpSet;
use crate::zak::{zak_transform, ZakArray};

fn sigma(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `1` for `t ≤ 1`, `0` for `t ≥ 2`, smooth in between.
pub fn smooth_step(t: f64) -> f64 {
    let a = sigma(2.0 - t);
    let b = sigma(t - 1.0);
    a / (a + b)
}

/// `ρ̂(ξ)` as a function of `|ξ|`.
pub fn rho_hat_radial(r: f64) -> f64 {
    smooth_step(r)
}

/// `Γ(m/2)` for a positive integer `m`.
fn gamma_half(m: usize) -> f64 {
    let mut v = if m.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = 2 - m % 2;
    while k < m {
        v *= k as f64 / 2.0;
        k += 2;
    }
    v
}

/// Volume of the `m`-ball of radius `r`.
fn ball_volume(m: usize, r: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    PI.powf(m as f64 / 2.0) / gamma_half(m + 2) * r.powi(m as i32)
}

/// Surface area of the unit sphere in `ℝ^m`.
fn sphere_area(m: usize) -> f64 {
    2.0 * PI.powf(m as f64 / 2.0) / gamma_half(m)
}

const XI_STEPS: usize = 512;
const SIMPSON_STEPS: usize = 4096;
const R_MAX: f64 = 64.0;

/// `∫_{ℝ^{d-1}} ρ̂(ξ, η) dη`.
fn marginal(d: usize, xi: f64) -> f64 {
    if d == 1 {
        return smooth_step(xi);
    }
    let top = (4.0 - xi * xi).max(0.0).sqrt();
    if top == 0.0 {
        return 0.0;
    }
    let h = top / SIMPSON_STEPS as f64;
    let f = |tau: f64| smooth_step((xi * xi + tau * tau).sqrt()) * tau.powi(d as i32 - 2);
    let mut acc = f(0.0) + f(top);
    for i in 1..SIMPSON_STEPS {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sphere_area(d - 1) * acc * h / 3.0
}

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    GL8.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// `‖∂₁ρ_λ‖₁` for `ρ̂_λ(ξ) = ρ̂(ξ/λ)`, computed from the radial profile
/// `f_λ(r) = ρ_λ(r e₁)` as `2∫₀^∞ |f_λ'(r)| V_{d-1}(r) dr`.
fn radial_derivative_norm(d: usize, resolution: usize, scale: f64) -> f64 {
    let step = 2.0 / XI_STEPS as f64;
    let weights: Vec<(f64, f64)> = (1..XI_STEPS)
        .map(|l| {
            let xi = l as f64 * step;
            let w = -4.0
                * PI
                * (scale * step)
                * (scale * xi)
                * scale.powi(d as i32 - 1)
                * marginal(d, xi);
            (2.0 * PI * scale * xi, w)
        })
        .collect();
    let fprime = |r: f64| weights.iter().map(|(k, w)| w * (k * r).sin()).sum::<f64>();
    let integrand = |r: f64| fprime(r).abs() * ball_volume(d - 1, r);

    let h = 1.0 / (resolution as f64 * scale);
    let cells = (R_MAX * resolution as f64).round() as usize;
    let mut total = 0.0;
    let mut left = fprime(0.0);
    for c in 0..cells {
        let (a, b) = (c as f64 * h, (c + 1) as f64 * h);
        let right = fprime(b);
        if left * right < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if fprime(mid) * left < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            total += gauss_legendre(a, root, integrand) + gauss_legendre(root, b, integrand);
        } else {
            total += gauss_legendre(a, b, integrand);
        }
        left = right;
    }
    2.0 * total
}

/// r-lattice density used for the radial quadrature at `samples_per_unit`.
pub fn gamma_resolution(samples_per_unit: usize) -> usize {
    samples_per_unit.clamp(32, 128)
}

type NormCache = Mutex<HashMap<(usize, usize, u64), f64>>;

/// `‖∂₁ρ_λ‖₁`, memoized.
pub fn derivative_norm(d: usize, samples_per_unit: usize, scale: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "scale must be positive, got {scale}"
        )));
    }
    static CACHE: OnceLock<NormCache> = OnceLock::new();
    let res = gamma_resolution(samples_per_unit);
    let key = (d, res, scale.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let v = radial_derivative_norm(d, res, scale);
    cache.lock().unwrap().insert(key, v);
    Ok(v)
}

/// `Γ = ‖∂₁ρ‖₁` in dimension `d`.
pub fn gamma_constant(d: usize, samples_per_unit: usize) -> Result<f64> {
    derivative_norm(d, samples_per_unit, 1.0)
}

#[derive(Clone, Debug)]
pub struct MollifierSpec {
    pub rho: SampledFunction,
    pub rho_hat: SampledFunction,
    pub gamma: f64,
}

/// Samples `ρ̂` on the frequency lattice of `grid` and transforms back.
pub fn build_mollifier(grid: &GridSpec) -> Result<MollifierSpec> {
    if grid.frequency_extent() < 4.0 {
        return Err(Error::InsufficientResolution(format!(
            "frequency extent {} does not reach 4",
            grid.frequency_extent()
        )));
    }
    if grid.support_cells() < 4 {
        return Err(Error::InsufficientResolution(format!(
            "frequency spacing 1/{} cannot resolve the transition band [1,2]",
            2 * grid.support_cells()
        )));
    }
    let rho_hat = frequency_window(grid, &vec![1.0; grid.dim()]);
    let rho = inverse_fourier_transform(&rho_hat)?;
    let gamma = gamma_constant(grid.dim(), grid.samples_per_unit())?;
    Ok(MollifierSpec {
        rho,
        rho_hat,
        gamma,
    })
}

fn window(grid: &GridSpec, domain: Domain, scales: &[f64]) -> SampledFunction {
    SampledFunction::from_fn(*grid, domain, |x| {
        let r2: f64 = x.iter().zip(scales).map(|(v, s)| (v / s) * (v / s)).sum();
        Complex64::new(smooth_step(r2.sqrt()), 0.0)
    })
    .expect("window values are finite")
}

/// `ρ̂(ξ⊘R)` on the frequency lattice.
pub fn frequency_window(grid: &GridSpec, scales: &[f64]) -> SampledFunction {
    window(grid, Domain::Frequency, scales)
}

/// `ρ̂(x⊘L)` on the space lattice.
pub fn space_window(grid: &GridSpec, scales: &[f64]) -> SampledFunction {
    window(grid, Domain::Space, scales)
}

/// `φ = ∏R_i·ρ(R∘x)` in space and `ψ = ∏L_i·ρ(L∘ξ)` in frequency.
#[derive(Clone, Debug)]
pub struct DilatedPair {
    pub phi: SampledFunction,
    pub psi: SampledFunction,
    pub scales_r: Vec<f64>,
    pub scales_l: Vec<f64>,
    /// `‖∂_iφ‖₁` per axis.
    pub phi_derivative_norms: Vec<f64>,
    /// `‖∂_iψ‖₁` per axis.
    pub psi_derivative_norms: Vec<f64>,
    pub gamma: f64,
}

pub fn dilate(m: &MollifierSpec, r: &Rectangle, l: &Rectangle) -> Result<DilatedPair> {
    let grid = *m.rho.grid();
    let d = grid.dim();
    if r.dim() != d || l.dim() != d {
        return Err(Error::InvalidParameter(format!(
            "scales must have {d} entries"
        )));
    }
    r.require_at_least_one()?;
    l.require_at_least_one()?;
    let max_r = r.half_widths().iter().cloned().fold(0.0, f64::max);
    let max_l = l.half_widths().iter().cloned().fold(0.0, f64::max);
    if grid.frequency_extent() < 2.0 * max_r {
        return Err(Error::InsufficientResolution(format!(
            "frequency extent {} cannot hold the support of φ̂ at scale {max_r}",
            grid.frequency_extent()
        )));
    }
    if (grid.support_cells() as f64) < 2.0 * max_l {
        return Err(Error::InsufficientResolution(format!(
            "space extent {} cannot hold the window of ψ at scale {max_l}",
            grid.support_cells()
        )));
    }
    let phi = inverse_fourier_transform(&frequency_window(&grid, r.half_widths()))?;
    let psi = fourier_transform(&space_window(&grid, l.half_widths()))?;

    let norms = |scales: &[f64]| -> Result<Vec<f64>> {
        scales
            .iter()
            .map(|&s| {
                let v = derivative_norm(d, grid.samples_per_unit(), s)?;
                if ((v - s * m.gamma) / (s * m.gamma)).abs() > 1e-6 {
                    return Err(Error::InsufficientResolution(format!(
                        "derivative norm {v} at scale {s} departs from {}",
                        s * m.gamma
                    )));
                }
                Ok(v)
            })
            .collect()
    };
    Ok(DilatedPair {
        phi,
        psi,
        scales_r: r.half_widths().to_vec(),
        scales_l: l.half_widths().to_vec(),
        phi_derivative_norms: norms(r.half_widths())?,
        psi_derivative_norms: norms(l.half_widths())?,
        gamma: m.gamma,
    })
}

/// `g ∗ φ`, computed as `F⁻¹(ĝ·φ̂)`.
pub fn smooth_space(g: &SampledFunction, pair: &DilatedPair) -> Result<SampledFunction> {
    check_pair_grid(g, pair)?;
    let gh = fourier_transform(g)?;
    let w = frequency_window(g.grid(), &pair.scales_r);
    let values = gh
        .values()
        .iter()
        .zip(w.values())
        .map(|(a, b)| a * b)
        .collect();
    inverse_fourier_transform(&SampledFunction::new(*g.grid(), values, Domain::Frequency)?)
}

/// `ĝ ∗ ψ`, computed as `F(g·ψ̌)`.
pub fn smooth_frequency(g: &SampledFunction, pair: &DilatedPair) -> Result<SampledFunction> {
    check_pair_grid(g, pair)?;
    let w = space_window(g.grid(), &pair.scales_l);
    let values = g
        .values()
        .iter()
        .zip(w.values())
        .map(|(a, b)| a * b)
        .collect();
    fourier_transform(&SampledFunction::new(*g.grid(), values, Domain::Space)?)
}

fn check_pair_grid(g: &SampledFunction, pair: &DilatedPair) -> Result<()> {
    if g.domain() != Domain::Space {
        return Err(Error::DomainMismatch {
            expected: Domain::Space,
        });
    }
    if g.grid() != pair.phi.grid() {
        return Err(Error::ResolutionMismatch(
            "generator and mollifier lattices differ".into(),
        ));
    }
    Ok(())
}

/// Smallest `k, n ≥ 8` with `k ≥ (8B/A)(1+‖φ_i‖₁)` and `n ≥ (24πB/A)(1+‖ψ_i‖₁)`.
pub fn lemma3_constants_from_norms(
    a: f64,
    b: f64,
    phi_norm: f64,
    psi_norm: f64,
) -> Result<(usize, usize)> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "A must be positive, got {a}"
        )));
    }
    if b < a || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "B = {b} must be finite and at least A = {a}"
        )));
    }
    let k = (8.0 * b / a * (1.0 + phi_norm)).ceil().max(8.0);
    let n = (24.0 * PI * b / a * (1.0 + psi_norm)).ceil().max(8.0);
    Ok((k as usize, n as usize))
}

pub fn lemma3_constants(a: f64, b: f64, pair: &DilatedPair, axis: usize) -> Result<(usize, usize)> {
    if axis >= pair.phi_derivative_norms.len() {
        return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
    }
    lemma3_constants_from_norms(
        a,
        b,
        pair.phi_derivative_norms[axis],
        pair.psi_derivative_norms[axis],
    )
}

/// Whether supplied bounds constrain `|Zg|²` (as returned by the Riesz
/// check) or `|Zg|` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundConvention {
    Squared,
    Modulus,
}

impl BoundConvention {
    /// Bounds on `|Zg|` under this convention.
    pub fn modulus_bounds(self, a: f64, b: f64) -> (f64, f64) {
        match self {
            BoundConvention::Squared => (a.sqrt(), b.sqrt()),
            BoundConvention::Modulus => (a, b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lemma3Report {
    /// Nodes of `[0,1)^{2d}` flattened as `(x-block, y-block)`.
    pub set: JumpSet,
    pub phi_measure: f64,
    pub psi_measure: f64,
    pub k: usize,
    pub n: usize,
    pub a_modulus: f64,
    pub b_modulus: f64,
    /// `A²/(4000B²(1+‖φ_i‖₁)(1+‖ψ_i‖₁))`.
    pub bound_squared: f64,
    /// `A/(4000B(1+‖φ_i‖₁)(1+‖ψ_i‖₁))`.
    pub bound_linear: f64,
    /// `0.9·min(bound_squared, bound_linear)`.
    pub asserted_bound: f64,
    pub holds: bool,
    pub convention: BoundConvention,
}

/// Grid slack on the measure bound.
pub const LEMMA3_SLACK: f64 = 0.1;

fn checked_bounds(
    zg: &ZakArray,
    a: f64,
    b: f64,
    convention: BoundConvention,
) -> Result<(f64, f64)> {
    let (am, bm) = convention.modulus_bounds(a, b);
    let (lo, hi) = zg
        .values()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v.norm()), hi.max(v.norm()))
        });
    if lo < am * (1.0 - 1e-9) || hi > bm * (1.0 + 1e-9) {
        return Err(Error::Precondition(format!(
            "|Zg| ranges over [{lo:.6e}, {hi:.6e}], outside the supplied [{am:.6e}, {bm:.6e}]"
        )));
    }
    Ok((am, bm))
}

/// Nodes of `[0,1)^{2d}` where `|Zg - Z(g∗φ)|` or `|Zĝ - Z(ĝ∗ψ)|` reaches
/// `threshold`. `Zĝ` is read at the nearest node of its own lattice.
#[derive(Clone, Debug)]
pub struct Alternatives {
    pub mask: Vec<bool>,
    pub phi_measure: f64,
    pub psi_measure: f64,
    pub measure: f64,
}

pub fn lemma3_alternatives(
    g: &SampledFunction,
    pair: &DilatedPair,
    threshold: f64,
) -> Result<Alternatives> {
    check_pair_grid(g, pair)?;
    let d = g.grid().dim();
    let q = g.grid().samples_per_unit();
    let zg = zak_transform(g)?;
    let zs = zak_transform(&smooth_space(g, pair)?)?;
    let zgh = zak_transform(&fourier_transform(g)?.as_space_on_dual()?)?;
    let zgs = zak_transform(&smooth_frequency(g, pair)?.as_space_on_dual()?)?;

    let (qh, nh) = (zgh.spatial_resolution(), zgh.frequency_resolution());
    let ny = zg.frequency_resolution();
    let mut x = vec![0usize; d];
    let mut y = vec![0usize; d];
    let mut xh = vec![0i64; d];
    let mut yh = vec![0i64; d];
    let (mut phi_hits, mut psi_hits, mut hits) = (0usize, 0usize, 0usize);
    let mut mask = Vec::with_capacity(zg.len());
    for flat in 0..zg.len() {
        zg.node_of(flat, &mut x, &mut y);
        let phi_hit = (zg.values()[flat] - zs.values()[flat]).norm() >= threshold;
        for t in 0..d {
            xh[t] = ((2 * x[t] * qh + q) / (2 * q)) as i64;
            yh[t] = ((2 * y[t] * nh + ny) / (2 * ny)) as i64;
        }
        let psi_hit = (zgh.at_node(&xh, &yh) - zgs.at_node(&xh, &yh)).norm() >= threshold;
        phi_hits += phi_hit as usize;
        psi_hits += psi_hit as usize;
        hits += (phi_hit || psi_hit) as usize;
        mask.push(phi_hit || psi_hit);
    }
    let total = zg.len() as f64;
    Ok(Alternatives {
        mask,
        phi_measure: phi_hits as f64 / total,
        psi_measure: psi_hits as f64 / total,
        measure: hits as f64 / total,
    })
}

pub fn lemma3_set(
    g: &SampledFunction,
    pair: &DilatedPair,
    a: f64,
    b: f64,
    axis: usize,
    convention: BoundConvention,
) -> Result<Lemma3Report> {
    check_pair_grid(g, pair)?;
    let grid = *g.grid();
    let d = grid.dim();
    if axis >= d {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {d}"
        )));
    }
    lemma3_constants_from_norms(a, b, 0.0, 0.0)?;
    let zg = zak_transform(g)?;
    let (am, bm) = checked_bounds(&zg, a, b, convention)?;
    let (k, n) = lemma3_constants(am, bm, pair, axis)?;
    let q = grid.samples_per_unit();
    if q < 8 * k {
        return Err(Error::InsufficientResolution(format!(
            "{q} samples per unit give fewer than 8 nodes per step 1/{k}"
        )));
    }

    let alt = lemma3_alternatives(g, pair, am / 12.0)?;
    let factor = (1.0 + pair.phi_derivative_norms[axis]) * (1.0 + pair.psi_derivative_norms[axis]);
    let bound_squared = am * am / (4000.0 * bm * bm * factor);
    let bound_linear = am / (4000.0 * bm * factor);
    let lower = bound_squared.min(bound_linear);
    let set = JumpSet::from_mask(
        q.pow(d as u32),
        zg.frequency_resolution().pow(d as u32),
        alt.mask,
        am / 12.0,
        lower,
        LEMMA3_SLACK,
    );
    let holds = set.bound_holds;
    Ok(Lemma3Report {
        set,
        phi_measure: alt.phi_measure,
        psi_measure: alt.psi_measure,
        k,
        n,
        a_modulus: am,
        b_modulus: bm,
        bound_squared,
        bound_linear,
        asserted_bound: (1.0 - LEMMA3_SLACK) * lower,
        holds,
        convention,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothingReport {
    pub k: usize,
    /// Nodes per step; the tested shift is `step_nodes/Q ≤ 1/k`.
    pub step_nodes: usize,
    pub max_difference: f64,
    /// `A/8 + 10⁻³·B`.
    pub bound: f64,
    pub holds: bool,
}

/// Largest change of `Z(g∗φ)` under a shift of `1/k_i` along axis `i`.
pub fn smoothing_difference(
    g: &SampledFunction,
    pair: &DilatedPair,
    a: f64,
    b: f64,
    axis: usize,
    convention: BoundConvention,
) -> Result<SmoothingReport> {
    check_pair_grid(g, pair)?;
    let d = g.grid().dim();
    if axis >= d {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {d}"
        )));
    }
    lemma3_constants_from_norms(a, b, 0.0, 0.0)?;
    let zg = zak_transform(g)?;
    let (am, bm) = checked_bounds(&zg, a, b, convention)?;
    let (k, _) = lemma3_constants(am, bm, pair, axis)?;
    let q = g.grid().samples_per_unit();
    let step = q / k;
    if step < 8 {
        return Err(Error::InsufficientResolution(format!(
            "{q} samples per unit give {step} nodes per step 1/{k}"
        )));
    }
    let zs = zak_transform(&smooth_space(g, pair)?)?;
    let mut x = vec![0usize; d];
    let mut y = vec![0usize; d];
    let mut xs = vec![0i64; d];
    let mut ys = vec![0i64; d];
    let mut worst: f64 = 0.0;
    for flat in 0..zs.len() {
        zs.node_of(flat, &mut x, &mut y);
        for t in 0..d {
            xs[t] = x[t] as i64;
            ys[t] = y[t] as i64;
        }
        xs[axis] += step as i64;
        worst = worst.max((zs.at_node(&xs, &ys) - zs.values()[flat]).norm());
    }
    let bound = am / 8.0 + 1e-3 * bm;
    Ok(SmoothingReport {
        k,
        step_nodes: step,
        max_difference: worst,
        bound,
        holds: worst <= bound,
    })
}
