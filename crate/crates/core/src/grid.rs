//! Sampling lattices, analytic generator families, and the Riemann-sum
//! Fourier transform with kernel `e^{-2πi x·ξ}`.
//!
//! A [`GridSpec`] with `Q` samples per unit and `M` support cells samples
//! `[-M, M)^d` at `x_j = -M + j/Q`. Its dual frequency lattice covers
//! `[-Q/2, Q/2)^d` at `ξ_l = -Q/2 + l/(2M)`; both have `P = 2MQ` points per
//! axis, so the transform is an exact length-`P` DFT pair and Plancherel holds
//! to rounding.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::fft::{transform_axes, unravel};
use crate::sharpness::{synthesize_generator, PhaseSpec};

/// Upper bound on `(2MQ)^d` samples held by a single function.
pub const DEFAULT_SAMPLE_BUDGET: usize = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Space,
    Frequency,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Space => f.write_str("space"),
            Domain::Frequency => f.write_str("frequency"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    d: usize,
    q: usize,
    m: usize,
}

impl GridSpec {
    pub fn new(d: usize, q: usize, m: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if q < 2 || !q.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "samples per unit must be even and at least 2, got {q}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidGrid("support cells must be positive".into()));
        }
        let side = 2 * m * q;
        let total = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(side));
        match total {
            Some(n) if n <= DEFAULT_SAMPLE_BUDGET => Ok(GridSpec { d, q, m }),
            _ => Err(Error::TooLarge(format!(
                "(2·{m}·{q})^{d} samples exceed the budget of {DEFAULT_SAMPLE_BUDGET}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn samples_per_unit(&self) -> usize {
        self.q
    }

    pub fn support_cells(&self) -> usize {
        self.m
    }

    /// Points per axis, `2MQ`.
    pub fn side(&self) -> usize {
        2 * self.m * self.q
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, domain: Domain) -> f64 {
        match domain {
            Domain::Space => 1.0 / self.q as f64,
            Domain::Frequency => 1.0 / (2 * self.m) as f64,
        }
    }

    pub fn coordinate(&self, domain: Domain, index: usize) -> f64 {
        match domain {
            Domain::Space => -(self.m as f64) + index as f64 / self.q as f64,
            Domain::Frequency => -(self.q as f64) / 2.0 + index as f64 / (2 * self.m) as f64,
        }
    }

    /// Half-width of the frequency lattice, `Q/2`.
    pub fn frequency_extent(&self) -> f64 {
        self.q as f64 / 2.0
    }

    /// The lattice on which a frequency-domain function over `self` reads as a
    /// space-domain function: `Q' = 2M` samples per unit over `M' = Q/2` cells.
    pub fn dual(&self) -> Result<GridSpec> {
        GridSpec::new(self.d, 2 * self.m, self.q / 2)
    }

    pub fn with_dim(&self, d: usize) -> Result<GridSpec> {
        GridSpec::new(d, self.q, self.m)
    }
}

#[derive(Clone, Debug)]
pub struct SampledFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
    domain: Domain,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ResolutionMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(SampledFunction {
            grid,
            values,
            domain,
        })
    }

    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        SampledFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            domain,
        }
    }

    pub fn from_fn(
        grid: GridSpec,
        domain: Domain,
        f: impl Fn(&[f64]) -> Complex64,
    ) -> Result<Self> {
        let side = grid.side();
        let mut idx = vec![0usize; grid.d];
        let mut x = vec![0.0; grid.d];
        let values = (0..grid.len())
            .map(|flat| {
                unravel(flat, side, &mut idx);
                for (xi, &i) in x.iter_mut().zip(&idx) {
                    *xi = grid.coordinate(domain, i);
                }
                f(&x)
            })
            .collect();
        SampledFunction::new(grid, values, domain)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing(self.domain)
    }

    /// Quadrature weight of one node, `spacing^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.grid.d as i32)
    }

    /// Coordinates of the node at `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.grid.d];
        unravel(flat, self.grid.side(), &mut idx);
        idx.iter()
            .map(|&i| self.grid.coordinate(self.domain, i))
            .collect()
    }

    /// Value at a node given by per-axis indices.
    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.values[crate::fft::flat_index(idx, self.grid.side())]
    }

    pub fn scaled(&self, c: Complex64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            domain: self.domain,
        }
    }

    /// `a·self + b·other`.
    pub fn combine(
        &self,
        a: Complex64,
        other: &SampledFunction,
        b: Complex64,
    ) -> Result<SampledFunction> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::ResolutionMismatch(
                "operands live on different lattices".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(SampledFunction {
            grid: self.grid,
            values,
            domain: self.domain,
        })
    }

    /// Pointwise product with a function of the node coordinates.
    pub fn multiplied_by(&self, f: impl Fn(&[f64]) -> Complex64) -> SampledFunction {
        let values = (0..self.values.len())
            .map(|i| self.values[i] * f(&self.point(i)))
            .collect();
        SampledFunction {
            grid: self.grid,
            values,
            domain: self.domain,
        }
    }

    /// Reads a frequency-domain function as a space-domain function on the
    /// dual lattice (used to take the Zak transform of `ĝ`).
    pub fn as_space_on_dual(&self) -> Result<SampledFunction> {
        if self.domain != Domain::Frequency {
            return Err(Error::DomainMismatch {
                expected: Domain::Frequency,
            });
        }
        Ok(SampledFunction {
            grid: self.grid.dual()?,
            values: self.values.clone(),
            domain: Domain::Space,
        })
    }
}

/// Axis-aligned box `∏(-R_i, R_i)` given by its half-widths.
#[derive(Clone, Debug, PartialEq)]
pub struct Rectangle {
    half_widths: Vec<f64>,
}

impl Rectangle {
    pub fn new(half_widths: Vec<f64>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::InvalidParameter(
                "rectangle needs at least one half-width".into(),
            ));
        }
        if let Some(w) = half_widths.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "half-widths must be positive, got {w}"
            )));
        }
        Ok(Rectangle { half_widths })
    }

    pub fn cube(d: usize, half_width: f64) -> Result<Self> {
        Rectangle::new(vec![half_width; d])
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn dim(&self) -> usize {
        self.half_widths.len()
    }

    /// Rejects half-widths below 1.
    pub fn require_at_least_one(&self) -> Result<()> {
        match self.half_widths.iter().find(|&&w| w < 1.0) {
            Some(w) => Err(Error::InvalidParameter(format!("scale {w} is below 1"))),
            None => Ok(()),
        }
    }
}

/// Base shapes that [`sample_function`] knows how to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Indicator of `[0,1)^d`.
    Indicator,
    /// `exp(-π|x|²/width²)`.
    Gaussian {
        width: f64,
    },
    Zero,
    /// Inverse-Zak synthetic with a seeded smooth random phase.
    Synthetic {
        seed: u64,
    },
    /// Inverse-Zak synthetic from an explicit phase grid.
    Phase(PhaseSpec),
}

/// A family together with amplitude, modulation `e^{2πi m·x}` and
/// translation `g(x - t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub family: Family,
    pub amplitude: f64,
    pub modulation: Vec<f64>,
    pub translation: Vec<f64>,
}

impl Generator {
    pub fn new(family: Family) -> Self {
        Generator {
            family,
            amplitude: 1.0,
            modulation: Vec::new(),
            translation: Vec::new(),
        }
    }

    pub fn indicator() -> Self {
        Generator::new(Family::Indicator)
    }

    pub fn gaussian() -> Self {
        Generator::new(Family::Gaussian { width: 1.0 })
    }

    /// Parses a registered family name: `indicator`, `modulated-indicator`,
    /// `gaussian`, `synthetic` or `zero`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "indicator" => Ok(Generator::indicator()),
            "modulated-indicator" => Ok(Generator::indicator().modulated(vec![1.0])),
            "gaussian" => Ok(Generator::gaussian()),
            "synthetic" => Ok(Generator::new(Family::Synthetic { seed: 0 })),
            "zero" => Ok(Generator::new(Family::Zero)),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn modulated(mut self, frequency: Vec<f64>) -> Self {
        self.modulation = frequency;
        self
    }

    pub fn translated(mut self, shift: Vec<f64>) -> Self {
        self.translation = shift;
        self
    }

    /// Broadcasts a one-entry modulation/translation to `d` axes.
    fn axis_vector(v: &[f64], d: usize, what: &str) -> Result<Vec<f64>> {
        match v.len() {
            0 => Ok(vec![0.0; d]),
            n if n == d => Ok(v.to_vec()),
            1 => {
                let mut out = vec![0.0; d];
                out[0] = v[0];
                Ok(out)
            }
            n => Err(Error::InvalidParameter(format!(
                "{what} has {n} entries for dimension {d}"
            ))),
        }
    }

    fn base_value(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::Indicator => {
                if x.iter().all(|&t| (0.0..1.0).contains(&t)) {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Gaussian { width } => {
                let r2: f64 = x.iter().map(|t| t * t).sum();
                (-PI * r2 / (width * width)).exp()
            }
            Family::Zero => 0.0,
            Family::Synthetic { .. } | Family::Phase(_) => {
                unreachable!("synthetics are not analytic")
            }
        }
    }
}

/// Samples a registered generator on `grid` (space domain).
pub fn sample_function(generator: &Generator, grid: &GridSpec) -> Result<SampledFunction> {
    let d = grid.dim();
    if !generator.amplitude.is_finite() {
        return Err(Error::InvalidParameter("amplitude must be finite".into()));
    }
    let modulation = Generator::axis_vector(&generator.modulation, d, "modulation")?;
    let translation = Generator::axis_vector(&generator.translation, d, "translation")?;
    if modulation
        .iter()
        .chain(&translation)
        .any(|v| !v.is_finite())
    {
        return Err(Error::InvalidParameter(
            "modulation and translation must be finite".into(),
        ));
    }
    let modulate = |x: &[f64]| {
        let phase: f64 = x.iter().zip(&modulation).map(|(a, b)| a * b).sum();
        Complex64::from_polar(generator.amplitude, 2.0 * PI * phase)
    };

    match &generator.family {
        Family::Gaussian { width } if !(*width > 0.0 && width.is_finite()) => Err(
            Error::InvalidParameter(format!("gaussian width must be positive, got {width}")),
        ),
        Family::Synthetic { .. } | Family::Phase(_) => {
            let phase = match &generator.family {
                Family::Synthetic { seed } => PhaseSpec::random_smooth(
                    grid.samples_per_unit(),
                    2 * grid.support_cells(),
                    *seed,
                ),
                Family::Phase(p) => p.clone(),
                _ => unreachable!(),
            };
            let line_grid = grid.with_dim(1)?;
            let line = synthesize_generator(&phase, &line_grid)?;
            let base = if d == 1 {
                line
            } else {
                crate::grid::tensor_product(&vec![line; d])?
            };
            let shifted = shift_by_nodes(&base, &translation)?;
            Ok(shifted.multiplied_by(|x| modulate(x)))
        }
        _ => SampledFunction::from_fn(*grid, Domain::Space, |x| {
            let shifted: Vec<f64> = x.iter().zip(&translation).map(|(a, t)| a - t).collect();
            modulate(x) * generator.base_value(&shifted)
        }),
    }
}

/// Translates samples by `shift`, which must be a whole number of nodes per
/// axis; samples leaving the grid are dropped.
fn shift_by_nodes(f: &SampledFunction, shift: &[f64]) -> Result<SampledFunction> {
    if shift.iter().all(|&s| s == 0.0) {
        return Ok(f.clone());
    }
    let q = f.grid().samples_per_unit() as f64;
    let mut steps = Vec::with_capacity(shift.len());
    for &s in shift {
        let n = (s * q).round();
        if ((s * q) - n).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "synthetic generators only translate by multiples of 1/{q}, got {s}"
            )));
        }
        steps.push(n as i64);
    }
    let side = f.grid().side();
    let d = f.grid().dim();
    let mut out = vec![Complex64::new(0.0, 0.0); f.values().len()];
    let mut idx = vec![0usize; d];
    'nodes: for (flat, slot) in out.iter_mut().enumerate() {
        unravel(flat, side, &mut idx);
        let mut src = 0usize;
        for (i, &step) in idx.iter().zip(&steps) {
            let j = *i as i64 - step;
            if j < 0 || j >= side as i64 {
                continue 'nodes;
            }
            src = src * side + j as usize;
        }
        *slot = f.values()[src];
    }
    SampledFunction::new(*f.grid(), out, Domain::Space)
}

/// Per-axis sign pattern `(-1)^{Σ idx}` used to move the lattice origin.
fn alternating_sign(flat: usize, side: usize, d: usize) -> f64 {
    let mut f = flat;
    let mut parity = 0;
    for _ in 0..d {
        parity += f % side;
        f /= side;
    }
    if parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn transform(f: &SampledFunction, direction: FftDirection) -> SampledFunction {
    let grid = *f.grid();
    let d = grid.dim();
    let side = grid.side();
    // x_j ξ_l = MQ/2 - j/2 - l/2 + jl/P, so both index signs and a global
    // (-1)^{MQ} per axis appear around the plain DFT.
    let global_sign = if (grid.m * grid.q * d).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let weight = match direction {
        FftDirection::Forward => grid.spacing(Domain::Space),
        FftDirection::Inverse => grid.spacing(Domain::Frequency),
    }
    .powi(d as i32);
    let mut values: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * alternating_sign(i, side, d))
        .collect();
    let shape = vec![side; d];
    let axes: Vec<usize> = (0..d).collect();
    transform_axes(&mut values, &shape, &axes, direction);
    for (i, v) in values.iter_mut().enumerate() {
        *v *= alternating_sign(i, side, d) * global_sign * weight;
    }
    let domain = match direction {
        FftDirection::Forward => Domain::Frequency,
        FftDirection::Inverse => Domain::Space,
    };
    SampledFunction {
        grid,
        values,
        domain,
    }
}

/// Riemann-sum approximation of `ĝ(ξ) = ∫ g(x) e^{-2πi x·ξ} dx` on the dual lattice.
pub fn fourier_transform(f: &SampledFunction) -> Result<SampledFunction> {
    if f.domain() != Domain::Space {
        return Err(Error::DomainMismatch {
            expected: Domain::Space,
        });
    }
    Ok(transform(f, FftDirection::Forward))
}

/// Exact inverse of [`fourier_transform`].
pub fn inverse_fourier_transform(f: &SampledFunction) -> Result<SampledFunction> {
    if f.domain() != Domain::Frequency {
        return Err(Error::DomainMismatch {
            expected: Domain::Frequency,
        });
    }
    Ok(transform(f, FftDirection::Inverse))
}

pub fn l2_norm(f: &SampledFunction) -> f64 {
    let sum: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
    (sum * f.cell_volume()).sqrt()
}

/// `∫|f|` by the same Riemann sum as [`l2_norm`].
pub fn l1_norm(f: &SampledFunction) -> f64 {
    f.values().iter().map(|v| v.norm()).sum::<f64>() * f.cell_volume()
}

/// Circular Riemann-sum convolution `h^d Σ_s f(s) k(x - s)` of two
/// space-domain functions on the same lattice.
pub fn convolve(f: &SampledFunction, kernel: &SampledFunction) -> Result<SampledFunction> {
    if f.grid() != kernel.grid() {
        return Err(Error::ResolutionMismatch(
            "convolution operands differ in lattice".into(),
        ));
    }
    let fh = fourier_transform(f)?;
    let kh = fourier_transform(kernel)?;
    let product: Vec<Complex64> = fh
        .values()
        .iter()
        .zip(kh.values())
        .map(|(a, b)| a * b)
        .collect();
    inverse_fourier_transform(&SampledFunction::new(
        *f.grid(),
        product,
        Domain::Frequency,
    )?)
}

/// `g(x) = f_1(x_1)⋯f_d(x_d)` for one-dimensional factors on a shared lattice.
pub fn tensor_product(factors: &[SampledFunction]) -> Result<SampledFunction> {
    let first = factors.first().ok_or_else(|| {
        Error::InvalidParameter("tensor product needs at least one factor".into())
    })?;
    let line = *first.grid();
    for f in factors {
        if f.grid().dim() != 1 || f.grid() != &line {
            return Err(Error::ResolutionMismatch(
                "tensor factors must share one 1-d lattice".into(),
            ));
        }
        if f.domain() != Domain::Space {
            return Err(Error::DomainMismatch {
                expected: Domain::Space,
            });
        }
    }
    let d = factors.len();
    let grid = GridSpec::new(d, line.samples_per_unit(), line.support_cells())?;
    let side = grid.side();
    let mut idx = vec![0usize; d];
    let values = (0..grid.len())
        .map(|flat| {
            unravel(flat, side, &mut idx);
            idx.iter()
                .zip(factors)
                .fold(Complex64::new(1.0, 0.0), |acc, (&i, f)| acc * f.values()[i])
        })
        .collect();
    SampledFunction::new(grid, values, Domain::Space)
}
