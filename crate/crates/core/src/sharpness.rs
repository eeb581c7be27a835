//! Generators with unimodular Zak transform, their tensor products, and the
//! tail model of the `R, L = R√(ln R)` family.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{
    fourier_transform, l2_norm, tensor_product, Domain, GridSpec, Rectangle, SampledFunction,
};
use crate::localization::tail_mass;
use crate::topology::{Extension, PlaneFunction};
use crate::zak::{inverse_zak, ZakArray};

/// A phase `H₀` on the `q × n` node grid of `[0,1)²`; the generator's Zak
/// transform is the quasiperiodic extension of `e^{2πiH₀}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpec {
    q: usize,
    n: usize,
    values: Vec<f64>,
}

/// Tolerance of the seam check on the extension.
pub const SEAM_TOLERANCE: f64 = 1e-9;

impl PhaseSpec {
    /// Wraps `H₀` values, row-major over `(x, y)`.
    pub fn new(q: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        if q == 0 || n == 0 {
            return Err(Error::InvalidGrid("phase grid must be non-empty".into()));
        }
        if values.len() != q * n {
            return Err(Error::ResolutionMismatch(format!(
                "{} phases for a {q}×{n} grid",
                values.len()
            )));
        }
        let spec = PhaseSpec { q, n, values };
        spec.seam_residual()?;
        Ok(spec)
    }

    pub fn from_fn(q: usize, n: usize, h: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(q * n);
        for a in 0..q {
            for b in 0..n {
                values.push(h(a as f64 / q as f64, b as f64 / n as f64));
            }
        }
        PhaseSpec::new(q, n, values)
    }

    pub fn constant(q: usize, n: usize, value: f64) -> Result<Self> {
        PhaseSpec::new(q, n, vec![value; q * n])
    }

    /// `H₀(x,y) = m·x + Σ c_t cos(2π(p_t x + r_t y) + θ_t)` with an integer
    /// slope `m ∈ {-1,0,1}`, three terms, `|c_t| ≤ 0.02`, `p_t, r_t ∈ {-1,0,1}`.
    pub fn random_smooth(q: usize, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slope = rng.gen_range(-1i32..=1) as f64;
        let terms: Vec<(f64, f64, f64, f64)> = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-0.02..=0.02),
                    rng.gen_range(-1i32..=1) as f64,
                    rng.gen_range(-1i32..=1) as f64,
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        PhaseSpec::from_fn(q, n, |x, y| {
            slope * x
                + terms
                    .iter()
                    .map(|(c, p, r, t)| c * (2.0 * PI * (p * x + r * y) + t).cos())
                    .sum::<f64>()
        })
        .expect("smooth phases are finite")
    }

    pub fn x_resolution(&self) -> usize {
        self.q
    }

    pub fn y_resolution(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `e^{2πiH₀}` as a quasiperiodic plane function.
    pub fn to_plane(&self) -> Result<PlaneFunction> {
        PlaneFunction::new(self.q, self.n, self.unimodular(), Extension::Quasiperiodic)
    }

    fn unimodular(&self) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|h| Complex64::from_polar(1.0, 2.0 * PI * h))
            .collect()
    }

    /// Largest violation of the extension relations at the seam nodes
    /// `x ∈ {0, 1}` and `y ∈ {0, 1}`.
    pub fn seam_residual(&self) -> Result<f64> {
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::SeamInconsistency {
                residual: f64::INFINITY,
            });
        }
        let g = PlaneFunction::new(self.q, self.n, self.unimodular(), Extension::Quasiperiodic)?;
        let (q, n) = (self.q as i64, self.n as i64);
        let mut worst: f64 = 0.0;
        for b in 0..n {
            let w = Complex64::from_polar(1.0, 2.0 * PI * b as f64 / n as f64);
            worst = worst.max((g.at(q, b) - w * g.at(0, b)).norm());
        }
        for a in 0..q {
            worst = worst.max((g.at(a, n) - g.at(a, 0)).norm());
        }
        if worst > SEAM_TOLERANCE {
            return Err(Error::SeamInconsistency { residual: worst });
        }
        Ok(worst)
    }
}

/// The one-dimensional generator whose Zak transform is `e^{2πiH₀}`, on a
/// lattice with `Q = q` and `2M = n`.
pub fn synthesize_generator(p: &PhaseSpec, grid: &GridSpec) -> Result<SampledFunction> {
    if grid.dim() != 1 {
        return Err(Error::InvalidParameter(
            "synthesis produces one-dimensional generators".into(),
        ));
    }
    if grid.samples_per_unit() != p.q || 2 * grid.support_cells() != p.n {
        return Err(Error::ResolutionMismatch(format!(
            "a {}×{} phase needs Q = {} and M = {}, got Q = {} and M = {}",
            p.q,
            p.n,
            p.q,
            p.n as f64 / 2.0,
            grid.samples_per_unit(),
            grid.support_cells()
        )));
    }
    p.seam_residual()?;
    let z = ZakArray::new(1, p.q, p.n, grid.support_cells(), p.unimodular())?;
    inverse_zak(&z)
}

/// Nodes with `|x_axis| ≥ r`.
pub fn axis_tail(f: &SampledFunction, axis: usize, r: f64) -> Result<f64> {
    let d = f.grid().dim();
    if axis >= d {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {d}"
        )));
    }
    let mut sum = 0.0;
    for (i, v) in f.values().iter().enumerate() {
        if f.point(i)[axis].abs() >= r {
            sum += v.norm_sqr();
        }
    }
    Ok(sum * f.cell_volume())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorTail {
    /// Space plus frequency tail of the tensor power.
    pub lhs: f64,
    /// `Σ_i` of one-dimensional tails at `R_i` and `L_i`.
    pub rhs: f64,
    pub space_terms: Vec<f64>,
    pub freq_terms: Vec<f64>,
    pub holds: bool,
}

/// Accepted deviation of `‖f‖` from 1.
pub const NORM_TOLERANCE: f64 = 1e-6;

fn require_unit_line(f: &SampledFunction) -> Result<()> {
    if f.grid().dim() != 1 || f.domain() != Domain::Space {
        return Err(Error::InvalidParameter(
            "expected a one-dimensional space-domain generator".into(),
        ));
    }
    let norm = l2_norm(f);
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "generator norm {norm} is not 1"
        )));
    }
    Ok(())
}

/// Compares the tails of `g = f⊗⋯⊗f` with the sum of one-dimensional tails.
pub fn tensor_tail_decomposition(
    f: &SampledFunction,
    d: usize,
    r: &Rectangle,
    l: &Rectangle,
) -> Result<TensorTail> {
    require_unit_line(f)?;
    if d == 0 || r.dim() != d || l.dim() != d {
        return Err(Error::InvalidParameter(format!(
            "boxes must have {d} half-widths"
        )));
    }
    let g = if d == 1 {
        f.clone()
    } else {
        tensor_product(&vec![f.clone(); d])?
    };
    let lhs = tail_mass(&g, r)? + tail_mass(&fourier_transform(&g)?, l)?;

    let fhat = fourier_transform(f)?;
    let mut space_terms = Vec::with_capacity(d);
    let mut freq_terms = Vec::with_capacity(d);
    for i in 0..d {
        space_terms.push(tail_mass(f, &Rectangle::new(vec![r.half_widths()[i]])?)?);
        freq_terms.push(tail_mass(
            &fhat,
            &Rectangle::new(vec![l.half_widths()[i]])?,
        )?);
    }
    let rhs = space_terms.iter().chain(&freq_terms).sum::<f64>();
    Ok(TensorTail {
        lhs,
        rhs,
        space_terms,
        freq_terms,
        holds: lhs <= rhs * (1.0 + 1e-6),
    })
}

/// `L = R√(ln R)`.
pub fn companion_scale(r: f64) -> f64 {
    r * r.ln().sqrt()
}

/// `d·(1/R² + ln L/L²)`.
pub fn tail_model(d: usize, r: f64) -> f64 {
    let l = companion_scale(r);
    d as f64 * (1.0 / (r * r) + l.ln() / (l * l))
}

/// `3d/R²`.
pub fn tail_cap(d: usize, r: f64) -> f64 {
    3.0 * d as f64 / (r * r)
}

/// `(3d/R²) / (d·√(ln R)/R²) = 3/√(ln R)`.
pub fn contradiction_ratio(r: f64) -> f64 {
    3.0 / r.ln().sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub r: f64,
    pub l: f64,
    pub model: f64,
    pub cap: f64,
    pub model_within_cap: bool,
    pub measured: Option<f64>,
}

pub fn sharpness_sweep(
    f: Option<&SampledFunction>,
    d: usize,
    r_values: &[f64],
) -> Result<Vec<SweepRow>> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if let Some(f) = f {
        require_unit_line(f)?;
    }
    r_values
        .iter()
        .map(|&r| {
            if r < 3.0 || !r.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "R must be at least 3, got {r}"
                )));
            }
            let l = companion_scale(r);
            let measured = match f {
                None => None,
                Some(f) => {
                    let extent = f.grid().frequency_extent();
                    if l > extent {
                        return Err(Error::InsufficientResolution(format!(
                            "L = {l:.4} exceeds the frequency extent {extent}"
                        )));
                    }
                    let rect = |w| Rectangle::cube(d, w);
                    Some(tensor_tail_decomposition(f, d, &rect(r)?, &rect(l)?)?.lhs)
                }
            };
            let (model, cap) = (tail_model(d, r), tail_cap(d, r));
            Ok(SweepRow {
                d,
                r,
                l,
                model,
                cap,
                model_within_cap: model <= cap,
                measured,
            })
        })
        .collect()
}
