//! Rectangle tails `∫_{ℝ^d∖𝓡}|g|² + ∫_{ℝ^d∖𝓛}|ĝ|²` against the lower bound
//! `C/(R_i L_i)`, `C = A²/(10⁸BΓ²)`.

use crate::error::{Error, Result};
use crate::grid::{fourier_transform, Domain, Rectangle, SampledFunction};
use crate::zak::RieszBounds;

/// Frequency mass within one unit of the lattice edge above which a
/// truncation warning is raised.
pub const EDGE_MASS_WARNING: f64 = 1e-6;

/// `Σ |f|²·h^d` over nodes outside the open box, i.e. with `|x_i| ≥ R_i` for
/// some axis. Works on either domain.
pub fn tail_mass(f: &SampledFunction, bx: &Rectangle) -> Result<f64> {
    let d = f.grid().dim();
    if bx.dim() != d {
        return Err(Error::InvalidParameter(format!(
            "box has {} half-widths for dimension {d}",
            bx.dim()
        )));
    }
    let mut sum = 0.0;
    for (i, v) in f.values().iter().enumerate() {
        let p = f.point(i);
        if p.iter().zip(bx.half_widths()).any(|(x, r)| x.abs() >= *r) {
            sum += v.norm_sqr();
        }
    }
    Ok(sum * f.cell_volume())
}

/// Mass within one lattice unit of the outer boundary.
fn edge_mass(f: &SampledFunction) -> f64 {
    let extent = match f.domain() {
        Domain::Space => f.grid().support_cells() as f64,
        Domain::Frequency => f.grid().frequency_extent(),
    };
    let mut sum = 0.0;
    for (i, v) in f.values().iter().enumerate() {
        if f.point(i).iter().any(|x| x.abs() >= extent - 1.0) {
            sum += v.norm_sqr();
        }
    }
    sum * f.cell_volume()
}

/// `A²/(10⁸·B·Γ²)`.
pub fn theorem_constant(a: f64, b: f64, gamma: f64) -> f64 {
    a * a / (1e8 * b * gamma * gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Non-Riesz generators are rejected.
    Strict,
    /// Non-Riesz generators are evaluated and flagged.
    Advisory,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    pub r: Vec<f64>,
    pub l: Vec<f64>,
    pub space_tail: f64,
    pub freq_tail: f64,
    pub total: f64,
    pub constant_c: f64,
    /// `C/(R_i L_i)` per axis.
    pub per_axis_bound: Vec<f64>,
    /// `total / per_axis_bound[i]`.
    pub ratios: Vec<f64>,
    pub best_axis: usize,
    pub best_bound: f64,
    pub riesz: bool,
    /// `total ≥ best_bound`.
    pub holds: bool,
    pub warnings: Vec<String>,
}

impl TailReport {
    pub fn ratio(&self) -> f64 {
        self.total / self.best_bound
    }
}

pub fn uncertainty_functional(
    g: &SampledFunction,
    r: &Rectangle,
    l: &Rectangle,
    bounds: &RieszBounds,
    gamma: f64,
    mode: Mode,
) -> Result<TailReport> {
    let ghat = fourier_transform(g)?;
    report_from(g, &ghat, r, l, bounds, gamma, mode)
}

fn report_from(
    g: &SampledFunction,
    ghat: &SampledFunction,
    r: &Rectangle,
    l: &Rectangle,
    bounds: &RieszBounds,
    gamma: f64,
    mode: Mode,
) -> Result<TailReport> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Γ must be positive, got {gamma}"
        )));
    }
    if mode == Mode::Strict && !bounds.is_riesz {
        return Err(Error::NotRiesz { lower: bounds.a });
    }
    let mut warnings = Vec::new();
    let m = g.grid().support_cells() as f64;
    if r.half_widths().iter().any(|&w| w > m) {
        warnings.push(format!("space box exceeds the sampled extent {m}"));
    }
    let q2 = g.grid().frequency_extent();
    if l.half_widths().iter().any(|&w| w > q2) {
        warnings.push(format!("frequency box exceeds the sampled extent {q2}"));
    }
    let edge = edge_mass(ghat);
    if edge > EDGE_MASS_WARNING {
        warnings.push(format!("frequency mass {edge:.3e} near the lattice edge"));
    }
    if !bounds.is_riesz {
        warnings.push("generator is not a Riesz basis; report is advisory".into());
    }

    let space_tail = tail_mass(g, r)?;
    let freq_tail = tail_mass(ghat, l)?;
    let total = space_tail + freq_tail;
    let constant_c = if bounds.b > 0.0 {
        theorem_constant(bounds.a, bounds.b, gamma)
    } else {
        0.0
    };
    let per_axis_bound: Vec<f64> = r
        .half_widths()
        .iter()
        .zip(l.half_widths())
        .map(|(ri, li)| constant_c / (ri * li))
        .collect();
    let ratios = per_axis_bound.iter().map(|b| total / b).collect();
    let (best_axis, best_bound) =
        per_axis_bound
            .iter()
            .cloned()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, b)| if b > acc.1 { (i, b) } else { acc },
            );
    Ok(TailReport {
        r: r.half_widths().to_vec(),
        l: l.half_widths().to_vec(),
        space_tail,
        freq_tail,
        total,
        constant_c,
        per_axis_bound,
        ratios,
        best_axis,
        best_bound,
        riesz: bounds.is_riesz,
        holds: total >= best_bound,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSweep {
    pub rows: Vec<TailReport>,
    /// Smallest `total / best_bound` over the rows.
    pub min_ratio: f64,
}

/// One report per `(R, L)` pair, `R` varying slowest.
pub fn probe_sweep(
    g: &SampledFunction,
    r_list: &[Rectangle],
    l_list: &[Rectangle],
    bounds: &RieszBounds,
    gamma: f64,
    mode: Mode,
) -> Result<ProbeSweep> {
    if r_list.is_empty() || l_list.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep lists must be non-empty".into(),
        ));
    }
    let ghat = fourier_transform(g)?;
    let mut rows = Vec::with_capacity(r_list.len() * l_list.len());
    for r in r_list {
        for l in l_list {
            rows.push(report_from(g, &ghat, r, l, bounds, gamma, mode)?);
        }
    }
    let min_ratio = rows
        .iter()
        .map(TailReport::ratio)
        .fold(f64::INFINITY, f64::min);
    Ok(ProbeSweep { rows, min_ratio })
}
