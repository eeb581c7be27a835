//! Phase topology of functions on the unit square: winding numbers, argument
//! branches, jump witnesses and jump sets.
//!
//! Arguments are measured in cycles, `G = |G| e^{2πiH}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zak::ZakArray;

/// How a [`PlaneFunction`] continues outside `[0,1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `G(x+1, y) = e^{2πiy} G(x, y)`, `G(x, y+1) = G(x, y)`.
    Quasiperiodic,
    /// `G(x+1, y) = G(x, y+1) = G(x, y)`.
    Periodic,
}

/// Samples of a function on the `q × n` node grid `(a/q, b/n)` of `[0,1)²`.
#[derive(Clone, Debug)]
pub struct PlaneFunction {
    q: usize,
    n: usize,
    values: Vec<Complex64>,
    extension: Extension,
    omega: Vec<Complex64>,
}

impl PlaneFunction {
    pub fn new(q: usize, n: usize, values: Vec<Complex64>, extension: Extension) -> Result<Self> {
        if q == 0 || n == 0 {
            return Err(Error::InvalidGrid("plane grid must be non-empty".into()));
        }
        if values.len() != q * n {
            return Err(Error::ResolutionMismatch(format!(
                "{} values for a {q}×{n} grid",
                values.len()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        let omega = (0..n)
            .map(|b| Complex64::from_polar(1.0, 2.0 * PI * b as f64 / n as f64))
            .collect();
        Ok(PlaneFunction {
            q,
            n,
            values,
            extension,
            omega,
        })
    }

    /// The quasiperiodic function carried by a one-dimensional Zak array.
    pub fn from_zak(z: &ZakArray) -> Result<Self> {
        if z.dim() != 1 {
            return Err(Error::InvalidParameter(format!(
                "expected a one-dimensional slice, got dimension {}",
                z.dim()
            )));
        }
        PlaneFunction::new(
            z.spatial_resolution(),
            z.frequency_resolution(),
            z.values().to_vec(),
            Extension::Quasiperiodic,
        )
    }

    pub fn from_fn(
        q: usize,
        n: usize,
        extension: Extension,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(q * n);
        for a in 0..q {
            for b in 0..n {
                values.push(f(a as f64 / q as f64, b as f64 / n as f64));
            }
        }
        PlaneFunction::new(q, n, values, extension)
    }

    pub fn x_resolution(&self) -> usize {
        self.q
    }

    pub fn y_resolution(&self) -> usize {
        self.n
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Multiplies by a function of the node coordinates in `[0,1)²`.
    pub fn multiplied_by(&self, f: impl Fn(f64, f64) -> Complex64) -> PlaneFunction {
        let mut out = self.clone();
        for a in 0..self.q {
            for b in 0..self.n {
                out.values[a * self.n + b] *= f(a as f64 / self.q as f64, b as f64 / self.n as f64);
            }
        }
        out
    }

    /// Value at the integer node `(a/q, b/n)` anywhere in the plane.
    pub fn at(&self, a: i64, b: i64) -> Complex64 {
        let a0 = a.rem_euclid(self.q as i64) as usize;
        let shift = a.div_euclid(self.q as i64);
        let b0 = b.rem_euclid(self.n as i64) as usize;
        let mut v = self.values[a0 * self.n + b0];
        if self.extension == Extension::Quasiperiodic {
            let w = if shift >= 0 {
                self.omega[b0]
            } else {
                self.omega[b0].conj()
            };
            for _ in 0..shift.unsigned_abs() {
                v *= w;
            }
        }
        v
    }

    fn min_max_modulus(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
                (lo.min(v.norm()), hi.max(v.norm()))
            })
    }
}

/// Principal phase increment from `u` to `v`, in cycles within `(-1/2, 1/2]`.
fn phase_step(u: Complex64, v: Complex64) -> f64 {
    (v * u.conj()).arg() / (2.0 * PI)
}

/// Largest phase step the boundary walk accepts, in cycles.
pub const MAX_PHASE_STEP: f64 = 0.25;

/// Winding number of `G` around `∂[0,1]²`, walked counterclockwise through
/// the boundary nodes.
///
/// The walk is accepted when every phase step is below a quarter cycle and the
/// smallest modulus on the path, relative to the largest, exceeds ten times
/// the largest step.
pub fn winding_number(g: &PlaneFunction) -> Result<i64> {
    let (q, n) = (g.q as i64, g.n as i64);
    let mut path = Vec::with_capacity(2 * (g.q + g.n) + 1);
    path.extend((0..q).map(|a| (a, 0)));
    path.extend((0..n).map(|b| (q, b)));
    path.extend((1..=q).rev().map(|a| (a, n)));
    path.extend((1..=n).rev().map(|b| (0, b)));
    path.push((0, 0));

    let values: Vec<Complex64> = path.iter().map(|&(a, b)| g.at(a, b)).collect();
    let (lo, hi) = values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
        (lo.min(v.norm()), hi.max(v.norm()))
    });
    if hi == 0.0 {
        return Err(Error::ModulusTooSmall {
            ratio: 0.0,
            required: 0.0,
        });
    }
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for w in values.windows(2) {
        if w[0].norm() == 0.0 || w[1].norm() == 0.0 {
            return Err(Error::ModulusTooSmall {
                ratio: 0.0,
                required: 0.0,
            });
        }
        let s = phase_step(w[0], w[1]);
        max_step = max_step.max(s.abs());
        total += s;
    }
    if max_step >= MAX_PHASE_STEP {
        return Err(Error::PhaseStepTooLarge { step: max_step });
    }
    let ratio = lo / hi;
    let required = 10.0 * max_step;
    if ratio <= required {
        return Err(Error::ModulusTooSmall { ratio, required });
    }
    Ok(total.round() as i64)
}

/// A branch of the argument sampled at `(x₀ + i/k, y₀ + j/n)`,
/// `0 ≤ i ≤ k`, `0 ≤ j ≤ n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgumentBranch {
    pub base: (f64, f64),
    pub k: usize,
    pub n: usize,
    values: Vec<f64>,
}

impl ArgumentBranch {
    /// Samples `h` directly from a real function of `(x, y)`.
    pub fn from_fn(
        base: (f64, f64),
        k: usize,
        n: usize,
        h: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        check_steps(k, n)?;
        if !(0.0..1.0 / k as f64).contains(&base.0) || !(0.0..1.0 / n as f64).contains(&base.1) {
            return Err(Error::InvalidParameter(format!(
                "base point ({}, {}) must lie in [0,1/{k})×[0,1/{n})",
                base.0, base.1
            )));
        }
        let mut values = Vec::with_capacity((k + 1) * (n + 1));
        for i in 0..=k {
            for j in 0..=n {
                values.push(h(
                    base.0 + i as f64 / k as f64,
                    base.1 + j as f64 / n as f64,
                ));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "branch values must be finite".into(),
            ));
        }
        Ok(ArgumentBranch { base, k, n, values })
    }

    /// Unwraps the phase of `G` starting from the node `(base_a, base_b)`:
    /// first along the row `j = 0`, then up each column, always choosing the
    /// representative within half a cycle of the previous node.
    pub fn from_plane(
        g: &PlaneFunction,
        base_a: usize,
        base_b: usize,
        k: usize,
        n: usize,
    ) -> Result<Self> {
        check_steps(k, n)?;
        if !g.q.is_multiple_of(k) || !g.n.is_multiple_of(n) {
            return Err(Error::InsufficientResolution(format!(
                "a {}×{} grid cannot be stepped by 1/{k} and 1/{n}",
                g.q, g.n
            )));
        }
        let (sx, sy) = (g.q / k, g.n / n);
        if base_a >= sx || base_b >= sy {
            return Err(Error::InvalidParameter(
                "base node must lie in the first cell".into(),
            ));
        }
        let node = |i: usize, j: usize| g.at((base_a + i * sx) as i64, (base_b + j * sy) as i64);
        let stride = n + 1;
        let mut values = vec![0.0; (k + 1) * stride];
        let mut samples = vec![Complex64::new(0.0, 0.0); (k + 1) * stride];
        for i in 0..=k {
            for j in 0..=n {
                let v = node(i, j);
                if v.norm() == 0.0 {
                    return Err(Error::Precondition(format!(
                        "zero of G at branch node ({i}, {j})"
                    )));
                }
                samples[i * stride + j] = v;
            }
        }
        values[0] = samples[0].arg() / (2.0 * PI);
        for i in 1..=k {
            values[i * stride] = values[(i - 1) * stride]
                + phase_step(samples[(i - 1) * stride], samples[i * stride]);
        }
        for i in 0..=k {
            for j in 1..=n {
                let at = i * stride + j;
                values[at] = values[at - 1] + phase_step(samples[at - 1], samples[at]);
            }
        }
        let base = (base_a as f64 / g.q as f64, base_b as f64 / g.n as f64);
        Ok(ArgumentBranch { base, k, n, values })
    }

    /// `h_{i,j}`.
    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.n + 1) + j]
    }
}

fn check_steps(k: usize, n: usize) -> Result<()> {
    if k < 8 || n < 8 {
        return Err(Error::InvalidParameter(format!(
            "k and n must be at least 8, got {k} and {n}"
        )));
    }
    Ok(())
}

fn distance_to_integer(v: f64) -> f64 {
    (v - v.round()).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpCertificate {
    pub i: usize,
    pub j: usize,
    pub direction: Direction,
    /// Distance of the finite difference to the nearest integer.
    pub gap: f64,
}

/// Scans `1 ≤ i < k`, `1 ≤ j < n` in lexicographic order for a finite
/// difference of `h` farther than 1/8 from every integer. The horizontal
/// difference at `(i, j)` is tested before the vertical one.
pub fn lemma1_search(h: &ArgumentBranch) -> Result<JumpCertificate> {
    let mut min_max: f64 = f64::INFINITY;
    for i in 1..h.k {
        for j in 1..h.n {
            let horizontal = distance_to_integer(h.h(i + 1, j) - h.h(i, j));
            if horizontal > 0.125 {
                return Ok(JumpCertificate {
                    i,
                    j,
                    direction: Direction::Horizontal,
                    gap: horizontal,
                });
            }
            let vertical = distance_to_integer(h.h(i, j + 1) - h.h(i, j));
            if vertical > 0.125 {
                return Ok(JumpCertificate {
                    i,
                    j,
                    direction: Direction::Vertical,
                    gap: vertical,
                });
            }
            min_max = min_max.min(horizontal.max(vertical));
        }
    }
    Err(Error::NoWitness {
        min_max_distance: min_max,
    })
}

/// Whether [`jump_set`] enforces `|G| ≥ A` on the grid before marking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Strict,
    Diagnostic,
}

#[derive(Clone, Debug)]
pub struct JumpSet {
    q: usize,
    n: usize,
    mask: Vec<bool>,
    pub estimated_measure: f64,
    pub threshold: f64,
    /// `1/(kn)`.
    pub lower_bound: f64,
    /// `estimated_measure ≥ 0.95·lower_bound`.
    pub bound_holds: bool,
}

/// Slack on the measure bound for grid-boundary effects.
pub const GRID_SLACK: f64 = 0.05;

impl JumpSet {
    pub(crate) fn from_mask(
        q: usize,
        n: usize,
        mask: Vec<bool>,
        threshold: f64,
        lower_bound: f64,
        slack: f64,
    ) -> Self {
        let marked = mask.iter().filter(|&&m| m).count();
        let estimated_measure = marked as f64 / mask.len() as f64;
        JumpSet {
            q,
            n,
            mask,
            estimated_measure,
            threshold,
            lower_bound,
            bound_holds: estimated_measure >= (1.0 - slack) * lower_bound,
        }
    }

    pub fn x_resolution(&self) -> usize {
        self.q
    }

    pub fn y_resolution(&self) -> usize {
        self.n
    }

    /// Row-major over `(x, y)` nodes.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.mask[a * self.n + b]
    }

    pub fn marked(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| (i / n, i % n))
    }
}

/// Marks every node where a step of `1/k` in `x` or `1/n` in `y` changes `G`
/// by at least `A/3`. `a_bound` is the lower bound for `|G|`.
pub fn jump_set(
    g: &PlaneFunction,
    k: usize,
    n: usize,
    a_bound: f64,
    mode: CheckMode,
) -> Result<JumpSet> {
    check_steps(k, n)?;
    if !(a_bound > 0.0 && a_bound.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "A must be positive, got {a_bound}"
        )));
    }
    if !g.q.is_multiple_of(k) || !g.n.is_multiple_of(n) {
        return Err(Error::InsufficientResolution(format!(
            "a {}×{} grid cannot be stepped by 1/{k} and 1/{n}",
            g.q, g.n
        )));
    }
    if mode == CheckMode::Strict {
        let (lo, _) = g.min_max_modulus();
        if lo < a_bound * (1.0 - 1e-12) {
            return Err(Error::Precondition(format!(
                "|G| dips to {lo:.6e} below A = {a_bound:.6e}"
            )));
        }
    }
    let threshold = a_bound / 3.0;
    let (sx, sy) = ((g.q / k) as i64, (g.n / n) as i64);
    let mut mask = Vec::with_capacity(g.q * g.n);
    for a in 0..g.q as i64 {
        for b in 0..g.n as i64 {
            let v = g.at(a, b);
            let jump = (g.at(a + sx, b) - v).norm() >= threshold
                || (g.at(a, b + sy) - v).norm() >= threshold;
            mask.push(jump);
        }
    }
    Ok(JumpSet::from_mask(
        g.q,
        g.n,
        mask,
        threshold,
        1.0 / (k * n) as f64,
        GRID_SLACK,
    ))
}
