//! Discrete Zak transform `Zg(x,y) = Σ_k g(x-k) e^{2πik·y}` on the unit cell.
//!
//! For a function sampled on `[-M, M)^d` the k-sum has `2M` terms per axis and
//! is evaluated as a zero-padded length-`N` DFT, `N ≥ 2M`. Values live on the
//! nodes `x = a/Q`, `y = b/N` of `[0,1)^{2d}` and are extended to all of
//! `ℝ^{2d}` through quasiperiodicity.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::fft::{flat_index, transform_axes, unravel};
use crate::grid::{convolve, fourier_transform, Domain, GridSpec, SampledFunction};

/// Largest number of nodes a single [`ZakArray`] may hold.
pub const ZAK_BUDGET: usize = 1 << 26;

/// `|Zg|²` minima at or below this value are treated as zeros.
pub const RIESZ_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct ZakArray {
    d: usize,
    q: usize,
    n: usize,
    m: usize,
    values: Vec<Complex64>,
    omega: Vec<Complex64>,
}

fn checked_nodes(d: usize, q: usize, n: usize) -> Result<usize> {
    let per_axis = q
        .checked_mul(n)
        .ok_or_else(|| Error::TooLarge("zak grid overflows".into()))?;
    match (0..d).try_fold(1usize, |acc, _| acc.checked_mul(per_axis)) {
        Some(total) if total <= ZAK_BUDGET => Ok(total),
        _ => Err(Error::TooLarge(format!(
            "({q}·{n})^{d} zak nodes exceed {ZAK_BUDGET}"
        ))),
    }
}

fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|b| Complex64::from_polar(1.0, 2.0 * PI * b as f64 / n as f64))
        .collect()
}

impl ZakArray {
    /// Wraps raw node values laid out row-major as `(x_1..x_d, y_1..y_d)`.
    pub fn new(d: usize, q: usize, n: usize, m: usize, values: Vec<Complex64>) -> Result<Self> {
        if d == 0 || q == 0 || n == 0 || m == 0 {
            return Err(Error::InvalidGrid("zak dimensions must be positive".into()));
        }
        if n < 2 * m {
            return Err(Error::InvalidGrid(format!(
                "y-resolution {n} cannot carry {} translates per axis",
                2 * m
            )));
        }
        let total = checked_nodes(d, q, n)?;
        if values.len() != total {
            return Err(Error::ResolutionMismatch(format!(
                "{} values for {total} zak nodes",
                values.len()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(ZakArray {
            d,
            q,
            n,
            m,
            values,
            omega: unit_roots(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// x-samples per axis in `[0,1)`.
    pub fn spatial_resolution(&self) -> usize {
        self.q
    }

    /// y-samples per axis in `[0,1)`.
    pub fn frequency_resolution(&self) -> usize {
        self.n
    }

    /// Truncation `M` of the defining sum.
    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn flat(&self, a: &[usize], b: &[usize]) -> usize {
        flat_index(a, self.q) * self.n.pow(self.d as u32) + flat_index(b, self.n)
    }

    /// Value at the fundamental-domain node `(a/Q, b/N)`.
    pub fn get(&self, a: &[usize], b: &[usize]) -> Complex64 {
        self.values[self.flat(a, b)]
    }

    /// Splits a flat index into its x and y node indices.
    pub fn node_of(&self, flat: usize, a: &mut [usize], b: &mut [usize]) {
        let ny = self.n.pow(self.d as u32);
        unravel(flat / ny, self.q, a);
        unravel(flat % ny, self.n, b);
    }

    /// Value of the quasiperiodic extension at the integer node `(a/Q, b/N)`.
    ///
    /// Each unit step in `x_i` multiplies by `e^{2πi y_i}` (its conjugate for
    /// negative steps), so a forward shift by one cell reproduces the shifted
    /// value bit for bit.
    pub fn at_node(&self, a: &[i64], b: &[i64]) -> Complex64 {
        let mut a0 = [0usize; 8];
        let mut b0 = [0usize; 8];
        let mut shifts = [0i64; 8];
        let (a0, b0, shifts) = if self.d <= 8 {
            (&mut a0[..self.d], &mut b0[..self.d], &mut shifts[..self.d])
        } else {
            return self.at_node_alloc(a, b);
        };
        for t in 0..self.d {
            a0[t] = a[t].rem_euclid(self.q as i64) as usize;
            shifts[t] = a[t].div_euclid(self.q as i64);
            b0[t] = b[t].rem_euclid(self.n as i64) as usize;
        }
        self.extend(self.get(a0, b0), b0, shifts)
    }

    fn at_node_alloc(&self, a: &[i64], b: &[i64]) -> Complex64 {
        let a0: Vec<usize> = a
            .iter()
            .map(|&v| v.rem_euclid(self.q as i64) as usize)
            .collect();
        let shifts: Vec<i64> = a.iter().map(|&v| v.div_euclid(self.q as i64)).collect();
        let b0: Vec<usize> = b
            .iter()
            .map(|&v| v.rem_euclid(self.n as i64) as usize)
            .collect();
        self.extend(self.get(&a0, &b0), &b0, &shifts)
    }

    fn extend(&self, mut v: Complex64, b0: &[usize], shifts: &[i64]) -> Complex64 {
        for (&b, &s) in b0.iter().zip(shifts) {
            let w = self.omega[b];
            if s >= 0 {
                for _ in 0..s {
                    v *= w;
                }
            } else {
                let w = w.conj();
                for _ in 0..(-s) {
                    v *= w;
                }
            }
        }
        v
    }

    /// Quasiperiodic extension at an arbitrary point `(x, y) ∈ ℝ^{2d}`,
    /// rounded to the nearest stored node.
    pub fn evaluate_extended(&self, point: &[f64]) -> Result<Complex64> {
        if point.len() != 2 * self.d {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                2 * self.d
            )));
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "point coordinates must be finite".into(),
            ));
        }
        let a: Vec<i64> = point[..self.d]
            .iter()
            .map(|x| (x * self.q as f64).round() as i64)
            .collect();
        let b: Vec<i64> = point[self.d..]
            .iter()
            .map(|y| (y * self.n as f64).round() as i64)
            .collect();
        Ok(self.at_node(&a, &b))
    }

    /// `‖Z‖` in `L²([0,1)^{2d})` by the node Riemann sum.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s / self.values.len() as f64).sqrt()
    }

    /// Pointwise map keeping the node layout.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ZakArray {
        ZakArray {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// One-dimensional slice along `axis` with the other coordinates fixed at
    /// the given node indices (entries at `axis` are ignored).
    pub fn slice(&self, axis: usize, fixed_a: &[usize], fixed_b: &[usize]) -> Result<ZakArray> {
        if axis >= self.d || fixed_a.len() != self.d || fixed_b.len() != self.d {
            return Err(Error::InvalidParameter(
                "slice axis or fixed coordinates out of range".into(),
            ));
        }
        let mut a = fixed_a.to_vec();
        let mut b = fixed_b.to_vec();
        let mut values = Vec::with_capacity(self.q * self.n);
        for i in 0..self.q {
            for j in 0..self.n {
                a[axis] = i;
                b[axis] = j;
                values.push(self.get(&a, &b));
            }
        }
        ZakArray::new(1, self.q, self.n, self.m, values)
    }
}

/// Zak transform with the y-resolution tied to the k-sum length, `N = 2M`.
pub fn zak_transform(f: &SampledFunction) -> Result<ZakArray> {
    zak_transform_padded(f, 2 * f.grid().support_cells())
}

/// Zak transform on a finer y-grid of `n ≥ 2M` nodes per axis, obtained by
/// zero-padding the k-range.
pub fn zak_transform_padded(f: &SampledFunction, n: usize) -> Result<ZakArray> {
    if f.domain() != Domain::Space {
        return Err(Error::DomainMismatch {
            expected: Domain::Space,
        });
    }
    let grid = f.grid();
    let (d, q, m) = (grid.dim(), grid.samples_per_unit(), grid.support_cells());
    if n < 2 * m {
        return Err(Error::InvalidGrid(format!(
            "y-resolution {n} is below 2M = {}",
            2 * m
        )));
    }
    let total = checked_nodes(d, q, n)?;
    let ny = n.pow(d as u32);
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    let mut idx = vec![0usize; d];
    let mut a = vec![0usize; d];
    let mut c = vec![0usize; d];
    for (flat, v) in f.values().iter().enumerate() {
        unravel(flat, grid.side(), &mut idx);
        for t in 0..d {
            a[t] = idx[t] % q;
            c[t] = idx[t] / q;
        }
        values[flat_index(&a, q) * ny + flat_index(&c, n)] = *v;
    }
    let mut shape = vec![q; d];
    shape.extend(std::iter::repeat_n(n, d));
    let axes: Vec<usize> = (d..2 * d).collect();
    transform_axes(&mut values, &shape, &axes, FftDirection::Forward);
    // c = M - k, so the DFT over c carries a factor e^{2πiM·y}.
    let roots = unit_roots(n);
    let mut b = vec![0usize; d];
    for (i, v) in values.iter_mut().enumerate() {
        unravel(i % ny, n, &mut b);
        let s: usize = b.iter().map(|&bt| (bt * m) % n).sum::<usize>() % n;
        *v *= roots[s];
    }
    ZakArray::new(d, q, n, m, values)
}

/// Recovers samples on `[-M, M)^d` from a Zak array. Components beyond the
/// `2M` stored translates (present only for padded arrays) are dropped.
pub fn inverse_zak(z: &ZakArray) -> Result<SampledFunction> {
    let (d, q, n, m) = (z.d, z.q, z.n, z.m);
    let grid = GridSpec::new(d, q, m)?;
    let ny = n.pow(d as u32);
    let mut work = z.values.clone();
    let mut b = vec![0usize; d];
    for (i, v) in work.iter_mut().enumerate() {
        unravel(i % ny, n, &mut b);
        let s: usize = b.iter().map(|&bt| (bt * m) % n).sum::<usize>() % n;
        *v *= z.omega[s].conj();
    }
    let mut shape = vec![q; d];
    shape.extend(std::iter::repeat_n(n, d));
    let axes: Vec<usize> = (d..2 * d).collect();
    transform_axes(&mut work, &shape, &axes, FftDirection::Inverse);
    let scale = 1.0 / ny as f64;
    let side = grid.side();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut idx = vec![0usize; d];
    let mut a = vec![0usize; d];
    let mut c = vec![0usize; d];
    for (flat, v) in values.iter_mut().enumerate() {
        unravel(flat, side, &mut idx);
        for t in 0..d {
            a[t] = idx[t] % q;
            c[t] = idx[t] / q;
        }
        *v = work[flat_index(&a, q) * ny + flat_index(&c, n)] * scale;
    }
    SampledFunction::new(grid, values, Domain::Space)
}

/// Max-norm residuals of the structural identities.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// Quasiperiodicity of the extension over two cells in every direction.
    pub qp: f64,
    /// `Zĝ(x,y) = e^{2πix·y} Zg(-y,x)`.
    pub zf: f64,
    /// `Z(g∗φ) = Zg ∗₁ φ`, when a kernel was supplied.
    pub p3: Option<f64>,
}

/// Work limit for the direct x-convolution quadrature.
const P3_WORK_LIMIT: u64 = 1 << 32;

pub fn identity_residuals(
    f: &SampledFunction,
    kernel: Option<&SampledFunction>,
) -> Result<IdentityResiduals> {
    if f.domain() != Domain::Space {
        return Err(Error::DomainMismatch {
            expected: Domain::Space,
        });
    }
    let grid = *f.grid();
    let (d, q, m) = (grid.dim(), grid.samples_per_unit(), grid.support_cells());
    let zg = zak_transform(f)?;

    let qp = quasiperiodicity_residual(&zg);

    // ĝ lives on a lattice with 2M samples per unit over Q/2 cells; its Zak
    // nodes (a/2M, b/Q) meet Zg's nodes at (-b/Q, a/2M).
    let ghat = fourier_transform(f)?.as_space_on_dual()?;
    let zghat = zak_transform(&ghat)?;
    let mut zf: f64 = 0.0;
    let mut a = vec![0usize; d];
    let mut b = vec![0usize; d];
    let mut xa = vec![0i64; d];
    let mut yb = vec![0i64; d];
    let pq = (zghat.q * zghat.n) as i64;
    for (flat, v) in zghat.values.iter().enumerate() {
        zghat.node_of(flat, &mut a, &mut b);
        let mut phase = 0i64;
        for t in 0..d {
            xa[t] = -(b[t] as i64);
            yb[t] = a[t] as i64;
            phase = (phase + (a[t] * b[t]) as i64) % pq;
        }
        let rhs =
            Complex64::from_polar(1.0, 2.0 * PI * phase as f64 / pq as f64) * zg.at_node(&xa, &yb);
        zf = zf.max((v - rhs).norm());
    }

    let p3 = match kernel {
        None => None,
        Some(k) => {
            if k.grid() != &grid {
                return Err(Error::ResolutionMismatch(
                    "kernel and generator must share one lattice".into(),
                ));
            }
            if k.domain() != Domain::Space {
                return Err(Error::DomainMismatch {
                    expected: Domain::Space,
                });
            }
            let support: Vec<usize> = (0..k.values().len())
                .filter(|&i| k.values()[i].norm() > 0.0)
                .collect();
            let work = support.len() as u64 * zg.len() as u64;
            if work > P3_WORK_LIMIT {
                return Err(Error::TooLarge(format!(
                    "convolution quadrature needs {work} evaluations"
                )));
            }
            let lhs = zak_transform(&convolve(f, k)?)?;
            let h = k.cell_volume();
            let side = grid.side();
            let offset = (m * q) as i64;
            let mut idx = vec![0usize; d];
            let mut worst: f64 = 0.0;
            for (flat, v) in lhs.values.iter().enumerate() {
                lhs.node_of(flat, &mut a, &mut b);
                for t in 0..d {
                    yb[t] = b[t] as i64;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for &s in &support {
                    unravel(s, side, &mut idx);
                    for t in 0..d {
                        xa[t] = a[t] as i64 + offset - idx[t] as i64;
                    }
                    acc += k.values()[s] * zg.at_node(&xa, &yb);
                }
                worst = worst.max((v - acc * h).norm());
            }
            Some(worst)
        }
    };

    Ok(IdentityResiduals { qp, zf, p3 })
}

/// Checks `Z(x+e_i, y) = e^{2πiy_i} Z(x, y)` and `Z(x, y+e_i) = Z(x, y)` on
/// the extension over `[0,2)^d × [0,2)^d`.
fn quasiperiodicity_residual(z: &ZakArray) -> f64 {
    let d = z.d;
    let (q, n) = (z.q as i64, z.n as i64);
    let mut worst: f64 = 0.0;
    let mut a = vec![0usize; d];
    let mut b = vec![0usize; d];
    let mut x = vec![0i64; d];
    let mut y = vec![0i64; d];
    for flat in 0..z.len() {
        z.node_of(flat, &mut a, &mut b);
        for t in 0..d {
            x[t] = a[t] as i64;
            y[t] = b[t] as i64;
        }
        for cell in 0..2 {
            let base = z.at_node(&x, &y);
            for i in 0..d {
                x[i] += q;
                let shifted = z.at_node(&x, &y);
                x[i] -= q;
                worst = worst.max((shifted - base * z.omega[b[i]]).norm());
                y[i] += n;
                let periodic = z.at_node(&x, &y);
                y[i] -= n;
                worst = worst.max((periodic - base).norm());
            }
            if cell == 0 {
                for xt in x.iter_mut() {
                    *xt += q;
                }
            }
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszBounds {
    pub a: f64,
    pub b: f64,
    pub is_riesz: bool,
    /// Node `(x, y)` of the smallest `|Zg|²` when the generator fails.
    pub zero_witness: Option<Vec<f64>>,
}

pub fn riesz_bounds(z: &ZakArray) -> RieszBounds {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut at = 0;
    for (i, v) in z.values.iter().enumerate() {
        let s = v.norm_sqr();
        if s < lo {
            lo = s;
            at = i;
        }
        hi = hi.max(s);
    }
    let is_riesz = lo > RIESZ_THRESHOLD;
    let zero_witness = (!is_riesz).then(|| {
        let mut a = vec![0usize; z.d];
        let mut b = vec![0usize; z.d];
        z.node_of(at, &mut a, &mut b);
        a.iter()
            .map(|&i| i as f64 / z.q as f64)
            .chain(b.iter().map(|&j| j as f64 / z.n as f64))
            .collect()
    });
    RieszBounds {
        a: lo,
        b: hi,
        is_riesz,
        zero_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample_function, Generator};

    fn line(q: usize, m: usize) -> GridSpec {
        GridSpec::new(1, q, m).unwrap()
    }

    #[test]
    fn indicator_zak_is_one() {
        let f = sample_function(&Generator::indicator(), &line(64, 8)).unwrap();
        let z = zak_transform(&f).unwrap();
        assert_eq!(z.frequency_resolution(), 16);
        assert!(z
            .values()
            .iter()
            .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn modulated_indicator_zak() {
        let f =
            sample_function(&Generator::indicator().modulated(vec![1.0]), &line(64, 8)).unwrap();
        let z = zak_transform(&f).unwrap();
        for a in 0..64 {
            for b in 0..16 {
                let expected = Complex64::from_polar(1.0, 2.0 * PI * a as f64 / 64.0);
                assert!((z.get(&[a], &[b]) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_vanishes_at_half_half() {
        let f = sample_function(&Generator::gaussian(), &line(64, 8)).unwrap();
        let z = zak_transform(&f).unwrap();
        assert!(z.get(&[32], &[8]).norm() <= 1e-6);
        let oracle: Complex64 = (-16i64..=16)
            .map(|k| {
                let x = 0.5 - k as f64;
                Complex64::from_polar((-PI * x * x).exp(), PI * k as f64)
            })
            .sum();
        assert!((z.get(&[32], &[8]) - oracle).norm() < 1e-12);
    }

    #[test]
    fn inverse_of_constant_is_indicator() {
        let z = ZakArray::new(1, 16, 4, 2, vec![Complex64::new(1.0, 0.0); 64]).unwrap();
        let f = inverse_zak(&z).unwrap();
        let g = sample_function(&Generator::indicator(), &line(16, 2)).unwrap();
        for (u, v) in f.values().iter().zip(g.values()) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_round_trip_and_norm() {
        let f = sample_function(&Generator::gaussian(), &line(64, 8)).unwrap();
        let z = zak_transform(&f).unwrap();
        let back = inverse_zak(&z).unwrap();
        let err: f64 = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(u, v)| (u - v).norm_sqr())
            .sum();
        assert!(err.sqrt() / 64f64.sqrt() <= 1e-8 * crate::grid::l2_norm(&f));
        assert!((crate::grid::l2_norm(&back) - z.l2_norm()).abs() < 1e-6);
    }

    #[test]
    fn padded_transform_agrees_on_shared_nodes() {
        let f = sample_function(&Generator::gaussian(), &line(16, 2)).unwrap();
        let z = zak_transform(&f).unwrap();
        let zp = zak_transform_padded(&f, 16).unwrap();
        for a in 0..16 {
            for b in 0..4 {
                assert!((z.get(&[a], &[b]) - zp.get(&[a], &[4 * b])).norm() < 1e-12);
            }
        }
        assert!((zp.l2_norm() - crate::grid::l2_norm(&f)).abs() < 1e-12);
        assert!(zak_transform_padded(&f, 2).is_err());
    }

    #[test]
    fn extended_examples() {
        let f = sample_function(&Generator::indicator(), &line(64, 8)).unwrap();
        let z = zak_transform(&f).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!((z.evaluate_extended(&[0.25, 1.5]).unwrap() - one).norm() < 1e-12);
        assert!((z.evaluate_extended(&[1.25, 0.5]).unwrap() + one).norm() < 1e-12);
        // Two unit steps at y = 1/4 give e^{iπ} = -1.
        assert!((z.evaluate_extended(&[2.25, 0.25]).unwrap() + one).norm() < 1e-12);
        assert!(
            (z.evaluate_extended(&[-0.75, 0.25]).unwrap() - Complex64::new(0.0, -1.0)).norm()
                < 1e-12
        );
        assert!(z.evaluate_extended(&[0.25]).is_err());
        assert!(z.evaluate_extended(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn brute_force_small_grid() {
        let g = GridSpec::new(1, 4, 2).unwrap();
        let f = SampledFunction::from_fn(g, Domain::Space, |x| {
            Complex64::new((1.3 * x[0]).sin() + 0.2, (0.7 * x[0] * x[0]).cos())
        })
        .unwrap();
        let z = zak_transform(&f).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let (x, y) = (a as f64 / 4.0, b as f64 / 4.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in -1i64..=2 {
                    let j = ((x - k as f64 + 2.0) * 4.0).round() as usize;
                    acc += f.values()[j] * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * y);
                }
                assert!((acc - z.get(&[a], &[b])).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn riesz_examples() {
        let g = line(64, 8);
        let ind = zak_transform(&sample_function(&Generator::indicator(), &g).unwrap()).unwrap();
        let r = riesz_bounds(&ind);
        assert!((r.a - 1.0).abs() < 1e-12 && (r.b - 1.0).abs() < 1e-12 && r.is_riesz);
        assert!(r.zero_witness.is_none());
        let two = sample_function(&Generator::indicator().with_amplitude(2.0), &g).unwrap();
        let r = riesz_bounds(&zak_transform(&two).unwrap());
        assert!((r.a - 4.0).abs() < 1e-12 && (r.b - 4.0).abs() < 1e-12);
        let gauss = zak_transform(&sample_function(&Generator::gaussian(), &g).unwrap()).unwrap();
        let r = riesz_bounds(&gauss);
        assert!(!r.is_riesz);
        assert_eq!(r.zero_witness, Some(vec![0.5, 0.5]));
    }

    #[test]
    fn identity_residuals_for_reference_families() {
        let g = line(64, 8);
        let ind = identity_residuals(&sample_function(&Generator::indicator(), &g).unwrap(), None)
            .unwrap();
        assert_eq!(ind.qp, 0.0);
        assert!(ind.zf <= 5e-3);
        assert!(ind.p3.is_none());
        let gauss = identity_residuals(&sample_function(&Generator::gaussian(), &g).unwrap(), None)
            .unwrap();
        assert!(gauss.zf <= 1e-6);
    }

    #[test]
    fn p3_with_identity_kernel_is_exact() {
        let g = line(16, 2);
        let f = sample_function(&Generator::gaussian(), &g).unwrap();
        // A single node of weight Q acts as the identity for the Riemann sum.
        let mut delta = vec![Complex64::new(0.0, 0.0); g.len()];
        delta[2 * 16] = Complex64::new(16.0, 0.0);
        let k = SampledFunction::new(g, delta, Domain::Space).unwrap();
        let r = identity_residuals(&f, Some(&k)).unwrap();
        assert!(r.p3.unwrap() < 1e-12);
        let other = SampledFunction::zeros(line(16, 4), Domain::Space);
        assert!(matches!(
            identity_residuals(&f, Some(&other)),
            Err(Error::ResolutionMismatch(_))
        ));
    }

    #[test]
    fn slice_of_tensor_indicator() {
        let f = sample_function(
            &Generator::indicator().modulated(vec![1.0, 0.0]),
            &GridSpec::new(2, 8, 2).unwrap(),
        )
        .unwrap();
        let z = zak_transform(&f).unwrap();
        let s = z.slice(0, &[0, 3], &[0, 1]).unwrap();
        assert_eq!(s.dim(), 1);
        for a in 0..8 {
            let expected = Complex64::from_polar(1.0, 2.0 * PI * a as f64 / 8.0);
            assert!((s.get(&[a], &[2]) - expected).norm() < 1e-12);
        }
    }
}
