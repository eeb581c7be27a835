//! Axis-wise DFTs over flat row-major arrays.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Applies an unnormalized DFT along each of `axes` of the row-major array
/// `data` with the given `shape`.
pub(crate) fn transform_axes(
    data: &mut [Complex64],
    shape: &[usize],
    axes: &[usize],
    direction: FftDirection,
) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    let mut planner = FftPlanner::new();
    for &axis in axes {
        let len = shape[axis];
        if len <= 1 {
            continue;
        }
        let fft = planner.plan_fft(len, direction);
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for o in 0..outer {
            let base = o * len * stride;
            for s in 0..stride {
                for (t, v) in line.iter_mut().enumerate() {
                    *v = data[base + t * stride + s];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride + s] = *v;
                }
            }
        }
    }
}

/// Row-major flat index of a multi-index over a cube with `side` points per axis.
pub(crate) fn flat_index(idx: &[usize], side: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * side + i)
}

/// Inverse of [`flat_index`].
pub(crate) fn unravel(mut flat: usize, side: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = flat % side;
        flat /= side;
    }
}
