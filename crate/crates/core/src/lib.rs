//! Numerics for Gabor systems on the integer lattice: discrete Zak
//! transforms, Riesz-basis checks, phase topology of quasiperiodic functions,
//! mollifier-based jump sets and time-frequency tail probes.

pub mod error;
mod fft;
pub mod grid;
pub mod localization;
pub mod mollifier;
pub mod sharpness;
pub mod topology;
pub mod zak;

pub use error::{Error, Result};
pub use grid::{
    convolve, fourier_transform, inverse_fourier_transform, l1_norm, l2_norm, sample_function,
    tensor_product, Domain, Family, Generator, GridSpec, Rectangle, SampledFunction,
};
pub use localization::{
    probe_sweep, tail_mass, theorem_constant, uncertainty_functional, Mode, ProbeSweep, TailReport,
};
pub use mollifier::{
    build_mollifier, dilate, gamma_constant, lemma3_alternatives, lemma3_constants, lemma3_set,
    smoothing_difference, BoundConvention, DilatedPair, Lemma3Report, MollifierSpec,
    SmoothingReport,
};
pub use sharpness::{
    contradiction_ratio, sharpness_sweep, synthesize_generator, tensor_tail_decomposition,
    PhaseSpec, SweepRow, TensorTail,
};
pub use topology::{
    jump_set, lemma1_search, winding_number, ArgumentBranch, CheckMode, Direction, Extension,
    JumpCertificate, JumpSet, PlaneFunction,
};
pub use zak::{
    identity_residuals, inverse_zak, riesz_bounds, zak_transform, zak_transform_padded,
    IdentityResiduals, RieszBounds, ZakArray,
};
