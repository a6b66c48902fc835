//! Generalized Hilbert tensors `H(a)` with entries `1 / (i_1 + ... + i_m - m + a)`.
//!
//! The crate builds finite and truncated-infinite instances, applies them
//! through their Hankel structure, estimates extreme H- and Z-eigenvalues and
//! checks the closed-form spectral-radius, operator-norm and
//! positive-definiteness bounds numerically.

pub mod apply;
pub mod convolution;
pub mod definiteness;
pub mod error;
pub mod quadrature;
pub mod sequence;
pub mod spectral;
pub mod tensor;
pub mod vector;

pub use apply::{apply_fast, apply_naive, rayleigh_2, rayleigh_m, ApplyMethod, ApplyResult};
pub use convolution::{self_convolve, ConvolutionProfile};
pub use definiteness::{pd_check, PdRegime, PdReport, PdVerdict};
pub use error::{HilbertError, Result};
pub use quadrature::{quadrature_scalar, QuadratureEstimate};
pub use sequence::{
    apply_f, apply_t, component_bound, estimate_operator_norm, tail_bound, NormEstimate,
    OperatorKind, TailBound, TruncatedOperatorSpec,
};
pub use spectral::{
    check_h_bound, check_z_bound, dense_matrix_eigen, h_spectral_radius, z_spectral_radius,
    BoundCheck, BoundName, BoundReport, EigenEstimate, ZOptions,
};
pub use tensor::{
    constant_c, constant_k, constant_m, constant_n, entry, validate_shift, ConstantsBundle,
    MBranch, MultiIndex, TensorSpec, Warning,
};
pub use vector::DenseVector;
