//! Galerkin discretisation of Fourier-multiplier operators in the
//! zero-extended sine basis on boxes.
//!
//! The quadratic form `int m(|xi|) |u^(xi)|^2 dxi` is assembled from
//! closed-form basis transforms by panel quadrature on `[-Xi, Xi]` plus
//! analytic tail corrections, then solved as a dense symmetric
//! eigenproblem. The module also houses the binary matrix cache and the
//! cutoff plane-wave probe.

mod assemble;
mod basis;
mod cache;
mod probe;
mod quadgrid;

pub use assemble::{
    assemble_form_matrix, central_difference_matrix, derivative_oracle_check, matrix_digest,
    max_relative_difference, FormMatrix,
};
pub use basis::{basis_transform_1d, basis_transform_1d_guarded, GalerkinBasis};
pub use cache::{read_matrix_entries, write_matrix};
pub use probe::{
    cutoff_planewave_energy, positivity_radius as probe_positivity_radius, ProbeEnergy,
};
pub use quadgrid::QuadratureConfig;

use crate::bounds::BoundsError;
use crate::coremath::{CoreError, SpectralParams};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("the Galerkin basis requires a box domain with side lengths")]
    BasisNeedsBox,
    #[error("dimension {0} is not supported by the solver (n <= 2 only)")]
    DimensionTooHigh(u32),
    #[error("basis index bound must be at least 1")]
    EmptyBasis,
    #[error("fractional order {0} must lie in [0, 1]")]
    BadFractionalOrder(f64),
    #[error("quadrature invariant `cutoff radius exceeds resonances` violated: Xi = {cutoff} <= max resonance {resonance}")]
    CutoffBelowResonance { cutoff: f64, resonance: f64 },
    #[error("quadrature invariant `tail below tolerance` violated: estimated neglected tail {estimate:.3e} exceeds {allowed:.3e}")]
    TailTooLarge { estimate: f64, allowed: f64 },
    #[error("quadrature invariant `positive resolution` violated: {0}")]
    BadQuadratureField(&'static str),
    #[error("assembled entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("imaginary residual {residual:.3e} exceeds 1e-10 of the entry scale; the quadrature grid lost its symmetry")]
    ImaginaryResidual { residual: f64 },
    #[error("symbol tag mismatch: expected {expected}, got {got}")]
    SymbolTagMismatch { expected: String, got: String },
    #[error("matrices were assembled on different bases or quadratures")]
    ProvenanceMismatch,
    #[error("difference step h = {0} must satisfy 0 < h < min(s, 1-s)/2")]
    BadDifferenceStep(f64),
    #[error("probe radius {r} is below the positivity radius {min} of the ball symbol integral")]
    ProbeRadiusTooSmall { r: f64, min: f64 },
    #[error("probe requires a one-dimensional box")]
    ProbeNeedsInterval,
    #[error(
        "transform grid under-resolved: Nyquist {nyquist} is below cutoff + probe radius {needed}"
    )]
    NyquistTooLow { nyquist: f64, needed: f64 },
    #[error("spectrum input contains a non-finite value")]
    NonFiniteSpectrum,
}

/// Which Fourier multiplier the form matrix represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolKind {
    /// `|xi|^(2s) ln |xi|^2` with `s` taken from the spectral parameters.
    FractionalLog,
    /// `|xi|^(2s')` for a caller-chosen order `s'` in `[0, 1]`.
    Fractional { order: f64 },
}

impl SymbolKind {
    pub fn fractional(order: f64) -> Result<Self, SolverError> {
        if !(0.0..=1.0).contains(&order) || !order.is_finite() {
            return Err(SolverError::BadFractionalOrder(order));
        }
        Ok(SymbolKind::Fractional { order })
    }

    /// `2s` resp. `2s'`, the power-law exponent of the multiplier.
    pub fn exponent(&self, params: SpectralParams) -> f64 {
        match self {
            SymbolKind::FractionalLog => 2.0 * params.order(),
            SymbolKind::Fractional { order } => 2.0 * order,
        }
    }

    pub fn has_log(&self) -> bool {
        matches!(self, SymbolKind::FractionalLog)
    }

    /// Multiplier value at radius `r >= 0`; the continuous extension 0 is
    /// used at the origin for the logarithmic symbol.
    pub fn value(&self, r: f64, params: SpectralParams) -> f64 {
        match self {
            SymbolKind::FractionalLog => {
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(2.0 * params.order()) * (r * r).ln()
                }
            }
            SymbolKind::Fractional { order } => r.powf(2.0 * order),
        }
    }

    pub fn tag_byte(&self) -> u8 {
        match self {
            SymbolKind::FractionalLog => 0,
            SymbolKind::Fractional { .. } => 1,
        }
    }
}

impl std::fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolKind::FractionalLog => f.write_str("fractional-log"),
            SymbolKind::Fractional { order } => write!(f, "fractional({order})"),
        }
    }
}

/// Ascending Ritz values of a form matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    basis_size: usize,
    params: SpectralParams,
    lengths: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Lower half of the Ritz values; the upper half is treated as
    /// discretisation-polluted and excluded from reports.
    pub fn resolved(&self) -> &[f64] {
        &self.eigenvalues[..self.basis_size / 2]
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    pub fn params(&self) -> SpectralParams {
        self.params
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Sum of the first `k` Ritz values.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.eigenvalues[..k].iter().sum()
    }
}

/// Eigenvalues of the dense symmetric form matrix, ascending.
///
/// The sine basis is orthonormal, so the mass matrix is the identity and a
/// plain symmetric eigendecomposition applies.
pub fn solve_spectrum(matrix: &FormMatrix) -> Result<Spectrum, SolverError> {
    let n = matrix.size();
    let mut data = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let v = matrix.get(j, k);
            if !v.is_finite() {
                return Err(SolverError::NonFiniteEntry { row: j, col: k });
            }
            data[(j, k)] = v;
        }
    }
    let mut eigenvalues: Vec<f64> = data.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum {
        eigenvalues,
        basis_size: n,
        params: matrix.params(),
        lengths: matrix.lengths().to_vec(),
    })
}
