//! Evaluators for the eigenvalue-sum estimates: the two-regime lower
//! bound, its leading/correction split, positivity thresholds, the
//! Weyl-type laws with logarithmic corrections, the leading-order upper
//! bound and an empirical estimator for its constant.

use crate::coremath::SpectralParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("domain volume {0} must be positive")]
    BadVolume(f64),
    #[error("box side {0} must be positive")]
    BadSideLength(f64),
    #[error("volume {volume} does not match the box side product {product}")]
    VolumeMismatch { volume: f64, product: f64 },
    #[error("geometry dimension {geom} does not match parameter dimension {params}")]
    DimensionMismatch { geom: u32, params: u32 },
    #[error("rank k = {0} must be at least 2 for the asymptotic laws")]
    RankTooSmall(u64),
    #[error("rank k = {k} is not above the positivity threshold {threshold}")]
    RankBelowThreshold { k: u64, threshold: f64 },
    #[error("boundary layer constants (C_Omega, t0) are required but missing")]
    MissingLayerConstants,
    #[error("upper-bound constant {0} must be nonnegative")]
    NegativeConstant(f64),
    #[error("spectrum needs at least {needed} entries, got {got}")]
    SpectrumTooShort { needed: usize, got: usize },
    #[error("spectrum must be sorted ascending (violated at index {0})")]
    SpectrumUnsorted(usize),
    #[error("spectrum contains a non-finite entry at index {0}")]
    SpectrumNotFinite(usize),
    #[error("no admissible rank above the positivity threshold {0}")]
    NoAdmissibleRank(f64),
}

/// Geometry of the domain: volume, optional box sides, and the boundary
/// layer constants `(C_Omega, t0)` with `|Omega_t| <= C_Omega t` for
/// `t <= t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainGeometry {
    n: u32,
    volume: f64,
    box_lengths: Option<Vec<f64>>,
    layer_constant: Option<f64>,
    layer_max_width: Option<f64>,
}

impl DomainGeometry {
    /// Geometry known only through its volume.
    pub fn with_volume(n: u32, volume: f64) -> Result<Self, BoundsError> {
        if volume <= 0.0 || !volume.is_finite() {
            return Err(BoundsError::BadVolume(volume));
        }
        if n == 0 {
            return Err(BoundsError::DimensionMismatch { geom: 0, params: 0 });
        }
        Ok(Self {
            n,
            volume,
            box_lengths: None,
            layer_constant: None,
            layer_max_width: None,
        })
    }

    /// Box anchored at the origin with the given side lengths. The layer
    /// constants default to the exact inner-parallel-body values for boxes:
    /// `C_Omega = 2 sum_i |Omega| / L_i` and `t0 = (min L_i) / 2`.
    pub fn from_box(lengths: &[f64]) -> Result<Self, BoundsError> {
        if lengths.is_empty() {
            return Err(BoundsError::DimensionMismatch { geom: 0, params: 0 });
        }
        let mut volume = 1.0;
        let mut min_len = f64::INFINITY;
        for &l in lengths {
            if l <= 0.0 || !l.is_finite() {
                return Err(BoundsError::BadSideLength(l));
            }
            volume *= l;
            min_len = min_len.min(l);
        }
        let layer_constant = 2.0 * lengths.iter().map(|l| volume / l).sum::<f64>();
        Ok(Self {
            n: lengths.len() as u32,
            volume,
            box_lengths: Some(lengths.to_vec()),
            layer_constant: Some(layer_constant),
            layer_max_width: Some(0.5 * min_len),
        })
    }

    /// Checks volume/box consistency to relative tolerance 1e-12.
    pub fn validate(&self) -> Result<(), BoundsError> {
        if let Some(lengths) = &self.box_lengths {
            let product: f64 = lengths.iter().product();
            if (product - self.volume).abs() > 1e-12 * self.volume.abs() {
                return Err(BoundsError::VolumeMismatch {
                    volume: self.volume,
                    product,
                });
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn box_lengths(&self) -> Option<&[f64]> {
        self.box_lengths.as_deref()
    }

    pub fn layer_constant(&self) -> Option<f64> {
        self.layer_constant
    }

    pub fn layer_max_width(&self) -> Option<f64> {
        self.layer_max_width
    }

    /// Exact boundary layer volume `|Omega_t|` for boxes.
    pub fn boundary_layer_volume(&self, t: f64) -> Option<f64> {
        let lengths = self.box_lengths.as_ref()?;
        let inner: f64 = lengths.iter().map(|l| (l - 2.0 * t).max(0.0)).product();
        Some(self.volume - inner)
    }

    fn check_params(&self, params: SpectralParams) -> Result<(), BoundsError> {
        if self.n != params.dimension() {
            return Err(BoundsError::DimensionMismatch {
                geom: self.n,
                params: params.dimension(),
            });
        }
        Ok(())
    }
}

/// Which branch of the lower bound applies at a given rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `k` below the phase-space threshold: the volume-proportional bound.
    Universal,
    /// `k` at or above the threshold: the sharp leading-order bound.
    Main,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Universal => f.write_str("universal"),
            Regime::Main => f.write_str("main"),
        }
    }
}

/// Per-rank record assembled by the harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: u64,
    pub lower_bound: f64,
    pub regime: Regime,
    pub upper_leading: Option<f64>,
    pub weyl_k: Option<f64>,
    pub weyl_sum: Option<f64>,
    pub computed_sum: Option<f64>,
}

/// `(2/(n+2s)) (2pi)^(2s) (omega_n |Omega|)^(-2s/n)`, the prefactor shared
/// by the lower bound, the upper bound and the sum asymptotics.
pub fn sum_prefactor(params: SpectralParams, geom: &DomainGeometry) -> f64 {
    2.0 / params.exponent()
        * TAU.powf(2.0 * params.order())
        * (params.unit_ball() * geom.volume()).powf(-params.growth_ratio())
}

/// Phase-space threshold `(2pi)^(-n) omega_n |Omega|` separating the two
/// regimes of the lower bound.
pub fn regime_threshold(params: SpectralParams, geom: &DomainGeometry) -> f64 {
    TAU.powi(-(params.dimension() as i32)) * params.unit_ball() * geom.volume()
}

/// Lower bound on the sum of the first `k` Dirichlet eigenvalues.
///
/// Above the phase-space threshold the sharp bound
/// `prefactor * k^(1+2s/n) ( ln((2pi)^n k / (omega_n |Omega|)) - n/(n+2s) )`
/// applies; below it the universal bound
/// `-(2pi)^(-n) * 2 n omega_n / (n+2s)^2 * |Omega|` is reported instead,
/// which holds for every rank.
pub fn lower_bound_sum(
    params: SpectralParams,
    geom: &DomainGeometry,
    k: u64,
) -> Result<(f64, Regime), BoundsError> {
    geom.check_params(params)?;
    if k == 0 {
        return Err(BoundsError::RankTooSmall(0));
    }
    let threshold = regime_threshold(params, geom);
    let kf = k as f64;
    if kf >= threshold {
        let n = params.dimension() as f64;
        let e = params.exponent();
        let log_arg = TAU.powf(n) * kf / (params.unit_ball() * geom.volume());
        let value = sum_prefactor(params, geom)
            * kf.powf(1.0 + params.growth_ratio())
            * (log_arg.ln() - n / e);
        Ok((value, Regime::Main))
    } else {
        let n = params.dimension() as f64;
        let e = params.exponent();
        let value = -TAU.powf(-n) * 2.0 * n * params.unit_ball() / (e * e) * geom.volume();
        Ok((value, Regime::Universal))
    }
}

/// Leading/correction split of the main lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitBound {
    /// `prefactor * k^(1+2s/n) ln k`.
    pub leading: f64,
    /// `prefactor * ( ln((2pi)^n/(omega_n |Omega|)) - n/(n+2s) ) * k^(1+2s/n)`.
    pub correction: f64,
}

/// Split the main lower bound into its leading `ln k` term and the
/// rank-power correction; their sum reproduces [`lower_bound_sum`] exactly.
/// Requires `k >= 2` so the leading term is meaningful.
pub fn lower_bound_split(
    params: SpectralParams,
    geom: &DomainGeometry,
    k: u64,
) -> Result<SplitBound, BoundsError> {
    geom.check_params(params)?;
    if k < 2 {
        return Err(BoundsError::RankTooSmall(k));
    }
    let n = params.dimension() as f64;
    let e = params.exponent();
    let kf = k as f64;
    let power = kf.powf(1.0 + params.growth_ratio());
    let prefactor = sum_prefactor(params, geom);
    let leading = prefactor * power * kf.ln();
    let shift = (TAU.powf(n) / (params.unit_ball() * geom.volume())).ln() - n / e;
    Ok(SplitBound {
        leading,
        correction: prefactor * shift * power,
    })
}

/// Smallest real `x` such that eigenvalue sums are strictly positive for
/// every integer rank above `x`:
/// `(omega_n |Omega| / (2pi)^n) exp(n/(n+2s))`.
pub fn positivity_threshold(params: SpectralParams, geom: &DomainGeometry) -> f64 {
    let n = params.dimension() as f64;
    params.unit_ball() * geom.volume() / TAU.powf(n) * (n / params.exponent()).exp()
}

/// Volume below which the first eigenvalue is strictly positive:
/// `(2pi)^n omega_n^(-1) exp(-n/(n+2s))`.
pub fn small_volume_threshold(params: SpectralParams) -> f64 {
    let n = params.dimension() as f64;
    TAU.powf(n) / params.unit_ball() * (-n / params.exponent()).exp()
}

/// Asymptotic law for the k-th eigenvalue:
/// `(2/n) (2pi)^(2s) (omega_n |Omega|)^(-2s/n) k^(2s/n) ln k`, `k >= 2`.
pub fn weyl_eigenvalue(
    params: SpectralParams,
    geom: &DomainGeometry,
    k: u64,
) -> Result<f64, BoundsError> {
    geom.check_params(params)?;
    if k < 2 {
        return Err(BoundsError::RankTooSmall(k));
    }
    let n = params.dimension() as f64;
    let kf = k as f64;
    Ok(2.0 / n
        * TAU.powf(2.0 * params.order())
        * (params.unit_ball() * geom.volume()).powf(-params.growth_ratio())
        * kf.powf(params.growth_ratio())
        * kf.ln())
}

/// Asymptotic law for eigenvalue sums:
/// `(2/(n+2s)) (2pi)^(2s) (omega_n |Omega|)^(-2s/n) k^(1+2s/n) ln k`, `k >= 2`.
pub fn weyl_sum(params: SpectralParams, geom: &DomainGeometry, k: u64) -> Result<f64, BoundsError> {
    geom.check_params(params)?;
    if k < 2 {
        return Err(BoundsError::RankTooSmall(k));
    }
    let kf = k as f64;
    Ok(sum_prefactor(params, geom) * kf.powf(1.0 + params.growth_ratio()) * kf.ln())
}

/// Leading-order upper bound on eigenvalue sums,
/// `weyl-sum leading term + C k^(1+2s/n)`.
///
/// The constant `C` is existential in the underlying theorem and must be
/// supplied by the caller; the rank must lie strictly above the positivity
/// threshold and the geometry must carry boundary layer constants.
pub fn upper_bound_sum(
    params: SpectralParams,
    geom: &DomainGeometry,
    k: u64,
    c: f64,
) -> Result<f64, BoundsError> {
    geom.check_params(params)?;
    if geom.layer_constant().is_none() || geom.layer_max_width().is_none() {
        return Err(BoundsError::MissingLayerConstants);
    }
    if c < 0.0 || !c.is_finite() {
        return Err(BoundsError::NegativeConstant(c));
    }
    let threshold = positivity_threshold(params, geom);
    let kf = k as f64;
    if kf <= threshold {
        return Err(BoundsError::RankBelowThreshold { k, threshold });
    }
    let power = kf.powf(1.0 + params.growth_ratio());
    Ok(sum_prefactor(params, geom) * power * kf.ln() + c * power)
}

/// Empirical constant for the upper bound: the largest residual
/// `(sum_{j<=k} lambda_j - leading(k)) / k^(1+2s/n)` over admissible ranks,
/// floored at zero.
///
/// Admissible ranks run from the first integer strictly above the
/// positivity threshold (and at least 2, where the leading term is defined)
/// up to the spectrum length.
pub fn estimate_upper_constant(
    spectrum: &[f64],
    params: SpectralParams,
    geom: &DomainGeometry,
) -> Result<f64, BoundsError> {
    geom.check_params(params)?;
    if spectrum.len() < 10 {
        return Err(BoundsError::SpectrumTooShort {
            needed: 10,
            got: spectrum.len(),
        });
    }
    for (i, pair) in spectrum.windows(2).enumerate() {
        if !pair[0].is_finite() {
            return Err(BoundsError::SpectrumNotFinite(i));
        }
        if pair[1] < pair[0] {
            return Err(BoundsError::SpectrumUnsorted(i + 1));
        }
    }
    let threshold = positivity_threshold(params, geom);
    let k_min = (threshold.floor() as u64 + 1).max(2);
    if k_min > spectrum.len() as u64 {
        return Err(BoundsError::NoAdmissibleRank(threshold));
    }
    let prefactor = sum_prefactor(params, geom);
    let mut partial: f64 = spectrum[..(k_min as usize - 1)].iter().sum();
    let mut best = 0.0f64;
    for k in k_min..=spectrum.len() as u64 {
        partial += spectrum[k as usize - 1];
        let kf = k as f64;
        let power = kf.powf(1.0 + params.growth_ratio());
        let leading = prefactor * power * kf.ln();
        best = best.max((partial - leading) / power);
    }
    Ok(best.max(0.0))
}
