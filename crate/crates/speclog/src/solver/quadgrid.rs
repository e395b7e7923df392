//! Frequency-domain quadrature layout for form-matrix assembly.
//!
//! The bulk integral runs over `[-Xi, Xi]` per axis: uniform
//! oscillation-resolving Gauss panels away from the origin, geometrically
//! graded panels into the origin where the symbol loses smoothness, and an
//! analytic tail beyond the cutoff. The tail of a 1d entry expands the
//! resonance denominators into a power series and integrates each term in
//! closed form, with the oscillatory parts handled by integration by parts.

use super::basis::GalerkinBasis;
use super::{SolverError, SymbolKind};
use crate::coremath::SpectralParams;
use serde::{Deserialize, Serialize};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Gate from the quadrature invariant: the estimated neglected tail must
/// stay below this fraction of the diagonal magnitude.
const TAIL_GATE: f64 = 1e-8;

/// Quadrature parameters. Zero-valued fields mean "derive a default from
/// the basis" (see [`QuadratureConfig::auto_for`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Bulk cutoff `Xi`; must strictly exceed every basis resonance.
    pub cutoff_radius: f64,
    /// Budget of bulk quadrature nodes per axis (16 per panel).
    pub points_per_axis: u32,
    /// Number of series terms in the analytic tail (1d assembly only).
    pub tail_order: u32,
    /// Relative width of the series branch around each resonance.
    pub singularity_guard: f64,
}

impl QuadratureConfig {
    /// Defaults sized for the given basis: cutoff at 2.5x the largest
    /// resonance (plus slack for small bases), panels resolving a quarter
    /// oscillation period of the longest side, six tail terms.
    pub fn auto_for(basis: &GalerkinBasis) -> Self {
        let cutoff = 2.5 * basis.max_resonance() + 40.0;
        let max_len = basis.lengths().iter().cloned().fold(0.0, f64::max);
        let delta0 = origin_scale(cutoff);
        let panels = ((cutoff - delta0) * 2.0 * max_len / std::f64::consts::PI).ceil() as u32 + 4;
        Self {
            cutoff_radius: cutoff,
            points_per_axis: 16 * panels,
            tail_order: 6,
            singularity_guard: super::basis::DEFAULT_SINGULARITY_GUARD,
        }
    }

    /// Provenance string baked into matrix digests.
    pub fn description(&self) -> String {
        format!(
            "bulk=[{:016x}] points={} tail_order={} guard=[{:016x}]",
            self.cutoff_radius.to_bits(),
            self.points_per_axis,
            self.tail_order,
            self.singularity_guard.to_bits()
        )
    }

    /// Check the grid invariants against a basis/symbol pair and expand the
    /// node lists. Rejections name the failing invariant.
    pub(crate) fn validate(
        &self,
        basis: &GalerkinBasis,
        params: SpectralParams,
        symbol: SymbolKind,
    ) -> Result<ValidatedGrid, SolverError> {
        if !(self.cutoff_radius.is_finite() && self.cutoff_radius > 0.0) {
            return Err(SolverError::BadQuadratureField("cutoff_radius"));
        }
        if self.points_per_axis == 0 {
            return Err(SolverError::BadQuadratureField("points_per_axis"));
        }
        if !(self.singularity_guard > 0.0 && self.singularity_guard < 1e-1) {
            return Err(SolverError::BadQuadratureField("singularity_guard"));
        }
        let resonance = basis.max_resonance();
        if self.cutoff_radius <= resonance {
            return Err(SolverError::CutoffBelowResonance {
                cutoff: self.cutoff_radius,
                resonance,
            });
        }

        // Tail gate: worst entry is the pair of largest resonances. In 2d no
        // analytic tail is applied, so the estimate is the full envelope.
        let apply_tail = basis.dimension() == 1;
        let scale = diagonal_scale(basis, params, symbol);
        let mut worst = 0.0f64;
        for axis in 0..basis.dimension() {
            let omega = basis.resonance(axis, basis.max_index_per_axis());
            let parity = parity_of(basis.max_index_per_axis());
            let (_, residual) = tail_pair(
                params,
                symbol,
                basis.lengths()[axis],
                omega,
                omega,
                parity,
                parity,
                self.cutoff_radius,
                if apply_tail { self.tail_order } else { 0 },
            );
            worst = worst.max(residual.abs());
        }
        let allowed = TAIL_GATE * scale;
        if worst > allowed {
            return Err(SolverError::TailTooLarge {
                estimate: worst,
                allowed,
            });
        }

        let axes = basis
            .lengths()
            .iter()
            .map(|_| positive_axis_nodes(self.cutoff_radius, self.points_per_axis))
            .collect();
        Ok(ValidatedGrid { axes })
    }
}

/// Estimate of the largest diagonal magnitude, used to normalise the tail
/// gate: the symbol evaluated on the basis resonances, floored at one.
fn diagonal_scale(basis: &GalerkinBasis, params: SpectralParams, symbol: SymbolKind) -> f64 {
    let mut scale = 0.0f64;
    for i in 0..basis.size() {
        let idx = basis.multi_index(i);
        let mut norm_sq = 0.0;
        for (axis, &j) in idx.iter().enumerate() {
            let w = basis.resonance(axis, j);
            norm_sq += w * w;
        }
        scale = scale.max(symbol.value(norm_sq.sqrt(), params).abs());
    }
    scale.max(1.0)
}

pub(crate) fn parity_of(index: u32) -> f64 {
    if index.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Positive-frequency quadrature nodes for one axis, ascending.
#[derive(Debug, Clone)]
pub(crate) struct AxisNodes {
    pub xi: Vec<f64>,
    pub weight: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct ValidatedGrid {
    pub axes: Vec<AxisNodes>,
}

fn origin_scale(cutoff: f64) -> f64 {
    (cutoff / 8.0).min(0.5)
}

/// Panels on `(0, Xi]`: 52 geometric halvings below `delta0` resolve the
/// origin (where the symbol has unbounded derivatives), then a uniform run
/// of `points / 16` panels to the cutoff. The remaining sliver
/// `(0, delta0 * 2^-52)` carries symbol mass below 1e-15 of any entry and
/// is dropped.
fn positive_axis_nodes(cutoff: f64, points: u32) -> AxisNodes {
    let delta0 = origin_scale(cutoff);
    let mut xi = Vec::new();
    let mut weight = Vec::new();
    let mut push_panel = |lo: f64, hi: f64| {
        for (x, w) in crate::numeric::gauss_legendre_16(lo, hi) {
            xi.push(x);
            weight.push(w);
        }
    };
    for m in (0..52u32).rev() {
        let hi = delta0 * (0.5f64).powi(m as i32);
        push_panel(hi * 0.5, hi);
    }
    let base_panels = (points / 16).max(4) as usize;
    let step = (cutoff - delta0) / base_panels as f64;
    for p in 0..base_panels {
        push_panel(delta0 + p as f64 * step, delta0 + (p + 1) as f64 * step);
    }
    AxisNodes { xi, weight }
}

/// `int_Xi^inf t^a dt` resp. `int_Xi^inf t^a ln t^2 dt` for `a < -1`.
fn tail_power_integral(a: f64, cutoff: f64, has_log: bool) -> f64 {
    let ap1 = a + 1.0;
    if has_log {
        -cutoff.powf(ap1) * (2.0 * cutoff.ln() / ap1 - 2.0 / (ap1 * ap1))
    } else {
        -cutoff.powf(ap1) / ap1
    }
}

fn tail_f(a: f64, t: f64, has_log: bool) -> f64 {
    if has_log {
        t.powf(a) * 2.0 * t.ln()
    } else {
        t.powf(a)
    }
}

fn tail_f_prime(a: f64, t: f64, has_log: bool) -> f64 {
    if has_log {
        t.powf(a - 1.0) * (2.0 * a * t.ln() + 2.0)
    } else {
        a * t.powf(a - 1.0)
    }
}

fn tail_f_second(a: f64, t: f64, has_log: bool) -> f64 {
    if has_log {
        t.powf(a - 2.0) * (2.0 * a * (a - 1.0) * t.ln() + 4.0 * a - 2.0)
    } else {
        a * (a - 1.0) * t.powf(a - 2.0)
    }
}

fn tail_f_third(a: f64, t: f64, has_log: bool) -> f64 {
    if has_log {
        t.powf(a - 3.0) * (2.0 * a * (a - 1.0) * (a - 2.0) * t.ln() + 6.0 * a * a - 12.0 * a + 4.0)
    } else {
        a * (a - 1.0) * (a - 2.0) * t.powf(a - 3.0)
    }
}

/// Three-term integration by parts for `int_Xi^inf f(t) cos(Lt) dt`
/// together with an estimate of the dropped remainder (the magnitude of
/// the next term, doubled).
fn tail_osc_integral(a: f64, length: f64, cutoff: f64, has_log: bool) -> (f64, f64) {
    let phase = length * cutoff;
    let value = -tail_f(a, cutoff, has_log) * phase.sin() / length
        - tail_f_prime(a, cutoff, has_log) * phase.cos() / length.powi(2)
        + tail_f_second(a, cutoff, has_log) * phase.sin() / length.powi(3);
    let residual = 2.0 * tail_f_third(a, cutoff, has_log).abs() / length.powi(4);
    (value, residual)
}

/// Analytic tail of the 1d entry `(omega_j, omega_k)` beyond the cutoff,
/// returning `(correction, neglected-residual estimate)`.
///
/// With `tail_order = 0` nothing is applied and the residual estimate is
/// the magnitude of the whole tail.
#[allow(clippy::too_many_arguments)]
pub(crate) fn tail_pair(
    params: SpectralParams,
    symbol: SymbolKind,
    length: f64,
    omega_j: f64,
    omega_k: f64,
    parity_j: f64,
    parity_k: f64,
    cutoff: f64,
    tail_order: u32,
) -> (f64, f64) {
    let sum_parity = parity_j + parity_k;
    let prod_parity = parity_j * parity_k;
    if prod_parity < 0.0 {
        // Opposite parity: the tail integrand is odd, the entry tail is zero.
        return (0.0, 0.0);
    }
    let sigma = symbol.exponent(params);
    let has_log = symbol.has_log();
    let prefac = omega_j * omega_k * 2.0 / (length * TAU);
    let u = (omega_j.max(omega_k) / cutoff).powi(2);
    let geometric_slack = 1.0 / (1.0 - u);

    let series_coefficient = |p: u32| -> f64 {
        let mut c = 0.0;
        for i in 0..=p {
            c += omega_j.powi(2 * i as i32) * omega_k.powi(2 * (p - i) as i32);
        }
        c
    };

    let mut correction = 0.0;
    let mut residual = 0.0;
    for p in 0..tail_order {
        let a = sigma - 4.0 - 2.0 * p as f64;
        let c_p = series_coefficient(p);
        let pow = tail_power_integral(a, cutoff, has_log);
        let (osc, osc_res) = tail_osc_integral(a, length, cutoff, has_log);
        correction += prefac * c_p * ((1.0 + prod_parity) * 2.0 * pow - sum_parity * 2.0 * osc);
        residual += prefac * c_p * sum_parity.abs() * 2.0 * osc_res;
    }
    // Truncation of the denominator series: bound the next term and sum the
    // geometric remainder.
    let p_next = tail_order;
    let a_next = sigma - 4.0 - 2.0 * p_next as f64;
    let c_next = series_coefficient(p_next);
    let pow_next = tail_power_integral(a_next, cutoff, has_log).abs();
    let osc_next = tail_f(a_next, cutoff, has_log).abs() / length;
    residual += prefac
        * c_next
        * geometric_slack
        * ((1.0 + prod_parity) * 2.0 * pow_next + sum_parity.abs() * 2.0 * osc_next);
    (correction, residual)
}
