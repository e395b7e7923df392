//! Form-matrix assembly: Galerkin matrix of `int m(|xi|) u^ conj(v^) dxi`
//! in the sine basis, by bulk panel quadrature plus analytic tails.
//!
//! Entries are accumulated as complex sums over a mirror-symmetric node
//! set in a fixed order, so results are bitwise reproducible under any
//! thread count; the imaginary parts cancel by symmetry and are asserted
//! below 1e-10 of the entry scale before being dropped.

use super::basis::{basis_transform_1d_guarded, Complex64, GalerkinBasis};
use super::quadgrid::{parity_of, tail_pair, QuadratureConfig, ValidatedGrid};
use super::{SolverError, SymbolKind};
use crate::coremath::SpectralParams;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Dense symmetric Galerkin matrix with its provenance.
#[derive(Debug, Clone)]
pub struct FormMatrix {
    size: usize,
    entries: Vec<f64>,
    error_estimates: Option<Vec<f64>>,
    params: SpectralParams,
    symbol: SymbolKind,
    lengths: Vec<f64>,
    max_index: u32,
    basis_desc: String,
    quad_desc: String,
    digest: [u8; 32],
    max_imag_residual: f64,
}

impl FormMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Upper triangle, row major: the on-disk payload order.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.size * (self.size + 1) / 2);
        for j in 0..self.size {
            for k in j..self.size {
                out.push(self.get(j, k));
            }
        }
        out
    }

    pub fn params(&self) -> SpectralParams {
        self.params
    }

    pub fn symbol(&self) -> SymbolKind {
        self.symbol
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn max_index_per_axis(&self) -> u32 {
        self.max_index
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    pub fn provenance(&self) -> (String, String, String) {
        (
            self.basis_desc.clone(),
            self.quad_desc.clone(),
            self.symbol.to_string(),
        )
    }

    /// Estimated neglected quadrature tail per upper-triangle entry; absent
    /// on matrices loaded from cache.
    pub fn error_estimate(&self, row: usize, col: usize) -> Option<f64> {
        let (j, k) = if row <= col { (row, col) } else { (col, row) };
        self.error_estimates
            .as_ref()
            .map(|e| e[j * self.size - j * (j + 1) / 2 + k])
    }

    pub fn max_error_estimate(&self) -> Option<f64> {
        self.error_estimates
            .as_ref()
            .map(|e| e.iter().cloned().fold(0.0, f64::max))
    }

    /// Largest imaginary residual seen during accumulation, relative to the
    /// entry scale.
    pub fn max_imag_residual(&self) -> f64 {
        self.max_imag_residual
    }

    /// Rebuild a matrix from a cache payload. The digest has already been
    /// matched against the requested basis/quadrature/symbol, which is what
    /// certifies the payload; error estimates are not persisted.
    pub(crate) fn from_cached_triangle(
        triangle: Vec<f64>,
        basis: &GalerkinBasis,
        params: SpectralParams,
        quad: &QuadratureConfig,
        symbol: SymbolKind,
        digest: [u8; 32],
    ) -> Self {
        let size = basis.size();
        let mut entries = vec![0.0; size * size];
        let mut it = triangle.into_iter();
        for j in 0..size {
            for k in j..size {
                let v = it.next().expect("payload length checked by the reader");
                entries[j * size + k] = v;
                entries[k * size + j] = v;
            }
        }
        Self {
            size,
            entries,
            error_estimates: None,
            params,
            symbol,
            lengths: basis.lengths().to_vec(),
            max_index: basis.max_index_per_axis(),
            basis_desc: basis.description(),
            quad_desc: quad.description(),
            digest,
            max_imag_residual: 0.0,
        }
    }
}

/// Digest identifying a (basis, quadrature, parameters, symbol) tuple;
/// the cache key for assembled matrices.
pub fn matrix_digest(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    symbol: SymbolKind,
) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(b"speclog-form-matrix-v1|");
    hasher.update(basis.description().as_bytes());
    hasher.update(b"|");
    hasher.update(quad.description().as_bytes());
    hasher.update(b"|");
    hasher.update(params.dimension().to_le_bytes());
    hasher.update(params.order().to_bits().to_le_bytes());
    hasher.update([symbol.tag_byte()]);
    if let SymbolKind::Fractional { order } = symbol {
        hasher.update(order.to_bits().to_le_bytes());
    }
    hasher.finalize().into()
}

/// Assemble the Galerkin matrix of the multiplier `symbol` on the given
/// basis. Rejects quadrature configurations that violate their invariants;
/// the returned matrix carries per-entry estimates of the neglected tail.
pub fn assemble_form_matrix(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    symbol: SymbolKind,
) -> Result<FormMatrix, SolverError> {
    if basis.dimension() != params.dimension() as usize {
        return Err(SolverError::Bounds(
            crate::bounds::BoundsError::DimensionMismatch {
                geom: basis.dimension() as u32,
                params: params.dimension(),
            },
        ));
    }
    let grid = quad.validate(basis, params, symbol)?;
    let size = basis.size();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|j| (j..size).map(move |k| (j, k)))
        .collect();

    let computed: Vec<(f64, f64, f64)> = match basis.dimension() {
        1 => assemble_1d(basis, params, quad, symbol, &grid, &pairs),
        2 => assemble_2d(basis, params, quad, symbol, &grid, &pairs),
        _ => unreachable!("dimension checked by the basis"),
    };

    let mut entries = vec![0.0; size * size];
    let mut estimates = vec![0.0; pairs.len()];
    let mut max_imag = 0.0f64;
    for (idx, &(j, k)) in pairs.iter().enumerate() {
        let (value, imag, est) = computed[idx];
        if !value.is_finite() {
            return Err(SolverError::NonFiniteEntry { row: j, col: k });
        }
        let rel_imag = imag.abs() / value.abs().max(1.0);
        if rel_imag > 1e-10 {
            return Err(SolverError::ImaginaryResidual { residual: rel_imag });
        }
        max_imag = max_imag.max(rel_imag);
        entries[j * size + k] = value;
        entries[k * size + j] = value;
        estimates[idx] = est;
    }

    Ok(FormMatrix {
        size,
        entries,
        error_estimates: Some(estimates),
        params,
        symbol,
        lengths: basis.lengths().to_vec(),
        max_index: basis.max_index_per_axis(),
        basis_desc: basis.description(),
        quad_desc: quad.description(),
        digest: matrix_digest(basis, params, quad, symbol),
        max_imag_residual: max_imag,
    })
}

/// One-dimensional fast path. Per node the two mirror frequencies are
/// accumulated adjacently; the numerator phases reduce to cosines and
/// sines of `L xi`, shared across entries, and the resonance denominators
/// are precomputed per (mode, node) with a guard mask marking nodes that
/// need the series branch of the transform.
fn assemble_1d(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    symbol: SymbolKind,
    grid: &ValidatedGrid,
    pairs: &[(usize, usize)],
) -> Vec<(f64, f64, f64)> {
    let length = basis.lengths()[0];
    let nodes = &grid.axes[0];
    let q_count = nodes.xi.len();
    let size = basis.size();

    let mut sym_w = vec![0.0f64; q_count];
    let mut cos_l = vec![0.0f64; q_count];
    let mut sin_l = vec![0.0f64; q_count];
    for q in 0..q_count {
        let xi = nodes.xi[q];
        sym_w[q] = symbol.value(xi, params) * nodes.weight[q];
        cos_l[q] = (length * xi).cos();
        sin_l[q] = (length * xi).sin();
    }

    // Reciprocal denominators and guard mask per (mode, node).
    let mut recip = vec![0.0f64; size * q_count];
    let mut guarded = vec![false; size * q_count];
    for j in 0..size {
        let omega = basis.resonance(0, basis.multi_index(j)[0]);
        let gate = quad.singularity_guard * omega * omega;
        for q in 0..q_count {
            let den = (omega - nodes.xi[q]) * (omega + nodes.xi[q]);
            if den.abs() < gate {
                guarded[j * q_count + q] = true;
            } else {
                recip[j * q_count + q] = 1.0 / den;
            }
        }
    }

    pairs
        .par_iter()
        .map(|&(j, k)| {
            let idx_j = basis.multi_index(j)[0];
            let idx_k = basis.multi_index(k)[0];
            let omega_j = basis.resonance(0, idx_j);
            let omega_k = basis.resonance(0, idx_k);
            let p_j = parity_of(idx_j);
            let p_k = parity_of(idx_k);
            let scale = omega_j * omega_k * 2.0 / (length * TAU);
            let const_term = 1.0 + p_j * p_k;
            let cos_coeff = -(p_j + p_k);
            let sin_coeff = p_j - p_k;

            let mut acc_re = 0.0f64;
            let mut acc_im = 0.0f64;
            let mut guard_acc = Complex64::new(0.0, 0.0);
            for q in 0..q_count {
                if guarded[j * q_count + q] || guarded[k * q_count + q] {
                    let xi = nodes.xi[q];
                    for sign in [1.0f64, -1.0] {
                        let xis = sign * xi;
                        let tj =
                            basis_transform_1d_guarded(length, idx_j, xis, quad.singularity_guard);
                        let tk =
                            basis_transform_1d_guarded(length, idx_k, xis, quad.singularity_guard);
                        guard_acc += tj * tk.conj() * sym_w[q];
                    }
                    continue;
                }
                let inv = recip[j * q_count + q] * recip[k * q_count + q];
                let base = sym_w[q] * inv;
                let re_n = const_term + cos_coeff * cos_l[q];
                let im_n = sin_coeff * sin_l[q];
                // mirror frequency: same real part, opposite imaginary part
                acc_re += base * re_n;
                acc_im += base * im_n;
                acc_re += base * re_n;
                acc_im -= base * im_n;
            }
            let (tail, tail_res) = tail_pair(
                params,
                symbol,
                length,
                omega_j,
                omega_k,
                p_j,
                p_k,
                quad.cutoff_radius,
                quad.tail_order,
            );
            let value = scale * acc_re + guard_acc.re + tail;
            let imag = scale * acc_im + guard_acc.im;
            (value, imag, tail_res)
        })
        .collect()
}

/// Two-dimensional path: tensor nodes over the square `[-Xi, Xi]^2` with
/// per-axis transform tables. No analytic tail exists in 2d, so the
/// quadrature gate in `QuadratureConfig::validate` only admits
/// configurations whose whole tail envelope is already negligible.
fn assemble_2d(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    symbol: SymbolKind,
    grid: &ValidatedGrid,
    pairs: &[(usize, usize)],
) -> Vec<(f64, f64, f64)> {
    // Full mirrored node lists per axis, mirrors adjacent.
    let mut axes_nodes: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for axis in &grid.axes {
        let mut xi = Vec::with_capacity(2 * axis.xi.len());
        let mut w = Vec::with_capacity(2 * axis.xi.len());
        for q in 0..axis.xi.len() {
            xi.push(axis.xi[q]);
            w.push(axis.weight[q]);
            xi.push(-axis.xi[q]);
            w.push(axis.weight[q]);
        }
        axes_nodes.push((xi, w));
    }

    // Transform tables per axis and 1d index.
    let tables: Vec<Vec<Vec<Complex64>>> = (0..2)
        .map(|axis| {
            let (xi, _) = &axes_nodes[axis];
            (1..=basis.max_index_per_axis())
                .map(|j| {
                    xi.iter()
                        .map(|&x| {
                            basis_transform_1d_guarded(
                                basis.lengths()[axis],
                                j,
                                x,
                                quad.singularity_guard,
                            )
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let envelope = worst_tail_envelope(basis, params, quad, symbol);

    pairs
        .par_iter()
        .map(|&(j, k)| {
            let jd = basis.multi_index(j);
            let kd = basis.multi_index(k);
            let t1j = &tables[0][jd[0] as usize - 1];
            let t2j = &tables[1][jd[1] as usize - 1];
            let t1k = &tables[0][kd[0] as usize - 1];
            let t2k = &tables[1][kd[1] as usize - 1];
            let (x1, w1) = &axes_nodes[0];
            let (x2, w2) = &axes_nodes[1];
            let mut acc = Complex64::new(0.0, 0.0);
            for q1 in 0..x1.len() {
                let f1 = t1j[q1] * t1k[q1].conj() * w1[q1];
                let xi1_sq = x1[q1] * x1[q1];
                for q2 in 0..x2.len() {
                    let r = (xi1_sq + x2[q2] * x2[q2]).sqrt();
                    let m = symbol.value(r, params);
                    acc += f1 * t2j[q2] * t2k[q2].conj() * (m * w2[q2]);
                }
            }
            (acc.re, acc.im, envelope)
        })
        .collect()
}

fn worst_tail_envelope(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    symbol: SymbolKind,
) -> f64 {
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
            quad.cutoff_radius,
            0,
        );
        worst = worst.max(residual.abs());
    }
    worst
}

/// Entrywise central difference `(plus - minus) / (2h)` of two fractional
/// form matrices. Both inputs must carry the fractional tag and share the
/// basis and quadrature provenance.
pub fn central_difference_matrix(
    plus: &FormMatrix,
    minus: &FormMatrix,
    h: f64,
) -> Result<Vec<f64>, SolverError> {
    for m in [plus, minus] {
        if !matches!(m.symbol(), SymbolKind::Fractional { .. }) {
            return Err(SolverError::SymbolTagMismatch {
                expected: "fractional(s')".into(),
                got: m.symbol().to_string(),
            });
        }
    }
    if plus.size != minus.size
        || plus.basis_desc != minus.basis_desc
        || plus.quad_desc != minus.quad_desc
    {
        return Err(SolverError::ProvenanceMismatch);
    }
    if h <= 0.0 || !h.is_finite() {
        return Err(SolverError::BadDifferenceStep(h));
    }
    Ok(plus
        .entries
        .iter()
        .zip(&minus.entries)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect())
}

/// Largest entrywise deviation `|diff - log| / max(1, |log|)` between a
/// differenced fractional family and the logarithmic-symbol matrix.
pub fn max_relative_difference(diff: &[f64], log: &FormMatrix) -> Result<f64, SolverError> {
    if !matches!(log.symbol(), SymbolKind::FractionalLog) {
        return Err(SolverError::SymbolTagMismatch {
            expected: "fractional-log".into(),
            got: log.symbol().to_string(),
        });
    }
    if diff.len() != log.entries.len() {
        return Err(SolverError::ProvenanceMismatch);
    }
    Ok(diff
        .iter()
        .zip(&log.entries)
        .map(|(d, l)| (d - l).abs() / l.abs().max(1.0))
        .fold(0.0, f64::max))
}

/// Assemble fractional matrices at orders `s - h` and `s + h`, difference
/// them, and compare against the fractional-log matrix: the multiplier
/// identity `d/ds' |xi|^(2s') = |xi|^(2s') ln |xi|^2` makes the central
/// difference an independent oracle for the assembled operator.
pub fn derivative_oracle_check(
    basis: &GalerkinBasis,
    params: SpectralParams,
    quad: &QuadratureConfig,
    h: f64,
) -> Result<f64, SolverError> {
    let s = params.order();
    if !(h > 0.0 && h < s.min(1.0 - s) / 2.0) {
        return Err(SolverError::BadDifferenceStep(h));
    }
    let plus = assemble_form_matrix(basis, params, quad, SymbolKind::fractional(s + h)?)?;
    let minus = assemble_form_matrix(basis, params, quad, SymbolKind::fractional(s - h)?)?;
    let log = assemble_form_matrix(basis, params, quad, SymbolKind::FractionalLog)?;
    let diff = central_difference_matrix(&plus, &minus, h)?;
    max_relative_difference(&diff, &log)
}
