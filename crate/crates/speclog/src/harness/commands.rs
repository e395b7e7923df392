//! The table-producing commands: bound tables, Galerkin solves with the
//! binary matrix cache, Karamata ratio tables and the cutoff probe sweep.

use super::csvfmt::{fmt_f64, fmt_opt, write_csv};
use super::{io_err, ExperimentConfig, HarnessError};
use crate::bounds::{
    lower_bound_sum, positivity_threshold, upper_bound_sum, weyl_eigenvalue, weyl_sum,
};
use crate::coremath::{ball_symbol_integral, karamata_sum_ratio, CutoffProfile};
use crate::numeric::log_log_slope;
use crate::solver::{
    assemble_form_matrix, cutoff_planewave_energy, matrix_digest, read_matrix_entries,
    solve_spectrum, write_matrix, FormMatrix,
};
use std::path::PathBuf;

/// Emit `bounds.csv`: per-rank lower bound with its regime, the asymptotic
/// laws and the upper-bound leading term.
pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<PathBuf, HarnessError> {
    cfg.validate()?;
    cfg.prepare_output()?;
    let params = cfg.params()?;
    let geom = cfg.geometry()?;
    let threshold = positivity_threshold(params, &geom);

    let mut rows = Vec::with_capacity(cfg.k_max as usize);
    for k in 1..=cfg.k_max as u64 {
        let (lower, regime) = lower_bound_sum(params, &geom, k)?;
        let weyl_k = if k >= 2 {
            Some(weyl_eigenvalue(params, &geom, k)?)
        } else {
            None
        };
        let weyl_s = if k >= 2 {
            Some(weyl_sum(params, &geom, k)?)
        } else {
            None
        };
        let upper = if k as f64 > threshold
            && geom.layer_constant().is_some()
            && geom.layer_max_width().is_some()
        {
            Some(upper_bound_sum(params, &geom, k, 0.0)?)
        } else {
            None
        };
        rows.push(format!(
            "{k},{},{regime},{},{},{},{}",
            fmt_f64(lower),
            fmt_opt(weyl_k),
            fmt_opt(weyl_s),
            fmt_opt(upper),
            fmt_f64(threshold)
        ));
    }
    let path = cfg.output_dir.join("bounds.csv");
    write_csv(
        &path,
        "k,lower_bound,regime,weyl_k,weyl_sum,upper_leading,positivity_threshold",
        &rows,
    )?;
    Ok(path)
}

/// Assemble (or load from cache), solve, and write the ascending
/// eigenvalues. Returns the spectrum path.
pub fn cmd_solve(cfg: &ExperimentConfig) -> Result<PathBuf, HarnessError> {
    cfg.validate()?;
    cfg.prepare_output()?;
    let params = cfg.params()?;
    let basis = cfg.basis()?;
    let quad = cfg.quadrature(&basis);
    let symbol = cfg.symbol_kind()?;

    let digest = matrix_digest(&basis, params, &quad, symbol);
    let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
    let cache_path = cfg.output_dir.join(format!("matrix_{hex}.slfm"));

    let matrix = match read_matrix_entries(&cache_path, &digest, basis.size(), symbol)
        .map_err(|e| io_err(&cache_path, e))?
    {
        Some(triangle) => {
            log::info!("cache hit: reusing {}", cache_path.display());
            println!("cache hit: reusing {}", cache_path.display());
            FormMatrix::from_cached_triangle(triangle, &basis, params, &quad, symbol, digest)
        }
        None => {
            let m = assemble_form_matrix(&basis, params, &quad, symbol)?;
            write_matrix(&cache_path, &m).map_err(|e| io_err(&cache_path, e))?;
            m
        }
    };

    let spectrum = solve_spectrum(&matrix)?;
    let rows: Vec<String> = spectrum
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, ev)| format!("{},{}", i + 1, fmt_f64(*ev)))
        .collect();
    let path = cfg.output_dir.join("spectrum.csv");
    write_csv(&path, "index,value", &rows)?;
    Ok(path)
}

/// Karamata ratio table plus the Weyl-sum consistency column.
pub fn cmd_asymptotics(cfg: &ExperimentConfig) -> Result<PathBuf, HarnessError> {
    cfg.validate()?;
    cfg.prepare_output()?;
    let params = cfg.params()?;
    let geom = cfg.geometry()?;

    let mut rows = Vec::new();
    for &k in &[1_000u64, 10_000, 100_000, 1_000_000] {
        let ratio = karamata_sum_ratio(2.0, 1.0, k)?;
        let bound = 1.2 / (k as f64).ln();
        let mut acc = 0.0;
        for j in 2..=k {
            acc += weyl_eigenvalue(params, &geom, j)?;
        }
        let consistency = acc / weyl_sum(params, &geom, k)?;
        rows.push(format!(
            "{k},{},{},{}",
            fmt_f64(ratio),
            fmt_f64(bound),
            fmt_f64(consistency)
        ));
    }
    let path = cfg.output_dir.join("asymptotics.csv");
    write_csv(
        &path,
        "k,karamata_ratio,karamata_bound,weyl_sum_consistency",
        &rows,
    )?;
    Ok(path)
}

/// Cutoff probe sweep over radius and layer-width lists, plus a log-log
/// regression summary of the remainder scaling.
pub fn cmd_cutoff(
    cfg: &ExperimentConfig,
    r_list: &[f64],
    sigma_list: &[f64],
) -> Result<(PathBuf, PathBuf), HarnessError> {
    cfg.validate()?;
    cfg.prepare_output()?;
    let params = cfg.params()?;
    let geom = cfg.geometry()?;
    if params.dimension() != 1 {
        return Err(HarnessError::Config(
            "the cutoff probe is one-dimensional".into(),
        ));
    }
    if r_list.is_empty() || sigma_list.is_empty() {
        return Err(HarnessError::Config(
            "r and sigma lists must be nonempty".into(),
        ));
    }
    let min_r = crate::solver::probe_positivity_radius(params);
    for &r in r_list {
        if r < min_r {
            return Err(HarnessError::Config(format!(
                "r = {r} is below the positivity radius {min_r}"
            )));
        }
    }
    let length = geom
        .box_lengths()
        .ok_or_else(|| HarnessError::Config("the cutoff probe needs a box".into()))?[0];
    for &sigma in sigma_list {
        if !(sigma > 0.0 && sigma < 0.5 * length) {
            return Err(HarnessError::Config(format!(
                "sigma = {sigma} must lie in (0, {})",
                0.5 * length
            )));
        }
    }

    let basis = cfg.basis()?;
    let quad = cfg.quadrature(&basis);
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for &sigma in sigma_list {
        let profile = CutoffProfile::new(sigma)?;
        let sq_mass = profile.squared_mass_1d(length)?;
        for &r in r_list {
            let energy = cutoff_planewave_energy(&profile, &geom, params, r, &quad)?;
            let identity = energy.main_term / (ball_symbol_integral(params, r)? * sq_mass);
            rows.push(format!(
                "{},{},{},{},{},{}",
                fmt_f64(r),
                fmt_f64(sigma),
                fmt_f64(energy.lhs),
                fmt_f64(energy.main_term),
                fmt_f64(energy.remainder),
                fmt_f64(identity)
            ));
            table.push((r, sigma, energy.remainder));
        }
    }
    let probe_path = cfg.output_dir.join("cutoff_probe.csv");
    write_csv(
        &probe_path,
        "r,sigma,lhs,main_term,remainder,identity_ratio",
        &rows,
    )?;

    let mut fit_rows = Vec::new();
    for &sigma in sigma_list {
        let pts: Vec<(f64, f64)> = table
            .iter()
            .filter(|(_, s, _)| *s == sigma)
            .map(|(r, _, rem)| (*r, *rem))
            .collect();
        if let Some(slope) = log_log_slope(&pts) {
            fit_rows.push(format!("r,{},{}", fmt_f64(sigma), fmt_f64(slope)));
        }
    }
    for &r in r_list {
        let pts: Vec<(f64, f64)> = table
            .iter()
            .filter(|(rr, _, _)| *rr == r)
            .map(|(_, s, rem)| (*s, *rem))
            .collect();
        if let Some(slope) = log_log_slope(&pts) {
            fit_rows.push(format!("sigma,{},{}", fmt_f64(r), fmt_f64(slope)));
        }
    }
    let fit_path = cfg.output_dir.join("cutoff_fit.csv");
    write_csv(&fit_path, "varied,fixed_value,exponent", &fit_rows)?;
    Ok((probe_path, fit_path))
}
