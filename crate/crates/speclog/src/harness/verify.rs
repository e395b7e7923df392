//! The verification suite: every quantitative claim the toolkit makes,
//! run end to end with pinned tolerances and reported as a machine-scored
//! JSON document.
//!
//! The check definitions are fixed (interval `(0, pi)`, order one half,
//! bases 100/200/400 and their companions); the experiment configuration
//! contributes the random seed, the per-rank report table and the output
//! location. Checks never abort the suite: each records pass/fail with
//! its measured value, and the process exit status summarises the run.

use super::csvfmt::fmt_f64;
use super::{ExperimentConfig, HarnessError};
use crate::bounds::{
    estimate_upper_constant, lower_bound_sum, positivity_threshold, weyl_eigenvalue, weyl_sum,
    BoundReport, DomainGeometry, Regime,
};
use crate::coremath::{
    ball_symbol_integral, bathtub_minimum, karamata_sum_ratio, level_set_objective,
    moment_lower_bounds, optimal_radius, CutoffProfile, RadialGrid, SpectralParams,
};
use crate::numeric::{adaptive_simpson, log_log_slope};
use crate::solver::{
    assemble_form_matrix, cutoff_planewave_energy, derivative_oracle_check, matrix_digest,
    solve_spectrum, GalerkinBasis, QuadratureConfig, Spectrum, SymbolKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn below(name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail,
        }
    }

    fn at_least(name: &str, measured: f64, floor: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: measured >= floor,
            measured,
            tolerance: floor,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub crate_version: String,
    pub timestamp_unix_ms: u64,
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub checks: Vec<CheckResult>,
    pub per_k: Vec<BoundReport>,
    pub metadata: ReportMetadata,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Serialise a report with the volatile metadata (timestamp, timings)
/// cleared: the canonical byte form for determinism comparisons.
pub fn normalized_report_json(report: &VerificationReport) -> String {
    let mut clone = report.clone();
    clone.metadata.timestamp_unix_ms = 0;
    clone.metadata.timings_ms.clear();
    serde_json::to_string_pretty(&clone).expect("report serialisation is infallible") + "\n"
}

/// The expensive artifacts every run shares: Galerkin spectra of the
/// pinned interval setups.
pub struct Artifacts {
    pub params: SpectralParams,
    pub geom_pi: DomainGeometry,
    pub geom_unit: DomainGeometry,
    pub spec100: Spectrum,
    pub spec200: Spectrum,
    pub spec400: Spectrum,
    pub spec200_unit: Spectrum,
    pub spec400_unit: Spectrum,
    pub classical200: Spectrum,
    pub digest200: [u8; 32],
    pub timings_ms: BTreeMap<String, u64>,
}

impl Artifacts {
    pub fn build() -> Result<Self, HarnessError> {
        let params = SpectralParams::new(1, 0.5)?;
        let geom_pi = DomainGeometry::from_box(&[std::f64::consts::PI])?;
        let geom_unit = DomainGeometry::from_box(&[1.0])?;
        let mut timings = BTreeMap::new();

        let basis200 = GalerkinBasis::new(&geom_pi, 200)?;
        let quad200 = QuadratureConfig::auto_for(&basis200);
        // the 100-mode basis shares the 200-sized quadrature so the two
        // trial spaces are exactly nested
        let basis100 = GalerkinBasis::new(&geom_pi, 100)?;
        let basis400 = GalerkinBasis::new(&geom_pi, 400)?;
        let quad400 = QuadratureConfig::auto_for(&basis400);

        let mut stage = |name: &str,
                         f: &mut dyn FnMut() -> Result<Spectrum, HarnessError>|
         -> Result<Spectrum, HarnessError> {
            let start = Instant::now();
            let out = f()?;
            timings.insert(
                format!("assemble.{name}"),
                start.elapsed().as_millis() as u64,
            );
            Ok(out)
        };

        let spec200 = stage("flog200", &mut || {
            let m = assemble_form_matrix(&basis200, params, &quad200, SymbolKind::FractionalLog)?;
            Ok(solve_spectrum(&m)?)
        })?;
        let spec100 = stage("flog100", &mut || {
            let m = assemble_form_matrix(&basis100, params, &quad200, SymbolKind::FractionalLog)?;
            Ok(solve_spectrum(&m)?)
        })?;
        let spec400 = stage("flog400", &mut || {
            let m = assemble_form_matrix(&basis400, params, &quad400, SymbolKind::FractionalLog)?;
            Ok(solve_spectrum(&m)?)
        })?;
        let classical200 = stage("classical200", &mut || {
            let m =
                assemble_form_matrix(&basis200, params, &quad200, SymbolKind::fractional(1.0)?)?;
            Ok(solve_spectrum(&m)?)
        })?;
        let basis200_unit = GalerkinBasis::new(&geom_unit, 200)?;
        let basis400_unit = GalerkinBasis::new(&geom_unit, 400)?;
        let spec200_unit = stage("flog200_unit", &mut || {
            let quad = QuadratureConfig::auto_for(&basis200_unit);
            let m = assemble_form_matrix(&basis200_unit, params, &quad, SymbolKind::FractionalLog)?;
            Ok(solve_spectrum(&m)?)
        })?;
        let spec400_unit = stage("flog400_unit", &mut || {
            let quad = QuadratureConfig::auto_for(&basis400_unit);
            let m = assemble_form_matrix(&basis400_unit, params, &quad, SymbolKind::FractionalLog)?;
            Ok(solve_spectrum(&m)?)
        })?;

        let digest200 = matrix_digest(&basis200, params, &quad200, SymbolKind::FractionalLog);
        Ok(Self {
            params,
            geom_pi,
            geom_unit,
            spec100,
            spec200,
            spec400,
            spec200_unit,
            spec400_unit,
            classical200,
            digest200,
            timings_ms: timings,
        })
    }
}

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

/// Closed-form ball integral against adaptive radial quadrature over the
/// 60-point (n, s, R) grid.
pub fn check_ball_integral() -> CheckResult {
    let mut worst = 0.0f64;
    for n in 1..=3u32 {
        for &s in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            for &radius in &[0.5, 1.0, 2.0, 5.0] {
                let params = SpectralParams::new(n, s).unwrap();
                let closed = ball_symbol_integral(params, radius).unwrap();
                let e = params.exponent();
                let quad = n as f64
                    * params.unit_ball()
                    * adaptive_simpson(
                        &|r: f64| {
                            if r == 0.0 {
                                0.0
                            } else {
                                r.powf(e - 1.0) * (r * r).ln()
                            }
                        },
                        0.0,
                        radius,
                        1e-14,
                        1e-12,
                        60,
                    );
                worst = worst.max((closed - quad).abs() / closed.abs().max(1e-12));
            }
        }
    }
    CheckResult::below(
        "ball_integral_vs_quadrature",
        worst,
        1e-8,
        "max relative deviation over n in 1..3, s in {0.1,0.25,0.5,0.75,0.9}, R in {0.5,1,2,5}"
            .into(),
    )
}

/// Bathtub oracle against the sharp moment bound (50 seeded cases above the
/// mass threshold) and the universal bound (50 cases below it).
pub fn check_bathtub(seed: u64) -> (CheckResult, CheckResult) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb47b);
    let cells = 10_000;

    let mut worst_rel = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..50 {
        let n = if rng.gen_bool(0.5) { 1 } else { 2 };
        let s = rng.gen_range(0.1..0.9);
        let m1 = rng.gen_range(0.2..5.0);
        let params = SpectralParams::new(n, s).unwrap();
        let ratio = rng.gen_range(1.0..20.0);
        let mass = ratio * m1 * params.unit_ball();
        let r_opt = optimal_radius(params, m1, mass);
        let grid = RadialGrid::new(2.0 * r_opt, cells).unwrap();
        let oracle = bathtub_minimum(params, m1, mass, grid).unwrap();
        let main = moment_lower_bounds(params, m1, mass).unwrap().main.unwrap();
        worst_rel = worst_rel.max((oracle - main).abs() / main.abs().max(1.0));
        // one cell of mass at the outer rim bounds the legal undershoot
        let h = grid.r_max() / cells as f64;
        let cell_mass = m1
            * params.unit_ball()
            * (grid.r_max().powi(n as i32) - (grid.r_max() - h).powi(n as i32));
        worst_margin = worst_margin.min(oracle - (main - cell_mass));
    }
    let agree = CheckResult::below(
        "bathtub_oracle_main_bound",
        worst_rel,
        1e-3,
        format!(
            "50 seeded cases at 1e4 cells; worst undershoot margin {}",
            fmt_f64(worst_margin)
        ),
    );
    let agree = CheckResult {
        passed: agree.passed && worst_margin >= 0.0,
        ..agree
    };

    let mut universal_margin = f64::INFINITY;
    for _ in 0..50 {
        let n = if rng.gen_bool(0.5) { 1 } else { 2 };
        let s = rng.gen_range(0.1..0.9);
        let m1 = rng.gen_range(0.2..5.0);
        let params = SpectralParams::new(n, s).unwrap();
        let ratio = rng.gen_range(0.05..0.99);
        let mass = ratio * m1 * params.unit_ball();
        let grid = RadialGrid::new(4.0, cells).unwrap();
        let oracle = bathtub_minimum(params, m1, mass, grid).unwrap();
        let bounds = moment_lower_bounds(params, m1, mass).unwrap();
        assert!(bounds.main.is_none());
        universal_margin = universal_margin.min(oracle - bounds.universal);
    }
    let universal = CheckResult::at_least(
        "bathtub_universal_bound",
        universal_margin,
        0.0,
        "50 seeded cases with mass below the threshold".into(),
    );
    (agree, universal)
}

/// The level-set objective is maximised at the optimal radius, where it
/// equals the scaled ball integral.
pub fn check_objective(seed: u64) -> (CheckResult, CheckResult) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9511);
    let mut worst_excess = 0.0f64;
    let mut worst_identity = 0.0f64;
    for _ in 0..50 {
        let n = if rng.gen_bool(0.5) { 1 } else { 2 };
        let s = rng.gen_range(0.1..0.9);
        let m1 = rng.gen_range(0.2..5.0);
        let params = SpectralParams::new(n, s).unwrap();
        let ratio = rng.gen_range(1.0..30.0);
        let mass = ratio * m1 * params.unit_ball();
        let r_opt = optimal_radius(params, m1, mass);
        let best = level_set_objective(params, m1, mass, r_opt).unwrap();
        for i in 0..200 {
            let r = 1.0 + (10.0 * r_opt - 1.0) * i as f64 / 199.0;
            let v = level_set_objective(params, m1, mass, r).unwrap();
            worst_excess = worst_excess.max((v - best) / best.abs().max(1e-12));
        }
        let ball = m1 * ball_symbol_integral(params, r_opt).unwrap();
        worst_identity = worst_identity.max((best - ball).abs() / ball.abs().max(1e-12));
    }
    let maximisation = CheckResult::below(
        "objective_maximisation",
        worst_excess,
        1e-10,
        "max relative excess over the optimum on 200-point radius grids, 50 seeded cases".into(),
    );
    let identity = CheckResult::below(
        "objective_optimum_identity",
        worst_identity,
        1e-12,
        "objective at the optimal radius against the scaled ball integral".into(),
    );
    (maximisation, identity)
}

/// Tauberian summation ratios inside the `1.2 / ln k` band, and the
/// Weyl-sum consistency of the eigenvalue law at `k = 1e5`.
pub fn check_karamata() -> (CheckResult, CheckResult) {
    let mut worst = 0.0f64;
    for &k in &[1_000u64, 10_000, 100_000, 1_000_000] {
        let ratio = karamata_sum_ratio(2.0, 1.0, k).unwrap();
        worst = worst.max((ratio - 1.0).abs() * (k as f64).ln());
    }
    let band = CheckResult::below(
        "karamata_ratio_band",
        worst,
        1.2,
        "max |ratio - 1| * ln k over k in {1e3,1e4,1e5,1e6}".into(),
    );

    let params = SpectralParams::new(1, 0.5).unwrap();
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI]).unwrap();
    let k = 100_000u64;
    let mut acc = 0.0;
    for j in 2..=k {
        acc += weyl_eigenvalue(params, &geom, j).unwrap();
    }
    let consistency = acc / weyl_sum(params, &geom, k).unwrap();
    let weyl = CheckResult::below(
        "weyl_sum_consistency",
        (consistency - 1.0).abs(),
        1.2 / (k as f64).ln(),
        format!("sum of the eigenvalue law over j <= 1e5 against the sum law: {consistency}"),
    );
    (band, weyl)
}

/// Classical limit: the order-one fractional matrix reproduces the
/// Dirichlet Laplacian spectrum on `(0, pi)`.
pub fn check_classical(classical200: &Spectrum) -> CheckResult {
    let mut worst = 0.0f64;
    for j in 1..=20usize {
        let want = (j * j) as f64;
        let got = classical200.eigenvalues()[j - 1];
        worst = worst.max((got - want).abs() / want);
    }
    CheckResult::below(
        "classical_limit_spectrum",
        worst,
        1e-4,
        "fractional(1.0) Galerkin on (0, pi), basis 200, against j^2 for j <= 20".into(),
    )
}

/// Derivative identity at basis 20: the fractional-log matrix equals the
/// central s-difference of fractional matrices, with quadratic step decay.
pub fn check_derivative() -> Result<(CheckResult, CheckResult), HarnessError> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let basis = GalerkinBasis::new(&geom, 20)?;
    let quad = QuadratureConfig::auto_for(&basis);
    let err3 = derivative_oracle_check(&basis, params, &quad, 1e-3)?;
    let err2 = derivative_oracle_check(&basis, params, &quad, 1e-2)?;
    let identity = CheckResult::below(
        "derivative_identity",
        err3,
        1e-4,
        "max relative entry error of the central difference at h = 1e-3, basis 20".into(),
    );
    let ratio = err2 / err3;
    let decay = CheckResult {
        name: "derivative_identity_decay".into(),
        passed: (20.0..=500.0).contains(&ratio),
        measured: ratio,
        tolerance: 100.0,
        detail: format!(
            "error ratio h=1e-2 over h=1e-3 (expect ~100 for O(h^2)); errors {} / {}",
            fmt_f64(err2),
            fmt_f64(err3)
        ),
    };
    Ok((identity, decay))
}

/// Ritz sums dominate the closed-form lower bound, strictly, for every
/// rank up to 100.
pub fn check_domination(arts: &Artifacts) -> CheckResult {
    let mut min_margin = f64::INFINITY;
    let mut partial = 0.0;
    for k in 1..=100u64 {
        partial += arts.spec200.eigenvalues()[k as usize - 1];
        let (bound, _) = lower_bound_sum(arts.params, &arts.geom_pi, k).unwrap();
        min_margin = min_margin.min(partial - bound);
    }
    CheckResult {
        name: "sum_lower_bound_domination".into(),
        passed: min_margin > 0.0,
        measured: min_margin,
        tolerance: 0.0,
        detail: "min over k <= 100 of (Ritz sum - lower bound), basis 200 on (0, pi); strict"
            .into(),
    }
}

/// Positivity: sums above rank 2 on `(0, pi)`, and the first eigenvalue on
/// the unit interval, whose volume is below the small-volume threshold.
pub fn check_positivity(arts: &Artifacts) -> (CheckResult, CheckResult) {
    let mut min_sum = f64::INFINITY;
    let mut partial = arts.spec200.eigenvalues()[0];
    for k in 2..=100usize {
        partial += arts.spec200.eigenvalues()[k - 1];
        min_sum = min_sum.min(partial);
    }
    let sums = CheckResult {
        name: "sum_positivity_above_threshold".into(),
        passed: min_sum > 0.0,
        measured: min_sum,
        tolerance: 0.0,
        detail: format!(
            "min eigenvalue sum over 2 <= k <= 100 on (0, pi); threshold e^(1/2) = {}",
            fmt_f64(positivity_threshold(arts.params, &arts.geom_pi))
        ),
    };
    let lambda1 = arts.spec200_unit.eigenvalues()[0];
    let small = CheckResult {
        name: "small_domain_first_eigenvalue".into(),
        passed: lambda1 > 0.0,
        measured: lambda1,
        tolerance: 0.0,
        detail: "Ritz lambda_1 on (0, 1) (volume below the small-volume threshold); Ritz values dominate the true eigenvalue".into(),
    };
    (sums, small)
}

/// Nested bases 100 -> 200 under the same quadrature produce pointwise
/// nonincreasing Ritz values.
pub fn check_ritz_monotonicity(arts: &Artifacts) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    for j in 0..100 {
        worst = worst.max(arts.spec200.eigenvalues()[j] - arts.spec100.eigenvalues()[j]);
    }
    CheckResult::below(
        "ritz_monotonicity",
        worst,
        1e-9,
        "max over j <= 100 of lambda_j(200) - lambda_j(100), exactly nested trial spaces".into(),
    )
}

/// Weyl-ratio trend at basis 400 and stability of the empirical
/// upper-bound constant between bases 200 and 400.
///
/// Both run on the unit interval. The trend claim (ratios at least one and
/// falling toward the Weyl constant) holds exactly when the leading/
/// correction split of the lower bound has a positive correction, i.e. on
/// domains below the small-volume threshold; on (0, pi) the correction is
/// negative and the ratio provably climbs toward 1 from below instead.
pub fn check_trend(arts: &Artifacts) -> (CheckResult, CheckResult) {
    let ratios: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&k| {
            arts.spec400_unit.partial_sum(k)
                / weyl_sum(arts.params, &arts.geom_unit, k as u64).unwrap()
        })
        .collect();
    let mut max_increase = f64::NEG_INFINITY;
    for pair in ratios.windows(2) {
        max_increase = max_increase.max(pair[1] - pair[0]);
    }
    let dominated = ratios.iter().all(|&r| r >= 1.0);
    let trend = CheckResult {
        name: "weyl_ratio_trend".into(),
        passed: max_increase <= 0.0 && dominated,
        measured: max_increase,
        tolerance: 0.0,
        detail: format!(
            "ratios at k = 8,16,32,64 (basis 400 on (0,1)), all >= 1: {}",
            ratios
                .iter()
                .map(|r| fmt_f64(*r))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    };

    let c200 = estimate_upper_constant(arts.spec200_unit.resolved(), arts.params, &arts.geom_unit)
        .unwrap();
    let c400 = estimate_upper_constant(arts.spec400_unit.resolved(), arts.params, &arts.geom_unit)
        .unwrap();
    let rel = (c200 - c400).abs() / c400.abs().max(1e-9);
    let stability = CheckResult::below(
        "upper_constant_stability",
        rel,
        0.2,
        format!(
            "empirical constants from the resolved ranges on (0,1): C(200) = {}, C(400) = {}",
            fmt_f64(c200),
            fmt_f64(c400)
        ),
    );
    (trend, stability)
}

/// Cutoff probe: main-term identity, then remainder scaling exponents in
/// radius and layer width over the pinned grids.
pub fn check_probe() -> Result<(CheckResult, CheckResult, CheckResult), HarnessError> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let quad = QuadratureConfig {
        cutoff_radius: 100.0,
        points_per_axis: 1 << 18,
        tail_order: 6,
        singularity_guard: 1e-6,
    };
    let r_grid = [20.0, 30.0, 40.0];
    let sigma_grid = [0.02, 0.05, 0.1];

    let mut worst_identity = 0.0f64;
    let mut table: Vec<(f64, f64, f64)> = Vec::new();
    for &sigma in &sigma_grid {
        let profile = CutoffProfile::new(sigma)?;
        let sq_mass = profile.squared_mass_1d(std::f64::consts::PI)?;
        for &r in &r_grid {
            let energy = cutoff_planewave_energy(&profile, &geom, params, r, &quad)?;
            let identity = energy.main_term / (ball_symbol_integral(params, r)? * sq_mass) - 1.0;
            worst_identity = worst_identity.max(identity.abs());
            table.push((r, sigma, energy.remainder));
        }
    }
    let identity = CheckResult::below(
        "cutoff_main_term_identity",
        worst_identity,
        1e-12,
        "main term against ball integral times squared cutoff mass".into(),
    );

    let r_pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|(_, s, _)| *s == 0.05)
        .map(|(r, _, rem)| (*r, *rem))
        .collect();
    let r_slope = log_log_slope(&r_pts).unwrap_or(f64::NAN);
    let r_check =
        CheckResult::below(
            "cutoff_remainder_r_exponent",
            r_slope,
            params.exponent() + 0.3,
            format!(
            "log-log slope of |remainder| in r over {{20,30,40}} at sigma = 0.05; remainders {}",
            r_pts.iter().map(|p| fmt_f64(p.1)).collect::<Vec<_>>().join(", ")
        ),
        );

    let s_pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|(r, _, _)| *r == 30.0)
        .map(|(_, s, rem)| (*s, *rem))
        .collect();
    let s_slope = log_log_slope(&s_pts).unwrap_or(f64::NAN);
    let s_check = CheckResult {
        name: "cutoff_remainder_sigma_exponent".into(),
        passed: (0.7..=1.3).contains(&s_slope),
        measured: s_slope,
        tolerance: 1.3,
        detail: format!(
            "log-log slope of |remainder| in sigma over {{0.02,0.05,0.1}} at r = 30 (band [0.7, 1.3]); remainders {}",
            s_pts.iter().map(|p| fmt_f64(p.1)).collect::<Vec<_>>().join(", ")
        ),
    };
    Ok((identity, r_check, s_check))
}

/// Re-run the closed-form subset of the suite and compare canonical bytes.
pub fn check_determinism(seed: u64) -> CheckResult {
    let run = |seed: u64| -> String {
        let mut checks = vec![check_ball_integral()];
        let (a, b) = check_bathtub(seed);
        checks.push(a);
        checks.push(b);
        let (a, b) = check_objective(seed);
        checks.push(a);
        checks.push(b);
        let (a, b) = check_karamata();
        checks.push(a);
        checks.push(b);
        serde_json::to_string(&checks).unwrap()
    };
    let first = run(seed);
    let second = run(seed);
    CheckResult {
        name: "closed_form_determinism".into(),
        passed: first == second,
        measured: if first == second { 0.0 } else { 1.0 },
        tolerance: 0.0,
        detail: "byte equality of the closed-form checks across two runs with one seed".into(),
    }
}

// ---------------------------------------------------------------------------
// suite driver
// ---------------------------------------------------------------------------

/// Run every check and assemble the report. Individual check failures do
/// not abort the suite.
pub fn run_verification(cfg: &ExperimentConfig) -> Result<VerificationReport, HarnessError> {
    cfg.validate()?;
    let arts = Artifacts::build()?;
    run_verification_with(cfg, &arts)
}

/// Suite driver against prebuilt artifacts (shared by the test harness).
pub fn run_verification_with(
    cfg: &ExperimentConfig,
    arts: &Artifacts,
) -> Result<VerificationReport, HarnessError> {
    cfg.validate()?;
    let mut timings = arts.timings_ms.clone();
    let mut checks = Vec::new();
    let mut timed = |name: &str,
                     out: &mut Vec<CheckResult>,
                     f: &mut dyn FnMut(&mut Vec<CheckResult>) -> Result<(), HarnessError>|
     -> Result<(), HarnessError> {
        let start = Instant::now();
        f(out)?;
        timings.insert(format!("check.{name}"), start.elapsed().as_millis() as u64);
        Ok(())
    };

    timed("ball_integral", &mut checks, &mut |out| {
        out.push(check_ball_integral());
        Ok(())
    })?;
    timed("bathtub", &mut checks, &mut |out| {
        let (a, b) = check_bathtub(cfg.seed);
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("objective", &mut checks, &mut |out| {
        let (a, b) = check_objective(cfg.seed);
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("karamata", &mut checks, &mut |out| {
        let (a, b) = check_karamata();
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("classical", &mut checks, &mut |out| {
        out.push(check_classical(&arts.classical200));
        Ok(())
    })?;
    timed("derivative", &mut checks, &mut |out| {
        let (a, b) = check_derivative()?;
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("domination", &mut checks, &mut |out| {
        out.push(check_domination(arts));
        Ok(())
    })?;
    timed("positivity", &mut checks, &mut |out| {
        let (a, b) = check_positivity(arts);
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("ritz", &mut checks, &mut |out| {
        out.push(check_ritz_monotonicity(arts));
        Ok(())
    })?;
    timed("trend", &mut checks, &mut |out| {
        let (a, b) = check_trend(arts);
        out.push(a);
        out.push(b);
        Ok(())
    })?;
    timed("probe", &mut checks, &mut |out| {
        let (a, b, c) = check_probe()?;
        out.push(a);
        out.push(b);
        out.push(c);
        Ok(())
    })?;
    timed("determinism", &mut checks, &mut |out| {
        out.push(check_determinism(cfg.seed));
        Ok(())
    })?;

    let per_k = per_k_reports(cfg, arts)?;
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed,
        config: cfg.clone(),
        checks,
        per_k,
        metadata: ReportMetadata {
            crate_version: env!("CARGO_PKG_VERSION").into(),
            timestamp_unix_ms: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            timings_ms: timings,
        },
    })
}

/// Per-rank bound table for the configured geometry; computed sums come
/// from the configured spectrum when the geometry is a solvable box.
fn per_k_reports(
    cfg: &ExperimentConfig,
    arts: &Artifacts,
) -> Result<Vec<BoundReport>, HarnessError> {
    let params = cfg.params()?;
    let geom = cfg.geometry()?;
    let threshold = positivity_threshold(params, &geom);

    let spectrum: Option<Spectrum> = if geom.box_lengths().is_some() && params.dimension() == 1 {
        let basis = cfg.basis()?;
        let quad = cfg.quadrature(&basis);
        let symbol = SymbolKind::FractionalLog;
        if matrix_digest(&basis, params, &quad, symbol) == arts.digest200 {
            Some(arts.spec200.clone())
        } else {
            let m = assemble_form_matrix(&basis, params, &quad, symbol)?;
            Some(solve_spectrum(&m)?)
        }
    } else {
        None
    };

    let mut out = Vec::with_capacity(cfg.k_max as usize);
    for k in 1..=cfg.k_max as u64 {
        let (lower, regime) = lower_bound_sum(params, &geom, k)?;
        let weyl_k = (k >= 2)
            .then(|| weyl_eigenvalue(params, &geom, k))
            .transpose()?;
        let weyl_s = (k >= 2).then(|| weyl_sum(params, &geom, k)).transpose()?;
        let upper = if k as f64 > threshold && geom.layer_constant().is_some() {
            Some(crate::bounds::upper_bound_sum(params, &geom, k, 0.0)?)
        } else {
            None
        };
        let computed = spectrum.as_ref().map(|s| s.partial_sum(k as usize));
        // Ritz sums dominate the true sums, which dominate the main bound
        if let (Some(cs), Regime::Main) = (computed, regime) {
            debug_assert!(cs >= lower, "k={k}: computed {cs} below bound {lower}");
        }
        out.push(BoundReport {
            k,
            lower_bound: lower,
            regime,
            upper_leading: upper,
            weyl_k,
            weyl_sum: weyl_s,
            computed_sum: computed,
        });
    }
    Ok(out)
}

/// Run the suite, write `verify_report.json`, print one line per check,
/// and return the report path plus the overall outcome.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<(PathBuf, bool), HarnessError> {
    cfg.validate()?;
    cfg.prepare_output()?;
    let report = run_verification(cfg)?;
    for check in &report.checks {
        println!(
            "[{}] {}: measured {} (tolerance {})",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            fmt_f64(check.measured),
            fmt_f64(check.tolerance),
        );
    }
    let path = cfg.output_dir.join("verify_report.json");
    let text = serde_json::to_string_pretty(&report)? + "\n";
    std::fs::write(&path, text).map_err(|e| super::io_err(&path, e))?;
    let passed = report.all_passed();
    println!(
        "{}: {} of {} checks passed",
        if passed { "OK" } else { "FAILED" },
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len()
    );
    Ok((path, passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_checks_pass() {
        assert!(check_ball_integral().passed);
        let (agree, universal) = check_bathtub(7);
        assert!(agree.passed, "{agree:?}");
        assert!(universal.passed, "{universal:?}");
        let (maxim, ident) = check_objective(7);
        assert!(maxim.passed, "{maxim:?}");
        assert!(ident.passed, "{ident:?}");
        let (band, weyl) = check_karamata();
        assert!(band.passed, "{band:?}");
        assert!(weyl.passed, "{weyl:?}");
    }

    #[test]
    fn determinism_of_the_closed_form_subset() {
        assert!(check_determinism(42).passed);
    }

    #[test]
    fn seed_changes_only_randomized_sampling() {
        // karamata and ball-integral checks are seed-free; their bytes agree
        // across seeds while the bathtub sampling differs.
        let (a1, _) = check_karamata();
        let (a2, _) = check_karamata();
        assert_eq!(
            serde_json::to_string(&a1).unwrap(),
            serde_json::to_string(&a2).unwrap()
        );
        let (b1, _) = check_bathtub(1);
        let (b2, _) = check_bathtub(2);
        assert!(b1.passed && b2.passed);
        assert_ne!(b1.measured, b2.measured);
    }
}
