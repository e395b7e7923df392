//! Small numerical helpers shared across the crate: a fixed 16-point
//! Gauss-Legendre rule, an adaptive Simpson integrator used as an
//! independent quadrature oracle, and a least-squares log-log slope fit.

/// Abscissas of the 16-point Gauss-Legendre rule on `[-1, 1]`, positive half.
const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_37,
    0.617_876_244_402_643_8,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];

/// Weights matching [`GL16_X`].
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_58,
    0.169_156_519_395_002_54,
    0.149_595_988_816_576_74,
    0.124_628_971_255_533_88,
    0.095_158_511_682_492_79,
    0.062_253_523_938_647_894,
    0.027_152_459_411_754_096,
];

/// Nodes and weights of the 16-point Gauss-Legendre rule mapped to `[a, b]`.
///
/// Nodes are emitted in ascending order so that summation order is fixed.
pub fn gauss_legendre_16(a: f64, b: f64) -> [(f64, f64); 16] {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 16];
    for i in 0..8 {
        let x = GL16_X[7 - i];
        out[i] = (mid - half * x, half * GL16_W[7 - i]);
        out[15 - i] = (mid + half * x, half * GL16_W[7 - i]);
    }
    out
}

/// Integrate `f` over `[a, b]` with the composite 16-point rule on `panels`
/// uniform panels.
pub fn integrate_gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * step;
        for (x, w) in gauss_legendre_16(lo, lo + step) {
            acc += w * f(x);
        }
    }
    acc
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Recursion keeps splitting until the local Richardson estimate meets the
/// tolerance `tol_abs + tol_rel * |whole|` or `max_depth` is reached. The
/// returned value includes the Richardson correction term, so the effective
/// order is five.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_depth: u32,
) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol_abs, tol_rel, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol_abs: f64,
    tol_rel: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let tol = tol_abs.max(tol_rel * (left + right).abs());
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        0.5 * tol_abs,
        tol_rel,
        depth - 1,
    ) + simpson_rec(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        0.5 * tol_abs,
        tol_rel,
        depth - 1,
    )
}

/// Least-squares slope of `ln y` against `ln x`.
///
/// All `x` must be positive; `y` enters through `|y|` so that a sign flip in
/// a nearly vanishing series does not poison the fit. Returns `None` when
/// fewer than two usable points remain.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in &logs {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}
