//! Closed-form mathematics of the radial symbol `w(r) = r^(2s) ln r^2`:
//! ball integrals, the level-set objective whose optimum yields the sharp
//! lower bound on symbol-weighted moments, the bathtub rearrangement
//! oracle, a Karamata-style Tauberian summation check and the C^2 boundary
//! cutoff profile.

mod bathtub;
mod cutoff;
mod karamata;

pub use bathtub::{bathtub_minimum, RadialGrid};
pub use cutoff::{cutoff_value, CutoffProfile};
pub use karamata::karamata_sum_ratio;

use statrs::function::gamma::gamma;
use thiserror::Error;

/// Errors produced by the closed-form layer.
#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("space dimension must be at least 1")]
    ZeroDimension,
    #[error("fractional order s = {0} is outside (0, 1)")]
    OrderOutOfRange(f64),
    #[error("radius {0} must be nonnegative")]
    NegativeRadius(f64),
    #[error("radius {0} is below 1; the level-set bound requires R >= 1")]
    RadiusBelowOne(f64),
    #[error("{name} = {value} must be positive")]
    NonPositive { name: &'static str, value: f64 },
    #[error("mass {0} must be nonnegative")]
    NegativeMass(f64),
    #[error("summation index k = {0} must be at least 3")]
    IndexTooSmall(u64),
    #[error("radial grid needs at least 1000 cells, got {0}")]
    GridTooCoarse(usize),
    #[error("grid capacity {capacity} cannot hold mass {mass}")]
    CapacityExceeded { capacity: f64, mass: f64 },
    #[error(
        "cutoff layer width {sigma} must be positive and below half the shortest side {limit}"
    )]
    BadLayerWidth { sigma: f64, limit: f64 },
}

/// Dimension and fractional order; the pair fixing the symbol and every
/// exponent in the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralParams {
    n: u32,
    s: f64,
}

impl SpectralParams {
    /// Requires `n >= 1` and `0 < s < 1`.
    pub fn new(n: u32, s: f64) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::ZeroDimension);
        }
        if !(s > 0.0 && s < 1.0) || !s.is_finite() {
            return Err(CoreError::OrderOutOfRange(s));
        }
        Ok(Self { n, s })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> f64 {
        self.s
    }

    /// `n + 2s`, the exponent governing ball integrals of the symbol.
    pub fn exponent(&self) -> f64 {
        self.n as f64 + 2.0 * self.s
    }

    /// `2s / n`, the growth exponent of the Weyl law.
    pub fn growth_ratio(&self) -> f64 {
        2.0 * self.s / self.n as f64
    }

    /// Volume of the unit ball in the parameter dimension.
    pub fn unit_ball(&self) -> f64 {
        unit_ball_volume(self.n).expect("dimension validated on construction")
    }
}

/// Volume of the unit ball in `R^n`: `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: u32) -> Result<f64, CoreError> {
    if n == 0 {
        return Err(CoreError::ZeroDimension);
    }
    let half = n as f64 / 2.0;
    Ok(std::f64::consts::PI.powf(half) / gamma(half + 1.0))
}

/// The radial profile `w(r) = r^(2s) ln r^2` of the Fourier symbol,
/// together with its derivative and minimum.
///
/// The profile vanishes at `r = 1`, is negative exactly on `(0, 1)` with a
/// unique minimum at `r* = exp(-1/(2s))`, and is strictly increasing on
/// `[1, inf)`.
#[derive(Debug, Clone, Copy)]
pub struct RadialSymbol {
    params: SpectralParams,
}

impl RadialSymbol {
    pub fn new(params: SpectralParams) -> Self {
        Self { params }
    }

    /// `w(r)`; the continuous extension `w(0) = 0` is used at the origin.
    pub fn value(&self, r: f64) -> Result<f64, CoreError> {
        if r < 0.0 || !r.is_finite() {
            return Err(CoreError::NegativeRadius(r));
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        Ok(r.powf(2.0 * self.params.s) * (r * r).ln())
    }

    /// `w'(r) = 2 r^(2s-1) (2s ln r + 1)` for `r > 0`.
    pub fn derivative(&self, r: f64) -> Result<f64, CoreError> {
        if r <= 0.0 || !r.is_finite() {
            return Err(CoreError::NegativeRadius(r));
        }
        let s = self.params.s;
        Ok(2.0 * r.powf(2.0 * s - 1.0) * (2.0 * s * r.ln() + 1.0))
    }

    /// Location of the global minimum, `exp(-1/(2s))`.
    pub fn minimum_radius(&self) -> f64 {
        (-1.0 / (2.0 * self.params.s)).exp()
    }
}

/// `w(r) = r^(2s) ln r^2` evaluated at `r >= 0` with `w(0) = 0`.
pub fn symbol_radial(params: SpectralParams, r: f64) -> Result<f64, CoreError> {
    RadialSymbol::new(params).value(r)
}

/// Integral of the symbol over the ball of radius `R`:
///
/// `int_{B_R} |z|^(2s) ln|z|^2 dz
///    = n omega_n R^(n+2s) ( ln R^2 / (n+2s) - 2/(n+2s)^2 )`.
pub fn ball_symbol_integral(params: SpectralParams, radius: f64) -> Result<f64, CoreError> {
    if radius <= 0.0 || !radius.is_finite() {
        return Err(CoreError::NonPositive {
            name: "radius",
            value: radius,
        });
    }
    let n = params.n as f64;
    let e = params.exponent();
    let omega = params.unit_ball();
    Ok(n * omega * radius.powf(e) * ((radius * radius).ln() / e - 2.0 / (e * e)))
}

/// Level-set objective whose maximum over radii produces the sharp lower
/// bound on the symbol-weighted moment of a density with ceiling `m1` and
/// total mass `mass`:
///
/// `Psi(R) = mass * w(R) - m1 * ( w(R) * omega_n R^n - int_{B_R} w )`.
///
/// The objective chain requires `R >= 1`, where `w` is increasing.
pub fn level_set_objective(
    params: SpectralParams,
    m1: f64,
    mass: f64,
    radius: f64,
) -> Result<f64, CoreError> {
    if m1 <= 0.0 {
        return Err(CoreError::NonPositive {
            name: "m1",
            value: m1,
        });
    }
    if mass <= 0.0 {
        return Err(CoreError::NonPositive {
            name: "mass",
            value: mass,
        });
    }
    if radius < 1.0 {
        return Err(CoreError::RadiusBelowOne(radius));
    }
    let w = RadialSymbol::new(params).value(radius)?;
    let ball = params.unit_ball() * radius.powi(params.n as i32);
    Ok(mass * w - m1 * (w * ball - ball_symbol_integral(params, radius)?))
}

/// Radius at which [`level_set_objective`] is maximised,
/// `R = (mass / (m1 omega_n))^(1/n)`.
pub fn optimal_radius(params: SpectralParams, m1: f64, mass: f64) -> f64 {
    (mass / (m1 * params.unit_ball())).powf(1.0 / params.n as f64)
}

/// Lower bounds on the symbol-weighted moment `int w(|z|) f dz` over
/// densities `0 <= f <= m1` of total mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBounds {
    /// `-2 n omega_n / (n+2s)^2 * m1`; valid for every mass.
    pub universal: f64,
    /// Sharp bound, present exactly when `mass >= m1 omega_n`:
    /// `(2/(n+2s)) (m1 omega_n)^(-2s/n) mass^(1+2s/n)
    ///    ( ln(mass/(m1 omega_n)) - n/(n+2s) )`.
    pub main: Option<f64>,
}

/// Evaluate both moment lower bounds. `mass = 0` is allowed and yields only
/// the universal bound.
pub fn moment_lower_bounds(
    params: SpectralParams,
    m1: f64,
    mass: f64,
) -> Result<MomentBounds, CoreError> {
    if m1 <= 0.0 {
        return Err(CoreError::NonPositive {
            name: "m1",
            value: m1,
        });
    }
    if mass < 0.0 {
        return Err(CoreError::NegativeMass(mass));
    }
    let n = params.n as f64;
    let e = params.exponent();
    let omega = params.unit_ball();
    let universal = -2.0 * n * omega / (e * e) * m1;
    let main = if mass >= m1 * omega {
        let scale = m1 * omega;
        Some(
            2.0 / e
                * scale.powf(-params.growth_ratio())
                * mass.powf(1.0 + params.growth_ratio())
                * ((mass / scale).ln() - n / e),
        )
    } else {
        None
    };
    Ok(MomentBounds { universal, main })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::adaptive_simpson;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(n: u32, s: f64) -> SpectralParams {
        SpectralParams::new(n, s).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(SpectralParams::new(0, 0.5), Err(CoreError::ZeroDimension));
        assert!(SpectralParams::new(1, 0.0).is_err());
        assert!(SpectralParams::new(1, 1.0).is_err());
        assert!(SpectralParams::new(2, 0.75).is_ok());
    }

    #[test]
    fn unit_ball_volumes() {
        assert!(unit_ball_volume(0).is_err());
        assert_relative_eq!(unit_ball_volume(1).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            unit_ball_volume(2).unwrap(),
            std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            unit_ball_volume(3).unwrap(),
            4.0 * std::f64::consts::PI / 3.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn symbol_values() {
        let params = p(1, 0.5);
        assert_eq!(symbol_radial(params, 1.0).unwrap(), 0.0);
        assert_eq!(symbol_radial(params, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            symbol_radial(params, std::f64::consts::E).unwrap(),
            2.0 * std::f64::consts::E,
            max_relative = 1e-14
        );
        // Global minimum at r* = exp(-1/(2s)).
        let sym = RadialSymbol::new(params);
        let rstar = sym.minimum_radius();
        assert_relative_eq!(rstar, (-1.0f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(
            sym.value(rstar).unwrap(),
            -2.0 / std::f64::consts::E,
            max_relative = 1e-14
        );
        assert!(symbol_radial(params, -0.1).is_err());
    }

    #[test]
    fn symbol_derivative_matches_finite_differences() {
        for &(n, s) in &[(1u32, 0.25), (1, 0.5), (2, 0.5), (2, 0.9), (3, 0.1)] {
            let sym = RadialSymbol::new(p(n, s));
            for i in 0..100 {
                let r = 0.1 * (1000.0f64).powf(i as f64 / 99.0);
                let h = 1e-5 * r;
                let fd = (sym.value(r + h).unwrap() - sym.value(r - h).unwrap()) / (2.0 * h);
                let exact = sym.derivative(r).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "n={n} s={s} r={r}: fd={fd} exact={exact}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn symbol_strictly_increasing_beyond_one(
            r in 1.0f64..50.0,
            eps in 1e-6f64..1.0,
            s in 0.05f64..0.95,
        ) {
            let params = p(1, s);
            let lo = symbol_radial(params, r).unwrap();
            let hi = symbol_radial(params, r + eps).unwrap();
            prop_assert!(hi > lo);
        }

        #[test]
        fn symbol_negative_inside_unit_ball(r in 1e-8f64..1.0, s in 0.05f64..0.95) {
            let params = p(2, s);
            prop_assert!(symbol_radial(params, r).unwrap() < 0.0);
        }
    }

    #[test]
    fn ball_integral_closed_form_examples() {
        assert_relative_eq!(
            ball_symbol_integral(p(1, 0.5), 1.0).unwrap(),
            -1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ball_symbol_integral(p(1, 0.5), std::f64::consts::E).unwrap(),
            std::f64::consts::E * std::f64::consts::E,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ball_symbol_integral(p(2, 0.5), 1.0).unwrap(),
            -4.0 * std::f64::consts::PI / 9.0,
            max_relative = 1e-14
        );
    }

    /// Independent oracle: adaptive radial quadrature of
    /// `n omega_n int_0^R r^(n+2s-1) ln r^2 dr`.
    fn ball_integral_quadrature(params: SpectralParams, radius: f64) -> f64 {
        let n = params.n as f64;
        let omega = params.unit_ball();
        let e = params.exponent();
        let f = move |r: f64| {
            if r == 0.0 {
                0.0
            } else {
                r.powf(e - 1.0) * (r * r).ln()
            }
        };
        n * omega * adaptive_simpson(&f, 0.0, radius, 1e-14, 1e-12, 60)
    }

    #[test]
    fn ball_integral_agrees_with_quadrature_grid() {
        for n in 1..=3u32 {
            for &s in &[0.1, 0.25, 0.5, 0.75, 0.9] {
                for &radius in &[0.5, 1.0, 2.0, 5.0] {
                    let params = p(n, s);
                    let closed = ball_symbol_integral(params, radius).unwrap();
                    let quad = ball_integral_quadrature(params, radius);
                    assert!(
                        (closed - quad).abs() <= 1e-8 * closed.abs().max(1e-12),
                        "n={n} s={s} R={radius}: closed={closed} quad={quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn objective_at_unit_radius_is_ball_integral() {
        // w(1) = 0 so the objective collapses to m1 * int_{B_1} w = -1 here.
        let got = level_set_objective(p(1, 0.5), 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(got, -1.0, max_relative = 1e-14);
    }

    #[test]
    fn objective_maximum_matches_ball_integral_identity() {
        // At the optimal radius the objective equals m1 * int_{B_R} w.
        let params = p(1, 0.5);
        let (m1, mass) = (1.0, 8.0);
        let r_opt = optimal_radius(params, m1, mass);
        assert_relative_eq!(r_opt, 4.0, max_relative = 1e-14);
        let psi = level_set_objective(params, m1, mass, r_opt).unwrap();
        let ball = m1 * ball_symbol_integral(params, r_opt).unwrap();
        assert_relative_eq!(psi, ball, max_relative = 1e-12);
        // Frozen value cross-checked by quadrature of both integrals below.
        assert_relative_eq!(psi, 28.361419555836328, max_relative = 1e-12);
        let quad_ball = ball_integral_quadrature(params, r_opt);
        let w4 = symbol_radial(params, 4.0).unwrap();
        let psi_quad = mass * w4 - m1 * (w4 * params.unit_ball() * 4.0 - quad_ball);
        assert_relative_eq!(psi, psi_quad, max_relative = 1e-9);
    }

    #[test]
    fn objective_rejects_small_radius() {
        assert_eq!(
            level_set_objective(p(1, 0.5), 1.0, 2.0, 0.99),
            Err(CoreError::RadiusBelowOne(0.99))
        );
    }

    proptest! {
        // The optimal radius maximises the objective over [1, 10 R_opt].
        #[test]
        fn objective_maximised_at_optimal_radius(
            m1 in 0.1f64..10.0,
            ratio in 1.0f64..50.0,
            s in 0.05f64..0.95,
            n in 1u32..3,
        ) {
            let params = p(n, s);
            let mass = ratio * m1 * params.unit_ball();
            let r_opt = optimal_radius(params, m1, mass);
            let best = level_set_objective(params, m1, mass, r_opt).unwrap();
            for i in 0..50 {
                let r = 1.0 + (10.0 * r_opt - 1.0) * i as f64 / 49.0;
                let v = level_set_objective(params, m1, mass, r).unwrap();
                prop_assert!(v <= best + 1e-10 * best.abs().max(1e-12));
            }
        }
    }

    #[test]
    fn moment_bounds_examples() {
        let params = p(1, 0.5);
        let at_threshold = moment_lower_bounds(params, 1.0, 2.0).unwrap();
        assert_relative_eq!(at_threshold.universal, -1.0, max_relative = 1e-14);
        assert_relative_eq!(at_threshold.main.unwrap(), -1.0, max_relative = 1e-12);

        let above = moment_lower_bounds(params, 1.0, 2.0 * std::f64::consts::E).unwrap();
        assert_relative_eq!(
            above.main.unwrap(),
            std::f64::consts::E * std::f64::consts::E,
            max_relative = 1e-13
        );

        let below = moment_lower_bounds(params, 1.0, 1.0).unwrap();
        assert!(below.main.is_none());
        assert!(moment_lower_bounds(params, 1.0, 0.0)
            .unwrap()
            .main
            .is_none());
    }

    #[test]
    fn moment_main_bound_equals_ball_integral_at_optimum() {
        for &(n, s, m1, ratio) in &[
            (1u32, 0.5, 1.0, std::f64::consts::E),
            (2, 0.25, 0.7, 3.0),
            (2, 0.9, 2.5, 1.5),
        ] {
            let params = p(n, s);
            let mass = ratio * m1 * params.unit_ball();
            let bounds = moment_lower_bounds(params, m1, mass).unwrap();
            let r_opt = optimal_radius(params, m1, mass);
            let ball = m1 * ball_symbol_integral(params, r_opt).unwrap();
            assert_relative_eq!(bounds.main.unwrap(), ball, max_relative = 1e-12);
        }
    }
}
