//! Cutoff plane-wave probe: the averaged quadratic form of modulated
//! cutoffs against the ball-averaged symbol, one dimension.
//!
//! For `v(z, x) = w_sigma(x) e^(-i x z)` the form in `x` evaluates to
//! `int m(|xi|) |w^(xi + z)|^2 dxi`; averaging `z` over `(-r, r)` and
//! comparing with `M(r) int w^2`, where `M(r)` is the ball integral of the
//! symbol, isolates the cutoff remainder whose scaling the experiments
//! regress.

use super::{SolverError, SymbolKind};
use crate::bounds::DomainGeometry;
use crate::coremath::{ball_symbol_integral, CoreError, CutoffProfile, SpectralParams};
use crate::numeric::gauss_legendre_16;
use crate::solver::QuadratureConfig;
use nalgebra::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;

type Complex64 = Complex<f64>;

/// Probe output: the averaged form, its ball-symbol main term, and their
/// difference.
#[derive(Debug, Clone, Copy)]
pub struct ProbeEnergy {
    pub lhs: f64,
    pub main_term: f64,
    pub remainder: f64,
}

/// Minimum radius at which the ball symbol integral is positive:
/// `exp(1/(n+2s))`.
pub fn positivity_radius(params: SpectralParams) -> f64 {
    (1.0 / params.exponent()).exp()
}

/// Evaluate the probe at ball radius `r` and the profile's layer width.
///
/// The cutoff transform is taken by a dense FFT of `w_sigma` sampled on a
/// padded interval (16 sides, at least 2^18 samples); the frequency sum is
/// a Simpson rule over the transform bins, nested inside a Gauss panel
/// quadrature of the `z` average. Rejects radii below the positivity
/// radius of the main term and transform grids whose Nyquist frequency
/// cannot cover `cutoff + r`.
pub fn cutoff_planewave_energy(
    profile: &CutoffProfile,
    geom: &DomainGeometry,
    params: SpectralParams,
    r: f64,
    quad: &QuadratureConfig,
) -> Result<ProbeEnergy, SolverError> {
    if params.dimension() != 1 || geom.dimension() != 1 {
        return Err(SolverError::ProbeNeedsInterval);
    }
    let length = geom.box_lengths().ok_or(SolverError::ProbeNeedsInterval)?[0];
    if profile.sigma() >= 0.5 * length {
        return Err(SolverError::Core(CoreError::BadLayerWidth {
            sigma: profile.sigma(),
            limit: 0.5 * length,
        }));
    }
    let min_r = positivity_radius(params);
    if r < min_r {
        return Err(SolverError::ProbeRadiusTooSmall { r, min: min_r });
    }

    let samples = (quad.points_per_axis as usize)
        .next_power_of_two()
        .max(1 << 18);
    let period = 16.0 * length;
    let nyquist = std::f64::consts::PI * samples as f64 / period;
    let needed = quad.cutoff_radius + r;
    if nyquist < needed {
        return Err(SolverError::NyquistTooLow { nyquist, needed });
    }

    // Dense transform of the sampled cutoff.
    let step = period / samples as f64;
    let mut data: Vec<Complex64> = (0..samples)
        .map(|m| Complex64::new(profile.sample_1d(length, m as f64 * step), 0.0))
        .collect();
    FftPlanner::new()
        .plan_fft_forward(samples)
        .process(&mut data);
    let ft_scale = step / (2.0 * std::f64::consts::PI).sqrt();

    // Bins ordered by signed frequency u_k = 2 pi k / period; drop the
    // single most-negative bin so the Simpson rule sees an odd count.
    let du = 2.0 * std::f64::consts::PI / period;
    let half = samples / 2;
    let bins = 2 * half - 1;
    let mut power = vec![0.0f64; bins];
    let mut freq = vec![0.0f64; bins];
    for i in 0..bins {
        let k_signed = i as i64 - (half as i64 - 1);
        let k_fft = if k_signed >= 0 {
            k_signed as usize
        } else {
            (samples as i64 + k_signed) as usize
        };
        let value = data[k_fft] * ft_scale;
        power[i] = value.norm_sqr();
        freq[i] = k_signed as f64 * du;
    }
    let simpson: Vec<f64> = (0..bins)
        .map(|i| {
            let w = if i == 0 || i == bins - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * du / 3.0
        })
        .collect();

    // z average over (-r, r): the integrand is even in z, so fold to [0, r].
    let panels = (r / 2.0).ceil() as usize;
    let z_nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let lo = r * p as f64 / panels as f64;
            let hi = r * (p + 1) as f64 / panels as f64;
            gauss_legendre_16(lo, hi)
        })
        .collect();

    let inner: Vec<f64> = z_nodes
        .par_iter()
        .map(|&(z, _)| {
            let mut acc = 0.0;
            for i in 0..bins {
                let m = SymbolKind::FractionalLog.value((freq[i] - z).abs(), params);
                acc += simpson[i] * power[i] * m;
            }
            acc
        })
        .collect();
    let lhs = 2.0
        * z_nodes
            .iter()
            .zip(&inner)
            .map(|((_, w), e)| w * e)
            .sum::<f64>();

    let squared_mass = profile.squared_mass_1d(length)?;
    let main_term = ball_symbol_integral(params, r)? * squared_mass;
    Ok(ProbeEnergy {
        lhs,
        main_term,
        remainder: lhs - main_term,
    })
}

/// Same probe value computed through the closed-form antiderivative of
/// the symbol in place of the `z` quadrature: used as an internal
/// cross-check of the nested route.
#[cfg(test)]
fn probe_by_kernel(
    profile: &CutoffProfile,
    geom: &DomainGeometry,
    params: SpectralParams,
    r: f64,
    quad: &QuadratureConfig,
) -> Result<f64, SolverError> {
    let length = geom.box_lengths().unwrap()[0];
    let samples = (quad.points_per_axis as usize)
        .next_power_of_two()
        .max(1 << 18);
    let period = 16.0 * length;
    let step = period / samples as f64;
    let mut data: Vec<Complex64> = (0..samples)
        .map(|m| Complex64::new(profile.sample_1d(length, m as f64 * step), 0.0))
        .collect();
    FftPlanner::new()
        .plan_fft_forward(samples)
        .process(&mut data);
    let ft_scale = step / (2.0 * std::f64::consts::PI).sqrt();
    let du = 2.0 * std::f64::consts::PI / period;
    let half = samples / 2;
    let bins = 2 * half - 1;
    // signed antiderivative of the radial symbol along the line
    let anti = |x: f64| -> f64 {
        if x == 0.0 {
            0.0
        } else {
            0.5 * x.signum() * ball_symbol_integral(params, x.abs()).unwrap()
        }
    };
    let mut acc = 0.0;
    for i in 0..bins {
        let k_signed = i as i64 - (half as i64 - 1);
        let k_fft = if k_signed >= 0 {
            k_signed as usize
        } else {
            (samples as i64 + k_signed) as usize
        };
        let u = k_signed as f64 * du;
        let p = (data[k_fft] * ft_scale).norm_sqr();
        let w = if i == 0 || i == bins - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * du / 3.0 * p * (anti(u + r) - anti(u - r));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    fn setup() -> (DomainGeometry, SpectralParams, QuadratureConfig) {
        let geom = DomainGeometry::from_box(&[PI]).unwrap();
        let params = SpectralParams::new(1, 0.5).unwrap();
        let quad = QuadratureConfig {
            cutoff_radius: 100.0,
            points_per_axis: 1 << 18,
            tail_order: 6,
            singularity_guard: 1e-6,
        };
        (geom, params, quad)
    }

    #[test]
    fn transform_mass_matches_plancherel() {
        // sum |w^|^2 du = int w^2 dx, and the defect from |Omega| stays
        // within the layer volume.
        let (geom, params, quad) = setup();
        for &sigma in &[0.02, 0.1] {
            let profile = CutoffProfile::new(sigma).unwrap();
            let energy = cutoff_planewave_energy(&profile, &geom, params, 20.0, &quad).unwrap();
            let sq = profile.squared_mass_1d(PI).unwrap();
            assert!(PI - sq >= 0.0 && PI - sq <= 2.0 * sigma + 1e-12);
            assert!(energy.lhs.is_finite());
        }
    }

    #[test]
    fn nested_route_matches_kernel_route() {
        let (geom, params, quad) = setup();
        let profile = CutoffProfile::new(0.05).unwrap();
        let nested = cutoff_planewave_energy(&profile, &geom, params, 25.0, &quad).unwrap();
        let kernel = probe_by_kernel(&profile, &geom, params, 25.0, &quad).unwrap();
        assert_relative_eq!(nested.lhs, kernel, max_relative = 1e-6);
    }

    #[test]
    fn rejects_small_radius_and_low_nyquist() {
        let (geom, params, quad) = setup();
        let profile = CutoffProfile::new(0.05).unwrap();
        assert!(matches!(
            cutoff_planewave_energy(&profile, &geom, params, 1.0, &quad),
            Err(SolverError::ProbeRadiusTooSmall { .. })
        ));
        let huge_cutoff = QuadratureConfig {
            cutoff_radius: 1.0e6,
            ..quad
        };
        assert!(matches!(
            cutoff_planewave_energy(&profile, &geom, params, 20.0, &huge_cutoff),
            Err(SolverError::NyquistTooLow { .. })
        ));
        let wide_layer = CutoffProfile::new(2.0).unwrap();
        assert!(cutoff_planewave_energy(&wide_layer, &geom, params, 20.0, &quad).is_err());
    }

    #[test]
    fn main_term_uses_the_ball_integral_identity() {
        let (geom, params, quad) = setup();
        let profile = CutoffProfile::new(0.05).unwrap();
        let energy = cutoff_planewave_energy(&profile, &geom, params, 30.0, &quad).unwrap();
        let expect =
            ball_symbol_integral(params, 30.0).unwrap() * profile.squared_mass_1d(PI).unwrap();
        assert_relative_eq!(energy.main_term, expect, max_relative = 1e-12);
        assert_relative_eq!(
            energy.remainder,
            energy.lhs - energy.main_term,
            max_relative = 1e-12
        );
    }
}
