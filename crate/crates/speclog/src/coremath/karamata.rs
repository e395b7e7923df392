//! Numeric check of the Karamata Tauberian step: partial sums of a
//! sequence `a_j ~ (c/Gamma(rho)) j^(rho-1) ln j` approach
//! `(c/Gamma(1+rho)) k^rho ln k`.

use super::CoreError;
use statrs::function::gamma::gamma;

/// Ratio of the direct partial sum to its Tauberian limit form:
///
/// `S_k / ( (c/Gamma(1+rho)) k^rho ln k )` with
/// `S_k = sum_{j=2}^{k} (c/Gamma(rho)) j^(rho-1) ln j`.
///
/// Summation starts at `j = 2` so the denominator never sees `ln 1 = 0`;
/// the finite offset is absorbed by the asymptotics. The ratio tends to 1
/// like `1 - 1/(2 ln k)` for `rho = 2`.
pub fn karamata_sum_ratio(rho: f64, c: f64, k: u64) -> Result<f64, CoreError> {
    if rho <= 0.0 || !rho.is_finite() {
        return Err(CoreError::NonPositive {
            name: "rho",
            value: rho,
        });
    }
    if c <= 0.0 || !c.is_finite() {
        return Err(CoreError::NonPositive {
            name: "c",
            value: c,
        });
    }
    if k < 3 {
        return Err(CoreError::IndexTooSmall(k));
    }
    let mut sum = 0.0;
    for j in 2..=k {
        let jf = j as f64;
        sum += jf.powf(rho - 1.0) * jf.ln();
    }
    sum *= c / gamma(rho);
    let kf = k as f64;
    let denom = c / gamma(1.0 + rho) * kf.powf(rho) * kf.ln();
    Ok(sum / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_at_thousand_matches_first_order_correction() {
        let ratio = karamata_sum_ratio(2.0, 1.0, 1000).unwrap();
        // Frozen from direct summation; agrees with 1 - 1/(2 ln k) to the
        // expected o(1/ln k).
        assert_relative_eq!(ratio, 0.9286178250379232, max_relative = 1e-12);
        let predicted = 1.0 - 1.0 / (2.0 * 1000.0f64.ln());
        assert!((ratio - predicted).abs() < 0.01);
    }

    #[test]
    fn convergence_improves_with_k() {
        let near = karamata_sum_ratio(2.0, 1.0, 1000).unwrap();
        let far = karamata_sum_ratio(2.0, 1.0, 1_000_000).unwrap();
        assert!((far - 1.0).abs() < (near - 1.0).abs());
    }

    #[test]
    fn ratio_within_log_band() {
        for &k in &[1_000u64, 10_000, 100_000, 1_000_000] {
            let ratio = karamata_sum_ratio(2.0, 1.0, k).unwrap();
            assert!(
                (ratio - 1.0).abs() <= 1.2 / (k as f64).ln(),
                "k={k}: ratio={ratio}"
            );
        }
    }

    #[test]
    fn fractional_rho_converges() {
        // rho = 1 + 2s/n with n = 1, s = 0.5, c = Gamma(2) = 1.
        let mut last = f64::INFINITY;
        for &k in &[1_000u64, 10_000, 100_000] {
            let ratio = karamata_sum_ratio(2.0, 1.0, k).unwrap();
            assert!((ratio - 1.0).abs() < last);
            last = (ratio - 1.0).abs();
        }
    }

    #[test]
    fn scale_factor_cancels() {
        let a = karamata_sum_ratio(1.7, 1.0, 5000).unwrap();
        let b = karamata_sum_ratio(1.7, 42.0, 5000).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
    }

    #[test]
    fn input_validation() {
        assert!(karamata_sum_ratio(0.0, 1.0, 100).is_err());
        assert!(karamata_sum_ratio(2.0, 0.0, 100).is_err());
        assert!(matches!(
            karamata_sum_ratio(2.0, 1.0, 2),
            Err(CoreError::IndexTooSmall(2))
        ));
    }
}
