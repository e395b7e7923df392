//! C^2 boundary cutoff: a fixed quintic ramp composed with the distance to
//! the boundary of a box, scaled by a layer width `sigma`. The resulting
//! function is 1 away from the boundary, 0 outside the domain, and varies
//! only in the layer of width `sigma`.

use super::CoreError;
use crate::bounds::DomainGeometry;
use crate::numeric::integrate_gl16;

/// Quintic smoothstep `t^3 (10 - 15 t + 6 t^2)`, clamped to 0 below 0 and
/// 1 above 1. It is C^2 with vanishing first and second derivatives at both
/// ends.
pub fn ramp(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Boundary cutoff profile with layer width `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    sigma: f64,
}

impl CutoffProfile {
    pub fn new(sigma: f64) -> Result<Self, CoreError> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(CoreError::BadLayerWidth {
                sigma,
                limit: f64::INFINITY,
            });
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `int_0^1 ramp(t)^2 dt`, the squared-mass fraction of one layer.
    pub fn ramp_sq_mass(&self) -> f64 {
        integrate_gl16(&|t| ramp(t) * ramp(t), 0.0, 1.0, 1)
    }

    /// Exact `int_Omega w_sigma^2` for a one-dimensional box `(0, length)`.
    ///
    /// The ramp squared is a polynomial of degree ten, so the fixed
    /// Gauss rule evaluates the layer integrals exactly.
    pub fn squared_mass_1d(&self, length: f64) -> Result<f64, CoreError> {
        if self.sigma >= 0.5 * length {
            return Err(CoreError::BadLayerWidth {
                sigma: self.sigma,
                limit: 0.5 * length,
            });
        }
        Ok(length - 2.0 * self.sigma + 2.0 * self.sigma * self.ramp_sq_mass())
    }

    /// Sample `w_sigma` for the 1d box `(0, length)` at `x`.
    pub fn sample_1d(&self, length: f64, x: f64) -> f64 {
        if x <= 0.0 || x >= length {
            return 0.0;
        }
        ramp(x.min(length - x) / self.sigma)
    }
}

/// `w_sigma(x) = ramp(dist(x, boundary)/sigma)` for `x` inside the box,
/// zero outside. Boxes are anchored at the origin, so the distance to the
/// boundary is the minimum of `x_i` and `L_i - x_i` over the axes.
pub fn cutoff_value(
    profile: &CutoffProfile,
    geom: &DomainGeometry,
    x: &[f64],
) -> Result<f64, CoreError> {
    let lengths = geom
        .box_lengths()
        .expect("cutoff evaluation requires a box domain");
    assert_eq!(
        lengths.len(),
        x.len(),
        "point dimension must match the box dimension"
    );
    let mut dist = f64::INFINITY;
    for (xi, li) in x.iter().zip(lengths) {
        if *xi <= 0.0 || *xi >= *li {
            return Ok(0.0);
        }
        dist = dist.min(xi.min(li - xi));
    }
    Ok(ramp(dist / profile.sigma))
}
