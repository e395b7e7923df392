//! Cutoff plane-wave probe: averaged quadratic form of modulated boundary
//! cutoffs, its ball-symbol main term, and the scaling of the remainder in
//! the ball radius and the layer width.
//!
//!     cargo run --example cutoff_probe

use speclog::bounds::DomainGeometry;
use speclog::coremath::{CutoffProfile, SpectralParams};
use speclog::numeric::log_log_slope;
use speclog::solver::{cutoff_planewave_energy, QuadratureConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let quad = QuadratureConfig {
        cutoff_radius: 100.0,
        points_per_axis: 1 << 18,
        tail_order: 6,
        singularity_guard: 1e-6,
    };

    let radii = [20.0, 30.0, 40.0];
    let widths = [0.02, 0.05, 0.1];
    let mut table = Vec::new();
    println!(
        "{:>6} {:>6} {:>14} {:>14} {:>12}",
        "r", "sigma", "lhs", "main term", "remainder"
    );
    for &sigma in &widths {
        let profile = CutoffProfile::new(sigma)?;
        for &r in &radii {
            let e = cutoff_planewave_energy(&profile, &geom, params, r, &quad)?;
            println!(
                "{r:>6.1} {sigma:>6.2} {:>14.3} {:>14.3} {:>12.3}",
                e.lhs, e.main_term, e.remainder
            );
            table.push((r, sigma, e.remainder));
        }
    }

    let r_pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|(_, s, _)| *s == 0.05)
        .map(|(r, _, rem)| (*r, *rem))
        .collect();
    let s_pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|(r, _, _)| *r == 30.0)
        .map(|(_, s, rem)| (*s, *rem))
        .collect();
    println!(
        "\nremainder exponents: in r (sigma = 0.05): {:.3}; in sigma (r = 30): {:.3}",
        log_log_slope(&r_pts).unwrap(),
        log_log_slope(&s_pts).unwrap()
    );
    println!(
        "the remainder grows as the layer shrinks: the layer derivative energy scales like 1/sigma"
    );
    Ok(())
}
