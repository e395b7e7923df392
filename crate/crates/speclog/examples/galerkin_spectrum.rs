//! Assemble the fractional-logarithmic form matrix on an interval, solve
//! it, and compare the Ritz eigenvalue sums against the closed-form lower
//! bound and the sum asymptotics.
//!
//!     cargo run --example galerkin_spectrum

use speclog::bounds::{lower_bound_sum, weyl_sum, DomainGeometry};
use speclog::coremath::SpectralParams;
use speclog::solver::{
    assemble_form_matrix, solve_spectrum, GalerkinBasis, QuadratureConfig, SymbolKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let basis = GalerkinBasis::new(&geom, 120)?;
    let quad = QuadratureConfig::auto_for(&basis);

    println!(
        "assembling {}x{} matrix (cutoff {:.1}, {} nodes per axis) ...",
        basis.size(),
        basis.size(),
        quad.cutoff_radius,
        quad.points_per_axis
    );
    let matrix = assemble_form_matrix(&basis, params, &quad, SymbolKind::FractionalLog)?;
    println!(
        "max neglected-tail estimate {:.2e}, imaginary residual {:.2e}",
        matrix.max_error_estimate().unwrap_or(0.0),
        matrix.max_imag_residual()
    );
    let spectrum = solve_spectrum(&matrix)?;

    println!("first eigenvalues: {:?}", &spectrum.eigenvalues()[..6]);
    println!(
        "\n{:>4} {:>14} {:>14} {:>14}",
        "k", "ritz sum", "lower bound", "weyl sum"
    );
    for k in [1u64, 2, 4, 8, 16, 32, 60] {
        let sum = spectrum.partial_sum(k as usize);
        let (lower, _) = lower_bound_sum(params, &geom, k)?;
        let weyl = if k >= 2 {
            format!("{:14.4}", weyl_sum(params, &geom, k)?)
        } else {
            "             -".into()
        };
        println!("{k:>4} {sum:>14.4} {lower:>14.4} {weyl}");
        assert!(sum >= lower, "Ritz sums dominate the lower bound");
    }
    Ok(())
}
