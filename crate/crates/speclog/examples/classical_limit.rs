//! End-to-end quadrature validation: the order-one fractional multiplier
//! reproduces the classical Dirichlet Laplacian spectrum j^2 on (0, pi).
//!
//!     cargo run --example classical_limit

use speclog::bounds::DomainGeometry;
use speclog::coremath::SpectralParams;
use speclog::solver::{
    assemble_form_matrix, solve_spectrum, GalerkinBasis, QuadratureConfig, SymbolKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let basis = GalerkinBasis::new(&geom, 60)?;
    let quad = QuadratureConfig::auto_for(&basis);

    let matrix = assemble_form_matrix(&basis, params, &quad, SymbolKind::fractional(1.0)?)?;
    let spectrum = solve_spectrum(&matrix)?;

    println!(
        "{:>4} {:>18} {:>10} {:>12}",
        "j", "ritz value", "j^2", "rel error"
    );
    let mut worst = 0.0f64;
    for j in 1..=20usize {
        let got = spectrum.eigenvalues()[j - 1];
        let want = (j * j) as f64;
        let rel = (got - want).abs() / want;
        worst = worst.max(rel);
        println!("{j:>4} {got:>18.10} {want:>10.1} {rel:>12.2e}");
    }
    println!("worst relative error: {worst:.2e}");
    Ok(())
}
