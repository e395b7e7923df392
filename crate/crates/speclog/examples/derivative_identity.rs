//! The fractional-logarithmic multiplier is the order-derivative of the
//! fractional one: differencing fractional matrices across the order
//! reproduces the assembled fractional-log matrix to O(h^2).
//!
//!     cargo run --example derivative_identity

use speclog::bounds::DomainGeometry;
use speclog::coremath::SpectralParams;
use speclog::solver::{derivative_oracle_check, GalerkinBasis, QuadratureConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let basis = GalerkinBasis::new(&geom, 20)?;
    let quad = QuadratureConfig::auto_for(&basis);

    println!("{:>8} {:>14}", "h", "max rel error");
    let mut last = None;
    for &h in &[1e-2, 1e-3] {
        let err = derivative_oracle_check(&basis, params, &quad, h)?;
        println!("{h:>8.0e} {err:>14.3e}");
        if let Some(prev) = last {
            println!(
                "decay factor {:.1} (quadratic truncation predicts ~100)",
                prev / err
            );
        }
        last = Some(err);
    }
    Ok(())
}
