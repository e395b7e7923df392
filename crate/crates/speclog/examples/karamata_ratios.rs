//! Tauberian summation at work: partial sums of `j^(rho-1) ln j` against
//! their limit form, plus the same effect for the eigenvalue law summed
//! into the sum law.
//!
//!     cargo run --example karamata_ratios

use speclog::bounds::{weyl_eigenvalue, weyl_sum, DomainGeometry};
use speclog::coremath::{karamata_sum_ratio, SpectralParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>9} {:>12} {:>12}", "k", "ratio", "1.2 / ln k");
    for &k in &[1_000u64, 10_000, 100_000, 1_000_000] {
        let ratio = karamata_sum_ratio(2.0, 1.0, k)?;
        println!("{k:>9} {ratio:>12.6} {:>12.6}", 1.2 / (k as f64).ln());
    }

    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let k = 100_000u64;
    let mut acc = 0.0;
    for j in 2..=k {
        acc += weyl_eigenvalue(params, &geom, j)?;
    }
    println!(
        "\nsummed eigenvalue law over j <= {k} against the sum law: {:.6}",
        acc / weyl_sum(params, &geom, k)?
    );
    Ok(())
}
