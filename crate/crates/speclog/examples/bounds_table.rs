//! Tabulate the eigenvalue-sum lower bound, its regime, and the
//! asymptotic laws for an interval domain.
//!
//!     cargo run --example bounds_table

use speclog::bounds::{
    lower_bound_split, lower_bound_sum, positivity_threshold, small_volume_threshold,
    weyl_eigenvalue, weyl_sum, DomainGeometry,
};
use speclog::coremath::SpectralParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;

    println!(
        "interval (0, pi), s = 1/2; positivity threshold {:.4}, small-volume threshold {:.4}",
        positivity_threshold(params, &geom),
        small_volume_threshold(params)
    );
    println!(
        "{:>4} {:>14} {:>10} {:>14} {:>14}",
        "k", "lower bound", "regime", "weyl lambda_k", "weyl sum"
    );
    for k in 1..=12u64 {
        let (lower, regime) = lower_bound_sum(params, &geom, k)?;
        let (wk, ws) = if k >= 2 {
            (
                format!("{:14.5}", weyl_eigenvalue(params, &geom, k)?),
                format!("{:14.5}", weyl_sum(params, &geom, k)?),
            )
        } else {
            ("             -".into(), "             -".into())
        };
        println!("{k:>4} {lower:>14.5} {regime:>10} {wk} {ws}");
    }

    // the split of the main bound into leading term and correction
    let split = lower_bound_split(params, &geom, 10)?;
    let (total, _) = lower_bound_sum(params, &geom, 10)?;
    println!(
        "\nsplit at k = 10: leading {:.5} + correction {:.5} = {:.5} (direct {:.5})",
        split.leading,
        split.correction,
        split.leading + split.correction,
        total
    );
    Ok(())
}
