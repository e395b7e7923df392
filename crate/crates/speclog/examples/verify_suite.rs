//! Run the full verification suite in-process and print the report path.
//! This is the long example: it assembles bases up to 400 modes twice over
//! and sweeps the cutoff probe (a few minutes on two cores).
//!
//!     cargo run --example verify_suite

use speclog::harness::{cmd_verify, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        output_dir: std::env::temp_dir().join("speclog-verify-example"),
        ..ExperimentConfig::default()
    };
    let (path, passed) = cmd_verify(&cfg)?;
    println!("report: {}", path.display());
    println!(
        "overall: {}",
        if passed {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Ok(())
}
