//! The binary form-matrix cache: write, reload under a matching digest,
//! and watch a mismatched digest force reassembly.
//!
//!     cargo run --example matrix_cache

use speclog::bounds::DomainGeometry;
use speclog::coremath::SpectralParams;
use speclog::solver::{
    assemble_form_matrix, matrix_digest, read_matrix_entries, write_matrix, GalerkinBasis,
    QuadratureConfig, SymbolKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SpectralParams::new(1, 0.5)?;
    let geom = DomainGeometry::from_box(&[std::f64::consts::PI])?;
    let basis = GalerkinBasis::new(&geom, 30)?;
    let quad = QuadratureConfig::auto_for(&basis);

    let matrix = assemble_form_matrix(&basis, params, &quad, SymbolKind::FractionalLog)?;
    let dir = std::env::temp_dir().join("speclog-cache-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("matrix.slfm");
    write_matrix(&path, &matrix)?;
    println!(
        "wrote {} ({} bytes)",
        path.display(),
        std::fs::metadata(&path)?.len()
    );

    let digest = matrix_digest(&basis, params, &quad, SymbolKind::FractionalLog);
    let reloaded = read_matrix_entries(&path, &digest, basis.size(), SymbolKind::FractionalLog)?;
    println!("reload under the matching digest: {}", reloaded.is_some());

    let other = matrix_digest(&basis, params, &quad, SymbolKind::fractional(0.25)?);
    let mismatch = read_matrix_entries(&path, &other, basis.size(), SymbolKind::fractional(0.25)?)?;
    println!(
        "reload under a different symbol's digest: {:?} (forces reassembly)",
        mismatch.map(|_| ())
    );

    std::fs::remove_file(&path).ok();
    Ok(())
}
