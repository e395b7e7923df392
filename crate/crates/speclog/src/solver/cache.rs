//! Binary cache for assembled form matrices.
//!
//! Little-endian layout: magic `SLFM`, version `u32`, `n` and `s` as
//! `f64`, basis size `u32`, symbol tag `u8`, a 32-byte configuration
//! digest, then the row-major upper triangle as `f64`. A cache file whose
//! digest does not match the requested configuration is ignored so the
//! caller reassembles.

use super::{FormMatrix, SymbolKind};
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"SLFM";
const VERSION: u32 = 1;

/// Serialise a matrix next to its digest.
pub fn write_matrix(path: &Path, matrix: &FormMatrix) -> io::Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(matrix.params().dimension() as f64).to_le_bytes());
    buf.extend_from_slice(&matrix.params().order().to_le_bytes());
    buf.extend_from_slice(&(matrix.size() as u32).to_le_bytes());
    buf.push(matrix.symbol().tag_byte());
    buf.extend_from_slice(matrix.digest());
    for v in matrix.upper_triangle() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&buf)
}

/// Read a cache file and return its triangle when it matches the expected
/// digest, size and symbol tag. Corruption and mismatches yield `None`
/// (the caller reassembles); only hard I/O failures error.
pub fn read_matrix_entries(
    path: &Path,
    expected_digest: &[u8; 32],
    expected_size: usize,
    expected_symbol: SymbolKind,
) -> io::Result<Option<Vec<f64>>> {
    let mut file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;

    let header_len = 4 + 4 + 8 + 8 + 4 + 1 + 32;
    if bytes.len() < header_len || &bytes[..4] != MAGIC {
        log::warn!(
            "cache {}: bad magic or truncated header, reassembling",
            path.display()
        );
        return Ok(None);
    }
    let mut off = 4;
    let mut take = |n: usize| {
        let slice = &bytes[off..off + n];
        off += n;
        slice
    };
    let version = u32::from_le_bytes(take(4).try_into().unwrap());
    let _n = f64::from_le_bytes(take(8).try_into().unwrap());
    let _s = f64::from_le_bytes(take(8).try_into().unwrap());
    let size = u32::from_le_bytes(take(4).try_into().unwrap()) as usize;
    let tag = take(1)[0];
    let digest: [u8; 32] = take(32).try_into().unwrap();

    if version != VERSION {
        log::warn!(
            "cache {}: version {} unsupported, reassembling",
            path.display(),
            version
        );
        return Ok(None);
    }
    if digest != *expected_digest || size != expected_size || tag != expected_symbol.tag_byte() {
        log::info!("cache {}: digest mismatch, reassembling", path.display());
        return Ok(None);
    }
    let triangle_len = size * (size + 1) / 2;
    if bytes.len() != header_len + 8 * triangle_len {
        log::warn!(
            "cache {}: payload length mismatch, reassembling",
            path.display()
        );
        return Ok(None);
    }
    let mut triangle = Vec::with_capacity(triangle_len);
    for i in 0..triangle_len {
        let start = header_len + 8 * i;
        triangle.push(f64::from_le_bytes(
            bytes[start..start + 8].try_into().unwrap(),
        ));
    }
    if triangle.iter().any(|v| !v.is_finite()) {
        log::warn!("cache {}: non-finite payload, reassembling", path.display());
        return Ok(None);
    }
    Ok(Some(triangle))
}

#[cfg(test)]
mod tests {
    use super::super::{assemble_form_matrix, matrix_digest, GalerkinBasis, QuadratureConfig};
    use super::*;
    use crate::bounds::DomainGeometry;
    use crate::coremath::SpectralParams;

    fn sample_matrix() -> (FormMatrix, GalerkinBasis, QuadratureConfig, SpectralParams) {
        let geom = DomainGeometry::from_box(&[std::f64::consts::PI]).unwrap();
        let basis = GalerkinBasis::new(&geom, 5).unwrap();
        let params = SpectralParams::new(1, 0.5).unwrap();
        let quad = QuadratureConfig::auto_for(&basis);
        let m = assemble_form_matrix(&basis, params, &quad, SymbolKind::FractionalLog).unwrap();
        (m, basis, quad, params)
    }

    #[test]
    fn round_trip_and_digest_guard() {
        let (m, basis, quad, params) = sample_matrix();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.slfm");
        write_matrix(&path, &m).unwrap();

        let digest = matrix_digest(&basis, params, &quad, SymbolKind::FractionalLog);
        let triangle = read_matrix_entries(&path, &digest, m.size(), SymbolKind::FractionalLog)
            .unwrap()
            .expect("digest matches");
        let rebuilt = FormMatrix::from_cached_triangle(
            triangle,
            &basis,
            params,
            &quad,
            SymbolKind::FractionalLog,
            digest,
        );
        for j in 0..m.size() {
            for k in 0..m.size() {
                assert_eq!(m.get(j, k), rebuilt.get(j, k), "bitwise round trip");
            }
        }

        // wrong digest: ignored, not an error
        let other = matrix_digest(&basis, params, &quad, SymbolKind::fractional(0.5).unwrap());
        assert!(
            read_matrix_entries(&path, &other, m.size(), SymbolKind::FractionalLog)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn corrupted_magic_is_ignored() {
        let (m, basis, quad, params) = sample_matrix();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.slfm");
        write_matrix(&path, &m).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        let digest = matrix_digest(&basis, params, &quad, SymbolKind::FractionalLog);
        assert!(
            read_matrix_entries(&path, &digest, m.size(), SymbolKind::FractionalLog)
                .unwrap()
                .is_none()
        );
        // truncation is also survivable
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(
            read_matrix_entries(&path, &digest, m.size(), SymbolKind::FractionalLog)
                .unwrap()
                .is_none()
        );
        // missing file too
        assert!(read_matrix_entries(
            &dir.path().join("absent.slfm"),
            &digest,
            m.size(),
            SymbolKind::FractionalLog
        )
        .unwrap()
        .is_none());
    }
}
