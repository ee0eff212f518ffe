use std::path::Path;

use super::SensorError;
use crate::prng::Seed64;

/// Splits the seed into the eight bytes sent over the link, low byte first.
pub fn uart_chunk(seed: Seed64) -> [u8; 8] {
    seed.0.to_le_bytes()
}

pub fn uart_unchunk(bytes: &[u8]) -> Result<Seed64, SensorError> {
    let b: [u8; 8] = bytes.try_into().map_err(|_| SensorError::Length { expected: 8, got: bytes.len() })?;
    Ok(Seed64(u64::from_le_bytes(b)))
}

/// Accepts either eight raw bytes in link order or 16 hex characters
/// (surrounding whitespace allowed).
pub fn read_seed_file(path: &Path) -> Result<Seed64, SensorError> {
    let data = std::fs::read(path)?;
    if data.len() == 8 {
        return uart_unchunk(&data);
    }
    let text = std::str::from_utf8(&data)
        .map_err(|_| SensorError::SeedFile(format!("{} bytes, neither 8 raw bytes nor hex text", data.len())))?
        .trim();
    if text.len() != 16 {
        return Err(SensorError::SeedFile(format!(
            "expected 8 raw bytes or 16 hex characters, found {} bytes",
            data.len()
        )));
    }
    text.parse::<Seed64>().map_err(|e| SensorError::SeedFile(e.to_string()))
}
