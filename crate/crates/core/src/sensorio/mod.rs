//! Byte-level codecs for the seed sensors and the FPGA-to-microcontroller
//! link, plus sensor-log ingestion and an OS entropy stand-in.
//!
//! Only the bytes are modelled. Bus timing, ACK/NACK and electrical behaviour
//! are out of scope.

mod adc;
mod hmc;
mod log;
mod uart;

use thiserror::Error;

pub use adc::{decode_mcp3202, encode_mcp3202, AdcSample, AdcSource, MCP3202_FRAME_BITS};
pub use hmc::{decode_hmc_frame, hmc_config_sequence, HmcConfig, HmcOrder, I2cAction, MagSample, HMC_CONFIG};
pub use log::{read_sensor_log, read_sensor_log_from, SENSOR_LOG_HEADER};
pub use uart::{read_seed_file, uart_chunk, uart_unchunk};

use crate::prng::Seed64;

#[derive(Debug, Error)]
pub enum SensorError {
    #[error("expected {expected} bytes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("MCP3202 frame {frame:#06x}: {reason}")]
    Framing { frame: u32, reason: &'static str },
    #[error("{field} value {value} out of range")]
    Range { field: &'static str, value: i64 },
    #[error("line {line}: {message}")]
    Log { line: u64, message: String },
    #[error("seed file: {0}")]
    SeedFile(String),
    #[error("entropy source unavailable: {0}")]
    Entropy(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One reading of the four seed sensors, in display order A-D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedRecord {
    /// A: magnetic field.
    pub mag: MagSample,
    /// B: microphone.
    pub mic: AdcSample,
    /// C: light.
    pub light: AdcSample,
    /// D: temperature and humidity.
    pub temp_hum: u16,
    pub timestamp: Option<u64>,
}

impl SeedRecord {
    pub const ZERO: SeedRecord = SeedRecord {
        mag: MagSample { x: 0, y: 0, z: 0 },
        mic: AdcSample { source: AdcSource::Xadc, channel: 0, value: 0 },
        light: AdcSample { source: AdcSource::Mcp3202A, channel: 0, value: 0 },
        temp_hum: 0,
        timestamp: None,
    };
}

fn fold_adc(v: u16) -> u16 {
    (v << 4) ^ (v >> 8)
}

/// Packs a record into the 64-bit seed:
///
/// * magnetic field: `x ^ rotl(y, 5) ^ rotl(z, 10)`
/// * microphone and light: `v << 4 ^ v >> 8` of the 12-bit sample
/// * temperature/humidity: as is
pub fn pack_seed64(rec: &SeedRecord) -> Seed64 {
    let mag = rec.mag.x as u16 ^ (rec.mag.y as u16).rotate_left(5) ^ (rec.mag.z as u16).rotate_left(10);
    Seed64::from_fields(mag, fold_adc(rec.mic.value), fold_adc(rec.light.value), rec.temp_hum)
}

/// Fills every field from the platform entropy source. Not replayable; log
/// the packed seed if the run must be reproduced.
pub fn os_entropy_seed() -> Result<SeedRecord, SensorError> {
    let mut buf = [0u8; 14];
    getrandom::getrandom(&mut buf).map_err(|e| SensorError::Entropy(e.to_string()))?;
    let word = |i: usize| u16::from_le_bytes([buf[i], buf[i + 1]]);
    Ok(SeedRecord {
        mag: MagSample { x: word(0) as i16, y: word(2) as i16, z: word(4) as i16 },
        mic: AdcSample { source: AdcSource::Xadc, channel: 0, value: word(6) & 0x0FFF },
        light: AdcSample { source: AdcSource::Mcp3202A, channel: 0, value: word(8) & 0x0FFF },
        temp_hum: word(10),
        timestamp: std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_examples() {
        assert_eq!(pack_seed64(&SeedRecord::ZERO), Seed64(0));
        let rec = SeedRecord { mag: MagSample { x: 1, y: 0, z: 0 }, ..SeedRecord::ZERO };
        assert_eq!(pack_seed64(&rec), Seed64(1 << 48));
    }

    #[test]
    fn pack_bits_land_in_their_field() {
        for bit in 0..16 {
            let v = 1u16 << bit;
            let m = SeedRecord { mag: MagSample { x: v as i16, y: 0, z: 0 }, ..SeedRecord::ZERO };
            assert_eq!(pack_seed64(&m).0 & !(0xFFFF << 48), 0);
            let m = SeedRecord { mag: MagSample { x: 0, y: v as i16, z: 0 }, ..SeedRecord::ZERO };
            assert_eq!(pack_seed64(&m).0 & !(0xFFFF << 48), 0);
            let m = SeedRecord { mag: MagSample { x: 0, y: 0, z: v as i16 }, ..SeedRecord::ZERO };
            assert_eq!(pack_seed64(&m).0 & !(0xFFFF << 48), 0);
            let t = SeedRecord { temp_hum: v, ..SeedRecord::ZERO };
            assert_eq!(pack_seed64(&t).0, v as u64);
        }
        for bit in 0..12 {
            let v = 1u16 << bit;
            let mic = SeedRecord { mic: AdcSample { value: v, ..SeedRecord::ZERO.mic }, ..SeedRecord::ZERO };
            let s = pack_seed64(&mic).0;
            assert_ne!(s, 0);
            assert_eq!(s & !(0xFFFF << 32), 0);
            let light = SeedRecord { light: AdcSample { value: v, ..SeedRecord::ZERO.light }, ..SeedRecord::ZERO };
            let s = pack_seed64(&light).0;
            assert_ne!(s, 0);
            assert_eq!(s & !(0xFFFF << 16), 0);
        }
    }

    #[test]
    fn entropy_records_are_in_bounds_and_distinct() {
        let mut seen = std::collections::HashSet::new();
        for _ in 0..100 {
            let r = os_entropy_seed().unwrap();
            assert!(r.mic.value <= 4095 && r.light.value <= 4095);
            assert!(seen.insert(pack_seed64(&r)));
        }
    }
}
