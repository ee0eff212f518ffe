use std::fmt;
use std::str::FromStr;

use super::SensorError;

/// Raw magnetometer counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MagSample {
    pub x: i16,
    pub y: i16,
    pub z: i16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HmcConfig {
    pub addr7: u8,
    /// 1 sample averaged, 15 Hz output rate.
    pub cra: u8,
    /// Gain +/-2.5 Ga.
    pub crb: u8,
    /// Single-measurement mode.
    pub mode: u8,
    pub read_len: u8,
}

pub const HMC_CONFIG: HmcConfig = HmcConfig { addr7: 0x3C, cra: 0x10, crb: 0x60, mode: 0x01, read_len: 6 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum I2cAction {
    WriteCra,
    WriteCrb,
    WriteMode,
    /// Read the data registers; the byte is the length.
    Read,
}

impl I2cAction {
    /// Register pointer on the device.
    pub const fn register(self) -> u8 {
        match self {
            I2cAction::WriteCra => 0x00,
            I2cAction::WriteCrb => 0x01,
            I2cAction::WriteMode => 0x02,
            I2cAction::Read => 0x03,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            I2cAction::WriteCra => "CRA",
            I2cAction::WriteCrb => "CRB",
            I2cAction::WriteMode => "MODE",
            I2cAction::Read => "READ",
        }
    }
}

/// The write/read script issued on every sample.
pub fn hmc_config_sequence() -> [(I2cAction, u8); 4] {
    let c = HMC_CONFIG;
    [
        (I2cAction::WriteCra, c.cra),
        (I2cAction::WriteCrb, c.crb),
        (I2cAction::WriteMode, c.mode),
        (I2cAction::Read, c.read_len),
    ]
}

impl HmcConfig {
    /// Bytes put on the bus per action: writes are `[addr, reg, value]`,
    /// the read request is `[addr, first data register]`.
    pub fn serialize(&self) -> Vec<Vec<u8>> {
        hmc_config_sequence()
            .iter()
            .map(|&(action, byte)| match action {
                I2cAction::Read => vec![self.addr7, action.register()],
                _ => vec![self.addr7, action.register(), byte],
            })
            .collect()
    }
}

/// Order of the three big-endian words in a data read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HmcOrder {
    /// Device register order: X, Z, Y.
    #[default]
    Xzy,
    Xyz,
}

impl FromStr for HmcOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xzy" => Ok(HmcOrder::Xzy),
            "xyz" => Ok(HmcOrder::Xyz),
            other => Err(format!("unknown axis order {other:?}, expected xzy or xyz")),
        }
    }
}

impl fmt::Display for HmcOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HmcOrder::Xzy => "xzy",
            HmcOrder::Xyz => "xyz",
        })
    }
}

pub fn decode_hmc_frame(bytes: &[u8], order: HmcOrder) -> Result<MagSample, SensorError> {
    let b: &[u8; 6] = bytes.try_into().map_err(|_| SensorError::Length { expected: 6, got: bytes.len() })?;
    let word = |i: usize| i16::from_be_bytes([b[i], b[i + 1]]);
    let (x, second, third) = (word(0), word(2), word(4));
    Ok(match order {
        HmcOrder::Xzy => MagSample { x, z: second, y: third },
        HmcOrder::Xyz => MagSample { x, y: second, z: third },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence() {
        let seq = hmc_config_sequence();
        assert_eq!(seq.len(), 4);
        let named: Vec<_> = seq.iter().map(|(a, b)| (a.name(), *b)).collect();
        assert_eq!(named, [("CRA", 0x10), ("CRB", 0x60), ("MODE", 0x01), ("READ", 6)]);
        let wire = HMC_CONFIG.serialize();
        assert!(wire.iter().all(|w| w[0] == 0x3C));
        assert_eq!(wire[0], [0x3C, 0x00, 0x10]);
        assert_eq!(wire[3], [0x3C, 0x03]);
    }

    #[test]
    fn frames() {
        let d = |b: [u8; 6]| decode_hmc_frame(&b, HmcOrder::Xzy).unwrap();
        assert_eq!(d([0; 6]), MagSample::default());
        assert_eq!(d([0x12, 0x34, 0, 0, 0, 0]).x, 4660);
        assert_eq!(d([0xFF, 0xFF, 0, 0, 0, 0]).x, -1);
        assert_eq!(d([0x80, 0x00, 0x7F, 0xFF, 0, 1]), MagSample { x: -32768, z: 32767, y: 1 });
        let xyz = decode_hmc_frame(&[0, 0, 0, 2, 0, 3], HmcOrder::Xyz).unwrap();
        assert_eq!(xyz, MagSample { x: 0, y: 2, z: 3 });
        assert!(decode_hmc_frame(&[0; 5], HmcOrder::Xzy).is_err());
        assert!(decode_hmc_frame(&[0; 7], HmcOrder::Xzy).is_err());
    }

    #[test]
    fn order_parse() {
        assert_eq!("XYZ".parse::<HmcOrder>().unwrap(), HmcOrder::Xyz);
        assert_eq!(HmcOrder::default().to_string(), "xzy");
        assert!("zyx".parse::<HmcOrder>().is_err());
    }
}
