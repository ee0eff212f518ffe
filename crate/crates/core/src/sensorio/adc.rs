use std::fmt;
use std::str::FromStr;

use super::SensorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdcSource {
    Xadc,
    Mcp3202A,
    Mcp3202B,
}

impl AdcSource {
    pub fn name(self) -> &'static str {
        match self {
            AdcSource::Xadc => "XADC",
            AdcSource::Mcp3202A => "MCP3202_A",
            AdcSource::Mcp3202B => "MCP3202_B",
        }
    }

    pub fn is_mcp3202(self) -> bool {
        !matches!(self, AdcSource::Xadc)
    }
}

impl fmt::Display for AdcSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdcSource {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "XADC" => Ok(AdcSource::Xadc),
            "MCP3202_A" => Ok(AdcSource::Mcp3202A),
            "MCP3202_B" => Ok(AdcSource::Mcp3202B),
            other => Err(format!("unknown ADC source {other:?}")),
        }
    }
}

/// A 12-bit single-ended conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdcSample {
    pub source: AdcSource,
    pub channel: u8,
    pub value: u16,
}

impl AdcSample {
    pub fn new(source: AdcSource, channel: u8, value: u16) -> Result<Self, SensorError> {
        if value > 0x0FFF {
            return Err(SensorError::Range { field: "adc value", value: value as i64 });
        }
        if channel > 1 {
            return Err(SensorError::Range { field: "adc channel", value: channel as i64 });
        }
        Ok(AdcSample { source, channel, value })
    }
}

/// Width of the modelled MCP3202 exchange window.
pub const MCP3202_FRAME_BITS: u32 = 15;

const SGL_BIT: u32 = 1 << 14;
const CHANNEL_BIT: u32 = 1 << 13;
const NULL_BIT: u32 = 1 << 12;

/// Frame layout, MSB first:
///
/// ```text
/// bit 14     SGL/DIFF, 1 = single-ended
/// bit 13     ODD/SIGN, selects the channel
/// bit 12     null bit, always 0
/// bits 11..0 conversion result
/// ```
pub fn encode_mcp3202(sample: &AdcSample) -> u32 {
    SGL_BIT | ((sample.channel as u32 & 1) << 13) | (sample.value as u32 & 0x0FFF)
}

/// Decodes a frame produced by the part. The source tag is supplied by the
/// caller since the wire does not carry it.
pub fn decode_mcp3202(frame: u32, source: AdcSource) -> Result<AdcSample, SensorError> {
    if frame >> MCP3202_FRAME_BITS != 0 {
        return Err(SensorError::Framing { frame, reason: "bits beyond the 15-bit window" });
    }
    if frame & SGL_BIT == 0 {
        return Err(SensorError::Framing { frame, reason: "differential mode not supported" });
    }
    if frame & NULL_BIT != 0 {
        return Err(SensorError::Framing { frame, reason: "null bit set" });
    }
    Ok(AdcSample { source, channel: u8::from(frame & CHANNEL_BIT != 0), value: (frame & 0x0FFF) as u16 })
}
