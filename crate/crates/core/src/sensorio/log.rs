use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use super::{AdcSample, AdcSource, MagSample, SeedRecord, SensorError};

pub const SENSOR_LOG_HEADER: &str =
    "timestamp,mag_x,mag_y,mag_z,mic_src,mic_ch,mic_val,light_src,light_ch,light_val,temp_hum";

pub fn read_sensor_log(path: &Path) -> Result<Vec<SeedRecord>, SensorError> {
    read_sensor_log_from(std::fs::File::open(path)?)
}

/// Strict reader: exact header, eleven fields per line, every value in range.
/// An empty timestamp column is allowed.
pub fn read_sensor_log_from<R: Read>(reader: R) -> Result<Vec<SeedRecord>, SensorError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(false).from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(SensorError::Log { line: 1, message: "missing header".into() }),
        Some(r) => r.map_err(|e| csv_error(1, e))?,
    };
    let got: Vec<&str> = header.iter().collect();
    if got.join(",") != SENSOR_LOG_HEADER {
        return Err(SensorError::Log { line: 1, message: format!("unexpected header {:?}", got.join(",")) });
    }
    let mut out = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(0, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push(parse_record(&rec, line)?);
    }
    Ok(out)
}

fn csv_error(fallback_line: u64, e: csv::Error) -> SensorError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    SensorError::Log { line, message }
}

fn parse_record(rec: &csv::StringRecord, line: u64) -> Result<SeedRecord, SensorError> {
    let field = |i: usize| rec.get(i).unwrap_or("");
    let err = |name: &str, msg: String| SensorError::Log { line, message: format!("{name}: {msg}") };
    fn num<T: FromStr>(s: &str) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        s.parse::<T>().map_err(|e| format!("{s:?}: {e}"))
    }
    let timestamp = match field(0) {
        "" => None,
        s => Some(num::<u64>(s).map_err(|m| err("timestamp", m))?),
    };
    let mag = MagSample {
        x: num(field(1)).map_err(|m| err("mag_x", m))?,
        y: num(field(2)).map_err(|m| err("mag_y", m))?,
        z: num(field(3)).map_err(|m| err("mag_z", m))?,
    };
    let adc = |base: usize, name: &str| -> Result<AdcSample, SensorError> {
        let source: AdcSource = field(base).parse().map_err(|m| err(name, m))?;
        let channel: u8 = num(field(base + 1)).map_err(|m| err(name, m))?;
        let value: u16 = num(field(base + 2)).map_err(|m| err(name, m))?;
        AdcSample::new(source, channel, value).map_err(|e| err(name, e.to_string()))
    };
    let mic = adc(4, "mic")?;
    let light = adc(7, "light")?;
    let temp_hum = num(field(10)).map_err(|m| err("temp_hum", m))?;
    Ok(SeedRecord { mag, mic, light, temp_hum, timestamp })
}
