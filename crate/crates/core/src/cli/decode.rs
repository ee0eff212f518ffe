use super::{usage, CliError, DecodeArgs};
use crate::prng::Seed64;
use crate::sensorio::{decode_hmc_frame, pack_seed64, read_seed_file, read_sensor_log, HmcOrder, SeedRecord};

fn parse_hex_bytes(s: &str) -> Result<Vec<u8>, CliError> {
    let clean: String = s.chars().filter(|c| !c.is_whitespace() && *c != ':').collect();
    if !clean.len().is_multiple_of(2) {
        return Err(usage(format!("--hmc {s:?}: odd number of hex digits")));
    }
    (0..clean.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&clean[i..i + 2], 16).map_err(|_| usage(format!("--hmc {s:?}: bad hex at offset {i}")))
        })
        .collect()
}

fn print_seed(seed: Seed64) {
    println!("seed      {seed}");
    println!("mag       {:#06x}", seed.mag());
    println!("mic       {:#06x}", seed.mic());
    println!("light     {:#06x}", seed.light());
    println!("temp_hum  {:#06x}", seed.temp_hum());
}

fn print_record(i: usize, r: &SeedRecord) {
    let ts = r.timestamp.map_or_else(|| "-".to_string(), |t| t.to_string());
    println!(
        "{i}: t={ts} mag=({},{},{}) mic={}/{}={} light={}/{}={} temp_hum={}",
        r.mag.x,
        r.mag.y,
        r.mag.z,
        r.mic.source,
        r.mic.channel,
        r.mic.value,
        r.light.source,
        r.light.channel,
        r.light.value,
        r.temp_hum
    );
}

pub(crate) fn run(a: DecodeArgs) -> Result<(), CliError> {
    if let Some(hex) = &a.input.hmc {
        let bytes = parse_hex_bytes(hex)?;
        let m = decode_hmc_frame(&bytes, a.hmc_order).map_err(|e| usage(format!("--hmc: {e}")))?;
        match a.hmc_order {
            HmcOrder::Xzy => println!("x={} z={} y={}", m.x, m.z, m.y),
            HmcOrder::Xyz => println!("x={} y={} z={}", m.x, m.y, m.z),
        }
    } else if let Some(path) = &a.input.seed_file {
        let seed = read_seed_file(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        print_seed(seed);
    } else if let Some(path) = &a.input.sensor_log {
        let recs = read_sensor_log(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for (i, r) in recs.iter().enumerate() {
            if a.pack {
                println!("{}", pack_seed64(r));
            } else {
                print_record(i, r);
            }
        }
    }
    Ok(())
}
