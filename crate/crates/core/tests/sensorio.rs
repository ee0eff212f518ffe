use std::io::Write;

use chaospend::prng::Seed64;
use chaospend::sensorio::{
    decode_hmc_frame, decode_mcp3202, encode_mcp3202, hmc_config_sequence, os_entropy_seed, pack_seed64,
    read_seed_file, read_sensor_log_from, uart_chunk, uart_unchunk, AdcSample, AdcSource, HmcOrder, I2cAction,
    MagSample, SeedRecord, SensorError, HMC_CONFIG, SENSOR_LOG_HEADER,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn record(rng: &mut ChaCha8Rng) -> SeedRecord {
    SeedRecord {
        mag: MagSample { x: rng.gen(), y: rng.gen(), z: rng.gen() },
        mic: AdcSample::new(AdcSource::Xadc, rng.gen_range(0..2), rng.gen_range(0..4096)).unwrap(),
        light: AdcSample::new(AdcSource::Mcp3202A, rng.gen_range(0..2), rng.gen_range(0..4096)).unwrap(),
        temp_hum: rng.gen(),
        timestamp: None,
    }
}

/// The packing rule written out on plain integers.
fn packed(r: &SeedRecord) -> u64 {
    let rotl = |v: i16, n: u32| ((v as u16 as u32) << n | (v as u16 as u32) >> (16 - n)) as u64 & 0xFFFF;
    let mag = (r.mag.x as u16 as u64) ^ rotl(r.mag.y, 5) ^ rotl(r.mag.z, 10);
    let fold = |v: u16| ((v as u64) << 4 ^ (v as u64) >> 8) & 0xFFFF;
    mag << 48 | fold(r.mic.value) << 32 | fold(r.light.value) << 16 | r.temp_hum as u64
}

#[test]
fn pack_matches_rule_on_random_records() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let r = record(&mut rng);
        assert_eq!(pack_seed64(&r), Seed64(packed(&r)));
        assert_eq!(pack_seed64(&r), pack_seed64(&r));
    }
    assert_eq!(pack_seed64(&SeedRecord::ZERO), Seed64(0));
}

#[test]
fn every_input_bit_lands_in_one_field() {
    let region = |diff: u64| -> Vec<u32> { (0..4).filter(|f| diff >> (16 * f) & 0xFFFF != 0).collect() };
    let base = SeedRecord::ZERO;
    let probe = |r: SeedRecord| region(pack_seed64(&r).0 ^ pack_seed64(&base).0);
    for bit in 0..16 {
        let b = (1u16 << bit) as i16;
        for r in [
            SeedRecord { mag: MagSample { x: b, ..base.mag }, ..base },
            SeedRecord { mag: MagSample { y: b, ..base.mag }, ..base },
            SeedRecord { mag: MagSample { z: b, ..base.mag }, ..base },
        ] {
            assert_eq!(probe(r), [3]);
        }
        assert_eq!(probe(SeedRecord { temp_hum: 1 << bit, ..base }), [0]);
    }
    for bit in 0..12 {
        let v = 1u16 << bit;
        assert_eq!(probe(SeedRecord { mic: AdcSample { value: v, ..base.mic }, ..base }), [2]);
        assert_eq!(probe(SeedRecord { light: AdcSample { value: v, ..base.light }, ..base }), [1]);
    }
}

#[test]
fn uart_round_trips() {
    assert_eq!(uart_chunk(Seed64(0)), [0; 8]);
    assert_eq!(uart_chunk(Seed64(0x0123_4567_89AB_CDEF)), [0xEF, 0xCD, 0xAB, 0x89, 0x67, 0x45, 0x23, 0x01]);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let edges = [0u64, u64::MAX].into_iter().chain((0..64).map(|b| 1u64 << b));
    for s in edges.chain((0..100_000).map(|_| rng.gen())) {
        assert_eq!(uart_unchunk(&uart_chunk(Seed64(s))).unwrap(), Seed64(s));
    }
    assert!(matches!(uart_unchunk(&[0; 7]), Err(SensorError::Length { .. })));
    assert!(matches!(uart_unchunk(&[0; 9]), Err(SensorError::Length { .. })));
}

#[test]
fn mcp3202_exhaustive() {
    for source in [AdcSource::Mcp3202A, AdcSource::Mcp3202B] {
        for channel in 0..2 {
            for value in 0..4096 {
                let s = AdcSample::new(source, channel, value).unwrap();
                let frame = encode_mcp3202(&s);
                assert!(frame < 1 << 15);
                assert_eq!(decode_mcp3202(frame, source).unwrap(), s);
            }
        }
    }
    assert!(AdcSample::new(AdcSource::Mcp3202A, 0, 4096).is_err());
    assert!(AdcSample::new(AdcSource::Mcp3202A, 2, 0).is_err());
}

#[test]
fn hmc_frames() {
    let d = |b: [u8; 6]| decode_hmc_frame(&b, HmcOrder::Xzy).unwrap();
    assert_eq!(d([0; 6]), MagSample { x: 0, y: 0, z: 0 });
    assert_eq!(d([0x12, 0x34, 0, 0, 0, 0]).x, 4660);
    assert_eq!(d([0xFF, 0xFF, 0, 0, 0, 0]).x, -1);
    let m = d([0x80, 0x00, 0x7F, 0xFF, 0x00, 0x02]);
    assert_eq!((m.x, m.z, m.y), (-32768, 32767, 2));
    let m = decode_hmc_frame(&[0x80, 0x00, 0x7F, 0xFF, 0x00, 0x02], HmcOrder::Xyz).unwrap();
    assert_eq!((m.x, m.y, m.z), (-32768, 32767, 2));
    assert!(decode_hmc_frame(&[0; 5], HmcOrder::Xzy).is_err());

    let seq = hmc_config_sequence();
    assert_eq!(seq.map(|(_, v)| v), [0x10, 0x60, 0x01, 6]);
    assert_eq!(seq[3].0, I2cAction::Read);
    for bytes in HMC_CONFIG.serialize() {
        assert_eq!(bytes[0], 0x3C);
    }
}

#[test]
fn sensor_log_parsing() {
    let ok = format!(
        "{SENSOR_LOG_HEADER}\n0,120,-340,88,XADC,0,2011,MCP3202_A,0,1500,42\n,1,2,3,XADC,1,0,MCP3202_B,1,4095,0\n"
    );
    let recs = read_sensor_log_from(ok.as_bytes()).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0].mag, MagSample { x: 120, y: -340, z: 88 });
    assert_eq!((recs[0].mic.value, recs[0].light.value, recs[0].temp_hum), (2011, 1500, 42));
    assert_eq!(recs[1].timestamp, None);

    assert!(read_sensor_log_from(format!("{SENSOR_LOG_HEADER}\n").as_bytes()).unwrap().is_empty());

    let range = format!("{SENSOR_LOG_HEADER}\n0,1,2,3,XADC,0,4096,MCP3202_A,0,1,1\n");
    assert!(matches!(read_sensor_log_from(range.as_bytes()), Err(SensorError::Log { line: 2, .. })));
    let partial = format!("{SENSOR_LOG_HEADER}\n0,1,2,3,XADC,0,1,MCP3202_A,0,1,1\n0,1,2\n");
    assert!(matches!(read_sensor_log_from(partial.as_bytes()), Err(SensorError::Log { line: 3, .. })));
    assert!(read_sensor_log_from("a,b\n".as_bytes()).is_err());
}

#[test]
fn seed_files() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("seed.bin");
    std::fs::write(&raw, uart_chunk(Seed64(0x0123_4567_89AB_CDEF))).unwrap();
    assert_eq!(read_seed_file(&raw).unwrap(), Seed64(0x0123_4567_89AB_CDEF));

    let hex = dir.path().join("seed.hex");
    let mut f = std::fs::File::create(&hex).unwrap();
    writeln!(f, "0123456789abcdef").unwrap();
    assert_eq!(read_seed_file(&hex).unwrap(), Seed64(0x0123_4567_89AB_CDEF));

    std::fs::write(&hex, "0123").unwrap();
    assert!(read_seed_file(&hex).is_err());
}

#[test]
fn entropy_records_are_distinct_and_in_range() {
    let mut seen = std::collections::HashSet::new();
    for _ in 0..100 {
        let r = os_entropy_seed().unwrap();
        assert!(r.mic.value < 4096 && r.light.value < 4096);
        assert!(seen.insert(pack_seed64(&r)));
    }
}
