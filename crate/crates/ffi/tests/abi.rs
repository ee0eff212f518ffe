use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use chaospend::fixnum::Fix32;
use chaospend::prng::{self, GeneratorConfig, Seed64, DEFAULT_SEED};
use chaospend_ffi::*;

fn word(s: &str) -> u32 {
    s.parse::<Fix32>().unwrap().raw()
}

#[test]
fn fixed_point_calls() {
    unsafe {
        let mut out = 0u32;
        assert_eq!(chaospend_fix_encode(false, 33, 73, &mut out), ChaospendStatus::Ok);
        assert_eq!(out, (33 << 23) | 73);
        assert_eq!(chaospend_fix_decode(out), 3373);
        assert_eq!(chaospend_fix_encode(false, 256, 0, &mut out), ChaospendStatus::InvalidArgument);

        for layer in [ChaospendLayer::Hw, ChaospendLayer::Ref] {
            assert_eq!(chaospend_fix_plus(layer, word("+33.73"), word("-21.84"), &mut out), ChaospendStatus::Ok);
            assert_eq!(out, word("+11.89"));
            assert_eq!(chaospend_fix_times(layer, word("+13.73"), word("-7.84"), &mut out), ChaospendStatus::Ok);
            assert_eq!(out, word("-107.64"));
            assert_eq!(chaospend_fix_divide(layer, word("+1.00"), 0, &mut out), ChaospendStatus::DivideByZero);
        }
        assert_eq!(
            chaospend_fix_minus(ChaospendLayer::Hw, word("+5.20"), word("+5.80"), &mut out),
            ChaospendStatus::Ok
        );
        assert_eq!(out, word("-0.40"));
        assert_eq!(
            chaospend_fix_minus(ChaospendLayer::Ref, word("+5.20"), word("+5.80"), &mut out),
            ChaospendStatus::Ok
        );
        assert_eq!(out, word("-0.60"));
        assert_eq!(
            chaospend_fix_times(ChaospendLayer::Ref, word("+100.00"), word("+3.00"), &mut out),
            ChaospendStatus::Overflow
        );
        assert_eq!(chaospend_fix_sin(ChaospendLayer::Ref, word("+1.57"), &mut out), ChaospendStatus::Ok);
        assert_eq!(out, word("+1.00"));
        assert_eq!(chaospend_fix_cos(ChaospendLayer::Ref, word("+3.14"), &mut out), ChaospendStatus::Ok);
        assert_eq!(out, word("-1.00"));
        assert_eq!(chaospend_fix_plus(ChaospendLayer::Hw, 0, 0, ptr::null_mut()), ChaospendStatus::NullPointer);
    }
}

#[test]
fn generator_handle_matches_library() {
    let expected = prng::generate(DEFAULT_SEED, 50, GeneratorConfig::default()).unwrap();
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(chaospend_generator_new(DEFAULT_SEED.0, ptr::null(), &mut g), ChaospendStatus::Ok);
        assert!(!g.is_null());
        let mut first = 0u64;
        assert_eq!(chaospend_generator_next(g, &mut first), ChaospendStatus::Ok);
        assert_eq!(first, expected[0].value());
        let mut rest = vec![0u64; 49];
        let mut written = 0usize;
        assert_eq!(chaospend_generator_fill(g, rest.as_mut_ptr(), rest.len(), &mut written), ChaospendStatus::Ok);
        assert_eq!(written, 49);
        let all: Vec<u64> = std::iter::once(first).chain(rest).collect();
        assert_eq!(all, expected.iter().map(|v| v.value()).collect::<Vec<_>>());
        assert_eq!(chaospend_generator_steps(g), 100 + 50);

        let mut st = ChaospendState::default();
        assert_eq!(chaospend_generator_state(g, &mut st), ChaospendStatus::Ok);
        let mut extracted = 0u64;
        assert_eq!(chaospend_extract(&st, &mut extracted), ChaospendStatus::Ok);
        assert_eq!(extracted, expected[49].value());
        chaospend_generator_free(g);
        chaospend_generator_free(ptr::null_mut());
    }
}

#[test]
fn generator_config_and_errors() {
    unsafe {
        let mut cfg = chaospend_config_default();
        assert_eq!(cfg.dt_raw, GeneratorConfig::default().dt.raw());
        cfg.dt_raw = 0;
        let mut g = ptr::null_mut();
        assert_eq!(chaospend_generator_new(1, &cfg, &mut g), ChaospendStatus::InvalidArgument);
        assert!(g.is_null());
        assert_eq!(chaospend_generator_new(1, ptr::null(), ptr::null_mut()), ChaospendStatus::NullPointer);

        let mut cfg = chaospend_config_default();
        cfg.layer = ChaospendLayer::Ref;
        assert_eq!(chaospend_generator_new(DEFAULT_SEED.0, &cfg, &mut g), ChaospendStatus::Ok);
        let mut buf = [0u64; 8];
        let mut written = 99usize;
        let status = chaospend_generator_fill(g, buf.as_mut_ptr(), buf.len(), &mut written);
        assert_eq!(status, ChaospendStatus::Overflow);
        assert_eq!(written, 0);
        chaospend_generator_free(g);

        let mut out = 0u64;
        assert_eq!(chaospend_generator_next(ptr::null_mut(), &mut out), ChaospendStatus::NullPointer);
    }
}

#[test]
fn codec_calls() {
    unsafe {
        let mut bytes = [0u8; 8];
        assert_eq!(chaospend_uart_chunk(0x0123_4567_89AB_CDEF, bytes.as_mut_ptr()), ChaospendStatus::Ok);
        assert_eq!(bytes, [0xEF, 0xCD, 0xAB, 0x89, 0x67, 0x45, 0x23, 0x01]);
        let mut seed = 0u64;
        assert_eq!(chaospend_uart_unchunk(bytes.as_ptr(), 8, &mut seed), ChaospendStatus::Ok);
        assert_eq!(seed, 0x0123_4567_89AB_CDEF);
        assert_eq!(chaospend_uart_unchunk(bytes.as_ptr(), 7, &mut seed), ChaospendStatus::Length);

        let frame = [0x80, 0x00, 0x7F, 0xFF, 0x00, 0x01];
        let mut m = ChaospendMagSample::default();
        assert_eq!(chaospend_hmc_decode(frame.as_ptr(), 6, ChaospendHmcOrder::Xzy, &mut m), ChaospendStatus::Ok);
        assert_eq!((m.x, m.z, m.y), (-32768, 32767, 1));
        assert_eq!(chaospend_hmc_decode(frame.as_ptr(), 5, ChaospendHmcOrder::Xzy, &mut m), ChaospendStatus::Length);

        let mut f = 0u32;
        assert_eq!(chaospend_mcp3202_encode(1, 2048, &mut f), ChaospendStatus::Ok);
        let (mut ch, mut v) = (0u8, 0u16);
        assert_eq!(chaospend_mcp3202_decode(f, &mut ch, &mut v), ChaospendStatus::Ok);
        assert_eq!((ch, v), (1, 2048));
        assert_eq!(chaospend_mcp3202_encode(0, 4096, &mut f), ChaospendStatus::Range);
        assert_eq!(chaospend_mcp3202_decode(0x1000 | 0x4000, &mut ch, &mut v), ChaospendStatus::Framing);

        let rec = ChaospendSeedRecord { mag: ChaospendMagSample { x: 1, y: 0, z: 0 }, ..Default::default() };
        assert_eq!(chaospend_pack_seed(&rec, &mut seed), ChaospendStatus::Ok);
        assert_eq!(Seed64(seed), Seed64(1 << 48));
        let bad = ChaospendSeedRecord { mic: 4096, ..Default::default() };
        assert_eq!(chaospend_pack_seed(&bad, &mut seed), ChaospendStatus::Range);
    }
}

#[test]
fn messages_and_version() {
    for s in [ChaospendStatus::Ok, ChaospendStatus::DivideByZero, ChaospendStatus::Panic] {
        let msg = unsafe { CStr::from_ptr(chaospend_status_message(s)) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
    let v = unsafe { CStr::from_ptr(chaospend_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chaospend.h")
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(header_path()).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let mut count = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
            count += 1;
        }
    }
    assert!(count >= 20, "found only {count} exports");
    assert!(header.contains("typedef struct ChaospendGenerator ChaospendGenerator;"));
}

#[test]
fn header_compiles_as_c() {
    let probe = r#"
#include "chaospend.h"
int main(void) {
    ChaospendGenerator *g = 0;
    ChaospendConfig cfg = chaospend_config_default();
    uint64_t v = 0;
    if (chaospend_generator_new(0x0123456789ABCDEFull, &cfg, &g) != CHAOSPEND_STATUS_OK) return 1;
    chaospend_generator_next(g, &v);
    chaospend_generator_free(g);
    return (int)(v % 2);
}
"#;
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("probe.c");
    std::fs::write(&c, probe).unwrap();
    let include = header_path().parent().unwrap().to_path_buf();
    let status = match Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(&include)
        .arg(&c)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({e})");
            return;
        }
    };
    assert!(status.success());
}
