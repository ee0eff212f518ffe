//! C ABI over `chaospend`.
//!
//! Every fallible function returns a [`ChaospendStatus`] and writes its
//! result through an out-pointer. Fixed-point values cross the boundary as
//! raw 32-bit words. Generators are opaque handles owned by the caller and
//! released with [`chaospend_generator_free`].

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chaospend::fixnum::{self, trig, Fix32, FixError, Layer};
use chaospend::pendulum::PendulumError;
use chaospend::prng::{self, GenError, Generator, GeneratorConfig, ReseedPolicy, Seed64};
use chaospend::sensorio::{self, AdcSample, AdcSource, HmcOrder, MagSample, SeedRecord, SensorError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaospendStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Overflow = 3,
    DivideByZero = 4,
    Unreduced = 5,
    Degenerate = 6,
    Length = 7,
    Framing = 8,
    Range = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaospendLayer {
    Hw = 0,
    Ref = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaospendReseed {
    Halt = 0,
    PerturbCounter = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaospendHmcOrder {
    Xzy = 0,
    Xyz = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChaospendConfig {
    pub layer: ChaospendLayer,
    /// Raw fixed-point word for the step size.
    pub dt_raw: u32,
    pub warmup_steps: u64,
    pub steps_per_output: u64,
    pub reseed: ChaospendReseed,
}

/// Pendulum state as raw fixed-point words.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChaospendState {
    pub theta1: u32,
    pub theta2: u32,
    pub omega1: u32,
    pub omega2: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChaospendMagSample {
    pub x: i16,
    pub y: i16,
    pub z: i16,
}

/// One sensor reading. ADC values are 12-bit; `mic` is sampled by the
/// on-chip ADC and `light` by the first external converter.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChaospendSeedRecord {
    pub mag: ChaospendMagSample,
    pub mic: u16,
    pub light: u16,
    pub temp_hum: u16,
}

/// Opaque generator handle.
pub struct ChaospendGenerator {
    inner: Generator,
}

fn layer(l: ChaospendLayer) -> Layer {
    match l {
        ChaospendLayer::Hw => Layer::Hw,
        ChaospendLayer::Ref => Layer::Ref,
    }
}

fn fix_status(e: &FixError) -> ChaospendStatus {
    match e {
        FixError::FieldRange { .. } | FixError::Parse(_) => ChaospendStatus::InvalidArgument,
        FixError::Overflow { .. } => ChaospendStatus::Overflow,
        FixError::DivideByZero => ChaospendStatus::DivideByZero,
        FixError::Unreduced { .. } => ChaospendStatus::Unreduced,
    }
}

fn gen_status(e: &GenError) -> ChaospendStatus {
    match e {
        GenError::Config(_) => ChaospendStatus::InvalidArgument,
        GenError::Degenerate { .. } => ChaospendStatus::Degenerate,
        GenError::Step { source, .. } => match source {
            PendulumError::Arithmetic { source, .. } => fix_status(source),
            PendulumError::DegenerateDenominator { .. } => ChaospendStatus::Degenerate,
            PendulumError::InvalidParam { .. } => ChaospendStatus::InvalidArgument,
        },
    }
}

fn sensor_status(e: &SensorError) -> ChaospendStatus {
    match e {
        SensorError::Length { .. } => ChaospendStatus::Length,
        SensorError::Framing { .. } => ChaospendStatus::Framing,
        SensorError::Range { .. } => ChaospendStatus::Range,
        _ => ChaospendStatus::InvalidArgument,
    }
}

/// Runs `f` with panics turned into a status.
fn guard(f: impl FnOnce() -> ChaospendStatus) -> ChaospendStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ChaospendStatus::Panic)
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn put<T>(out: *mut T, v: T) -> ChaospendStatus {
    match out.as_mut() {
        Some(slot) => {
            *slot = v;
            ChaospendStatus::Ok
        }
        None => ChaospendStatus::NullPointer,
    }
}

/// Static, NUL-terminated description of a status.
#[no_mangle]
pub extern "C" fn chaospend_status_message(status: ChaospendStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ChaospendStatus::Ok => c"ok",
        ChaospendStatus::NullPointer => c"null pointer argument",
        ChaospendStatus::InvalidArgument => c"invalid argument",
        ChaospendStatus::Overflow => c"result does not fit the 8-bit integer field",
        ChaospendStatus::DivideByZero => c"division by zero",
        ChaospendStatus::Unreduced => c"sine range reduction failed",
        ChaospendStatus::Degenerate => c"degenerate denominator",
        ChaospendStatus::Length => c"wrong input length",
        ChaospendStatus::Framing => c"frame bit violation",
        ChaospendStatus::Range => c"value out of range",
        ChaospendStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn chaospend_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Packs sign, integer part (0-255) and hundredths (0-99) into a word.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_encode(
    negative: bool,
    int_part: u32,
    hundredths: u32,
    out: *mut u32,
) -> ChaospendStatus {
    match Fix32::encode(negative, int_part, hundredths) {
        Ok(w) => put(out, w.raw()),
        Err(e) => fix_status(&e),
    }
}

/// Signed value of any word in hundredths.
#[no_mangle]
pub extern "C" fn chaospend_fix_decode(raw: u32) -> i64 {
    Fix32::from_raw(raw).decode()
}

type BinOp = fn(Layer, Fix32, Fix32) -> Result<Fix32, FixError>;

unsafe fn binary(op: BinOp, l: ChaospendLayer, a: u32, b: u32, out: *mut u32) -> ChaospendStatus {
    guard(|| match op(layer(l), Fix32::from_raw(a), Fix32::from_raw(b)) {
        Ok(w) => put(out, w.raw()),
        Err(e) => fix_status(&e),
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_plus(l: ChaospendLayer, a: u32, b: u32, out: *mut u32) -> ChaospendStatus {
    binary(fixnum::plus, l, a, b, out)
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_minus(l: ChaospendLayer, a: u32, b: u32, out: *mut u32) -> ChaospendStatus {
    binary(fixnum::minus, l, a, b, out)
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_times(l: ChaospendLayer, a: u32, b: u32, out: *mut u32) -> ChaospendStatus {
    binary(fixnum::times, l, a, b, out)
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_divide(l: ChaospendLayer, a: u32, b: u32, out: *mut u32) -> ChaospendStatus {
    binary(fixnum::divide, l, a, b, out)
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_sin(l: ChaospendLayer, theta: u32, out: *mut u32) -> ChaospendStatus {
    guard(|| match trig::sin(layer(l), Fix32::from_raw(theta)) {
        Ok(w) => put(out, w.raw()),
        Err(e) => fix_status(&e),
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_fix_cos(l: ChaospendLayer, theta: u32, out: *mut u32) -> ChaospendStatus {
    guard(|| match trig::cos(layer(l), Fix32::from_raw(theta)) {
        Ok(w) => put(out, w.raw()),
        Err(e) => fix_status(&e),
    })
}

/// The library's default generator configuration.
#[no_mangle]
pub extern "C" fn chaospend_config_default() -> ChaospendConfig {
    let d = GeneratorConfig::default();
    ChaospendConfig {
        layer: ChaospendLayer::Hw,
        dt_raw: d.dt.raw(),
        warmup_steps: d.warmup_steps,
        steps_per_output: d.steps_per_output,
        reseed: ChaospendReseed::PerturbCounter,
    }
}

/// Creates a generator. `config` may be null for the defaults. On success
/// `*out` receives a handle to release with `chaospend_generator_free`.
///
/// # Safety
/// `config` must be null or point to a valid config; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_new(
    seed: u64,
    config: *const ChaospendConfig,
    out: *mut *mut ChaospendGenerator,
) -> ChaospendStatus {
    if out.is_null() {
        return ChaospendStatus::NullPointer;
    }
    let c = config.as_ref().copied().unwrap_or_else(|| chaospend_config_default());
    let cfg = GeneratorConfig {
        layer: layer(c.layer),
        dt: Fix32::from_raw(c.dt_raw),
        warmup_steps: c.warmup_steps,
        steps_per_output: c.steps_per_output,
        reseed_policy: match c.reseed {
            ChaospendReseed::Halt => ReseedPolicy::Halt,
            ChaospendReseed::PerturbCounter => ReseedPolicy::PerturbCounter,
        },
    };
    guard(|| match Generator::new(Seed64(seed), cfg) {
        Ok(inner) => put(out, Box::into_raw(Box::new(ChaospendGenerator { inner }))),
        Err(e) => gen_status(&e),
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from `chaospend_generator_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_free(g: *mut ChaospendGenerator) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Next 10-digit output.
///
/// # Safety
/// `g` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_next(g: *mut ChaospendGenerator, out: *mut u64) -> ChaospendStatus {
    let Some(g) = g.as_mut() else { return ChaospendStatus::NullPointer };
    if out.is_null() {
        return ChaospendStatus::NullPointer;
    }
    guard(|| match g.inner.next_output() {
        Ok(v) => put(out, v.value()),
        Err(e) => gen_status(&e),
    })
}

/// Fills `buf[0..len]` with consecutive outputs. On error, `*written` (if
/// not null) holds how many were produced.
///
/// # Safety
/// `g` must be a live handle; `buf` must be valid for `len` writes;
/// `written` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_fill(
    g: *mut ChaospendGenerator,
    buf: *mut u64,
    len: usize,
    written: *mut usize,
) -> ChaospendStatus {
    let Some(g) = g.as_mut() else { return ChaospendStatus::NullPointer };
    if buf.is_null() && len > 0 {
        return ChaospendStatus::NullPointer;
    }
    let slice = if len == 0 { &mut [][..] } else { std::slice::from_raw_parts_mut(buf, len) };
    let mut done = 0usize;
    let status = guard(|| {
        for slot in slice.iter_mut() {
            match g.inner.next_output() {
                Ok(v) => *slot = v.value(),
                Err(e) => return gen_status(&e),
            }
            done += 1;
        }
        ChaospendStatus::Ok
    });
    if let Some(w) = written.as_mut() {
        *w = done;
    }
    status
}

/// Current pendulum state.
///
/// # Safety
/// `g` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_state(
    g: *const ChaospendGenerator,
    out: *mut ChaospendState,
) -> ChaospendStatus {
    let Some(g) = g.as_ref() else { return ChaospendStatus::NullPointer };
    let s = g.inner.state();
    put(
        out,
        ChaospendState {
            theta1: s.theta1.raw(),
            theta2: s.theta2.raw(),
            omega1: s.omega1.raw(),
            omega2: s.omega2.raw(),
        },
    )
}

/// Pendulum steps taken, warmup included. Zero for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chaospend_generator_steps(g: *const ChaospendGenerator) -> u64 {
    g.as_ref().map_or(0, |g| g.inner.steps())
}

/// Eight link bytes, low byte first.
///
/// # Safety
/// `out` must be null or valid for 8 writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_uart_chunk(seed: u64, out: *mut u8) -> ChaospendStatus {
    if out.is_null() {
        return ChaospendStatus::NullPointer;
    }
    let bytes = sensorio::uart_chunk(Seed64(seed));
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), out, 8);
    ChaospendStatus::Ok
}

/// # Safety
/// `bytes` must be valid for `len` reads; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_uart_unchunk(bytes: *const u8, len: usize, out: *mut u64) -> ChaospendStatus {
    if bytes.is_null() {
        return ChaospendStatus::NullPointer;
    }
    match sensorio::uart_unchunk(std::slice::from_raw_parts(bytes, len)) {
        Ok(s) => put(out, s.0),
        Err(e) => sensor_status(&e),
    }
}

/// Decodes a six-byte magnetometer read.
///
/// # Safety
/// `bytes` must be valid for `len` reads; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_hmc_decode(
    bytes: *const u8,
    len: usize,
    order: ChaospendHmcOrder,
    out: *mut ChaospendMagSample,
) -> ChaospendStatus {
    if bytes.is_null() {
        return ChaospendStatus::NullPointer;
    }
    let order = match order {
        ChaospendHmcOrder::Xzy => HmcOrder::Xzy,
        ChaospendHmcOrder::Xyz => HmcOrder::Xyz,
    };
    match sensorio::decode_hmc_frame(std::slice::from_raw_parts(bytes, len), order) {
        Ok(m) => put(out, ChaospendMagSample { x: m.x, y: m.y, z: m.z }),
        Err(e) => sensor_status(&e),
    }
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_mcp3202_encode(channel: u8, value: u16, out: *mut u32) -> ChaospendStatus {
    match AdcSample::new(AdcSource::Mcp3202A, channel, value) {
        Ok(s) => put(out, sensorio::encode_mcp3202(&s)),
        Err(e) => sensor_status(&e),
    }
}

/// # Safety
/// `channel` and `value` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_mcp3202_decode(frame: u32, channel: *mut u8, value: *mut u16) -> ChaospendStatus {
    if channel.is_null() || value.is_null() {
        return ChaospendStatus::NullPointer;
    }
    match sensorio::decode_mcp3202(frame, AdcSource::Mcp3202A) {
        Ok(s) => {
            *channel = s.channel;
            *value = s.value;
            ChaospendStatus::Ok
        }
        Err(e) => sensor_status(&e),
    }
}

/// Packs a sensor reading into a 64-bit seed.
///
/// # Safety
/// `rec` must be null or point to a valid record; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_pack_seed(rec: *const ChaospendSeedRecord, out: *mut u64) -> ChaospendStatus {
    let Some(r) = rec.as_ref() else { return ChaospendStatus::NullPointer };
    let mic = match AdcSample::new(AdcSource::Xadc, 0, r.mic) {
        Ok(s) => s,
        Err(e) => return sensor_status(&e),
    };
    let light = match AdcSample::new(AdcSource::Mcp3202A, 0, r.light) {
        Ok(s) => s,
        Err(e) => return sensor_status(&e),
    };
    let rec = SeedRecord {
        mag: MagSample { x: r.mag.x, y: r.mag.y, z: r.mag.z },
        mic,
        light,
        temp_hum: r.temp_hum,
        timestamp: None,
    };
    put(out, sensorio::pack_seed64(&rec).0)
}

/// Ten-digit output for a state given as raw words.
///
/// # Safety
/// `state` must be null or point to a valid state; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chaospend_extract(state: *const ChaospendState, out: *mut u64) -> ChaospendStatus {
    let Some(s) = state.as_ref() else { return ChaospendStatus::NullPointer };
    let st = chaospend::pendulum::PendulumState {
        theta1: Fix32::from_raw(s.theta1),
        theta2: Fix32::from_raw(s.theta2),
        omega1: Fix32::from_raw(s.omega1),
        omega2: Fix32::from_raw(s.omega2),
    };
    put(out, prng::extract(&st).value())
}
