//! C ABI over the tracecode codecs.
//!
//! Conventions:
//! - Every fallible call returns a [`TcStatus`]; success is zero. On
//!   failure a thread-local message is recorded, readable through
//!   [`tc_last_error`] until the same thread's next failure.
//! - [`TcCodec`] is opaque; release it with [`tc_codec_free`].
//! - `char*` outputs are NUL-terminated, owned by the caller, and must be
//!   released with [`tc_string_free`]. Pointers returned by
//!   [`tc_version`], [`tc_codec_kind`], and [`tc_last_error`] are
//!   borrowed and must not be freed.
//! - Messages, codewords, and traces use the same text formats as the
//!   CLI (the core crate's `textio` module): 01-strings for bit-level
//!   codecs, comma-separated symbols otherwise, one trace per line.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tracecode::error::Error;
use tracecode::experiment::{build_from_config, BuiltCodec, ExperimentConfig};
use tracecode::textio;

/// Opaque codec bundle.
pub struct TcCodec(BuiltCodec);

/// Call outcome; `Ok` is zero, every failure is nonzero.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TcStatus {
    Ok = 0,
    /// The decoder gave a negative answer (error budget exceeded, no
    /// surviving candidate). Not a usage error.
    DecodeFailure = 1,
    /// A parameter or message is outside its documented domain.
    InvalidArgument = 2,
    /// Malformed serialized input: config, bundle JSON, 01-string, or
    /// symbol list.
    Format = 3,
    /// A randomized construction ran out of attempts.
    ConstructionFailed = 4,
    Io = 5,
    /// A required pointer argument was NULL.
    NullPointer = 6,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 7,
    /// The call panicked. State is still memory-safe but the handle
    /// should be freed and rebuilt.
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: TcStatus, msg: String) -> TcStatus {
    let c = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
    status
}

fn fail_err(e: Error) -> TcStatus {
    let status = match e {
        Error::DecodeFailure(_) => TcStatus::DecodeFailure,
        Error::InvalidParameter(_) => TcStatus::InvalidArgument,
        Error::Format(_) | Error::Json(_) => TcStatus::Format,
        Error::ConstructionFailed(_) => TcStatus::ConstructionFailed,
        Error::Io(_) => TcStatus::Io,
    };
    fail(status, e.to_string())
}

macro_rules! tc_try {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(TcStatus::Panic, "internal panic".into()))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(TcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn read_codec<'a>(p: *const TcCodec) -> Result<&'a BuiltCodec, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::NullPointer, "codec is NULL".into()));
    }
    Ok(&(*p).0)
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> TcStatus {
    if out.is_null() {
        return fail(TcStatus::NullPointer, "out is NULL".into());
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TcStatus::Ok
        }
        Err(e) => fail(TcStatus::Format, format!("output contained NUL: {e}")),
    }
}

unsafe fn write_codec(c: BuiltCodec, out: *mut *mut TcCodec) -> TcStatus {
    if out.is_null() {
        return fail(TcStatus::NullPointer, "out is NULL".into());
    }
    *out = Box::into_raw(Box::new(TcCodec(c)));
    TcStatus::Ok
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for this thread's most recent failure, or NULL if none.
/// Borrowed; overwritten by the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned through a `char **out` parameter. NULL is a
/// no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a codec from experiment-config text (TOML or JSON; same schema
/// as the CLI). The config's first `q`/`t` grid point and its seed drive
/// the construction.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_codec_build(
    config: *const c_char,
    out: *mut *mut TcCodec,
) -> TcStatus {
    guard(|| {
        let text = tc_try!(read_str(config, "config"));
        let cfg = tc_try!(ExperimentConfig::parse(text).map_err(fail_err));
        let codec = tc_try!(build_from_config(&cfg).map_err(fail_err));
        write_codec(codec, out)
    })
}

/// Restores a codec from bundle JSON produced by [`tc_codec_to_json`] or
/// the CLI's `build-codec`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_codec_from_json(
    json: *const c_char,
    out: *mut *mut TcCodec,
) -> TcStatus {
    guard(|| {
        let text = tc_try!(read_str(json, "json"));
        let codec: BuiltCodec =
            tc_try!(serde_json::from_str(text).map_err(|e| fail_err(e.into())));
        write_codec(codec, out)
    })
}

/// Serializes a codec to its bundle JSON.
///
/// # Safety
/// `codec` must be a live handle; `out` must be writable. Free the
/// result with [`tc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tc_codec_to_json(
    codec: *const TcCodec,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let c = tc_try!(read_codec(codec));
        let json = tc_try!(serde_json::to_string_pretty(c).map_err(|e| fail_err(e.into())));
        write_string(json, out)
    })
}

/// Static name of the codec kind ("bigalpha", "binary", "inner",
/// "runcode", "avgcase"), or NULL for a NULL handle. Do not free.
///
/// # Safety
/// `codec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_codec_kind(codec: *const TcCodec) -> *const c_char {
    if codec.is_null() {
        return ptr::null();
    }
    let name: &[u8] = match (*codec).0 {
        BuiltCodec::Bigalpha(_) => b"bigalpha\0",
        BuiltCodec::Binary(_) => b"binary\0",
        BuiltCodec::Inner(_) => b"inner\0",
        BuiltCodec::Runcode(_) => b"runcode\0",
        BuiltCodec::Avgcase(_) => b"avgcase\0",
    };
    name.as_ptr().cast()
}

/// The deletion probability the codec was built for, or NaN when the
/// codec stores none (inner, avgcase) or the handle is NULL.
///
/// # Safety
/// `codec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_codec_q(codec: *const TcCodec) -> f64 {
    if codec.is_null() {
        return f64::NAN;
    }
    textio::codec_q(&(*codec).0).unwrap_or(f64::NAN)
}

/// Destroys a codec handle. NULL is a no-op.
///
/// # Safety
/// `codec` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_codec_free(codec: *mut TcCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// Encodes a text message to a text codeword.
///
/// # Safety
/// `codec` must be a live handle; `message` a NUL-terminated string;
/// `out` writable. Free the result with [`tc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tc_encode(
    codec: *const TcCodec,
    message: *const c_char,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let c = tc_try!(read_codec(codec));
        let msg = tc_try!(read_str(message, "message"));
        let cw = tc_try!(textio::encode_message(c, msg).map_err(fail_err));
        write_string(cw, out)
    })
}

/// Decodes traces (one per line, trailing newline optional) back to the
/// text message. Pass a negative or NaN `q` to use the codec's own
/// deletion probability.
///
/// # Safety
/// `codec` must be a live handle; `traces` a NUL-terminated string;
/// `out` writable. Free the result with [`tc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tc_decode(
    codec: *const TcCodec,
    traces: *const c_char,
    q: f64,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let c = tc_try!(read_codec(codec));
        let text = tc_try!(read_str(traces, "traces"));
        let q = if q.is_nan() || q < 0.0 {
            tc_try!(textio::resolve_q(c, None).map_err(fail_err))
        } else {
            q
        };
        let lines: Vec<&str> = text.lines().collect();
        let msg = tc_try!(textio::decode_traces(c, &lines, q).map_err(fail_err));
        write_string(msg, out)
    })
}

/// Encodes `message` and samples `t` independent channel traces, one per
/// output line. Pass a negative or NaN `q` to use the codec's own
/// deletion probability. Deterministic in `seed`.
///
/// # Safety
/// `codec` must be a live handle; `message` a NUL-terminated string;
/// `out` writable. Free the result with [`tc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tc_simulate(
    codec: *const TcCodec,
    message: *const c_char,
    t: usize,
    q: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let c = tc_try!(read_codec(codec));
        let msg = tc_try!(read_str(message, "message"));
        let q = if q.is_nan() || q < 0.0 {
            tc_try!(textio::resolve_q(c, None).map_err(fail_err))
        } else {
            q
        };
        let traces = tc_try!(textio::simulate_traces(c, msg, t, q, seed).map_err(fail_err));
        write_string(traces, out)
    })
}
