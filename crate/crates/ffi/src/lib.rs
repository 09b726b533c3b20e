//! C ABI for the gapdex cluster index.
//!
//! Every fallible function returns a [`GapdexStatus`] and writes its result
//! through an out-pointer. On failure a human-readable message is kept per
//! thread and can be fetched with [`gapdex_last_error`]. Panics never cross
//! the boundary; they surface as `GAPDEX_STATUS_PANIC`.
//!
//! Samples are opaque handles: create with [`gapdex_sample_new`], release
//! with [`gapdex_sample_free`]. Strings returned by the library are owned by
//! the caller and must be released with [`gapdex_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;

use gapdex::montecarlo::{SimConfig, default_grid, substream};
use gapdex::{Error, Sample};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapdexStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Size = 3,
    Data = 4,
    Index = 5,
    Degenerate = 6,
    TooManyExclusions = 7,
    Usage = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 99,
}

impl From<&Error> for GapdexStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain { .. } => GapdexStatus::Domain,
            Error::Size { .. } => GapdexStatus::Size,
            Error::Data { .. } => GapdexStatus::Data,
            Error::Index { .. } => GapdexStatus::Index,
            Error::Degenerate(_) => GapdexStatus::Degenerate,
            Error::TooManyExclusions { .. } => GapdexStatus::TooManyExclusions,
            Error::Usage(_) => GapdexStatus::Usage,
            Error::Io { .. } => GapdexStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Failure inside a call: a status plus its message.
struct Failure(GapdexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(GapdexStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GapdexStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GapdexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            GapdexStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            GapdexStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be null or valid for one write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// # Safety
/// `data` must be null or point to `len` readable values.
unsafe fn input_slice<'a>(data: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("values"));
    }
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

/// Message describing the most recent failure on this thread, or null. The
/// pointer stays valid until the next library call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn gapdex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[unsafe(no_mangle)]
pub extern "C" fn gapdex_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// # Safety
/// `out` must be null or valid for one write.
unsafe fn scalar(out: *mut f64, f: impl FnOnce() -> gapdex::Result<f64>) -> GapdexStatus {
    guard(|| unsafe { write_out(out, f()?) })
}

/// Standard normal density.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_normal_pdf(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::std_normal_pdf(x)) }
}

/// Standard normal CDF.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_normal_cdf(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::std_normal_cdf(x)) }
}

/// Upper tail 1 − Φ(z), accurate far into the tail.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_normal_upper_tail(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::std_normal_upper_tail(x)) }
}

/// Inverse of the standard normal CDF on (0, 1).
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_normal_quantile(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::std_normal_quantile(x)) }
}

/// Mills ratio φ(z)/(1 − Φ(z)).
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_mills_ratio(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::mills_ratio(x)) }
}

/// Standard Gumbel CDF.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_gumbel_cdf(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::gumbel_cdf(x)) }
}

/// Limit law exp(−e^{−x}/2) of one half of the sample.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_half_limit_cdf(x: f64, out: *mut f64) -> GapdexStatus {
    unsafe { scalar(out, || gapdex::half_limit_cdf(x)) }
}

/// Moments of a standard normal truncated below at `threshold`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GapdexTruncatedMoments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_truncated_moments(threshold: f64, out: *mut GapdexTruncatedMoments) -> GapdexStatus {
    guard(|| {
        let m = gapdex::truncated_moments(threshold)?;
        unsafe {
            write_out(
                out,
                GapdexTruncatedMoments {
                    mean: m.mean,
                    variance: m.variance,
                    skewness: m.skewness,
                },
            )
        }
    })
}

/// Opaque sample handle.
pub struct GapdexSample(Sample);

/// Copies `len` values into a new sample handle.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be valid for
/// one write. Release the handle with `gapdex_sample_free`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_sample_new(values: *const f64, len: usize, out: *mut *mut GapdexSample) -> GapdexStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let values = unsafe { input_slice(values, len)? };
        let sample = Sample::new(values)?;
        unsafe { write_out(out, Box::into_raw(Box::new(GapdexSample(sample)))) }
    })
}

/// Releases a sample handle. Null is ignored.
///
/// # Safety
/// `sample` must be null or a handle from `gapdex_sample_new` not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_sample_free(sample: *mut GapdexSample) {
    if !sample.is_null() {
        drop(unsafe { Box::from_raw(sample) });
    }
}

/// Number of observations, or 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_sample_len(sample: *const GapdexSample) -> usize {
    unsafe { sample.as_ref() }.map_or(0, |s| s.0.len())
}

/// # Safety
/// `sample` must be null or a live handle.
unsafe fn sample_ref<'a>(sample: *const GapdexSample) -> Result<&'a Sample, Failure> {
    unsafe { sample.as_ref() }.map(|s| &s.0).ok_or_else(|| null("sample"))
}

/// Writes the `n − 1` spacings into `buf`. `written` receives the count
/// required; if `cap` is smaller nothing is copied and
/// `GAPDEX_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `buf` must be valid for `cap` writes; `written` must be valid for one.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_sample_spacings(
    sample: *const GapdexSample,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> GapdexStatus {
    guard(|| {
        let gaps = unsafe { sample_ref(sample)? }.spacings();
        let gaps = gaps.gaps();
        unsafe { write_out(written, gaps.len())? };
        if cap < gaps.len() {
            return Err(Failure(
                GapdexStatus::BufferTooSmall,
                format!("need room for {} values, got {cap}", gaps.len()),
            ));
        }
        if !gaps.is_empty() {
            if buf.is_null() {
                return Err(null("buffer"));
            }
            unsafe { ptr::copy_nonoverlapping(gaps.as_ptr(), buf, gaps.len()) };
        }
        Ok(())
    })
}

/// Strongest two-cluster split. Cluster 1 holds order statistics
/// `1..=j`, cluster 2 holds `j+1..=n` (1-based).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GapdexSplit {
    pub j: usize,
    pub statistic: f64,
    pub separator_low: f64,
    pub separator_high: f64,
}

/// # Safety
/// `sample` must be a live handle; `out` valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_sample_cluster_split(sample: *const GapdexSample, out: *mut GapdexSplit) -> GapdexStatus {
    guard(|| {
        let s = gapdex::cluster_split(unsafe { sample_ref(sample)? })?;
        unsafe {
            write_out(
                out,
                GapdexSplit {
                    j: s.j,
                    statistic: s.statistic,
                    separator_low: s.separator_low,
                    separator_high: s.separator_high,
                },
            )
        }
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GapdexGumbelTest {
    /// Centered statistic n·Ĩ − ln n.
    pub x: f64,
    pub p_value: f64,
}

/// Asymptotic Gumbel p-value of cluster index `statistic` at size `n`.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_cluster_test(n: usize, statistic: f64, out: *mut GapdexGumbelTest) -> GapdexStatus {
    guard(|| {
        let t = gapdex::cluster_test(n, statistic)?;
        unsafe {
            write_out(
                out,
                GapdexGumbelTest {
                    x: t.x,
                    p_value: t.p_value,
                },
            )
        }
    })
}

/// Fills `buf` with the first `len` standard normals of substream
/// `(seed, index)`: exactly the variates replicate `index` of a simulation
/// seeded with `seed` consumes.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_substream_normals(seed: u64, index: u64, buf: *mut f64, len: usize) -> GapdexStatus {
    guard(|| {
        if len == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let out = unsafe { std::slice::from_raw_parts_mut(buf, len) };
        let mut stream = substream(seed, index);
        out.iter_mut().for_each(|v| *v = stream.next_std_normal());
        Ok(())
    })
}

/// Runs the null simulation of n·Ĩ − ln n (or, with `half`, of the
/// positive-side statistic) on the default grid and returns the report as
/// JSON. Free the string with `gapdex_string_free`.
///
/// # Safety
/// `out` must be valid for one write.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_simulate_json(
    n: usize,
    reps: usize,
    seed: u64,
    half: bool,
    out: *mut *mut c_char,
) -> GapdexStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let cfg = SimConfig::new(n, reps, seed, default_grid())?;
        let report = if half {
            gapdex::simulate_half_statistic(&cfg)?
        } else {
            gapdex::simulate_cluster_statistic(&cfg)?
        };
        let json = serde_json::to_string(&report).expect("reports serialize infallibly");
        let c = CString::new(json).expect("JSON has no interior NUL");
        unsafe { write_out(out, c.into_raw()) }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gapdex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
