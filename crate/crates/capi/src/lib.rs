//! C ABI for the supertwirl library: opaque channel handles, status codes,
//! and flat row-major buffers for matrices.
//!
//! Conventions:
//! - Every fallible call returns an [`StStatus`]; `Ok` is zero. On any other
//!   status the thread-local error message can be fetched once with
//!   [`supertwirl_last_error`].
//! - Complex matrices cross the boundary as row-major `f64` buffers with
//!   interleaved real and imaginary parts: a d×d matrix occupies `2·d·d`
//!   doubles.
//! - Strings returned through `char**` out-parameters are owned by the
//!   caller and must be released with [`supertwirl_string_free`]; channel
//!   handles with [`supertwirl_channel_free`].
//!
//! The generated header lives at `include/supertwirl.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use supertwirl::channel::Channel;
use supertwirl::error::Error;
use supertwirl::estimator::{self, ExperimentConfig, PlanMode};
use supertwirl::io::{channel_from_spec, to_json_string, ChannelJson};
use supertwirl::oracle::{minimal_two_design, single_qubit_cliffords, twirl_average};
use supertwirl::supermap::{apply_supermap, twirling_unitary};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A spec string or JSON document could not be parsed.
    ParseError = 3,
    /// The Kraus data does not describe a CPTP channel.
    InvalidChannel = 4,
    /// Matrix or register dimensions do not line up.
    DimensionError = 5,
    /// A numeric parameter is outside its admissible range.
    ParameterError = 6,
    /// A quantity that must be real or physical is not.
    NumericalError = 7,
    /// SPAM noise destroyed the distinguishability of the preparations.
    DegenerateSpam = 8,
    /// Any other internal failure.
    InternalError = 9,
}

/// How the twirl is computed.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StTwirlMethod {
    /// Conjugate by the fixed 24-dimensional gate and trace out the ancillas.
    Supermap = 0,
    /// Brute-force average over the 12-element 2-design.
    OracleGroup = 1,
    /// Brute-force average over the 24-element Clifford group.
    OracleClifford = 2,
}

/// How the Hoeffding bound consumes the confidence level.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StPlanMode {
    /// Reproduce the headline arithmetic (confidence plugged in directly).
    PaperLiteral = 0,
    /// Standard Hoeffding with failure probability 1 − alpha.
    Rigorous = 1,
}

/// Hoeffding shot budget.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StSamplePlan {
    pub epsilon: f64,
    pub alpha: f64,
    pub n_per_experiment: u64,
    pub n_total: u64,
}

/// Opaque channel handle.
pub struct StChannel {
    inner: Channel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn status_of(err: &Error) -> StStatus {
    match err {
        Error::Dimension(_) => StStatus::DimensionError,
        Error::Parameter(_) => StStatus::ParameterError,
        Error::Numerical(_) => StStatus::NumericalError,
        Error::GroupClosure { .. } => StStatus::InternalError,
        Error::DegenerateSpam { .. } => StStatus::DegenerateSpam,
        Error::InvalidChannel(_) => StStatus::InvalidChannel,
        Error::Parse(_) | Error::Io(_) | Error::Json(_) => StStatus::ParseError,
    }
}

fn fail(err: Error) -> StStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, StStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(StStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        StStatus::InvalidUtf8
    })
}

fn boxed_channel(channel: Channel, out: *mut *mut StChannel) -> StStatus {
    let handle = Box::into_raw(Box::new(StChannel { inner: channel }));
    unsafe { *out = handle };
    StStatus::Ok
}

/// Returns the most recent error message on this thread as a caller-owned
/// string (release with [`supertwirl_string_free`]), or null if no error has
/// occurred.
#[no_mangle]
pub extern "C" fn supertwirl_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn supertwirl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a channel from a spec string: `identity`, `depolarizing:p`,
/// `dephasing:p`, `amp_damp:p`, or the path of a channel JSON file.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_from_spec(
    spec: *const c_char,
    out: *mut *mut StChannel,
) -> StStatus {
    if out.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    let spec = match read_str(spec) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match channel_from_spec(spec) {
        Ok(channel) => boxed_channel(channel, out),
        Err(e) => fail(e),
    }
}

/// Builds a channel from a JSON document
/// `{"dim": d, "kraus": [[[ [re, im], ... ], ...], ...]}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_from_json(
    json: *const c_char,
    out: *mut *mut StChannel,
) -> StStatus {
    if out.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    let json = match read_str(json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let parsed: ChannelJson = match serde_json::from_str(json) {
        Ok(p) => p,
        Err(e) => return fail(Error::Json(e)),
    };
    match parsed.into_channel() {
        Ok(channel) => boxed_channel(channel, out),
        Err(e) => fail(e),
    }
}

/// Releases a channel handle.
///
/// # Safety
/// `channel` must be null or a handle previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_free(channel: *mut StChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Hilbert-space dimension of the channel, or 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_dim(channel: *const StChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.dim())
}

/// Number of Kraus operators, or 0 for a null handle.
///
/// # Safety
/// `channel` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_kraus_count(channel: *const StChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.kraus().len())
}

/// Copies Kraus operator `index` into `out`, which must hold `2·dim·dim`
/// doubles (row-major, interleaved re/im).
///
/// # Safety
/// `channel` must be a valid handle and `out` a buffer of the stated size.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_kraus(
    channel: *const StChannel,
    index: usize,
    out: *mut f64,
) -> StStatus {
    let Some(handle) = channel.as_ref() else {
        set_error("null channel handle");
        return StStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output buffer");
        return StStatus::NullPointer;
    }
    let Some(k) = handle.inner.kraus().get(index) else {
        set_error(format!(
            "Kraus index {index} out of range ({} operators)",
            handle.inner.kraus().len()
        ));
        return StStatus::ParameterError;
    };
    let mut offset = 0;
    for z in k.iter() {
        *out.add(offset) = z.re;
        *out.add(offset + 1) = z.im;
        offset += 2;
    }
    StStatus::Ok
}

/// Serializes the channel to its JSON wire form; the string is caller-owned.
///
/// # Safety
/// `channel` must be a valid handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_channel_to_json(
    channel: *const StChannel,
    out_json: *mut *mut c_char,
) -> StStatus {
    let Some(handle) = channel.as_ref() else {
        set_error("null channel handle");
        return StStatus::NullPointer;
    };
    if out_json.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    match to_json_string(&ChannelJson::from_channel(&handle.inner)) {
        Ok(json) => match CString::new(json) {
            Ok(s) => {
                *out_json = s.into_raw();
                StStatus::Ok
            }
            Err(_) => {
                set_error("JSON contained an interior NUL byte");
                StStatus::InternalError
            }
        },
        Err(e) => fail(e),
    }
}

fn twirl_ptm_of(
    channel: &Channel,
    method: StTwirlMethod,
) -> supertwirl::Result<supertwirl::channel::PauliTransferMatrix> {
    match method {
        StTwirlMethod::Supermap => apply_supermap(twirling_unitary(), channel)?.ptm(),
        StTwirlMethod::OracleGroup => twirl_average(&minimal_two_design(), channel),
        StTwirlMethod::OracleClifford => twirl_average(&single_qubit_cliffords(), channel),
    }
}

/// Twirls the channel and writes the 4×4 transfer matrix into `out_ptm`
/// (32 doubles, row-major interleaved re/im) and the depolarizing parameter
/// into `out_eta`. Either output pointer may be null to skip it.
///
/// # Safety
/// `channel` must be a valid handle; non-null output pointers must have the
/// stated capacity.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_twirl_ptm(
    channel: *const StChannel,
    method: StTwirlMethod,
    out_ptm: *mut f64,
    out_eta: *mut f64,
) -> StStatus {
    let Some(handle) = channel.as_ref() else {
        set_error("null channel handle");
        return StStatus::NullPointer;
    };
    let ptm = match twirl_ptm_of(&handle.inner, method) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    if !out_ptm.is_null() {
        let mut offset = 0;
        for z in ptm.gamma().iter() {
            *out_ptm.add(offset) = z.re;
            *out_ptm.add(offset + 1) = z.im;
            offset += 2;
        }
    }
    if !out_eta.is_null() {
        match ptm.eta() {
            Ok(eta) => *out_eta = eta,
            Err(e) => return fail(e),
        }
    }
    StStatus::Ok
}

/// Twirls the channel through the ancilla gate and returns the resulting
/// channel as a new handle.
///
/// # Safety
/// `channel` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_twirl_channel(
    channel: *const StChannel,
    out: *mut *mut StChannel,
) -> StStatus {
    let Some(handle) = channel.as_ref() else {
        set_error("null channel handle");
        return StStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    match apply_supermap(twirling_unitary(), &handle.inner) {
        Ok(twirled) => boxed_channel(twirled, out),
        Err(e) => fail(e),
    }
}

/// Runs the four-experiment protocol and returns the report as a JSON
/// string (caller-owned). `prep` and `meas` may be null for ideal SPAM;
/// `shots` = 0 selects exact mode.
///
/// # Safety
/// Non-null handles must be valid; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_estimate(
    target: *const StChannel,
    prep: *const StChannel,
    meas: *const StChannel,
    shots: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> StStatus {
    let Some(target) = target.as_ref() else {
        set_error("null target handle");
        return StStatus::NullPointer;
    };
    if out_json.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    let prep = prep
        .as_ref()
        .map_or_else(|| Channel::identity(2), |h| h.inner.clone());
    let meas = meas
        .as_ref()
        .map_or_else(|| Channel::identity(2), |h| h.inner.clone());
    let report = ExperimentConfig::new(target.inner.clone(), prep, meas, shots, seed)
        .and_then(|cfg| estimator::run(&cfg))
        .and_then(|report| to_json_string(&report));
    match report {
        Ok(json) => match CString::new(json) {
            Ok(s) => {
                *out_json = s.into_raw();
                StStatus::Ok
            }
            Err(_) => {
                set_error("JSON contained an interior NUL byte");
                StStatus::InternalError
            }
        },
        Err(e) => fail(e),
    }
}

/// Computes the Hoeffding shot budget for accuracy `epsilon` and confidence
/// `alpha`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_plan(
    epsilon: f64,
    alpha: f64,
    mode: StPlanMode,
    out: *mut StSamplePlan,
) -> StStatus {
    if out.is_null() {
        set_error("null output pointer");
        return StStatus::NullPointer;
    }
    let mode = match mode {
        StPlanMode::PaperLiteral => PlanMode::PaperLiteral,
        StPlanMode::Rigorous => PlanMode::Rigorous,
    };
    match estimator::plan_samples(epsilon, alpha, mode) {
        Ok(plan) => {
            *out = StSamplePlan {
                epsilon: plan.epsilon,
                alpha: plan.alpha,
                n_per_experiment: plan.n_per_experiment,
                n_total: plan.n_total,
            };
            StStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Dimension of the twirling gate (the full register), currently 24.
#[no_mangle]
pub extern "C" fn supertwirl_gate_dim() -> usize {
    twirling_unitary().profile().total_dim()
}

/// Copies the twirling gate into `out`, which must hold `2·dim·dim` doubles
/// with `dim` from [`supertwirl_gate_dim`] (row-major, interleaved re/im).
/// The register factors are qubit ⊗ ququart ⊗ qutrit.
///
/// # Safety
/// `out` must be a buffer of the stated size.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_gate_matrix(out: *mut f64) -> StStatus {
    if out.is_null() {
        set_error("null output buffer");
        return StStatus::NullPointer;
    }
    let mut offset = 0;
    for z in twirling_unitary().matrix().iter() {
        *out.add(offset) = z.re;
        *out.add(offset + 1) = z.im;
        offset += 2;
    }
    StStatus::Ok
}

/// Writes the exact survival probabilities P(1)…P(m_max) of the twirled
/// channel into `out` (`m_max` doubles).
///
/// # Safety
/// `channel` must be a valid handle and `out` a buffer of `m_max` doubles.
#[no_mangle]
pub unsafe extern "C" fn supertwirl_rb_curve(
    channel: *const StChannel,
    m_max: usize,
    out: *mut f64,
) -> StStatus {
    let Some(handle) = channel.as_ref() else {
        set_error("null channel handle");
        return StStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output buffer");
        return StStatus::NullPointer;
    }
    match estimator::rb_decay_curve(&handle.inner, m_max) {
        Ok(curve) => {
            for (i, p) in curve.iter().enumerate() {
                *out.add(i) = *p;
            }
            StStatus::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn spec_handle(spec: &str) -> *mut StChannel {
        let spec = CString::new(spec).unwrap();
        let mut handle: *mut StChannel = ptr::null_mut();
        let status = unsafe { supertwirl_channel_from_spec(spec.as_ptr(), &mut handle) };
        assert_eq!(status, StStatus::Ok);
        handle
    }

    #[test]
    fn spec_round_trip_and_getters() {
        let handle = spec_handle("amp_damp:0.1");
        unsafe {
            assert_eq!(supertwirl_channel_dim(handle), 2);
            assert_eq!(supertwirl_channel_kraus_count(handle), 2);
            let mut buf = [0.0f64; 8];
            assert_eq!(
                supertwirl_channel_kraus(handle, 0, buf.as_mut_ptr()),
                StStatus::Ok
            );
            assert!((buf[0] - 1.0).abs() < 1e-15); // K0[0][0].re
            assert!((buf[6] - 0.9f64.sqrt()).abs() < 1e-15); // K0[1][1].re
            assert_eq!(
                supertwirl_channel_kraus(handle, 5, buf.as_mut_ptr()),
                StStatus::ParameterError
            );
            supertwirl_channel_free(handle);
        }
    }

    #[test]
    fn twirl_eta_via_all_methods() {
        let handle = spec_handle("amp_damp:0.1");
        let expected = (2.0 * 0.9f64.sqrt() + 0.9) / 3.0;
        for method in [
            StTwirlMethod::Supermap,
            StTwirlMethod::OracleGroup,
            StTwirlMethod::OracleClifford,
        ] {
            let mut ptm = [0.0f64; 32];
            let mut eta = 0.0f64;
            let status =
                unsafe { supertwirl_twirl_ptm(handle, method, ptm.as_mut_ptr(), &mut eta) };
            assert_eq!(status, StStatus::Ok);
            assert!((eta - expected).abs() < 1e-10, "{method:?}");
            // Diagonal (1, eta, eta, eta), real.
            assert!((ptm[0] - 1.0).abs() < 1e-10);
            for k in [10, 20, 30] {
                assert!((ptm[k] - expected).abs() < 1e-10);
            }
        }
        unsafe { supertwirl_channel_free(handle) };
    }

    #[test]
    fn twirled_channel_handle_is_depolarizing() {
        let handle = spec_handle("amp_damp:0.3");
        let mut twirled: *mut StChannel = ptr::null_mut();
        let status = unsafe { supertwirl_twirl_channel(handle, &mut twirled) };
        assert_eq!(status, StStatus::Ok);
        unsafe {
            assert_eq!(supertwirl_channel_dim(twirled), 2);
            assert_eq!(supertwirl_channel_kraus_count(twirled), 24);
            supertwirl_channel_free(twirled);
            supertwirl_channel_free(handle);
        }
    }

    #[test]
    fn estimate_returns_report_json() {
        let target = spec_handle("depolarizing:0.8");
        let mut json: *mut c_char = ptr::null_mut();
        let status =
            unsafe { supertwirl_estimate(target, ptr::null(), ptr::null(), 0, 0, &mut json) };
        assert_eq!(status, StStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((value["eta"].as_f64().unwrap() - 0.8).abs() < 1e-10);
        unsafe {
            supertwirl_string_free(json);
            supertwirl_channel_free(target);
        }
    }

    #[test]
    fn degenerate_spam_surfaces_as_status_and_message() {
        let target = spec_handle("amp_damp:0.1");
        let prep = spec_handle("depolarizing:0");
        let mut json: *mut c_char = ptr::null_mut();
        let status = unsafe { supertwirl_estimate(target, prep, ptr::null(), 0, 0, &mut json) };
        assert_eq!(status, StStatus::DegenerateSpam);
        let msg = supertwirl_last_error();
        assert!(!msg.is_null());
        let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap().to_owned();
        assert!(text.contains("degenerate"), "{text}");
        unsafe {
            supertwirl_string_free(msg);
            supertwirl_channel_free(prep);
            supertwirl_channel_free(target);
        }
    }

    #[test]
    fn plan_struct_round_trip() {
        let mut plan = StSamplePlan {
            epsilon: 0.0,
            alpha: 0.0,
            n_per_experiment: 0,
            n_total: 0,
        };
        let status = unsafe { supertwirl_plan(1e-3, 0.95, StPlanMode::PaperLiteral, &mut plan) };
        assert_eq!(status, StStatus::Ok);
        assert_eq!(plan.n_per_experiment, 372_220);
        assert_eq!(plan.n_total, 1_488_880);

        let status = unsafe { supertwirl_plan(-1.0, 0.95, StPlanMode::Rigorous, &mut plan) };
        assert_eq!(status, StStatus::ParameterError);
    }

    #[test]
    fn gate_export_is_unitary() {
        let dim = supertwirl_gate_dim();
        assert_eq!(dim, 24);
        let mut buf = vec![0.0f64; 2 * dim * dim];
        let status = unsafe { supertwirl_gate_matrix(buf.as_mut_ptr()) };
        assert_eq!(status, StStatus::Ok);
        let entries: Vec<num_complex::Complex64> = buf
            .chunks_exact(2)
            .map(|c| num_complex::Complex64::new(c[0], c[1]))
            .collect();
        let m = ndarray::Array2::from_shape_vec((dim, dim), entries).unwrap();
        assert!(supertwirl::linalg::unitarity_check(&m, 1e-12));
    }

    #[test]
    fn rb_curve_buffer() {
        let handle = spec_handle("depolarizing:0.9");
        let mut buf = [0.0f64; 5];
        let status = unsafe { supertwirl_rb_curve(handle, 5, buf.as_mut_ptr()) };
        assert_eq!(status, StStatus::Ok);
        for (m, p) in buf.iter().enumerate() {
            let expected = (1.0 + 0.9f64.powi(m as i32 + 2)) / 2.0;
            assert!((p - expected).abs() < 1e-10);
        }
        unsafe { supertwirl_channel_free(handle) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut handle: *mut StChannel = ptr::null_mut();
            assert_eq!(
                supertwirl_channel_from_spec(ptr::null(), &mut handle),
                StStatus::NullPointer
            );
            let spec = CString::new("identity").unwrap();
            assert_eq!(
                supertwirl_channel_from_spec(spec.as_ptr(), ptr::null_mut()),
                StStatus::NullPointer
            );
            assert_eq!(supertwirl_channel_dim(ptr::null()), 0);
            assert_eq!(
                supertwirl_rb_curve(ptr::null(), 3, ptr::null_mut()),
                StStatus::NullPointer
            );
        }
    }

    #[test]
    fn bad_spec_reports_parse_error() {
        let spec = CString::new("depolarizing:goo").unwrap();
        let mut handle: *mut StChannel = ptr::null_mut();
        let status = unsafe { supertwirl_channel_from_spec(spec.as_ptr(), &mut handle) };
        assert_eq!(status, StStatus::ParseError);
        let spec = CString::new("depolarizing:1.7").unwrap();
        let status = unsafe { supertwirl_channel_from_spec(spec.as_ptr(), &mut handle) };
        assert_eq!(status, StStatus::ParameterError);
    }

    #[test]
    fn json_round_trip_through_the_abi() {
        let handle = spec_handle("dephasing:0.2");
        let mut json: *mut c_char = ptr::null_mut();
        let status = unsafe { supertwirl_channel_to_json(handle, &mut json) };
        assert_eq!(status, StStatus::Ok);
        let mut back: *mut StChannel = ptr::null_mut();
        let status = unsafe { supertwirl_channel_from_json(json, &mut back) };
        assert_eq!(status, StStatus::Ok);
        unsafe {
            assert_eq!(supertwirl_channel_kraus_count(back), 2);
            supertwirl_string_free(json);
            supertwirl_channel_free(back);
            supertwirl_channel_free(handle);
        }
    }

    #[test]
    fn version_is_a_static_string() {
        let v = supertwirl_version();
        let text = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }
}
