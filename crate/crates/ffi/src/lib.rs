//! C ABI over the obstruct library.
//!
//! Subjects and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns an
//! [`ObstructStatus`]; on failure a message is available from
//! [`obstruct_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use obstruct::catalog;
use obstruct::contravariant::curvature_explicit;
use obstruct::poisson::divergence_defect;
use obstruct::report::{
    render_report, run_checks, Check, CheckConfig, CheckSection, ConfigFile, Format, ObstructionReport, Status, Subject,
};
use obstruct::Error;

/// Result of an API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed config, unknown check or bad run settings.
    Config = 3,
    /// The scene or presentation violates a structural invariant.
    InvalidScene = 4,
    /// An expression could not be evaluated at the requested point.
    Evaluation = 5,
    UnknownExample = 6,
    /// Wrong point dimension, index out of range or output buffer too small.
    InvalidArgument = 7,
    Panic = 99,
}

/// Check identifiers, in the order of the report schema.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructCheck {
    Jacobi = 0,
    Divergence = 1,
    Torsion = 2,
    MetricCompat = 3,
    Curvature = 4,
    GprimeFlat = 5,
    Cybe = 6,
    QgDivergence = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructCheckStatus {
    Pass = 0,
    Fail = 1,
    Skipped = 2,
    Error = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructFormat {
    Json = 0,
    Text = 1,
    CsvPoints = 2,
}

/// One row of a report. `max_defect` is NaN when the check produced no value.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ObstructCheckSummary {
    pub check: ObstructCheck,
    pub status: ObstructCheckStatus,
    pub tolerance: f64,
    pub max_defect: f64,
}

/// A scene or Lie-algebra presentation with the check settings of its config.
pub struct ObstructSubject {
    subject: Subject,
    section: CheckSection,
}

pub struct ObstructReport {
    report: ObstructionReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ObstructStatus {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::UnknownParameter(_) => ObstructStatus::Config,
        Error::InvalidScene(_) | Error::InvalidPresentation(_) | Error::RankMismatch(_) => ObstructStatus::InvalidScene,
        Error::Domain { .. }
        | Error::DivisionByZero
        | Error::SingularMetric { .. }
        | Error::DegeneratePoisson { .. }
        | Error::ExcludedPoint => ObstructStatus::Evaluation,
        Error::UnknownExample(_) => ObstructStatus::UnknownExample,
        Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } => ObstructStatus::InvalidArgument,
    }
}

fn fail(status: ObstructStatus, msg: impl Into<String>) -> ObstructStatus {
    set_error(msg.into());
    status
}

impl From<Error> for ObstructStatus {
    fn from(e: Error) -> Self {
        fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), ObstructStatus>) -> ObstructStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ObstructStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ObstructStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ObstructStatus> {
    if p.is_null() {
        return Err(fail(ObstructStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ObstructStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, ObstructStatus> {
    p.as_ref().ok_or_else(|| fail(ObstructStatus::NullArgument, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), ObstructStatus> {
    if p.is_null() {
        Err(fail(ObstructStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn to_check(c: Check) -> ObstructCheck {
    match c {
        Check::Jacobi => ObstructCheck::Jacobi,
        Check::Divergence => ObstructCheck::Divergence,
        Check::Torsion => ObstructCheck::Torsion,
        Check::MetricCompat => ObstructCheck::MetricCompat,
        Check::Curvature => ObstructCheck::Curvature,
        Check::GprimeFlat => ObstructCheck::GprimeFlat,
        Check::Cybe => ObstructCheck::Cybe,
        Check::QgDivergence => ObstructCheck::QgDivergence,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn obstruct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn obstruct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Name of a check as used in configs and reports (static string).
#[no_mangle]
pub extern "C" fn obstruct_check_name(check: ObstructCheck) -> *const c_char {
    let s: &'static str = match check {
        ObstructCheck::Jacobi => "jacobi\0",
        ObstructCheck::Divergence => "divergence\0",
        ObstructCheck::Torsion => "torsion\0",
        ObstructCheck::MetricCompat => "metric_compat\0",
        ObstructCheck::Curvature => "curvature\0",
        ObstructCheck::GprimeFlat => "gprime_flat\0",
        ObstructCheck::Cybe => "cybe\0",
        ObstructCheck::QgDivergence => "qg_divergence\0",
    };
    s.as_ptr().cast()
}

/// Parses a JSON config document (`"kind": "scene"` or `"lie_algebra"`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_subject_from_json(
    json: *const c_char,
    out: *mut *mut ObstructSubject,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let text = str_arg(json, "json")?;
        let file = ConfigFile::parse(text)?;
        let subject = file.document.to_subject()?;
        *out = Box::into_raw(Box::new(ObstructSubject { subject, section: file.checks }));
        Ok(())
    })
}

/// Loads a built-in catalog entry by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_subject_from_example(
    name: *const c_char,
    out: *mut *mut ObstructSubject,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let entry = catalog::load_example(str_arg(name, "name")?)?;
        *out = Box::into_raw(Box::new(ObstructSubject { subject: entry.subject, section: CheckSection::default() }));
        Ok(())
    })
}

/// # Safety
/// `subject` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_subject_free(subject: *mut ObstructSubject) {
    if !subject.is_null() {
        drop(Box::from_raw(subject));
    }
}

/// Chart dimension of a scene, or the dimension of a Lie algebra; 0 for NULL.
///
/// # Safety
/// `subject` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn obstruct_subject_dimension(subject: *const ObstructSubject) -> usize {
    match subject.as_ref().map(|s| &s.subject) {
        Some(Subject::Scene(s)) => s.dim(),
        Some(Subject::LieAlgebra { presentation, .. }) => presentation.dim(),
        None => 0,
    }
}

/// Runs the subject's checks. `grid` overrides the samples per axis when
/// nonzero; `workers` is the thread count, 0 for automatic.
///
/// # Safety
/// `subject` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_run(
    subject: *const ObstructSubject,
    grid: usize,
    workers: usize,
    out: *mut *mut ObstructReport,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let s = ref_arg(subject, "subject")?;
        let mut config = CheckConfig::defaults_for(&s.subject).with_section(&s.section)?;
        if grid != 0 {
            config.grid = vec![grid];
        }
        config.workers = workers;
        let report = run_checks(&s.subject, &config)?;
        *out = Box::into_raw(Box::new(ObstructReport { report }));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_report_free(report: *mut ObstructReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 0 if every check passed or was skipped, 1 on any failure, 2 on any
/// evaluation error; -1 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn obstruct_report_exit_code(report: *const ObstructReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.report.exit_code())
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn obstruct_report_check_count(report: *const ObstructReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.checks.len())
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_report_check(
    report: *const ObstructReport,
    index: usize,
    out: *mut ObstructCheckSummary,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let r = ref_arg(report, "report")?;
        let c = r.report.checks.get(index).ok_or_else(|| {
            fail(
                ObstructStatus::InvalidArgument,
                format!("check index {index} out of range ({})", r.report.checks.len()),
            )
        })?;
        let status = match c.status {
            Status::Pass => ObstructCheckStatus::Pass,
            Status::Fail => ObstructCheckStatus::Fail,
            Status::Skipped { .. } => ObstructCheckStatus::Skipped,
            Status::Error { .. } => ObstructCheckStatus::Error,
        };
        *out = ObstructCheckSummary {
            check: to_check(c.check),
            status,
            tolerance: c.tolerance,
            max_defect: c.max_defect.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Renders a report. The string is owned by the caller and released with
/// [`obstruct_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_report_render(
    report: *const ObstructReport,
    format: ObstructFormat,
    out: *mut *mut c_char,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let r = ref_arg(report, "report")?;
        let format = match format {
            ObstructFormat::Json => Format::Json,
            ObstructFormat::Text => Format::Text,
            ObstructFormat::CsvPoints => Format::CsvPoints,
        };
        let bytes = render_report(&r.report, format, None)?;
        let s = CString::new(bytes).map_err(|_| fail(ObstructStatus::Panic, "rendered report contains NUL"))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn scene_point<'a>(
    subject: *const ObstructSubject,
    point: *const f64,
    n: usize,
) -> Result<(&'a obstruct::geometry::Scene, &'a [f64]), ObstructStatus> {
    let s = ref_arg(subject, "subject")?;
    let Subject::Scene(scene) = &s.subject else {
        return Err(fail(ObstructStatus::InvalidArgument, "subject is not a scene"));
    };
    if point.is_null() {
        return Err(fail(ObstructStatus::NullArgument, "point is null"));
    }
    if n != scene.dim() {
        return Err(fail(
            ObstructStatus::InvalidArgument,
            format!("point has {n} coordinates, scene has {}", scene.dim()),
        ));
    }
    Ok((scene, std::slice::from_raw_parts(point, n)))
}

/// Writes the `n` components of the divergence `∇_j π^ij` at `point`.
///
/// # Safety
/// `point` must hold `n` doubles and `out` room for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn obstruct_divergence(
    subject: *const ObstructSubject,
    point: *const f64,
    n: usize,
    out: *mut f64,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let (scene, p) = scene_point(subject, point, n)?;
        let d = divergence_defect(scene, p)?;
        ptr::copy_nonoverlapping(d.as_ptr(), out, n);
        Ok(())
    })
}

/// Writes the `n⁴` components `K^ijk_l` of the contravariant curvature at
/// `point`, row-major in `(i, j, k, l)`. `out_len` is the capacity of `out`.
///
/// # Safety
/// `point` must hold `n` doubles and `out` room for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn obstruct_curvature(
    subject: *const ObstructSubject,
    point: *const f64,
    n: usize,
    out: *mut f64,
    out_len: usize,
) -> ObstructStatus {
    guard(|| {
        out_arg(out, "out")?;
        let (scene, p) = scene_point(subject, point, n)?;
        let need = n.pow(4);
        if out_len < need {
            return Err(fail(ObstructStatus::InvalidArgument, format!("output holds {out_len} values, need {need}")));
        }
        let k = curvature_explicit(scene, p)?;
        ptr::copy_nonoverlapping(k.components.data().as_ptr(), out, need);
        Ok(())
    })
}
