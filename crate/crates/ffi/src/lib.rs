//! C interface to `relobs`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` and
//! released by the matching `*_free`. Every fallible call returns a
//! [`RelobsStatus`]; on failure [`relobs_last_error`] holds a message for the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and released with [`relobs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relobs::cli::{CliError, ErrorKind};
use relobs::parse::parse_operator;
use relobs::reduction::{reduce_hamiltonian, LinearFrameMap};
use relobs::spectral::harmonic::HarmonicDoc;
use relobs::spectral::{full_grid_spectrum, normal_modes, reduced_grid_spectrum, GridModel};
use relobs::symmetry::{classify, ParticleSystem, SymmetrySelection, SystemDoc};

/// Result of every fallible call. The error classes follow the command-line
/// exit codes: parse errors are 2, model errors 3, numerical failures 4.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelobsStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    ModelError = 3,
    NumericalError = 4,
    InvalidUtf8 = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A set of point particles in `dim` dimensions.
pub struct RelobsSystem {
    inner: ParticleSystem,
}

/// A two- or three-particle model on a periodic grid.
pub struct RelobsModel {
    inner: GridModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: RelobsStatus,
    message: String,
}

impl Failure {
    fn new(status: RelobsStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

/// Classifies a library error the way the command line does.
fn fail<E: Into<CliError>>(e: E) -> Failure {
    let e = e.into();
    let status = match e.kind {
        ErrorKind::Usage | ErrorKind::Parse => RelobsStatus::ParseError,
        ErrorKind::Model => RelobsStatus::ModelError,
        ErrorKind::Numerical => RelobsStatus::NumericalError,
    };
    Failure::new(status, format!("{}: {}", e.code, e.message))
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

/// Runs `body`, recording any failure or panic for [`relobs_last_error`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RelobsStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RelobsStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(_) => {
            set_last_error("internal panic");
            RelobsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(RelobsStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(RelobsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(RelobsStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(RelobsStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("output strings contain no NUL").into_raw()
}

/// Copies `values` into a caller buffer; `out_len` always receives the full
/// count so a short buffer can be resized and the call repeated.
unsafe fn fill(values: &[f64], out: *mut f64, capacity: usize, out_len: *mut usize) -> Result<(), Failure> {
    out_ptr(out_len, "out_len")?;
    *out_len = values.len();
    if values.len() > capacity {
        return Err(Failure::new(
            RelobsStatus::BufferTooSmall,
            format!("{} values do not fit in {capacity}", values.len()),
        ));
    }
    if !values.is_empty() {
        out_ptr(out, "out")?;
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn relobs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn relobs_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn relobs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system document `{"dim": d, "masses": ["p/q", ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relobs_system_from_json(json: *const c_char, out: *mut *mut RelobsSystem) -> RelobsStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc: SystemDoc = serde_json::from_str(text(json, "json")?)
            .map_err(|e| Failure::new(RelobsStatus::ParseError, e.to_string()))?;
        let inner = doc.into_system().map_err(fail)?;
        *out = Box::into_raw(Box::new(RelobsSystem { inner }));
        Ok(())
    })
}

/// # Safety
/// `system` must come from [`relobs_system_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn relobs_system_free(system: *mut RelobsSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Classifies an operator expression under translations, boosts and (for
/// `dim ≥ 2` when `rotations` is true) rotations. `out_json` may be null;
/// otherwise it receives `{"isPhysical", "generators": {name: {invariant,
/// residual}}}`.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn relobs_classify(
    system: *const RelobsSystem,
    expr: *const c_char,
    rotations: bool,
    out_physical: *mut bool,
    out_json: *mut *mut c_char,
) -> RelobsStatus {
    guard(|| {
        let system = &handle(system, "system")?.inner;
        out_ptr(out_physical, "out_physical")?;
        let o = parse_operator(text(expr, "expr")?, system.space()).map_err(fail)?;
        let mut sel = SymmetrySelection::for_dim(system.dim());
        sel.rotations &= rotations;
        let verdict = classify(&o, sel, &system.weights()).map_err(fail)?;
        *out_physical = verdict.is_physical;
        if !out_json.is_null() {
            let generators: serde_json::Map<String, serde_json::Value> = verdict
                .per_generator
                .iter()
                .map(|(g, v)| {
                    (g.name().into(), serde_json::json!({"invariant": v.invariant, "residual": v.residual.to_string()}))
                })
                .collect();
            let doc = serde_json::json!({"isPhysical": verdict.is_physical, "generators": generators});
            *out_json = into_c_string(doc.to_string());
        }
        Ok(())
    })
}

/// Rewrites a Hamiltonian in Jacobi coordinates and sets the total momentum
/// to zero. The result uses `z'[i]`/`p'[i]` for the internal coordinates.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn relobs_reduce(
    system: *const RelobsSystem,
    expr: *const c_char,
    out_text: *mut *mut c_char,
) -> RelobsStatus {
    guard(|| {
        let system = &handle(system, "system")?.inner;
        out_ptr(out_text, "out_text")?;
        let h = parse_operator(text(expr, "expr")?, system.space()).map_err(fail)?;
        let map = LinearFrameMap::jacobi(system);
        let reduced = reduce_hamiltonian(&h, &map).map_err(fail)?;
        let naming = relobs::algebra::Naming::Frame { cm_row: Some(map.cm_row()) };
        *out_text = into_c_string(reduced.display_with(naming));
        Ok(())
    })
}

/// Parses a grid model document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relobs_model_from_json(json: *const c_char, out: *mut *mut RelobsModel) -> RelobsStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let doc = serde_json::from_str(text(json, "json")?)
            .map_err(|e| Failure::new(RelobsStatus::ParseError, e.to_string()))?;
        let inner = GridModel::from_doc(doc).map_err(fail)?;
        *out = Box::into_raw(Box::new(RelobsModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`relobs_model_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn relobs_model_free(model: *mut RelobsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Lowest `count` internal levels (center of mass removed).
///
/// # Safety
/// `out` must hold `capacity` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn relobs_spectrum_reduced(
    model: *const RelobsModel,
    count: usize,
    out: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> RelobsStatus {
    guard(|| {
        let model = &handle(model, "model")?.inner;
        let res = reduced_grid_spectrum(model, count).map_err(fail)?;
        fill(&res.eigenvalues, out, capacity, out_len)
    })
}

/// Lowest `count` levels of a two-particle model at total-momentum index `sector`.
///
/// # Safety
/// `out` must hold `capacity` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn relobs_spectrum_sector(
    model: *const RelobsModel,
    sector: isize,
    count: usize,
    out: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> RelobsStatus {
    guard(|| {
        let model = &handle(model, "model")?.inner;
        let res = full_grid_spectrum(model, sector, count).map_err(fail)?;
        fill(&res.eigenvalues, out, capacity, out_len)
    })
}

/// Normal-mode frequencies (ascending) of a harmonic chain document
/// `{"masses": [...], "K": [[...]], "asrEnforced": bool}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn relobs_normal_modes(
    json: *const c_char,
    out: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> RelobsStatus {
    guard(|| {
        let doc: HarmonicDoc = serde_json::from_str(text(json, "json")?)
            .map_err(|e| Failure::new(RelobsStatus::ParseError, e.to_string()))?;
        let modes = normal_modes(&doc.into_model().map_err(fail)?).map_err(fail)?;
        fill(&modes.frequencies, out, capacity, out_len)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use relobs::spectral::SpectralError;

    #[test]
    fn spectral_errors_keep_their_class() {
        let f = fail(SpectralError::FitDegenerate("x".into()));
        assert_eq!(f.status, RelobsStatus::NumericalError);
        let f = fail(SpectralError::SectorOutOfRange { k: 9, points: 4 });
        assert_eq!(f.status, RelobsStatus::ModelError);
        assert!(f.message.starts_with("SectorOutOfRange"));
    }

    #[test]
    fn panics_are_contained() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, RelobsStatus::Panic);
        assert!(!relobs_last_error().is_null());
    }
}
