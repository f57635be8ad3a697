//! C ABI over the shiftdiag library: build Markov diagrams behind an opaque
//! handle, query counts, and render JSON/DOT, with status codes instead of
//! panics at every boundary.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use shiftdiag::cli::{build_diagram, Resolved, SystemSpec};
use shiftdiag::error::Error;
use shiftdiag::paths::count_rooted_paths;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8Error = 2,
    /// Arguments were understood but invalid (unknown system, bad directive, …).
    InvalidArgument = 3,
    /// Arguments were out of range for the requested computation.
    RangeError = 4,
    /// The computation itself failed.
    ComputeError = 5,
    /// A panic was caught at the boundary; state may be incomplete.
    Panic = 6,
}

/// Opaque handle to a constructed Markov diagram.
pub struct SdDiagram {
    inner: shiftdiag::MarkovDiagram,
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidDirective(_)
        | Error::InvalidSlope(_)
        | Error::InvalidSubstitution(_)
        | Error::InvalidBlock(_)
        | Error::NotProlongable { .. }
        | Error::BlockNotInLanguage { .. }
        | Error::DirectiveExhausted(_) => SdStatus::InvalidArgument,
        Error::LengthOutOfRange { .. }
        | Error::HorizonExceedsTable { .. }
        | Error::InsufficientPrefix { .. }
        | Error::DepthBoundTooSmall { .. } => SdStatus::RangeError,
        _ => SdStatus::ComputeError,
    }
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn cstr_arg<'a>(p: *const c_char) -> Result<Option<&'a str>, SdStatus> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| SdStatus::Utf8Error)
}

fn write_string(s: String, out: *mut *mut c_char) -> SdStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SdStatus::Ok
        }
        Err(_) => SdStatus::ComputeError,
    }
}

fn resolve(
    system: &str,
    directive: Option<&str>,
    depth: usize,
    horizon: isize,
) -> Result<Resolved, Error> {
    let system = SystemSpec::from_parts(system, directive, None, None)?;
    if depth == 0 {
        return Err(Error::LengthOutOfRange { len: 0, max_len: 0 });
    }
    let horizon = if horizon < 0 {
        2 * (depth + 1) + 8
    } else {
        horizon as usize
    };
    Ok(Resolved {
        system,
        depth,
        horizon,
        scan_len: None,
    })
}

/// Generates the first `len` letters of a system's one-sided word into a
/// newly allocated NUL-terminated string. `directive` may be null except for
/// sturmian systems. Free the result with `sd_string_free`.
///
/// # Safety
/// `system` and (when non-null) `directive` must be NUL-terminated strings;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sd_prefix_generate(
    system: *const c_char,
    directive: *const c_char,
    len: usize,
    out: *mut *mut c_char,
) -> SdStatus {
    if system.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    let system = match cstr_arg(system) {
        Ok(Some(s)) => s,
        Ok(None) => return SdStatus::NullPointer,
        Err(status) => return status,
    };
    let directive = match cstr_arg(directive) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match catch_unwind(AssertUnwindSafe(|| {
        let spec = SystemSpec::from_parts(system, directive, None, None)?;
        let prefix = spec.prefix(len)?;
        Ok::<String, Error>(shiftdiag::block::display(&prefix))
    })) {
        Ok(Ok(text)) => write_string(text, out),
        Ok(Err(e)) => status_of(&e),
        Err(_) => SdStatus::Panic,
    }
}

/// Builds the depth-bounded Markov diagram of a system. Pass a negative
/// `horizon` for the default `2(depth+1)+8`. On success `*out` owns the
/// diagram; release it with `sd_diagram_free`.
///
/// # Safety
/// `system` and (when non-null) `directive` must be NUL-terminated strings;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_build(
    system: *const c_char,
    directive: *const c_char,
    depth: usize,
    horizon: isize,
    out: *mut *mut SdDiagram,
) -> SdStatus {
    if system.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    let system = match cstr_arg(system) {
        Ok(Some(s)) => s,
        Ok(None) => return SdStatus::NullPointer,
        Err(status) => return status,
    };
    let directive = match cstr_arg(directive) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match catch_unwind(AssertUnwindSafe(|| {
        let resolved = resolve(system, directive, depth, horizon)?;
        build_diagram(&resolved, None)
    })) {
        Ok(Ok(d)) => {
            *out = Box::into_raw(Box::new(SdDiagram { inner: d }));
            SdStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => SdStatus::Panic,
    }
}

/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_vertex_count(
    diagram: *const SdDiagram,
    out: *mut usize,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    *out = (*diagram).inner.vertices.len();
    SdStatus::Ok
}

/// Number of arrows within the diagram (frontier arrows excluded).
///
/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_arrow_count(
    diagram: *const SdDiagram,
    out: *mut usize,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    *out = (*diagram).inner.arrows.len();
    SdStatus::Ok
}

/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_frontier_count(
    diagram: *const SdDiagram,
    out: *mut usize,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    *out = (*diagram).inner.frontier.len();
    SdStatus::Ok
}

/// Counts rooted paths with exactly `n` vertices; fails with a range error
/// when the diagram's depth bound is too small for an exact count.
///
/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_rooted_path_count(
    diagram: *const SdDiagram,
    n: usize,
    out: *mut u64,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(|| {
        count_rooted_paths(&(*diagram).inner, n)
    })) {
        Ok(Ok(count)) => {
            *out = count;
            SdStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => SdStatus::Panic,
    }
}

/// Renders the diagram as pretty-printed JSON into a newly allocated string.
/// Free the result with `sd_string_free`.
///
/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_to_json(
    diagram: *const SdDiagram,
    out: *mut *mut c_char,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(|| (*diagram).inner.to_json())) {
        Ok(Ok(json)) => write_string(json, out),
        Ok(Err(e)) => status_of(&e),
        Err(_) => SdStatus::Panic,
    }
}

/// Renders the diagram in Graphviz DOT into a newly allocated string.
/// Free the result with `sd_string_free`.
///
/// # Safety
/// `diagram` must come from `sd_diagram_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_to_dot(
    diagram: *const SdDiagram,
    out: *mut *mut c_char,
) -> SdStatus {
    if diagram.is_null() || out.is_null() {
        return SdStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(|| (*diagram).inner.to_dot())) {
        Ok(dot) => write_string(dot, out),
        Err(_) => SdStatus::Panic,
    }
}

/// Releases a diagram handle. Null is ignored.
///
/// # Safety
/// `diagram` must be null or an unreleased handle from `sd_diagram_build`.
#[no_mangle]
pub unsafe extern "C" fn sd_diagram_free(diagram: *mut SdDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Releases a string allocated by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or an unreleased string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static description of a status code; never null, do not free.
#[no_mangle]
pub extern "C" fn sd_status_message(status: SdStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        SdStatus::Ok => b"ok\0",
        SdStatus::NullPointer => b"a required pointer argument was null\0",
        SdStatus::Utf8Error => b"a string argument was not valid UTF-8\0",
        SdStatus::InvalidArgument => b"invalid argument\0",
        SdStatus::RangeError => b"argument out of range\0",
        SdStatus::ComputeError => b"computation failed\0",
        SdStatus::Panic => b"internal panic caught at the boundary\0",
    };
    msg.as_ptr() as *const c_char
}
