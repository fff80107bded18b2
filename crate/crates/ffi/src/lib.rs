//! C ABI over `lcpforms`.
//!
//! Objects are opaque handles created by `lcp_*` constructors and released
//! with the matching `*_free`. Every fallible call returns an [`LcpStatus`];
//! on failure `lcp_last_error_message` describes the error for the calling
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with `lcp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lcpforms::exterior::{hodge, stabilizer_dim, wedge};
use lcpforms::groups::{self, FiniteGroup, DEFAULT_CAP};
use lcpforms::json::{parse_generators, FormJson, GroupFile, GroupMetadata};
use lcpforms::{structures, CayleyTable, Error, Form};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    DimensionMismatch = 4,
    DegreeMismatch = 5,
    InvalidIndex = 6,
    NotOrthonormal = 7,
    CapExceeded = 8,
    OrderMismatch = 9,
    ConventionMismatch = 10,
    Numeric = 11,
    Io = 12,
    Panic = 13,
}

impl From<&Error> for LcpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => LcpStatus::DimensionMismatch,
            Error::DegreeMismatch { .. } => LcpStatus::DegreeMismatch,
            Error::InvalidIndex { .. } => LcpStatus::InvalidIndex,
            Error::NotSkew | Error::NotOrthonormal(_) => LcpStatus::NotOrthonormal,
            Error::CapExceeded { .. } => LcpStatus::CapExceeded,
            Error::OrderMismatch { .. } => LcpStatus::OrderMismatch,
            Error::ConventionMismatch(_) | Error::NotGeneric(_) => LcpStatus::ConventionMismatch,
            Error::NearOrigin(_) | Error::NotUnit(_) | Error::Residual(_) => LcpStatus::Numeric,
            Error::Parse(_) | Error::Json(_) => LcpStatus::Parse,
            Error::NegativeInput(_) | Error::InvalidArgument(_) => LcpStatus::InvalidArgument,
            Error::Io(_) => LcpStatus::Io,
        }
    }
}

/// Standard structure forms.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcpFormKind {
    G2 = 0,
    Spin7 = 1,
    Spin7Octonionic = 2,
}

/// Opaque exact differential form.
pub struct LcpForm(Form);

/// Opaque finite matrix group.
pub struct LcpGroup(FiniteGroup);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (LcpStatus, String)>) -> LcpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LcpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LcpStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (LcpStatus, String)>;
}

impl<T> IntoFfi<T> for lcpforms::Result<T> {
    fn ffi(self) -> Result<T, (LcpStatus, String)> {
        self.map_err(|e| (LcpStatus::from(&e), e.to_string()))
    }
}

fn null(what: &str) -> (LcpStatus, String) {
    (LcpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, (LcpStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (LcpStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (LcpStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (LcpStatus, String)> {
    let c = CString::new(s).map_err(|_| (LcpStatus::Parse, "string contains NUL".to_string()))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LcpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn boxed<T>(x: T) -> *mut T {
    Box::into_raw(Box::new(x))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `lcp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn lcp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lcp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lcp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_standard(kind: LcpFormKind, out: *mut *mut LcpForm) -> LcpStatus {
    guard(|| {
        let f = match kind {
            LcpFormKind::G2 => structures::g2_form(),
            LcpFormKind::Spin7 => structures::spin7_form(),
            LcpFormKind::Spin7Octonionic => structures::spin7_form_octonionic(),
        };
        write_out(out, boxed(LcpForm(f)), "out")
    })
}

/// Parses `{"dim":..,"degree":..,"terms":[{"idx":[..],"coef":"p/q"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_from_json(
    json: *const c_char,
    out: *mut *mut LcpForm,
) -> LcpStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let j: FormJson =
            serde_json::from_str(text).map_err(|e| (LcpStatus::Parse, e.to_string()))?;
        let f = Form::try_from(&j).ffi()?;
        write_out(out, boxed(LcpForm(f)), "out")
    })
}

/// # Safety
/// `form` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_to_json(
    form: *const LcpForm,
    out: *mut *mut c_char,
) -> LcpStatus {
    guard(|| {
        let f = deref(form, "form")?;
        let s = serde_json::to_string(&FormJson::from(&f.0))
            .map_err(|e| (LcpStatus::Parse, e.to_string()))?;
        write_string(out, s)
    })
}

/// # Safety
/// `form` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_dim(form: *const LcpForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.dim())
}

/// # Safety
/// `form` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_degree(form: *const LcpForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.degree())
}

/// Dimension of the stabilizer of the form in `so(n)`.
///
/// # Safety
/// `form` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_stabilizer_dim(
    form: *const LcpForm,
    out: *mut usize,
) -> LcpStatus {
    guard(|| {
        let f = deref(form, "form")?;
        write_out(out, stabilizer_dim(&f.0), "out")
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_wedge(
    a: *const LcpForm,
    b: *const LcpForm,
    out: *mut *mut LcpForm,
) -> LcpStatus {
    guard(|| {
        let w = wedge(&deref(a, "a")?.0, &deref(b, "b")?.0).ffi()?;
        write_out(out, boxed(LcpForm(w)), "out")
    })
}

/// # Safety
/// `a` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_hodge(a: *const LcpForm, out: *mut *mut LcpForm) -> LcpStatus {
    guard(|| {
        let h = hodge(&deref(a, "a")?.0);
        write_out(out, boxed(LcpForm(h)), "out")
    })
}

/// True when the two forms are exactly equal.
///
/// # Safety
/// `a`, `b` must be live handles or null.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_equal(a: *const LcpForm, b: *const LcpForm) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// # Safety
/// `form` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lcp_form_free(form: *mut LcpForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Group generated by right multiplications by a frame given as basis
/// labels, e.g. `"e1,e2,-e7"`. Fails unless the order is `2^(m+1)`.
/// `cap == 0` selects the default cap.
///
/// # Safety
/// `labels` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_from_frame(
    labels: *const c_char,
    cap: usize,
    out: *mut *mut LcpGroup,
) -> LcpStatus {
    guard(|| {
        let frame = groups::parse_frame_labels(str_arg(labels, "labels")?).ffi()?;
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        let g = groups::frame_group(CayleyTable::standard(), &frame, cap).ffi()?;
        write_out(out, boxed(LcpGroup(g)), "out")
    })
}

/// Closure of generator matrices given as JSON (a list of
/// `{"dim":n,"rows":[[..]]}` or `{"generators":[..]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_from_generators_json(
    json: *const c_char,
    cap: usize,
    out: *mut *mut LcpGroup,
) -> LcpStatus {
    guard(|| {
        let gens = parse_generators(str_arg(json, "json")?).ffi()?;
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        let g = groups::closure(&gens, cap).ffi()?;
        write_out(out, boxed(LcpGroup(g)), "out")
    })
}

/// The order-8 quaternionic example in `Sp(2)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_sp2_example(out: *mut *mut LcpGroup) -> LcpStatus {
    guard(|| {
        let g = groups::sp2_example_group(CayleyTable::standard()).ffi()?;
        write_out(out, boxed(LcpGroup(g)), "out")
    })
}

/// # Safety
/// `group` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_order(group: *const LcpGroup) -> usize {
    group.as_ref().map_or(0, |g| g.0.order())
}

/// Whether the group acts freely on the unit sphere.
///
/// # Safety
/// `group` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_is_free(group: *const LcpGroup, out: *mut bool) -> LcpStatus {
    guard(|| {
        let g = deref(group, "group")?;
        write_out(out, groups::is_free_on_sphere(&g.0).free, "out")
    })
}

/// Classification report (order, freeness with witnesses, preservation of
/// `form`) as JSON.
///
/// # Safety
/// `group`, `form` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_classify_json(
    group: *const LcpGroup,
    form: *const LcpForm,
    out: *mut *mut c_char,
) -> LcpStatus {
    guard(|| {
        let r = groups::classify(&deref(group, "group")?.0, &deref(form, "form")?.0).ffi()?;
        write_string(
            out,
            serde_json::to_string(&r).map_err(|e| (LcpStatus::Parse, e.to_string()))?,
        )
    })
}

/// Group file JSON: generators, labelled elements, metadata.
///
/// # Safety
/// `group` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_to_json(
    group: *const LcpGroup,
    out: *mut *mut c_char,
) -> LcpStatus {
    guard(|| {
        let g = deref(group, "group")?;
        let file = GroupFile::from_group(
            &g.0,
            GroupMetadata {
                source: "ffi".into(),
                ..Default::default()
            },
        );
        write_string(
            out,
            serde_json::to_string(&file).map_err(|e| (LcpStatus::Parse, e.to_string()))?,
        )
    })
}

/// # Safety
/// `group` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lcp_group_free(group: *mut LcpGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}
