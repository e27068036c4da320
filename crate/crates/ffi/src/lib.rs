//! C interface to the fenchel calculus.
//!
//! Objects cross the boundary as opaque handles; constructors read the same
//! JSON documents the CLI exchanges, and numeric data crosses as plain
//! `double` arrays (matrices row-major). Every fallible call returns a
//! `FenchelStatus`; on failure the out-parameters are left untouched and
//! `fenchel_last_error` holds a message for the calling thread.
//!
//! Ownership is explicit. Handles returned through `out` parameters are
//! released with the matching `*_free`; strings returned through `char **`
//! are released with `fenchel_string_free`. Handles are plain immutable
//! values: no call mutates its arguments, and distinct handles may be used
//! from distinct threads freely, but a single handle must not be freed while
//! another thread is reading it.
//!
//! Infinite function values cross the boundary as C `HUGE_VAL` with the
//! appropriate sign; finite values are ordinary doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fenchel::bifunction::{Polarity, QuadBifunction};
use fenchel::gauss::{condition_logpdf, GaussMap};
use fenchel::numeric::{Matrix, Vector};
use fenchel::pcqf::Pcqf;
use fenchel::serial;
use fenchel::{Error, DEFAULT_TOL, EQ_TOL};

/// Result code of a fallible call. `FENCHEL_STATUS_OK` is zero; everything
/// else is a failure and leaves a message in `fenchel_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FenchelStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Operand shapes do not fit together.
    DimensionMismatch = 3,
    /// A quadratic form violated the convexity its polarity requires.
    NotConvex = 4,
    /// The result would be -inf (or +inf on the concave side) everywhere.
    Unbounded = 5,
    /// Malformed input: unreadable JSON, non-finite entries, stray values.
    ImproperInput = 6,
    /// Convex and concave operands were mixed where one family is required.
    PolarityMismatch = 7,
    /// The observed value lies outside the support of the joint state.
    InfeasibleObservation = 8,
    /// The library caught an internal panic; the operation had no effect.
    Panic = 9,
}

/// Orientation of a bifunction: convex functions compose with infima,
/// concave ones with suprema.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FenchelPolarity {
    Convex = 0,
    Concave = 1,
}

impl FenchelPolarity {
    fn to_core(self) -> Polarity {
        match self {
            FenchelPolarity::Convex => Polarity::Convex,
            FenchelPolarity::Concave => Polarity::Concave,
        }
    }

    fn from_core(p: Polarity) -> Self {
        match p {
            Polarity::Convex => FenchelPolarity::Convex,
            Polarity::Concave => FenchelPolarity::Concave,
        }
    }
}

/// A partial convex quadratic function on R^n. Opaque.
pub struct FenchelPcqf(Pcqf);

/// A convex or concave quadratic bifunction between R^m and R^n. Opaque.
pub struct FenchelBifunction(QuadBifunction);

/// An affine-Gaussian map (A, mu, Sigma). Opaque.
pub struct FenchelGaussMap(GaussMap);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    // a NUL inside the message would truncate it; spaces keep the text intact
    let clean: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn fail(status: FenchelStatus, msg: impl std::fmt::Display) -> FenchelStatus {
    set_last_error(&msg.to_string());
    status
}

fn fail_error(e: &Error) -> FenchelStatus {
    let status = match e {
        Error::DimensionMismatch { .. } => FenchelStatus::DimensionMismatch,
        Error::NotConvex { .. } | Error::NegativeCurvature(_) => FenchelStatus::NotConvex,
        Error::UnboundedBelow | Error::UnboundedAbove => FenchelStatus::Unbounded,
        Error::PolarityMismatch(_) => FenchelStatus::PolarityMismatch,
        Error::InfeasibleObservation => FenchelStatus::InfeasibleObservation,
        Error::NotSymmetric { .. } | Error::NotOrthonormal { .. } | Error::ImproperInput(_) => {
            FenchelStatus::ImproperInput
        }
    };
    fail(status, e)
}

fn guarded(body: impl FnOnce() -> FenchelStatus) -> FenchelStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(FenchelStatus::Panic, "internal panic; the call had no effect"),
    }
}

macro_rules! ffi_try {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, FenchelStatus> {
    p.as_ref().ok_or_else(|| fail(FenchelStatus::NullArgument, "null handle"))
}

unsafe fn utf8<'a>(p: *const c_char) -> Result<&'a str, FenchelStatus> {
    if p.is_null() {
        return Err(fail(FenchelStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FenchelStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn doubles<'a>(p: *const f64, len: usize) -> Result<&'a [f64], FenchelStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(FenchelStatus::NullArgument, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn finite_vector(xs: &[f64]) -> Result<Vector, FenchelStatus> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(fail(FenchelStatus::ImproperInput, "vector entries must be finite"));
    }
    Ok(Vector::new(xs.to_vec()))
}

unsafe fn finite_matrix(
    data: *const f64,
    rows: usize,
    cols: usize,
) -> Result<Matrix, FenchelStatus> {
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| fail(FenchelStatus::ImproperInput, "matrix size overflows"))?;
    let xs = doubles(data, n)?;
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(fail(FenchelStatus::ImproperInput, "matrix entries must be finite"));
    }
    Ok(Matrix::new(rows, cols, xs.to_vec()))
}

unsafe fn give<T>(out: *mut *mut T, value: T) -> FenchelStatus {
    if out.is_null() {
        return fail(FenchelStatus::NullArgument, "null out-parameter");
    }
    *out = Box::into_raw(Box::new(value));
    FenchelStatus::Ok
}

unsafe fn give_value<T>(out: *mut T, value: T) -> FenchelStatus {
    if out.is_null() {
        return fail(FenchelStatus::NullArgument, "null out-parameter");
    }
    *out = value;
    FenchelStatus::Ok
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> FenchelStatus {
    if out.is_null() {
        return fail(FenchelStatus::NullArgument, "null out-parameter");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            FenchelStatus::Ok
        }
        Err(_) => fail(FenchelStatus::ImproperInput, "string contains an interior NUL"),
    }
}

/// Rank tolerances: any non-positive or NaN value selects the library
/// default.
fn rank_tol(tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        DEFAULT_TOL
    }
}

// ---------------------------------------------------------------------------
// library-level calls

/// Version of the library, as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn fenchel_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on the calling thread, as a
/// NUL-terminated string. Valid until the next failing call on the same
/// thread; never freed by the caller. Empty if nothing failed yet.
#[no_mangle]
pub extern "C" fn fenchel_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The rank tolerance used when a `tol` argument is non-positive.
#[no_mangle]
pub extern "C" fn fenchel_default_tolerance() -> f64 {
    DEFAULT_TOL
}

/// The comparison tolerance the library itself uses for equality checks.
#[no_mangle]
pub extern "C" fn fenchel_equality_tolerance() -> f64 {
    EQ_TOL
}

/// Releases a string obtained from a `char **` out-parameter. Null is a
/// no-op.
///
/// # Safety
/// `s` must have come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn fenchel_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// partial convex quadratic functions

/// Reads a function from its JSON serialization.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_from_json(
    json: *const c_char,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let text = ffi_try!(utf8(json));
        match serial::pcqf_from_json(text) {
            Ok(f) => give(out, FenchelPcqf(f)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Writes the JSON serialization of `f`; release with `fenchel_string_free`.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_to_json(
    f: *const FenchelPcqf,
    out: *mut *mut c_char,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_string(out, serial::pcqf_to_json(&f.0))
    })
}

/// Duplicates a handle; the copy is released independently.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_clone(
    f: *const FenchelPcqf,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelPcqf(f.0.clone()))
    })
}

/// Releases a function handle. Null is a no-op.
///
/// # Safety
/// `f` must have come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_free(f: *mut FenchelPcqf) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Ambient dimension of the function's domain space.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_dim(
    f: *const FenchelPcqf,
    out: *mut usize,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.ambient_dim())
    })
}

/// Evaluates `f` at the point `x` of length `len`. Points outside the
/// effective domain give `HUGE_VAL`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_evaluate(
    f: *const FenchelPcqf,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let x = ffi_try!(finite_vector(ffi_try!(doubles(x, len))));
        match f.0.evaluate(&x) {
            Ok(v) => give_value(out, v.to_f64()),
            Err(e) => fail_error(&e),
        }
    })
}

/// Infimum of `f` over its whole domain: finite, `-HUGE_VAL` when the
/// function is unbounded below, `HUGE_VAL` when the domain is empty.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_infimum(
    f: *const FenchelPcqf,
    out: *mut f64,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.infimum().to_f64())
    })
}

/// Convex conjugate of `f`. `tol` is the rank cutoff for the curvature
/// pseudoinverse and the domain split; pass a non-positive value for the
/// default.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_conjugate(
    f: *const FenchelPcqf,
    tol: f64,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        match f.0.conjugate_with_tol(rank_tol(tol)) {
            Ok(g) => give(out, FenchelPcqf(g)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Pointwise sum `f + g` (domains intersect).
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_add(
    f: *const FenchelPcqf,
    g: *const FenchelPcqf,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        match f.0.add(&g.0) {
            Ok(h) => give(out, FenchelPcqf(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Infimal convolution `(f ☐ g)(x) = inf_y f(y) + g(x - y)`.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_inf_convolution(
    f: *const FenchelPcqf,
    g: *const FenchelPcqf,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        match f.0.inf_convolution(&g.0) {
            Ok(h) => give(out, FenchelPcqf(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Infimizes out all coordinates after the first `keep`, producing a
/// function on R^keep. Fails with `FENCHEL_STATUS_UNBOUNDED` when the
/// infimum diverges.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_partial_infimum(
    f: *const FenchelPcqf,
    keep: usize,
    out: *mut *mut FenchelPcqf,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        match f.0.partial_infimum(keep) {
            Ok(h) => give(out, FenchelPcqf(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Whether `f` and `g` agree as functions within `tol`, comparing both the
/// coefficients and the domains.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_pcqf_equal_within(
    f: *const FenchelPcqf,
    g: *const FenchelPcqf,
    tol: f64,
    out: *mut bool,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        give_value(out, f.0.equal_within(&g.0, tol))
    })
}

// ---------------------------------------------------------------------------
// quadratic bifunctions

/// Reads a bifunction from its JSON serialization.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_from_json(
    json: *const c_char,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let text = ffi_try!(utf8(json));
        match serial::bifunction_from_json(text) {
            Ok(f) => give(out, FenchelBifunction(f)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Writes the JSON serialization of `f`; release with `fenchel_string_free`.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_to_json(
    f: *const FenchelBifunction,
    out: *mut *mut c_char,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_string(out, serial::bifunction_to_json(&f.0))
    })
}

/// Duplicates a handle; the copy is released independently.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_clone(
    f: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.clone()))
    })
}

/// Releases a bifunction handle. Null is a no-op.
///
/// # Safety
/// `f` must have come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_free(f: *mut FenchelBifunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Dimension of the source space.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_src_dim(
    f: *const FenchelBifunction,
    out: *mut usize,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.src_dim())
    })
}

/// Dimension of the target space.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_dst_dim(
    f: *const FenchelBifunction,
    out: *mut usize,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.dst_dim())
    })
}

/// Whether the bifunction is convex or concave.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_polarity(
    f: *const FenchelBifunction,
    out: *mut FenchelPolarity,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, FenchelPolarity::from_core(f.0.polarity()))
    })
}

/// The identity bifunction on R^n (convex).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_identity(
    n: usize,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| give(out, FenchelBifunction(QuadBifunction::identity(n))))
}

/// The convex indicator bifunction of the linear map `a` (`rows` x `cols`,
/// row-major): zero on the graph of the map, +inf elsewhere.
///
/// # Safety
/// `a` must point to `rows * cols` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_from_linear_map(
    a: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let a = ffi_try!(finite_matrix(a, rows, cols));
        give(out, FenchelBifunction(QuadBifunction::from_linear_map(&a)))
    })
}

/// Wraps a function as a state: a bifunction from R^0 into the function's
/// space, with the requested polarity.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_from_pcqf_state(
    f: *const FenchelPcqf,
    polarity: FenchelPolarity,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(QuadBifunction::from_pcqf_state(f.0.clone(), polarity.to_core())))
    })
}

/// Wraps a function as an effect: a bifunction from the function's space
/// into R^0, with the requested polarity.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_from_pcqf_effect(
    f: *const FenchelPcqf,
    polarity: FenchelPolarity,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(QuadBifunction::from_pcqf_effect(f.0.clone(), polarity.to_core())))
    })
}

/// Sequential composite `f ∘ g`: the pipeline that applies `g` first.
/// Convex pairs compose with an infimum over the middle variable, concave
/// pairs with a supremum; mixing polarities fails.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_compose(
    f: *const FenchelBifunction,
    g: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        match f.0.compose(&g.0) {
            Ok(h) => give(out, FenchelBifunction(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Parallel composite `f ⊗ g` on the concatenated spaces.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_tensor(
    f: *const FenchelBifunction,
    g: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        match f.0.tensor(&g.0) {
            Ok(h) => give(out, FenchelBifunction(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Reverses the direction of `f` without changing its values.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_dagger(
    f: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.dagger()))
    })
}

/// Reverses the direction and negates the values, flipping the polarity.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_inverse(
    f: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.inverse()))
    })
}

/// Conjugates both arguments: the contravariant dual with the opposite
/// polarity.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_adjoint(
    f: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        match f.0.adjoint() {
            Ok(h) => give(out, FenchelBifunction(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Negates the values pointwise, flipping the polarity but not the
/// direction.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_negated(
    f: *const FenchelBifunction,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.negated()))
    })
}

/// Evaluates `f` at an input/output pair. Values outside the effective
/// domain give `HUGE_VAL` (convex) or `-HUGE_VAL` (concave).
///
/// # Safety
/// `input` and `output` must point to `in_len` and `out_len` doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_evaluate(
    f: *const FenchelBifunction,
    input: *const f64,
    in_len: usize,
    output: *const f64,
    out_len: usize,
    out: *mut f64,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let x = ffi_try!(finite_vector(ffi_try!(doubles(input, in_len))));
        let y = ffi_try!(finite_vector(ffi_try!(doubles(output, out_len))));
        match f.0.evaluate(&x, &y) {
            Ok(v) => give_value(out, v.to_f64()),
            Err(e) => fail_error(&e),
        }
    })
}

/// Value of a closed diagram: a bifunction from R^0 to R^0 is a single
/// extended real.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_scalar_value(
    f: *const FenchelBifunction,
    out: *mut f64,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        match f.0.scalar_value() {
            Ok(v) => give_value(out, v.to_f64()),
            Err(e) => fail_error(&e),
        }
    })
}

/// Whether `f` and `g` agree within `tol`: same direction, same polarity,
/// and equal graphs.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_equal_within(
    f: *const FenchelBifunction,
    g: *const FenchelBifunction,
    tol: f64,
    out: *mut bool,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        give_value(out, f.0.equal_within(&g.0, tol))
    })
}

/// Whether discarding the output of `f` leaves the pointwise unit. Pass a
/// non-positive `tol` for the library's comparison tolerance.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_is_discardable(
    f: *const FenchelBifunction,
    tol: f64,
    out: *mut bool,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let t = if tol > 0.0 { tol } else { EQ_TOL };
        give_value(out, f.0.is_discardable(t))
    })
}

/// Whether discarding the output of `f` leaves the additive unit. Pass a
/// non-positive `tol` for the library's comparison tolerance.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_bifunction_is_co_discardable(
    f: *const FenchelBifunction,
    tol: f64,
    out: *mut bool,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let t = if tol > 0.0 { tol } else { EQ_TOL };
        give_value(out, f.0.is_co_discardable(t))
    })
}

// ---------------------------------------------------------------------------
// Gaussian maps

/// Reads a Gaussian map from its JSON serialization.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_from_json(
    json: *const c_char,
    out: *mut *mut FenchelGaussMap,
) -> FenchelStatus {
    guarded(|| {
        let text = ffi_try!(utf8(json));
        match serial::gauss_from_json(text) {
            Ok(f) => give(out, FenchelGaussMap(f)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Writes the JSON serialization of `f`; release with `fenchel_string_free`.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_to_json(
    f: *const FenchelGaussMap,
    out: *mut *mut c_char,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_string(out, serial::gauss_to_json(&f.0))
    })
}

/// Duplicates a handle; the copy is released independently.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_clone(
    f: *const FenchelGaussMap,
    out: *mut *mut FenchelGaussMap,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelGaussMap(f.0.clone()))
    })
}

/// Releases a Gaussian map handle. Null is a no-op.
///
/// # Safety
/// `f` must have come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_free(f: *mut FenchelGaussMap) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Builds the map `x ↦ N(a x + mu, sigma)` from raw parts: `a` is
/// `dst` x `src` row-major, `mu` has length `dst`, and `sigma` is
/// `dst` x `dst` row-major, symmetric positive semidefinite.
///
/// # Safety
/// The arrays must have the stated lengths; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_from_parts(
    dst: usize,
    src: usize,
    a: *const f64,
    mu: *const f64,
    sigma: *const f64,
    out: *mut *mut FenchelGaussMap,
) -> FenchelStatus {
    guarded(|| {
        let a = ffi_try!(finite_matrix(a, dst, src));
        let mu = ffi_try!(finite_vector(ffi_try!(doubles(mu, dst))));
        let sigma = ffi_try!(finite_matrix(sigma, dst, dst));
        match GaussMap::new(a, mu, sigma) {
            Ok(g) => give(out, FenchelGaussMap(g)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Dimension of the source space.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_src_dim(
    f: *const FenchelGaussMap,
    out: *mut usize,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.src_dim())
    })
}

/// Dimension of the target space.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_dst_dim(
    f: *const FenchelGaussMap,
    out: *mut usize,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give_value(out, f.0.dst_dim())
    })
}

/// Sequential composite `f ∘ g`: the pipeline that applies `g` first.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_compose(
    f: *const FenchelGaussMap,
    g: *const FenchelGaussMap,
    out: *mut *mut FenchelGaussMap,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        match f.0.compose(&g.0) {
            Ok(h) => give(out, FenchelGaussMap(h)),
            Err(e) => fail_error(&e),
        }
    })
}

/// Parallel composite `f ⊗ g` on the concatenated spaces.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_tensor(
    f: *const FenchelGaussMap,
    g: *const FenchelGaussMap,
    out: *mut *mut FenchelGaussMap,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        let g = ffi_try!(borrow(g));
        give(out, FenchelGaussMap(f.0.tensor(&g.0)))
    })
}

/// Cumulant-generating-function image of `f`: a convex bifunction between
/// the same spaces.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_cgf(
    f: *const FenchelGaussMap,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.cgf()))
    })
}

/// Log-density image of `f`: a concave bifunction in the opposite
/// direction.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_gauss_logpdf(
    f: *const FenchelGaussMap,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let f = ffi_try!(borrow(f));
        give(out, FenchelBifunction(f.0.logpdf()))
    })
}

/// Conditions a joint log-density state on an observed suffix. `joint`
/// must be a concave state (source dimension zero) on R^n; `value` has
/// length m < n and fixes the last m coordinates. The result is the
/// conditional log-density state on the first n - m coordinates, exact up
/// to the normalizing constant.
///
/// # Safety
/// `joint` must be a live handle; `value` must point to `len` doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fenchel_condition_logpdf(
    joint: *const FenchelBifunction,
    value: *const f64,
    len: usize,
    out: *mut *mut FenchelBifunction,
) -> FenchelStatus {
    guarded(|| {
        let joint = ffi_try!(borrow(joint));
        let value = ffi_try!(finite_vector(ffi_try!(doubles(value, len))));
        match condition_logpdf(&joint.0, &value) {
            Ok(h) => give(out, FenchelBifunction(h)),
            Err(e) => fail_error(&e),
        }
    })
}
