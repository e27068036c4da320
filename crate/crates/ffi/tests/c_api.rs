//! Exercises the C surface the way a foreign caller would: handles created
//! from JSON or raw arrays, results read back through out-parameters, and
//! every failure checked against the status codes and the thread-local
//! message.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fenchel::bifunction::{Polarity, QuadBifunction};
use fenchel::gauss::{condition_logpdf, GaussMap};
use fenchel::numeric::{Matrix, Vector};
use fenchel::pcqf::Pcqf;
use fenchel::serial;
use fenchel::EQ_TOL;
use fenchel_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fenchel_last_error()).to_string_lossy().into_owned() }
}

fn pcqf_handle(f: &Pcqf) -> *mut FenchelPcqf {
    let json = CString::new(serial::pcqf_to_json(f)).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { fenchel_pcqf_from_json(json.as_ptr(), &mut out) };
    assert_eq!(status, FenchelStatus::Ok, "{}", last_error());
    out
}

fn bifunction_handle(f: &QuadBifunction) -> *mut FenchelBifunction {
    let json = CString::new(serial::bifunction_to_json(f)).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { fenchel_bifunction_from_json(json.as_ptr(), &mut out) };
    assert_eq!(status, FenchelStatus::Ok, "{}", last_error());
    out
}

fn pcqf_value(f: *const FenchelPcqf, x: &[f64]) -> f64 {
    let mut v = f64::NAN;
    let status = unsafe { fenchel_pcqf_evaluate(f, x.as_ptr(), x.len(), &mut v) };
    assert_eq!(status, FenchelStatus::Ok, "{}", last_error());
    v
}

fn bifunctions_equal(a: *const FenchelBifunction, b: *const FenchelBifunction) -> bool {
    let mut eq = false;
    let status = unsafe { fenchel_bifunction_equal_within(a, b, EQ_TOL, &mut eq) };
    assert_eq!(status, FenchelStatus::Ok, "{}", last_error());
    eq
}

/// f(x) = a x^2 on all of R.
fn parabola(a: f64) -> Pcqf {
    Pcqf::from_ambient(
        &Matrix::new(1, 1, vec![2.0 * a]),
        &Vector::zeros(1),
        0.0,
        &Matrix::zeros(0, 1),
        &Vector::zeros(0),
    )
    .unwrap()
}

#[test]
fn version_and_tolerances_are_exposed() {
    let version = unsafe { CStr::from_ptr(fenchel_version()) }.to_str().unwrap();
    assert!(version.contains('.'), "odd version string {version}");
    assert!(fenchel_default_tolerance() > 0.0);
    assert!(fenchel_equality_tolerance() >= fenchel_default_tolerance());
}

#[test]
fn pcqf_round_trips_through_json() {
    let f = parabola(1.5);
    let h = pcqf_handle(&f);

    let mut dim = 0usize;
    assert_eq!(unsafe { fenchel_pcqf_dim(h, &mut dim) }, FenchelStatus::Ok);
    assert_eq!(dim, 1);

    let mut json_out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { fenchel_pcqf_to_json(h, &mut json_out) }, FenchelStatus::Ok);
    let text = unsafe { CStr::from_ptr(json_out) }.to_str().unwrap().to_owned();
    unsafe { fenchel_string_free(json_out) };

    let back = serial::pcqf_from_json(&text).unwrap();
    assert!(back.equal_within(&f, 1e-12));

    assert!((pcqf_value(h, &[2.0]) - 6.0).abs() < 1e-12);
    unsafe { fenchel_pcqf_free(h) };
}

#[test]
fn conjugate_matches_the_closed_form() {
    // f(x) = 2 x^2 has conjugate s^2 / 8
    let h = pcqf_handle(&parabola(2.0));
    let mut conj = ptr::null_mut();
    assert_eq!(unsafe { fenchel_pcqf_conjugate(h, 0.0, &mut conj) }, FenchelStatus::Ok);
    assert!((pcqf_value(conj, &[2.0]) - 0.5).abs() < 1e-10);

    // and the library's own conjugate agrees handle-to-handle
    let expected = pcqf_handle(&parabola(2.0).conjugate().unwrap());
    let mut eq = false;
    assert_eq!(
        unsafe { fenchel_pcqf_equal_within(conj, expected, 1e-10, &mut eq) },
        FenchelStatus::Ok
    );
    assert!(eq);

    unsafe {
        fenchel_pcqf_free(h);
        fenchel_pcqf_free(conj);
        fenchel_pcqf_free(expected);
    }
}

#[test]
fn sums_and_convolutions_evaluate_correctly() {
    let f = pcqf_handle(&parabola(0.5));
    let g = pcqf_handle(&parabola(0.5));

    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { fenchel_pcqf_add(f, g, &mut sum) }, FenchelStatus::Ok);
    assert!((pcqf_value(sum, &[2.0]) - 4.0).abs() < 1e-12);

    // inf-convolution of x^2/2 with itself is x^2/4
    let mut conv = ptr::null_mut();
    assert_eq!(unsafe { fenchel_pcqf_inf_convolution(f, g, &mut conv) }, FenchelStatus::Ok);
    assert!((pcqf_value(conv, &[2.0]) - 1.0).abs() < 1e-10);

    let mut inf = f64::NAN;
    assert_eq!(unsafe { fenchel_pcqf_infimum(conv, &mut inf) }, FenchelStatus::Ok);
    assert!(inf.abs() < 1e-12);

    unsafe {
        fenchel_pcqf_free(f);
        fenchel_pcqf_free(g);
        fenchel_pcqf_free(sum);
        fenchel_pcqf_free(conv);
    }
}

#[test]
fn clone_outlives_the_original() {
    let h = pcqf_handle(&parabola(1.0));
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { fenchel_pcqf_clone(h, &mut copy) }, FenchelStatus::Ok);
    unsafe { fenchel_pcqf_free(h) };
    assert!((pcqf_value(copy, &[3.0]) - 9.0).abs() < 1e-12);
    unsafe { fenchel_pcqf_free(copy) };
}

#[test]
fn failures_report_status_and_message() {
    let mut out = ptr::null_mut();

    // null and non-UTF-8 strings
    assert_eq!(
        unsafe { fenchel_pcqf_from_json(ptr::null(), &mut out) },
        FenchelStatus::NullArgument
    );
    let bad_utf8 = [0xC3u8, 0x28, 0x00];
    assert_eq!(
        unsafe { fenchel_pcqf_from_json(bad_utf8.as_ptr() as *const c_char, &mut out) },
        FenchelStatus::InvalidUtf8
    );

    // unreadable JSON carries the parser's message
    let garbage = CString::new("{not json").unwrap();
    assert_eq!(
        unsafe { fenchel_pcqf_from_json(garbage.as_ptr(), &mut out) },
        FenchelStatus::ImproperInput
    );
    assert!(last_error().contains("JSON"), "message was: {}", last_error());

    // wrong evaluation arity
    let h = pcqf_handle(&parabola(1.0));
    let mut v = f64::NAN;
    let xs = [1.0, 2.0];
    assert_eq!(
        unsafe { fenchel_pcqf_evaluate(h, xs.as_ptr(), 2, &mut v) },
        FenchelStatus::DimensionMismatch
    );

    // null out-parameter
    assert_eq!(
        unsafe { fenchel_pcqf_dim(h, ptr::null_mut()) },
        FenchelStatus::NullArgument
    );

    // non-finite input entries
    let nan = [f64::NAN];
    assert_eq!(
        unsafe { fenchel_pcqf_evaluate(h, nan.as_ptr(), 1, &mut v) },
        FenchelStatus::ImproperInput
    );

    unsafe { fenchel_pcqf_free(h) };
}

#[test]
fn diverging_infimum_is_reported_as_unbounded() {
    // f(x) = x on all of R has no lower bound
    let linear = Pcqf::from_ambient(
        &Matrix::zeros(1, 1),
        &Vector::new(vec![1.0]),
        0.0,
        &Matrix::zeros(0, 1),
        &Vector::zeros(0),
    )
    .unwrap();
    let h = pcqf_handle(&linear);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fenchel_pcqf_partial_infimum(h, 0, &mut out) },
        FenchelStatus::Unbounded
    );
    assert!(last_error().contains("diverges"), "message was: {}", last_error());
    unsafe { fenchel_pcqf_free(h) };
}

#[test]
fn linear_maps_compose_as_a_pipeline() {
    let a = [2.0, 1.0, 0.0, 1.0]; // [[2,1],[0,1]]
    let b = [1.0, 0.0, 1.0, 1.0]; // [[1,0],[1,1]]
    let mut fa = ptr::null_mut();
    let mut fb = ptr::null_mut();
    assert_eq!(
        unsafe { fenchel_bifunction_from_linear_map(a.as_ptr(), 2, 2, &mut fa) },
        FenchelStatus::Ok
    );
    assert_eq!(
        unsafe { fenchel_bifunction_from_linear_map(b.as_ptr(), 2, 2, &mut fb) },
        FenchelStatus::Ok
    );

    let mut ab = ptr::null_mut();
    assert_eq!(unsafe { fenchel_bifunction_compose(fa, fb, &mut ab) }, FenchelStatus::Ok);

    // A B = [[3,1],[1,1]]
    let product = [3.0, 1.0, 1.0, 1.0];
    let mut expected = ptr::null_mut();
    assert_eq!(
        unsafe { fenchel_bifunction_from_linear_map(product.as_ptr(), 2, 2, &mut expected) },
        FenchelStatus::Ok
    );
    assert!(bifunctions_equal(ab, expected));

    let mut n = 0usize;
    assert_eq!(unsafe { fenchel_bifunction_src_dim(ab, &mut n) }, FenchelStatus::Ok);
    assert_eq!(n, 2);

    unsafe {
        fenchel_bifunction_free(fa);
        fenchel_bifunction_free(fb);
        fenchel_bifunction_free(ab);
        fenchel_bifunction_free(expected);
    }
}

#[test]
fn dagger_is_an_involution_and_polarity_is_visible() {
    let state = QuadBifunction::from_pcqf_state(parabola(0.7), Polarity::Convex);
    let h = bifunction_handle(&state);

    let mut pol = FenchelPolarity::Concave;
    assert_eq!(unsafe { fenchel_bifunction_polarity(h, &mut pol) }, FenchelStatus::Ok);
    assert_eq!(pol, FenchelPolarity::Convex);

    let mut once = ptr::null_mut();
    let mut twice = ptr::null_mut();
    assert_eq!(unsafe { fenchel_bifunction_dagger(h, &mut once) }, FenchelStatus::Ok);
    assert_eq!(unsafe { fenchel_bifunction_dagger(once, &mut twice) }, FenchelStatus::Ok);
    assert!(bifunctions_equal(h, twice));

    unsafe {
        fenchel_bifunction_free(h);
        fenchel_bifunction_free(once);
        fenchel_bifunction_free(twice);
    }
}

#[test]
fn mixed_polarity_composition_is_rejected() {
    let convex = bifunction_handle(&QuadBifunction::identity(1));
    let concave =
        bifunction_handle(&QuadBifunction::from_pcqf_state(parabola(1.0), Polarity::Concave));
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fenchel_bifunction_compose(convex, concave, &mut out) },
        FenchelStatus::PolarityMismatch
    );
    unsafe {
        fenchel_bifunction_free(convex);
        fenchel_bifunction_free(concave);
    }
}

#[test]
fn closed_diagrams_evaluate_to_scalars() {
    // inf_x x^2/2 + (value of the same parabola shifted through an effect)
    let state = QuadBifunction::from_pcqf_state(parabola(0.5), Polarity::Convex);
    let effect = QuadBifunction::from_pcqf_effect(parabola(0.5), Polarity::Convex);
    let hs = bifunction_handle(&state);
    let he = bifunction_handle(&effect);
    let mut closed = ptr::null_mut();
    assert_eq!(unsafe { fenchel_bifunction_compose(he, hs, &mut closed) }, FenchelStatus::Ok);
    let mut v = f64::NAN;
    assert_eq!(unsafe { fenchel_bifunction_scalar_value(closed, &mut v) }, FenchelStatus::Ok);
    assert!(v.abs() < 1e-12, "inf of x^2 should be 0, got {v}");

    // evaluate the open state at a point as well
    let mut w = f64::NAN;
    let y = [2.0];
    assert_eq!(
        unsafe { fenchel_bifunction_evaluate(hs, ptr::null(), 0, y.as_ptr(), 1, &mut w) },
        FenchelStatus::Ok
    );
    assert!((w - 2.0).abs() < 1e-12);

    unsafe {
        fenchel_bifunction_free(hs);
        fenchel_bifunction_free(he);
        fenchel_bifunction_free(closed);
    }
}

fn gauss_handle(dst: usize, src: usize, a: &[f64], mu: &[f64], sigma: &[f64]) -> *mut FenchelGaussMap {
    let mut out = ptr::null_mut();
    let status = unsafe {
        fenchel_gauss_from_parts(dst, src, a.as_ptr(), mu.as_ptr(), sigma.as_ptr(), &mut out)
    };
    assert_eq!(status, FenchelStatus::Ok, "{}", last_error());
    out
}

#[test]
fn gauss_maps_compose_and_round_trip() {
    // x -> N(2x + 1, 1), composed with itself: N(4x + 3, 5)
    let g = gauss_handle(1, 1, &[2.0], &[1.0], &[1.0]);
    let mut gg = ptr::null_mut();
    assert_eq!(unsafe { fenchel_gauss_compose(g, g, &mut gg) }, FenchelStatus::Ok);

    let mut json_out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { fenchel_gauss_to_json(gg, &mut json_out) }, FenchelStatus::Ok);
    let text = unsafe { CStr::from_ptr(json_out) }.to_str().unwrap().to_owned();
    unsafe { fenchel_string_free(json_out) };

    let composite = serial::gauss_from_json(&text).unwrap();
    assert!((composite.a().get(0, 0) - 4.0).abs() < 1e-12);
    assert!((composite.mu().get(0) - 3.0).abs() < 1e-12);
    assert!((composite.sigma().get(0, 0) - 5.0).abs() < 1e-12);

    let mut n = 0usize;
    assert_eq!(unsafe { fenchel_gauss_dst_dim(gg, &mut n) }, FenchelStatus::Ok);
    assert_eq!(n, 1);

    unsafe {
        fenchel_gauss_free(g);
        fenchel_gauss_free(gg);
    }
}

#[test]
fn covariance_must_be_positive_semidefinite() {
    let mut out = ptr::null_mut();
    let status = unsafe {
        fenchel_gauss_from_parts(
            1,
            1,
            [1.0].as_ptr(),
            [0.0].as_ptr(),
            [-1.0].as_ptr(),
            &mut out,
        )
    };
    assert_eq!(status, FenchelStatus::ImproperInput);
    assert!(last_error().contains("negative eigenvalue"), "message was: {}", last_error());
}

#[test]
fn cgf_and_logpdf_are_adjoint_across_the_boundary() {
    let a = [1.0, 0.3, 0.0, 1.0];
    let mu = [0.5, -1.0];
    let sigma = [1.0, 0.2, 0.2, 0.8];
    let g = gauss_handle(2, 2, &a, &mu, &sigma);

    let mut cgf = ptr::null_mut();
    let mut logpdf = ptr::null_mut();
    assert_eq!(unsafe { fenchel_gauss_cgf(g, &mut cgf) }, FenchelStatus::Ok);
    assert_eq!(unsafe { fenchel_gauss_logpdf(g, &mut logpdf) }, FenchelStatus::Ok);

    let mut adj = ptr::null_mut();
    assert_eq!(unsafe { fenchel_bifunction_adjoint(cgf, &mut adj) }, FenchelStatus::Ok);
    assert!(bifunctions_equal(adj, logpdf));

    // cgf images vanish at the origin, so discarding them leaves the unit
    let mut ok = false;
    assert_eq!(
        unsafe { fenchel_bifunction_is_co_discardable(cgf, 0.0, &mut ok) },
        FenchelStatus::Ok
    );
    assert!(ok);

    unsafe {
        fenchel_gauss_free(g);
        fenchel_bifunction_free(cgf);
        fenchel_bifunction_free(logpdf);
        fenchel_bifunction_free(adj);
    }
}

#[test]
fn conditioning_matches_the_library() {
    let joint = GaussMap::state(
        Vector::new(vec![1.0, -1.0]),
        Matrix::new(2, 2, vec![2.0, 0.8, 0.8, 1.0]),
    )
    .unwrap();
    // a state's log-density runs toward the unit; conditioning wants it as a state
    let logpdf_state = joint.logpdf().dagger();
    let h = bifunction_handle(&logpdf_state);

    let y = [0.0];
    let mut conditional = ptr::null_mut();
    assert_eq!(
        unsafe { fenchel_condition_logpdf(h, y.as_ptr(), 1, &mut conditional) },
        FenchelStatus::Ok
    );

    let expected = bifunction_handle(&condition_logpdf(&logpdf_state, &Vector::new(vec![0.0])).unwrap());
    assert!(bifunctions_equal(conditional, expected));

    unsafe {
        fenchel_bifunction_free(h);
        fenchel_bifunction_free(conditional);
        fenchel_bifunction_free(expected);
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fenchel.h");
    let text = std::fs::read_to_string(&header).expect("header exists after build");
    for needle in [
        "typedef struct FenchelPcqf FenchelPcqf;",
        "typedef struct FenchelBifunction FenchelBifunction;",
        "typedef struct FenchelGaussMap FenchelGaussMap;",
        "FENCHEL_STATUS_OK",
        "fenchel_pcqf_conjugate",
        "fenchel_bifunction_adjoint",
        "fenchel_condition_logpdf",
        "fenchel_string_free",
    ] {
        assert!(text.contains(needle), "header is missing {needle}");
    }
}
