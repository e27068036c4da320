//! Acceptance gate: the properties this library promises, one test per
//! property, with pinned tolerances and (where they matter) pinned runtimes.
//! Each test prints a single PASS line with its observed margin; a failure
//! panics with the offending instance.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fenchel::bifunction::QuadBifunction;
use fenchel::checks::{self, fenchel_duality_gap, random_gauss, random_pcqf};
use fenchel::cli::{fig1_data, Fig1Params};
use fenchel::extreal::ExtReal;
use fenchel::gauss::{condition_logpdf, GaussMap};
use fenchel::numeric::{pseudoinverse, Matrix, Vector};
use fenchel::oracle::{GridSpec, SampledFunction};
use fenchel::pcqf::Pcqf;
use fenchel::DEFAULT_TOL;

const ROUND_TRIP_TOL: f64 = 1e-7;
const EXACT_TOL: f64 = 1e-10;
const FUNCTOR_TOL: f64 = 1e-7;
const DUALITY_TOL: f64 = 1e-7;
const LAW_TOL: f64 = 1e-9;
const CURVE_TOL: f64 = 1e-3;
const CONDITION_TOL: f64 = 1e-6;

fn unconstrained(q: &Matrix, b: &Vector, c: f64) -> Pcqf {
    let n = q.rows();
    Pcqf::from_ambient(q, b, c, &Matrix::zeros(0, n), &Vector::zeros(0)).unwrap()
}

#[test]
fn a01_double_conjugation_recovers_the_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    for i in 0..200 {
        let dim = rng.random_range(1..=4);
        let f = random_pcqf(&mut rng, dim);
        let once = f.conjugate().unwrap_or_else(|e| panic!("instance {i}: conjugate failed: {e}"));
        let twice =
            once.conjugate().unwrap_or_else(|e| panic!("instance {i}: biconjugate failed: {e}"));
        assert!(
            twice.equal_within(&f, ROUND_TRIP_TOL),
            "instance {i}: double conjugation drifted beyond {ROUND_TRIP_TOL:.0e}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "double conjugation took {elapsed:?}, budget 5s");
    println!("PASS double conjugation: 200 instances within {ROUND_TRIP_TOL:.0e} in {elapsed:?}");
}

#[test]
fn a02_closed_form_and_grid_conjugates_of_reference_functions() {
    // a x^2 conjugates to s^2 / (4a)
    for a in [0.5, 1.0, 2.0] {
        let f = unconstrained(&Matrix::diagonal(&[2.0 * a]), &Vector::zeros(1), 0.0);
        let star = f.conjugate().unwrap();
        let expected =
            unconstrained(&Matrix::diagonal(&[1.0 / (2.0 * a)]), &Vector::zeros(1), 0.0);
        assert!(
            star.equal_within(&expected, EXACT_TOL),
            "conjugate of {a}x^2 missed s^2/(4 * {a}) at {EXACT_TOL:.0e}"
        );
    }

    // |x| conjugates to the indicator of [-1, 1]: flat inside, steep outside.
    // The primal grid is wide so the divergence outside is visible.
    let primal = GridSpec::line(-25.0, 25.0, 2001).unwrap();
    let dual = GridSpec::line(-5.0, 5.0, 2001).unwrap();
    let sampled =
        SampledFunction::from_fn(primal, |x: &Vector| ExtReal::Finite(x.get(0).abs()));
    let transform = sampled.numeric_legendre(&dual).unwrap();
    let star = &transform.result;
    let mut interior_worst = 0.0f64;
    for i in 0..star.grid().len() {
        let c = star.grid().point(i).get(0);
        let v = match star.value(i) {
            ExtReal::Finite(v) => v,
            other => panic!("conjugate of |x| should be finite on the dual grid, got {other}"),
        };
        if c.abs() <= 0.99 {
            interior_worst = interior_worst.max(v.abs());
        }
        if (c.abs() - 1.5).abs() < 1e-12 {
            assert!(v > 10.0, "conjugate of |x| at {c} should exceed 10, got {v}");
        }
    }
    assert!(
        interior_worst < 1e-6,
        "conjugate of |x| should vanish on |c| <= 0.99, worst {interior_worst:.3e}"
    );
    println!(
        "PASS reference conjugates: parabolas within {EXACT_TOL:.0e}, |x| flat to {interior_worst:.1e} inside and diverging outside"
    );
}

#[test]
fn a03_gauss_composition_is_functorial_on_both_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let start = Instant::now();
    for i in 0..200 {
        let k = rng.random_range(1..=3);
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=3);
        let g = random_gauss(&mut rng, k, m);
        let f = random_gauss(&mut rng, m, n);
        let fg = f.compose(&g).unwrap();
        let cov = f.cgf().compose(&g.cgf()).unwrap_or_else(|e| panic!("pair {i}: {e}"));
        assert!(
            cov.equal_within(&fg.cgf(), FUNCTOR_TOL),
            "pair {i}: cgf of the composite drifted beyond {FUNCTOR_TOL:.0e}"
        );
        let contra = g.logpdf().compose(&f.logpdf()).unwrap_or_else(|e| panic!("pair {i}: {e}"));
        assert!(
            contra.equal_within(&fg.logpdf(), FUNCTOR_TOL),
            "pair {i}: logpdf of the composite drifted beyond {FUNCTOR_TOL:.0e}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "functoriality took {elapsed:?}, budget 10s");
    println!("PASS composition functors: 200 pairs within {FUNCTOR_TOL:.0e} in {elapsed:?}");
}

/// Comparison at `tol` relative to the larger coefficient magnitude, floored
/// at 1 so order-one data still gets the absolute bound. A log density of a
/// nearly singular Gaussian has precision-sized coefficients (the covariance
/// pseudoinverse), and no double-precision pipeline reproduces those to an
/// absolute 1e-7; relative to their own scale they agree to ~1e-11.
fn close_up_to_scale(a: &QuadBifunction, b: &QuadBifunction, tol: f64) -> bool {
    let magnitude = |f: &QuadBifunction| {
        let (s, l, c, _) = f.graph().ambient_form();
        s.max_abs().max(l.max_abs()).max(c.abs())
    };
    let scale = magnitude(a).max(magnitude(b)).max(1.0);
    a.equal_within(b, tol * scale)
}

#[test]
fn a04_cgf_and_logpdf_are_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for i in 0..200 {
        let k = rng.random_range(1..=3);
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=3);
        let g = random_gauss(&mut rng, k, m);
        let f = random_gauss(&mut rng, m, n);
        for (name, map) in [("first", &g), ("second", &f)] {
            let adj = map.cgf().adjoint().unwrap_or_else(|e| panic!("pair {i} {name}: {e}"));
            assert!(
                close_up_to_scale(&adj, &map.logpdf(), FUNCTOR_TOL),
                "pair {i}: adjoint of the {name} cgf is not its logpdf at {FUNCTOR_TOL:.0e}"
            );
        }
    }
    println!("PASS adjointness: adjoint(cgf) = logpdf on 400 maps within {FUNCTOR_TOL:.0e} of scale");
}

#[test]
fn a05_linear_map_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut rand_map = |rows: usize, cols: usize| {
        let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        Matrix::new(rows, cols, data)
    };
    for i in 0..100 {
        let (m, k, n) = (i % 3 + 1, i % 2 + 1, (i + 1) % 3 + 1);
        let a = rand_map(n, k);
        let b = rand_map(k, m);
        let ab = &a * &b;

        // composition of indicator bifunctions is matrix product
        let composed =
            QuadBifunction::from_linear_map(&a).compose(&QuadBifunction::from_linear_map(&b));
        assert!(
            composed.unwrap().equal_within(&QuadBifunction::from_linear_map(&ab), DUALITY_TOL),
            "instance {i}: composite indicator is not the product indicator"
        );

        // the adjoint is the concave indicator of the transpose
        let fa = QuadBifunction::from_linear_map(&a);
        let adj = fa.adjoint().unwrap();
        let transpose_indicator =
            QuadBifunction::from_linear_map(&a.transpose()).negated();
        assert!(
            adj.equal_within(&transpose_indicator, DUALITY_TOL),
            "instance {i}: adjoint is not the transpose indicator"
        );
    }

    // invertible maps: the relational inverse matches the matrix inverse,
    // and taking inverse commutes with taking adjoint
    for i in 0..100 {
        let n = i % 3 + 1;
        let mut a = rand_map(n, n).scale(0.45);
        for d in 0..n {
            a.set(d, d, a.get(d, d) + 2.0); // diagonally dominant, so invertible
        }
        let a_inv = pseudoinverse(&a, DEFAULT_TOL);
        let fa = QuadBifunction::from_linear_map(&a);

        let inv = fa.inverse();
        let inv_indicator = QuadBifunction::from_linear_map(&a_inv).negated();
        assert!(
            inv.equal_within(&inv_indicator, DUALITY_TOL),
            "instance {i}: relational inverse is not the inverse-matrix indicator"
        );

        let adj_then_inv = fa.adjoint().unwrap().inverse();
        let inv_then_adj = fa.inverse().adjoint().unwrap();
        assert!(
            adj_then_inv.equal_within(&inv_then_adj, DUALITY_TOL),
            "instance {i}: inverse and adjoint do not commute"
        );
        // and the composite is the inverse-transpose indicator
        let color_swap = QuadBifunction::from_linear_map(&a_inv.transpose());
        assert!(
            adj_then_inv.equal_within(&color_swap, DUALITY_TOL),
            "instance {i}: inverse adjoint is not the inverse-transpose indicator"
        );
    }
    println!("PASS linear duality: product, transpose, inverse, and commutation within {DUALITY_TOL:.0e}");
}

#[test]
fn a06_fenchel_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let gap = fenchel_duality_gap(&mut rng);
        assert!(
            gap < DUALITY_TOL,
            "instance {i}: primal-dual gap {gap:.3e} exceeds {DUALITY_TOL:.0e}"
        );
        worst = worst.max(gap);
    }
    println!("PASS strong duality: 100 primal-dual gaps, worst {worst:.3e}");
}

#[test]
fn a07_hypergraph_laws() {
    let report = checks::run_suite("frobenius").unwrap();
    assert!(report.ok(), "{report}");
    println!("PASS hypergraph laws: {} generator equalities at {LAW_TOL:.0e}", report.passed);
}

#[test]
fn a08_cgf_images_are_normalized_and_duality_bijects() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for i in 0..100 {
        let src = rng.random_range(1..=3);
        let dst = rng.random_range(1..=3);
        let map = random_gauss(&mut rng, src, dst);
        let c = map.cgf();
        assert!(
            c.is_co_discardable(FUNCTOR_TOL),
            "instance {i}: a cgf image lost its normalization"
        );
        // the two readings of "may be discarded" are exchanged by the
        // adjoint, in both structures, whether or not they hold
        let adj = c.adjoint().unwrap();
        assert!(
            adj.is_co_discardable(FUNCTOR_TOL),
            "instance {i}: normalization did not survive the adjoint"
        );
        assert_eq!(
            c.is_discardable(FUNCTOR_TOL),
            adj.is_discardable(FUNCTOR_TOL),
            "instance {i}: discardability and its dual clause disagree"
        );
    }
    println!("PASS normalization: 100 cgf images co-discardable; adjoint exchanges the clauses");
}

#[test]
fn a09_closed_forms_agree_with_grid_oracles() {
    let report = checks::run_suite("oracle").unwrap();
    assert!(report.ok(), "{report}");
    assert_eq!(report.passed, 30, "expected 30 oracle instances, ran {}", report.passed);
    println!("PASS grid oracles: 30 instances within max(step^2, 1e-3)");
}

#[test]
fn a10_normal_sum_curves() {
    let data = fig1_data(&Fig1Params {
        mu1: 0.0,
        var1: 1.0,
        mu2: 0.0,
        var2: 1.0,
        grid: GridSpec::line(-10.0, 10.0, 2001).unwrap(),
    })
    .unwrap();
    assert!(
        data.pdf_residual < CURVE_TOL,
        "density convolution residual {:.3e} exceeds {CURVE_TOL:.0e}",
        data.pdf_residual
    );
    assert!(
        data.logpdf_residual < CURVE_TOL,
        "sup-convolution residual {:.3e} exceeds {CURVE_TOL:.0e}",
        data.logpdf_residual
    );
    // maximization only matches integration on the normal family: the same
    // density-side pipeline on Laplace inputs visibly misses
    assert!(
        data.laplace_convolution_residual > 0.05,
        "Laplace convolution residual {:.3e} is unexpectedly small",
        data.laplace_convolution_residual
    );
    println!(
        "PASS normal-sum curves: residuals {:.1e} / {:.1e} within {CURVE_TOL:.0e}; Laplace control {:.2}",
        data.pdf_residual, data.logpdf_residual, data.laplace_convolution_residual
    );
}

#[test]
fn a11_conditioning_matches_the_schur_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for i in 0..50 {
        // a strictly positive-definite 2-dim joint state
        let l = Matrix::new(
            2,
            2,
            (0..4).map(|_| rng.random_range(-1.0..1.0)).collect(),
        );
        let mut sigma = &l * &l.transpose();
        for d in 0..2 {
            sigma.set(d, d, sigma.get(d, d) + 0.3);
        }
        let mu = Vector::new(vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let joint = GaussMap::state(mu.clone(), sigma.clone()).unwrap();

        let state = joint.logpdf().dagger();
        let cond = condition_logpdf(&state, &Vector::new(vec![0.0]))
            .unwrap_or_else(|e| panic!("instance {i}: conditioning failed: {e}"));

        // independent oracle: the classical conditional from the Schur
        // complement of the (1,1) block
        let (s11, s12, s22) = (sigma.get(0, 0), sigma.get(0, 1), sigma.get(1, 1));
        let mean = mu.get(0) + s12 / s22 * (0.0 - mu.get(1));
        let var = s11 - s12 * s12 / s22;

        let value_at = |x: f64| match cond.evaluate(&Vector::zeros(0), &Vector::new(vec![x])) {
            Ok(ExtReal::Finite(v)) => v,
            other => panic!("instance {i}: expected a finite log density at {x}, got {other:?}"),
        };
        let base = value_at(mean);
        for dx in [-2.5, -1.0, 0.4, 1.9] {
            let got = value_at(mean + dx) - base;
            let expected = -dx * dx / (2.0 * var);
            assert!(
                (got - expected).abs() < CONDITION_TOL,
                "instance {i}: conditional at offset {dx} off by {:.3e}",
                (got - expected).abs()
            );
        }
    }
    println!("PASS conditioning: 50 joints match the Schur-complement conditional within {CONDITION_TOL:.0e}");
}
