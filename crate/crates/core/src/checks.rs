//! Seeded random-instance generators and the named property suites exposed
//! through `check` on the command line.
//!
//! Every suite is deterministic: instance streams come from fixed-seed
//! ChaCha generators, so a failure reproduces exactly. Math failures are
//! reported in the suite result; instances on which an operation is honestly
//! partial (an unbounded composite) are skipped and counted, never silently
//! dropped.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bifunction::{GeneratorKind, Polarity, QuadBifunction};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::gauss::GaussMap;
use crate::numeric::{column_space_basis, orthogonal_complement, pseudoinverse, Matrix, Vector};
use crate::oracle::{GridSpec, SampledFunction};
use crate::pcqf::Pcqf;
use crate::{DEFAULT_TOL, EQ_TOL};

pub const SUITES: [&str; 5] =
    ["conjugation", "adjoint-functor", "gauss-functor", "frobenius", "oracle"];

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    fn note(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 8 {
                self.failures.push(what());
            }
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} passed, {} failed", self.name, self.passed, self.failed)?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        for d in &self.failures {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    match name {
        "conjugation" => Ok(conjugation_suite()),
        "adjoint-functor" => Ok(adjoint_functor_suite()),
        "gauss-functor" => Ok(gauss_functor_suite()),
        "frobenius" => Ok(frobenius_suite()),
        "oracle" => Ok(oracle_suite()),
        other => Err(Error::ImproperInput(format!(
            "unknown suite '{other}'; available: {}",
            SUITES.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------------------
// Random instances

fn rand_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(-scale..scale)).collect();
    Matrix::new(rows, cols, data)
}

fn rand_vector(rng: &mut impl Rng, dim: usize, scale: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.random_range(-scale..scale)).collect())
}

/// Random quadratic with a rank-deficient curvature and feasible random
/// constraints: `Q = MMᵀ` for an n×r factor, constraints pinned through a
/// known point so the domain is never empty.
pub fn random_pcqf(rng: &mut impl Rng, dim: usize) -> Pcqf {
    let rank = rng.random_range(0..=dim);
    let m = rand_matrix(rng, dim, rank, 1.0);
    let q = &m * &m.transpose();
    let b = rand_vector(rng, dim, 1.0);
    let c = rng.random_range(-1.0..1.0);
    let k = rng.random_range(0..=dim);
    let constraints = rand_matrix(rng, k, dim, 1.0);
    let anchor = rand_vector(rng, dim, 1.0);
    let d = &constraints * &anchor;
    Pcqf::from_ambient(&q, &b, c, &constraints, &d).expect("constructed instance is well formed")
}

/// Random strictly convex quadratic on all of R^dim with curvature bounded
/// away from zero; `spread` scales the off-diagonal mixing.
pub fn random_full_pcqf(rng: &mut impl Rng, dim: usize, ridge: f64, spread: f64) -> Pcqf {
    let m = rand_matrix(rng, dim, dim, spread);
    let mut q = &m * &m.transpose();
    for i in 0..dim {
        q.set(i, i, q.get(i, i) + ridge);
    }
    let b = rand_vector(rng, dim, 0.5);
    let c = rng.random_range(-1.0..1.0);
    Pcqf::from_ambient(&q, &b, c, &Matrix::zeros(0, dim), &Vector::zeros(0))
        .expect("strictly convex instance is well formed")
}

/// Random Gauss morphism src → dst; the covariance factor rank is drawn from
/// 0..=dst, so singular (even zero) covariances occur regularly.
pub fn random_gauss(rng: &mut impl Rng, src: usize, dst: usize) -> GaussMap {
    let a = rand_matrix(rng, dst, src, 1.0);
    let mu = rand_vector(rng, dst, 1.0);
    let rank = rng.random_range(0..=dst);
    let l = rand_matrix(rng, dst, rank, 1.0);
    let sigma = &l * &l.transpose();
    GaussMap::new(a, mu, sigma).expect("constructed covariance is PSD")
}

/// Random convex bifunction from the families where the duality theory is
/// exact: linear maps, Gauss images, and linear relations.
pub fn random_bifunction(rng: &mut impl Rng, src: usize, dst: usize) -> QuadBifunction {
    match rng.random_range(0..3) {
        0 => QuadBifunction::from_linear_map(&rand_matrix(rng, dst, src, 1.0)),
        1 => random_gauss(rng, src, dst).cgf(),
        _ => {
            let total = src + dst;
            let rank = rng.random_range(1..=total);
            let span = rand_matrix(rng, total, rank, 1.0);
            QuadBifunction::from_linear_relation(src, dst, &span)
                .expect("span height matches the dimensions")
        }
    }
}

fn is_unbounded(e: &Error) -> bool {
    matches!(e, Error::UnboundedBelow | Error::UnboundedAbove)
}

// ---------------------------------------------------------------------------
// conjugation

fn conjugation_suite() -> SuiteReport {
    let mut report = SuiteReport::new("conjugation");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let dim = rng.random_range(1..=4);
        let f = random_pcqf(&mut rng, dim);

        // closed functions are fixed by double conjugation
        let double = f.conjugate().and_then(|g| g.conjugate());
        match double {
            Ok(ff) => report.note(ff.equal_within(&f, EQ_TOL), || {
                format!("instance {i}: double conjugation drifted")
            }),
            Err(e) => report.note(false, || format!("instance {i}: double conjugation: {e}")),
        }

        let star = match f.conjugate() {
            Ok(s) => s,
            Err(e) => {
                report.note(false, || format!("instance {i}: conjugate failed: {e}"));
                continue;
            }
        };

        // Fenchel-Young at an on-domain point and an arbitrary point
        let mut fy_ok = true;
        let on_domain = f.domain().point_at(&rand_vector(&mut rng, f.domain().dim(), 1.5));
        for x in [on_domain, rand_vector(&mut rng, dim, 2.0)] {
            let s = rand_vector(&mut rng, dim, 2.0);
            let lhs = f
                .evaluate(&x)
                .and_then(|fx| star.evaluate(&s).map(|fs| fx.add(fs)))
                .expect("dimensions agree");
            if let ExtReal::Finite(v) = lhs {
                if v < s.dot(&x) - EQ_TOL {
                    fy_ok = false;
                }
            }
        }
        report.note(fy_ok, || format!("instance {i}: Fenchel-Young violated"));

        // conjugation exchanges infimal convolution and addition; the
        // comparison is relative because conjugating a near-flat convolution
        // legitimately produces large coefficients
        let g = random_pcqf(&mut rng, dim);
        match f.inf_convolution(&g) {
            Ok(conv) => {
                let lhs = conv.conjugate();
                let rhs = g.conjugate().and_then(|gs| star.add(&gs));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        let (s, lin, cst, _) = r.ambient_form();
                        let scale = s.max_abs().max(lin.max_abs()).max(cst.abs()).max(1.0);
                        report.note(l.equal_within(&r, EQ_TOL * scale), || {
                            format!("instance {i}: convolution-addition exchange drifted")
                        })
                    }
                    _ => report.note(false, || {
                        format!("instance {i}: exchange law hit an unexpected error")
                    }),
                }
            }
            Err(e) if is_unbounded(&e) => report.skip(),
            Err(e) => report.note(false, || format!("instance {i}: convolution: {e}")),
        }

        // spectral route to the conjugate
        let elementary = f
            .elementary_form()
            .and_then(|e| e.conjugate())
            .and_then(|e| e.to_pcqf());
        match elementary {
            Ok(via_spectrum) => report.note(via_spectrum.equal_within(&star, EQ_TOL), || {
                format!("instance {i}: elementary-form conjugate drifted")
            }),
            Err(e) => report.note(false, || format!("instance {i}: elementary form: {e}")),
        }

        // the conjugate does not depend on the choice of generalized inverse
        let range = column_space_basis(f.q(), DEFAULT_TOL);
        if range.cols() < f.q().rows() {
            let kernel = orthogonal_complement(&range, DEFAULT_TOL)
                .expect("column space basis is orthonormal");
            let s = rand_matrix(&mut rng, kernel.cols(), kernel.cols(), 0.5);
            let sym = s.symmetrized();
            let g_inv = &pseudoinverse(f.q(), DEFAULT_TOL) + &(&(&kernel * &sym) * &kernel.transpose());
            match f.conjugate_with_q_inverse(&g_inv) {
                Ok(alt) => report.note(alt.equal_within(&star, EQ_TOL), || {
                    format!("instance {i}: conjugate depends on the generalized inverse")
                }),
                Err(e) => {
                    report.note(false, || format!("instance {i}: alternate inverse: {e}"))
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// adjoint-functor

fn adjoint_functor_suite() -> SuiteReport {
    let mut report = SuiteReport::new("adjoint-functor");
    let mut rng = ChaCha8Rng::seed_from_u64(23);

    for i in 0..100 {
        let a = rng.random_range(1..=3);
        let b = rng.random_range(1..=3);
        let c = rng.random_range(1..=3);
        let d = rng.random_range(1..=3);
        let f = random_bifunction(&mut rng, a, b);
        let g = random_bifunction(&mut rng, b, c);
        let h = random_bifunction(&mut rng, c, d);

        // adjoint is contravariant on composable pairs
        let lhs = g.compose(&f).and_then(|gf| gf.adjoint());
        let rhs = (|| {
            let fs = f.adjoint()?;
            let gs = g.adjoint()?;
            fs.compose(&gs)
        })();
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.note(l.equal_within(&r, EQ_TOL), || {
                format!("triple {i}: adjoint broke contravariance")
            }),
            (Err(e), _) | (_, Err(e)) if is_unbounded(&e) => report.skip(),
            (Err(e), _) | (_, Err(e)) => {
                report.note(false, || format!("triple {i}: contravariance: {e}"))
            }
        }

        // involutions
        match f.adjoint().and_then(|fs| fs.adjoint()) {
            Ok(ff) => report.note(ff.equal_within(&f, EQ_TOL), || {
                format!("triple {i}: double adjoint drifted")
            }),
            Err(e) => report.note(false, || format!("triple {i}: double adjoint: {e}")),
        }
        report.note(f.dagger().dagger().equal_within(&f, EQ_TOL), || {
            format!("triple {i}: double dagger drifted")
        });

        // inverse and adjoint commute
        let via_adjoint = f.adjoint().map(|fs| fs.inverse());
        let via_inverse = f.inverse().adjoint();
        match (via_adjoint, via_inverse) {
            (Ok(l), Ok(r)) => report.note(l.equal_within(&r, EQ_TOL), || {
                format!("triple {i}: inverse and adjoint do not commute")
            }),
            (Err(e), _) | (_, Err(e)) => {
                report.note(false, || format!("triple {i}: inverse-adjoint: {e}"))
            }
        }

        // category laws
        let assoc_l = g.compose(&f).and_then(|gf| h.compose(&gf));
        let assoc_r = h.compose(&g).and_then(|hg| hg.compose(&f));
        match (assoc_l, assoc_r) {
            (Ok(l), Ok(r)) => report.note(l.equal_within(&r, EQ_TOL), || {
                format!("triple {i}: composition is not associative")
            }),
            (Err(e), _) | (_, Err(e)) if is_unbounded(&e) => report.skip(),
            (Err(e), _) | (_, Err(e)) => {
                report.note(false, || format!("triple {i}: associativity: {e}"))
            }
        }
        let left_id = QuadBifunction::identity(b).compose(&f);
        let right_id = f.compose(&QuadBifunction::identity(a));
        match (left_id, right_id) {
            (Ok(l), Ok(r)) => report.note(
                l.equal_within(&f, EQ_TOL) && r.equal_within(&f, EQ_TOL),
                || format!("triple {i}: identity is not neutral"),
            ),
            _ => report.note(false, || format!("triple {i}: identity composite failed")),
        }
    }

    for i in 0..100 {
        report.note(fenchel_duality_gap(&mut rng).abs() <= EQ_TOL, || {
            format!("fenchel instance {i}: primal and dual values disagree")
        });
    }
    report
}

/// One Fenchel duality instance: the gap between inf(f - g) computed by
/// composing (f as a state, -g as an effect) and sup(g* - f*) computed on
/// the adjoints of the same two bifunctions.
pub fn fenchel_duality_gap(rng: &mut impl Rng) -> f64 {
    let n = rng.random_range(1..=3);
    let ridge = 0.5 + rng.random_range(0.0..1.0);
    let f = random_full_pcqf(rng, n, ridge, 0.7);
    // -g, convex: g is a concave quadratic effect
    let rank = rng.random_range(0..=n);
    let l = rand_matrix(rng, n, rank, 0.8);
    let r_q = &l * &l.transpose();
    let neg_g = Pcqf::from_ambient(
        &r_q,
        &rand_vector(rng, n, 0.6),
        rng.random_range(-1.0..1.0),
        &Matrix::zeros(0, n),
        &Vector::zeros(0),
    )
    .expect("PSD effect");

    let state = QuadBifunction::from_pcqf_state(f, Polarity::Convex);
    let effect = QuadBifunction::from_graph(n, 0, neg_g, Polarity::Convex)
        .expect("effect graph has the right dimension");

    let primal = effect
        .compose(&state)
        .and_then(|s| s.evaluate(&Vector::zeros(0), &Vector::zeros(0)))
        .expect("strictly convex primal is bounded");
    let dual = (|| {
        let state_adj = state.adjoint()?;
        let effect_adj = effect.adjoint()?;
        state_adj
            .compose(&effect_adj)?
            .evaluate(&Vector::zeros(0), &Vector::zeros(0))
    })()
    .expect("dual composite is proper");
    match (primal, dual) {
        (ExtReal::Finite(p), ExtReal::Finite(d)) => p - d,
        _ => f64::INFINITY,
    }
}

// ---------------------------------------------------------------------------
// gauss-functor

/// Compare two bifunctions at `EQ_TOL` relative to the larger coefficient
/// magnitude, floored at 1 so order-one data still gets an absolute bound.
///
/// A log density of a nearly singular Gaussian has curvature on the order of
/// the covariance pseudoinverse, so its coefficients can be arbitrarily
/// large; demanding absolute agreement there would ask for more relative
/// precision than doubles carry.
fn maps_close(a: &QuadBifunction, b: &QuadBifunction) -> bool {
    let magnitude = |f: &QuadBifunction| {
        let (s, l, c, _) = f.graph().ambient_form();
        s.max_abs().max(l.max_abs()).max(c.abs())
    };
    let scale = magnitude(a).max(magnitude(b)).max(1.0);
    a.equal_within(b, EQ_TOL * scale)
}

fn gauss_functor_suite() -> SuiteReport {
    let mut report = SuiteReport::new("gauss-functor");
    let mut rng = ChaCha8Rng::seed_from_u64(37);

    for i in 0..200 {
        let k = rng.random_range(1..=3);
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=3);
        let g = random_gauss(&mut rng, k, m);
        let f = random_gauss(&mut rng, m, n);
        let fg = f.compose(&g).expect("dimensions agree");

        let covariant = f
            .cgf()
            .compose(&g.cgf())
            .map(|c| maps_close(&c, &fg.cgf()));
        report.note(covariant.unwrap_or(false), || {
            format!("pair {i}: moment functor broke covariance")
        });

        let contravariant = g
            .logpdf()
            .compose(&f.logpdf())
            .map(|c| maps_close(&c, &fg.logpdf()));
        report.note(contravariant.unwrap_or(false), || {
            format!("pair {i}: density functor broke contravariance")
        });

        let adj_cgf = f.cgf().adjoint().map(|a| maps_close(&a, &f.logpdf()));
        report.note(adj_cgf.unwrap_or(false), || {
            format!("pair {i}: adjoint of the cgf is not the log density")
        });
        let adj_logpdf = f.logpdf().adjoint().map(|a| maps_close(&a, &f.cgf()));
        report.note(adj_logpdf.unwrap_or(false), || {
            format!("pair {i}: adjoint of the log density is not the cgf")
        });

        report.note(f.cgf().is_co_discardable(EQ_TOL), || {
            format!("pair {i}: cgf image lost normalization")
        });
    }

    // sum rule: adding independent states is the comparison generator on the
    // cgf side
    for i in 0..20 {
        let s1 = random_gauss(&mut rng, 0, 1);
        let s2 = random_gauss(&mut rng, 0, 1);
        let pair = s1.cgf().tensor(&s2.cgf()).expect("states tensor");
        let summed = QuadBifunction::generator(GeneratorKind::Compare, 1).compose(&pair);
        let mu = Vector::new(vec![s1.mu().get(0) + s2.mu().get(0)]);
        let sigma = Matrix::diagonal(&[s1.sigma().get(0, 0) + s2.sigma().get(0, 0)]);
        let direct = GaussMap::state(mu, sigma).expect("sum state").cgf();
        report.note(
            summed.map(|s| s.equal_within(&direct, EQ_TOL)).unwrap_or(false),
            || format!("sum instance {i}: cgf sum rule drifted"),
        );
    }
    report
}

// ---------------------------------------------------------------------------
// frobenius

fn frobenius_suite() -> SuiteReport {
    let mut report = SuiteReport::new("frobenius");
    for family in ["diagonal", "additive"] {
        for n in 1..=2usize {
            for &polarity in &[Polarity::Convex, Polarity::Concave] {
                check_frobenius_family(&mut report, family, n, polarity);
            }
        }
    }
    report
}

fn check_frobenius_family(report: &mut SuiteReport, family: &str, n: usize, polarity: Polarity) {
    let build = |kind: GeneratorKind| {
        let g = QuadBifunction::generator(kind, n);
        match polarity {
            Polarity::Convex => g,
            Polarity::Concave => g.negated(),
        }
    };
    // comultiplication, counit, multiplication, unit of the chosen family
    let (split, erase, merge, spawn) = match family {
        "diagonal" => (
            build(GeneratorKind::Copy),
            build(GeneratorKind::Discard),
            build(GeneratorKind::Compare),
            build(GeneratorKind::Unit),
        ),
        _ => (
            build(GeneratorKind::Coadd),
            build(GeneratorKind::Cozero),
            build(GeneratorKind::Add),
            build(GeneratorKind::Zero),
        ),
    };
    let id = |m: usize| match polarity {
        Polarity::Convex => QuadBifunction::identity(m),
        Polarity::Concave => QuadBifunction::identity(m).negated(),
    };
    let swap = {
        let mut s = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            s.set(i, n + i, 1.0);
            s.set(n + i, i, 1.0);
        }
        match polarity {
            Polarity::Convex => QuadBifunction::from_linear_map(&s),
            Polarity::Concave => QuadBifunction::from_linear_map(&s).negated(),
        }
    };
    let tag = |law: &str| {
        format!(
            "{family} family, n = {n}, {} polarity: {law}",
            match polarity {
                Polarity::Convex => "convex",
                Polarity::Concave => "concave",
            }
        )
    };
    let tol = 1e-9;
    let eq = |lhs: crate::Result<QuadBifunction>, rhs: crate::Result<QuadBifunction>| match (lhs, rhs)
    {
        (Ok(l), Ok(r)) => l.equal_within(&r, tol),
        _ => false,
    };

    // coassociativity and counit laws of the comultiplication
    let coassoc_l = split.tensor(&id(n)).and_then(|t| t.compose(&split));
    let coassoc_r = id(n).tensor(&split).and_then(|t| t.compose(&split));
    report.note(eq(coassoc_l, coassoc_r), || tag("coassociativity"));

    let counit_l = erase.tensor(&id(n)).and_then(|t| t.compose(&split));
    let counit_r = id(n).tensor(&erase).and_then(|t| t.compose(&split));
    report.note(
        eq(counit_l, Ok(id(n))) && eq(counit_r, Ok(id(n))),
        || tag("counit"),
    );

    report.note(eq(swap.compose(&split), Ok(split.clone())), || tag("cocommutativity"));

    // monoid laws of the multiplication
    let assoc_l = merge.tensor(&id(n)).and_then(|t| merge.compose(&t));
    let assoc_r = id(n).tensor(&merge).and_then(|t| merge.compose(&t));
    report.note(eq(assoc_l, assoc_r), || tag("associativity"));

    let unit_l = spawn.tensor(&id(n)).and_then(|t| merge.compose(&t));
    let unit_r = id(n).tensor(&spawn).and_then(|t| merge.compose(&t));
    report.note(eq(unit_l, Ok(id(n))) && eq(unit_r, Ok(id(n))), || tag("unit"));

    report.note(eq(merge.compose(&swap), Ok(merge.clone())), || tag("commutativity"));

    // the Frobenius law and specialness
    let frob_m = split.compose(&merge);
    let frob_l = id(n)
        .tensor(&merge)
        .and_then(|top| split.tensor(&id(n)).and_then(|bot| top.compose(&bot)));
    let frob_r = merge
        .tensor(&id(n))
        .and_then(|top| id(n).tensor(&split).and_then(|bot| top.compose(&bot)));
    let frob_m2 = split.compose(&merge);
    report.note(
        eq(frob_l, frob_m) && eq(frob_r, frob_m2),
        || tag("Frobenius law"),
    );

    report.note(eq(merge.compose(&split), Ok(id(n))), || tag("specialness"));
}

// ---------------------------------------------------------------------------
// oracle

fn oracle_suite() -> SuiteReport {
    let mut report = SuiteReport::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(53);

    // grid infimization against the closed form, two dimensions
    for i in 0..10 {
        let f = random_full_pcqf(&mut rng, 2, 0.5, 0.3);
        let grid = GridSpec::uniform(2, -10.0, 10.0, 401).expect("grid");
        match partial_infimum_gap(&f, 1, &grid, 2.0) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&grid), || {
                format!("partial infimum instance {i}: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("partial infimum instance {i}: {e}")),
        }
    }

    // one three-dimensional instance on a coarser grid
    {
        let f = random_full_pcqf(&mut rng, 3, 0.5, 0.25);
        let grid = GridSpec::uniform(3, -6.0, 6.0, 61).expect("grid");
        match partial_infimum_gap(&f, 1, &grid, 1.5) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&grid), || {
                format!("3-dim partial infimum: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("3-dim partial infimum: {e}")),
        }
    }

    // full infimum against the grid minimum
    {
        let f = random_full_pcqf(&mut rng, 1, 0.5, 0.5);
        let grid = GridSpec::line(-10.0, 10.0, 401).expect("grid");
        let sampled = SampledFunction::sample_pcqf(grid.clone(), &f).expect("sampling");
        let grid_min = sampled.min_value();
        let closed = f.infimum();
        let gap = match (closed, grid_min) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        report.note(gap <= oracle_tolerance(&grid), || {
            format!("full infimum: gap {gap:.2e}")
        });
    }

    // conjugation against the numerical Legendre transform
    for i in 0..6 {
        let f = random_full_pcqf(&mut rng, 1, 0.5, 0.5);
        let primal = GridSpec::line(-25.0, 25.0, 2001).expect("grid");
        let dual = GridSpec::line(-2.0, 2.0, 81).expect("grid");
        match legendre_gap(&f, &primal, &dual) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&primal), || {
                format!("conjugate instance {i}: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("conjugate instance {i}: {e}")),
        }
    }
    for i in 0..2 {
        let f = random_full_pcqf(&mut rng, 2, 0.5, 0.3);
        let primal = GridSpec::uniform(2, -10.0, 10.0, 201).expect("grid");
        let dual = GridSpec::uniform(2, -2.0, 2.0, 41).expect("grid");
        match legendre_gap(&f, &primal, &dual) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&primal), || {
                format!("2-dim conjugate instance {i}: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("2-dim conjugate instance {i}: {e}")),
        }
    }

    // infimal convolution against the exhaustive scan
    for i in 0..8 {
        let f = random_full_pcqf(&mut rng, 1, 0.5, 0.5);
        let g = random_full_pcqf(&mut rng, 1, 0.5, 0.5);
        let grid = GridSpec::line(-10.0, 10.0, 401).expect("grid");
        match inf_convolution_gap(&f, &g, &grid, 3.0) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&grid), || {
                format!("convolution instance {i}: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("convolution instance {i}: {e}")),
        }
    }
    for i in 0..2 {
        let f = random_full_pcqf(&mut rng, 2, 0.5, 0.25);
        let g = random_full_pcqf(&mut rng, 2, 0.5, 0.25);
        let grid = GridSpec::uniform(2, -10.0, 10.0, 101).expect("grid");
        match inf_convolution_gap(&f, &g, &grid, 2.0) {
            Ok(gap) => report.note(gap <= oracle_tolerance(&grid), || {
                format!("2-dim convolution instance {i}: gap {gap:.2e}")
            }),
            Err(e) => report.note(false, || format!("2-dim convolution instance {i}: {e}")),
        }
    }
    report
}

/// The documented oracle agreement tolerance: the square of the grid step,
/// floored at 1e-3.
pub fn oracle_tolerance(grid: &GridSpec) -> f64 {
    (grid.max_step() * grid.max_step()).max(1e-3)
}

/// Largest gap between the closed-form partial infimum and the grid scan at
/// kept points with coordinates within `window`.
pub fn partial_infimum_gap(f: &Pcqf, keep: usize, grid: &GridSpec, window: f64) -> Result<f64> {
    let sampled = SampledFunction::sample_pcqf(grid.clone(), f)?;
    let reduced = sampled.grid_partial_infimum(keep)?;
    let closed = f.partial_infimum(keep)?;
    let mut worst = 0.0f64;
    for i in 0..reduced.grid().len() {
        let x = reduced.grid().point(i);
        if (0..x.dim()).any(|c| x.get(c).abs() > window) {
            continue;
        }
        match (closed.evaluate(&x)?, reduced.value(i)) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => worst = worst.max((a - b).abs()),
            (a, b) if a == b => {}
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}

/// Largest gap between the closed-form conjugate and the numerical Legendre
/// transform over the dual grid.
pub fn legendre_gap(f: &Pcqf, primal: &GridSpec, dual: &GridSpec) -> Result<f64> {
    let sampled = SampledFunction::sample_pcqf(primal.clone(), f)?;
    let transform = sampled.numeric_legendre(dual)?;
    let star = f.conjugate()?;
    let mut worst = 0.0f64;
    for i in 0..dual.len() {
        let s = dual.point(i);
        match (star.evaluate(&s)?, transform.result.value(i)) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => worst = worst.max((a - b).abs()),
            (a, b) if a == b => {}
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}

/// Largest gap between the closed-form infimal convolution and the grid scan
/// at points with coordinates within `window`.
pub fn inf_convolution_gap(f: &Pcqf, g: &Pcqf, grid: &GridSpec, window: f64) -> Result<f64> {
    let fs = SampledFunction::sample_pcqf(grid.clone(), f)?;
    let gs = SampledFunction::sample_pcqf(grid.clone(), g)?;
    let scanned = fs.numeric_inf_convolution(&gs)?;
    let closed = f.inf_convolution(g)?;
    let mut worst = 0.0f64;
    for i in 0..grid.len() {
        let x = grid.point(i);
        if (0..x.dim()).any(|c| x.get(c).abs() > window) {
            continue;
        }
        match (closed.evaluate(&x)?, scanned.value(i)) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => worst = worst.max((a - b).abs()),
            (a, b) if a == b => {}
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}
