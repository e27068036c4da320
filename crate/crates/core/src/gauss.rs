//! Affine-Gaussian maps and their two bifunction readings.
//!
//! A [`GaussMap`] `m → n` is a triple `(A, μ, Σ)`: it sends an input `x` to
//! the Gaussian `N(Ax + μ, Σ)` on R^n. Composition pushes means and
//! covariances forward exactly, with no sampling and no density grids.
//!
//! Two interpretations land in [`QuadBifunction`]s:
//!
//! - [`GaussMap::cgf`] (covariant): the cumulant-generating-function
//!   bifunction `(x, y) ↦ ½⟨y, Σy⟩ + ⟨μ, y⟩ + ⟦x = Aᵀy⟧`, convex.
//! - [`GaussMap::logpdf`] (contravariant): the log-density bifunction
//!   `(y, x) ↦ −½⟨z, Σ⁻z⟩ − ⟦z ∈ im Σ⟧` with `z = y − Ax − μ`, concave.
//!   The normalizing constant is dropped throughout, which is what makes
//!   the two readings exact mutual adjoints.
//!
//! [`ExtGaussState`] adds an improper fibre direction to a Gaussian state
//! (flat along a subspace `D`), and [`condition_logpdf`] restricts a joint
//! log density to an observed value, which is all conditioning is on the
//! log-density side.

use crate::bifunction::{Polarity, QuadBifunction};
use crate::error::{Error, Result};
use crate::numeric::{column_space_basis, psd_project, pseudoinverse, sym_eig, Matrix, Vector};
use crate::pcqf::Pcqf;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone)]
pub struct GaussMap {
    a: Matrix,     // n×m
    mu: Vector,    // n
    sigma: Matrix, // n×n, symmetric PSD
}

impl GaussMap {
    /// Builds `x ↦ N(Ax + μ, Σ)`. `Σ` is symmetrized; eigenvalues in
    /// `[-tol, 0)` are clamped to zero and anything more negative is
    /// rejected.
    pub fn new(a: Matrix, mu: Vector, sigma: Matrix) -> Result<Self> {
        let n = a.rows();
        if mu.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: mu.dim() });
        }
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sigma.rows() });
        }
        let sigma = psd_project(&sigma.symmetrized(), DEFAULT_TOL, |v| {
            Error::ImproperInput(format!("covariance has negative eigenvalue {v:.3e}"))
        })?;
        Ok(GaussMap { a, mu, sigma })
    }

    /// The identity map `(I, 0, 0)`.
    pub fn identity(n: usize) -> Self {
        GaussMap { a: Matrix::identity(n), mu: Vector::zeros(n), sigma: Matrix::zeros(n, n) }
    }

    /// A deterministic linear map `(A, 0, 0)`.
    pub fn from_linear(a: &Matrix) -> Self {
        let n = a.rows();
        GaussMap { a: a.clone(), mu: Vector::zeros(n), sigma: Matrix::zeros(n, n) }
    }

    /// A Gaussian state `N(μ, Σ)` as a map with no input.
    pub fn state(mu: Vector, sigma: Matrix) -> Result<Self> {
        let n = mu.dim();
        GaussMap::new(Matrix::zeros(n, 0), mu, sigma)
    }

    /// The copy map `Δ = (x ↦ (x, x), 0, 0)`.
    pub fn copy(n: usize) -> Self {
        GaussMap::from_linear(&Matrix::identity(n).vstack(&Matrix::identity(n)))
    }

    /// The delete map `(x ↦ (), 0, 0)`.
    pub fn discard(n: usize) -> Self {
        GaussMap::from_linear(&Matrix::zeros(0, n))
    }

    pub fn src_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn dst_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn mu(&self) -> &Vector {
        &self.mu
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// `self ∘ other`: `(A, μ, Σ) ∘ (B, ν, Ξ) = (AB, μ + Aν, Σ + AΞAᵀ)`.
    pub fn compose(&self, other: &GaussMap) -> Result<GaussMap> {
        if other.dst_dim() != self.src_dim() {
            return Err(Error::DimensionMismatch { expected: self.src_dim(), got: other.dst_dim() });
        }
        let a = &self.a * &other.a;
        let mu = &self.mu + &(&self.a * &other.mu);
        let sigma = &self.sigma + &(&(&self.a * &other.sigma) * &self.a.transpose());
        Ok(GaussMap { a, mu, sigma: sigma.symmetrized() })
    }

    /// Parallel composition: block-diagonal on every field.
    pub fn tensor(&self, other: &GaussMap) -> GaussMap {
        GaussMap {
            a: self.a.block_diag(&other.a),
            mu: self.mu.concat(&other.mu),
            sigma: self.sigma.block_diag(&other.sigma),
        }
    }

    /// Covariant reading: the convex bifunction
    /// `(x, y) ↦ ½⟨y, Σy⟩ + ⟨μ, y⟩ + ⟦x = Aᵀy⟧` of the same shape `m → n`.
    /// For a state this is the cumulant-generating function.
    pub fn cgf(&self) -> QuadBifunction {
        let (m, n) = (self.src_dim(), self.dst_dim());
        let q = Matrix::zeros(m, m).block_diag(&self.sigma);
        let b = Vector::zeros(m).concat(&self.mu);
        let constraints = Matrix::identity(m).hstack(&self.a.transpose().scale(-1.0));
        let graph = Pcqf::from_ambient(&q, &b, 0.0, &constraints, &Vector::zeros(m))
            .expect("cgf graph is PSD by construction");
        QuadBifunction::from_graph(m, n, graph, Polarity::Convex).expect("dims match")
    }

    /// Contravariant reading: the concave bifunction `n → m` with value
    /// `(y, x) ↦ −½⟨z, Σ⁻z⟩ − ⟦z ∈ im Σ⟧`, `z = y − Ax − μ`. Any
    /// generalized inverse gives the same values on `im Σ`; the
    /// Moore–Penrose one is used.
    pub fn logpdf(&self) -> QuadBifunction {
        let (m, n) = (self.src_dim(), self.dst_dim());
        let tol = DEFAULT_TOL;
        // ½⟨w, Σ⁺w⟩ on im Σ, +∞ off it
        let kernel = sigma_kernel(&self.sigma, tol);
        let base = Pcqf::from_ambient(
            &pseudoinverse(&self.sigma, tol),
            &Vector::zeros(n),
            0.0,
            &kernel.transpose(),
            &Vector::zeros(kernel.cols()),
        )
        .expect("pseudoinverse of a PSD matrix is PSD");
        // pull back along (y, x) ↦ y − Ax − μ
        let t = Matrix::identity(n).hstack(&self.a.scale(-1.0));
        let stored = base
            .affine_pullback(&t, &self.mu.scale(-1.0))
            .expect("surjective affine substitution");
        QuadBifunction::from_graph(n, m, stored, Polarity::Concave).expect("dims match")
    }
}

fn sigma_kernel(sigma: &Matrix, tol: f64) -> Matrix {
    let (vals, vecs) = sym_eig(sigma, 1e-7).expect("covariance is symmetric");
    let n = vals.dim();
    let scale = (0..n).map(|i| vals.get(i).abs()).fold(1.0f64, f64::max);
    let cols: Vec<usize> = (0..n).filter(|&i| vals.get(i).abs() <= tol * scale).collect();
    Matrix::from_fn(n, cols.len(), |i, j| vecs.get(i, cols[j]))
}

/// A Gaussian state with an improper flat direction: `N(μ, Σ) + D`, uniform
/// along the subspace `D`.
#[derive(Debug, Clone)]
pub struct ExtGaussState {
    mu: Vector,
    sigma: Matrix,
    fibre: Matrix, // n×f, orthonormal columns spanning D
}

impl ExtGaussState {
    /// `fibre` may be any spanning set of the flat subspace; it is
    /// orthonormalized on ingestion.
    pub fn new(mu: Vector, sigma: Matrix, fibre: &Matrix) -> Result<Self> {
        let n = mu.dim();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sigma.rows() });
        }
        if fibre.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: fibre.rows() });
        }
        let sigma = psd_project(&sigma.symmetrized(), DEFAULT_TOL, |v| {
            Error::ImproperInput(format!("covariance has negative eigenvalue {v:.3e}"))
        })?;
        Ok(ExtGaussState { mu, sigma, fibre: column_space_basis(fibre, DEFAULT_TOL) })
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn mu(&self) -> &Vector {
        &self.mu
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn fibre(&self) -> &Matrix {
        &self.fibre
    }

    /// The convex function `x ↦ ½⟨x, Σx⟩ + ⟨μ, x⟩ + ⟦x ⊥ D⟧`: the
    /// cumulant-generating function with the flat directions showing up as
    /// constraints. `D = {0}` recovers the ordinary Gaussian state.
    pub fn cgf(&self) -> Pcqf {
        Pcqf::from_ambient(
            &self.sigma,
            &self.mu,
            0.0,
            &self.fibre.transpose(),
            &Vector::zeros(self.fibre.cols()),
        )
        .expect("covariance is PSD")
    }
}

/// Conditions a joint concave log-density state on R^(n+k) on its last `k`
/// coordinates taking the observed `value`: restriction of the stored graph
/// to `{y = value}`, which is all conditioning is in log-density form. Fails
/// with `InfeasibleObservation` when the value is off the joint support.
pub fn condition_logpdf(joint: &QuadBifunction, value: &Vector) -> Result<QuadBifunction> {
    if joint.polarity() != Polarity::Concave {
        return Err(Error::PolarityMismatch("conditioning expects a concave log density".into()));
    }
    if joint.src_dim() != 0 {
        return Err(Error::DimensionMismatch { expected: 0, got: joint.src_dim() });
    }
    let total = joint.dst_dim();
    let k = value.dim();
    if k > total {
        return Err(Error::DimensionMismatch { expected: total, got: k });
    }
    let n = total - k;
    let t = Matrix::identity(n).vstack(&Matrix::zeros(k, n));
    let t0 = Vector::zeros(n).concat(value);
    let restricted = joint.graph().affine_pullback(&t, &t0)?;
    if restricted.is_infeasible() {
        return Err(Error::InfeasibleObservation);
    }
    Ok(QuadBifunction::from_pcqf_state(restricted, Polarity::Concave))
}
