//! Partial convex quadratic functions (pcqfs): functions that are a convex
//! quadratic `½ zᵀQz + bᵀz + c` in internal coordinates on an affine
//! subspace `{p + Bz}` of R^n and `+∞` everywhere else. The empty domain
//! gives the constant `+∞` function; `-∞` is not representable, and any
//! operation that would produce it fails with `UnboundedBelow` instead.
//!
//! The class is closed under addition, partial infimization, Legendre
//! conjugation, and infimal convolution, and all four are computed here in
//! closed form. Conjugation uses the Moore–Penrose pseudoinverse of `Q`, but
//! the result is independent of which generalized inverse is used (the
//! quadratic form only ever sees vectors in `im(Q)`); see
//! [`Pcqf::conjugate_with_q_inverse`] for the check.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::numeric::{column_space_basis, orthogonal_complement, pseudoinverse, psd_project, sym_eig, Matrix, Vector};
use crate::subspace::AffineSubspace;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone)]
pub struct Pcqf {
    domain: AffineSubspace,
    q: Matrix, // k×k, symmetric PSD
    b: Vector, // k
    c: f64,
}

impl Pcqf {
    /// The constant `+∞` function on R^n (empty domain).
    pub fn infeasible(n: usize) -> Self {
        Pcqf { domain: AffineSubspace::empty(n), q: Matrix::zeros(0, 0), b: Vector::zeros(0), c: 0.0 }
    }

    /// The constant function `x ↦ c` on all of R^n.
    pub fn constant(n: usize, c: f64) -> Self {
        Pcqf::indicator(AffineSubspace::full(n)).with_constant(c)
    }

    /// `0` on the subspace, `+∞` off it.
    pub fn indicator(domain: AffineSubspace) -> Self {
        let k = domain.dim();
        Pcqf { domain, q: Matrix::zeros(k, k), b: Vector::zeros(k), c: 0.0 }
    }

    /// `0` at the single point `p`, `+∞` elsewhere.
    pub fn point_indicator(p: &Vector) -> Self {
        Pcqf::indicator(AffineSubspace::point(p))
    }

    fn with_constant(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// Internal-form constructor. Symmetrizes `q` and clamps eigenvalues in
    /// `[-tol, 0)` to zero; a genuinely negative eigenvalue is `NotConvex`.
    pub fn from_internal(domain: AffineSubspace, q: Matrix, b: Vector, c: f64) -> Result<Self> {
        if domain.is_empty() {
            return Ok(Pcqf::infeasible(domain.ambient()));
        }
        let k = domain.dim();
        if q.rows() != k || q.cols() != k {
            return Err(Error::DimensionMismatch { expected: k, got: q.rows() });
        }
        if b.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, got: b.dim() });
        }
        if !c.is_finite() {
            return Err(Error::ImproperInput("constant term must be finite".into()));
        }
        let q = psd_project(&q, DEFAULT_TOL, |v| Error::NotConvex { min_eigenvalue: v })?;
        Ok(Pcqf { domain, q, b, c })
    }

    /// Builds the function `½ xᵀQx + bᵀx + c` restricted to `{x : Cx = d}`.
    /// `q` is symmetrized on ingestion. Inconsistent constraints give the
    /// `+∞` function; a non-convex restriction is `NotConvex`.
    pub fn from_ambient(q: &Matrix, b: &Vector, c: f64, constraints: &Matrix, rhs: &Vector) -> Result<Self> {
        let n = b.dim();
        if q.rows() != n || q.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: q.rows() });
        }
        if constraints.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: constraints.cols() });
        }
        if constraints.rows() != rhs.dim() {
            return Err(Error::DimensionMismatch { expected: constraints.rows(), got: rhs.dim() });
        }
        let domain = AffineSubspace::solve(constraints, rhs, DEFAULT_TOL);
        Pcqf::restrict_ambient(&q.symmetrized(), b, c, &Vector::zeros(n), domain)
    }

    /// Elementary pcqf `x ↦ ½ Σ λᵢ xᵢ²` with `λᵢ ∈ [0, +∞]`; coordinates
    /// with `λᵢ = +∞` are constrained to zero.
    pub fn elementary(lambdas: &[f64]) -> Result<Self> {
        let n = lambdas.len();
        for &l in lambdas {
            if l.is_nan() || l < 0.0 {
                return Err(Error::NegativeCurvature(l));
            }
        }
        let free: Vec<usize> = (0..n).filter(|&i| lambdas[i].is_finite()).collect();
        let basis = Matrix::from_fn(n, free.len(), |i, j| if i == free[j] { 1.0 } else { 0.0 });
        let domain = AffineSubspace::from_span_offset(&basis, &Vector::zeros(n), DEFAULT_TOL);
        // from_span_offset keeps the coordinate axes in order, so Q stays diagonal
        let q = Matrix::diagonal(&free.iter().map(|&i| lambdas[i]).collect::<Vec<_>>());
        Pcqf::from_internal(domain, q, Vector::zeros(free.len()), 0.0)
    }

    /// Restriction of the ambient quadratic
    /// `f(x) = ½ (x−x₀)ᵀ S (x−x₀) + lᵀ(x−x₀) + c₀` to `sub` (assumed to be
    /// contained in the region where that expansion is valid).
    fn restrict_ambient(s: &Matrix, l: &Vector, c0: f64, x0: &Vector, sub: AffineSubspace) -> Result<Self> {
        if sub.is_empty() {
            return Ok(Pcqf::infeasible(sub.ambient()));
        }
        let basis = sub.basis().clone();
        let delta = &(sub.offset() - x0);
        let s_delta = s * delta;
        let q = &(&basis.transpose() * s) * &basis;
        let b = &basis.transpose() * &(&s_delta + l);
        let c = 0.5 * delta.dot(&s_delta) + l.dot(delta) + c0;
        Pcqf::from_internal(sub, q, b, c)
    }

    /// Ambient canonical form around the canonical offset `p`:
    /// `f(x) = ½ (x−p)ᵀ S (x−p) + lᵀ(x−p) + c` on the domain, with
    /// `S = BQBᵀ` and `l = Bb`.
    pub fn ambient_form(&self) -> (Matrix, Vector, f64, Vector) {
        let basis = self.domain.basis();
        let s = &(basis * &self.q) * &basis.transpose();
        let l = basis * &self.b;
        (s, l, self.c, self.domain.offset().clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient()
    }

    pub fn is_infeasible(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain(&self) -> &AffineSubspace {
        &self.domain
    }

    /// Quadratic part in internal coordinates (symmetric PSD).
    pub fn q(&self) -> &Matrix {
        &self.q
    }

    /// Linear part in internal coordinates.
    pub fn b(&self) -> &Vector {
        &self.b
    }

    /// Constant term at the canonical offset.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Value at `x`: the quadratic on the domain, `+∞` off it.
    pub fn evaluate(&self, x: &Vector) -> Result<ExtReal> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: x.dim() });
        }
        if !self.domain.contains(x, DEFAULT_TOL) {
            return Ok(ExtReal::PosInf);
        }
        let z = self.domain.internal_coords(x);
        let val = 0.5 * z.dot(&(&self.q * &z)) + self.b.dot(&z) + self.c;
        Ok(ExtReal::Finite(val))
    }

    /// Pointwise sum. Domains intersect; an empty intersection gives the
    /// `+∞` function.
    pub fn add(&self, other: &Pcqf) -> Result<Pcqf> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: other.ambient_dim() });
        }
        let meet = self.domain.intersect(&other.domain, DEFAULT_TOL);
        if meet.is_empty() {
            return Ok(Pcqf::infeasible(self.ambient_dim()));
        }
        let (qa, ba, ca) = self.internal_on(&meet);
        let (qb, bb, cb) = other.internal_on(&meet);
        Pcqf::from_internal(meet.clone(), &qa + &qb, &ba + &bb, ca + cb)
    }

    /// Adds the affine function `⟨lin, x⟩ + konst` (full domain, exact).
    pub fn add_affine(&self, lin: &Vector, konst: f64) -> Pcqf {
        assert_eq!(lin.dim(), self.ambient_dim(), "affine term dimension mismatch");
        if self.is_infeasible() {
            return self.clone();
        }
        let b = &self.b + &(&self.domain.basis().transpose() * lin);
        let c = self.c + lin.dot(self.domain.offset()) + konst;
        Pcqf { domain: self.domain.clone(), q: self.q.clone(), b, c }
    }

    /// Internal form of `self` re-expressed on a subspace `sub ⊆ domain`.
    fn internal_on(&self, sub: &AffineSubspace) -> (Matrix, Vector, f64) {
        let w0 = self.domain.internal_coords(sub.offset());
        let w = &self.domain.basis().transpose() * sub.basis();
        let qw0 = &self.q * &w0;
        let q = &(&w.transpose() * &self.q) * &w;
        let b = &w.transpose() * &(&qw0 + &self.b);
        let c = 0.5 * w0.dot(&qw0) + self.b.dot(&w0) + self.c;
        (q, b, c)
    }

    /// `h(x) = inf_y f(x, y)` where `x` is the first `keep` coordinates.
    /// Exact partial infimization; fails with `UnboundedBelow` when the
    /// linear part has a component along a flat eliminated direction.
    pub fn partial_infimum(&self, keep: usize) -> Result<Pcqf> {
        let n = self.ambient_dim();
        if keep > n {
            return Err(Error::DimensionMismatch { expected: n, got: keep });
        }
        if self.is_infeasible() {
            return Ok(Pcqf::infeasible(keep));
        }
        let tol = DEFAULT_TOL;
        let bx = self.domain.basis().row_slice(0, keep);
        let result_domain = self.domain.project_prefix(keep, tol);

        // Free internal directions: the kernel of Bx (they move only the
        // eliminated coordinates).
        let row_space = column_space_basis(&bx.transpose(), tol);
        let n_free = orthogonal_complement(&row_space, 1e-7).expect("svd basis");

        let qn = &(&n_free.transpose() * &self.q) * &n_free;
        let gc = &n_free.transpose() * &self.b;

        // Flat free directions with a linear component ⇒ value -∞.
        let (qn_vals, qn_vecs) = sym_eig(&qn, 1e-7)?;
        let scale = (0..qn_vals.dim()).map(|i| qn_vals.get(i).abs()).fold(1.0f64, f64::max);
        let kernel_cols: Vec<usize> =
            (0..qn_vals.dim()).filter(|&i| qn_vals.get(i).abs() <= tol * scale).collect();
        for &j in &kernel_cols {
            let comp: f64 = (0..gc.dim()).map(|i| qn_vecs.get(i, j) * gc.get(i)).sum();
            if comp.abs() > tol * gc.max_abs().max(1.0) * 10.0 {
                return Err(Error::UnboundedBelow);
            }
        }
        let qn_pinv = pseudoinverse(&qn, tol);

        // Minimum-norm section of the constraint Bx z = x − px, expressed in
        // the result's internal coordinates u (x − px = B' u).
        let l = &pseudoinverse(&bx, tol) * result_domain.basis();
        let g = &(&n_free.transpose() * &self.q) * &l;

        let lqt = &l.transpose() * &self.q;
        let q_u = &(&lqt * &l) - &(&(&g.transpose() * &qn_pinv) * &g);
        let qn_gc = &qn_pinv * &gc;
        let b_u = &(&l.transpose() * &self.b) - &(&g.transpose() * &qn_gc);
        let c_u = self.c - 0.5 * gc.dot(&qn_gc);

        // Shift from u = v − B'ᵀ px to the canonical coordinates v.
        let (px, _) = self.domain.offset().split_at(keep);
        let shift = &result_domain.basis().transpose() * &px;
        let q_shift = &q_u * &shift;
        let b_v = &b_u - &q_shift;
        let c_v = c_u + 0.5 * shift.dot(&q_shift) - b_u.dot(&shift);
        Pcqf::from_internal(result_domain, q_u, b_v, c_v)
    }

    /// Global infimum as an extended real (`+∞` for the empty function,
    /// `-∞` when unbounded below).
    pub fn infimum(&self) -> ExtReal {
        match self.partial_infimum(0) {
            Ok(p) if p.is_infeasible() => ExtReal::PosInf,
            Ok(p) => ExtReal::Finite(p.c),
            Err(Error::UnboundedBelow) => ExtReal::NegInf,
            Err(e) => unreachable!("partial_infimum(0) cannot fail with {e:?}"),
        }
    }

    /// Legendre–Fenchel conjugate `f*(s) = sup_x ⟨s,x⟩ − f(x)`, in closed
    /// form: on `{s : Bᵀs − b ∈ im(Q)}`,
    /// `f*(s) = ⟨s,p⟩ − c + ½ (Bᵀs−b)ᵀ Q⁺ (Bᵀs−b)`.
    pub fn conjugate(&self) -> Result<Pcqf> {
        self.conjugate_with_tol(DEFAULT_TOL)
    }

    /// [`Pcqf::conjugate`] with a caller-chosen rank tolerance, used both for
    /// the pseudoinverse of the internal `Q` and for the kernel split that
    /// shapes the dual domain. The two must agree: dropping a singular value
    /// in one place while keeping it in the other makes the conjugate finite
    /// along directions where it should be `+inf`, or vice versa.
    pub fn conjugate_with_tol(&self, tol: f64) -> Result<Pcqf> {
        if !(tol > 0.0) {
            return Err(Error::ImproperInput(format!("rank tolerance must be positive, got {tol}")));
        }
        let q_pinv = pseudoinverse(&self.q, tol);
        self.conjugate_impl(&q_pinv, tol)
    }

    /// Conjugate computed with a caller-supplied symmetric generalized
    /// inverse `g` of the internal `Q` (any `g` with `Q g Q = Q`). The result
    /// equals [`Pcqf::conjugate`]; this exists to make that independence
    /// testable.
    pub fn conjugate_with_q_inverse(&self, g: &Matrix) -> Result<Pcqf> {
        if g.rows() != self.q.rows() || g.cols() != self.q.cols() {
            return Err(Error::DimensionMismatch { expected: self.q.rows(), got: g.rows() });
        }
        let back = &(&self.q * g) * &self.q;
        let dev = (&back - &self.q).max_abs();
        if dev > 1e-7 * self.q.max_abs().max(1.0) {
            return Err(Error::ImproperInput(format!(
                "matrix is not a generalized inverse of Q (deviation {dev:.3e})"
            )));
        }
        self.conjugate_impl(&g.symmetrized(), DEFAULT_TOL)
    }

    fn conjugate_impl(&self, q_inv: &Matrix, tol: f64) -> Result<Pcqf> {
        if self.is_infeasible() {
            return Err(Error::ImproperInput("conjugate of the constant +inf function".into()));
        }
        let n = self.ambient_dim();
        let basis = self.domain.basis();

        let (q_vals, q_vecs) = sym_eig(&self.q, 1e-7)?;
        let scale = (0..q_vals.dim()).map(|i| q_vals.get(i).abs()).fold(1.0f64, f64::max);
        let kernel_cols: Vec<usize> =
            (0..q_vals.dim()).filter(|&i| q_vals.get(i).abs() <= tol * scale).collect();
        let kernel = Matrix::from_fn(self.q.rows(), kernel_cols.len(), |i, j| q_vecs.get(i, kernel_cols[j]));

        // Dual domain: Kᵀ(Bᵀ s − b) = 0 with K spanning ker(Q).
        let constraints = (basis * &kernel).transpose();
        let rhs = &kernel.transpose() * &self.b;
        let domain = AffineSubspace::solve(&constraints, &rhs, tol);

        let q_inv_b = q_inv * &self.b;
        let s_hat = &(basis * q_inv) * &basis.transpose();
        let l_hat = self.domain.offset() - &(basis * &q_inv_b);
        let c_hat = 0.5 * self.b.dot(&q_inv_b) - self.c;
        Pcqf::restrict_ambient(&s_hat.symmetrized(), &l_hat, c_hat, &Vector::zeros(n), domain)
    }

    /// Infimal convolution `(f □ g)(x) = inf_y f(x − y) + g(y)`.
    pub fn inf_convolution(&self, other: &Pcqf) -> Result<Pcqf> {
        let n = self.ambient_dim();
        if other.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: other.ambient_dim() });
        }
        // Assemble F(x, y) = f(x − y) + g(y) on R^(2n), then eliminate y.
        let diff = Matrix::identity(n).hstack(&Matrix::identity(n).scale(-1.0));
        let proj_y = Matrix::zeros(n, n).hstack(&Matrix::identity(n));
        let f_pulled = self.affine_pullback(&diff, &Vector::zeros(n))?;
        let g_pulled = other.affine_pullback(&proj_y, &Vector::zeros(n))?;
        f_pulled.add(&g_pulled)?.partial_infimum(n)
    }

    /// Pullback `x ↦ f(Tx + t0)` along an affine map `T: R^d → R^n`.
    pub fn affine_pullback(&self, t: &Matrix, t0: &Vector) -> Result<Pcqf> {
        let n = self.ambient_dim();
        if t.rows() != n || t0.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.rows() });
        }
        let d = t.cols();
        if self.is_infeasible() {
            return Ok(Pcqf::infeasible(d));
        }
        let tol = DEFAULT_TOL;
        // Feasible x: the image point must satisfy the domain constraints.
        let (c_rows, c_rhs) = self.domain.constraint_rows(tol);
        let constraints = &c_rows * t;
        let rhs = &c_rhs - &(&c_rows * t0);
        let sub = AffineSubspace::solve(&constraints, &rhs, tol);
        if sub.is_empty() {
            return Ok(Pcqf::infeasible(d));
        }
        // Internal coordinates of the image: z(u) = z0 + M u.
        let basis = self.domain.basis();
        let image_offset = &(t * sub.offset()) + t0;
        let z0 = self.domain.internal_coords(&image_offset);
        let m = &(&basis.transpose() * t) * sub.basis();
        let qz0 = &self.q * &z0;
        let q = &(&m.transpose() * &self.q) * &m;
        let b = &m.transpose() * &(&qz0 + &self.b);
        let c = 0.5 * z0.dot(&qz0) + self.b.dot(&z0) + self.c;
        Pcqf::from_internal(sub, q, b, c)
    }

    /// Orthogonal-coordinate permutation: new coordinate `i` reads old
    /// coordinate `perm[i]` (exact, no refactorization).
    pub fn permute(&self, perm: &[usize]) -> Pcqf {
        assert_eq!(perm.len(), self.ambient_dim(), "permutation length mismatch");
        debug_assert!({
            let mut seen = vec![false; perm.len()];
            perm.iter().all(|&i| {
                let fresh = !seen[i];
                seen[i] = true;
                fresh
            })
        });
        Pcqf {
            domain: self.domain.permute(perm),
            q: self.q.clone(),
            b: self.b.clone(),
            c: self.c,
        }
    }

    /// Direct sum `(f ⊕ g)(x, y) = f(x) + g(y)` on R^(m+n) (exact).
    pub fn direct_sum(&self, other: &Pcqf) -> Pcqf {
        let ambient = self.ambient_dim() + other.ambient_dim();
        if self.is_infeasible() || other.is_infeasible() {
            return Pcqf::infeasible(ambient);
        }
        Pcqf {
            domain: self.domain.direct_sum(&other.domain),
            q: self.q.block_diag(&other.q),
            b: self.b.concat(&other.b),
            c: self.c + other.c,
        }
    }

    /// Semantic equality within `tol`: same domain (projector and canonical
    /// offset) and the same ambient quadratic data after rebasing both to a
    /// common offset. Independent of internal basis choices.
    pub fn equal_within(&self, other: &Pcqf, tol: f64) -> bool {
        if self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        if self.is_infeasible() || other.is_infeasible() {
            return self.is_infeasible() == other.is_infeasible();
        }
        if !self.domain.approx_eq(&other.domain, tol) {
            return false;
        }
        let (s_f, l_f, c_f, p_f) = self.ambient_form();
        let (s_g, l_g, c_g, p_g) = other.ambient_form();
        let delta = &p_f - &p_g;
        if (&s_f - &s_g).max_abs() > tol {
            return false;
        }
        // rebase g's expansion from p_g to p_f
        let s_g_delta = &s_g * &delta;
        let l_g_at_f = &s_g_delta + &l_g;
        if (&l_f - &l_g_at_f).max_abs() > tol {
            return false;
        }
        let c_g_at_f = 0.5 * delta.dot(&s_g_delta) + l_g.dot(&delta) + c_g;
        (c_f - c_g_at_f).abs() <= tol
    }
}

/// Curvature flip of the Legendre transform on elementary coefficients:
/// `0 ↦ +∞`, `+∞ ↦ 0`, `λ ↦ 1/λ`. Negative curvature is rejected.
pub fn lambda_star(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::NegativeCurvature(lambda));
    }
    if lambda == 0.0 {
        Ok(f64::INFINITY)
    } else if lambda == f64::INFINITY {
        Ok(0.0)
    } else {
        Ok(1.0 / lambda)
    }
}

/// A pcqf written as `f(x) = h(Rᵀ(x − t)) + ⟨s, x − t⟩ + κ` with `h`
/// elementary (`h(y) = ½ Σ λᵢ yᵢ²`, `λᵢ ∈ [0, +∞]`) and `R` orthogonal.
/// Conjugation acts on this data by flipping each `λᵢ` and swapping the
/// roles of the shift `t` and the linear tilt `s`.
#[derive(Debug, Clone)]
pub struct ElementaryForm {
    pub rotation: Matrix,
    pub shift: Vector,
    pub linear: Vector,
    pub constant: f64,
    pub lambdas: Vec<f64>,
}

impl ElementaryForm {
    pub fn conjugate(&self) -> Result<ElementaryForm> {
        let flipped: Result<Vec<f64>> = self.lambdas.iter().map(|&l| lambda_star(l)).collect();
        Ok(ElementaryForm {
            rotation: self.rotation.clone(),
            shift: self.linear.clone(),
            linear: self.shift.clone(),
            constant: self.shift.dot(&self.linear) - self.constant,
            lambdas: flipped?,
        })
    }

    pub fn to_pcqf(&self) -> Result<Pcqf> {
        let h = Pcqf::elementary(&self.lambdas)?;
        let r_t = self.rotation.transpose();
        let t0 = (&r_t * &self.shift).scale(-1.0);
        let pulled = h.affine_pullback(&r_t, &t0)?;
        Ok(pulled.add_affine(&self.linear, self.constant - self.linear.dot(&self.shift)))
    }
}

impl Pcqf {
    /// Diagonalizes into [`ElementaryForm`]. Fails on the `+∞` function.
    pub fn elementary_form(&self) -> Result<ElementaryForm> {
        if self.is_infeasible() {
            return Err(Error::ImproperInput("elementary form of the constant +inf function".into()));
        }
        let tol = DEFAULT_TOL;
        let (vals, vecs) = sym_eig(&self.q, 1e-7)?;
        let k = vals.dim();
        let scale = (0..k).map(|i| vals.get(i).abs()).fold(1.0f64, f64::max);
        let bv = self.domain.basis() * &vecs;
        let bc = self.domain.complement_basis(tol);
        let rotation = bv.hstack(&bc);

        let w = &vecs.transpose() * &self.b;
        let mut lambdas = Vec::with_capacity(self.ambient_dim());
        let mut delta = Vector::zeros(k);
        let mut tilt = Vector::zeros(k); // zero-curvature linear components
        let mut constant = self.c;
        for i in 0..k {
            let l = vals.get(i);
            if l > tol * scale {
                lambdas.push(l);
                delta.set(i, -w.get(i) / l);
                constant -= w.get(i) * w.get(i) / (2.0 * l);
            } else {
                lambdas.push(0.0);
                tilt.set(i, w.get(i));
            }
        }
        for _ in k..self.ambient_dim() {
            lambdas.push(f64::INFINITY);
        }
        let shift = self.domain.offset() + &(&bv * &delta);
        let linear = &bv * &tilt;
        Ok(ElementaryForm { rotation, shift, linear, constant, lambdas })
    }
}
