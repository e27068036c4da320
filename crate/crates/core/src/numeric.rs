//! Dense row-major matrices and the small linear-algebra toolbox everything
//! else is built on: symmetric eigendecomposition, rank-revealing column
//! bases, orthogonal complements, and the Moore–Penrose pseudoinverse.
//!
//! Rank decisions are relative: a singular value (or eigenvalue magnitude)
//! counts as nonzero when it exceeds `tol * max_magnitude`. One tolerance
//! therefore yields consistent rank decisions across all operations here.
//!
//! Decompositions are delegated to nalgebra; this module owns the tolerance
//! conventions, the deterministic sign fixes, and the degenerate shapes
//! (matrices with zero rows or columns are first-class citizens, since the
//! zero-dimensional space shows up as the monoidal unit upstream).

use nalgebra::DMatrix;

use crate::error::Error;

/// Dense matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense vector of finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries. Panics if `data.len() != rows * cols`
    /// or an entry is non-finite; file ingestion validates before calling this.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        assert!(data.iter().all(|x| x.is_finite()), "matrix entries must be finite");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, a: f64) -> Matrix {
        Matrix::new(self.rows, self.cols, self.data.iter().map(|x| x * a).collect())
    }

    pub fn col(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Stacks `self` and `other` side by side.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        })
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                0.0
            }
        })
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn row_slice(&self, lo: usize, hi: usize) -> Matrix {
        assert!(lo <= hi && hi <= self.rows);
        Matrix::from_fn(hi - lo, self.cols, |i, j| self.get(lo + i, j))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(M + Mᵀ)/2`; quadratic forms only see the symmetric part.
    pub fn symmetrized(&self) -> Matrix {
        assert!(self.is_square());
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub(crate) fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Vector {
    /// Panics on non-finite entries; file ingestion validates first.
    pub fn new(data: Vec<f64>) -> Self {
        assert!(data.iter().all(|x| x.is_finite()), "vector entries must be finite");
        Vector { data }
    }

    pub fn zeros(n: usize) -> Self {
        Vector { data: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.data[i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, a: f64) -> Vector {
        Vector::new(self.data.iter().map(|x| x * a).collect())
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Vector::new(data)
    }

    /// Splits into the first `m` entries and the rest.
    pub fn split_at(&self, m: usize) -> (Vector, Vector) {
        assert!(m <= self.dim());
        (Vector::new(self.data[..m].to_vec()), Vector::new(self.data[m..].to_vec()))
    }

}

impl std::ops::Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
        })
    }
}

impl std::ops::Mul<&Vector> for &Matrix {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        assert_eq!(self.cols, rhs.dim(), "matvec dimension mismatch");
        Vector::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|k| self.get(i, k) * rhs.get(k)).sum())
                .collect(),
        )
    }
}

impl std::ops::Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix add shape mismatch");
        Matrix::new(self.rows, self.cols, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sub shape mismatch");
        Matrix::new(self.rows, self.cols, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector add dimension mismatch");
        Vector::new(self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector sub dimension mismatch");
        Vector::new(self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

/// Flips each column's sign so its largest-magnitude entry is positive.
/// Makes eigen/singular bases reproducible across construction routes.
fn fix_column_signs(m: &mut Matrix) {
    for j in 0..m.cols() {
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        for i in 0..m.rows() {
            let a = m.get(i, j).abs();
            if a > best_abs + 1e-13 {
                best_abs = a;
                best = i;
            }
        }
        if best_abs > 0.0 && m.get(best, j) < 0.0 {
            for i in 0..m.rows() {
                let v = m.get(i, j);
                m.set(i, j, -v);
            }
        }
    }
}

/// Eigendecomposition of a symmetric matrix: `m = V diag(λ) Vᵀ` with
/// eigenvalues sorted descending and orthonormal `V` (column signs fixed).
///
/// Fails with [`Error::NotSymmetric`] when the asymmetry exceeds `tol`
/// relative to the magnitude of the entries.
pub fn sym_eig(m: &Matrix, tol: f64) -> Result<(Vector, Matrix), Error> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    let scale = m.max_abs().max(1.0);
    let asym = m.max_asymmetry();
    if asym > tol * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let n = m.rows();
    if n == 0 {
        return Ok((Vector::zeros(0), Matrix::zeros(0, 0)));
    }
    let sym = m.symmetrized();
    let eig = nalgebra::SymmetricEigen::new(sym.to_na());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values = Vector::new(order.iter().map(|&i| eig.eigenvalues[i]).collect());
    let mut vectors = Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    fix_column_signs(&mut vectors);
    Ok((values, vectors))
}

/// Thin singular value decomposition `m = U Σ Vᵀ` by one-sided Jacobi
/// (Hestenes) rotations: the columns of a working copy are rotated pairwise
/// until mutually orthogonal, which keeps the returned factors orthonormal to
/// machine precision regardless of conditioning. Returns `(u, σ, v)` with σ
/// sorted descending; columns whose singular value is exactly zero carry a
/// zero column in `u`.
fn jacobi_svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    if m.rows() < m.cols() {
        let (u, s, v) = jacobi_svd(&m.transpose());
        return (v, s, u);
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| m.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<f64>> =
        (0..cols).map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..rows {
                    alpha += w[p][i] * w[p][i];
                    beta += w[q][i] * w[q][i];
                    gamma += w[p][i] * w[q][i];
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for i in 0..cols {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| w[j].iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Matrix::from_fn(rows, cols, |i, j| {
        let col = order[j];
        if norms[col] > 0.0 { w[col][i] / norms[col] } else { 0.0 }
    });
    let v_out = Matrix::from_fn(cols, cols, |i, j| v[order[j]][i]);
    (u, sigma, v_out)
}

/// Orthonormal basis of the column space of `m`, as matrix columns.
/// Singular values at or below `tol * max(σ_max, 1)` are treated as zero, so
/// the number of returned columns is the numerical rank. The floor at 1 keeps
/// the cutoff absolute for small-scale matrices: a matrix whose entries are
/// all round-off dust has rank zero rather than a spurious full rank.
pub fn column_space_basis(m: &Matrix, tol: f64) -> Matrix {
    if m.rows() == 0 || m.cols() == 0 {
        return Matrix::zeros(m.rows(), 0);
    }
    let (u, sigma, _) = jacobi_svd(m);
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = tol * smax.max(1.0);
    let kept: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > cutoff).collect();
    let mut basis = Matrix::from_fn(m.rows(), kept.len(), |i, j| u.get(i, kept[j]));
    fix_column_signs(&mut basis);
    basis
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in the
/// ambient space `R^rows`. The input must itself have orthonormal columns.
pub fn orthogonal_complement(basis: &Matrix, tol: f64) -> Result<Matrix, Error> {
    let n = basis.rows();
    let k = basis.cols();
    let gram = &basis.transpose() * basis;
    let dev = (&gram - &Matrix::identity(k)).max_abs();
    if dev > tol.max(1e-12) {
        return Err(Error::NotOrthonormal { deviation: dev });
    }
    if k == 0 {
        return Ok(Matrix::identity(n));
    }
    if k >= n {
        return Ok(Matrix::zeros(n, 0));
    }
    // Complement = eigenspace of (I - BBᵀ) at eigenvalue 1; the spectrum is
    // exactly {0, 1}, so the 1/2 threshold is safe at any sensible tolerance.
    let projector = &Matrix::identity(n) - &(basis * &basis.transpose());
    let (values, vectors) = sym_eig(&projector, 1e-6)?;
    let kept: Vec<usize> = (0..n).filter(|&i| values.get(i) > 0.5).collect();
    let mut out = Matrix::from_fn(n, kept.len(), |i, j| vectors.get(i, kept[j]));
    fix_column_signs(&mut out);
    Ok(out)
}

/// Moore–Penrose pseudoinverse, inverting singular values above
/// `tol * max(σ_max, 1)` and zeroing the rest. The floor keeps the rank
/// decision aligned with [`column_space_basis`] and with kernel tests made on
/// eigenvalues: a matrix of round-off dust inverts to zero instead of blowing
/// up by the reciprocal of the dust.
pub fn pseudoinverse(m: &Matrix, tol: f64) -> Matrix {
    if m.rows() == 0 || m.cols() == 0 {
        return Matrix::zeros(m.cols(), m.rows());
    }
    let (u, sigma, v) = jacobi_svd(m);
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = tol * smax.max(1.0);
    // M⁺ = V Σ⁺ Uᵀ
    Matrix::from_fn(m.cols(), m.rows(), |i, j| {
        (0..sigma.len())
            .filter(|&k| sigma[k] > cutoff)
            .map(|k| v.get(i, k) * u.get(j, k) / sigma[k])
            .sum()
    })
}

/// Minimum-norm least-squares solution of `A x = rhs`, together with the
/// residual `max |A x - rhs|`.
pub fn lstsq_min_norm(a: &Matrix, rhs: &Vector, tol: f64) -> (Vector, f64) {
    assert_eq!(a.rows(), rhs.dim(), "lstsq shape mismatch");
    let x = &pseudoinverse(a, tol) * rhs;
    let residual = (&(a * &x) - rhs).max_abs();
    (x, residual)
}

/// Whether a symmetric matrix is positive semidefinite: min eigenvalue ≥ −tol.
pub fn is_psd(m: &Matrix, tol: f64) -> Result<bool, Error> {
    let (values, _) = sym_eig(m, tol.max(1e-9))?;
    let min = (0..values.dim()).map(|i| values.get(i)).fold(f64::INFINITY, f64::min);
    Ok(values.dim() == 0 || min >= -tol)
}

/// Symmetrizes and clamps slightly-negative eigenvalues of a nominally PSD
/// matrix to zero. Eigenvalues below `-tol * max(1, |λ|_max)` are a real
/// convexity violation and are reported through `on_violation`.
pub fn psd_project(m: &Matrix, tol: f64, on_violation: impl Fn(f64) -> Error) -> Result<Matrix, Error> {
    let (values, vectors) = sym_eig(&m.symmetrized(), 1e-6)?;
    let scale = (0..values.dim()).map(|i| values.get(i).abs()).fold(1.0f64, f64::max);
    let mut clamped = values.clone();
    for i in 0..values.dim() {
        let v = values.get(i);
        if v < -tol * scale {
            return Err(on_violation(v));
        }
        if v < 0.0 {
            clamped.set(i, 0.0);
        }
    }
    let lam = Matrix::diagonal(clamped.as_slice());
    Ok((&(&vectors * &lam) * &vectors.transpose()).symmetrized())
}
