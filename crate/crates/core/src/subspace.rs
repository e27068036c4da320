//! Affine subspaces of R^n in canonical form: an orthonormal direction basis
//! `B` plus an offset `p` orthogonal to the directions, so `M = {p + Bz}`.
//! The canonical offset is the minimum-norm point of `M`, which makes
//! equality a projector-plus-offset comparison independent of how the
//! subspace was produced. An empty subspace is a first-class value.

use crate::error::{Error, Result};
use crate::numeric::{
    column_space_basis, lstsq_min_norm, orthogonal_complement, Matrix, Vector,
};

#[derive(Debug, Clone)]
pub struct AffineSubspace {
    ambient: usize,
    empty: bool,
    basis: Matrix,  // ambient × k, orthonormal columns
    offset: Vector, // orthogonal to span(basis)
}

impl AffineSubspace {
    pub fn full(n: usize) -> Self {
        AffineSubspace { ambient: n, empty: false, basis: Matrix::identity(n), offset: Vector::zeros(n) }
    }

    pub fn point(p: &Vector) -> Self {
        AffineSubspace {
            ambient: p.dim(),
            empty: false,
            basis: Matrix::zeros(p.dim(), 0),
            offset: p.clone(),
        }
    }

    pub fn empty(n: usize) -> Self {
        AffineSubspace { ambient: n, empty: true, basis: Matrix::zeros(n, 0), offset: Vector::zeros(n) }
    }

    /// Subspace spanned by the columns of `span` (any spanning set), shifted
    /// by `offset`. The stored offset is re-canonicalized.
    pub fn from_span_offset(span: &Matrix, offset: &Vector, tol: f64) -> Self {
        assert_eq!(span.rows(), offset.dim(), "span/offset ambient mismatch");
        let basis = column_space_basis(span, tol);
        Self::from_orthonormal(basis, offset)
    }

    /// `basis` must already be orthonormal; the offset is canonicalized here.
    pub(crate) fn from_orthonormal(basis: Matrix, offset: &Vector) -> Self {
        let coords = &basis.transpose() * offset;
        let canonical = offset - &(&basis * &coords);
        AffineSubspace { ambient: basis.rows(), empty: false, basis, offset: canonical }
    }

    /// Solution set of `C x = d`, or the empty subspace when the system is
    /// inconsistent at tolerance `tol`.
    pub fn solve(c: &Matrix, d: &Vector, tol: f64) -> Self {
        let n = c.cols();
        assert_eq!(c.rows(), d.dim(), "constraint rhs dimension mismatch");
        if c.rows() == 0 {
            return AffineSubspace::full(n);
        }
        let (x0, residual) = lstsq_min_norm(c, d, tol);
        let scale = d.max_abs().max(1.0);
        if residual > tol.max(1e-12) * scale * 10.0 {
            return AffineSubspace::empty(n);
        }
        let row_space = column_space_basis(&c.transpose(), tol);
        let basis = orthogonal_complement(&row_space, 1e-7).expect("svd basis is orthonormal");
        Self::from_orthonormal(basis, &x0)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the direction space (0 for a point; undefined-as-0 when empty).
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    pub fn is_full(&self, tol: f64) -> bool {
        !self.empty && self.dim() == self.ambient && self.offset.max_abs() <= tol
    }

    /// `B Bᵀ`, the orthogonal projector onto the direction space.
    pub fn projector(&self) -> Matrix {
        &self.basis * &self.basis.transpose()
    }

    pub fn complement_basis(&self, tol: f64) -> Matrix {
        orthogonal_complement(&self.basis, tol.max(1e-7)).expect("stored basis is orthonormal")
    }

    /// Internal coordinates of `x` relative to the offset: `Bᵀ(x − p)`.
    pub fn internal_coords(&self, x: &Vector) -> Vector {
        &self.basis.transpose() * &(x - &self.offset)
    }

    /// The point `p + B z`.
    pub fn point_at(&self, z: &Vector) -> Vector {
        &self.offset + &(&self.basis * z)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        if self.empty || x.dim() != self.ambient {
            return false;
        }
        let rel = x - &self.offset;
        let residual = &rel - &(&self.basis * &(&self.basis.transpose() * &rel));
        residual.max_abs() <= tol * rel.max_abs().max(1.0)
    }

    /// Intersection, computed by stacking both subspaces' complement
    /// constraints and re-solving.
    pub fn intersect(&self, other: &AffineSubspace, tol: f64) -> AffineSubspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in intersection");
        if self.empty || other.empty {
            return AffineSubspace::empty(self.ambient);
        }
        let (c1, d1) = self.constraint_rows(tol);
        let (c2, d2) = other.constraint_rows(tol);
        let c = c1.vstack(&c2);
        let d = d1.concat(&d2);
        AffineSubspace::solve(&c, &d, tol)
    }

    /// Constraint description `C x = d` with orthonormal rows: `C` is the
    /// complement basis transposed.
    pub fn constraint_rows(&self, tol: f64) -> (Matrix, Vector) {
        assert!(!self.empty, "empty subspace has no constraint description");
        let complement = self.complement_basis(tol);
        let c = complement.transpose();
        let d = &c * &self.offset;
        (c, d)
    }

    /// Orthogonal projection of the subspace onto the first `m` coordinates.
    pub fn project_prefix(&self, m: usize, tol: f64) -> AffineSubspace {
        assert!(m <= self.ambient);
        if self.empty {
            return AffineSubspace::empty(m);
        }
        let top = self.basis.row_slice(0, m);
        let basis = column_space_basis(&top, tol);
        let (px, _) = self.offset.split_at(m);
        AffineSubspace::from_orthonormal(basis, &px)
    }

    /// Coordinate permutation: new coordinate `i` reads old coordinate
    /// `perm[i]`. Preserves canonicity exactly.
    pub fn permute(&self, perm: &[usize]) -> AffineSubspace {
        assert_eq!(perm.len(), self.ambient, "permutation length mismatch");
        if self.empty {
            return AffineSubspace::empty(self.ambient);
        }
        let basis = Matrix::from_fn(self.ambient, self.basis.cols(), |i, j| self.basis.get(perm[i], j));
        let offset = Vector::new(perm.iter().map(|&i| self.offset.get(i)).collect());
        AffineSubspace { ambient: self.ambient, empty: false, basis, offset }
    }

    /// Product subspace in R^(m+n) with block-diagonal directions.
    pub fn direct_sum(&self, other: &AffineSubspace) -> AffineSubspace {
        let ambient = self.ambient + other.ambient;
        if self.empty || other.empty {
            return AffineSubspace::empty(ambient);
        }
        AffineSubspace {
            ambient,
            empty: false,
            basis: self.basis.block_diag(&other.basis),
            offset: self.offset.concat(&other.offset),
        }
    }

    /// Representation-independent equality: projectors and canonical offsets
    /// agree within `tol`.
    pub fn approx_eq(&self, other: &AffineSubspace, tol: f64) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        if self.empty || other.empty {
            return self.empty == other.empty;
        }
        (&self.projector() - &other.projector()).max_abs() <= tol
            && (&self.offset - &other.offset).max_abs() <= tol
    }
}

/// Validation for externally supplied bases (deserialization path).
pub fn validated_subspace(basis: Matrix, offset: &Vector, tol: f64) -> Result<AffineSubspace> {
    if basis.rows() != offset.dim() {
        return Err(Error::DimensionMismatch { expected: basis.rows(), got: offset.dim() });
    }
    let gram = &basis.transpose() * &basis;
    let dev = (&gram - &Matrix::identity(basis.cols())).max_abs();
    if dev > tol.max(1e-9) * 10.0 {
        return Err(Error::NotOrthonormal { deviation: dev });
    }
    Ok(AffineSubspace::from_orthonormal(basis, offset))
}
