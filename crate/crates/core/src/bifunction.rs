//! Directed quadratic bifunctions.
//!
//! A bifunction `F: m → n` assigns an extended-real value to every pair
//! (input, output) in R^m × R^n. Convex bifunctions compose by infimizing
//! over the middle variable, concave ones by supremizing. Both polarities
//! are carried by one representation: a concave bifunction stores the
//! negation of its value as a [`Pcqf`] graph, so a single convex kernel
//! serves both sides (sup-composition is negate, inf-compose, negate).
//!
//! The adjoint sends convex `F` to the concave `F*` with
//! `F*(y*, x*) = −P*(−x*, y*)` where `P` is the graph of `F`, and dually.
//! It reverses composition, is involutive on this class (the graphs are
//! closed), and exchanges the two hypergraph structures: the diagonal
//! (copy/compare) family maps to the additive (add/zero) family.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::numeric::{Matrix, Vector};
use crate::pcqf::Pcqf;
use crate::subspace::AffineSubspace;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Convex,
    Concave,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Convex => Polarity::Concave,
            Polarity::Concave => Polarity::Convex,
        }
    }
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarity::Convex => write!(f, "convex"),
            Polarity::Concave => write!(f, "concave"),
        }
    }
}

/// The eight hypergraph generators: the diagonal family (copy, compare,
/// discard, unit) and the additive family (add, coadd, zero, cozero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Copy,
    Compare,
    Discard,
    Unit,
    Add,
    Coadd,
    Zero,
    Cozero,
}

#[derive(Debug, Clone)]
pub struct QuadBifunction {
    src_dim: usize,
    dst_dim: usize,
    /// Graph function on R^(src+dst), inputs first. For the concave
    /// polarity this stores the negated value.
    graph: Pcqf,
    polarity: Polarity,
}

impl QuadBifunction {
    /// Wraps a graph pcqf as a bifunction; `graph` lives on R^(src+dst)
    /// with the input coordinates first. For the concave polarity the graph
    /// is the negation of the intended value.
    pub fn from_graph(src_dim: usize, dst_dim: usize, graph: Pcqf, polarity: Polarity) -> Result<Self> {
        if graph.ambient_dim() != src_dim + dst_dim {
            return Err(Error::DimensionMismatch { expected: src_dim + dst_dim, got: graph.ambient_dim() });
        }
        Ok(QuadBifunction { src_dim, dst_dim, graph, polarity })
    }

    /// `⟦y = x⟧ : n → n`.
    pub fn identity(n: usize) -> Self {
        QuadBifunction::from_linear_map(&Matrix::identity(n))
    }

    /// A function `f` viewed as a state `0 → n` (no input).
    pub fn from_pcqf_state(f: Pcqf, polarity: Polarity) -> Self {
        let n = f.ambient_dim();
        QuadBifunction { src_dim: 0, dst_dim: n, graph: f, polarity }
    }

    /// A function `f` viewed as an effect `n → 0` (no output).
    pub fn from_pcqf_effect(f: Pcqf, polarity: Polarity) -> Self {
        let n = f.ambient_dim();
        QuadBifunction { src_dim: n, dst_dim: 0, graph: f, polarity }
    }

    /// The indicator bifunction `⟦y = Ax⟧ : m → n` of a linear map
    /// `A: R^m → R^n` (given as an n×m matrix).
    pub fn from_linear_map(a: &Matrix) -> Self {
        let (n, m) = (a.rows(), a.cols());
        let span = Matrix::identity(m).vstack(a);
        let sub = AffineSubspace::from_span_offset(&span, &Vector::zeros(m + n), DEFAULT_TOL);
        QuadBifunction { src_dim: m, dst_dim: n, graph: Pcqf::indicator(sub), polarity: Polarity::Convex }
    }

    /// The indicator bifunction of a linear relation `R ⊆ R^m × R^n`, given
    /// by a matrix whose columns span it (inputs stacked over outputs).
    pub fn from_linear_relation(src_dim: usize, dst_dim: usize, span: &Matrix) -> Result<Self> {
        if span.rows() != src_dim + dst_dim {
            return Err(Error::DimensionMismatch { expected: src_dim + dst_dim, got: span.rows() });
        }
        let sub = AffineSubspace::from_span_offset(span, &Vector::zeros(src_dim + dst_dim), DEFAULT_TOL);
        Ok(QuadBifunction { src_dim, dst_dim, graph: Pcqf::indicator(sub), polarity: Polarity::Convex })
    }

    /// Hypergraph generators over R^n, convex polarity. Concave variants are
    /// obtained with [`QuadBifunction::negated`].
    pub fn generator(kind: GeneratorKind, n: usize) -> Self {
        use GeneratorKind::*;
        let e = Matrix::identity(n);
        let zero_block = Matrix::zeros(n, n);
        match kind {
            // {(x, x, x)} as n → 2n
            Copy => {
                let span = e.vstack(&e).vstack(&e);
                QuadBifunction::relation_generator(n, 2 * n, &span)
            }
            // {(x, x, x)} as 2n → n
            Compare => {
                let span = e.vstack(&e).vstack(&e);
                QuadBifunction::relation_generator(2 * n, n, &span)
            }
            // constant 0 on R^n, no output
            Discard => QuadBifunction::from_pcqf_effect(Pcqf::constant(n, 0.0), Polarity::Convex),
            // constant 0 on R^n, no input
            Unit => QuadBifunction::from_pcqf_state(Pcqf::constant(n, 0.0), Polarity::Convex),
            // {(x, y, x + y)} as 2n → n
            Add => {
                let span = e.vstack(&zero_block).vstack(&e).hstack(&zero_block.vstack(&e).vstack(&e));
                QuadBifunction::relation_generator(2 * n, n, &span)
            }
            // {(x + y, x, y)} as n → 2n
            Coadd => {
                let span = e.vstack(&e).vstack(&zero_block).hstack(&e.vstack(&zero_block).vstack(&e));
                QuadBifunction::relation_generator(n, 2 * n, &span)
            }
            // ⟦x = 0⟧, no input
            Zero => QuadBifunction::from_pcqf_state(Pcqf::point_indicator(&Vector::zeros(n)), Polarity::Convex),
            // ⟦x = 0⟧, no output
            Cozero => QuadBifunction::from_pcqf_effect(Pcqf::point_indicator(&Vector::zeros(n)), Polarity::Convex),
        }
    }

    fn relation_generator(src: usize, dst: usize, span: &Matrix) -> Self {
        QuadBifunction::from_linear_relation(src, dst, span).expect("generator span has the right height")
    }

    pub fn src_dim(&self) -> usize {
        self.src_dim
    }

    pub fn dst_dim(&self) -> usize {
        self.dst_dim
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    /// The stored graph pcqf (the negated value for concave polarity).
    pub fn graph(&self) -> &Pcqf {
        &self.graph
    }

    /// Pointwise negation: flips the polarity flag and nothing else, since
    /// the concave side already stores the negated value.
    pub fn negated(&self) -> Self {
        QuadBifunction { polarity: self.polarity.flipped(), ..self.clone() }
    }

    /// Value at (input, output); `-∞`/`+∞` signal the improper region of the
    /// respective polarity.
    pub fn evaluate(&self, input: &Vector, output: &Vector) -> Result<ExtReal> {
        if input.dim() != self.src_dim {
            return Err(Error::DimensionMismatch { expected: self.src_dim, got: input.dim() });
        }
        if output.dim() != self.dst_dim {
            return Err(Error::DimensionMismatch { expected: self.dst_dim, got: output.dim() });
        }
        let stored = self.graph.evaluate(&input.concat(output))?;
        Ok(match self.polarity {
            Polarity::Convex => stored,
            Polarity::Concave => stored.neg(),
        })
    }

    /// For a scalar (`0 → 0`) bifunction, its single value.
    pub fn scalar_value(&self) -> Result<ExtReal> {
        if self.src_dim != 0 || self.dst_dim != 0 {
            return Err(Error::DimensionMismatch { expected: 0, got: self.src_dim + self.dst_dim });
        }
        self.evaluate(&Vector::zeros(0), &Vector::zeros(0))
    }

    /// Sequential composition `self ∘ other` (other feeds self): convex
    /// bifunctions infimize over the middle variable, concave ones
    /// supremize. An unbounded middle variable is an improper composite and
    /// fails with `UnboundedBelow` / `UnboundedAbove` by polarity.
    pub fn compose(&self, other: &QuadBifunction) -> Result<QuadBifunction> {
        if self.polarity != other.polarity {
            return Err(Error::PolarityMismatch(format!(
                "cannot compose {} with {}",
                self.polarity, other.polarity
            )));
        }
        if other.dst_dim != self.src_dim {
            return Err(Error::DimensionMismatch { expected: self.src_dim, got: other.dst_dim });
        }
        let (m, n, k) = (other.src_dim, other.dst_dim, self.dst_dim);
        // Assemble G(x,y) + F(y,z) on (x, y, z), reorder to (x, z, y), and
        // infimize out the middle block. The stored graphs of a concave pair
        // are negated values, so the same assembly computes their
        // sup-composition.
        let g_ext = other.graph.direct_sum(&Pcqf::constant(k, 0.0));
        let f_ext = Pcqf::constant(m, 0.0).direct_sum(&self.graph);
        let total = g_ext.add(&f_ext)?;
        let perm: Vec<usize> = (0..m).chain(m + n..m + n + k).chain(m..m + n).collect();
        let reordered = total.permute(&perm);
        let graph = reordered.partial_infimum(m + k).map_err(|e| match (e, self.polarity) {
            (Error::UnboundedBelow, Polarity::Concave) => Error::UnboundedAbove,
            (e, _) => e,
        })?;
        Ok(QuadBifunction { src_dim: m, dst_dim: k, graph, polarity: self.polarity })
    }

    /// Parallel composition: `(F ⊗ G)((x₁,x₂),(y₁,y₂)) = F(x₁,y₁) + G(x₂,y₂)`.
    pub fn tensor(&self, other: &QuadBifunction) -> Result<QuadBifunction> {
        if self.polarity != other.polarity {
            return Err(Error::PolarityMismatch(format!(
                "cannot tensor {} with {}",
                self.polarity, other.polarity
            )));
        }
        let (m1, n1) = (self.src_dim, self.dst_dim);
        let (m2, n2) = (other.src_dim, other.dst_dim);
        // direct sum lives on (x₁, y₁, x₂, y₂); interleave to (x₁, x₂, y₁, y₂)
        let stacked = self.graph.direct_sum(&other.graph);
        let perm: Vec<usize> = (0..m1)
            .chain(m1 + n1..m1 + n1 + m2)
            .chain(m1..m1 + n1)
            .chain(m1 + n1 + m2..m1 + n1 + m2 + n2)
            .collect();
        Ok(QuadBifunction {
            src_dim: m1 + m2,
            dst_dim: n1 + n2,
            graph: stacked.permute(&perm),
            polarity: self.polarity,
        })
    }

    /// Argument reversal `F†(y, x) = F(x, y)`, same polarity.
    pub fn dagger(&self) -> QuadBifunction {
        let (m, n) = (self.src_dim, self.dst_dim);
        let perm: Vec<usize> = (m..m + n).chain(0..m).collect();
        QuadBifunction {
            src_dim: n,
            dst_dim: m,
            graph: self.graph.permute(&perm),
            polarity: self.polarity,
        }
    }

    /// Relational inverse `F_*(y, x) = −F(x, y)`: argument swap plus
    /// polarity flip, no conjugation. The stored graph is the dagger's.
    pub fn inverse(&self) -> QuadBifunction {
        self.dagger().negated()
    }

    /// The adjoint bifunction, opposite polarity, reversed direction.
    ///
    /// For convex `F: m → n` the concave adjoint has value
    /// `F*(y*, x*) = −P*(−x*, y*)` with `P` the graph of `F`; the stored
    /// graph is therefore `P*` pulled back along the signed swap
    /// `(y*, x*) ↦ (−x*, y*)`. The concave-to-convex direction inverts
    /// that recipe, so `adjoint(adjoint(F)) = F` exactly.
    pub fn adjoint(&self) -> Result<QuadBifunction> {
        let (m, n) = (self.src_dim, self.dst_dim);
        let conj = self.graph.conjugate()?;
        let twist = match self.polarity {
            // (y*, x*) ↦ (−x*, y*): R^(n+m) → R^(m+n)
            Polarity::Convex => {
                let top = Matrix::zeros(m, n).hstack(&Matrix::identity(m).scale(-1.0));
                let bottom = Matrix::identity(n).hstack(&Matrix::zeros(n, m));
                top.vstack(&bottom)
            }
            // (x, y) ↦ (y, −x): R^(n+m) → R^(m+n)
            Polarity::Concave => {
                let top = Matrix::zeros(m, n).hstack(&Matrix::identity(m));
                let bottom = Matrix::identity(n).scale(-1.0).hstack(&Matrix::zeros(n, m));
                top.vstack(&bottom)
            }
        };
        let graph = conj.affine_pullback(&twist, &Vector::zeros(m + n))?;
        Ok(QuadBifunction { src_dim: n, dst_dim: m, graph, polarity: self.polarity.flipped() })
    }

    /// Discards the output: `p(x) = inf_y F(x, y)` for convex `F` (sup for
    /// concave), as an effect `m → 0`. Fails when the infimum is improper.
    pub fn perturbation(&self) -> Result<QuadBifunction> {
        let mut d = QuadBifunction::generator(GeneratorKind::Discard, self.dst_dim);
        if self.polarity == Polarity::Concave {
            d = d.negated();
        }
        d.compose(self)
    }

    /// Whether discarding the output of `F` is the same as discarding the
    /// input: convexly, `inf_y F(x, y) = 0` for every x; concavely, the
    /// value at input 0 is the (concave) indicator of output 0. An
    /// unbounded infimum counts as not discardable.
    pub fn is_discardable(&self, tol: f64) -> bool {
        match self.polarity {
            Polarity::Convex => match self.graph.partial_infimum(self.src_dim) {
                Ok(p) => p.equal_within(&Pcqf::constant(self.src_dim, 0.0), tol),
                Err(_) => false,
            },
            Polarity::Concave => {
                let t = Matrix::zeros(self.src_dim, self.dst_dim).vstack(&Matrix::identity(self.dst_dim));
                match self.graph.affine_pullback(&t, &Vector::zeros(self.src_dim + self.dst_dim)) {
                    Ok(at_zero) => {
                        at_zero.equal_within(&Pcqf::point_indicator(&Vector::zeros(self.dst_dim)), tol)
                    }
                    Err(_) => false,
                }
            }
        }
    }

    /// The mirror notion in the additive structure, which is where the
    /// Gaussian readings land: convexly, the value at output 0 is the
    /// indicator of input 0; concavely, the supremum over the input slot is
    /// identically zero (densities peak at 0 after dropping the
    /// normalization constant). An unbounded extremum counts as false.
    pub fn is_co_discardable(&self, tol: f64) -> bool {
        match self.polarity {
            Polarity::Convex => {
                let t = Matrix::identity(self.src_dim).vstack(&Matrix::zeros(self.dst_dim, self.src_dim));
                match self.graph.affine_pullback(&t, &Vector::zeros(self.src_dim + self.dst_dim)) {
                    Ok(at_zero) => {
                        at_zero.equal_within(&Pcqf::point_indicator(&Vector::zeros(self.src_dim)), tol)
                    }
                    Err(_) => false,
                }
            }
            Polarity::Concave => {
                let perm: Vec<usize> =
                    (self.src_dim..self.src_dim + self.dst_dim).chain(0..self.src_dim).collect();
                let swapped = self.graph.permute(&perm);
                match swapped.partial_infimum(self.dst_dim) {
                    Ok(p) => p.equal_within(&Pcqf::constant(self.dst_dim, 0.0), tol),
                    Err(_) => false,
                }
            }
        }
    }

    /// Semantic equality: same shape, same polarity, and the graphs agree
    /// as functions within `tol`.
    pub fn equal_within(&self, other: &QuadBifunction, tol: f64) -> bool {
        self.src_dim == other.src_dim
            && self.dst_dim == other.dst_dim
            && self.polarity == other.polarity
            && self.graph.equal_within(&other.graph, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EQ_TOL;

    fn half_square(n: usize) -> Pcqf {
        Pcqf::from_ambient(
            &Matrix::identity(n),
            &Vector::zeros(n),
            0.0,
            &Matrix::zeros(0, n),
            &Vector::zeros(0),
        )
        .unwrap()
    }

    fn vec(xs: &[f64]) -> Vector {
        Vector::new(xs.to_vec())
    }

    #[test]
    fn identity_values() {
        let id = QuadBifunction::identity(2);
        assert_eq!(id.evaluate(&vec(&[1.0, -0.5]), &vec(&[1.0, -0.5])).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(id.evaluate(&vec(&[1.0, -0.5]), &vec(&[1.0, 0.5])).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn scalar_identity_is_zero() {
        let id = QuadBifunction::identity(0);
        assert_eq!(id.scalar_value().unwrap(), ExtReal::Finite(0.0));
    }

    #[test]
    fn compose_with_identity_is_neutral() {
        let a = Matrix::new(2, 2, vec![1.0, 2.0, 0.0, 1.0]);
        let f = QuadBifunction::from_linear_map(&a);
        let left = QuadBifunction::identity(2).compose(&f).unwrap();
        let right = f.compose(&QuadBifunction::identity(2)).unwrap();
        assert!(left.equal_within(&f, EQ_TOL));
        assert!(right.equal_within(&f, EQ_TOL));
    }

    #[test]
    fn linear_maps_compose_functorially() {
        let a = Matrix::new(2, 3, vec![1.0, 0.0, -1.0, 2.0, 1.0, 0.5]);
        let b = Matrix::new(3, 2, vec![0.5, 0.0, 1.0, -1.0, 0.0, 2.0]);
        let composite = QuadBifunction::from_linear_map(&a)
            .compose(&QuadBifunction::from_linear_map(&b))
            .unwrap();
        let product = QuadBifunction::from_linear_map(&(&a * &b));
        assert!(composite.equal_within(&product, EQ_TOL));
    }

    #[test]
    fn discard_after_state_infimizes() {
        let state = QuadBifunction::from_pcqf_state(half_square(1), Polarity::Convex);
        let scalar = QuadBifunction::generator(GeneratorKind::Discard, 1).compose(&state).unwrap();
        assert_eq!(scalar.scalar_value().unwrap(), ExtReal::Finite(0.0));
    }

    #[test]
    fn compare_of_states_adds_them() {
        // feeding two states into the comparison node sums the functions
        let f = half_square(1);
        let g = half_square(1).add_affine(&vec(&[1.0]), 0.25);
        let pair = QuadBifunction::from_pcqf_state(f.clone(), Polarity::Convex)
            .tensor(&QuadBifunction::from_pcqf_state(g.clone(), Polarity::Convex))
            .unwrap();
        let merged = QuadBifunction::generator(GeneratorKind::Compare, 1).compose(&pair).unwrap();
        let expected = QuadBifunction::from_pcqf_state(f.add(&g).unwrap(), Polarity::Convex);
        assert!(merged.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn add_of_states_is_infimal_convolution() {
        let f = half_square(1);
        let g = half_square(1);
        let pair = QuadBifunction::from_pcqf_state(f.clone(), Polarity::Convex)
            .tensor(&QuadBifunction::from_pcqf_state(g.clone(), Polarity::Convex))
            .unwrap();
        let merged = QuadBifunction::generator(GeneratorKind::Add, 1).compose(&pair).unwrap();
        let expected = QuadBifunction::from_pcqf_state(f.inf_convolution(&g).unwrap(), Polarity::Convex);
        assert!(merged.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn compose_unbounded_middle_is_improper() {
        // state x (linear, unbounded below) fed into discard
        let linear = Pcqf::constant(1, 0.0).add_affine(&vec(&[1.0]), 0.0);
        let state = QuadBifunction::from_pcqf_state(linear, Polarity::Convex);
        let r = QuadBifunction::generator(GeneratorKind::Discard, 1).compose(&state);
        assert!(matches!(r, Err(Error::UnboundedBelow)));
        // the concave mirror reports the flipped diagnostic
        let linear2 = Pcqf::constant(1, 0.0).add_affine(&vec(&[1.0]), 0.0);
        let state2 = QuadBifunction::from_pcqf_state(linear2, Polarity::Concave);
        let d = QuadBifunction::generator(GeneratorKind::Discard, 1).negated();
        assert!(matches!(d.compose(&state2), Err(Error::UnboundedAbove)));
    }

    #[test]
    fn polarity_mismatch_is_rejected() {
        let id = QuadBifunction::identity(1);
        assert!(matches!(id.compose(&id.negated()), Err(Error::PolarityMismatch(_))));
        assert!(matches!(id.tensor(&id.negated()), Err(Error::PolarityMismatch(_))));
    }

    #[test]
    fn tensor_of_identities() {
        let t = QuadBifunction::identity(1).tensor(&QuadBifunction::identity(2)).unwrap();
        assert!(t.equal_within(&QuadBifunction::identity(3), EQ_TOL));
    }

    #[test]
    fn tensor_with_scalar_unit_is_neutral() {
        let f = QuadBifunction::from_linear_map(&Matrix::new(1, 2, vec![1.0, -1.0]));
        let unit = QuadBifunction::identity(0);
        assert!(f.tensor(&unit).unwrap().equal_within(&f, EQ_TOL));
        assert!(unit.tensor(&f).unwrap().equal_within(&f, EQ_TOL));
    }

    #[test]
    fn interchange_of_tensor_and_compose() {
        let a = QuadBifunction::from_linear_map(&Matrix::new(1, 1, vec![2.0]));
        let b = QuadBifunction::from_linear_map(&Matrix::new(1, 1, vec![-0.5]));
        let c = QuadBifunction::from_linear_map(&Matrix::new(2, 1, vec![1.0, 1.0]));
        let d = QuadBifunction::from_linear_map(&Matrix::new(1, 2, vec![1.0, -1.0]));
        let lhs = a.compose(&b).unwrap().tensor(&c.compose(&d).unwrap()).unwrap();
        let rhs = a.tensor(&c).unwrap().compose(&b.tensor(&d).unwrap()).unwrap();
        assert!(lhs.equal_within(&rhs, EQ_TOL));
    }

    #[test]
    fn dagger_involution_and_identity() {
        let a = Matrix::new(2, 1, vec![1.0, 2.0]);
        let f = QuadBifunction::from_linear_map(&a);
        assert!(f.dagger().dagger().equal_within(&f, EQ_TOL));
        let id = QuadBifunction::identity(2);
        assert!(id.dagger().equal_within(&id, EQ_TOL));
        // the converse relation accepts exactly the transposed pairs
        let conv = f.dagger();
        assert_eq!(conv.evaluate(&vec(&[3.0, 6.0]), &vec(&[3.0])).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(conv.evaluate(&vec(&[3.0, 5.0]), &vec(&[3.0])).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn inverse_is_swap_plus_negation() {
        let a = Matrix::new(2, 2, vec![2.0, 1.0, 0.0, 1.0]); // invertible
        let f = QuadBifunction::from_linear_map(&a);
        let inv = f.inverse();
        assert_eq!(inv.polarity(), Polarity::Concave);
        assert!(inv.inverse().equal_within(&f, EQ_TOL));
        let a_inv = Matrix::new(2, 2, vec![0.5, -0.5, 0.0, 1.0]);
        let expected = QuadBifunction::from_linear_map(&a_inv).negated();
        assert!(inv.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn adjoint_of_linear_map_is_transpose() {
        let a = Matrix::new(2, 3, vec![1.0, 0.5, 0.0, -1.0, 2.0, 1.0]);
        let adj = QuadBifunction::from_linear_map(&a).adjoint().unwrap();
        let expected = QuadBifunction::from_linear_map(&a.transpose()).negated();
        assert!(adj.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn adjoint_of_identity_is_concave_identity() {
        let adj = QuadBifunction::identity(2).adjoint().unwrap();
        assert!(adj.equal_within(&QuadBifunction::identity(2).negated(), EQ_TOL));
    }

    #[test]
    fn adjoint_of_point_state_is_linear_effect() {
        // state ⟦x = 1⟧ dualizes to the effect x* ↦ −x*
        let state = QuadBifunction::from_pcqf_state(
            Pcqf::point_indicator(&vec(&[1.0])),
            Polarity::Convex,
        );
        let adj = state.adjoint().unwrap();
        assert_eq!(adj.src_dim(), 1);
        assert_eq!(adj.dst_dim(), 0);
        assert_eq!(adj.polarity(), Polarity::Concave);
        for s in [-2.0, 0.0, 1.5] {
            assert_eq!(adj.evaluate(&vec(&[s]), &vec(&[])).unwrap(), ExtReal::Finite(-s));
        }
    }

    #[test]
    fn adjoint_is_involutive() {
        let instances = vec![
            QuadBifunction::from_linear_map(&Matrix::new(2, 2, vec![1.0, 1.0, 0.0, 1.0])),
            QuadBifunction::from_pcqf_state(half_square(2), Polarity::Convex),
            QuadBifunction::generator(GeneratorKind::Copy, 1),
            QuadBifunction::generator(GeneratorKind::Add, 2),
            QuadBifunction::from_pcqf_effect(
                half_square(1).add_affine(&vec(&[0.5]), -1.0),
                Polarity::Convex,
            ),
        ];
        for f in instances {
            let back = f.adjoint().unwrap().adjoint().unwrap();
            assert!(back.equal_within(&f, EQ_TOL));
        }
    }

    #[test]
    fn adjoint_reverses_composition() {
        let a = Matrix::new(2, 2, vec![1.0, 2.0, 0.0, 1.0]);
        let b = Matrix::new(2, 2, vec![1.0, 0.0, -1.0, 1.0]);
        let f = QuadBifunction::from_linear_map(&a);
        let g = QuadBifunction::from_linear_map(&b);
        let lhs = f.compose(&g).unwrap().adjoint().unwrap();
        let rhs = g.adjoint().unwrap().compose(&f.adjoint().unwrap()).unwrap();
        assert!(lhs.equal_within(&rhs, EQ_TOL));
    }

    #[test]
    fn adjoint_swaps_generator_families() {
        // the diagonal comultiplication dualizes to the additive multiplication
        let adj = QuadBifunction::generator(GeneratorKind::Copy, 2).adjoint().unwrap();
        let expected = QuadBifunction::generator(GeneratorKind::Add, 2).negated();
        assert!(adj.equal_within(&expected, EQ_TOL));
        // and the additive unit dualizes to the diagonal counit
        let adj_zero = QuadBifunction::generator(GeneratorKind::Zero, 2).adjoint().unwrap();
        let expected_discard = QuadBifunction::generator(GeneratorKind::Discard, 2).negated();
        assert!(adj_zero.equal_within(&expected_discard, EQ_TOL));
    }

    #[test]
    fn inverse_and_adjoint_commute() {
        let instances = vec![
            QuadBifunction::from_linear_map(&Matrix::new(2, 2, vec![2.0, 1.0, 0.0, 1.0])),
            QuadBifunction::from_pcqf_state(half_square(1), Polarity::Convex),
            QuadBifunction::generator(GeneratorKind::Add, 1),
        ];
        for f in instances {
            let lhs = f.adjoint().unwrap().inverse();
            let rhs = f.inverse().adjoint().unwrap();
            assert!(lhs.equal_within(&rhs, EQ_TOL));
        }
    }

    #[test]
    fn counit_law() {
        let n = 2;
        let copy = QuadBifunction::generator(GeneratorKind::Copy, n);
        let discard = QuadBifunction::generator(GeneratorKind::Discard, n);
        let id = QuadBifunction::identity(n);
        let lhs = discard.tensor(&id).unwrap().compose(&copy).unwrap();
        assert!(lhs.equal_within(&id, EQ_TOL));
    }

    #[test]
    fn specialness_both_families() {
        let n = 2;
        let id = QuadBifunction::identity(n);
        let black = QuadBifunction::generator(GeneratorKind::Compare, n)
            .compose(&QuadBifunction::generator(GeneratorKind::Copy, n))
            .unwrap();
        assert!(black.equal_within(&id, EQ_TOL));
        let white = QuadBifunction::generator(GeneratorKind::Add, n)
            .compose(&QuadBifunction::generator(GeneratorKind::Coadd, n))
            .unwrap();
        assert!(white.equal_within(&id, EQ_TOL));
    }

    #[test]
    fn zero_then_cozero_is_scalar_zero() {
        let z = QuadBifunction::generator(GeneratorKind::Cozero, 2)
            .compose(&QuadBifunction::generator(GeneratorKind::Zero, 2))
            .unwrap();
        assert_eq!(z.scalar_value().unwrap(), ExtReal::Finite(0.0));
    }

    #[test]
    fn relation_constructors() {
        let diag = Matrix::new(4, 2, vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
        let rel = QuadBifunction::from_linear_relation(2, 2, &diag).unwrap();
        assert!(rel.equal_within(&QuadBifunction::identity(2), EQ_TOL));

        let add_span = Matrix::new(3, 2, vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let rel_add = QuadBifunction::from_linear_relation(2, 1, &add_span).unwrap();
        assert!(rel_add.equal_within(&QuadBifunction::generator(GeneratorKind::Add, 1), EQ_TOL));
    }

    #[test]
    fn adjoint_of_relation_is_twisted_complement() {
        // R = {(x, 2x)} ⊆ R × R; the twisted complement is {(y*, x*) : x* = 2y*}
        let span = Matrix::new(2, 1, vec![1.0, 2.0]);
        let rel = QuadBifunction::from_linear_relation(1, 1, &span).unwrap();
        let adj = rel.adjoint().unwrap();
        let expected_span = Matrix::new(2, 1, vec![1.0, 2.0]);
        let expected = QuadBifunction::from_linear_relation(1, 1, &expected_span)
            .unwrap()
            .negated();
        assert!(adj.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn discardability() {
        let good = QuadBifunction::from_pcqf_state(half_square(1), Polarity::Convex);
        assert!(good.is_discardable(EQ_TOL));
        // shifted indicator has infimum 5, not 0
        let bad = QuadBifunction::from_pcqf_state(
            Pcqf::point_indicator(&vec(&[1.0])).add_affine(&Vector::zeros(1), 5.0),
            Polarity::Convex,
        );
        assert!(!bad.is_discardable(EQ_TOL));
        // unbounded infimum counts as not discardable
        let unbounded = QuadBifunction::from_pcqf_state(
            Pcqf::constant(1, 0.0).add_affine(&vec(&[1.0]), 0.0),
            Polarity::Convex,
        );
        assert!(!unbounded.is_discardable(EQ_TOL));
        // concave clause: the dual of a discardable map is dually discardable
        let dual = good.adjoint().unwrap();
        assert!(dual.is_discardable(EQ_TOL));
        let dual_bad = bad.adjoint().unwrap();
        assert!(!dual_bad.is_discardable(EQ_TOL));
    }

    #[test]
    fn co_discardability() {
        // identity passes both clauses of the additive structure
        let id = QuadBifunction::identity(2);
        assert!(id.is_co_discardable(EQ_TOL));
        assert!(id.negated().is_co_discardable(EQ_TOL));
        // a tilted state is normalized additively but not diagonally
        let tilted = QuadBifunction::from_pcqf_state(
            half_square(1).add_affine(&vec(&[1.0]), 0.0),
            Polarity::Convex,
        );
        assert!(tilted.is_co_discardable(EQ_TOL));
        assert!(!tilted.is_discardable(EQ_TOL));
        // a state with a nonzero value at the origin fails
        let shifted = QuadBifunction::from_pcqf_state(
            half_square(1).add_affine(&Vector::zeros(1), 1.0),
            Polarity::Convex,
        );
        assert!(!shifted.is_co_discardable(EQ_TOL));
        // the adjoint carries one clause to the other
        assert!(tilted.adjoint().unwrap().is_co_discardable(EQ_TOL));
        assert!(!shifted.adjoint().unwrap().is_co_discardable(EQ_TOL));
    }

    #[test]
    fn perturbation_discards_outputs() {
        let f = QuadBifunction::from_graph(
            1,
            1,
            Pcqf::from_ambient(
                &Matrix::new(2, 2, vec![2.0, 1.0, 1.0, 1.0]),
                &Vector::zeros(2),
                0.0,
                &Matrix::zeros(0, 2),
                &Vector::zeros(0),
            )
            .unwrap(),
            Polarity::Convex,
        )
        .unwrap();
        let p = f.perturbation().unwrap();
        assert_eq!(p.src_dim(), 1);
        assert_eq!(p.dst_dim(), 0);
        // inf_y ½(2x² + 2xy + y²) = ½x² at y = −x
        let expected = QuadBifunction::from_pcqf_effect(half_square(1), Polarity::Convex);
        assert!(p.equal_within(&expected, EQ_TOL));
    }

    #[test]
    fn associativity_on_a_chain() {
        let a = QuadBifunction::from_linear_map(&Matrix::new(1, 2, vec![1.0, 1.0]));
        let b = QuadBifunction::from_linear_map(&Matrix::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]));
        let c = QuadBifunction::from_linear_map(&Matrix::new(2, 1, vec![1.0, -1.0]));
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert!(lhs.equal_within(&rhs, EQ_TOL));
    }
}
