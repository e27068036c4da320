//! A calculus of partial convex quadratic functions and the convex/concave
//! bifunctions built from them.
//!
//! The pieces fit together like this:
//!
//! - [`pcqf`]: quadratic functions restricted to affine subspaces, with exact
//!   addition, partial infimization, Legendre conjugation, and infimal
//!   convolution.
//! - [`bifunction`]: directed quadratic bifunctions with sequential and
//!   parallel composition, adjoint, dagger, and inverse, plus the additive
//!   and co-additive generator families.
//! - [`gauss`]: affine-Gaussian maps and the two interpretations sending them
//!   into bifunctions (cumulant-generating functions, covariant; log
//!   densities, contravariant), with exact conditioning.
//! - [`oracle`]: a brute-force grid evaluator used to cross-check every
//!   closed form on low-dimensional instances.
//! - [`dsl`] and [`cli`]: a small term language for wiring diagrams and the
//!   command-line front end.
//!
//! ```
//! use fenchel::pcqf::Pcqf;
//! use fenchel::numeric::{Matrix, Vector};
//!
//! // f(x) = x^2 on R; its conjugate is s^2/4.
//! let f = Pcqf::from_ambient(
//!     &Matrix::diagonal(&[2.0]),
//!     &Vector::zeros(1),
//!     0.0,
//!     &Matrix::zeros(0, 1),
//!     &Vector::zeros(0),
//! )
//! .unwrap();
//! let conj = f.conjugate().unwrap();
//! let val = conj.evaluate(&Vector::new(vec![2.0])).unwrap().finite().unwrap();
//! assert!((val - 1.0).abs() < 1e-12);
//! ```

pub mod bifunction;
pub mod checks;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod extreal;
pub mod gauss;
pub mod numeric;
pub mod oracle;
pub mod pcqf;
pub mod serial;
pub mod subspace;

pub use error::{Error, Result};
pub use extreal::ExtReal;

/// Default tolerance for rank decisions, PSD checks, and domain membership.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default tolerance for semantic equality of functions and bifunctions.
pub const EQ_TOL: f64 = 1e-7;
