//! Exact computer algebra for the oscillator representation of the Heisenberg,
//! Witt/Virasoro and symplectic/metaplectic Lie algebras on Laurent series.
//!
//! All arithmetic is over the rationals. The crate is layered bottom-up:
//!
//! - [`scalar`], [`laurent`]: rationals, finite Laurent polynomials, residues and
//!   the symplectic form `<f, g> = -Res f dg`.
//! - [`series`]: integer-indexed coefficient families "polynomial plus finitely
//!   many exceptions", the representation behind every infinite diagonal sum.
//! - [`quad`], [`operator`], [`spmatrix`], [`witt`], [`cocycle`]: the degree-two
//!   Weyl algebra, its brackets, the trace cocycle and its pieces, and the maps
//!   from Witt and Witt ⋉ H'.
//! - [`fock`]: Heisenberg Fock spaces of any rank with exact mode actions.
//! - [`coinv`], [`linalg`]: points given by numerical semigroups and truncated
//!   coinvariant computations by exact row reduction.
//! - [`verify`]: identity checks with JSON verdicts.

pub mod cocycle;
pub mod coinv;
pub mod error;
pub mod fock;
pub mod laurent;
pub mod linalg;
pub mod operator;
pub mod quad;
pub mod scalar;
pub mod series;
pub mod spmatrix;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use laurent::{derivative, residue, symplectic_form, LaurentPoly};
pub use quad::QuadraticElement;
pub use scalar::Rational;
