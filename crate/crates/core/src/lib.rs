//! Exact computer-algebra kernel for the Witt algebra, the positive Witt
//! algebra and the thin Lie algebra.
//!
//! The crate computes brackets from structure constants, classifies and
//! reconstructs derivations from finite tables, and checks 2-local
//! derivation statements (rigidity on the Witt algebras, a non-additive
//! 2-local derivation on the thin algebra) at finite truncation. All
//! arithmetic is exact over the rationals.

pub mod algebra;
pub mod derivation;
pub mod error;
pub mod linalg;
pub mod map;
pub mod two_local;

pub use algebra::{act, ad, ad_on, bracket, jacobi_check, Algebra, Element, JacobiReport};
pub use error::{Error, Result};
pub use linalg::{
    kernel_basis, solve_linear_system, subspace_intersection, Rational, Solution, SparseVector, Subspace, Window,
};
pub use map::LinearMapTable;
