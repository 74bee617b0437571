//! Numerical toolkit for maximal monotone linear relations and the block
//! operator matrices of boundary control systems.
//!
//! The math is generic over the real precision `T: Real` (`f64` or `f32`);
//! the aliases at the crate root fix it to `f64`, which is what all the
//! stated tolerances are tuned for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arens;
pub mod bdspace;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod quadrature;
pub mod relation;
pub mod scalar;
pub mod semigroup;
pub mod systemnode;

pub use error::{Error, Result};
pub use scalar::{CMatrix, CVector, Cx, Real};

pub type Space = hilbert::HilbertSpace<f64>;
pub type Sub = hilbert::Subspace<f64>;
pub type Relation = relation::LinearRelation<f64>;
pub type Arens = arens::ArensDecomposition<f64>;
pub type BdVec = bdspace::BdVector<f64>;
pub type TestFunction = bdspace::TestFunction1D<f64>;
pub type Traces = systemnode::TraceSystem<f64>;
pub type Block = systemnode::BlockOperator<f64>;
pub type Grid = semigroup::GridFunction<f64>;
