//! Exact arithmetic for finite families of pairwise incident planes in `P^5` and `P^6`,
//! the Lagrangian subspaces of `∧^3 C^6` they span, EPW sextics and the plane sextics
//! `C_{W,A}`.

pub mod curves;
pub mod epw;
pub mod error;
pub mod exterior;
pub mod io;
pub mod lagrangian;
pub mod linalg;
pub mod planes;
pub mod poly;
pub mod scalars;

pub use error::{Error, ErrorCode};
pub use exterior::{KVector, TriVector};
pub use lagrangian::LagrangianSubspace;
pub use linalg::{Matrix, Subspace};
pub use planes::PlaneFamily;
pub use poly::MultiPoly;
pub use scalars::{Field, PrimeField, Rational, Rationals};
