//! Exact construction of Krall-Jacobi polynomials, the commutative algebras
//! of differential operators they diagonalize, and their rotation-invariant
//! multivariate extensions.
//!
//! Everything is computed over exact rationals. Identities are checked as
//! equalities, never up to a tolerance.

pub mod algebra;
pub mod cli;
pub mod darboux;
pub mod discrete;
pub mod error;
pub mod fit;
pub mod jacobi;
pub mod linalg;
pub mod mpoly;
pub mod multivariate;
pub mod ncop;
pub mod poly;
pub mod rat;
pub mod verify;

pub use algebra::{basis_up_to_degree, element_from_g, is_member, AlgebraElement, Membership};
pub use darboux::{DarbouxSpec, QFamily, TridiagOp};
pub use error::{Error, Result};
pub use fit::fit_bf;
pub use mpoly::MPoly;
pub use ncop::NcOp;
pub use poly::{UniPoly, Var};
pub use rat::Rat;
