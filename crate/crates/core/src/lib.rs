//! Maximal irreducible Goppa codes over a finite-field tower: construction, the
//! semiaffine group actions on roots, polynomials and columns, and exact
//! permutation-equivalence classification.

pub mod actions;
pub mod cli;
pub mod code;
pub mod equiv;
pub mod error;
pub mod field;
pub mod goppa;
pub mod linalg;
pub mod perms;
pub mod poly;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Dlog, FieldCtx, FieldElem, Level};
pub use poly::Poly;
pub use tower::{Params, Tower};
