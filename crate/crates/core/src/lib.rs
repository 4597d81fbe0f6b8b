//! Exact-arithmetic engine for the quantum cohomology relations of flag
//! manifolds and the conserved quantities of the open and periodic Toda
//! lattices.
//!
//! The crate builds the relations `QS_n = D_n ... D_1 S_n` by applying the
//! second-order operators `D_i = Id + Q_i d^2/dX_i dX_{i+1}` to the
//! generating polynomial `S_n = (X_1 + mu)...(X_n + mu)`, extracts the Toda
//! conserved quantities from symbolic Lax-matrix determinants, verifies the
//! identities between the two, and integrates the Toda flows numerically to
//! demonstrate conservation.

pub mod error;
pub mod laxdet;
pub mod operators;
pub mod par;
pub mod parse;
pub mod poly;
pub mod quantumrel;
pub mod todaflow;
pub mod vars;
pub mod verify;

pub use error::{Error, Result};
pub use laxdet::{build_lax, char_poly, conserved, ConservedSet, LaxMatrix, LaxVariant};
pub use poly::{Monomial, Polynomial, Rational};
pub use quantumrel::{qs_family, qs_hat_family, s_poly, RelationFamily};
pub use vars::{VarId, VarUniverse};
pub use verify::{Suite, VerifyReport, VerifyRow};
