//! Rank-1 Appell functions, Mumford theta functions and the Dedekind eta
//! function, together with two independent engines for checking identities
//! between them:
//!
//! * a double-precision engine ([`qseries`], [`appell`]) whose series carry
//!   rigorous geometric tail bounds, and
//! * an exact engine ([`formal`]) that expands both sides of an identity as
//!   Laurent series in `q^(1/24)` with coefficients in `Q(i)(y)`,
//!   `y = e^(pi i z)`, and checks that the difference cancels coefficient by
//!   coefficient.
//!
//! Identities are registered as data in [`registry`]; both sides are
//! [`expr::Expr`] trees, so the same formula drives numeric sampling, exact
//! expansion and the command-line tool.

pub mod appell;
pub mod closed_forms;
pub mod error;
pub mod expr;
pub mod formal;
pub mod harness;
pub mod modular;
pub mod qseries;
pub mod registry;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use qseries::{HalfInt, ModularPoint, QExponent, SeriesTruncation, ThetaIndex};
