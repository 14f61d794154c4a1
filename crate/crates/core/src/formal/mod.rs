//! Exact Laurent series in `q^{1/24}` over `Q(i)(y)`, `y = e^{pi i z}`.

mod coeff;
mod gauss;
mod poly;

pub use coeff::CoeffFunction;
pub use gauss::GaussianRational;
pub use poly::Poly;
mod series;
pub use series::{FormalQSeries, EXACT};
mod expand;
pub use expand::{expand, expand_lerch};
mod prove;
pub use prove::{cutoff_for, expand_basic, prove_exprs, BasicSeries, Proof, ResidualStatus};
