//! Exact exponent gates, Green's-function quadrature on the unit ball and
//! numerical probes for fractional elliptic systems with gradient sources.

pub mod exec;
pub mod exponents;
pub mod geometry;
pub mod kernel;
pub mod norms;
pub mod poisson;
pub mod quad;
pub mod system;
