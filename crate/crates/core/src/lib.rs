//! Rectangle probabilities of correlated binary strings.
//!
//! For a `rho`-correlated pair `(X, Y)` on `{0,1}^n` and sets `A`, `B`, this
//! crate computes `P(X in A, Y in B)` exactly on small cubes, the asymptotic
//! sphere exponents, closed-form upper and lower bounds on the exponent,
//! hypercontractive bounds that depend on the support size, and the
//! zero-error adder-MAC bound built on top of them.

pub mod adder_mac;
pub mod entropy;
pub mod error;
pub mod exponents;
pub mod hypercontractivity;
pub mod logspace;
pub mod optimize;
pub mod oracle;
pub mod sentinel;
pub mod sweeps;
pub mod verify;

pub use entropy::{NormalizedDistance, Prob, Rate};
pub use error::{Error, Result};
pub use exponents::{BoundKind, CenterMode, Correlation, Direction, ExponentBound};
