//! Exact and stochastic computations on random Young diagrams.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`] and [`character`]: partitions, hooks, Frobenius
//!   coordinates and symmetric-group characters.
//! * [`measures`]: q-Plancherel masses and transitions, the growth-process
//!   sampler, RSK and the Schur-Weyl sampler.
//! * [`observables`]: the algebra of polynomial functions on Young diagrams
//!   in the power-sum and normalized-character bases, and its q-deformation.
//! * [`cumulants`]: joint, disjoint and identity cumulants.
//! * [`harness`]: exact verification suites and Monte Carlo estimation.

pub mod character;
pub mod cumulants;
mod error;
pub mod harness;
pub mod measures;
pub mod observables;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use measures::QParameter;
pub use observables::{Flavor, Observable, SigmaCombination};
pub use partition::Partition;
pub use scalar::Scalar;
