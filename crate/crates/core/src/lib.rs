//! Large-deviation exponential inequalities for supermartingales.
//!
//! The crate is organised bottom-up:
//!
//! - [`bounds`]: closed-form tail bounds (Azuma–Hoeffding maximal bound, the
//!   Freedman-type bound for increments `X_i <= 1`, the stretched-exponential
//!   moment bounds and the Bernstein-type corollary), all evaluated in log space.
//! - [`witness`]: the heavy-tailed law showing that the power `alpha` in the
//!   moment bound cannot be improved, and an exact lower-bound certificate.
//! - [`simulate`]: generators of (super)martingale differences, path statistics,
//!   truncation decompositions, exact path enumeration and reproducible
//!   Monte Carlo estimation.
//! - [`verify`]: sweeps bounds against exact or conservative oracles and writes
//!   machine-readable verdicts.
//!
//! [`stats`] and [`quadrature`] hold the numerical plumbing the other modules share.

pub mod bounds;
pub mod error;
pub mod format;
pub mod quadrature;
pub mod simulate;
pub mod stats;
pub mod verify;
pub mod witness;

pub use bounds::{Alpha, BoundKind, BoundParams, Provenance, TailBound};
pub use error::{Error, Result};
pub use simulate::{
    Decomposition, Event, FiniteLaw, GeneratorSpec, MartingalePath, MonteCarloEstimate,
    TruncatedHeavy, TruncationMode,
};
pub use verify::{Direction, OracleKind, SweepConfig, VerificationVerdict};
pub use witness::{CertificateRecord, CertificateScan, WitnessDistribution};
