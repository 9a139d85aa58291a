//! (Super)martingale difference generators and the machinery built on them:
//! path statistics, truncation decompositions, exhaustive enumeration and
//! reproducible Monte Carlo estimation.

mod decompose;
mod enumerate;
mod event;
mod generator;
mod montecarlo;
mod path;
pub mod rng;

pub use decompose::{truncate_center, Decomposition, TruncationMode};
pub use enumerate::{enumerate_exact, DEFAULT_ENUMERATION_BUDGET};
pub use event::Event;
pub use generator::{Atom, FiniteLaw, GeneratorSpec, TruncatedHeavy};
pub use montecarlo::{mc_tail_estimate, mc_tail_estimate_partitioned, mc_tail_estimate_range, MonteCarloEstimate};
pub use path::{generate_path, MartingalePath};
