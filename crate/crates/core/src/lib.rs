//! Dynamic local average treatment effects for an irreversible binary
//! treatment instrumented by a time-invariant binary instrument.
//!
//! * [`latent`]: adoption pairs, period-by-period compliance types and the
//!   sets of histories that switch into treatment late.
//! * [`dgp`]: population DGPs and an exact oracle (estimands, true effects,
//!   reduced-form decompositions, negative-weight reports).
//! * [`panel`]: long-format CSV ingestion and validation.
//! * [`estimators`]: sample estimands, recursive identification, bounds and
//!   first-stage diagnostics.
//! * [`simulate`] and [`inference`]: seeded sampling, Monte Carlo and the
//!   unit-level bootstrap.
//! * [`cli`]: the `dynlate` command line.

pub mod assumptions;
pub mod cli;
pub mod dgp;
pub mod estimands;
pub mod estimators;
pub mod inference;
pub mod latent;
pub mod numfmt;
pub mod panel;
pub mod report;
pub mod rng;
pub mod simulate;
pub mod targets;

pub use assumptions::Assumption;
pub use dgp::{DgpSpec, HistorySpec};
pub use estimands::EstimandSet;
pub use latent::{Adoption, AdoptionPair, GroupLabel, IvType};
pub use panel::Panel;
pub use targets::{Target, TargetSelection};
