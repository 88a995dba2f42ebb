//! Learning a probabilistic model of a human interlocutor from an
//! argumentation dialogue.
//!
//! The crate is organised bottom-up:
//!
//! * [`logic`]: propositional formulas, models, entailment by model checking.
//! * [`argument`]: premise/claim arguments, validity, counterarguments.
//! * [`trust`]: the trust weighting curve and its numerical inverse.
//! * [`belief`]: distributions over models and the update rules.
//! * [`dialogue`]: scenarios, traces, replay, the agent policy and simulated humans.
//! * [`stats`] and [`evaluation`]: rank correlation, paired t-tests and gamma fitting.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to `f64`,
//! which is what the dialogue and evaluation layers use.

pub mod argument;
pub mod belief;
pub mod dialogue;
pub mod evaluation;
pub mod logic;
pub mod num;
pub mod stats;
pub mod trust;

pub use argument::{Annotation, Argument, ArgumentError, Move, Source};
pub use belief::{BeliefError, DistributionUpdate, ModelDistribution, UpdateRule, Weighting};
pub use logic::{Formula, LogicError, Model, ModelSet, Vocabulary};
pub use num::Scalar;
pub use trust::{TrustError, WeightingParams};

/// Distribution over models in double precision.
pub type Distribution = ModelDistribution<f64>;

/// Weighting-curve parameters in double precision.
pub type Params = WeightingParams<f64>;
