//! Scenarios, dialogue traces and everything that walks them: replay, the
//! agent's argument-selection policy and a simulated human.

mod policy;
mod replay;
mod scenario;
mod simulate;
mod trace;

pub use policy::{select_agent_argument, Candidate};
pub use replay::{replay, replay_with, round_end_distributions, Replayer};
pub use scenario::{
    certainty_label, PoolEntry, PoolEntryRecord, Scenario, ScenarioRecord, TrustLevel, CERTAINTY_LEVELS,
    DEFAULT_MAX_ROUNDS, SCHEMA_VERSION,
};
pub use simulate::{
    ground_truth_ranking, simulate_dialogue, simulated_human_respond, HumanRanking, SimulatedResponse, Simulation,
};
pub use trace::{DialogueTrace, TraceRecord};
pub(crate) use trace::is_permutation;

use thiserror::Error;

use crate::argument::ArgumentError;
use crate::belief::BeliefError;
use crate::logic::LogicError;

#[derive(Debug, Error)]
pub enum DialogueError {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("update failed at timestep {timestep}: {source}")]
    Update { timestep: u64, source: BeliefError },
    #[error("no unused argument is available to the agent")]
    NoArgumentAvailable,
    #[error(transparent)]
    Argument(#[from] ArgumentError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl DialogueError {
    /// Timestep of a degenerate update, if this is one.
    pub fn degenerate_timestep(&self) -> Option<u64> {
        match self {
            DialogueError::Update { timestep, source: BeliefError::DegenerateUpdate(_) } => Some(*timestep),
            _ => None,
        }
    }
}
