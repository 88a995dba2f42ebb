use super::scenario::Scenario;
use super::trace::DialogueTrace;
use super::DialogueError;
use crate::argument::{Argument, Source};
use crate::logic::ModelSet;
use crate::Distribution;

/// An argument the agent can put forward next.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub argument: Argument,
    pub consistent: ModelSet,
    /// Position in the scenario's candidate enumeration.
    pub index: usize,
    /// How far the current mass on the argument's consistent models falls
    /// short of the agent's own belief in it, which is 1.
    pub shortfall: f64,
}

/// Picks the unused candidate argument with the largest shortfall, ties going
/// to the earliest in enumeration order.
pub fn select_agent_argument(
    d: &Distribution,
    scenario: &Scenario,
    history: &DialogueTrace,
) -> Result<Candidate, DialogueError> {
    let used = |a: &Argument| {
        history.moves.iter().any(|m| m.source == Source::Agent && m.argument.same_as(a))
    };
    let mut best: Option<Candidate> = None;
    for (index, (argument, consistent)) in scenario.candidates().iter().enumerate() {
        if used(argument) {
            continue;
        }
        let shortfall = 1.0 - d.mass(consistent);
        if best.as_ref().is_none_or(|b| shortfall > b.shortfall) {
            best = Some(Candidate { argument: argument.clone(), consistent: consistent.clone(), index, shortfall });
        }
    }
    best.ok_or(DialogueError::NoArgumentAvailable)
}
