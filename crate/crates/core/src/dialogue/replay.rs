use super::scenario::Scenario;
use super::trace::DialogueTrace;
use super::DialogueError;
use crate::argument::Move;
use crate::belief::{self, UpdateRule};
use crate::trust::WeightingParams;
use crate::Distribution;

/// Applies moves one at a time to a running distribution.
#[derive(Debug, Clone)]
pub struct Replayer {
    rule: UpdateRule,
    params: WeightingParams<f64>,
    floor: Option<f64>,
    current: Distribution,
}

impl Replayer {
    pub fn new(scenario: &Scenario) -> Self {
        Self::with_rule(scenario, scenario.rule, scenario.gamma)
    }

    pub fn with_rule(scenario: &Scenario, rule: UpdateRule, gamma: f64) -> Self {
        Replayer {
            rule,
            params: WeightingParams::new(gamma),
            floor: scenario.floor,
            current: Distribution::uniform(scenario.vocab.clone()),
        }
    }

    pub fn current(&self) -> &Distribution {
        &self.current
    }

    /// Applies `mv` and returns the probability it was given. On error the
    /// running distribution is left unchanged.
    pub fn apply(&mut self, mv: &Move) -> Result<f64, DialogueError> {
        let base = match self.floor {
            Some(f) => self.current.floored(f),
            None => self.current.clone(),
        };
        let (next, p) = belief::apply_move(&base, mv, self.rule, &self.params)
            .map_err(|source| DialogueError::Update { timestep: mv.timestep, source })?;
        self.current = next;
        Ok(p)
    }
}

/// The prior followed by the distribution after every move, under the
/// scenario's own rule and gamma.
pub fn replay(scenario: &Scenario, trace: &DialogueTrace) -> Result<Vec<Distribution>, DialogueError> {
    replay_with(scenario, trace, scenario.rule, scenario.gamma)
}

pub fn replay_with(
    scenario: &Scenario,
    trace: &DialogueTrace,
    rule: UpdateRule,
    gamma: f64,
) -> Result<Vec<Distribution>, DialogueError> {
    trace.validate(scenario)?;
    let mut r = Replayer::with_rule(scenario, rule, gamma);
    let mut out = Vec::with_capacity(trace.moves.len() + 1);
    out.push(r.current().clone());
    for mv in &trace.moves {
        r.apply(mv)?;
        out.push(r.current().clone());
    }
    Ok(out)
}

/// Distribution at the end of each round, given the output of [`replay`].
pub fn round_end_distributions(trace: &DialogueTrace, replayed: &[Distribution]) -> Vec<Distribution> {
    trace.round_spans().into_iter().map(|span| replayed[span.end].clone()).collect()
}
