use super::policy::select_agent_argument;
use super::replay::Replayer;
use super::scenario::Scenario;
use super::trace::DialogueTrace;
use super::DialogueError;
use crate::argument::{self, Argument, Move};
use crate::belief::UpdateRule;
use crate::logic::{self, LogicError, Model};
use crate::Distribution;

/// How a simulated human ranks the perspectives at the end of each round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HumanRanking {
    /// Perspectives true in the ground truth first, each group by index.
    GroundTruth,
    /// Ranking produced by the proposed rule with the human's own gamma.
    ForwardModel { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedResponse {
    pub tau: f64,
    /// Index into the scenario's human pool.
    pub counter: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub trace: DialogueTrace,
    /// Prior followed by the distribution after each move.
    pub distributions: Vec<Distribution>,
}

impl Simulation {
    pub fn final_distribution(&self) -> &Distribution {
        self.distributions.last().expect("at least the prior")
    }
}

/// Highest trust level for an argument the ground truth entails, lowest
/// otherwise; the counterargument is the first pool entry whose premises all
/// hold in the ground truth.
pub fn simulated_human_respond(
    ground_truth: &Model,
    incoming: &Argument,
    scenario: &Scenario,
) -> Result<SimulatedResponse, LogicError> {
    let tau = if argument::model_entails_argument(ground_truth, incoming)? {
        scenario.highest_trust()
    } else {
        scenario.lowest_trust()
    };
    let mut counter = None;
    for (i, entry) in scenario.human_pool.iter().enumerate() {
        let mut holds = true;
        for p in entry.argument.premises() {
            if !logic::eval(ground_truth, p)? {
                holds = false;
                break;
            }
        }
        if holds {
            counter = Some(i);
            break;
        }
    }
    Ok(SimulatedResponse { tau, counter })
}

pub fn ground_truth_ranking(scenario: &Scenario, ground_truth: &Model) -> Result<Vec<usize>, LogicError> {
    let truth = scenario
        .perspectives
        .iter()
        .map(|p| logic::eval(ground_truth, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut order: Vec<usize> = (0..truth.len()).collect();
    order.sort_by_key(|&i| (!truth[i], i));
    Ok(order)
}

/// Runs the agent policy against a simulated human for up to the scenario's
/// maximum number of rounds, stopping early when the agent runs out of
/// arguments.
pub fn simulate_dialogue(
    scenario: &Scenario,
    ground_truth: &Model,
    ranking: HumanRanking,
) -> Result<Simulation, DialogueError> {
    let mut trace = DialogueTrace::new(scenario);
    let mut agent = Replayer::new(scenario);
    let mut human = match ranking {
        HumanRanking::ForwardModel { gamma } => Some(Replayer::with_rule(scenario, UpdateRule::PROPOSED, gamma)),
        HumanRanking::GroundTruth => None,
    };
    let mut distributions = vec![agent.current().clone()];

    for _ in 0..scenario.max_rounds {
        let candidate = match select_agent_argument(agent.current(), scenario, &trace) {
            Ok(c) => c,
            Err(DialogueError::NoArgumentAvailable) => break,
            Err(e) => return Err(e),
        };
        let response = simulated_human_respond(ground_truth, &candidate.argument, scenario)?;
        let mut moves = vec![Move::agent(candidate.argument, trace.next_timestep(), response.tau)?];
        if let Some(i) = response.counter {
            let entry = &scenario.human_pool[i];
            moves.push(Move::human(entry.argument.clone(), trace.next_timestep() + 1, entry.certainty)?);
        }
        for mv in moves {
            agent.apply(&mv)?;
            if let Some(h) = human.as_mut() {
                h.apply(&mv)?;
            }
            distributions.push(agent.current().clone());
            trace.moves.push(mv);
        }
        let ranked = match human.as_ref() {
            Some(h) => h.current().rank_perspectives(&scenario.perspectives)?,
            None => ground_truth_ranking(scenario, ground_truth)?,
        };
        trace.round_rankings.push(ranked);
    }
    Ok(Simulation { trace, distributions })
}
