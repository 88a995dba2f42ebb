//! Synthetic cohorts for testing the evaluation pipeline.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Cohort;
use crate::argument::{Move, Source};
use crate::belief::UpdateRule;
use crate::dialogue::{simulate_dialogue, DialogueError, DialogueTrace, HumanRanking, Replayer, Scenario};
use crate::logic::Model;

fn participant_id(i: usize) -> String {
    format!("p{:03}", i + 1)
}

/// A trace of random agent arguments, random trust levels and random pool
/// counterarguments, where every ranking is what the proposed rule with
/// `gamma` produces at the end of the round.
pub fn forward_model_participant<R: Rng>(
    scenario: &Scenario,
    gamma: f64,
    rng: &mut R,
) -> Result<DialogueTrace, DialogueError> {
    let mut trace = DialogueTrace::new(scenario);
    let mut human = Replayer::with_rule(scenario, UpdateRule::PROPOSED, gamma);
    for _ in 0..scenario.max_rounds {
        let unused: Vec<_> = scenario
            .candidates()
            .iter()
            .filter(|(a, _)| !trace.moves.iter().any(|m| m.source == Source::Agent && m.argument.same_as(a)))
            .collect();
        let Some((argument, _)) = unused.choose(rng) else { break };
        let tau = scenario.trust_levels.choose(rng).expect("validated non-empty").tau;
        let mut moves = vec![Move::agent(argument.clone(), trace.next_timestep(), tau)?];
        if let Some(entry) = scenario.human_pool.choose(rng) {
            moves.push(Move::human(entry.argument.clone(), trace.next_timestep() + 1, entry.certainty)?);
        }
        for mv in moves {
            human.apply(&mv)?;
            trace.moves.push(mv);
        }
        trace.round_rankings.push(human.current().rank_perspectives(&scenario.perspectives)?);
    }
    Ok(trace)
}

/// `n` forward-model participants sharing one gamma.
pub fn forward_model_cohort(scenario: &Scenario, gamma: f64, n: usize, seed: u64) -> Result<Cohort, DialogueError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cohort = Cohort::new(scenario.clone());
    for i in 0..n {
        let trace = forward_model_participant(scenario, gamma, &mut rng)?;
        cohort.push_trace(participant_id(i), trace);
    }
    Ok(cohort)
}

/// `n` closed-loop participants: each has a random ground-truth model and a
/// personal gamma drawn from `gammas`, answers the agent policy as the
/// simulated human does, and ranks perspectives by the proposed rule with
/// their own gamma.
pub fn closed_loop_cohort(scenario: &Scenario, gammas: &[f64], n: usize, seed: u64) -> Result<Cohort, DialogueError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cohort = Cohort::new(scenario.clone());
    let models = scenario.vocab.model_count() as u32;
    for i in 0..n {
        let truth = Model::from_id(rng.random_range(0..models), scenario.vocab.len())?;
        let gamma = *gammas.choose(&mut rng).ok_or_else(|| DialogueError::Scenario("empty gamma list".into()))?;
        let sim = simulate_dialogue(scenario, &truth, HumanRanking::ForwardModel { gamma })?;
        cohort.push_trace(participant_id(i), sim.trace);
    }
    Ok(cohort)
}
