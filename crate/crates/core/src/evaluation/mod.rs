//! Rank-correlation evaluation of update rules against human perspective
//! rankings, and per-participant gamma personalization.

mod io;
mod synthetic;

pub use io::{read_cohort, read_round_records, write_cohort, write_round_records};
pub use synthetic::{closed_loop_cohort, forward_model_cohort, forward_model_participant};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belief::UpdateRule;
use crate::dialogue::{replay_with, round_end_distributions, DialogueError, DialogueTrace, Scenario};
use crate::stats::{self, Alternative, StatsError};
use crate::trust::MIN_INVERTIBLE_GAMMA;

/// Lower edge of the "strong agreement" region of rho.
pub const HIGH_RHO: f64 = 0.75;

/// Number of equal-width histogram bins over [-1, 1].
pub const HISTOGRAM_BINS: usize = 8;

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("the cohort is empty")]
    EmptyCohort,
    #[error("participant {participant} has {have} rounds, {need} needed")]
    InsufficientRounds { participant: String, have: usize, need: usize },
    #[error("participant {0} has no trace")]
    MissingTrace(String),
    #[error("no usable gamma in the grid")]
    EmptyGrid,
    #[error("invalid round record: {0}")]
    InvalidRecord(String),
    #[error("participant {participant}: {source}")]
    Dialogue { participant: String, source: DialogueError },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One participant's answers for one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub participant: String,
    /// 1-based.
    pub round: usize,
    /// Trust the participant gave the agent's argument in this round.
    pub trust: f64,
    /// Perspective indices from most to least likely.
    pub human_ranking: Vec<usize>,
}

/// A scenario with the traces and round records of its participants.
#[derive(Debug, Clone)]
pub struct Cohort {
    pub scenario: Scenario,
    pub traces: BTreeMap<String, DialogueTrace>,
    pub records: Vec<RoundRecord>,
}

impl Cohort {
    pub fn new(scenario: Scenario) -> Self {
        Cohort { scenario, traces: BTreeMap::new(), records: Vec::new() }
    }

    /// Participant ids in ascending order.
    pub fn participants(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.traces.keys().map(String::as_str).collect();
        for r in &self.records {
            if !self.traces.contains_key(&r.participant) {
                ids.push(&r.participant);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Records of one participant, ordered by round.
    pub fn records_of(&self, participant: &str) -> Vec<&RoundRecord> {
        let mut rs: Vec<&RoundRecord> = self.records.iter().filter(|r| r.participant == participant).collect();
        rs.sort_by_key(|r| r.round);
        rs
    }

    /// Adds a participant, taking rankings from the trace and trust from its
    /// agent moves.
    pub fn push_trace(&mut self, participant: impl Into<String>, trace: DialogueTrace) {
        let participant = participant.into();
        let trusts = trace
            .moves
            .iter()
            .filter(|m| m.source == crate::Source::Agent)
            .map(|m| m.annotation.value());
        for (k, (ranking, trust)) in trace.round_rankings.iter().zip(trusts).enumerate() {
            self.records.push(RoundRecord {
                participant: participant.clone(),
                round: k + 1,
                trust,
                human_ranking: ranking.clone(),
            });
        }
        self.traces.insert(participant, trace);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Fit and evaluate on all rounds.
    UpperBound,
    /// Fit on every round but the last, evaluate on the last.
    Personalization1,
    /// Fit on the first round, evaluate on the rest.
    Personalization2,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::UpperBound, Variant::Personalization1, Variant::Personalization2];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::UpperBound => "upper_bound",
            Variant::Personalization1 => "personalization_1",
            Variant::Personalization2 => "personalization_2",
        }
    }

    /// Fit and evaluation rounds for a participant with `n` rounds.
    pub fn split(&self, n: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        match self {
            Variant::UpperBound if n >= 1 => Some(((1..=n).collect(), (1..=n).collect())),
            Variant::Personalization1 if n >= 2 => Some(((1..n).collect(), vec![n])),
            Variant::Personalization2 if n >= 2 => Some((vec![1], (2..=n).collect())),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            format!("unknown variant `{s}` (expected upper_bound, personalization_1 or personalization_2)")
        })
    }
}

/// The default gamma grid, 0.1 to 0.9 in steps of 0.1.
pub fn default_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub participant: String,
    pub gamma: f64,
    pub fit_rounds: Vec<usize>,
    pub eval_rounds: Vec<usize>,
    /// Mean rho over the fit rounds at the fitted gamma.
    pub fit_rho: f64,
    /// Rho on each evaluation round at the fitted gamma.
    pub eval_rho: Vec<f64>,
}

/// Rho between the framework ranking at the end of each round and the
/// participant's ranking, keyed by round.
pub fn participant_rhos(
    scenario: &Scenario,
    trace: &DialogueTrace,
    records: &[&RoundRecord],
    rule: UpdateRule,
    gamma: f64,
) -> Result<BTreeMap<usize, f64>, EvaluationError> {
    let wrap = |source: DialogueError| EvaluationError::Dialogue {
        participant: records.first().map(|r| r.participant.clone()).unwrap_or_default(),
        source,
    };
    let replayed = replay_with(scenario, trace, rule, gamma).map_err(wrap)?;
    let ends = round_end_distributions(trace, &replayed);
    let mut out = BTreeMap::new();
    for r in records {
        let d = ends.get(r.round.wrapping_sub(1)).ok_or_else(|| {
            EvaluationError::InvalidRecord(format!(
                "participant {} round {} but the trace has {} rounds",
                r.participant,
                r.round,
                ends.len()
            ))
        })?;
        let framework =
            d.rank_perspectives(&scenario.perspectives).map_err(|e| wrap(DialogueError::Belief(e)))?;
        if r.human_ranking.len() != framework.len() {
            return Err(StatsError::LengthMismatch(r.human_ranking.len(), framework.len()).into());
        }
        out.insert(r.round, stats::spearman_orders(&framework, &r.human_ranking)?);
    }
    Ok(out)
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// Fits gamma per participant under the proposed rule: the grid value with
/// the highest mean rho over the fit rounds, ties to the smaller gamma.
/// Grid values below the inversion threshold are skipped, as are values whose
/// replay fails.
pub fn fit_gamma(cohort: &Cohort, variant: Variant, grid: &[f64]) -> Result<Vec<GammaFit>, EvaluationError> {
    let mut grid: Vec<f64> = grid.iter().copied().filter(|g| (MIN_INVERTIBLE_GAMMA..=1.0).contains(g)).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() {
        return Err(EvaluationError::EmptyGrid);
    }
    let participants = cohort.participants();
    if participants.is_empty() {
        return Err(EvaluationError::EmptyCohort);
    }
    participants.par_iter().map(|p| fit_participant(cohort, p, variant, &grid)).collect()
}

fn fit_participant(cohort: &Cohort, participant: &str, variant: Variant, grid: &[f64]) -> Result<GammaFit, EvaluationError> {
    let trace = cohort.traces.get(participant).ok_or_else(|| EvaluationError::MissingTrace(participant.into()))?;
    let records = cohort.records_of(participant);
    let need = match variant {
        Variant::UpperBound => 1,
        Variant::Personalization1 | Variant::Personalization2 => 2,
    };
    let (fit_rounds, eval_rounds) = variant.split(records.len()).ok_or_else(|| EvaluationError::InsufficientRounds {
        participant: participant.into(),
        have: records.len(),
        need,
    })?;
    let rounds: Vec<usize> = records.iter().map(|r| r.round).collect();
    let pick = |idx: &[usize]| idx.iter().map(|&k| rounds[k - 1]).collect::<Vec<_>>();
    let (fit_rounds, eval_rounds) = (pick(&fit_rounds), pick(&eval_rounds));

    let mut best: Option<(f64, f64, BTreeMap<usize, f64>)> = None;
    let mut last_err = None;
    for &g in grid {
        let rhos = match participant_rhos(&cohort.scenario, trace, &records, UpdateRule::PROPOSED, g) {
            Ok(r) => r,
            Err(e @ EvaluationError::Dialogue { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let score = mean(fit_rounds.iter().map(|k| rhos[k]));
        if best.as_ref().is_none_or(|(_, s, _)| score > *s) {
            best = Some((g, score, rhos));
        }
    }
    let (gamma, fit_rho, rhos) = match best {
        Some(b) => b,
        None => return Err(last_err.unwrap_or(EvaluationError::EmptyGrid)),
    };
    Ok(GammaFit {
        participant: participant.into(),
        gamma,
        eval_rho: eval_rounds.iter().map(|k| rhos[k]).collect(),
        fit_rounds,
        eval_rounds,
        fit_rho,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// Bin edges, one more than the number of bins. The last bin is closed.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn of(values: &[f64]) -> Self {
        let edges: Vec<f64> = (0..=HISTOGRAM_BINS).map(|k| -1.0 + 2.0 * k as f64 / HISTOGRAM_BINS as f64).collect();
        let mut counts = vec![0; HISTOGRAM_BINS];
        for &v in values {
            let k = (((v + 1.0) / 2.0 * HISTOGRAM_BINS as f64).floor() as isize).clamp(0, HISTOGRAM_BINS as isize - 1);
            counts[k as usize] += 1;
        }
        Histogram { edges, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedTrace {
    pub participant: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub rule: UpdateRule,
    pub gamma: f64,
    /// Rho per participant-round, participants in id order.
    pub rhos: Vec<f64>,
    pub histogram: Histogram,
    /// Fraction of rho values in [HIGH_RHO, 1].
    pub high_fraction: f64,
    pub mean_rho: f64,
    pub failed: Vec<FailedTrace>,
}

/// Replays every trace under each method and summarizes rho over all
/// participant-rounds. Traces that fail to replay are skipped and listed.
pub fn evaluate_methods(cohort: &Cohort, methods: &[UpdateRule], gamma: f64) -> Result<Vec<MethodSummary>, EvaluationError> {
    let participants = cohort.participants();
    if participants.is_empty() || cohort.records.is_empty() {
        return Err(EvaluationError::EmptyCohort);
    }
    methods
        .iter()
        .map(|&rule| {
            let per: Vec<Result<Vec<f64>, EvaluationError>> = participants
                .par_iter()
                .map(|p| {
                    let trace = cohort.traces.get(*p).ok_or_else(|| EvaluationError::MissingTrace(p.to_string()))?;
                    let rhos = participant_rhos(&cohort.scenario, trace, &cohort.records_of(p), rule, gamma)?;
                    Ok(rhos.into_values().collect())
                })
                .collect();
            let mut rhos = Vec::new();
            let mut failed = Vec::new();
            for (p, r) in participants.iter().zip(per) {
                match r {
                    Ok(v) => rhos.extend(v),
                    Err(e) => failed.push(FailedTrace { participant: p.to_string(), error: e.to_string() }),
                }
            }
            let high = rhos.iter().filter(|&&r| r >= HIGH_RHO).count();
            let n = rhos.len();
            Ok(MethodSummary {
                rule,
                gamma,
                histogram: Histogram::of(&rhos),
                high_fraction: if n == 0 { 0.0 } else { high as f64 / n as f64 },
                mean_rho: if n == 0 { f64::NAN } else { mean(rhos.iter().copied()) },
                rhos,
                failed,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustComparison {
    pub from_round: usize,
    pub to_round: usize,
    pub pairs: usize,
    pub mean_difference: f64,
    pub t: f64,
    pub p_two_sided: f64,
    pub p_greater: f64,
}

/// Paired t-tests of trust between consecutive rounds, and between the first
/// and the last round when there are more than two, over the participants who
/// have both rounds. Comparisons with too few pairs or constant differences
/// are left out.
pub fn trust_t_tests(records: &[RoundRecord]) -> Vec<TrustComparison> {
    let mut by_participant: BTreeMap<&str, BTreeMap<usize, f64>> = BTreeMap::new();
    for r in records {
        by_participant.entry(&r.participant).or_default().insert(r.round, r.trust);
    }
    let max_round = records.iter().map(|r| r.round).max().unwrap_or(0);
    let mut pairs: Vec<(usize, usize)> = (1..max_round).map(|k| (k, k + 1)).collect();
    if max_round > 2 {
        pairs.push((1, max_round));
    }
    pairs
        .into_iter()
        .filter_map(|(a, b)| {
            let (before, after): (Vec<f64>, Vec<f64>) =
                by_participant.values().filter_map(|m| Some((*m.get(&a)?, *m.get(&b)?))).unzip();
            let two = stats::paired_t_test(&before, &after, Alternative::TwoSided).ok()?;
            let greater = stats::paired_t_test(&before, &after, Alternative::Greater).ok()?;
            Some(TrustComparison {
                from_round: a,
                to_round: b,
                pairs: before.len(),
                mean_difference: two.mean_difference,
                t: two.t,
                p_two_sided: two.p_value,
                p_greater: greater.p_value,
            })
        })
        .collect()
}
