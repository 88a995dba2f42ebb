//! Distributions over the model space and the rules that update them.
//!
//! Two update rules are provided. The Bayesian rule splits the mass so that
//! models consistent with an argument jointly receive `p` and the rest `1 - p`,
//! each side scaled in proportion to its prior. The renormalizing rule sets
//! every consistent model to `p` and divides everything by the total.
//! Combined with identity or prospect weighting of agent trust, they give the
//! four methods of [`UpdateRule`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::argument::{Annotation, Argument, Move};
use crate::logic::{self, Formula, LogicError, ModelSet, Vocabulary};
use crate::num::Scalar;
use crate::trust::{self, TrustError, WeightingParams};

/// Allowed drift of the total mass away from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeliefError {
    #[error("degenerate update: {0}")]
    DegenerateUpdate(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("probability {0} is outside [0, 1]")]
    Domain(f64),
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("empty perspective list")]
    NoPerspectives,
    #[error(transparent)]
    Trust(#[from] TrustError),
}

impl From<LogicError> for BeliefError {
    fn from(e: LogicError) -> Self {
        BeliefError::VocabularyMismatch(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    /// Invert the weighting curve to turn trust into probability.
    Prospect,
    /// Use trust as the probability (gamma = 1).
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionUpdate {
    Bayesian,
    Renormalize,
}

/// Trust weighting plus distribution update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpdateRule {
    pub weighting: Weighting,
    pub update: DistributionUpdate,
}

impl UpdateRule {
    pub const BASELINE1: UpdateRule =
        UpdateRule { weighting: Weighting::Identity, update: DistributionUpdate::Renormalize };
    pub const BASELINE2: UpdateRule =
        UpdateRule { weighting: Weighting::Identity, update: DistributionUpdate::Bayesian };
    pub const BASELINE3: UpdateRule =
        UpdateRule { weighting: Weighting::Prospect, update: DistributionUpdate::Renormalize };
    pub const PROPOSED: UpdateRule =
        UpdateRule { weighting: Weighting::Prospect, update: DistributionUpdate::Bayesian };

    /// Baselines 1-3 followed by the proposed rule.
    pub const ALL: [UpdateRule; 4] = [Self::BASELINE1, Self::BASELINE2, Self::BASELINE3, Self::PROPOSED];

    pub fn name(&self) -> &'static str {
        match (self.weighting, self.update) {
            (Weighting::Identity, DistributionUpdate::Renormalize) => "baseline1",
            (Weighting::Identity, DistributionUpdate::Bayesian) => "baseline2",
            (Weighting::Prospect, DistributionUpdate::Renormalize) => "baseline3",
            (Weighting::Prospect, DistributionUpdate::Bayesian) => "proposed",
        }
    }
}

impl Default for UpdateRule {
    fn default() -> Self {
        UpdateRule::PROPOSED
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpdateRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UpdateRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}` (expected proposed, baseline1, baseline2 or baseline3)"))
    }
}

impl Serialize for UpdateRule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for UpdateRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Probability distribution over the `2^n` models of a vocabulary, indexed by model id.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDistribution<T> {
    vocab: Arc<Vocabulary>,
    probs: Vec<T>,
}

impl<T: Scalar> ModelDistribution<T> {
    /// Every model gets `1 / 2^n`.
    pub fn uniform(vocab: Arc<Vocabulary>) -> Self {
        let n = vocab.model_count();
        let each = T::one() / T::from_usize(n).expect("model count fits the scalar");
        ModelDistribution { vocab, probs: vec![each; n] }
    }

    pub fn from_probs(vocab: Arc<Vocabulary>, probs: Vec<T>) -> Result<Self, BeliefError> {
        if probs.len() != vocab.model_count() {
            return Err(BeliefError::InvalidDistribution(format!(
                "expected {} entries, found {}",
                vocab.model_count(),
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !(**p >= T::zero() && **p <= T::one())) {
            return Err(BeliefError::InvalidDistribution(format!("entry {bad} is outside [0, 1]")));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(NORMALIZATION_TOLERANCE) {
            return Err(BeliefError::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(ModelDistribution { vocab, probs })
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, model_id: u32) -> T {
        self.probs[model_id as usize]
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Total probability of a set of models.
    pub fn mass(&self, set: &ModelSet) -> T {
        set.iter().map(|id| self.probs[id as usize]).sum()
    }

    /// `P(f)`: mass of the models satisfying `f`.
    pub fn degree_of_belief(&self, f: &Formula) -> Result<T, BeliefError> {
        Ok(self.mass(&logic::models_of(&self.vocab, f)?))
    }

    /// Ids of the most probable models.
    pub fn argmax(&self) -> Vec<u32> {
        let best = self.probs.iter().copied().fold(T::neg_infinity(), T::max);
        (0..self.probs.len() as u32).filter(|&i| self.probs[i as usize] == best).collect()
    }

    fn check_p(p: T) -> Result<(), BeliefError> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(BeliefError::Domain(p.to_f64_lossy()));
        }
        Ok(())
    }

    fn check_set(&self, set: &ModelSet) -> Result<(), BeliefError> {
        if set.width() != self.vocab.len() {
            return Err(BeliefError::VocabularyMismatch(format!(
                "model set over {} atoms, distribution over {}",
                set.width(),
                self.vocab.len()
            )));
        }
        Ok(())
    }

    fn normalized(vocab: Arc<Vocabulary>, mut probs: Vec<T>) -> Self {
        let total: T = probs.iter().copied().sum();
        probs.iter_mut().for_each(|p| *p = *p / total);
        ModelDistribution { vocab, probs }
    }

    /// Bayesian split: the `consistent` models share `p` in proportion to
    /// their priors, the others share `1 - p` likewise.
    pub fn bayesian_update(&self, consistent: &ModelSet, p: T) -> Result<Self, BeliefError> {
        Self::check_p(p)?;
        self.check_set(consistent)?;
        let inside = self.mass(consistent);
        let outside: T = self
            .probs
            .iter()
            .enumerate()
            .filter(|(i, _)| !consistent.contains(*i as u32))
            .map(|(_, &v)| v)
            .sum();
        if p > T::zero() && inside <= T::zero() {
            return Err(BeliefError::DegenerateUpdate(format!(
                "argument has probability {p} but no model consistent with it has positive mass"
            )));
        }
        if p < T::one() && outside <= T::zero() {
            return Err(BeliefError::DegenerateUpdate(format!(
                "argument has probability {p} but every model with positive mass is consistent with it"
            )));
        }
        let probs = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, &prior)| {
                if consistent.contains(i as u32) {
                    if p == T::zero() { T::zero() } else { prior / inside * p }
                } else if p == T::one() {
                    T::zero()
                } else {
                    prior / outside * (T::one() - p)
                }
            })
            .collect();
        Ok(Self::normalized(self.vocab.clone(), probs))
    }

    /// Renormalizing rule: each consistent model is set to `p`, then all
    /// entries are divided by their sum.
    pub fn baseline_update(&self, consistent: &ModelSet, p: T) -> Result<Self, BeliefError> {
        Self::check_p(p)?;
        self.check_set(consistent)?;
        let probs: Vec<T> = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, &prior)| if consistent.contains(i as u32) { p } else { prior })
            .collect();
        let z: T = probs.iter().copied().sum();
        if z <= T::zero() {
            return Err(BeliefError::DegenerateUpdate(
                "normalizing constant is zero (p = 0 and all mass on consistent models)".into(),
            ));
        }
        Ok(Self::normalized(self.vocab.clone(), probs))
    }

    /// Raises every entry to at least `floor` and renormalizes, so that later
    /// updates never meet a zero-mass side that still has models.
    pub fn floored(&self, floor: T) -> Self {
        let probs = self.probs.iter().map(|&p| p.max(floor)).collect();
        Self::normalized(self.vocab.clone(), probs)
    }

    /// Perspective indices by descending degree of belief, ties by index.
    pub fn rank_perspectives(&self, perspectives: &[Formula]) -> Result<Vec<usize>, BeliefError> {
        if perspectives.is_empty() {
            return Err(BeliefError::NoPerspectives);
        }
        let beliefs = perspectives
            .iter()
            .map(|f| self.degree_of_belief(f))
            .collect::<Result<Vec<_>, _>>()?;
        let mut order: Vec<usize> = (0..perspectives.len()).collect();
        order.sort_by(|&a, &b| beliefs[b].partial_cmp(&beliefs[a]).expect("finite beliefs").then(a.cmp(&b)));
        Ok(order)
    }
}

impl ModelDistribution<f64> {
    pub fn to_record(&self) -> DistributionRecord {
        DistributionRecord { vocab: self.vocab.atoms().to_vec(), probs: self.probs.clone() }
    }
}

/// JSON shape: `{"vocab": ["a", "b"], "probs": [...]}`, probs indexed by model id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRecord {
    pub vocab: Vec<String>,
    pub probs: Vec<f64>,
}

impl DistributionRecord {
    pub fn into_distribution(self) -> Result<ModelDistribution<f64>, BeliefError> {
        let vocab = Vocabulary::new(self.vocab).map_err(|e| BeliefError::InvalidDistribution(e.to_string()))?;
        ModelDistribution::from_probs(Arc::new(vocab), self.probs)
    }
}

pub fn uniform_prior<T: Scalar>(vocab: Arc<Vocabulary>) -> ModelDistribution<T> {
    ModelDistribution::uniform(vocab)
}

pub fn degree_of_belief<T: Scalar>(d: &ModelDistribution<T>, f: &Formula) -> Result<T, BeliefError> {
    d.degree_of_belief(f)
}

pub fn bayesian_update<T: Scalar>(
    d: &ModelDistribution<T>,
    a: &Argument,
    p: T,
) -> Result<ModelDistribution<T>, BeliefError> {
    d.bayesian_update(&a.consistent_models(d.vocab())?, p)
}

pub fn baseline_update<T: Scalar>(
    d: &ModelDistribution<T>,
    a: &Argument,
    p: T,
) -> Result<ModelDistribution<T>, BeliefError> {
    d.baseline_update(&a.consistent_models(d.vocab())?, p)
}

/// Probability used for a move under `rule`: inverted trust for agent moves
/// under prospect weighting, raw trust under identity weighting, declared
/// certainty for human moves.
pub fn move_probability<T: Scalar>(
    mv: &Move,
    rule: UpdateRule,
    params: &WeightingParams<T>,
) -> Result<T, BeliefError> {
    let raw = T::from_f64(mv.annotation.value()).ok_or(BeliefError::Domain(mv.annotation.value()))?;
    Ok(match (mv.annotation, rule.weighting) {
        (Annotation::Trust(_), Weighting::Prospect) => trust::probability_of_trust(raw, params)?,
        (Annotation::Trust(_), Weighting::Identity) | (Annotation::Certainty(_), _) => raw,
    })
}

/// Applies one move, returning the new distribution and the probability used.
pub fn apply_move<T: Scalar>(
    d: &ModelDistribution<T>,
    mv: &Move,
    rule: UpdateRule,
    params: &WeightingParams<T>,
) -> Result<(ModelDistribution<T>, T), BeliefError> {
    let p = move_probability(mv, rule, params)?;
    let set = mv.argument.consistent_models(d.vocab())?;
    let next = match rule.update {
        DistributionUpdate::Bayesian => d.bayesian_update(&set, p)?,
        DistributionUpdate::Renormalize => d.baseline_update(&set, p)?,
    };
    Ok((next, p))
}

pub fn rank_perspectives<T: Scalar>(
    d: &ModelDistribution<T>,
    perspectives: &[Formula],
) -> Result<Vec<usize>, BeliefError> {
    d.rank_perspectives(perspectives)
}
