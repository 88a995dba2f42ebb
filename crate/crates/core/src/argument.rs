//! Premise/claim arguments and the moves that carry them through a dialogue.
//!
//! An argument `<premises, claim>` is valid when the premises belong to the
//! language, entail the claim, are consistent, and no proper subset of them
//! entails the claim. A counterargument is one whose premises are jointly
//! inconsistent with the target's.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{self, Formula, LogicError, Model, ModelSet, Vocabulary};

/// Default cap on premise-set size for validity and support enumeration.
pub const DEFAULT_PREMISE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArgumentError {
    #[error("premise set of {size} formulas exceeds the cap of {cap}")]
    PremiseSetTooLarge { size: usize, cap: usize },
    #[error("{mover:?} moves must carry a {expected} annotation")]
    AnnotationMismatch { mover: Source, expected: &'static str },
    #[error("annotation value {0} is outside [0, 1]")]
    AnnotationOutOfRange(f64),
    #[error("{field}: {error}")]
    Formula { field: String, error: LogicError },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// `<premises, claim>`. Premises behave as a set: duplicates are dropped on
/// construction and the first occurrence order is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Argument {
    premises: Vec<Formula>,
    claim: Formula,
}

impl Argument {
    pub fn new(premises: Vec<Formula>, claim: Formula) -> Self {
        let mut unique: Vec<Formula> = Vec::with_capacity(premises.len());
        for p in premises {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Argument { premises: unique, claim }
    }

    /// Parses premises and claim from concrete syntax.
    pub fn parse(vocab: &Vocabulary, premises: &[&str], claim: &str) -> Result<Self, ArgumentError> {
        let premises = premises
            .iter()
            .enumerate()
            .map(|(i, t)| {
                vocab
                    .parse(t)
                    .map_err(|error| ArgumentError::Formula { field: format!("premises[{i}]"), error })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let claim = vocab
            .parse(claim)
            .map_err(|error| ArgumentError::Formula { field: "claim".into(), error })?;
        Ok(Argument::new(premises, claim))
    }

    pub fn premises(&self) -> &[Formula] {
        &self.premises
    }

    pub fn claim(&self) -> &Formula {
        &self.claim
    }

    /// Same premise set and claim, ignoring premise order.
    pub fn same_as(&self, other: &Argument) -> bool {
        self.claim == other.claim
            && self.premises.len() == other.premises.len()
            && self.premises.iter().all(|p| other.premises.contains(p))
    }

    /// Models in which every premise and the claim hold.
    pub fn consistent_models(&self, vocab: &Vocabulary) -> Result<ModelSet, LogicError> {
        logic::models_of_all(vocab, self.premises.iter().chain(std::iter::once(&self.claim)))
    }

    pub fn premise_texts(&self, vocab: &Vocabulary) -> Vec<String> {
        self.premises.iter().map(|p| p.to_text(vocab)).collect()
    }

    pub fn claim_text(&self, vocab: &Vocabulary) -> String {
        self.claim.to_text(vocab)
    }

    pub fn to_text(&self, vocab: &Vocabulary) -> String {
        format!("<{{{}}}, {}>", self.premise_texts(vocab).join(", "), self.claim_text(vocab))
    }
}

/// Outcome of checking the four validity conditions, first failure reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    OutsideLanguage,
    NotEntailed,
    Inconsistent,
    NotMinimal,
}

pub fn validity(vocab: &Vocabulary, arg: &Argument, cap: usize) -> Result<Validity, ArgumentError> {
    let n = arg.premises.len();
    if n > cap {
        return Err(ArgumentError::PremiseSetTooLarge { size: n, cap });
    }
    if arg.premises.iter().chain([&arg.claim]).any(|f| vocab.check(f).is_err()) {
        return Ok(Validity::OutsideLanguage);
    }
    let claim = logic::models_of(vocab, &arg.claim)?;
    let sets = arg
        .premises
        .iter()
        .map(|p| logic::models_of(vocab, p))
        .collect::<Result<Vec<_>, _>>()?;
    let all = conjunction(vocab.len(), sets.iter());
    if !all.is_subset(&claim) {
        return Ok(Validity::NotEntailed);
    }
    if all.is_empty() {
        return Ok(Validity::Inconsistent);
    }
    // Entailment is monotone, so if any proper subset entails the claim then
    // some subset missing exactly one premise does too.
    for skip in 0..n {
        let rest = conjunction(vocab.len(), sets.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, s)| s));
        if rest.is_subset(&claim) {
            return Ok(Validity::NotMinimal);
        }
    }
    Ok(Validity::Valid)
}

pub fn is_valid_argument(vocab: &Vocabulary, arg: &Argument) -> Result<bool, ArgumentError> {
    Ok(validity(vocab, arg, DEFAULT_PREMISE_CAP)? == Validity::Valid)
}

fn conjunction<'a>(width: usize, sets: impl Iterator<Item = &'a ModelSet>) -> ModelSet {
    sets.fold(ModelSet::full(width), |acc, s| acc.intersect(s))
}

/// True when the union of both premise sets is inconsistent. Symmetric.
pub fn is_counterargument(
    vocab: &Vocabulary,
    attacker: &Argument,
    target: &Argument,
) -> Result<bool, ArgumentError> {
    Ok(!logic::consistent(vocab, attacker.premises.iter().chain(&target.premises))?)
}

/// Every valid argument for `claim` drawn from `kb`, smallest premise sets
/// first and then in lexicographic order of kb positions, truncated to `limit`.
/// Repeated kb formulas count once, at their first position.
pub fn minimal_supports(
    vocab: &Vocabulary,
    kb: &[Formula],
    claim: &Formula,
    limit: usize,
) -> Result<Vec<Argument>, ArgumentError> {
    if kb.len() > DEFAULT_PREMISE_CAP {
        return Err(ArgumentError::PremiseSetTooLarge { size: kb.len(), cap: DEFAULT_PREMISE_CAP });
    }
    let width = vocab.len();
    let claim_set = logic::models_of(vocab, claim)?;
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    if claim_set.len() == vocab.model_count() {
        out.push(Argument::new(Vec::new(), claim.clone()));
        return Ok(out);
    }
    let mut unique: Vec<&Formula> = Vec::with_capacity(kb.len());
    for f in kb {
        if !unique.contains(&f) {
            unique.push(f);
        }
    }
    let kb = unique;
    let sets = kb.iter().map(|f| logic::models_of(vocab, f)).collect::<Result<Vec<_>, _>>()?;
    for size in 1..=kb.len() {
        for combo in Combinations::new(kb.len(), size) {
            let all = conjunction(width, combo.iter().map(|&i| &sets[i]));
            if all.is_empty() || !all.is_subset(&claim_set) {
                continue;
            }
            let minimal = (0..combo.len()).all(|skip| {
                let rest = conjunction(
                    width,
                    combo.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &i)| &sets[i]),
                );
                !rest.is_subset(&claim_set)
            });
            if minimal {
                out.push(Argument::new(combo.iter().map(|&i| kb[i].clone()).collect(), claim.clone()));
                if out.len() == limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// `m |= A`: every premise and the claim hold in `m`.
pub fn model_entails_argument(m: &Model, arg: &Argument) -> Result<bool, LogicError> {
    for f in arg.premises.iter().chain([&arg.claim]) {
        if !logic::eval(m, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// k-combinations of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Agent,
    Human,
}

/// Uncertainty attached to a move: the human's trust in an agent argument, or
/// the human's certainty in their own argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Annotation {
    Trust(f64),
    Certainty(f64),
}

impl Annotation {
    pub fn value(&self) -> f64 {
        match *self {
            Annotation::Trust(v) | Annotation::Certainty(v) => v,
        }
    }
}

/// An argument put forward at a timestep, with its annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub argument: Argument,
    pub source: Source,
    pub timestep: u64,
    pub annotation: Annotation,
}

impl Move {
    pub fn new(argument: Argument, source: Source, timestep: u64, annotation: Annotation) -> Result<Self, ArgumentError> {
        match (source, annotation) {
            (Source::Agent, Annotation::Certainty(_)) => {
                return Err(ArgumentError::AnnotationMismatch { mover: source, expected: "trust" })
            }
            (Source::Human, Annotation::Trust(_)) => {
                return Err(ArgumentError::AnnotationMismatch { mover: source, expected: "certainty" })
            }
            _ => {}
        }
        let v = annotation.value();
        if !(0.0..=1.0).contains(&v) {
            return Err(ArgumentError::AnnotationOutOfRange(v));
        }
        Ok(Move { argument, source, timestep, annotation })
    }

    pub fn agent(argument: Argument, timestep: u64, trust: f64) -> Result<Self, ArgumentError> {
        Self::new(argument, Source::Agent, timestep, Annotation::Trust(trust))
    }

    pub fn human(argument: Argument, timestep: u64, certainty: f64) -> Result<Self, ArgumentError> {
        Self::new(argument, Source::Human, timestep, Annotation::Certainty(certainty))
    }

    pub fn to_record(&self, vocab: &Vocabulary) -> MoveRecord {
        let (trust, certainty) = match self.annotation {
            Annotation::Trust(v) => (Some(v), None),
            Annotation::Certainty(v) => (None, Some(v)),
        };
        MoveRecord {
            premises: self.argument.premise_texts(vocab),
            claim: self.argument.claim_text(vocab),
            source: self.source,
            t: self.timestep,
            trust,
            certainty,
        }
    }

    pub fn from_record(record: &MoveRecord, vocab: &Vocabulary) -> Result<Self, ArgumentError> {
        let premises: Vec<&str> = record.premises.iter().map(String::as_str).collect();
        let argument = Argument::parse(vocab, &premises, &record.claim)?;
        let annotation = match (record.source, record.trust, record.certainty) {
            (Source::Agent, Some(t), None) => Annotation::Trust(t),
            (Source::Human, None, Some(c)) => Annotation::Certainty(c),
            (Source::Agent, _, _) => {
                return Err(ArgumentError::AnnotationMismatch { mover: Source::Agent, expected: "trust" })
            }
            (Source::Human, _, _) => {
                return Err(ArgumentError::AnnotationMismatch { mover: Source::Human, expected: "certainty" })
            }
        };
        Move::new(argument, record.source, record.t, annotation)
    }
}

/// JSON shape of a move:
/// `{"premises": ["a", "a -> b"], "claim": "b", "source": "agent", "t": 1, "trust": 0.6}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    pub premises: Vec<String>,
    pub claim: String,
    pub source: Source,
    pub t: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trust: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<f64>,
}
