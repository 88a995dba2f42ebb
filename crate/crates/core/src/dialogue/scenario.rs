use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::DialogueError;
use crate::argument::{self, Argument, DEFAULT_PREMISE_CAP};
use crate::belief::UpdateRule;
use crate::logic::{Formula, ModelSet, Vocabulary, DEFAULT_MAX_ATOMS};
use crate::trust::{self, WeightingParams};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_ROUNDS: usize = 3;

/// Certainty levels a human argument may carry, highest first.
pub const CERTAINTY_LEVELS: [f64; 5] = [0.9, 0.7, 0.5, 0.3, 0.1];

/// Maximum number of supports enumerated per perspective when building the
/// agent's candidate arguments.
const SUPPORTS_PER_PERSPECTIVE: usize = 64;

pub fn certainty_label(certainty: f64) -> Option<&'static str> {
    const LABELS: [&str; 5] =
        ["High Certainty", "Moderate Certainty", "Neutral Uncertainty", "Moderate Uncertainty", "High Uncertainty"];
    CERTAINTY_LEVELS.iter().position(|&c| (c - certainty).abs() < 1e-12).map(|i| LABELS[i])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustLevel {
    pub label: String,
    pub tau: f64,
}

impl TrustLevel {
    pub fn defaults() -> Vec<TrustLevel> {
        [("Almost Complete Trust", 0.9), ("High Trust", 0.7), ("Average Trust", 0.5), ("Low Trust", 0.2)]
            .into_iter()
            .map(|(label, tau)| TrustLevel { label: label.into(), tau })
            .collect()
    }
}

/// A counterargument the human may put forward, with its declared certainty
/// and the phrasing cue shown to the participant.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolEntry {
    pub argument: Argument,
    pub certainty: f64,
    pub cue: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolEntryRecord {
    pub premises: Vec<String>,
    pub claim: String,
    pub certainty: f64,
    #[serde(default)]
    pub cue: String,
}

/// Scenario file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRecord {
    pub schema: u32,
    pub name: String,
    pub vocab: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_atoms: Option<usize>,
    pub agent_kb: Vec<String>,
    #[serde(default)]
    pub human_pool: Vec<PoolEntryRecord>,
    pub perspectives: Vec<String>,
    #[serde(default = "TrustLevel::defaults")]
    pub trust_levels: Vec<TrustLevel>,
    pub gamma: f64,
    #[serde(default)]
    pub rule: UpdateRule,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
    /// Optional probability floor applied before every update.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

fn default_max_rounds() -> usize {
    DEFAULT_MAX_ROUNDS
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub vocab: Arc<Vocabulary>,
    pub agent_kb: Vec<Formula>,
    pub human_pool: Vec<PoolEntry>,
    pub perspectives: Vec<Formula>,
    pub trust_levels: Vec<TrustLevel>,
    pub gamma: f64,
    pub rule: UpdateRule,
    pub max_rounds: usize,
    pub floor: Option<f64>,
    candidates: Vec<(Argument, ModelSet)>,
}

fn invalid(msg: impl Into<String>) -> DialogueError {
    DialogueError::Scenario(msg.into())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, DialogueError> {
        let record: ScenarioRecord = serde_json::from_str(text)?;
        Self::from_record(record)
    }

    pub fn from_record(r: ScenarioRecord) -> Result<Self, DialogueError> {
        if r.schema != SCHEMA_VERSION {
            return Err(invalid(format!("unsupported schema version {}", r.schema)));
        }
        let vocab = Arc::new(
            Vocabulary::with_limit(r.vocab.iter().cloned(), r.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS))
                .map_err(|e| invalid(format!("vocab: {e}")))?,
        );
        let parse = |field: String, text: &str| vocab.parse(text).map_err(|e| invalid(format!("{field}: {e}")));

        let agent_kb = r
            .agent_kb
            .iter()
            .enumerate()
            .map(|(i, t)| parse(format!("agent_kb[{i}]"), t))
            .collect::<Result<Vec<_>, _>>()?;
        if agent_kb.len() > DEFAULT_PREMISE_CAP {
            return Err(invalid(format!(
                "agent_kb has {} formulas, more than the cap of {DEFAULT_PREMISE_CAP}",
                agent_kb.len()
            )));
        }

        let mut human_pool = Vec::with_capacity(r.human_pool.len());
        for (i, e) in r.human_pool.iter().enumerate() {
            let premises = e
                .premises
                .iter()
                .enumerate()
                .map(|(j, t)| parse(format!("human_pool[{i}].premises[{j}]"), t))
                .collect::<Result<Vec<_>, _>>()?;
            let claim = parse(format!("human_pool[{i}].claim"), &e.claim)?;
            if certainty_label(e.certainty).is_none() {
                return Err(invalid(format!(
                    "human_pool[{i}].certainty {} is not one of {CERTAINTY_LEVELS:?}",
                    e.certainty
                )));
            }
            human_pool.push(PoolEntry {
                argument: Argument::new(premises, claim),
                certainty: e.certainty,
                cue: e.cue.clone(),
            });
        }

        let perspectives = r
            .perspectives
            .iter()
            .enumerate()
            .map(|(i, t)| parse(format!("perspectives[{i}]"), t))
            .collect::<Result<Vec<_>, _>>()?;
        if perspectives.is_empty() {
            return Err(invalid("at least one perspective is required"));
        }
        for (i, p) in perspectives.iter().enumerate() {
            if perspectives[..i].contains(p) {
                return Err(invalid(format!("perspectives[{i}] duplicates an earlier perspective")));
            }
        }

        if r.trust_levels.is_empty() {
            return Err(invalid("trust_levels must not be empty"));
        }
        for (i, level) in r.trust_levels.iter().enumerate() {
            if !(0.0..=1.0).contains(&level.tau) {
                return Err(invalid(format!("trust_levels[{i}].tau {} is outside [0, 1]", level.tau)));
            }
            if i > 0 && level.tau >= r.trust_levels[i - 1].tau {
                return Err(invalid("trust_levels must be strictly decreasing in tau"));
            }
        }
        trust::probability_of_trust(0.5, &WeightingParams::new(r.gamma))
            .map_err(|e| invalid(format!("gamma: {e}")))?;
        if r.max_rounds == 0 {
            return Err(invalid("max_rounds must be at least 1"));
        }
        if let Some(f) = r.floor {
            if !(f > 0.0 && f < 1.0 / vocab.model_count() as f64) {
                return Err(invalid(format!("floor {f} must lie in (0, 1/|M|)")));
            }
        }

        let candidates = build_candidates(&vocab, &agent_kb, &perspectives)?;
        Ok(Scenario {
            name: r.name,
            vocab,
            agent_kb,
            human_pool,
            perspectives,
            trust_levels: r.trust_levels,
            gamma: r.gamma,
            rule: r.rule,
            max_rounds: r.max_rounds,
            floor: r.floor,
            candidates,
        })
    }

    pub fn to_record(&self) -> ScenarioRecord {
        let v = &self.vocab;
        ScenarioRecord {
            schema: SCHEMA_VERSION,
            name: self.name.clone(),
            vocab: v.atoms().to_vec(),
            max_atoms: (v.limit() != DEFAULT_MAX_ATOMS).then_some(v.limit()),
            agent_kb: self.agent_kb.iter().map(|f| f.to_text(v)).collect(),
            human_pool: self
                .human_pool
                .iter()
                .map(|e| PoolEntryRecord {
                    premises: e.argument.premise_texts(v),
                    claim: e.argument.claim_text(v),
                    certainty: e.certainty,
                    cue: e.cue.clone(),
                })
                .collect(),
            perspectives: self.perspectives.iter().map(|f| f.to_text(v)).collect(),
            trust_levels: self.trust_levels.clone(),
            gamma: self.gamma,
            rule: self.rule,
            max_rounds: self.max_rounds,
            floor: self.floor,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("scenario serializes")
    }

    pub fn params(&self) -> WeightingParams<f64> {
        WeightingParams::new(self.gamma)
    }

    /// Valid arguments the agent can build from its knowledge base for the
    /// perspectives, in enumeration order, with their consistent model sets.
    pub fn candidates(&self) -> &[(Argument, ModelSet)] {
        &self.candidates
    }

    pub fn trust_level(&self, label: &str) -> Option<&TrustLevel> {
        self.trust_levels.iter().find(|l| l.label == label)
    }

    pub fn highest_trust(&self) -> f64 {
        self.trust_levels[0].tau
    }

    pub fn lowest_trust(&self) -> f64 {
        self.trust_levels[self.trust_levels.len() - 1].tau
    }
}

fn build_candidates(
    vocab: &Vocabulary,
    kb: &[Formula],
    perspectives: &[Formula],
) -> Result<Vec<(Argument, ModelSet)>, DialogueError> {
    let mut out: Vec<(Argument, ModelSet)> = Vec::new();
    for p in perspectives {
        for arg in argument::minimal_supports(vocab, kb, p, SUPPORTS_PER_PERSPECTIVE)? {
            if out.iter().any(|(a, _)| a.same_as(&arg)) {
                continue;
            }
            let set = arg.consistent_models(vocab)?;
            out.push((arg, set));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ScenarioRecord {
        serde_json::from_str(
            r#"{
                "schema": 1,
                "name": "toy",
                "vocab": ["a", "b"],
                "agent_kb": ["a", "a -> b"],
                "human_pool": [{"premises": ["!a"], "claim": "!a", "certainty": 0.9, "cue": "I am confident that..."}],
                "perspectives": ["a & b", "a & !b", "!a & b", "!a & !b"],
                "gamma": 0.85
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let s = Scenario::from_record(record()).unwrap();
        assert_eq!(s.trust_levels, TrustLevel::defaults());
        assert_eq!(s.max_rounds, 3);
        assert_eq!(s.rule, UpdateRule::PROPOSED);
        assert_eq!(s.highest_trust(), 0.9);
        assert_eq!(s.lowest_trust(), 0.2);
        // {a, a -> b} supports a & b; nothing else is supportable
        assert_eq!(s.candidates().len(), 1);
        assert_eq!(s.candidates()[0].0.to_text(&s.vocab), "<{a, a -> b}, a & b>");
    }

    #[test]
    fn json_roundtrip_is_stable() {
        let s = Scenario::from_record(record()).unwrap();
        let json = s.to_json();
        let again = Scenario::from_json(&json).unwrap();
        assert_eq!(again.to_json(), json);
    }

    #[test]
    fn rejects_invalid_fields() {
        let mut r = record();
        r.human_pool[0].certainty = 0.8;
        assert!(matches!(Scenario::from_record(r), Err(DialogueError::Scenario(_))));

        let mut r = record();
        r.perspectives.push("a & b".into());
        assert!(Scenario::from_record(r).is_err());

        let mut r = record();
        r.trust_levels = vec![TrustLevel { label: "x".into(), tau: 0.2 }, TrustLevel { label: "y".into(), tau: 0.5 }];
        assert!(Scenario::from_record(r).is_err());

        let mut r = record();
        r.gamma = 0.0;
        assert!(Scenario::from_record(r).is_err());

        let mut r = record();
        r.schema = 2;
        assert!(Scenario::from_record(r).is_err());

        let mut r = record();
        r.agent_kb.push("c".into());
        let err = Scenario::from_record(r).unwrap_err().to_string();
        assert!(err.contains("agent_kb[2]"), "{err}");
    }

    #[test]
    fn certainty_labels() {
        assert_eq!(certainty_label(0.9), Some("High Certainty"));
        assert_eq!(certainty_label(0.1), Some("High Uncertainty"));
        assert_eq!(certainty_label(0.8), None);
    }
}
