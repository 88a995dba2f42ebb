use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::scenario::{Scenario, SCHEMA_VERSION};
use super::DialogueError;
use crate::argument::{self, Move, MoveRecord, Source, Validity, DEFAULT_PREMISE_CAP};
use crate::logic::Vocabulary;

/// Annotated moves of one dialogue plus the rankings the human reported at the
/// end of each round.
///
/// A round is an agent move (carrying the human's trust in it) optionally
/// followed by one human counterargument.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogueTrace {
    pub scenario: String,
    pub vocab: Arc<Vocabulary>,
    pub moves: Vec<Move>,
    pub round_rankings: Vec<Vec<usize>>,
}

/// Trace file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub schema: u32,
    pub scenario: String,
    pub vocab: Vec<String>,
    pub moves: Vec<MoveRecord>,
    #[serde(default)]
    pub round_rankings: Vec<Vec<usize>>,
}

fn malformed(msg: impl Into<String>) -> DialogueError {
    DialogueError::MalformedTrace(msg.into())
}

impl DialogueTrace {
    pub fn new(scenario: &Scenario) -> Self {
        DialogueTrace {
            scenario: scenario.name.clone(),
            vocab: scenario.vocab.clone(),
            moves: Vec::new(),
            round_rankings: Vec::new(),
        }
    }

    /// Number of rounds started, i.e. agent moves.
    pub fn rounds(&self) -> usize {
        self.moves.iter().filter(|m| m.source == Source::Agent).count()
    }

    pub fn next_timestep(&self) -> u64 {
        self.moves.last().map_or(1, |m| m.timestep + 1)
    }

    /// Index ranges of the moves making up each round.
    pub fn round_spans(&self) -> Vec<std::ops::Range<usize>> {
        let starts: Vec<usize> =
            self.moves.iter().enumerate().filter(|(_, m)| m.source == Source::Agent).map(|(i, _)| i).collect();
        starts
            .iter()
            .enumerate()
            .map(|(k, &s)| s..starts.get(k + 1).copied().unwrap_or(self.moves.len()))
            .collect()
    }

    pub fn to_record(&self) -> TraceRecord {
        TraceRecord {
            schema: SCHEMA_VERSION,
            scenario: self.scenario.clone(),
            vocab: self.vocab.atoms().to_vec(),
            moves: self.moves.iter().map(|m| m.to_record(&self.vocab)).collect(),
            round_rankings: self.round_rankings.clone(),
        }
    }

    pub fn from_record(r: &TraceRecord) -> Result<Self, DialogueError> {
        if r.schema != SCHEMA_VERSION {
            return Err(malformed(format!("unsupported schema version {}", r.schema)));
        }
        let vocab = Arc::new(Vocabulary::new(r.vocab.iter().cloned()).map_err(|e| malformed(format!("vocab: {e}")))?);
        let moves = r
            .moves
            .iter()
            .enumerate()
            .map(|(i, m)| Move::from_record(m, &vocab).map_err(|e| malformed(format!("moves[{i}]: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DialogueTrace { scenario: r.scenario.clone(), vocab, moves, round_rankings: r.round_rankings.clone() })
    }

    /// Canonical JSON: fixed field order, two-space indentation, shortest
    /// round-trip float formatting.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_record()).expect("trace serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DialogueError> {
        let record: TraceRecord = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        Self::from_record(&record)
    }

    /// Checks the trace against a scenario. Returns warnings for human
    /// arguments that are not valid arguments; structural problems are errors.
    pub fn validate(&self, scenario: &Scenario) -> Result<Vec<String>, DialogueError> {
        if *self.vocab != *scenario.vocab {
            return Err(malformed(format!(
                "trace vocabulary {:?} differs from scenario vocabulary {:?}",
                self.vocab.atoms(),
                scenario.vocab.atoms()
            )));
        }
        let mut prev: Option<&Move> = None;
        for (i, m) in self.moves.iter().enumerate() {
            match prev {
                None if m.source != Source::Agent => {
                    return Err(malformed("the first move must be an agent move"));
                }
                Some(p) if m.timestep <= p.timestep => {
                    return Err(malformed(format!(
                        "moves[{i}]: timestep {} does not follow {}",
                        m.timestep, p.timestep
                    )));
                }
                Some(p) if p.source == Source::Human && m.source == Source::Human => {
                    return Err(malformed(format!("moves[{i}]: two human moves in one round")));
                }
                _ => {}
            }
            prev = Some(m);
        }
        let rounds = self.rounds();
        if rounds > scenario.max_rounds {
            return Err(malformed(format!("{rounds} rounds exceed the scenario maximum of {}", scenario.max_rounds)));
        }
        if self.round_rankings.len() > rounds {
            return Err(malformed(format!("{} rankings for {rounds} rounds", self.round_rankings.len())));
        }
        let n = scenario.perspectives.len();
        for (r, ranking) in self.round_rankings.iter().enumerate() {
            if !is_permutation(ranking, n) {
                return Err(malformed(format!("round_rankings[{r}] is not a permutation of 0..{n}")));
            }
        }

        let mut warnings = Vec::new();
        for m in self.moves.iter().filter(|m| m.source == Source::Human) {
            let v = argument::validity(&self.vocab, &m.argument, DEFAULT_PREMISE_CAP)?;
            if v != Validity::Valid {
                warnings.push(format!(
                    "t={}: human argument {} is not a valid argument ({v:?})",
                    m.timestep,
                    m.argument.to_text(&self.vocab)
                ));
            }
        }
        Ok(warnings)
    }
}

pub(crate) fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argument::Argument;

    fn scenario() -> Scenario {
        Scenario::from_json(
            r#"{"schema": 1, "name": "toy", "vocab": ["a", "b"], "agent_kb": ["a", "a -> b"],
                "human_pool": [{"premises": ["!a"], "claim": "!a", "certainty": 0.9}],
                "perspectives": ["a & b", "a & !b", "!a & b", "!a & !b"], "gamma": 0.85}"#,
        )
        .unwrap()
    }

    fn trace(s: &Scenario) -> DialogueTrace {
        let v = &s.vocab;
        let mut t = DialogueTrace::new(s);
        t.moves.push(Move::agent(Argument::parse(v, &["a", "a -> b"], "b").unwrap(), 1, 0.6).unwrap());
        t.moves.push(Move::human(Argument::parse(v, &["!a"], "!a").unwrap(), 2, 0.9).unwrap());
        t.round_rankings.push(vec![2, 3, 0, 1]);
        t
    }

    #[test]
    fn json_roundtrip_is_byte_identical() {
        let s = scenario();
        let json = trace(&s).to_json();
        let again = DialogueTrace::from_json(&json).unwrap();
        assert_eq!(again, trace(&s));
        assert_eq!(again.to_json(), json);
        assert!(json.contains(r#""trust": 0.6"#));
    }

    #[test]
    fn well_formed_trace_validates() {
        let s = scenario();
        assert_eq!(trace(&s).validate(&s).unwrap(), Vec::<String>::new());
        assert_eq!(trace(&s).rounds(), 1);
        assert_eq!(trace(&s).round_spans(), vec![0..2]);
    }

    #[test]
    fn structural_errors() {
        let s = scenario();
        let mut t = trace(&s);
        t.moves[1].timestep = 1;
        assert!(t.validate(&s).is_err());

        let mut t = trace(&s);
        t.moves.swap(0, 1);
        t.moves[0].timestep = 1;
        t.moves[1].timestep = 2;
        assert!(t.validate(&s).is_err());

        let mut t = trace(&s);
        let extra = t.moves[1].clone();
        t.moves.push(Move { timestep: 3, ..extra });
        assert!(t.validate(&s).is_err());

        let mut t = trace(&s);
        t.round_rankings[0] = vec![0, 0, 1, 2];
        assert!(t.validate(&s).is_err());

        let mut t = trace(&s);
        for k in 0..3 {
            let mut m = t.moves[0].clone();
            m.timestep = 10 + k;
            t.moves.push(m);
        }
        assert!(t.validate(&s).is_err(), "four rounds exceed the default maximum");
    }

    #[test]
    fn invalid_human_argument_is_a_warning() {
        let s = scenario();
        let mut t = trace(&s);
        t.moves[1].argument = Argument::parse(&s.vocab, &["!a", "b"], "!a").unwrap();
        let w = t.validate(&s).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("NotMinimal"), "{w:?}");
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let s = scenario();
        let json = trace(&s).to_json().replace("\"schema\": 1", "\"schema\": 3");
        assert!(DialogueTrace::from_json(&json).is_err());
        let json = trace(&s).to_json().replace("\"t\": 1", "\"t\": 1, \"x\": 0");
        assert!(DialogueTrace::from_json(&json).is_err());
    }
}
