//! A live dialogue: the agent presents an argument, the human gives trust,
//! picks a counterargument and ranks the perspectives, round after round.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use argus_core::dialogue::{
    select_agent_argument, DialogueError, DialogueTrace, Replayer, Scenario, ScenarioRecord, TraceRecord,
};
use argus_core::stats;
use argus_core::{Argument, ArgumentError, BeliefError, Distribution, Move};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum State {
    AwaitingTrust,
    AwaitingCounter,
    AwaitingRanking,
    /// Only observable inside a ranking step, before the next argument is chosen.
    BetweenRounds,
    Ended,
}

impl State {
    pub fn name(&self) -> &'static str {
        match self {
            State::AwaitingTrust => "awaiting_trust",
            State::AwaitingCounter => "awaiting_counter",
            State::AwaitingRanking => "awaiting_ranking",
            State::BetweenRounds => "between_rounds",
            State::Ended => "ended",
        }
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{action} is not allowed in state {}", state.name())]
    OutOfOrder { action: &'static str, state: State },
    #[error("{0}")]
    Invalid(String),
    #[error("degenerate update at timestep {timestep}: {message}")]
    Degenerate { timestep: u64, message: String },
    #[error("{0}")]
    Internal(String),
}

impl From<DialogueError> for SessionError {
    fn from(e: DialogueError) -> Self {
        match e {
            DialogueError::Update { timestep, source: BeliefError::DegenerateUpdate(message) } => {
                SessionError::Degenerate { timestep, message }
            }
            other => SessionError::Internal(other.to_string()),
        }
    }
}

impl From<ArgumentError> for SessionError {
    fn from(e: ArgumentError) -> Self {
        SessionError::Invalid(e.to_string())
    }
}

/// Trust given either by level label or as a raw value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrustInput {
    #[serde(default)]
    pub level: Option<String>,
    #[serde(default)]
    pub tau: Option<f64>,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub scenario: Arc<Scenario>,
    pub trace: DialogueTrace,
    pub state: State,
    /// The agent argument awaiting the human's trust.
    pub pending: Option<Argument>,
    /// Rho per completed round between the framework and the human ranking.
    pub round_rho: Vec<f64>,
    pub warnings: Vec<String>,
    pub created_at: u64,
    pub updated_at: u64,
    replayer: Replayer,
}

impl Session {
    pub fn create(id: String, scenario: Arc<Scenario>) -> Result<Self, SessionError> {
        let t = now();
        let mut s = Session {
            id,
            trace: DialogueTrace::new(&scenario),
            replayer: Replayer::new(&scenario),
            scenario,
            state: State::BetweenRounds,
            pending: None,
            round_rho: Vec::new(),
            warnings: Vec::new(),
            created_at: t,
            updated_at: t,
        };
        s.start_round()?;
        Ok(s)
    }

    pub fn distribution(&self) -> &Distribution {
        self.replayer.current()
    }

    pub fn round(&self) -> usize {
        self.trace.rounds() + usize::from(self.pending.is_some())
    }

    fn require(&self, action: &'static str, state: State) -> Result<(), SessionError> {
        if self.state != state {
            return Err(SessionError::OutOfOrder { action, state: self.state });
        }
        Ok(())
    }

    fn start_round(&mut self) -> Result<(), SessionError> {
        debug_assert_eq!(self.state, State::BetweenRounds);
        if self.trace.rounds() >= self.scenario.max_rounds {
            self.state = State::Ended;
            return Ok(());
        }
        match select_agent_argument(self.replayer.current(), &self.scenario, &self.trace) {
            Ok(c) => {
                self.pending = Some(c.argument);
                self.state = State::AwaitingTrust;
            }
            Err(DialogueError::NoArgumentAvailable) => self.state = State::Ended,
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    fn push(&mut self, mv: Move) -> Result<(), SessionError> {
        self.replayer.apply(&mv)?;
        self.trace.moves.push(mv);
        self.updated_at = now();
        Ok(())
    }

    pub fn trust(&mut self, input: &TrustInput) -> Result<(), SessionError> {
        self.require("trust", State::AwaitingTrust)?;
        let tau = match (&input.level, input.tau) {
            (Some(label), None) => self
                .scenario
                .trust_level(label)
                .ok_or_else(|| SessionError::Invalid(format!("unknown trust level `{label}`")))?
                .tau,
            (None, Some(tau)) if (0.0..=1.0).contains(&tau) => tau,
            (None, Some(tau)) => return Err(SessionError::Invalid(format!("tau {tau} is outside [0, 1]"))),
            _ => return Err(SessionError::Invalid("give exactly one of `level` and `tau`".into())),
        };
        let argument = self.pending.clone().expect("an argument is pending while awaiting trust");
        self.push(Move::agent(argument, self.trace.next_timestep(), tau)?)?;
        self.pending = None;
        self.state = State::AwaitingCounter;
        Ok(())
    }

    /// `None` skips the counterargument.
    pub fn counter(&mut self, pool_index: Option<usize>) -> Result<(), SessionError> {
        self.require("counter", State::AwaitingCounter)?;
        if let Some(i) = pool_index {
            let entry = self.scenario.human_pool.get(i).ok_or_else(|| {
                SessionError::Invalid(format!("pool_index {i} is out of range (pool has {})", self.scenario.human_pool.len()))
            })?;
            let mv = Move::human(entry.argument.clone(), self.trace.next_timestep(), entry.certainty)?;
            self.push(mv)?;
        }
        self.state = State::AwaitingRanking;
        Ok(())
    }

    /// Records the human ranking and moves to the next round or ends.
    /// Returns the round's rho.
    pub fn ranking(&mut self, permutation: &[usize]) -> Result<f64, SessionError> {
        self.require("ranking", State::AwaitingRanking)?;
        let n = self.scenario.perspectives.len();
        let mut seen = vec![false; n];
        if permutation.len() != n || !permutation.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true)) {
            return Err(SessionError::Invalid(format!("permutation must list each of 0..{n} exactly once")));
        }
        let framework = self
            .replayer
            .current()
            .rank_perspectives(&self.scenario.perspectives)
            .map_err(|e| SessionError::Internal(e.to_string()))?;
        let rho = if n >= 2 {
            stats::spearman_orders(&framework, permutation).map_err(|e| SessionError::Internal(e.to_string()))?
        } else {
            1.0
        };
        self.trace.round_rankings.push(permutation.to_vec());
        self.round_rho.push(rho);
        self.updated_at = now();
        self.state = State::BetweenRounds;
        self.start_round()?;
        Ok(rho)
    }

    pub fn end(&mut self) -> Result<(), SessionError> {
        if self.state == State::Ended {
            return Err(SessionError::OutOfOrder { action: "end", state: self.state });
        }
        self.pending = None;
        self.state = State::Ended;
        self.updated_at = now();
        Ok(())
    }

    pub fn to_record(&self) -> SessionRecord {
        let v = &self.scenario.vocab;
        SessionRecord {
            id: self.id.clone(),
            scenario: self.scenario.to_record(),
            trace: self.trace.to_record(),
            state: self.state,
            pending: self.pending.as_ref().map(|a| PendingArgument { premises: a.premise_texts(v), claim: a.claim_text(v) }),
            round_rho: self.round_rho.clone(),
            created_at: self.created_at,
            updated_at: self.updated_at,
        }
    }

    /// Rebuilds a session by replaying its stored trace.
    pub fn from_record(r: SessionRecord) -> Result<Self, SessionError> {
        let scenario = Arc::new(Scenario::from_record(r.scenario).map_err(|e| SessionError::Invalid(e.to_string()))?);
        let trace = DialogueTrace::from_record(&r.trace).map_err(|e| SessionError::Invalid(e.to_string()))?;
        let warnings = trace.validate(&scenario).map_err(|e| SessionError::Invalid(e.to_string()))?;
        let mut replayer = Replayer::new(&scenario);
        for mv in &trace.moves {
            replayer.apply(mv)?;
        }
        let pending = r
            .pending
            .map(|p| {
                let premises: Vec<&str> = p.premises.iter().map(String::as_str).collect();
                Argument::parse(&scenario.vocab, &premises, &p.claim)
            })
            .transpose()?;
        Ok(Session {
            id: r.id,
            scenario,
            trace,
            state: r.state,
            pending,
            round_rho: r.round_rho,
            warnings,
            created_at: r.created_at,
            updated_at: r.updated_at,
            replayer,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendingArgument {
    pub premises: Vec<String>,
    pub claim: String,
}

/// On-disk form of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub scenario: ScenarioRecord,
    pub trace: TraceRecord,
    pub state: State,
    pub pending: Option<PendingArgument>,
    pub round_rho: Vec<f64>,
    pub created_at: u64,
    pub updated_at: u64,
}
