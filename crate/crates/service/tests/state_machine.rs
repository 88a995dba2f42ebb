use std::path::Path;
use std::sync::Arc;

use argus::session::{Session, SessionError, State, TrustInput};
use argus_core::dialogue::{replay, Scenario};

#[derive(Debug, Clone)]
enum Action {
    Trust(f64),
    Counter(Option<usize>),
    Ranking(Vec<usize>),
    End,
}

fn load(name: &str) -> Arc<Scenario> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Arc::new(Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap())
}

fn actions(scenario: &Scenario) -> Vec<Action> {
    let n = scenario.perspectives.len();
    let mut out = vec![Action::Trust(0.2), Action::Trust(0.9), Action::Counter(None), Action::End];
    out.extend((0..scenario.human_pool.len()).map(|i| Action::Counter(Some(i))));
    out.push(Action::Ranking((0..n).collect()));
    out.push(Action::Ranking((0..n).rev().collect()));
    out.push(Action::Ranking(vec![0; n]));
    out
}

fn apply(s: &mut Session, a: &Action) -> Result<(), SessionError> {
    match a {
        Action::Trust(tau) => s.trust(&TrustInput { level: None, tau: Some(*tau) }),
        Action::Counter(i) => s.counter(*i),
        Action::Ranking(p) => s.ranking(p).map(|_| ()),
        Action::End => s.end(),
    }
}

fn allowed(from: State, a: &Action, to: State) -> bool {
    use State::*;
    match (from, a, to) {
        (AwaitingTrust, Action::Trust(_), AwaitingCounter) => true,
        (AwaitingCounter, Action::Counter(_), AwaitingRanking) => true,
        (AwaitingRanking, Action::Ranking(_), AwaitingTrust | Ended) => true,
        (f, Action::End, Ended) => f != Ended,
        _ => false,
    }
}

fn is_legal_for(state: State, a: &Action) -> bool {
    matches!(
        (state, a),
        (State::AwaitingTrust, Action::Trust(_))
            | (State::AwaitingCounter, Action::Counter(_))
            | (State::AwaitingRanking, Action::Ranking(_))
    ) || (state != State::Ended && matches!(a, Action::End))
}

struct Tally {
    transitions: usize,
    rejections: usize,
    completed: usize,
}

/// Rejected actions leave the session untouched, so only successful branches
/// need extending: every longer sequence is equivalent to one explored here.
fn explore(s: &Session, scenario: &Scenario, all: &[Action], tally: &mut Tally) {
    let replayed = replay(scenario, &s.trace).unwrap();
    assert_eq!(replayed.last().unwrap().probs(), s.distribution().probs());
    let total: f64 = s.distribution().probs().iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert_ne!(s.state, State::BetweenRounds);
    assert_eq!(s.pending.is_some(), s.state == State::AwaitingTrust);
    if s.state == State::Ended {
        tally.completed += 1;
    }
    for a in all {
        let mut next = s.clone();
        match apply(&mut next, a) {
            Ok(()) => {
                assert!(allowed(s.state, a, next.state), "{:?} --{a:?}--> {:?}", s.state, next.state);
                tally.transitions += 1;
                explore(&next, scenario, all, tally);
            }
            Err(e) => {
                if is_legal_for(s.state, a) {
                    assert!(matches!(e, SessionError::Invalid(_)), "{:?} {a:?}: {e}", s.state);
                } else {
                    assert!(matches!(e, SessionError::OutOfOrder { .. }), "{:?} {a:?}: {e}", s.state);
                }
                assert_eq!(next.state, s.state);
                assert_eq!(next.trace, s.trace);
                tally.rejections += 1;
            }
        }
    }
}

#[test]
fn every_reachable_state_follows_the_declared_transitions() {
    for name in ["toy.json", "venue.json"] {
        let scenario = load(name);
        let all = actions(&scenario);
        let mut tally = Tally { transitions: 0, rejections: 0, completed: 0 };
        explore(&Session::create("s".into(), scenario.clone()).unwrap(), &scenario, &all, &mut tally);
        assert!(tally.transitions > 0 && tally.rejections > 0 && tally.completed > 0);
    }
}

#[test]
fn rounds_never_exceed_the_limit() {
    let scenario = load("venue.json");
    let mut s = Session::create("s".into(), scenario.clone()).unwrap();
    let n = scenario.perspectives.len();
    while s.state != State::Ended {
        s.trust(&TrustInput { level: None, tau: Some(0.7) }).unwrap();
        s.counter(Some(0)).unwrap();
        s.ranking(&(0..n).collect::<Vec<_>>()).unwrap();
    }
    assert!(s.trace.rounds() <= scenario.max_rounds);
    assert_eq!(s.round_rho.len(), s.trace.rounds());
}
