//! `argus` subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use argus_core::dialogue::{replay_with, DialogueError, DialogueTrace, Scenario};
use argus_core::evaluation::{self, Cohort, Variant};
use argus_core::stats;
use argus_core::{Source, UpdateRule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::http::{router, AppState};
use crate::store::SessionStore;

#[derive(Debug, Parser)]
#[command(name = "argus", version, about = "Replay, fit, evaluate and serve argumentation dialogues")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a trace and print the distribution after every move.
    Replay(ReplayArgs),
    /// Fit a personal gamma for every participant of a cohort.
    Fit(FitArgs),
    /// Compare the update rules on a cohort.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic cohort.
    Simulate(SimulateArgs),
    /// Serve the HTTP session API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    /// Overrides the scenario's rule.
    #[arg(long)]
    pub rule: Option<UpdateRule>,
    /// Overrides the scenario's gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Also write a JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Directory holding rounds.csv and traces/.
    #[arg(long)]
    pub cohort: PathBuf,
    #[arg(long, default_value = "upper_bound")]
    pub variant: Variant,
    /// Comma-separated gamma grid.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Write the fits as CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub cohort: PathBuf,
    #[arg(long, default_value_t = 0.7)]
    pub gamma: f64,
    /// Restrict to one rule; all four by default.
    #[arg(long)]
    pub rule: Option<UpdateRule>,
    /// Also write a JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimulationMode {
    /// Policy agent against simulated humans with random ground truths.
    ClosedLoop,
    /// Random moves, rankings from the proposed rule.
    Forward,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub participants: usize,
    #[arg(long, value_enum, default_value_t = SimulationMode::ClosedLoop)]
    pub mode: SimulationMode,
    /// Gamma of every participant in forward mode.
    #[arg(long, default_value_t = 0.7)]
    pub gamma: f64,
    /// Personal gammas drawn from in closed-loop mode.
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.5,0.6,0.7,0.8,0.9")]
    pub gammas: Vec<f64>,
    /// Write the cohort directory here; otherwise print rounds.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Default scenario for sessions created without one.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
    #[arg(long, env = "ARGUS_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
}

/// A failure and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<DialogueError> for Failure {
    fn from(e: DialogueError) -> Self {
        match e.degenerate_timestep() {
            Some(t) => Failure { code: 2, message: format!("degenerate update at timestep {t}: {e}") },
            None => Failure::input(e.to_string()),
        }
    }
}

impl From<argus_core::belief::BeliefError> for Failure {
    fn from(e: argus_core::belief::BeliefError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<evaluation::EvaluationError> for Failure {
    fn from(e: evaluation::EvaluationError) -> Self {
        match e {
            evaluation::EvaluationError::Dialogue { participant, source } => {
                let f = Failure::from(source);
                Failure { code: f.code, message: format!("participant {participant}: {}", f.message) }
            }
            other => Failure::input(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    Scenario::from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_cohort(dir: &Path, scenario: Scenario) -> Result<Cohort, Failure> {
    evaluation::read_cohort(dir, scenario).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))
}

/// Parses arguments, runs the command and reports failures on stderr.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Runs a command, returning what it prints on success.
pub fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Replay(a) => replay(&a),
        Command::Fit(a) => fit(&a),
        Command::Evaluate(a) => evaluate(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Serve(a) => serve(a).map(|()| String::new()),
    }
}

fn fmt_probs(p: &[f64]) -> String {
    p.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")
}

fn replay(a: &ReplayArgs) -> Result<String, Failure> {
    let scenario = load_scenario(&a.scenario)?;
    let trace = DialogueTrace::from_json(&read(&a.trace)?)
        .map_err(|e| Failure::input(format!("{}: {e}", a.trace.display())))?;
    let rule = a.rule.unwrap_or(scenario.rule);
    let gamma = a.gamma.unwrap_or(scenario.gamma);
    let warnings = trace.validate(&scenario)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let dists = replay_with(&scenario, &trace, rule, gamma)?;
    let params = argus_core::Params::new(gamma);

    let mut out = String::new();
    let v = &scenario.vocab;
    writeln!(out, "rule {rule}, gamma {gamma}").unwrap();
    writeln!(out, "models by id, atoms {}: bit k is atom k", v.atoms().join(", ")).unwrap();
    writeln!(out, "prior        {}", fmt_probs(dists[0].probs())).unwrap();
    let mut steps = vec![json!({"t": 0, "probs": dists[0].probs()})];
    for (mv, d) in trace.moves.iter().zip(&dists[1..]) {
        let p = argus_core::belief::move_probability(mv, rule, &params)
            .map_err(|e| Failure::input(e.to_string()))?;
        let who = match mv.source {
            Source::Agent => "agent",
            Source::Human => "human",
        };
        writeln!(out, "t={:<3} {who} p={p:.6} {}  {}", mv.timestep, fmt_probs(d.probs()), mv.argument.to_text(v)).unwrap();
        steps.push(json!({"t": mv.timestep, "source": mv.source, "p": p, "probs": d.probs()}));
    }
    let last = dists.last().expect("prior is always present");
    let ranking = last.rank_perspectives(&scenario.perspectives)?;
    writeln!(out, "final ranking:").unwrap();
    for (pos, &i) in ranking.iter().enumerate() {
        let f = &scenario.perspectives[i];
        writeln!(out, "  {}. [{i}] {}  ({:.6})", pos + 1, f.to_text(v), last.degree_of_belief(f)?).unwrap();
    }
    let ends = argus_core::dialogue::round_end_distributions(&trace, &dists);
    let mut rhos = Vec::new();
    for (k, (human, d)) in trace.round_rankings.iter().zip(&ends).enumerate() {
        let framework = d.rank_perspectives(&scenario.perspectives)?;
        let rho: f64 = stats::spearman_orders(&framework, human).map_err(|e| Failure::input(e.to_string()))?;
        writeln!(out, "round {} rho {rho:.6}", k + 1).unwrap();
        rhos.push(rho);
    }
    if let Some(path) = &a.out {
        let report = json!({
            "rule": rule, "gamma": gamma, "vocab": v.atoms(), "steps": steps,
            "final_ranking": ranking, "round_rho": rhos, "warnings": warnings,
        });
        write(path, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    Ok(out)
}

fn fit(a: &FitArgs) -> Result<String, Failure> {
    let cohort = load_cohort(&a.cohort, load_scenario(&a.scenario)?)?;
    let grid = a.grid.clone().unwrap_or_else(evaluation::default_grid);
    let fits = evaluation::fit_gamma(&cohort, a.variant, &grid)?;
    let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut csv = String::from("participant_id,gamma,fit_rounds,eval_rounds,fit_rho,eval_rho\n");
    for f in &fits {
        let eval = f.eval_rho.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>().join(" ");
        writeln!(csv, "{},{},{},{},{:.6},{eval}", f.participant, f.gamma, join(&f.fit_rounds), join(&f.eval_rounds), f.fit_rho)
            .unwrap();
    }
    match &a.out {
        Some(path) => {
            write(path, &csv)?;
            Ok(format!("{} fits written to {}\n", fits.len(), path.display()))
        }
        None => Ok(csv),
    }
}

fn evaluate(a: &EvaluateArgs) -> Result<String, Failure> {
    let cohort = load_cohort(&a.cohort, load_scenario(&a.scenario)?)?;
    let methods: Vec<UpdateRule> = match a.rule {
        Some(r) => vec![r],
        None => UpdateRule::ALL.to_vec(),
    };
    let summaries = evaluation::evaluate_methods(&cohort, &methods, a.gamma)?;
    let trust = evaluation::trust_t_tests(&cohort.records);
    let mut out = String::from("rule,rounds,high_fraction,mean_rho,failed\n");
    for s in &summaries {
        writeln!(out, "{},{},{:.6},{:.6},{}", s.rule, s.rhos.len(), s.high_fraction, s.mean_rho, s.failed.len()).unwrap();
    }
    out.push_str("trust rounds,pairs,mean_diff,t,p_two_sided,p_greater\n");
    for t in &trust {
        writeln!(
            out,
            "{}->{},{},{:.6},{:.6},{:.6},{:.6}",
            t.from_round, t.to_round, t.pairs, t.mean_difference, t.t, t.p_two_sided, t.p_greater
        )
        .unwrap();
    }
    if let Some(path) = &a.out {
        let report = json!({"gamma": a.gamma, "methods": summaries, "trust_t_tests": trust});
        write(path, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    Ok(out)
}

fn simulate(a: &SimulateArgs) -> Result<String, Failure> {
    let scenario = load_scenario(&a.scenario)?;
    for &g in a.gammas.iter().chain([&a.gamma]) {
        if !(argus_core::trust::MIN_INVERTIBLE_GAMMA..=1.0).contains(&g) {
            return Err(Failure::input(format!("gamma {g} is outside [{}, 1]", argus_core::trust::MIN_INVERTIBLE_GAMMA)));
        }
    }
    let cohort = match a.mode {
        SimulationMode::ClosedLoop => evaluation::closed_loop_cohort(&scenario, &a.gammas, a.participants, a.seed)?,
        SimulationMode::Forward => evaluation::forward_model_cohort(&scenario, a.gamma, a.participants, a.seed)?,
    };
    match &a.out {
        Some(dir) => {
            evaluation::write_cohort(dir, &cohort).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            Ok(format!("{} participants written to {}\n", cohort.traces.len(), dir.display()))
        }
        None => {
            let mut buf = Vec::new();
            evaluation::write_round_records(&mut buf, &cohort.records).map_err(|e| Failure::input(e.to_string()))?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

fn serve(a: ServeArgs) -> Result<(), Failure> {
    let default_scenario = a.scenario.as_deref().map(load_scenario).transpose()?.map(Arc::new);
    let store = match &a.data_dir {
        Some(dir) => {
            let (store, skipped) =
                SessionStore::open(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            for (path, e) in skipped {
                eprintln!("warning: could not restore {}: {e}", path.display());
            }
            store
        }
        None => SessionStore::in_memory(),
    };
    let app = router(Arc::new(AppState { store, default_scenario }));
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::input(e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(&a.addr)
            .await
            .map_err(|e| Failure::input(format!("{}: {e}", a.addr)))?;
        eprintln!("listening on http://{}", listener.local_addr().map_err(|e| Failure::input(e.to_string()))?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| Failure::input(e.to_string()))
    })
}
