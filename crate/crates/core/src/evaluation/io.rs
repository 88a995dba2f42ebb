//! Cohort directories: `rounds.csv` plus `traces/<participant>.json`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Cohort, EvaluationError, RoundRecord};
use crate::dialogue::{DialogueTrace, Scenario};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    participant_id: String,
    round: usize,
    trust: f64,
    /// Comma-joined perspective indices.
    human_ranking: String,
}

pub fn read_round_records<R: Read>(reader: R) -> Result<Vec<RoundRecord>, EvaluationError> {
    let mut out = Vec::new();
    for (line, row) in csv::Reader::from_reader(reader).deserialize::<Row>().enumerate() {
        let row = row?;
        let invalid = |msg: String| EvaluationError::InvalidRecord(format!("row {}: {msg}", line + 1));
        if row.round == 0 {
            return Err(invalid("rounds are numbered from 1".into()));
        }
        if !(0.0..=1.0).contains(&row.trust) {
            return Err(invalid(format!("trust {} is outside [0, 1]", row.trust)));
        }
        let human_ranking = row
            .human_ranking
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(format!("human_ranking: {e}")))?;
        if !crate::dialogue::is_permutation(&human_ranking, human_ranking.len()) {
            return Err(invalid(format!("human_ranking {:?} is not a permutation", row.human_ranking)));
        }
        out.push(RoundRecord { participant: row.participant_id, round: row.round, trust: row.trust, human_ranking });
    }
    Ok(out)
}

pub fn write_round_records<W: Write>(writer: W, records: &[RoundRecord]) -> Result<(), EvaluationError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(Row {
            participant_id: r.participant.clone(),
            round: r.round,
            trust: r.trust,
            human_ranking: r.human_ranking.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cohort(dir: &Path, scenario: Scenario) -> Result<Cohort, EvaluationError> {
    let records = read_round_records(fs::File::open(dir.join("rounds.csv"))?)?;
    let mut cohort = Cohort::new(scenario);
    let traces = dir.join("traces");
    for entry in fs::read_dir(&traces)? {
        let path = entry?.path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let trace = DialogueTrace::from_json(&fs::read_to_string(&path)?)
            .map_err(|source| EvaluationError::Dialogue { participant: id.clone(), source })?;
        cohort.traces.insert(id, trace);
    }
    cohort.records = records;
    Ok(cohort)
}

pub fn write_cohort(dir: &Path, cohort: &Cohort) -> Result<(), EvaluationError> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces)?;
    write_round_records(fs::File::create(dir.join("rounds.csv"))?, &cohort.records)?;
    for (id, trace) in &cohort.traces {
        fs::write(traces.join(format!("{id}.json")), trace.to_json())?;
    }
    Ok(())
}
