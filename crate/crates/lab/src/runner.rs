//! Runs scenarios in parallel and writes their reports.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::report::{write_rows, write_summary, Recorder, ReportRow, ScenarioSummary};
use crate::scenarios;

pub const SUMMARY_FILE: &str = "summary.csv";

/// Everything produced by one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub summary: ScenarioSummary,
    pub rows: Vec<ReportRow>,
}

/// Runs one scenario in memory; nothing is written.
pub fn run_scenario(cfg: &ScenarioConfig) -> ScenarioOutcome {
    let name = cfg.scenario.name();
    let mut rec = Recorder::new(name);
    let error = scenarios::run(cfg, &mut rec).err().map(|e| e.to_string());
    let elapsed_ms = rec.elapsed_ms();
    let (rows, failures) = rec.into_parts();
    ScenarioOutcome {
        summary: ScenarioSummary {
            scenario: name,
            statement_ids: cfg.scenario.anchors().to_vec(),
            rows: rows.len(),
            failures,
            error,
            elapsed_ms,
        },
        rows,
    }
}

pub fn csv_path(out: &Path, scenario: &str) -> PathBuf {
    out.join(format!("{scenario}.csv"))
}

fn write_file(path: &Path, write: impl FnOnce(BufWriter<File>) -> csv::Result<()>) -> std::io::Result<()> {
    let file = File::create(path)?;
    write(BufWriter::new(file)).map_err(std::io::Error::other)
}

/// Runs every config concurrently, writes `<scenario>.csv` for each and
/// then `summary.csv` into each distinct output directory.
pub fn run_all(configs: &[ScenarioConfig]) -> std::io::Result<Vec<ScenarioSummary>> {
    for cfg in configs {
        std::fs::create_dir_all(&cfg.out)?;
    }
    let outcomes: Vec<std::io::Result<ScenarioSummary>> = configs
        .par_iter()
        .map(|cfg| {
            let outcome = run_scenario(cfg);
            write_file(&csv_path(&cfg.out, cfg.scenario.name()), |w| {
                write_rows(w, &outcome.rows)
            })?;
            Ok(outcome.summary)
        })
        .collect();
    let summaries = outcomes.into_iter().collect::<std::io::Result<Vec<_>>>()?;
    let mut dirs: Vec<&Path> = configs.iter().map(|c| c.out.as_path()).collect();
    dirs.sort();
    dirs.dedup();
    for dir in dirs {
        let items: Vec<ScenarioSummary> = configs
            .iter()
            .zip(&summaries)
            .filter(|(c, _)| c.out == dir)
            .map(|(_, s)| s.clone())
            .collect();
        write_file(&dir.join(SUMMARY_FILE), |w| write_summary(w, &items))?;
    }
    Ok(summaries)
}

/// 0 when every scenario passed, 1 otherwise.
pub fn exit_status(summaries: &[ScenarioSummary]) -> u8 {
    u8::from(!summaries.iter().all(ScenarioSummary::passed))
}
