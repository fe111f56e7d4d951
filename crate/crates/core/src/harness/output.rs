//! Flat-file experiment artifacts.
//!
//! ```text
//! <out_dir>/config.json
//! <out_dir>/summary.json
//! <out_dir>/traces/replicate_000_solver.csv
//! <out_dir>/traces/replicate_000_random.csv
//! ...
//! ```

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{ComparisonResult, ExperimentConfig, SweepPoint, SweepResult, SweepSpec};
use crate::error::{Error, Result};

pub fn write_json_pretty<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes the config echo, the summary and every arm's daily trace.
pub fn emit_outputs(result: &ComparisonResult, config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    create_dir(out_dir)?;
    write_json_pretty(&out_dir.join("config.json"), config)?;
    write_json_pretty(&out_dir.join("summary.json"), result)?;
    let traces = out_dir.join("traces");
    create_dir(&traces)?;
    for (record, arms) in result.records.iter().zip(&result.traces) {
        let r = record.replicate;
        arms.solver
            .write_csv(traces.join(format!("replicate_{r:03}_solver.csv")))?;
        arms.random
            .write_csv(traces.join(format!("replicate_{r:03}_random.csv")))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepConfigEcho<'a> {
    #[serde(flatten)]
    experiment: &'a ExperimentConfig,
    sweep: &'a SweepSpec,
}

/// Directory of one grid point inside a sweep output directory.
pub fn sweep_point_dir(out_dir: &Path, point: &SweepPoint) -> std::path::PathBuf {
    out_dir.join("points").join(format!("point_{:03}", point.index))
}

/// Writes one finished grid point: its own experiment directory plus a line in `points.jsonl`.
pub fn emit_sweep_point(point: &SweepPoint, config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    use std::io::Write;

    let cfg = point.params.apply(config)?;
    emit_outputs(&point.result, &cfg, &sweep_point_dir(out_dir, point))?;
    let log = out_dir.join("points.jsonl");
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&log)
        .map_err(|e| Error::io(&log, e))?;
    let line = serde_json::to_string(point).map_err(|e| Error::json(&log, e))?;
    writeln!(file, "{line}").map_err(|e| Error::io(&log, e))
}

/// Writes the sweep's config echo and global summary.
pub fn emit_sweep_outputs(
    result: &SweepResult,
    spec: &SweepSpec,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<()> {
    create_dir(out_dir)?;
    write_json_pretty(
        &out_dir.join("config.json"),
        &SweepConfigEcho {
            experiment: config,
            sweep: spec,
        },
    )?;
    write_json_pretty(&out_dir.join("sweep_summary.json"), result)
}
