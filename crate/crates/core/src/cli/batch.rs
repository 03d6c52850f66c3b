use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use super::commands::{execute, Job, Output};
use super::input::{self, parse};
use super::{CliError, GlobalOpts};

/// A batch of inputs for one command. Each input is either an inline JSON
/// document or a path, resolved against the manifest's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchManifest {
    pub command: String,
    #[serde(default)]
    pub options: BatchOptions,
    pub inputs: Vec<Value>,
}

/// Per-command options, named as the corresponding CLI flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchOptions {
    pub brute_force: Option<i64>,
    pub max_iters: Option<usize>,
    pub max_iter: Option<usize>,
    pub r: Option<usize>,
    pub degrees: Option<Vec<usize>>,
    pub steps: Option<usize>,
    pub c: Option<String>,
    pub r_min: Option<i64>,
    pub r_max: Option<i64>,
    pub k: Option<Vec<i64>>,
}

fn job_for(m: &BatchManifest) -> Result<Job, CliError> {
    let o = &m.options;
    let c = || o.c.clone().unwrap_or_else(|| "1".into());
    Ok(match m.command.as_str() {
        "hm" => Job::Hm { brute_force: o.brute_force },
        "hypersurface" => Job::Hypersurface,
        "points classify" => Job::PointsClassify,
        "points balance" => Job::PointsBalance { max_iters: o.max_iters },
        "flow" => Job::Flow { max_iters: o.max_iters },
        "metric balance" => Job::MetricBalance {
            r: o.r.ok_or_else(|| CliError::Input { pointer: "/options/r".into(), message: "required".into() })?,
            max_iter: o.max_iter.unwrap_or(500),
        },
        "metric expansion" => Job::MetricExpansion { degrees: o.degrees.clone().unwrap_or_else(|| vec![12, 16, 20]) },
        "metric energy" => Job::MetricEnergy { steps: o.steps.unwrap_or(40) },
        "slope classify" => Job::SlopeClassify,
        "slope mu" => Job::SlopeMu { c: c() },
        "slope chow" => Job::SlopeChow {
            c: match &o.c {
                None => 1,
                Some(s) => s.parse().map_err(|_| CliError::Input {
                    pointer: "/options/c".into(),
                    message: "chow needs a positive integer c".into(),
                })?,
            },
        },
        "slope sheaf" => Job::SlopeSheaf,
        "slope series" => Job::SlopeSeries { steps: o.steps.unwrap_or(32) },
        "weights" | "slope weights" => Job::Weights {
            c: c(),
            r_min: o.r_min.unwrap_or(5),
            r_max: o.r_max.unwrap_or(50),
            k: o.k.clone().unwrap_or_default(),
        },
        "df" | "slope df" => Job::Df { c: c() },
        other => {
            return Err(CliError::Input { pointer: "/command".into(), message: format!("unknown batch command {other:?}") })
        }
    })
}

fn load(item: &Value, base: &Path) -> Result<Value, CliError> {
    match item {
        Value::String(p) => {
            let path = PathBuf::from(p);
            input::read_value(&if path.is_absolute() { path } else { base.join(path) })
        }
        other => Ok(other.clone()),
    }
}

/// Runs every input of the manifest. Rows fail independently; the report keeps
/// input order.
pub fn run_batch(manifest: &BatchManifest, base: &Path, global: &GlobalOpts) -> Result<Output, CliError> {
    let job = job_for(manifest)?;
    let rows: Vec<Value> = manifest
        .inputs
        .par_iter()
        .enumerate()
        .map(|(i, item)| match load(item, base).and_then(|v| execute(&job, v, global)) {
            Ok(out) => json!({"index": i, "ok": true, "result": out.result}),
            Err(e) => json!({"index": i, "ok": false, "error": e.to_json()}),
        })
        .collect();
    let ok = rows.iter().filter(|r| r["ok"] == json!(true)).count();
    let csv = super::commands::csv_rows(
        &["index", "ok", "error"],
        rows.iter().map(|r| {
            vec![
                r["index"].to_string(),
                r["ok"].to_string(),
                r["error"]["message"].as_str().unwrap_or_default().to_string(),
            ]
        }),
    );
    let result = json!({
        "command": job.name(),
        "summary": {"total": rows.len(), "ok": ok, "failed": rows.len() - ok},
        "rows": rows,
    });
    Ok(Output { result, csv: Some(csv) })
}

pub(super) fn run_manifest_file(path: &Path, global: &GlobalOpts) -> Result<Output, CliError> {
    let manifest: BatchManifest = parse(input::read_value(path)?)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    run_batch(&manifest, base, global)
}
