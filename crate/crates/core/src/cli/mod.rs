//! Command implementations behind the `multicut` binary.

pub mod format;
pub mod generate;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub use format::{model_from_json, model_to_json, ResultRecord, StageRecord};
pub use generate::{
    gen_synth_inclusion, gen_synth_potts, load_modularity, modularity, parse_edge_list, KARATE_EDGES,
};

use crate::baselines::{default_init, icm, kernighan_lin, lazy_flipper};
use crate::engine::{solve, Rounding, SolveOptions, Status};
use crate::error::{Error, Result};
use crate::metrics::{pixel_accuracy, rand_index, variation_of_information};
use crate::model::{FactorGraph, Labeling, Mode};
use crate::reduction::RowClass;
use crate::separation::parse_schedule;

/// Exit status for a failed command: 3 for internal failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Internal(_) => 3,
        _ => 2,
    }
}

/// Reads a JSON model, or an edge list (anything not ending in `.json`) as a modularity model.
pub fn load_model(path: &Path) -> Result<FactorGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        model_from_json(&text)
    } else {
        load_modularity(&text)
    }
}

pub fn save_model(fg: &FactorGraph, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_json(fg)?)?;
    Ok(())
}

/// Schedule used when none is given.
pub fn default_schedule(mode: Mode) -> &'static str {
    match mode {
        Mode::Supervised => "MC-T-MT-CFB-I-TI",
        Mode::Unsupervised => "MC-CFB-I-CIF",
    }
}

/// Rounding from its command-line name and optional parameters.
pub fn parse_rounding(name: Option<&str>, kappa: Option<f64>, thresholds: Option<&[f64]>) -> Result<Option<Rounding>> {
    let r = match (name, kappa, thresholds) {
        (None, None, None) => None,
        (Some("nearest"), None, None) => Some(Rounding::Nearest),
        (Some("pseudo"), None, None) => Some(Rounding::Pseudo),
        (Some("derand") | None, None, Some(t)) => Some(Rounding::Thresholds(t.to_vec())),
        (Some("derand"), None, None) => Some(Rounding::Derandomized),
        (Some("components") | None, Some(k), None) => Some(Rounding::Components(k)),
        (Some("components"), None, None) => Some(Rounding::ComponentSweep),
        (Some(other), _, _) if !["nearest", "pseudo", "derand", "components"].contains(&other) => {
            return Err(Error::Usage(format!(
                "unknown rounding `{other}` (expected nearest, derand, pseudo or components)"
            )))
        }
        _ => {
            return Err(Error::Usage(
                "--kappa goes with components rounding and --thresholds with derand".into(),
            ))
        }
    };
    Ok(r)
}

/// Solves one model file and optionally writes the result record.
pub fn solve_command(
    model_path: &Path,
    schedule_text: Option<&str>,
    options: &SolveOptions,
    out_path: Option<&Path>,
) -> Result<ResultRecord> {
    let fg = load_model(model_path)?;
    let schedule = parse_schedule(schedule_text.unwrap_or(default_schedule(fg.mode())))?;
    let result = solve(&fg, &schedule, options)?;
    let record = ResultRecord::from_result(&result);
    if let Some(p) = out_path {
        std::fs::write(p, record.to_json()?)?;
    }
    Ok(record)
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("cannot read corpus {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json" || e == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

/// Column header of the bench CSV.
pub fn bench_header() -> Vec<String> {
    let mut h: Vec<String> = ["instance", "schedule", "runtime_ms", "value", "bound", "status"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(RowClass::ALL.iter().map(|c| format!("rows_{}", c.name())));
    h.push("error".into());
    h
}

#[derive(Default)]
struct Aggregate {
    runs: usize,
    ok: usize,
    verified: usize,
    runtime: f64,
    value: f64,
    bound: f64,
}

/// Runs every schedule on every model in `corpus_dir` and writes one CSV row
/// per run, then one `mean` row per schedule. Failed runs are recorded and skipped.
pub fn bench_command(corpus_dir: &Path, schedules: &[String], options: &SolveOptions, out_csv: &Path) -> Result<()> {
    for s in schedules {
        parse_schedule(s)?;
    }
    let files = corpus_files(corpus_dir)?;
    let mut w = csv::Writer::from_path(out_csv)?;
    w.write_record(bench_header())?;
    let mut agg: BTreeMap<usize, Aggregate> = BTreeMap::new();
    let fmt = |x: f64| if x.is_finite() { format!("{x}") } else { String::new() };
    for file in &files {
        let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let model = load_model(file);
        for (k, s) in schedules.iter().enumerate() {
            let a = agg.entry(k).or_default();
            a.runs += 1;
            let outcome = model
                .as_ref()
                .map_err(|e| Error::Input(e.to_string()))
                .and_then(|fg| solve(fg, &parse_schedule(s)?, options));
            let mut row = vec![name.clone(), s.clone()];
            match outcome {
                Ok(r) => {
                    let ms = r.runtime.as_secs_f64() * 1e3;
                    row.extend([format!("{ms:.3}"), fmt(r.value), fmt(r.bound), r.status.name().to_string()]);
                    let mut counts: BTreeMap<RowClass, usize> = BTreeMap::new();
                    for st in &r.stage_stats {
                        for (&c, &n) in &st.rows_added {
                            *counts.entry(c).or_default() += n;
                        }
                    }
                    row.extend(RowClass::ALL.iter().map(|c| counts.get(c).copied().unwrap_or(0).to_string()));
                    row.push(String::new());
                    a.ok += 1;
                    a.verified += usize::from(r.status == Status::VerifiedOptimal);
                    a.runtime += ms;
                    a.value += r.value;
                    a.bound += r.bound;
                }
                Err(e) => {
                    row.extend(["", "", "", "error"].map(String::from));
                    row.extend(RowClass::ALL.iter().map(|_| String::new()));
                    row.push(e.to_string());
                }
            }
            w.write_record(&row)?;
        }
    }
    for (k, a) in agg {
        let mean = |x: f64| if a.ok > 0 { fmt(x / a.ok as f64) } else { String::new() };
        let mut row = vec![
            "mean".to_string(),
            schedules[k].clone(),
            mean(a.runtime),
            mean(a.value),
            mean(a.bound),
            format!("verified {}/{}", a.verified, a.runs),
        ];
        row.extend(RowClass::ALL.iter().map(|_| String::new()));
        row.push(String::new());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Labeling from a result record or a bare JSON array.
pub fn load_labeling(path: &Path) -> Result<Labeling> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(v) = serde_json::from_str::<Vec<usize>>(&text) {
        return Ok(Labeling(v));
    }
    Ok(Labeling(ResultRecord::from_json(&text)?.labeling))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub energy: f64,
    /// `(VI, RI, PA)` against a reference labeling.
    pub against_truth: Option<(f64, f64, f64)>,
}

/// Energy of a labeling and, given a reference, its partition and label agreement.
pub fn eval_command(model_path: &Path, labeling: &Path, truth: Option<&Path>) -> Result<EvalReport> {
    let fg = load_model(model_path)?;
    let x = load_labeling(labeling)?;
    let energy = fg.eval_energy(&x)?;
    let against_truth = match truth {
        Some(t) => {
            let t = load_labeling(t)?;
            Some((variation_of_information(&x, &t)?, rand_index(&x, &t)?, pixel_accuracy(&x, &t)?))
        }
        None => None,
    };
    Ok(EvalReport { energy, against_truth })
}

/// Runs a local-search baseline: `icm`, `lf` or `kl`.
pub fn baseline_command(model_path: &Path, method: &str) -> Result<(Labeling, f64)> {
    let fg = load_model(model_path)?;
    let x = match method {
        "icm" => icm(&fg, &default_init(&fg))?,
        "lf" => lazy_flipper(&fg, &default_init(&fg), 1)?,
        "kl" => kernighan_lin(&fg)?,
        other => return Err(Error::Usage(format!("unknown baseline `{other}` (expected icm, lf or kl)"))),
    };
    let e = fg.eval_energy(&x)?;
    Ok((x, e))
}
