use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::report::{round_sig, rounded_json, to_pretty};
use super::{run_itgbc, BoundSource, RunReport, SolveConfig, Timings};
use crate::error::{Error, Result};
use crate::instance::{OptimaRegistry, TspInstance};

/// The five longest-running TSPLIB instances of the reference experiments.
pub const BENCH_PRESET: [&str; 5] = ["fl1577", "fnl4461", "u1817", "pcb3038", "pla7397"];

/// Label used when no exact or registry lower value is available.
pub const RATIO_UNAVAILABLE: &str = "n/a (A proxy = best-found)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub file: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub n: usize,
    pub best_length: f64,
    /// Registry optimum, when listed.
    pub optimum: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_basis: BoundSource,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutcome {
    pub reports: Vec<RunReport>,
    pub summary: Vec<SummaryRow>,
    pub skipped: Vec<SkippedFile>,
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timings");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

impl BenchOutcome {
    /// Pretty JSON with rounded floats; without timings the output depends
    /// only on the inputs and the seed.
    pub fn to_json(&self, include_timings: bool) -> Result<String> {
        let mut v = rounded_json(self)?;
        if !include_timings {
            strip_timings(&mut v);
        }
        to_pretty(&v)
    }
}

fn summary_row(r: &RunReport, registry: &OptimaRegistry) -> SummaryRow {
    let optimum = registry.get(&r.instance);
    let (ratio, ratio_basis) = match (optimum, r.lower.source) {
        (_, BoundSource::Oracle) => (Some(r.best_length / r.lower.value), BoundSource::Oracle),
        (Some(opt), _) => (Some(r.best_length / opt), BoundSource::Registry),
        (None, source) => (None, source),
    };
    SummaryRow {
        name: r.instance.clone(),
        n: r.n,
        best_length: r.best_length,
        optimum,
        ratio,
        ratio_basis,
        timings: r.timings,
    }
}

fn list_instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("tsp")))
        .collect();
    files.sort();
    Ok(files)
}

fn file_label(p: &Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Solves every `.tsp` file in `dir` (or only the `only` names, by file
/// stem). Unparseable or failing files are listed as skipped.
pub fn bench(dir: &Path, registry: &OptimaRegistry, cfg: &SolveConfig, only: Option<&[&str]>) -> Result<BenchOutcome> {
    cfg.validate()?;
    let mut files = list_instances(dir)?;
    let mut skipped = Vec::new();
    if let Some(names) = only {
        let stem = |p: &PathBuf| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for name in names {
            if !files.iter().any(|p| stem(p) == *name) {
                skipped.push(SkippedFile { file: format!("{name}.tsp"), reason: "not found".into() });
            }
        }
        files.retain(|p| names.contains(&stem(p).as_str()));
    }
    if files.is_empty() && skipped.is_empty() {
        return Err(Error::Usage(format!("no .tsp instances in {}", dir.display())));
    }

    let results: Vec<(String, Result<RunReport>)> = files
        .par_iter()
        .map(|p| {
            let run = TspInstance::from_path(p).and_then(|inst| run_itgbc(&inst, cfg, Some(registry)));
            (file_label(p), run)
        })
        .collect();

    let mut reports = Vec::new();
    for (file, res) in results {
        match res {
            Ok(r) => reports.push(r),
            Err(e) => skipped.push(SkippedFile { file, reason: e.to_string() }),
        }
    }
    reports.sort_by(|a, b| a.instance.cmp(&b.instance));
    skipped.sort_by(|a, b| a.file.cmp(&b.file));
    let summary = reports.iter().map(|r| summary_row(r, registry)).collect();
    Ok(BenchOutcome { reports, summary, skipped })
}

/// Plain-text summary, one row per instance, sorted by name.
pub fn summary_table(rows: &[SummaryRow], include_timings: bool) -> String {
    let mut header = vec!["name", "n", "best_length", "optimum", "ratio"];
    if include_timings {
        header.extend([
            "construction_s",
            "local_search_s",
            "sampling_s",
            "upper_bound_s",
            "fit_s",
            "iterations_s",
            "total_s",
        ]);
    }
    let mut out = header.join("\t");
    out.push('\n');
    for r in rows {
        let mut cells = vec![
            r.name.clone(),
            r.n.to_string(),
            round_sig(r.best_length).to_string(),
            r.optimum.map(|o| round_sig(o).to_string()).unwrap_or_else(|| "-".into()),
            match r.ratio {
                Some(x) => format!("{:.6}", x),
                None => RATIO_UNAVAILABLE.to_owned(),
            },
        ];
        if include_timings {
            let t = &r.timings;
            for s in [t.construction, t.local_search, t.sampling, t.upper_bound, t.fit, t.iterations, t.total] {
                cells.push(format!("{s:.3}"));
            }
        }
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}
