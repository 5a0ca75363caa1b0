use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Args;
use rayon::prelude::*;
use serde_json::json;
use tfda_core::fieldio::{load_field, FieldFormat, ScalarField};
use tfda_core::pipeline::{analyze, report_json, RunConfig};
use tfda_core::vortex::vortices_to_csv;

use crate::{CliError, ConfigArgs, Result, SyntaxArgs};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Field files (`.csv` is text, anything else binary) or glob patterns.
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Output directory; batches get one subdirectory per snapshot.
    #[arg(long, default_value = "tfda-out")]
    out: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    syntax: SyntaxArgs,
}

struct Snapshot {
    name: String,
    input: PathBuf,
    dir: PathBuf,
}

struct Outcome {
    summary: serde_json::Value,
    stable: bool,
    seconds: f64,
}

pub(crate) fn expand(patterns: &[String]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for p in patterns {
        if p.contains(['*', '?', '[']) {
            let matches = glob::glob(p).map_err(|e| CliError::Usage(format!("bad pattern {p:?}: {e}")))?;
            let before = paths.len();
            for m in matches {
                let m = m.map_err(|e| CliError::io(e.path().to_path_buf(), e.into()))?;
                if m.is_file() {
                    paths.push(m);
                }
            }
            if paths.len() == before {
                return Err(CliError::Usage(format!("pattern {p:?} matched no files")));
            }
        } else {
            paths.push(PathBuf::from(p));
        }
    }
    paths.sort();
    paths.dedup();
    Ok(paths)
}

fn plan(paths: Vec<PathBuf>, out: &Path) -> Result<Vec<Snapshot>> {
    let single = paths.len() == 1;
    let mut snapshots: Vec<Snapshot> = paths
        .into_iter()
        .map(|input| {
            let name = input.file_stem().map_or_else(|| input.display().to_string(), |s| s.to_string_lossy().into_owned());
            let dir = if single { out.to_path_buf() } else { out.join(&name) };
            Snapshot { name, input, dir }
        })
        .collect();
    snapshots.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = snapshots.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(CliError::Usage(format!(
            "{} and {} would share the output name {:?}",
            w[0].input.display(),
            w[1].input.display(),
            w[0].name
        )));
    }
    Ok(snapshots)
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize") + "\n"
}

fn process(s: &Snapshot, config: &RunConfig, syntax: &SyntaxArgs) -> Result<Outcome> {
    let start = Instant::now();
    let field: ScalarField<f64> = load_field(&s.input, FieldFormat::from_path(&s.input))?;
    let analysis = analyze(&field, config)?;
    fs::create_dir_all(&s.dir).map_err(|e| CliError::io(&s.dir, e))?;
    let mut report = report_json(&analysis, config);
    report["input"] = s.input.display().to_string().into();
    let style = syntax.style();
    let mut summary = json!({
        "name": s.name,
        "input": s.input.display().to_string(),
        "dir": s.dir.display().to_string(),
        "stable": analysis.is_stable(),
    });
    if let Some(t) = &analysis.topology {
        write(s.dir.join("cot.txt"), t.cot_string(style) + "\n")?;
        write(s.dir.join("cot_filtered.txt"), t.filtered_string(style) + "\n")?;
        write(s.dir.join("reeb.json"), pretty(&t.reeb.to_json()))?;
        write(s.dir.join("vortices.csv"), vortices_to_csv(&t.vortices))?;
        summary["cot"] = t.cot_string(style).into();
        summary["vortices"] = t.vortices.len().into();
    } else {
        summary["reasons"] = json!(analysis.report.reasons);
    }
    write(s.dir.join("report.json"), pretty(&report))?;
    Ok(Outcome { summary, stable: analysis.is_stable(), seconds: start.elapsed().as_secs_f64() })
}

pub fn run(args: &AnalyzeArgs) -> Result<()> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    let config = args.config.run_config(args.syntax.mode());
    config.validate()?;
    let snapshots = plan(expand(&args.inputs)?, &args.out)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let outcomes: Vec<Result<Outcome>> =
        pool.install(|| snapshots.par_iter().map(|s| process(s, &config, &args.syntax)).collect());

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let mut entries = Vec::new();
    let mut timings = Vec::new();
    let mut first_error = None;
    let mut degenerate = 0;
    for (s, outcome) in snapshots.iter().zip(outcomes) {
        match outcome {
            Ok(o) => {
                degenerate += usize::from(!o.stable);
                entries.push(o.summary);
                timings.push(json!({ "name": s.name, "seconds": o.seconds }));
            }
            Err(e) => {
                eprintln!("tfda: {}: {e}", s.input.display());
                entries.push(json!({ "name": s.name, "input": s.input.display().to_string(), "error": e.to_string() }));
                first_error.get_or_insert(e);
            }
        }
    }
    write(args.out.join("manifest.json"), pretty(&json!({ "config": config, "snapshots": entries })))?;
    let timing = json!({
        "started_unix": started,
        "elapsed_seconds": clock.elapsed().as_secs_f64(),
        "jobs": pool.current_num_threads(),
        "snapshots": timings,
    });
    write(args.out.join("timing.json"), pretty(&timing))?;

    match first_error {
        Some(e) => Err(e),
        None if degenerate > 0 => Err(CliError::Degenerate(degenerate)),
        None => Ok(()),
    }
}
