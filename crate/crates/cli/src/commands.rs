use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde_json::json;
use tfda_core::calculus::energy_spectrum;
use tfda_core::cotlang::canonicalize;
use tfda_core::fieldio::{load_field, save_field, synth_field, FieldFormat, ScalarField, SynthParams};
use tfda_core::stats::{fit_all, fits_to_csv, hist1d, hist2d, ks_two_sample, Binning};
use tfda_core::vortex::Orientation;

use crate::analyze::expand;
use crate::{CliError, Result, SyntaxArgs};

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Grid size along both axes.
    #[arg(long, default_value_t = 256)]
    size: usize,
    /// Spectral slope of E(k).
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    exponent: f64,
    #[arg(long, default_value_t = 4)]
    kmin: usize,
    #[arg(long, default_value_t = 30)]
    kmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of snapshots, with consecutive seeds. Above 1, `--out` is a directory.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Output file (`.csv` for text) or directory.
    #[arg(long)]
    out: PathBuf,
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let params = |seed| SynthParams { nx: args.size, ny: args.size, exponent: args.exponent, kmin: args.kmin, kmax: args.kmax, seed };
    if args.count <= 1 {
        let field: ScalarField<f64> = synth_field(&params(args.seed))?;
        return Ok(save_field(&field, &args.out, FieldFormat::from_path(&args.out))?);
    }
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    for seed in args.seed..args.seed + args.count {
        let field: ScalarField<f64> = synth_field(&params(seed))?;
        save_field(&field, args.out.join(format!("snap_{seed:05}.bin")), FieldFormat::Binary)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Column {
    Area,
    Enstrophy,
    Energy,
    LeafValue,
    SaddleValue,
}

impl Column {
    fn header(self) -> &'static str {
        match self {
            Column::Area => "area",
            Column::Enstrophy => "enstrophy",
            Column::Energy => "energy",
            Column::LeafValue => "leaf_value",
            Column::SaddleValue => "saddle_value",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    All,
    Plus,
    Minus,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Vortex tables written by `analyze` (paths or glob patterns).
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Column to fit.
    #[arg(long, value_enum, default_value = "area")]
    fit: Column,
    /// Second column for a joint histogram against the fitted one.
    #[arg(long, value_enum)]
    joint: Option<Column>,
    #[arg(long, value_enum, default_value = "all")]
    orientation: Which,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    /// Logarithmically spaced bins for the 1D histogram.
    #[arg(long)]
    log_bins: bool,
    /// Directory for fits.csv, hist.csv, joint.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Row {
    orientation: Orientation,
    x: f64,
    y: Option<f64>,
}

fn read_rows(path: &Path, fit: Column, joint: Option<Column>) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let find = |c: Column| {
        headers
            .iter()
            .position(|h| h == c.header())
            .ok_or_else(|| CliError::Usage(format!("{}: no column {:?}", path.display(), c.header())))
    };
    let (ox, xi) = (find_orientation(&headers, path)?, find(fit)?);
    let yi = joint.map(find).transpose()?;
    let number = |rec: &csv::StringRecord, i: usize| -> Result<f64> {
        rec[i].trim().parse().map_err(|_| {
            let line = rec.position().map_or(0, |p| p.line());
            CliError::Usage(format!("{}:{line}: {:?} is not a number", path.display(), &rec[i]))
        })
    };
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let orientation = rec[ox].parse::<Orientation>()?;
        rows.push(Row { orientation, x: number(&rec, xi)?, y: yi.map(|i| number(&rec, i)).transpose()? });
    }
    Ok(rows)
}

fn find_orientation(headers: &csv::StringRecord, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == "orientation")
        .ok_or_else(|| CliError::Usage(format!("{}: no orientation column", path.display())))
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}

pub fn stats(args: &StatsArgs) -> Result<()> {
    let mut rows = Vec::new();
    for path in expand(&args.inputs)? {
        rows.extend(read_rows(&path, args.fit, args.joint)?);
    }
    let kept: Vec<&Row> = rows
        .iter()
        .filter(|r| match args.orientation {
            Which::All => true,
            Which::Plus => r.orientation == Orientation::Plus,
            Which::Minus => r.orientation == Orientation::Minus,
        })
        .collect();
    let xs: Vec<f64> = kept.iter().map(|r| r.x).collect();
    let fits = fit_all(&xs)?;
    let table = fits_to_csv(&fits);
    print!("{table}");

    let Some(out) = &args.out else { return Ok(()) };
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    write(out.join("fits.csv"), &table)?;
    let binning = if args.log_bins { Binning::Log } else { Binning::Linear };
    write(out.join("hist.csv"), hist1d(&xs, args.bins, binning)?.to_csv())?;
    if args.joint.is_some() {
        let ys: Vec<f64> = kept.iter().filter_map(|r| r.y).collect();
        write(out.join("joint.csv"), hist2d(&xs, &ys, args.bins)?.to_csv())?;
    }
    let side = |o: Orientation| rows.iter().filter(|r| r.orientation == o).map(|r| r.x).collect::<Vec<_>>();
    let ks = ks_two_sample(&side(Orientation::Plus), &side(Orientation::Minus)).ok();
    let summary = json!({
        "column": args.fit.header(),
        "samples": xs.len(),
        "best": fits.first().filter(|f| f.converged).map(|f| f.family.name()),
        "ks_plus_minus": ks,
    });
    write(out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("json values serialize") + "\n")
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    /// COT string in Unicode or ASCII syntax.
    text: String,
    #[command(flatten)]
    syntax: SyntaxArgs,
}

pub fn parse(args: &ParseArgs) -> Result<()> {
    let text = canonicalize(&args.text, args.syntax.mode(), args.syntax.style()).map_err(tfda_core::Error::from)?;
    println!("{text}");
    Ok(())
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Stream-function file.
    input: PathBuf,
    /// Shell width in wavenumber units.
    #[arg(long, default_value_t = 1.0)]
    dk: f64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<()> {
    let psi: ScalarField<f64> = load_field(&args.input, FieldFormat::from_path(&args.input))?;
    let csv = energy_spectrum(&psi, args.dk)?.to_csv();
    match &args.out {
        Some(path) => write(path.clone(), csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
