use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tfda_core::fieldio::{save_field, FieldFormat, ScalarField};

const FREE_DECAY_COT: &str = "β·₊ · α₋·₊(σ₋) · α₊·₋(σ₊) · β·₋";

fn tfda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfda")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_field(dir: &Path, name: &str, f: impl FnMut(f64, f64) -> f64) -> std::path::PathBuf {
    let field = ScalarField::<f64>::sample(64, f).unwrap();
    let p = dir.join(name);
    save_field(&field, &p, FieldFormat::from_path(&p)).unwrap();
    p
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn analyze_free_decay() {
    let tmp = TempDir::new().unwrap();
    for name in ["cos.csv", "cos.bin"] {
        let input = write_field(tmp.path(), name, |x, y| y.cos() + 0.3 * x.cos());
        let out = tmp.path().join(format!("out-{name}"));
        let run = tfda(&["analyze", path(&input), "--out", path(&out)]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        assert_eq!(fs::read_to_string(out.join("cot.txt")).unwrap().trim(), FREE_DECAY_COT);
        let vortices = fs::read_to_string(out.join("vortices.csv")).unwrap();
        assert_eq!(vortices.lines().count(), 3);
        let report = json(&out.join("report.json"));
        assert_eq!(report["stability"]["verdict"], "stable");
        assert_eq!(report["counts"]["reeb_nodes"], 4);
        let reeb = json(&out.join("reeb.json"));
        assert!(reeb.is_object());
    }
}

#[test]
fn analyze_ascii_and_coarse() {
    let tmp = TempDir::new().unwrap();
    let input = write_field(tmp.path(), "cos.bin", |x, y| y.cos() + 0.3 * x.cos());
    let out = tmp.path().join("out");
    let run = tfda(&["analyze", path(&input), "--out", path(&out), "--ascii", "--coarse", "2", "--eps0", "0.05"]);
    assert_eq!(code(&run), 0);
    assert_eq!(fs::read_to_string(out.join("cot.txt")).unwrap().trim(), "B.+ * o-.+(s-) * o+.-(s+) * B.-");
    assert_eq!(json(&out.join("report.json"))["grid"], serde_json::json!([32, 32]));
}

#[test]
fn constant_field_is_degenerate() {
    let tmp = TempDir::new().unwrap();
    let input = write_field(tmp.path(), "flat.bin", |_, _| 2.0);
    let out = tmp.path().join("out");
    let run = tfda(&["analyze", path(&input), "--out", path(&out)]);
    assert_eq!(code(&run), 3);
    assert_eq!(json(&out.join("report.json"))["stability"]["verdict"], "degenerate");
    assert!(!out.join("cot.txt").exists());
}

#[test]
fn exit_codes_for_bad_input() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let missing = tmp.path().join("missing.bin");
    assert_eq!(code(&tfda(&["analyze", path(&missing), "--out", path(&out)])), 1);

    let garbage = tmp.path().join("garbage.bin");
    fs::write(&garbage, b"not a field").unwrap();
    assert_eq!(code(&tfda(&["analyze", path(&garbage), "--out", path(&out)])), 2);

    let input = write_field(tmp.path(), "cos.bin", |x, y| y.cos() + 0.3 * x.cos());
    assert_eq!(code(&tfda(&["analyze", path(&input), "--out", path(&out), "--eps0", "-1"])), 2);
}

#[test]
fn batch_is_deterministic_and_feeds_stats() {
    let tmp = TempDir::new().unwrap();
    let snaps = tmp.path().join("snaps");
    let synth = ["synth", "--size", "32", "--kmin", "1", "--kmax", "4", "--seed", "0", "--count", "100", "--out", path(&snaps)];
    assert_eq!(code(&tfda(&synth)), 0);
    let pattern = format!("{}/*.bin", path(&snaps));
    let out = tmp.path().join("runs");
    let analyze = ["analyze", &pattern, "--out", path(&out), "--jobs", "4"];

    let first = tfda(&analyze);
    assert!(matches!(code(&first), 0 | 3), "{}", String::from_utf8_lossy(&first.stderr));
    let tables: Vec<_> = (0..100).map(|s| out.join(format!("snap_{s:05}")).join("vortices.csv")).collect();
    let stable: Vec<_> = tables.iter().filter(|p| p.exists()).collect();
    assert!(stable.len() >= 90, "{} stable snapshots", stable.len());
    let snapshot = |files: &[&std::path::PathBuf]| -> Vec<Vec<u8>> { files.iter().map(|p| fs::read(p).unwrap()).collect() };
    let before = snapshot(&stable);
    let manifest = fs::read(out.join("manifest.json")).unwrap();

    let second = tfda(&["analyze", &pattern, "--out", path(&out), "--jobs", "1"]);
    assert_eq!(code(&second), code(&first));
    assert_eq!(snapshot(&stable), before);
    assert_eq!(fs::read(out.join("manifest.json")).unwrap(), manifest);
    assert_eq!(json(&out.join("manifest.json"))["snapshots"].as_array().unwrap().len(), 100);
    assert!(json(&out.join("timing.json"))["elapsed_seconds"].is_number());

    let stats_out = tmp.path().join("stats");
    let tables = format!("{}/*/vortices.csv", path(&out));
    let run = tfda(&["stats", &tables, "--fit", "area", "--log-bins", "--joint", "enstrophy", "--out", path(&stats_out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let table = String::from_utf8(run.stdout).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("family,param1,param2,loglik,aic,rank"));
    assert_eq!(lines.count(), 5);
    assert!(table.contains(",1\n"));
    for file in ["fits.csv", "hist.csv", "joint.csv", "summary.json"] {
        assert!(stats_out.join(file).exists(), "{file}");
    }
}

#[test]
fn stats_needs_enough_samples() {
    let tmp = TempDir::new().unwrap();
    let table = tmp.path().join("v.csv");
    fs::write(&table, "id,orientation,area,enstrophy,energy,leaf_value,saddle_value\n0,plus,0.1,1,1,1,0\n").unwrap();
    assert_eq!(code(&tfda(&["stats", path(&table)])), 2);
}

#[test]
fn synth_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a.bin"), tmp.path().join("b.bin"));
    for p in [&a, &b] {
        let run = tfda(&["synth", "--exponent", "-3", "--size", "64", "--kmax", "20", "--seed", "7", "--out", path(p)]);
        assert_eq!(code(&run), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = tmp.path().join("c.csv");
    assert_eq!(code(&tfda(&["synth", "--size", "64", "--kmax", "40", "--out", path(&c)])), 2);
}

#[test]
fn parse_command() {
    let ok = tfda(&["parse", "B.+ * o-.+(s-) * o+.-(s+) * B.-", "--ascii"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(String::from_utf8(ok.stdout).unwrap().trim(), "B.+ * o-.+(s-) * o+.-(s+) * B.-");

    let unicode = tfda(&["parse", "β₊̇·α₋₊̇(σ₋) · α₊₋̇(σ₊) · β₋̇"]);
    assert_eq!(String::from_utf8(unicode.stdout).unwrap().trim(), FREE_DECAY_COT);

    let bad = tfda(&["parse", "β·₊ · σ₊"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8(bad.stderr).unwrap().contains("token 2"));

    let relaxed = "λ·₊ · a₊·₊(σ₊) · β·₋";
    assert_eq!(code(&tfda(&["parse", relaxed])), 2);
    assert_eq!(code(&tfda(&["parse", relaxed, "--permissive"])), 0);
}

#[test]
fn spectrum_of_a_single_mode() {
    let tmp = TempDir::new().unwrap();
    let input = write_field(tmp.path(), "mode.bin", |x, _| (3.0 * x).cos());
    let run = tfda(&["spectrum", path(&input)]);
    assert_eq!(code(&run), 0);
    let text = String::from_utf8(run.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,E"));
    let occupied: Vec<(f64, f64)> = lines
        .map(|l| {
            let (k, e) = l.split_once(',').unwrap();
            (k.parse().unwrap(), e.parse().unwrap())
        })
        .filter(|&(_, e)| e > 1e-12)
        .collect();
    assert_eq!(occupied.len(), 1);
    assert_eq!(occupied[0].0, 3.0);
    // ½⟨v²⟩ with v = 3 sin 3x
    assert!((occupied[0].1 - 2.25).abs() < 1e-10);
}
