//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion with the
//! measured value and exits non-zero if any criterion fails.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal};
use tfda_core::calculus::{energy_spectrum, vorticity_from_stream};
use tfda_core::cot::{filter_cot, CotTree};
use tfda_core::cotlang::{cot_equal, emit, parse, Mode, Sign, Style, Symbol};
use tfda_core::fieldio::{synth_field, ScalarField, SynthParams};
use tfda_core::morse::CriticalKind;
use tfda_core::pipeline::{analyze, Analysis, RunConfig};
use tfda_core::stats::{fit_all, ks_two_sample, Family};
use tfda_core::vortex::Orientation;

use common::{enstrophy_analog, free_decay, low_mode, CotWriter, ENSTROPHY_COT, FREE_DECAY_COT};

const ENSEMBLE_SIZE: usize = 200;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[{verdict}] {id:>2} {name}: {detail}");
}

struct Sample {
    field: ScalarField<f64>,
    analysis: Analysis<f64>,
}

/// The first stable low-mode fields, in seed order.
fn ensemble() -> &'static [Sample] {
    static CELL: OnceLock<Vec<Sample>> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = RunConfig::default();
        let mut out = Vec::new();
        for seed in 0.. {
            if out.len() == ENSEMBLE_SIZE {
                break;
            }
            assert!(seed < 4 * ENSEMBLE_SIZE as u64, "too few stable fields");
            let field = low_mode(seed, 128);
            let analysis = analyze(&field, &config).expect("analysis");
            if analysis.is_stable() {
                out.push(Sample { field, analysis });
            }
        }
        out
    })
}

fn tree(s: &Sample) -> &CotTree<f64> {
    &s.analysis.topology.as_ref().expect("stable").cot
}

fn golden_free_decay() -> bool {
    let start = Instant::now();
    let a = analyze(&free_decay(256), &RunConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let got = a.topology.as_ref().map(|t| t.cot_string(Style::Unicode)).unwrap_or_default();
    let pass = got == FREE_DECAY_COT && elapsed < Duration::from_secs(1);
    report(1, "golden COT, free decay", pass, format!("{got:?} in {elapsed:.2?}"));
    pass
}

fn golden_enstrophy() -> bool {
    let start = Instant::now();
    let a = analyze(&enstrophy_analog(256), &RunConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let target = parse::<f64>(ENSTROPHY_COT, Mode::Strict).unwrap();
    let got = a.topology.as_ref().map(|t| t.cot.clone());
    let equal = got.as_ref().is_some_and(|t| cot_equal(t, &target));
    let pass = equal && elapsed < Duration::from_secs(5);
    let text = got.map(|t| t.emit(Style::Unicode)).unwrap_or_default();
    report(2, "golden COT, enstrophy", pass, format!("equal={equal} in {elapsed:.2?}: {text}"));
    pass
}

fn reeb_invariants() -> bool {
    let samples = ensemble();
    let ok = samples
        .iter()
        .filter(|s| {
            let g = &s.analysis.topology.as_ref().unwrap().reeb;
            let extrema = g.count(CriticalKind::Minimum) + g.count(CriticalKind::Maximum);
            let saddles = g.count(CriticalKind::Saddle);
            let mut degrees = g.degrees();
            degrees.sort_unstable();
            let mut expected = vec![1; extrema];
            expected.extend(std::iter::repeat_n(3, saddles));
            g.betti() == 1 && extrema == saddles && degrees == expected && g.is_connected()
        })
        .count();
    let pass = samples.len() >= 200 && ok == samples.len();
    report(3, "Reeb invariants", pass, format!("{ok}/{} stable fields", samples.len()));
    pass
}

fn first_symbol_after_root() -> bool {
    let samples = ensemble();
    let ok = samples
        .iter()
        .filter(|s| {
            let t = tree(s);
            t.chain().first().map(|&n| t.nodes[n].symbol) == Some(Symbol::Alpha(Sign::Minus, Sign::Plus))
        })
        .count();
    let pass = ok == samples.len();
    report(4, "first symbol is α₋·₊", pass, format!("{ok}/{}", samples.len()));
    pass
}

fn parser_round_trip() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut ok, mut total) = (0, 0);
    let mut first_failure = None;
    for k in 0..1000 {
        let permissive = k % 2 == 1;
        let mode = if permissive { Mode::Permissive } else { Mode::Strict };
        let text = CotWriter { rng: &mut rng, permissive }.root(8);
        total += 1;
        let round = parse::<f64>(&text, mode).and_then(|t| {
            let unicode = emit(&t, Style::Unicode);
            let u = parse::<f64>(&unicode, mode)?;
            let a = parse::<f64>(&emit(&t, Style::Ascii), mode)?;
            Ok(cot_equal(&t, &u) && cot_equal(&t, &a) && emit(&u, Style::Unicode) == unicode)
        });
        match round {
            Ok(true) => ok += 1,
            other => {
                first_failure.get_or_insert(format!("{text:?}: {other:?}"));
            }
        }
    }
    let pass = ok == total;
    let detail = match first_failure {
        Some(f) => format!("{ok}/{total}, first failure {f}"),
        None => format!("{ok}/{total}"),
    };
    report(5, "parser round trip", pass, detail);
    pass
}

fn filter_monotonicity() -> bool {
    let samples = ensemble();
    let eps: Vec<f64> = (0..=15).map(|k| 0.02 * k as f64).collect();
    let ok = samples
        .iter()
        .filter(|s| {
            let t = tree(s);
            let filtered: Vec<_> = eps.iter().map(|&e| filter_cot(t, e)).collect();
            let monotone = filtered.windows(2).all(|w| w[1].len() <= w[0].len());
            let identity = filtered[0].len() == t.len() && cot_equal(&filtered[0], t);
            // eps is increasing, so max(eps[i], eps[j]) = eps[max(i, j)]
            let composed = (0..eps.len()).all(|i| {
                (0..eps.len()).all(|j| {
                    let twice = filter_cot(&filtered[i], eps[j]);
                    let once = &filtered[i.max(j)];
                    twice.len() == once.len() && cot_equal(&twice, once)
                })
            });
            monotone && identity && composed
        })
        .count();
    let pass = ok == samples.len();
    report(6, "filter monotonicity and composition", pass, format!("{ok}/{}", samples.len()));
    pass
}

fn numerical_oracles() -> bool {
    let psi = ScalarField::<f64>::sample(128, |x, _| (3.0 * x).cos()).unwrap();
    let omega = vorticity_from_stream(&psi);
    let vort_err = omega
        .values()
        .iter()
        .zip(psi.values())
        .map(|(w, p)| (w - 9.0 * p).abs())
        .fold(0.0, f64::max);

    let spectrum = energy_spectrum(&psi, 1.0).unwrap();
    let occupied = spectrum.bins.iter().filter(|b| b.e > 1e-12).count();
    let half_mean_sq = 0.5 * psi_energy(&psi);
    let parseval_err = (spectrum.total() - half_mean_sq).abs();

    let pass = vort_err < 1e-10 && occupied == 1 && parseval_err < 1e-10;
    report(
        7,
        "numerical oracles",
        pass,
        format!("vorticity err {vort_err:.2e}, occupied bins {occupied}, Parseval err {parseval_err:.2e}"),
    );
    pass
}

/// `⟨|u|²⟩` for `ψ = cos(3x)`: `v = 3 sin(3x)`.
fn psi_energy(psi: &ScalarField<f64>) -> f64 {
    let n = psi.nx();
    let sum: f64 = (0..n)
        .map(|i| {
            let x = std::f64::consts::TAU * i as f64 / n as f64;
            let v = 3.0 * (3.0 * x).sin();
            v * v
        })
        .sum();
    sum / n as f64
}

fn fit_selection() -> bool {
    let (mut lognormal, mut gamma) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = LogNormal::new(0.0, 0.5).unwrap().sample_iter(&mut rng).take(2000).collect();
        lognormal += usize::from(fit_all(&xs).unwrap()[0].family == Family::Lognormal);
        let raw: Vec<f64> = Gamma::new(2.0, 1.0).unwrap().sample_iter(&mut rng).take(2000).collect();
        let scale = raw.iter().copied().fold(0.0, f64::max) * 1.01;
        let ys: Vec<f64> = raw.iter().map(|x| x / scale).collect();
        gamma += usize::from(fit_all(&ys).unwrap()[0].family == Family::Gamma);
    }
    let pass = lognormal >= 95 && gamma >= 95;
    report(8, "AIC fit selection", pass, format!("lognormal {lognormal}/100, gamma {gamma}/100"));
    pass
}

fn vortex_areas(exponent: f64, seeds: std::ops::Range<u64>) -> (Vec<f64>, Vec<f64>) {
    let config = RunConfig { eps0: 0.1, ..RunConfig::default() };
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for seed in seeds {
        let f: ScalarField<f64> =
            synth_field(&SynthParams { nx: 256, ny: 256, exponent, kmin: 4, kmax: 30, seed }).unwrap();
        let Some(t) = analyze(&f, &config).unwrap().topology else { continue };
        for v in t.vortices {
            match v.orientation {
                Orientation::Plus => plus.push(v.area),
                Orientation::Minus => minus.push(v.area),
            }
        }
    }
    (plus, minus)
}

fn pipeline_discrimination() -> bool {
    let start = Instant::now();
    let (p3, m3) = vortex_areas(-3.0, 0..100);
    let (p5, m5) = vortex_areas(-5.0 / 3.0, 1000..1100);
    let elapsed = start.elapsed();
    let all3: Vec<f64> = p3.iter().chain(&m3).copied().collect();
    let all5: Vec<f64> = p5.iter().chain(&m5).copied().collect();
    let between = ks_two_sample(&all3, &all5).unwrap();
    let within3 = ks_two_sample(&p3, &m3).unwrap();
    let within5 = ks_two_sample(&p5, &m5).unwrap();
    let pass = between >= 0.15 && within3 < 0.1 && within5 < 0.1 && elapsed < Duration::from_secs(600);
    report(
        9,
        "pipeline discrimination",
        pass,
        format!(
            "KS(k^-3, k^-5/3) {between:.3}, KS(σ₊, σ₋) {within3:.3} / {within5:.3}, {} + {} vortices in {elapsed:.1?}",
            all3.len(),
            all5.len()
        ),
    );
    pass
}

fn sign_flip_involution() -> bool {
    let samples = &ensemble()[..50];
    let ok = samples
        .iter()
        .filter(|s| {
            let negated = analyze(&s.field.map(|v| -v), &RunConfig::default()).unwrap();
            negated.topology.is_some_and(|t| cot_equal(&t.cot, &tree(s).involuted()))
        })
        .count();
    let pass = ok == samples.len();
    report(10, "sign-flip involution", pass, format!("{ok}/{}", samples.len()));
    pass
}

fn main() {
    let checks: [fn() -> bool; 10] = [
        golden_free_decay,
        golden_enstrophy,
        reeb_invariants,
        first_symbol_after_root,
        parser_round_trip,
        filter_monotonicity,
        numerical_oracles,
        fit_selection,
        pipeline_discrimination,
        sign_flip_involution,
    ];
    let failed = checks.iter().filter(|check| !check()).count();
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
