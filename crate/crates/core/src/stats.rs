//! Distribution fits with AIC model selection, histograms and the
//! two-sample Kolmogorov-Smirnov statistic.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::special::{digamma, ln_beta, ln_gamma, trigamma};
use crate::{Error, Real, Result};

/// Samples [`fit_all`] requires.
pub const MIN_FIT_SAMPLES: usize = 30;
const TOLERANCE: f64 = 1e-10;
const MAX_ITER: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Normal,
    Lognormal,
    Gamma,
    Beta,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Normal, Family::Lognormal, Family::Gamma, Family::Beta, Family::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::Lognormal => "lognormal",
            Family::Gamma => "gamma",
            Family::Beta => "beta",
            Family::Exponential => "exponential",
        }
    }

    /// Parameter names in the order of [`FitResult::params`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Normal => &["mu", "sigma"],
            Family::Lognormal => &["mu", "sigma"],
            Family::Gamma => &["shape", "scale"],
            Family::Beta => &["alpha", "beta"],
            Family::Exponential => &["rate"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult<T> {
    pub family: Family,
    pub params: Vec<T>,
    pub loglik: T,
    pub aic: T,
    pub n: usize,
    pub converged: bool,
    /// 1-based AIC rank among converged fits.
    pub rank: Option<usize>,
}

impl<T: Real> FitResult<T> {
    fn new(family: Family, params: Vec<T>, loglik: T, n: usize, converged: bool) -> Self {
        let k = T::from_usize_lossy(params.len());
        let converged = converged && loglik.is_finite() && params.iter().all(|p| p.is_finite());
        Self { family, aic: T::lit(2.0) * k - T::lit(2.0) * loglik, params, loglik, n, converged, rank: None }
    }

    fn failed(family: Family, n: usize) -> Self {
        let params = vec![T::nan(); family.param_names().len()];
        Self { family, params, loglik: T::nan(), aic: T::nan(), n, converged: false, rank: None }
    }
}

struct Moments<T> {
    n: T,
    mean: T,
    var: T,
    mean_ln: T,
    var_ln: T,
}

fn moments<T: Real>(xs: &[T]) -> Moments<T> {
    let n = T::from_usize_lossy(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
    let mean_ln = xs.iter().map(|x| x.ln()).sum::<T>() / n;
    let var_ln = xs.iter().map(|x| (x.ln() - mean_ln) * (x.ln() - mean_ln)).sum::<T>() / n;
    Moments { n, mean, var, mean_ln, var_ln }
}

fn half_ln_two_pi<T: Real>() -> T {
    T::lit(0.5) * T::lit(std::f64::consts::TAU).ln()
}

pub fn fit_normal<T: Real>(xs: &[T]) -> FitResult<T> {
    let m = moments(xs);
    let sigma = m.var.sqrt();
    let loglik = -m.n * (half_ln_two_pi::<T>() + sigma.ln() + T::lit(0.5));
    FitResult::new(Family::Normal, vec![m.mean, sigma], loglik, xs.len(), sigma > T::zero())
}

pub fn fit_lognormal<T: Real>(xs: &[T]) -> FitResult<T> {
    let m = moments(xs);
    let sigma = m.var_ln.sqrt();
    let loglik = -m.n * (m.mean_ln + half_ln_two_pi::<T>() + sigma.ln() + T::lit(0.5));
    FitResult::new(Family::Lognormal, vec![m.mean_ln, sigma], loglik, xs.len(), sigma > T::zero())
}

pub fn fit_exponential<T: Real>(xs: &[T]) -> FitResult<T> {
    let m = moments(xs);
    let rate = m.mean.recip();
    let loglik = m.n * (rate.ln() - T::one());
    FitResult::new(Family::Exponential, vec![rate], loglik, xs.len(), true)
}

/// Gamma MLE: Newton on `ln k - ψ(k) = ln(mean) - mean(ln x)`.
pub fn fit_gamma<T: Real>(xs: &[T]) -> FitResult<T> {
    let m = moments(xs);
    let s = m.mean.ln() - m.mean_ln;
    if !(s > T::zero()) {
        return FitResult::failed(Family::Gamma, xs.len());
    }
    let three = T::lit(3.0);
    let mut k = (three - s + ((s - three) * (s - three) + T::lit(24.0) * s).sqrt()) / (T::lit(12.0) * s);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let f = k.ln() - digamma(k) - s;
        let df = k.recip() - trigamma(k);
        let mut next = k - f / df;
        if !(next > T::zero()) {
            next = k * T::lit(0.5);
        }
        let step = (next - k).abs();
        k = next;
        if step <= T::lit(TOLERANCE) * k {
            converged = true;
            break;
        }
    }
    let scale = m.mean / k;
    let loglik = m.n * ((k - T::one()) * m.mean_ln - k * scale.ln() - ln_gamma(k) - k);
    FitResult::new(Family::Gamma, vec![k, scale], loglik, xs.len(), converged)
}

/// Beta MLE by two-dimensional Newton iteration from the moment estimate.
pub fn fit_beta<T: Real>(xs: &[T]) -> FitResult<T> {
    if xs.iter().any(|&x| !(x > T::zero() && x < T::one())) {
        return FitResult::failed(Family::Beta, xs.len());
    }
    let m = moments(xs);
    let n = m.n;
    let ln_x = m.mean_ln;
    let ln_1mx = xs.iter().map(|&x| (T::one() - x).ln()).sum::<T>() / n;
    let common = m.mean * (T::one() - m.mean) / m.var - T::one();
    if !(common > T::zero()) {
        return FitResult::failed(Family::Beta, xs.len());
    }
    let (mut a, mut b) = (m.mean * common, (T::one() - m.mean) * common);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let dab = digamma(a + b);
        let g1 = digamma(a) - dab - ln_x;
        let g2 = digamma(b) - dab - ln_1mx;
        let tab = trigamma(a + b);
        let (j11, j12, j22) = (trigamma(a) - tab, -tab, trigamma(b) - tab);
        let det = j11 * j22 - j12 * j12;
        let da = (j22 * g1 - j12 * g2) / det;
        let db = (j11 * g2 - j12 * g1) / det;
        let mut t = T::one();
        while !(a - t * da > T::zero() && b - t * db > T::zero()) && t > T::lit(1e-12) {
            t = t * T::lit(0.5);
        }
        a = a - t * da;
        b = b - t * db;
        if (t * da).abs() <= T::lit(TOLERANCE) * a && (t * db).abs() <= T::lit(TOLERANCE) * b {
            converged = true;
            break;
        }
    }
    let loglik = n * ((a - T::one()) * ln_x + (b - T::one()) * ln_1mx - ln_beta(a, b));
    FitResult::new(Family::Beta, vec![a, b], loglik, xs.len(), converged)
}

/// Fits every family and ranks the converged fits by AIC, best first.
pub fn fit_all<T: Real>(samples: &[T]) -> Result<Vec<FitResult<T>>> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_FIT_SAMPLES, got: samples.len() });
    }
    if let Some(x) = samples.iter().find(|&&x| !(x > T::zero() && x.is_finite())) {
        return Err(Error::Argument(format!("samples must be positive and finite, found {x}")));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let mut fits = vec![fit_normal(&xs), fit_lognormal(&xs), fit_gamma(&xs), fit_beta(&xs), fit_exponential(&xs)];
    fits.sort_by(|a, b| {
        b.converged
            .cmp(&a.converged)
            .then(a.aic.partial_cmp(&b.aic).unwrap_or(std::cmp::Ordering::Equal))
    });
    for (k, f) in fits.iter_mut().enumerate() {
        f.rank = f.converged.then_some(k + 1);
    }
    Ok(fits)
}

pub fn fits_to_csv<T: Real>(fits: &[FitResult<T>]) -> String {
    let mut out = String::from("family,param1,param2,loglik,aic,rank\n");
    for f in fits {
        let param = |k: usize| f.params.get(k).map(|p| p.as_f64().to_string()).unwrap_or_default();
        let rank = f.rank.map(|r| r.to_string()).unwrap_or_else(|| "failed".into());
        let _ = writeln!(out, "{},{},{},{},{},{rank}", f.family.name(), param(0), param(1), f.loglik.as_f64(), f.aic.as_f64());
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Binning {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hist1D<T> {
    pub edges: Vec<T>,
    pub density: Vec<T>,
}

impl<T: Real> Hist1D<T> {
    pub fn integral(&self) -> T {
        self.density.iter().zip(self.edges.windows(2)).map(|(&d, w)| d * (w[1] - w[0])).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi,density\n");
        for (d, w) in self.density.iter().zip(self.edges.windows(2)) {
            let _ = writeln!(out, "{},{},{}", w[0].as_f64(), w[1].as_f64(), d.as_f64());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hist2D<T> {
    pub x_edges: Vec<T>,
    pub y_edges: Vec<T>,
    /// `density[ix][iy]`.
    pub density: Vec<Vec<T>>,
}

impl<T: Real> Hist2D<T> {
    pub fn integral(&self) -> T {
        let mut total = T::zero();
        for (row, wx) in self.density.iter().zip(self.x_edges.windows(2)) {
            for (&d, wy) in row.iter().zip(self.y_edges.windows(2)) {
                total = total + d * (wx[1] - wx[0]) * (wy[1] - wy[0]);
            }
        }
        total
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_lo,x_hi,y_lo,y_hi,density\n");
        for (row, wx) in self.density.iter().zip(self.x_edges.windows(2)) {
            for (d, wy) in row.iter().zip(self.y_edges.windows(2)) {
                let _ = writeln!(out, "{},{},{},{},{}", wx[0].as_f64(), wx[1].as_f64(), wy[0].as_f64(), wy[1].as_f64(), d.as_f64());
            }
        }
        out
    }
}

fn bin_edges<T: Real>(xs: &[T], n_bins: usize, binning: Binning) -> Result<Vec<T>> {
    if n_bins < 2 {
        return Err(Error::Argument(format!("need at least 2 bins, got {n_bins}")));
    }
    if xs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let lo = xs.iter().copied().fold(T::infinity(), T::min);
    let hi = xs.iter().copied().fold(T::neg_infinity(), T::max);
    let nb = T::from_usize_lossy(n_bins);
    let edges = match binning {
        Binning::Linear => {
            let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - T::lit(0.5), hi + T::lit(0.5)) };
            (0..=n_bins).map(|k| lo + (hi - lo) * T::from_usize_lossy(k) / nb).collect()
        }
        Binning::Log => {
            if !(lo > T::zero()) {
                return Err(Error::Argument("logarithmic bins need positive samples".into()));
            }
            let (a, b) = if hi > lo { (lo.ln(), hi.ln()) } else { (lo.ln() - T::lit(0.5), hi.ln() + T::lit(0.5)) };
            (0..=n_bins).map(|k| (a + (b - a) * T::from_usize_lossy(k) / nb).exp()).collect()
        }
    };
    Ok(edges)
}

fn bin_of<T: Real>(edges: &[T], x: T) -> usize {
    let n = edges.len() - 1;
    // last edge is inclusive
    edges[1..n].partition_point(|&e| e <= x)
}

/// Density-normalized histogram.
pub fn hist1d<T: Real>(samples: &[T], n_bins: usize, binning: Binning) -> Result<Hist1D<T>> {
    let edges = bin_edges(samples, n_bins, binning)?;
    let mut counts = vec![0usize; n_bins];
    for &x in samples {
        counts[bin_of(&edges, x)] += 1;
    }
    let n = T::from_usize_lossy(samples.len());
    let density = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| T::from_usize_lossy(c) / (n * (w[1] - w[0])))
        .collect();
    Ok(Hist1D { edges, density })
}

/// Density-normalized joint histogram with linear bins on both axes.
pub fn hist2d<T: Real>(x: &[T], y: &[T], n_bins: usize) -> Result<Hist2D<T>> {
    if x.len() != y.len() {
        return Err(Error::Argument(format!("sample lengths differ: {} and {}", x.len(), y.len())));
    }
    let x_edges = bin_edges(x, n_bins, Binning::Linear)?;
    let y_edges = bin_edges(y, n_bins, Binning::Linear)?;
    let mut counts = vec![vec![0usize; n_bins]; n_bins];
    for (&a, &b) in x.iter().zip(y) {
        counts[bin_of(&x_edges, a)][bin_of(&y_edges, b)] += 1;
    }
    let n = T::from_usize_lossy(x.len());
    let density = counts
        .iter()
        .zip(x_edges.windows(2))
        .map(|(row, wx)| {
            row.iter()
                .zip(y_edges.windows(2))
                .map(|(&c, wy)| T::from_usize_lossy(c) / (n * (wx[1] - wx[0]) * (wy[1] - wy[0])))
                .collect()
        })
        .collect();
    Ok(Hist2D { x_edges, y_edges, density })
}

/// Supremum distance between the empirical CDFs of `a` and `b`.
pub fn ks_two_sample<T: Real>(a: &[T], b: &[T]) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let sorted = |xs: &[T]| {
        let mut v = xs.to_vec();
        v.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (T::from_usize_lossy(a.len()), T::from_usize_lossy(b.len()));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((T::from_usize_lossy(i) / na - T::from_usize_lossy(j) / nb).abs());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp, Gamma, LogNormal, Normal};

    fn draw(d: impl Distribution<f64>, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn exponential_rate_is_reciprocal_mean() {
        let xs = draw(Exp::new(2.5).unwrap(), 500, 1);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert_eq!(fit_exponential(&xs).params[0], 1.0 / mean);
    }

    #[test]
    fn gamma_recovers_parameters() {
        let xs = draw(Gamma::new(2.0, 1.5).unwrap(), 20_000, 2);
        let f = fit_gamma(&xs);
        assert!(f.converged);
        assert!((f.params[0] - 2.0).abs() < 0.1, "{:?}", f.params);
        assert!((f.params[1] - 1.5).abs() < 0.1, "{:?}", f.params);
        // stationarity of the profile likelihood
        let m = moments(&xs);
        assert!((f.params[0].ln() - digamma(f.params[0]) - (m.mean.ln() - m.mean_ln)).abs() < 1e-9);
    }

    #[test]
    fn beta_recovers_parameters() {
        let g1 = draw(Gamma::new(2.0, 1.0).unwrap(), 20_000, 3);
        let g2 = draw(Gamma::new(5.0, 1.0).unwrap(), 20_000, 4);
        let xs: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a / (a + b)).collect();
        let f = fit_beta(&xs);
        assert!(f.converged);
        assert!((f.params[0] - 2.0).abs() < 0.15 && (f.params[1] - 5.0).abs() < 0.35, "{:?}", f.params);
    }

    #[test]
    fn normal_loglik_matches_direct_sum() {
        let xs = draw(Normal::new(1.0, 2.0).unwrap(), 300, 5);
        let f = fit_normal(&xs);
        let (mu, s) = (f.params[0], f.params[1]);
        let direct: f64 = xs
            .iter()
            .map(|x| -0.5 * (std::f64::consts::TAU * s * s).ln() - (x - mu).powi(2) / (2.0 * s * s))
            .sum();
        assert!((direct - f.loglik).abs() < 1e-9);
        assert!((f.aic - (4.0 - 2.0 * f.loglik)).abs() < 1e-12);
    }

    #[test]
    fn lognormal_wins_on_lognormal_data() {
        let xs = draw(LogNormal::new(0.0, 0.5).unwrap(), 2000, 6);
        let fits = fit_all(&xs).unwrap();
        assert_eq!(fits[0].family, Family::Lognormal);
        assert_eq!(fits[0].rank, Some(1));
        // beta is inapplicable outside (0, 1)
        assert!(fits.iter().any(|f| f.family == Family::Beta && !f.converged && f.rank.is_none()));
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(fit_all(&[1.0; 10]), Err(Error::InsufficientData { needed: 30, got: 10 })));
        assert!(fit_all(&[-1.0; 40]).is_err());
    }

    #[test]
    fn histogram_edge_cases() {
        let h = hist1d(&[3.0_f64; 20], 10, Binning::Linear).unwrap();
        assert_eq!(h.density.iter().filter(|&&d| d > 0.0).count(), 1);
        assert!((h.integral() - 1.0).abs() < 1e-12);
        assert!(hist1d::<f64>(&[], 10, Binning::Linear).is_err());
        assert!(hist1d(&[1.0, 2.0], 1, Binning::Linear).is_err());
        let h = hist1d(&[0.1_f64, 1.0, 10.0, 100.0], 3, Binning::Log).unwrap();
        assert_eq!(h.density.iter().filter(|&&d| d > 0.0).count(), 3);
        assert!((h.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_extremes() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&a, &[10.0, 11.0]).unwrap(), 1.0);
        let x = draw(Normal::new(0.0, 1.0).unwrap(), 1000, 7);
        let y = draw(Normal::new(3.0, 1.0).unwrap(), 1000, 8);
        assert!(ks_two_sample(&x, &y).unwrap() > 0.8);
    }

    #[test]
    fn csv_has_rank_column() {
        let xs = draw(LogNormal::new(0.0, 0.5).unwrap(), 100, 9);
        let text = fits_to_csv(&fit_all(&xs).unwrap());
        assert!(text.starts_with("family,param1,param2,loglik,aic,rank\n"));
        assert_eq!(text.lines().count(), 6);
        assert!(text.contains("exponential,"));
    }
}
