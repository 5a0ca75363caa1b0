//! Critical points of a piecewise-linear Hamiltonian on the periodic grid,
//! and the structural-stability checks the rest of the pipeline relies on.

use serde::{Deserialize, Serialize};

use crate::fieldio::ScalarField;
use crate::mesh::{vertex_ranks, Mesh};
use crate::{Error, Real, Result};

/// Smallest grid the analysis accepts.
pub const MIN_GRID: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint<T> {
    pub kind: CriticalKind,
    pub pixel: (usize, usize),
    /// Row-major vertex index of `pixel`.
    pub index: usize,
    pub value: T,
    /// Connected components of the lower link: 0 for minima, 1 for maxima
    /// (the whole link is lower), 2 for simple saddles, 3+ for multi-saddles.
    pub lower_link_components: usize,
    /// A link neighbour has exactly the same raw value, so the point is
    /// isolated only through the index tie-break.
    pub plateau: bool,
}

impl<T> CriticalPoint<T> {
    pub fn is_extremum(&self) -> bool {
        self.kind != CriticalKind::Saddle
    }

    pub fn is_multi_saddle(&self) -> bool {
        self.kind == CriticalKind::Saddle && self.lower_link_components > 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub n_min: usize,
    pub n_max: usize,
    pub n_saddle: usize,
    pub multi_saddles: Vec<(usize, usize)>,
    /// Saddles whose raw value equals another saddle's.
    pub tied_saddles: Vec<(usize, usize)>,
    /// Critical points on a plateau of equal raw values.
    pub plateaus: Vec<(usize, usize)>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::Stable
    }

    /// Report for a field rejected before critical points were found.
    pub fn degenerate(reason: impl Into<String>) -> Self {
        Self {
            n_min: 0,
            n_max: 0,
            n_saddle: 0,
            multi_saddles: vec![],
            tied_saddles: vec![],
            plateaus: vec![],
            verdict: Verdict::Degenerate,
            reasons: vec![reason.into()],
        }
    }
}

/// Classifies every vertex by the lower link of the fixed-diagonal
/// triangulation, with ties broken by pixel index.
pub fn detect_critical_points<T: Real>(field: &ScalarField<T>) -> Result<Vec<CriticalPoint<T>>> {
    let ranks = vertex_ranks(field.values());
    detect_with_ranks(field, &ranks)
}

pub(crate) fn detect_with_ranks<T: Real>(field: &ScalarField<T>, ranks: &[u32]) -> Result<Vec<CriticalPoint<T>>> {
    if field.nx() < MIN_GRID || field.ny() < MIN_GRID {
        return Err(Error::Argument(format!(
            "grid {}x{} is smaller than the minimum {MIN_GRID}x{MIN_GRID}",
            field.nx(),
            field.ny()
        )));
    }
    let (lo, hi) = field.min_max();
    if !(hi > lo) {
        return Err(Error::Degenerate("constant field has no isolated critical points".into()));
    }
    let mesh = Mesh::new(field.nx(), field.ny());
    let mut points = Vec::new();
    for v in 0..mesh.vertex_count() {
        let below: [bool; 6] = std::array::from_fn(|k| ranks[mesh.neighbor(v, k)] < ranks[v]);
        let n_below = below.iter().filter(|&&b| b).count();
        let changes = (0..6).filter(|&k| below[k] != below[(k + 1) % 6]).count();
        let (kind, components) = match (n_below, changes) {
            (0, _) => (CriticalKind::Minimum, 0),
            (6, _) => (CriticalKind::Maximum, 1),
            (_, 2) => continue,
            (_, c) => (CriticalKind::Saddle, c / 2),
        };
        points.push(CriticalPoint {
            kind,
            pixel: field.pixel(v),
            index: v,
            value: field.values()[v],
            lower_link_components: components,
            plateau: (0..6).any(|k| field.values()[mesh.neighbor(v, k)] == field.values()[v]),
        });
    }
    Ok(points)
}

/// Checks that the critical set looks like a structurally stable
/// Hamiltonian on the torus: no multi-saddles, as many saddles as centers,
/// no two saddles at exactly the same raw value, and no critical point
/// sitting on a flat patch (a sampled critical curve).
pub fn validate_stability<T: Real>(points: &[CriticalPoint<T>]) -> StabilityReport {
    let count = |k| points.iter().filter(|p| p.kind == k).count();
    let (n_min, n_max, n_saddle) = (count(CriticalKind::Minimum), count(CriticalKind::Maximum), count(CriticalKind::Saddle));
    let multi_saddles: Vec<_> = points.iter().filter(|p| p.is_multi_saddle()).map(|p| p.pixel).collect();

    let mut saddles: Vec<&CriticalPoint<T>> = points.iter().filter(|p| p.kind == CriticalKind::Saddle).collect();
    saddles.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap().then(a.index.cmp(&b.index)));
    let mut tied = vec![false; saddles.len()];
    for k in 1..saddles.len() {
        if saddles[k].value == saddles[k - 1].value {
            tied[k] = true;
            tied[k - 1] = true;
        }
    }
    let mut tied_saddles: Vec<_> = saddles.iter().zip(&tied).filter(|(_, &t)| t).map(|(p, _)| p.pixel).collect();
    tied_saddles.sort_unstable();

    let plateaus: Vec<_> = points.iter().filter(|p| p.plateau).map(|p| p.pixel).collect();

    let mut reasons = Vec::new();
    if points.is_empty() {
        reasons.push("no critical points".to_string());
    }
    if !multi_saddles.is_empty() {
        reasons.push(format!("{} multi-saddle(s)", multi_saddles.len()));
    }
    if n_min + n_max != n_saddle {
        reasons.push(format!("{n_min} minima + {n_max} maxima != {n_saddle} saddles"));
    }
    if !tied_saddles.is_empty() {
        reasons.push(format!("{} saddle(s) share a critical value", tied_saddles.len()));
    }
    if !plateaus.is_empty() {
        reasons.push(format!("{} critical point(s) on a plateau of equal values", plateaus.len()));
    }
    let verdict = if reasons.is_empty() { Verdict::Stable } else { Verdict::Degenerate };
    StabilityReport { n_min, n_max, n_saddle, multi_saddles, tied_saddles, plateaus, verdict, reasons }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(kind: CriticalKind, i: usize, value: f64) -> CriticalPoint<f64> {
        let lower_link_components = match kind {
            CriticalKind::Minimum => 0,
            CriticalKind::Maximum => 1,
            CriticalKind::Saddle => 2,
        };
        CriticalPoint { kind, pixel: (i, 0), index: i, value, lower_link_components, plateau: false }
    }

    #[test]
    fn cos_field_has_four_critical_points() {
        let f = ScalarField::<f64>::sample(256, |x, y| y.cos() + 0.3 * x.cos()).unwrap();
        let pts = detect_critical_points(&f).unwrap();
        assert_eq!(pts.len(), 4, "{pts:?}");
        let mut found: Vec<(CriticalKind, f64)> = pts.iter().map(|p| (p.kind, p.value)).collect();
        found.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let expected = [
            (CriticalKind::Minimum, -1.3),
            (CriticalKind::Saddle, -0.7),
            (CriticalKind::Saddle, 0.7),
            (CriticalKind::Maximum, 1.3),
        ];
        for ((k, v), (ek, ev)) in found.iter().zip(expected) {
            assert_eq!(*k, ek);
            assert!((v - ev).abs() < 1e-2);
        }
        let report = validate_stability(&pts);
        assert!(report.is_stable());
        assert_eq!((report.n_min, report.n_max, report.n_saddle), (1, 1, 2));
    }

    #[test]
    fn product_of_sines_is_degenerate() {
        let f = ScalarField::<f64>::sample(256, |x, y| x.sin() * y.sin()).unwrap();
        let report = validate_stability(&detect_critical_points(&f).unwrap());
        assert_eq!(report.verdict, Verdict::Degenerate);
    }

    #[test]
    fn single_mode_is_degenerate() {
        let f = ScalarField::<f64>::sample(64, |x, _| x.cos()).unwrap();
        let report = validate_stability(&detect_critical_points(&f).unwrap());
        assert_eq!(report.verdict, Verdict::Degenerate);
    }

    #[test]
    fn constant_field_errors() {
        let f = ScalarField::<f64>::sample(16, |_, _| 1.0).unwrap();
        assert!(matches!(detect_critical_points(&f), Err(Error::Degenerate(_))));
    }

    #[test]
    fn count_mismatch_is_degenerate() {
        let pts = vec![
            point(CriticalKind::Minimum, 0, -1.0),
            point(CriticalKind::Minimum, 1, -2.0),
            point(CriticalKind::Maximum, 2, 1.0),
            point(CriticalKind::Saddle, 3, 0.1),
            point(CriticalKind::Saddle, 4, 0.2),
        ];
        let r = validate_stability(&pts);
        assert_eq!(r.verdict, Verdict::Degenerate);
        assert_eq!(r.n_min + r.n_max, 3);
    }

    #[test]
    fn empty_is_degenerate() {
        assert_eq!(validate_stability::<f64>(&[]).verdict, Verdict::Degenerate);
    }

    #[test]
    fn tied_saddles_are_flagged() {
        let pts = vec![
            point(CriticalKind::Minimum, 0, -1.0),
            point(CriticalKind::Maximum, 1, 1.0),
            point(CriticalKind::Saddle, 2, 0.0),
            point(CriticalKind::Saddle, 3, 0.0),
        ];
        let r = validate_stability(&pts);
        assert_eq!(r.tied_saddles.len(), 2);
        assert_eq!(r.verdict, Verdict::Degenerate);
    }

    #[test]
    fn critical_points_follow_translation() {
        let f = ScalarField::<f64>::sample(64, |x, y| (x + 0.3).cos() + 0.6 * (2.0 * y).sin() + 0.2 * (x - y).cos()).unwrap();
        let a = detect_critical_points(&f).unwrap();
        let b = detect_critical_points(&f.rolled(5, -3)).unwrap();
        let mut shifted: Vec<_> = a.iter().map(|p| ((p.pixel.0 + 5) % 64, (p.pixel.1 + 64 - 3) % 64, p.kind)).collect();
        let mut got: Vec<_> = b.iter().map(|p| (p.pixel.0, p.pixel.1, p.kind)).collect();
        shifted.sort_by_key(|p| (p.0, p.1));
        got.sort_by_key(|p| (p.0, p.1));
        assert_eq!(shifted, got);
    }
}
