//! Single-snapshot analysis: preprocessing, topology and vortices.

use serde::{Deserialize, Serialize};

use crate::cot::{build_cot, filter_cot, CotTree, CutChoice};
use crate::cotlang::{Mode, Style};
use crate::fieldio::{coarse_grain, normalize, CoarseMethod, ScalarField};
use crate::mesh::vertex_ranks;
use crate::morse::{detect_with_ranks, validate_stability, StabilityReport, MIN_GRID};
use crate::reeb::{assemble, ReebGraph};
use crate::vortex::{extract_terminal_vortices, with_quantities, TerminalVortex};
use crate::{Error, Real, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Filtering threshold on the (normalized) Hamiltonian.
    pub eps0: f64,
    pub coarse_factor: usize,
    pub coarse_method: CoarseMethod,
    pub normalize: bool,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { eps0: 0.1, coarse_factor: 1, coarse_method: CoarseMethod::Mean, normalize: true, mode: Mode::Strict, seed: 0 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 >= 0.0) {
            return Err(Error::Argument(format!("eps0 must be non-negative, got {}", self.eps0)));
        }
        if self.coarse_factor < 1 {
            return Err(Error::Argument("coarse factor must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Topology<T> {
    pub reeb: ReebGraph<T>,
    pub cut: CutChoice<T>,
    pub cot: CotTree<T>,
    pub filtered: CotTree<T>,
    pub vortices: Vec<TerminalVortex<T>>,
}

impl<T: Real> Topology<T> {
    pub fn cot_string(&self, style: Style) -> String {
        self.cot.emit(style)
    }

    pub fn filtered_string(&self, style: Style) -> String {
        self.filtered.emit(style)
    }
}

#[derive(Clone, Debug)]
pub struct Analysis<T> {
    /// Field the topology was computed on (coarse-grained, maybe normalized).
    pub field: ScalarField<T>,
    pub report: StabilityReport,
    /// Absent when the field is not structurally stable.
    pub topology: Option<Topology<T>>,
}

impl<T: Real> Analysis<T> {
    pub fn is_stable(&self) -> bool {
        self.topology.is_some()
    }
}

/// Runs the full pipeline on one stream-function snapshot.
///
/// Degenerate fields produce an analysis with a degenerate report and no
/// topology; errors are reserved for bad input and internal failures.
pub fn analyze<T: Real>(psi: &ScalarField<T>, config: &RunConfig) -> Result<Analysis<T>> {
    config.validate()?;
    let coarse = coarse_grain(psi, config.coarse_factor, config.coarse_method)?;
    if coarse.nx() < MIN_GRID || coarse.ny() < MIN_GRID {
        return Err(Error::Argument(format!(
            "analysis grid {}x{} is smaller than {MIN_GRID}x{MIN_GRID}",
            coarse.nx(),
            coarse.ny()
        )));
    }
    let field = if config.normalize {
        match normalize(&coarse) {
            Ok(f) => f,
            Err(Error::Degenerate(reason)) => {
                return Ok(Analysis { field: coarse, report: StabilityReport::degenerate(reason), topology: None });
            }
            Err(e) => return Err(e),
        }
    } else {
        coarse.clone()
    };

    let ranks = vertex_ranks(field.values());
    let points = match detect_with_ranks(&field, &ranks) {
        Ok(p) => p,
        Err(Error::Degenerate(reason)) => {
            return Ok(Analysis { field, report: StabilityReport::degenerate(reason), topology: None });
        }
        Err(e) => return Err(e),
    };
    let report = validate_stability(&points);
    if !report.is_stable() {
        return Ok(Analysis { field, report, topology: None });
    }

    let reeb = assemble(&field, ranks, points)?;
    let (cot, cut) = build_cot(&reeb)?;
    let eps0 = T::lit(config.eps0);
    let filtered = filter_cot(&cot, eps0);
    let vortices = extract_terminal_vortices(&filtered, &reeb.regions, &field, eps0);
    let vortices = with_quantities(vortices, &coarse)?;
    Ok(Analysis { field, report, topology: Some(Topology { reeb, cut, cot, filtered, vortices }) })
}

/// Stability report, cut choice and counts as JSON.
pub fn report_json<T: Real>(analysis: &Analysis<T>, config: &RunConfig) -> serde_json::Value {
    let mut doc = serde_json::json!({
        "grid": [analysis.field.nx(), analysis.field.ny()],
        "config": config,
        "stability": analysis.report,
    });
    if let Some(t) = &analysis.topology {
        let count = |tree: &CotTree<T>| tree.nodes.len();
        doc["cut"] = serde_json::json!({
            "saddle": t.cut.saddle,
            "saddle_pixel": t.reeb.nodes[t.cut.saddle].pixel,
            "edge": t.cut.edge,
            "cut_value": t.cut.cut_value.as_f64(),
            "shift_axis": t.cut.shift_axis,
            "winding": [t.cut.winding.0, t.cut.winding.1],
        });
        doc["counts"] = serde_json::json!({
            "reeb_nodes": t.reeb.nodes.len(),
            "reeb_edges": t.reeb.edges.len(),
            "cot_nodes": count(&t.cot),
            "filtered_nodes": count(&t.filtered),
            "vortices": t.vortices.len(),
        });
        doc["cot"] = t.cot_string(Style::Unicode).into();
        doc["filtered_cot"] = t.filtered_string(Style::Unicode).into();
    }
    doc
}
