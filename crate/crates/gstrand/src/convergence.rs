//! Joint (Δs, Δt) refinement studies.

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::HarnessError;
use crate::runner::run_scenario;

/// Errors at or below this are treated as exact; no order is reported.
pub const ORDER_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelInfo {
    pub nodes: usize,
    pub dt: f64,
}

/// Error sequence and observed orders for one diagnostic column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub diagnostic: String,
    pub column: String,
    pub errors: Vec<f64>,
    /// `log2(e_k / e_{k+1})`, `None` where undefined.
    pub orders: Vec<Option<f64>>,
    /// False when some error grew under refinement.
    pub monotone: bool,
}

impl ConvergenceRow {
    /// Smallest defined order, `None` if any is undefined.
    pub fn min_order(&self) -> Option<f64> {
        self.orders
            .iter()
            .try_fold(f64::INFINITY, |acc, o| o.map(|o| acc.min(o)))
            .filter(|o| o.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub model: String,
    pub levels: Vec<LevelInfo>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn row(&self, diagnostic: &str, column: &str) -> Option<&ConvergenceRow> {
        self.rows
            .iter()
            .find(|r| r.diagnostic == diagnostic && r.column == column)
    }
}

/// Observed order between two errors, or `None` if the pair is below
/// [`ORDER_FLOOR`], non-finite or not decreasing.
pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    let usable = |e: f64| e.is_finite() && e > ORDER_FLOOR;
    (usable(coarse) && usable(fine) && fine <= coarse).then(|| (coarse / fine).log2())
}

/// Run `cfg` at `levels` resolutions, halving Δs and Δt together, and report
/// the observed order of every diagnostic column. Runs are in-memory only.
pub fn convergence_study(cfg: &ScenarioConfig, levels: u32) -> Result<ConvergenceTable, HarnessError> {
    if levels < 3 {
        return Err(HarnessError::Validation(
            "a convergence study needs at least 3 levels".into(),
        ));
    }
    cfg.validate()?;
    let mut reports = Vec::new();
    let mut infos = Vec::new();
    for k in 0..levels {
        let mut c = cfg.refined(k);
        c.output.directory = None;
        let report = run_scenario(&c, None)?;
        infos.push(LevelInfo {
            nodes: report.nodes,
            dt: report.dt,
        });
        reports.push(report);
    }
    let mut rows = Vec::new();
    for (d, series) in reports[0].diagnostics.iter().enumerate() {
        for (c, column) in series.columns.iter().enumerate() {
            let errors: Vec<f64> = reports.iter().map(|r| r.diagnostics[d].summary[c]).collect();
            let orders: Vec<Option<f64>> = errors.windows(2).map(|w| observed_order(w[0], w[1])).collect();
            let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
            rows.push(ConvergenceRow {
                diagnostic: series.name.clone(),
                column: column.clone(),
                errors,
                orders,
                monotone,
            });
        }
    }
    Ok(ConvergenceTable {
        model: cfg.model.name().to_string(),
        levels: infos,
        rows,
    })
}
