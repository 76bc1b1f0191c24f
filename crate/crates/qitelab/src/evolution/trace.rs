//! Time-series records emitted by every evolver.

use std::fmt::Write as _;

/// One recorded point of an evolution.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub tau: f64,
    pub energy: f64,
    /// Squared overlap with the reference state, when a reference was given.
    pub fidelity: Option<f64>,
    /// Per-step normalization `c = ‖e^{-Δτ h}ψ‖²` product, for non-unitary
    /// evolvers.
    pub c_norm: Option<f64>,
    /// Linear-system residual, for the unitary-fit evolver.
    pub residual: Option<f64>,
}

/// Rows with strictly increasing `tau`.
#[derive(Debug, Clone, Default)]
pub struct EvolutionTrace {
    rows: Vec<TraceRow>,
}

impl EvolutionTrace {
    pub fn new() -> Self {
        EvolutionTrace { rows: Vec::new() }
    }

    pub fn push(&mut self, row: TraceRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.tau > last.tau, "trace times must increase");
        }
        assert!(row.energy.is_finite(), "trace energy must be finite");
        if let Some(f) = row.fidelity {
            assert!((-1e-12..=1.0 + 1e-12).contains(&f), "fidelity out of range: {f}");
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV with the fixed header `tau,energy,fidelity,c_norm,residual`;
    /// missing values are written as empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,energy,fidelity,c_norm,residual\n");
        for r in &self.rows {
            let fid = r.fidelity.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let cn = r.c_norm.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let res = r.residual.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let _ = writeln!(out, "{:.12e},{:.12e},{},{},{}", r.tau, r.energy, fid, cn, res);
        }
        out
    }
}
