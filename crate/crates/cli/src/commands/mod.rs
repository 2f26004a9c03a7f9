//! The four workflows.

mod analyze;
mod simulate;
mod validate;

pub use analyze::analyze;
pub use simulate::{simulate_m, simulate_paths};
pub use validate::{validate, Check, CheckStatus};

use std::fs::File;
use std::path::Path;

use shockrisk::claims::ClaimDistribution;
use shockrisk::RiskModel;

use crate::{io_error, CliError};

/// Largest Volterra grid built by the workflows.
const MAX_VOLTERRA_POINTS: f64 = 40_000.0;

pub(crate) fn require_net_profit(model: &RiskModel) -> Result<(), CliError> {
    if model.net_profit_holds() {
        Ok(())
    } else {
        Err(CliError::NetProfit { premium: model.premium_rate(), claim_rate: model.lambda_mu() })
    }
}

/// `grid_max = 20 · mean deficit / ρ` and `step = grid_max / 1000`.
pub fn default_grid(model: &RiskModel) -> (f64, f64) {
    let grid_max = 20.0 * model.mean_deficit() / model.safety_loading();
    (grid_max, grid_max / 1000.0)
}

/// Volterra step resolving the shortest claim scale, a divisor of `spacing`.
pub(crate) fn volterra_step(model: &RiskModel, span: f64, spacing: f64) -> f64 {
    let scale = model.active_components().map(|c| c.claim.mean()).fold(f64::INFINITY, f64::min);
    let target = (scale / 20.0).max(span / MAX_VOLTERRA_POINTS);
    spacing / (spacing / target).ceil()
}

/// `ψ(u)` from the Volterra route.
pub(crate) fn volterra_psi(model: &RiskModel, u: f64) -> Result<f64, CliError> {
    if u == 0.0 {
        return Ok(model.psi0());
    }
    let h = volterra_step(model, u, u);
    let curve = model.survival_curve_volterra(u, h)?;
    Ok(1.0 - *curve.delta.last().expect("nonempty grid"))
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

pub(crate) fn finish_csv(mut writer: csv::Writer<File>) -> Result<(), CliError> {
    writer.flush().map_err(io_error)
}
