use std::io::Write;

use super::{csv_writer, finish_csv, require_net_profit, volterra_psi};
use crate::config::load;
use crate::manifest::RunManifest;
use crate::{io_error, AnalyzeArgs, CliError};

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(&args.config)?;
    let model = &loaded.model;
    let a = model.analytics();
    let counts = model.aggregate.counting.moments(1.0)?;
    let claims = model.aggregate.moments(1.0)?;
    let u = model.initial_capital();

    let mut rows: Vec<(&str, String)> = vec![
        ("lambda0", model.aggregate.counting.lambda0().to_string()),
        ("lambda1", model.aggregate.counting.lambda1().to_string()),
        ("lambda2", model.aggregate.counting.lambda2().to_string()),
        ("lambda", model.lambda().to_string()),
        ("premium_rate", model.premium_rate().to_string()),
        ("initial_capital", u.to_string()),
        ("count_mean1", counts.mean1.to_string()),
        ("count_mean2", counts.mean2.to_string()),
        ("count_var1", counts.var1.to_string()),
        ("count_var2", counts.var2.to_string()),
        ("count_cov", counts.cov.to_string()),
        ("count_cor", counts.cor.to_string()),
        ("count_cross_moment", counts.cross_moment.to_string()),
        ("claims_mean1", claims.mean1.to_string()),
        ("claims_mean2", claims.mean2.to_string()),
        ("claims_var1", claims.var1.to_string()),
        ("claims_var2", claims.var2.to_string()),
        ("claims_cov", claims.cov.to_string()),
        ("claims_cor", claims.cor.to_string()),
        ("claims_mean_total", claims.mean_total.to_string()),
        ("claims_var_total", claims.var_total.to_string()),
        ("lambda_mu", a.lambda_mu.to_string()),
        ("mean_claim_per_event", a.mean_per_event.to_string()),
        ("safety_loading", a.rho.to_string()),
        ("net_profit_condition", a.net_profit.to_string()),
        ("psi0", a.psi0.to_string()),
        ("delta0", a.delta0.to_string()),
        ("ladder_weight1", a.p1.to_string()),
        ("ladder_weight2", a.p2.to_string()),
        ("ladder_weight0", a.p0.to_string()),
        ("mean_deficit", a.mean_deficit.to_string()),
        ("expected_ruin_time_at_zero", opt(a.expected_ruin_time_at_zero)),
        ("adjustment_coefficient", opt(a.adjustment_coefficient)),
    ];
    if a.net_profit {
        rows.push(("cramer_lundberg_constant", opt(model.cramer_lundberg_constant().ok())));
        rows.push(("psi_at_initial_capital", volterra_psi(model, u)?.to_string()));
        rows.push(("lundberg_bound_at_initial_capital", opt(model.lundberg_bound(u).ok())));
        rows.push(("cramer_lundberg_at_initial_capital", opt(model.cramer_lundberg_approximation(u).ok())));
    } else {
        rows.push(("psi_at_initial_capital", "1".to_string()));
    }
    rows.push(("exact_psi_at_initial_capital", opt(model.exact_ruin_probability(u).ok())));

    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in &rows {
        writeln!(out, "{k:<width$}  {v}").map_err(io_error)?;
    }

    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        w.write_record(["quantity", "value"]).map_err(io_error)?;
        for (k, v) in &rows {
            w.write_record([*k, v.as_str()]).map_err(io_error)?;
        }
        finish_csv(w)?;
        RunManifest::new("analyze", &loaded, path).write_beside(path)?;
    }
    require_net_profit(model)
}
