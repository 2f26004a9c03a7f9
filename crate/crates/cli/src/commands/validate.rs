use std::f64::consts::{FRAC_2_PI, SQRT_2};
use std::io::Write;

use shockrisk::claims::ClaimDistribution;
use shockrisk::{mc, AggregateSample, RiskModel, SurvivalCurve};

use super::{default_grid, volterra_step};
use crate::config::load;
use crate::{io_error, CliError, ValidateArgs};

/// Largest tolerated standardised deviation between an estimate and its reference.
const Z_LIMIT: f64 = 5.0;
/// Max-abs agreement required between survival-curve routes.
const ROUTE_TOL: f64 = 0.01;
/// Points on the survival-curve comparison grid.
const CURVE_POINTS: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn judged(name: &'static str, ok: bool, detail: String) -> Check {
        Check { name, status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail }
    }

    fn skipped(name: &'static str, why: &str) -> Check {
        Check { name, status: CheckStatus::Skip, detail: why.to_string() }
    }
}

fn subseed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(&args.config)?;
    let n = args.level.samples();
    writeln!(out, "validate config={} level={:?} samples={n} seed={}", loaded.path.display(), args.level, args.seed)
        .map_err(io_error)?;
    let checks = run_checks(&loaded.model, args.seed, n)?;
    let mut failed = Vec::new();
    let mut skipped = 0;
    for c in &checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => {
                failed.push(c.name.to_string());
                "FAIL"
            }
            CheckStatus::Skip => {
                skipped += 1;
                "SKIP"
            }
        };
        writeln!(out, "{tag} {}: {}", c.name, c.detail).map_err(io_error)?;
    }
    writeln!(
        out,
        "summary: {} passed, {} failed, {skipped} skipped",
        checks.len() - failed.len() - skipped,
        failed.len()
    )
    .map_err(io_error)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed))
    }
}

/// All consistency checks for `model` at `n` Monte Carlo draws per route.
pub fn run_checks(model: &RiskModel, seed: u64, n: u64) -> Result<Vec<Check>, CliError> {
    let mut checks =
        vec![counting_equivalence(model, subseed(seed, 1), n)?, aggregate_equivalence(model, subseed(seed, 2), n)?];
    let npc_names = ["survival-routes", "ruin-at-zero", "deficit-law", "lundberg-domination", "closed-form"];
    if model.net_profit_holds() {
        let (curve_checks, domination) = survival_routes(model, subseed(seed, 3), n)?;
        checks.extend(curve_checks);
        checks.extend(ruin_at_zero(model, subseed(seed, 4), n)?);
        checks.push(domination);
        checks.push(closed_form(model)?);
    } else {
        let why = format!(
            "skipped: net profit condition fails (premium {} <= expected claims {})",
            model.premium_rate(),
            model.lambda_mu()
        );
        checks.extend(npc_names.iter().map(|name| Check::skipped(name, &why)));
    }
    checks.push(path_events(model, subseed(seed, 5), (n / 10).max(1000))?);
    Ok(checks)
}

/// Expected total-variation distance between an `n`-sample histogram and its law.
fn tv_noise_floor(pmf: &[f64], n: u64) -> f64 {
    0.5 * pmf.iter().map(|&p| (FRAC_2_PI * p * (1.0 - p).max(0.0) / n as f64).sqrt()).sum::<f64>()
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn counting_equivalence(model: &RiskModel, seed: u64, n: u64) -> Result<Check, CliError> {
    let counting = model.aggregate.counting;
    let m = counting.moments(1.0)?;
    let hi1 = (m.mean1 + 10.0 * m.var1.sqrt() + 5.0).ceil() as u64;
    let hi2 = (m.mean2 + 10.0 * m.var2.sqrt() + 5.0).ceil() as u64;
    let cells = ((hi1 + 1) * (hi2 + 1)) as usize;
    let index = |a: u64, b: u64| if a <= hi1 && b <= hi2 { (a * (hi2 + 1) + b) as usize } else { cells };

    let mut exact = vec![0.0; cells + 1];
    for a in 0..=hi1 {
        for b in 0..=hi2 {
            exact[index(a, b)] = counting.joint_pmf(1.0, a, b)?;
        }
    }
    exact[cells] = (1.0 - exact[..cells].iter().sum::<f64>()).max(0.0);

    let histogram = |type1: bool, seed: u64| -> Vec<f64> {
        let parts = mc::map_chunks(n, seed, |_, len, rng| {
            let mut h = vec![0u64; cells + 1];
            for _ in 0..len {
                let c = if type1 { counting.sample_type1(1.0, rng) } else { counting.sample_superposition(1.0, rng) };
                h[index(c.m1, c.m2)] += 1;
            }
            h
        });
        let mut total = vec![0u64; cells + 1];
        for p in parts {
            total.iter_mut().zip(p).for_each(|(t, v)| *t += v);
        }
        total.into_iter().map(|c| c as f64 / n as f64).collect()
    };
    let sup = histogram(false, seed);
    let typ = histogram(true, seed ^ 1);

    let floor = tv_noise_floor(&exact, n);
    let tol_one = 2.0 * floor + 1e-3;
    let tol_two = 2.0 * SQRT_2 * floor + 1e-3;
    let (d_st, d_se, d_te) = (tv(&sup, &typ), tv(&sup, &exact), tv(&typ, &exact));
    Ok(Check::judged(
        "counting-equivalence",
        d_st < tol_two && d_se < tol_one && d_te < tol_one,
        format!("tv(superposition,type1)={d_st:.5} tol={tol_two:.5}; tv(superposition,pmf)={d_se:.5}, tv(type1,pmf)={d_te:.5} tol={tol_one:.5}"),
    ))
}

/// Sample means with standard errors.
struct Estimate {
    value: f64,
    se: f64,
}

fn mean_estimate(xs: impl Iterator<Item = f64> + Clone, n: usize) -> Estimate {
    let m = xs.clone().sum::<f64>() / n as f64;
    let v = xs.map(|x| (x - m) * (x - m)).sum::<f64>() / (n as f64 - 1.0);
    Estimate { value: m, se: (v / n as f64).sqrt() }
}

struct AggregateStats {
    mean: [Estimate; 2],
    var: [Estimate; 2],
    cov: Estimate,
    lst: Vec<Estimate>,
}

fn aggregate_stats(draws: &[AggregateSample], grid: &[(f64, f64)]) -> AggregateStats {
    let n = draws.len();
    let s1 = || draws.iter().map(|d| d.s1);
    let s2 = || draws.iter().map(|d| d.s2);
    let (m1, m2) = (mean_estimate(s1(), n), mean_estimate(s2(), n));
    let (a, b) = (m1.value, m2.value);
    let var = |m: f64, pick: fn(&AggregateSample) -> f64| {
        let e = mean_estimate(draws.iter().map(|d| (pick(d) - m).powi(2)), n);
        Estimate { value: e.value * n as f64 / (n as f64 - 1.0), se: e.se }
    };
    let cov = mean_estimate(draws.iter().map(|d| (d.s1 - a) * (d.s2 - b)), n);
    let lst =
        grid.iter().map(|&(z1, z2)| mean_estimate(draws.iter().map(|d| (-z1 * d.s1 - z2 * d.s2).exp()), n)).collect();
    AggregateStats {
        var: [var(a, |d| d.s1), var(b, |d| d.s2)],
        mean: [m1, m2],
        cov: Estimate { value: cov.value * n as f64 / (n as f64 - 1.0), se: cov.se },
        lst,
    }
}

fn z_score(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        (diff / se).abs()
    }
}

fn aggregate_equivalence(model: &RiskModel, seed: u64, n: u64) -> Result<Check, CliError> {
    let agg = model.aggregate;
    let exact = agg.moments(1.0)?;
    let scale = |m: f64| if m > 0.0 { 1.0 / m } else { 1.0 };
    let zs = [0.25, 0.5, 1.0];
    let grid: Vec<(f64, f64)> =
        zs.iter().flat_map(|&a| zs.iter().map(move |&b| (a * scale(exact.mean1), b * scale(exact.mean2)))).collect();
    let direct = mc::collect_draws(n, seed, |rng| agg.sample_direct(1.0, rng));
    let typ = mc::collect_draws(n, seed ^ 1, |rng| agg.sample_type1(1.0, rng));
    let (d, t) = (aggregate_stats(&direct, &grid), aggregate_stats(&typ, &grid));

    let mut reference = vec![exact.mean1, exact.mean2, exact.var1, exact.var2, exact.cov];
    for &(z1, z2) in &grid {
        reference.push(agg.joint_lst(1.0, z1, z2)?);
    }
    let flatten = |s: &AggregateStats| -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> =
            [&s.mean[0], &s.mean[1], &s.var[0], &s.var[1], &s.cov].iter().map(|e| (e.value, e.se)).collect();
        v.extend(s.lst.iter().map(|e| (e.value, e.se)));
        v
    };
    let (fd, ft) = (flatten(&d), flatten(&t));
    let mut worst: f64 = 0.0;
    for ((&(vd, sd), &(vt, st)), &r) in fd.iter().zip(&ft).zip(&reference) {
        worst = worst.max(z_score(vd - r, sd)).max(z_score(vt - r, st)).max(z_score(vd - vt, sd.hypot(st)));
    }
    Ok(Check::judged(
        "aggregate-equivalence",
        worst < Z_LIMIT,
        format!(
            "max |z|={worst:.2} limit={Z_LIMIT} over means, variances, covariance and 9 LST points; cov direct={:.4} type1={:.4} exact={}",
            d.cov.value, t.cov.value, exact.cov
        ),
    ))
}

fn survival_routes(model: &RiskModel, seed: u64, n: u64) -> Result<(Vec<Check>, Check), CliError> {
    let (grid_max, _) = default_grid(model);
    let step = grid_max / CURVE_POINTS;
    let mc_curve = model.survival_curve_mc(grid_max, step, n, seed)?;
    let h = volterra_step(model, grid_max, step);
    let stride = (step / h).round() as usize;
    let fine = model.survival_curve_volterra(grid_max, h)?;
    let volterra: Vec<f64> = (0..mc_curve.len()).map(|i| fine.delta[(i * stride).min(fine.len() - 1)]).collect();
    let max_gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let mut checks = Vec::new();
    let mv = max_gap(&mc_curve.delta, &volterra);
    let mut ok = mv < ROUTE_TOL;
    let mut detail =
        format!("max|mc-volterra|={mv:.5} tol={ROUTE_TOL} on [0, {grid_max:.4}] ({} points)", mc_curve.len());
    if let Ok(exact) = model.survival_curve_exact(grid_max, step) {
        let me = max_gap(&mc_curve.delta, &exact.delta);
        let ve = max_gap(&volterra, &exact.delta);
        ok &= me < ROUTE_TOL && ve < 1e-5;
        detail.push_str(&format!("; max|mc-exact|={me:.5}; max|volterra-exact|={ve:.2e} tol=1e-5"));
    }
    checks.push(Check::judged("survival-routes", ok, detail));
    Ok((checks, lundberg_domination(model, &mc_curve, &volterra, n)))
}

fn lundberg_domination(model: &RiskModel, mc_curve: &SurvivalCurve, volterra: &[f64], n: u64) -> Check {
    let Some(eps) = model.adjustment_coefficient() else {
        return Check::skipped("lundberg-domination", "skipped: no adjustment coefficient");
    };
    let mut worst_v = f64::NEG_INFINITY;
    let mut worst_m = f64::NEG_INFINITY;
    let mut ok = true;
    for (i, &u) in mc_curve.u.iter().enumerate() {
        let bound = (-eps * u).exp();
        let psi_v = 1.0 - volterra[i];
        let psi_m = 1.0 - mc_curve.delta[i];
        let slack = Z_LIMIT * (bound * (1.0 - bound) / n as f64).sqrt() + 1.0 / n as f64;
        ok &= psi_v <= bound + 1e-12 && psi_m <= bound + slack;
        worst_v = worst_v.max(psi_v - bound);
        worst_m = worst_m.max(psi_m - bound);
    }
    Check::judged(
        "lundberg-domination",
        ok,
        format!("epsilon={eps}; max(psi_volterra - bound)={worst_v:.3e}; max(psi_mc - bound)={worst_m:.3e}"),
    )
}

fn ruin_at_zero(model: &RiskModel, seed: u64, n: u64) -> Result<Vec<Check>, CliError> {
    let at_zero = model.with_initial_capital(0.0)?;
    let sim = at_zero.path_simulator(at_zero.default_horizon())?;
    let events: Vec<_> =
        mc::collect_draws(n, seed, |rng| sim.simulate(rng)).into_iter().filter_map(|o| o.ruin).collect();
    let psi0 = model.psi0();
    let freq = events.len() as f64 / n as f64;
    let tol = Z_LIMIT * (psi0 * (1.0 - psi0) / n as f64).sqrt() + 1e-3;
    let mut checks = vec![Check::judged(
        "ruin-at-zero",
        (freq - psi0).abs() < tol,
        format!("ruin frequency={freq:.5} psi(0)={psi0:.5} tol={tol:.5} paths={n}"),
    )];

    let k = events.len();
    if k < 100 {
        checks.push(Check::skipped("deficit-law", "skipped: fewer than 100 ruined paths"));
        return Ok(checks);
    }
    let mut deficits: Vec<f64> = events.iter().map(|e| e.deficit).collect();
    deficits.sort_by(f64::total_cmp);
    let mut ks: f64 = 0.0;
    for (i, &x) in deficits.iter().enumerate() {
        let f = model.deficit_cdf(x)?;
        ks = ks.max((f - i as f64 / k as f64).abs()).max(((i + 1) as f64 / k as f64 - f).abs());
    }
    let ks_tol = ROUTE_TOL.max(1.95 / (k as f64).sqrt());
    let mean = mean_estimate(deficits.iter().copied(), k);
    let target = model.mean_deficit();
    let rel = (mean.value / target - 1.0).abs();
    let rel_tol = 0.05f64.max(Z_LIMIT * mean.se / target);
    checks.push(Check::judged(
        "deficit-law",
        ks < ks_tol && rel < rel_tol,
        format!(
            "ks={ks:.5} tol={ks_tol:.5}; mean deficit={:.4} expected={target:.4} rel={rel:.4} tol={rel_tol:.4}; ruined paths={k}",
            mean.value
        ),
    ));
    Ok(checks)
}

fn closed_form(model: &RiskModel) -> Result<Check, CliError> {
    let active: Vec<_> = model.active_components().collect();
    let [line] = active.as_slice() else {
        return Ok(Check::skipped("closed-form", "skipped: closed form needs a single active claim line"));
    };
    let nu = line.claim.mean();
    let c = model.premium_rate();
    let eps_exact = 1.0 / nu - line.rate / c;
    let const_exact = line.rate * nu / c;
    let eps = model.adjustment_coefficient().unwrap_or(f64::NAN);
    let constant = model.cramer_lundberg_constant()?;
    let ok = (eps - eps_exact).abs() < 1e-9 && (constant - const_exact).abs() < 1e-8;
    Ok(Check::judged(
        "closed-form",
        ok,
        format!("epsilon={eps} expected={eps_exact}; C={constant} expected={const_exact}"),
    ))
}

fn path_events(model: &RiskModel, seed: u64, n: u64) -> Result<Check, CliError> {
    let horizon = model.default_horizon();
    let sim = model.path_simulator(horizon)?;
    let outcomes = mc::collect_draws(n, seed, |rng| sim.simulate(rng));
    let events: Vec<_> = outcomes.iter().filter_map(|o| o.ruin).collect();
    let bad = events
        .iter()
        .filter(|e| !(e.deficit > 0.0 && e.surplus_before >= 0.0 && e.time > 0.0 && e.time <= horizon))
        .count();
    Ok(Check::judged(
        "path-events",
        bad == 0,
        format!(
            "{} of {n} paths ruined from u={} by horizon {horizon:.4}; malformed events={bad}",
            events.len(),
            model.initial_capital()
        ),
    ))
}
