use std::io::Write;

use shockrisk::mc;

use super::{csv_writer, default_grid, finish_csv, require_net_profit};
use crate::config::load;
use crate::manifest::RunManifest;
use crate::{io_error, CliError, SimulateMArgs, SimulatePathsArgs};

pub fn simulate_m(args: &SimulateMArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(&args.config)?;
    let model = &loaded.model;
    require_net_profit(model)?;
    let (default_max, _) = default_grid(model);
    let grid_max = args.grid_max.unwrap_or(default_max);
    let grid_step = args.grid_step.unwrap_or(grid_max / 1000.0);
    let curve = model.survival_curve_mc(grid_max, grid_step, args.samples, args.seed)?;
    let density = curve.density.as_ref().expect("Monte Carlo curves carry a density");

    let mut w = csv_writer(&args.out)?;
    w.write_record(["u", "delta_hat", "density_hat"]).map_err(io_error)?;
    for ((u, d), f) in curve.u.iter().zip(&curve.delta).zip(density) {
        w.write_record([u.to_string(), d.to_string(), f.to_string()]).map_err(io_error)?;
    }
    finish_csv(w)?;
    let mut manifest = RunManifest::new("simulate-m", &loaded, &args.out);
    manifest.seed = Some(args.seed);
    manifest.samples = Some(args.samples);
    manifest.grid_max = Some(grid_max);
    manifest.grid_step = Some(grid_step);
    manifest.write_beside(&args.out)?;

    writeln!(
        out,
        "samples={} seed={} grid_max={grid_max} grid_step={grid_step} points={} delta_hat(0)={} out={}",
        args.samples,
        args.seed,
        curve.len(),
        curve.delta[0],
        args.out.display()
    )
    .map_err(io_error)
}

pub fn simulate_paths(args: &SimulatePathsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(&args.config)?;
    let model = &loaded.model;
    if args.paths == 0 {
        return Err(CliError::Config("path count must be positive".into()));
    }
    let sim = model.path_simulator(args.horizon)?;
    let outcomes = mc::collect_draws(args.paths, args.seed, |rng| sim.simulate(rng));

    let mut w = csv_writer(&args.out)?;
    w.write_record(["ruined", "ruin_time", "deficit", "surplus_before"]).map_err(io_error)?;
    let (mut ruined, mut time, mut deficit, mut before) = (0u64, 0.0, 0.0, 0.0);
    for o in &outcomes {
        match o.ruin {
            Some(e) => {
                ruined += 1;
                time += e.time;
                deficit += e.deficit;
                before += e.surplus_before;
                w.write_record([
                    "1".to_string(),
                    e.time.to_string(),
                    e.deficit.to_string(),
                    e.surplus_before.to_string(),
                ])
            }
            None => w.write_record(["0", "", "", ""]),
        }
        .map_err(io_error)?;
    }
    finish_csv(w)?;
    let mut manifest = RunManifest::new("simulate-paths", &loaded, &args.out);
    manifest.seed = Some(args.seed);
    manifest.paths = Some(args.paths);
    manifest.horizon = Some(args.horizon);
    manifest.write_beside(&args.out)?;

    let k = ruined.max(1) as f64;
    let cond = |s: f64| if ruined == 0 { "none".to_string() } else { (s / k).to_string() };
    writeln!(
        out,
        "paths={} ruined={ruined} ruin_frequency={} mean_ruin_time={} mean_deficit={} mean_surplus_before={}",
        args.paths,
        ruined as f64 / args.paths as f64,
        cond(time),
        cond(deficit),
        cond(before)
    )
    .map_err(io_error)
}
