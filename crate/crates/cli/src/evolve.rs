use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Args;
use nlpme::diagnostics::relative_l1_error;
use nlpme::solver::{self, Trajectory};

use crate::config::{Prepared, RunConfig};
use crate::output::{series_csv, write_snapshot, Check, Run};

/// Mass conservation floor on top of whatever the positivity clip removed.
pub const MASS_DRIFT_TOL: f64 = 1e-10;

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Largest accepted relative L¹ error at t_end when the data are self-similar.
    #[arg(long, default_value_t = 2e-2)]
    pub l1_tol: f64,
}

/// Loads `path`, resolving relative initial-data files against its directory.
pub fn load(path: &Path) -> Result<Prepared> {
    let base = path.parent().unwrap_or(Path::new("."));
    RunConfig::load(path)?.prepare(base)
}

/// Mass drift check allowing for the mass the clip removed.
pub fn mass_check(traj: &Trajectory) -> Check {
    let mass = traj.series.first().map_or(0.0, |r| r.mass);
    let allowance = if mass > 0.0 { traj.clipped_mass / mass } else { 0.0 };
    Check::at_most("mass_drift", traj.mass_drift(), MASS_DRIFT_TOL + allowance)
}

pub fn run(args: EvolveArgs) -> Result<bool> {
    let prepared = load(&args.config)?;
    let mut run = Run::new("evolve", &prepared.config, &args.out_dir)?;
    let traj = solver::run(&prepared.cauchy)?;

    run.write("series.csv", series_csv(&traj.series))?;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        write_snapshot(&mut run, i, snap)?;
    }

    let last = traj.series.last().expect("series holds the initial row");
    println!("steps = {}", traj.steps);
    println!("t = {:e}", last.t);
    println!("mass = {:e}", last.mass);
    println!("support_radius = {:e}", last.support_radius);
    println!("clipped_mass = {:e}", traj.clipped_mass);
    run.check(mass_check(&traj));
    if let (Some(spec), Some(snap)) = (&prepared.exact, traj.final_snapshot()) {
        let err = relative_l1_error(&snap.field, spec, snap.t)?;
        run.check(Check::at_most("relative_l1_error", err, args.l1_tol));
    }
    run.finish()
}
