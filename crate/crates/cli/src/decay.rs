use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nlpme::diagnostics::decay::gn_exponents;
use nlpme::diagnostics::inequalities::{audit_fields, empirical_nash_constant};
use nlpme::diagnostics::norms::NormIndex;
use nlpme::diagnostics::{fit_decay, fit_decay_with_constant, DecayReport, Report};
use nlpme::solver;
use nlpme::MediumParams;
use serde::Serialize;

use crate::config::RunConfig;
use crate::evolve::{load, mass_check};
use crate::output::{series_csv, Check, Run};
use crate::UsageError;

/// Log-spaced snapshot times added inside the fit window.
const WINDOW_SNAPSHOTS: usize = 41;
/// Allowed |slope| when the predicted slope is zero (the L¹ norm).
const FLAT_SLOPE_TOL: f64 = 0.01;

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Norm indices; `inf` selects the sup norm.
    #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
    pub p_list: Vec<NormIndex>,
    /// `lo,hi` in absolute time.
    #[arg(long, value_delimiter = ',', default_value = "2,16")]
    pub fit_window: Vec<f64>,
    /// Nash constant for the prefactor; estimated from random fields when absent.
    #[arg(long)]
    pub c_n: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Relative tolerance on each fitted slope.
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct Recorded<'a> {
    run: &'a RunConfig,
    p_list: Vec<String>,
    fit_window: (f64, f64),
    c_n: Option<f64>,
    seed: u64,
    trials: usize,
    tol: f64,
}

/// Nash constant over the audit suite and the powers `u^{r/2}` used for each `p`.
fn estimate_nash(cfg: &RunConfig, params: &MediumParams, ps: &[NormIndex], args: &DecayArgs) -> nlpme::Result<f64> {
    let grid = nlpme::Grid::new(cfg.d, cfg.half_width, cfg.n)?;
    let fields = audit_fields(grid, args.trials, args.seed)?;
    let mut suite = fields.clone();
    for p in ps {
        if let NormIndex::Finite(q) = *p {
            let Ok(ex) = gn_exponents(params, q) else { continue };
            for u in &fields {
                suite.push(u.map(|x| x.powf(ex.r / 2.0))?);
            }
        }
    }
    empirical_nash_constant(&suite, params.alpha)
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let ratio = (hi / lo).ln();
    (0..count).map(move |i| {
        if i + 1 == count {
            hi
        } else {
            lo * (ratio * i as f64 / (count - 1) as f64).exp()
        }
    })
}

fn decay_csv(reports: &[(DecayReport, bool)]) -> String {
    let mut out = String::from("p,fitted_slope,theoretical_slope,relative_deviation,c_n,c_theory,passed\n");
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:e}"));
    for (r, passed) in reports {
        let p = NormIndex::new(r.p).map_or_else(|_| r.p.to_string(), |p| p.to_string());
        out.push_str(&format!(
            "{p},{:e},{:e},{:e},{},{},{passed}\n",
            r.fitted_slope,
            r.theoretical_slope + 0.0,
            r.relative_deviation(),
            opt(r.c_n),
            opt(r.c_theory)
        ));
    }
    out
}

pub fn run(args: DecayArgs) -> Result<bool> {
    let [lo, hi] = args.fit_window[..] else {
        return Err(UsageError(format!("--fit-window takes lo,hi, got {:?}", args.fit_window)).into());
    };
    let mut prepared = load(&args.config)?;
    let cfg = prepared.config.clone();
    if !(lo >= cfg.t0 && hi <= cfg.t_end && lo < hi) {
        return Err(UsageError(format!(
            "fit window [{lo}, {hi}] must lie inside [t0, t_end] = [{}, {}]",
            cfg.t0, cfg.t_end
        ))
        .into());
    }
    let mut times = prepared.cauchy.snapshot_times.clone();
    times.extend(log_spaced(lo, hi, WINDOW_SNAPSHOTS));
    times.sort_by(f64::total_cmp);
    times.dedup();
    prepared.cauchy.snapshot_times = times;

    let recorded = Recorded {
        run: &cfg,
        p_list: args.p_list.iter().map(ToString::to_string).collect(),
        fit_window: (lo, hi),
        c_n: args.c_n,
        seed: args.seed,
        trials: args.trials,
        tol: args.tol,
    };
    let mut run = Run::new("decay", &recorded, &args.out_dir)?;
    let params = prepared.cauchy.params;

    let c_n = match args.c_n {
        Some(c) => Some(c),
        None => match estimate_nash(&cfg, &params, &args.p_list, &args) {
            Ok(c) => {
                println!("c_n = {c:e} (empirical, {} trials)", args.trials);
                Some(c)
            }
            Err(e) => {
                eprintln!("warning: skipping the decay prefactor: {e}");
                None
            }
        },
    };

    let traj = solver::run(&prepared.cauchy)?;
    run.write("series.csv", series_csv(&traj.series))?;
    run.check(mass_check(&traj));

    let mut reports = Vec::new();
    for &p in &args.p_list {
        let report = match c_n {
            Some(c) => fit_decay_with_constant(&traj, p, (lo, hi), c)?,
            None => fit_decay(&traj, p, (lo, hi))?,
        };
        let check = if report.theoretical_slope == 0.0 {
            Check::at_most(format!("slope p={p}"), report.fitted_slope.abs(), FLAT_SLOPE_TOL)
        } else {
            Check::at_most(format!("slope p={p}"), report.relative_deviation(), args.tol)
        };
        println!(
            "p = {p}: fitted {:.4}, predicted {:.4}",
            report.fitted_slope,
            report.theoretical_slope + 0.0
        );
        let passed = check.passed;
        run.check(check);
        reports.push((report, passed));
    }

    run.write("decay.csv", decay_csv(&reports))?;
    let mut points = String::new();
    for (i, (r, _)) in reports.iter().enumerate() {
        if i == 0 {
            points = r.csv();
        } else {
            for row in r.csv_rows() {
                points.push_str(&row);
                points.push('\n');
            }
        }
    }
    run.write("decay_points.csv", points)?;
    run.finish()
}
