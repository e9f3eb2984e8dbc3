use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use nlpme::diagnostics::verify::ops_test_field;
use nlpme::diagnostics::{audit_all, verify_getoor, verify_lemma, verify_ops, InequalityKind, Report};
use nlpme::quadrature::QuadOptions;
use nlpme::Grid;
use serde::Serialize;

use crate::output::{Check, Run};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub target: Target,
}

#[derive(Debug, Subcommand)]
pub enum Target {
    /// Constant fractional Laplacian of the unit-ball power, by quadrature.
    Getoor(GetoorArgs),
    /// Closed-form Riesz potentials of ball powers against quadrature.
    Lemma(LemmaArgs),
    /// Discrete identity between the divergence of the fractional gradient and the fractional Laplacian.
    Ops(OpsArgs),
    /// Stroock-Varopoulos, Nash and interpolation audits on random fields.
    Inequalities(InequalityArgs),
    /// Every suite above with its defaults.
    All(AllArgs),
}

#[derive(Debug, Parser, Serialize)]
pub struct GetoorArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.6,0.9")]
    pub radii: Vec<f64>,
    /// Largest accepted |K·(−Δ)^{α/2}φ − 1|.
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Parser, Serialize)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.6,0.9")]
    pub interior: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
    pub exterior: Vec<f64>,
    /// Relative tolerance inside the ball.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Relative tolerance outside the ball.
    #[arg(long, default_value_t = 1e-2)]
    pub exterior_tol: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Parser, Serialize)]
pub struct OpsArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long = "L", default_value_t = 8.0)]
    pub half_width: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Parser, Serialize)]
pub struct InequalityArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
    pub alpha: Vec<f64>,
    /// q for Stroock-Varopoulos and p for the interpolation inequality.
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
    pub index: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long = "L", default_value_t = 8.0)]
    pub half_width: f64,
    /// Margins must be at least −tol.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Parser, Serialize)]
pub struct AllArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

fn usage(e: nlpme::Error) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

fn csv_of<R: Report>(reports: &[R]) -> String {
    let Some(first) = reports.first() else { return String::new() };
    let mut out = format!("{}\n", first.csv_header());
    for r in reports {
        for row in r.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

fn getoor(a: &GetoorArgs, run: &mut Run) -> Result<()> {
    let reports = a
        .alpha
        .iter()
        .map(|&alpha| verify_getoor(a.d, alpha, &a.radii, QuadOptions::default()).map_err(usage))
        .collect::<Result<Vec<_>>>()?;
    for r in &reports {
        run.check(Check::at_most(&r.name, r.max_error(), a.tol));
    }
    run.write("getoor.csv", csv_of(&reports))?;
    Ok(())
}

fn lemma(a: &LemmaArgs, run: &mut Run) -> Result<()> {
    let opts = QuadOptions::default();
    let inside = verify_lemma(a.gamma, a.beta, a.d, &a.interior, opts).map_err(usage)?;
    let outside = verify_lemma(a.gamma, a.beta, a.d, &a.exterior, opts).map_err(usage)?;
    run.check(Check::at_most(format!("{} interior", inside.name), inside.max_error(), a.tol));
    run.check(Check::at_most(format!("{} exterior", outside.name), outside.max_error(), a.exterior_tol));
    run.write("lemma.csv", csv_of(&[inside, outside]))?;
    Ok(())
}

fn ops(a: &OpsArgs, run: &mut Run) -> Result<()> {
    let grid = Grid::new(a.d, a.half_width, a.n).map_err(usage)?;
    let f = ops_test_field(grid);
    let mut csv = String::from("d,n,alpha,residual\n");
    for &alpha in &a.alpha {
        let residual = verify_ops(&f, alpha).map_err(usage)?;
        csv.push_str(&format!("{},{},{alpha},{residual:e}\n", a.d, a.n));
        run.check(Check::at_most(format!("ops alpha={alpha}"), residual, a.tol));
    }
    run.write("ops.csv", csv)?;
    Ok(())
}

fn inequalities(a: &InequalityArgs, run: &mut Run) -> Result<()> {
    let grid = Grid::new(1, a.half_width, a.n).map_err(usage)?;
    let mut reports = Vec::new();
    let mut summary = String::from("name,alpha,index,trials,worst_margin,empirical_constant\n");
    for &alpha in &a.alpha {
        for r in audit_all(grid, alpha, a.m, &a.index, a.trials, a.seed).map_err(usage)? {
            let index = r.index.map_or_else(String::new, |v| v.to_string());
            let label = match r.index {
                Some(i) => format!("{} alpha={alpha} index={i}", r.kind.name()),
                None => format!("{} alpha={alpha}", r.kind.name()),
            };
            run.check(Check::at_least(&label, r.worst_margin, -a.tol));
            if r.kind == InequalityKind::StroockVaropoulos && r.index == Some(2.0) {
                // q = 2 is Parseval: both sides coincide
                let spread = r.margins.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
                run.check(Check::at_most(format!("{label} parseval"), spread, 1e-11));
            }
            summary.push_str(&format!(
                "{},{alpha},{index},{},{:e},{}\n",
                r.kind.name(),
                r.trials,
                r.worst_margin,
                r.empirical_constant.map_or_else(String::new, |c| format!("{c:e}"))
            ));
            reports.push(r);
        }
    }
    run.write("inequalities.csv", summary)?;
    run.write("inequality_margins.csv", csv_of(&reports))?;
    Ok(())
}

pub fn run(args: VerifyArgs) -> Result<bool> {
    match args.target {
        Target::Getoor(a) => {
            let mut run = Run::new("verify getoor", &a, &a.out_dir)?;
            getoor(&a, &mut run)?;
            run.finish()
        }
        Target::Lemma(a) => {
            let mut run = Run::new("verify lemma", &a, &a.out_dir)?;
            lemma(&a, &mut run)?;
            run.finish()
        }
        Target::Ops(a) => {
            let mut run = Run::new("verify ops", &a, &a.out_dir)?;
            ops(&a, &mut run)?;
            run.finish()
        }
        Target::Inequalities(a) => {
            let mut run = Run::new("verify inequalities", &a, &a.out_dir)?;
            inequalities(&a, &mut run)?;
            run.finish()
        }
        Target::All(a) => {
            let mut run = Run::new("verify all", &a, &a.out_dir)?;
            getoor(&GetoorArgs::parse_from(["getoor"]), &mut run)?;
            lemma(&LemmaArgs::parse_from(["lemma"]), &mut run)?;
            ops(&OpsArgs::parse_from(["ops"]), &mut run)?;
            let mut ineq = InequalityArgs::parse_from(["inequalities"]);
            ineq.trials = a.trials;
            ineq.seed = a.seed;
            inequalities(&ineq, &mut run)?;
            run.finish()
        }
    }
}
