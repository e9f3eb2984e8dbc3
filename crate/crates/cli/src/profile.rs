use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use nlpme::profiles::{holder_exponent, phi_value, profile_mass, selfsim_value};
use nlpme::{BarenblattSpec, Grid, MediumParams};
use serde::Serialize;

use crate::output::Run;
use crate::UsageError;

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("size").required(true).args(["radius", "mass"]))]
pub struct ProfileArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Support radius of the profile.
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Total mass; fixes the radius instead of --R.
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub n: usize,
    /// Half-width of the sampling box.
    #[arg(long = "L")]
    pub half_width: f64,
    /// Sample u(t, ·) instead of the profile.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: ProfileArgs) -> Result<bool> {
    let bad = |e: nlpme::Error| UsageError(e.to_string());
    let params = MediumParams::new(args.d, args.m, args.alpha).map_err(bad)?;
    let spec = match (args.radius, args.mass) {
        (Some(r), _) => BarenblattSpec::new(params, r),
        (None, Some(m)) => BarenblattSpec::with_mass(params, m),
        (None, None) => unreachable!("clap enforces one of --R and --mass"),
    }
    .map_err(bad)?;
    let grid = Grid::new(args.d, args.half_width, args.n).map_err(bad)?;
    if let Some(t) = args.t {
        if !(t > 0.0 && t.is_finite()) {
            return Err(UsageError(format!("--t must be positive, got {t}")).into());
        }
    }

    // the self-similar solution carries the profile's mass at every time
    let mass = profile_mass(&spec)?;
    let support = args.t.map_or(spec.radius, |t| spec.support_radius_at(t));
    let value = |x: &[f64]| match args.t {
        Some(t) => selfsim_value(&spec, t, x).expect("time checked above"),
        None => phi_value(&spec, x),
    };
    let mut csv = String::from(if args.d == 1 { "x,value\n" } else { "x,y,value\n" });
    for k in 0..grid.len() {
        let p = grid.point(k);
        let x = &p[..args.d];
        let coords: Vec<String> = x.iter().map(|c| format!("{c:e}")).collect();
        csv.push_str(&format!("{},{:e}\n", coords.join(","), value(x)));
    }

    println!("mass = {mass:e}");
    println!("support_radius = {support:e}");
    println!("holder_exponent = {}", holder_exponent(&params));
    if support >= args.half_width {
        eprintln!("warning: support radius {support} reaches the box edge {}", args.half_width);
    }

    let dir = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let stem = args.out.file_stem().and_then(|s| s.to_str()).unwrap_or("profile").to_string();
    let file = args.out.file_name().and_then(|s| s.to_str()).unwrap_or("profile.csv").to_string();
    let mut run = Run::with_manifest("profile", &args, &dir, &format!("{stem}.manifest.json"))?;
    run.write(&file, csv)?;
    run.finish()
}
