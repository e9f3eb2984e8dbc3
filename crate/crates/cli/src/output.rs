//! Artifact writers and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use nlpme::solver::{SeriesRow, Snapshot};
use nlpme::{Field, Grid};
use serde::{Deserialize, Serialize};

/// One pass/fail check recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Upper bound when `bound == "max"`, lower bound when `"min"`.
    pub limit: f64,
    pub bound: &'static str,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, bound: "max", passed: value <= limit }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, bound: "min", passed: value >= limit }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub artifacts: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Collects written files and checks, then writes `manifest.json` last.
pub struct Run {
    command: String,
    config: serde_json::Value,
    dir: PathBuf,
    manifest_name: String,
    artifacts: Vec<PathBuf>,
    checks: Vec<Check>,
    started: Instant,
}

impl Run {
    pub fn new(command: &str, config: &impl Serialize, dir: &Path) -> Result<Self> {
        Self::with_manifest(command, config, dir, "manifest.json")
    }

    pub fn with_manifest(command: &str, config: &impl Serialize, dir: &Path, manifest: &str) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            dir: dir.to_path_buf(),
            manifest_name: manifest.to_string(),
            artifacts: Vec::new(),
            checks: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.artifacts.push(path.clone());
        Ok(path)
    }

    pub fn check(&mut self, check: Check) {
        let mark = if check.passed { "ok  " } else { "FAIL" };
        println!("{mark} {} = {:e} ({} {:e})", check.name, check.value, check.bound, check.limit);
        self.checks.push(check);
    }

    /// Writes the manifest and returns whether every check passed.
    pub fn finish(self) -> Result<bool> {
        let passed = self.checks.iter().all(|c| c.passed);
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            artifacts: self.artifacts,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            checks: self.checks,
            passed,
        };
        let path = self.dir.join(&self.manifest_name);
        fs::write(&path, serde_json::to_string_pretty(&manifest)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(passed)
    }
}

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut out = format!("{}\n", SeriesRow::CSV_HEADER);
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Sidecar of a raw 2-D snapshot.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Sidecar {
    pub n: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub t: f64,
}

/// `x,u` rows for d = 1.
pub fn field_csv(field: &Field) -> String {
    let g = field.grid();
    let mut out = String::from("x,u\n");
    for (i, v) in field.values().iter().enumerate() {
        out.push_str(&format!("{:e},{v:e}\n", g.coord(i)));
    }
    out
}

/// Row-major little-endian `f64`.
pub fn field_raw(field: &Field) -> Vec<u8> {
    field.values().iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Writes one snapshot: CSV in 1-D, raw plus JSON sidecar in 2-D.
pub fn write_snapshot(run: &mut Run, index: usize, snap: &Snapshot) -> Result<()> {
    let g = snap.field.grid();
    if g.d == 1 {
        run.write(&format!("snapshot_{index:04}.csv"), field_csv(&snap.field))?;
    } else {
        run.write(&format!("snapshot_{index:04}.bin"), field_raw(&snap.field))?;
        let side = Sidecar { n: g.n, half_width: g.half_width, t: snap.t };
        run.write(&format!("snapshot_{index:04}.json"), serde_json::to_string_pretty(&side)?)?;
    }
    Ok(())
}

/// Reads a snapshot written by [`write_snapshot`] onto `grid`.
pub fn read_snapshot(path: &Path, grid: Grid) -> Result<Field> {
    let values = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_csv_field(path, grid)?,
        Some("bin") => read_raw_field(path, grid)?,
        _ => bail!("{}: initial data must be a .csv (1-D) or .bin (2-D) snapshot", path.display()),
    };
    Ok(Field::new(grid, values)?)
}

fn read_csv_field(path: &Path, grid: Grid) -> Result<Vec<f64>> {
    if grid.d != 1 {
        bail!("{}: CSV snapshots are one-dimensional", path.display());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::with_capacity(grid.n);
    for (line_no, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(x), Some(u), None) = (cols.next(), cols.next(), cols.next()) else {
            bail!("{}:{}: expected two columns", path.display(), line_no + 1);
        };
        let x: f64 = x.trim().parse().with_context(|| format!("{}:{}", path.display(), line_no + 1))?;
        let u: f64 = u.trim().parse().with_context(|| format!("{}:{}", path.display(), line_no + 1))?;
        let expected = grid.coord(values.len());
        if (x - expected).abs() > 1e-9 * grid.half_width {
            bail!("{}:{}: x = {x} does not match the grid point {expected}", path.display(), line_no + 1);
        }
        values.push(u);
    }
    if values.len() != grid.n {
        bail!("{}: {} samples, the grid has {}", path.display(), values.len(), grid.n);
    }
    Ok(values)
}

fn read_raw_field(path: &Path, grid: Grid) -> Result<Vec<f64>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.len() != grid.len() * 8 {
        bail!("{}: {} bytes, expected {}", path.display(), bytes.len(), grid.len() * 8);
    }
    let sidecar = path.with_extension("json");
    if sidecar.exists() {
        let side: Sidecar = serde_json::from_str(&fs::read_to_string(&sidecar)?)
            .with_context(|| format!("parsing {}", sidecar.display()))?;
        if side.n != grid.n || side.half_width != grid.half_width {
            bail!("{}: sidecar grid (n {}, L {}) differs from the config", sidecar.display(), side.n, side.half_width);
        }
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect())
}
