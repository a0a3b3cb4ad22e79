//! Command line and configuration file.
//!
//! Values come from flags first, then from the TOML file given with
//! `--config`, then from the defaults (h = 1, Γ = 1.2, Γ₀ = 0.2, p = 0.9, s = 17).

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::semiclassics::Region;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "liouv", version, about = "Liouvillian spectra of a collective spin coupled to polarized baths")]
pub struct Cli {
    #[command(flatten)]
    pub model: ModelArgs,
    /// TOML file with parameters and grids.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Field strength, `H = -h S_z`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Spin-flip rate of the polarized bath.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Dephasing rate.
    #[arg(long, global = true)]
    pub gamma0: Option<f64>,
    /// Bath polarization in [-1, 1].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Spin length; half-integers allowed.
    #[arg(long, global = true)]
    pub s: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Exact spectrum of the requested sectors as CSV.
    Spectrum {
        /// `all` or a comma-separated list of sectors.
        #[arg(long, default_value = "all", allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Steady-state populations, magnetization and entropy (JSON).
    Steady {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral gap, and relaxation times at p = 0 (JSON).
    Gap {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the Bethe equations of sector `q` (JSON).
    Bethe {
        #[arg(long, allow_hyphen_values = true)]
        q: i32,
        /// Only this mode (descending real part) when seeding from ED.
        #[arg(long)]
        mode: Option<usize>,
        /// CSV with columns `re,im`, one seed root per row.
        #[arg(long)]
        seed_file: Option<PathBuf>,
        #[arg(long, default_value_t = crate::bethe::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = crate::bethe::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading-order spectral edges on an `x` grid (CSV).
    Edges {
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantized eigenvalues of sector `q` against ED (CSV).
    Quantize {
        #[arg(long)]
        q: u32,
        /// `a:b` inclusive range of level numbers; requires `--region`.
        #[arg(long)]
        n_range: Option<String>,
        /// `I` or `II`.
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue density on an `x` by `λ` grid (CSV).
    Density {
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form spectrum at p = 0 (JSON).
    P0 {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i32,
        /// Include the mode polynomial of level `n` (q = 0 only).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write fig1.svg to fig4.svg.
    Figures {
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
    },
}

/// Linearly spaced axis.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    /// `start:stop:points`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Usage(format!("grid `{text}` is not start:stop:points")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Usage(format!("grid `{text}`: bad number `{s}`")));
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Usage(format!("grid `{text}`: bad point count `{}`", parts[2])))?;
        GridSpec { start: num(parts[0])?, stop: num(parts[1])?, points }.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.points < 2 || !(self.stop > self.start) {
            return Err(Error::Usage(format!(
                "grid needs at least 2 points and start < stop, got {}:{}:{}",
                self.start, self.stop, self.points
            )));
        }
        Ok(self)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| if i == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / n as f64 })
            .collect()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub h: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma0: Option<f64>,
    pub p: Option<f64>,
    pub s: Option<f64>,
    pub x_grid: Option<GridSpec>,
    pub lambda_grid: Option<GridSpec>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sectors {
    All,
    List(Vec<i32>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Spectrum { sectors: Sectors, out: Option<PathBuf> },
    Steady { out: Option<PathBuf> },
    Gap { out: Option<PathBuf> },
    Bethe { q: i32, mode: Option<usize>, seed_file: Option<PathBuf>, tol: f64, max_iter: usize, out: Option<PathBuf> },
    Edges { x_grid: Vec<f64>, out: Option<PathBuf> },
    Quantize { q: u32, levels: Option<(u32, u32, Region)>, out: Option<PathBuf> },
    Density { x_grid: Vec<f64>, lambda_grid: Vec<f64>, out: Option<PathBuf> },
    P0 { q: i32, n: Option<u32>, out: Option<PathBuf> },
    Figures { out_dir: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Steady { .. } => "steady",
            Command::Gap { .. } => "gap",
            Command::Bethe { .. } => "bethe",
            Command::Edges { .. } => "edges",
            Command::Quantize { .. } => "quantize",
            Command::Density { .. } => "density",
            Command::P0 { .. } => "p0",
            Command::Figures { .. } => "figures",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub command: Command,
}

const DEFAULT_X_GRID: &str = "0:1:64";
const DEFAULT_LAMBDA_GRID: &str = "-1.4:0:256";

fn two_s_from(s: f64) -> Result<u32> {
    let t = 2.0 * s;
    if !(t >= 1.0) || (t - t.round()).abs() > 1e-9 || t > u32::MAX as f64 {
        return Err(Error::Usage(format!("s must be a positive multiple of 1/2, got {s}")));
    }
    Ok(t.round() as u32)
}

/// Parse `argv` (program name first).
pub fn parse_cli<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    resolve(cli)
}

pub fn resolve(cli: Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let d = ModelParams::default();
    let m = &cli.model;
    let s = m.s.or(file.s);
    let two_s = match s {
        Some(s) => two_s_from(s)?,
        None => d.two_s,
    };
    let params = ModelParams::new(
        m.h.or(file.h).unwrap_or(d.h),
        m.gamma.or(file.gamma).unwrap_or(d.gamma),
        m.gamma0.or(file.gamma0).unwrap_or(d.gamma0),
        m.p.or(file.p).unwrap_or(d.p),
        two_s,
    )
    .map_err(|e| Error::Usage(e.to_string()))?;
    let grid = |flag: &Option<String>, from_file: &Option<GridSpec>, default: &str| -> Result<Vec<f64>> {
        let spec = match (flag, from_file) {
            (Some(t), _) => GridSpec::parse(t)?,
            (None, Some(g)) => g.clone().validated()?,
            (None, None) => GridSpec::parse(default)?,
        };
        Ok(spec.values())
    };
    let command = match cli.command {
        CommandArgs::Spectrum { q, out } => Command::Spectrum { sectors: parse_sectors(&q, two_s)?, out },
        CommandArgs::Steady { out } => Command::Steady { out },
        CommandArgs::Gap { out } => Command::Gap { out },
        CommandArgs::Bethe { q, mode, seed_file, tol, max_iter, out } => {
            if q.unsigned_abs() > two_s {
                return Err(Error::Usage(format!("q = {q} exceeds 2s = {two_s}")));
            }
            if !(tol > 0.0) {
                return Err(Error::Usage(format!("tol must be positive, got {tol}")));
            }
            Command::Bethe { q, mode, seed_file, tol, max_iter, out }
        }
        CommandArgs::Edges { x_grid, out } => Command::Edges { x_grid: grid(&x_grid, &file.x_grid, DEFAULT_X_GRID)?, out },
        CommandArgs::Quantize { q, n_range, region, out } => {
            if q > two_s {
                return Err(Error::Usage(format!("q = {q} exceeds 2s = {two_s}")));
            }
            let levels = match (n_range, region) {
                (None, None) => None,
                (Some(r), Some(g)) => {
                    let (a, b) = parse_range(&r)?;
                    Some((a, b, parse_region(&g)?))
                }
                _ => return Err(Error::Usage("--n-range and --region go together".into())),
            };
            Command::Quantize { q, levels, out }
        }
        CommandArgs::Density { x_grid, lambda_grid, out } => Command::Density {
            x_grid: grid(&x_grid, &file.x_grid, DEFAULT_X_GRID)?,
            lambda_grid: grid(&lambda_grid, &file.lambda_grid, DEFAULT_LAMBDA_GRID)?,
            out,
        },
        CommandArgs::P0 { q, n, out } => Command::P0 { q, n, out },
        CommandArgs::Figures { out_dir } => Command::Figures { out_dir },
    };
    Ok(RunConfig { params, command })
}

fn parse_sectors(text: &str, two_s: u32) -> Result<Sectors> {
    if text.trim() == "all" {
        return Ok(Sectors::All);
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let q: i32 = part
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad sector `{part}` in --q")))?;
        if q.unsigned_abs() > two_s {
            return Err(Error::Usage(format!("q = {q} exceeds 2s = {two_s}")));
        }
        out.push(q);
    }
    Ok(Sectors::List(out))
}

fn parse_range(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::Usage(format!("--n-range `{text}` is not a:b"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_region(text: &str) -> Result<Region> {
    match text {
        "I" | "i" | "1" => Ok(Region::I),
        "II" | "ii" | "2" => Ok(Region::II),
        _ => Err(Error::Usage(format!("--region must be I or II, got `{text}`"))),
    }
}
