//! Execution of a parsed `RunConfig`.

use super::config::{Command, RunConfig, Sectors};
use super::csv::{fmt_f64, read_roots_csv, write_spectrum, write_table};
use super::json::{complex, number, report, to_string};
use crate::bethe::{roots_from_vector, solve_bethe, BetheConfig};
use crate::ed::{build_sector_block, eigendecompose_sector, full_spectrum, spectral_gap, Vectors};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::semiclassics::{density_grid, predict_sector_eigenvalue, quantize_lambda, spectral_edges, Region};
use crate::steady::{p0_eigenpoly, p0_eigenvalue, steady_state, t1_t2};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Writes to the file, or to stdout without a path.
fn emit(out: &Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            w.flush().map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<()> {
    emit(out, |w| w.write_all(to_string(v).as_bytes()).map_err(|e| Error::Io(e.to_string())))
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::I => "I",
        Region::II => "II",
        Region::Boundary => "boundary",
        Region::Outside => "outside",
    }
}

pub fn bethe_value(c: &BetheConfig) -> Value {
    json!({
        "q": c.q,
        "lambda": complex(c.lambda),
        "residual": c.residual,
        "region": region_name(c.region),
        "excitation": c.excitation,
        "iterations": c.history.len() - 1,
        "roots": c.roots.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
    })
}

pub fn execute(cfg: &RunConfig) -> Result<()> {
    let m = &cfg.params;
    match &cfg.command {
        Command::Spectrum { sectors, out } => {
            let qs = match sectors {
                Sectors::All => None,
                Sectors::List(v) => Some(v.as_slice()),
            };
            let spec = full_spectrum(m, qs, Vectors::None)?;
            emit(out, |w| write_spectrum(&spec, w))
        }
        Command::Steady { out } => {
            let ss = steady_state(m);
            let v = json!({ "z_p": ss.z_p, "mean_sz": ss.mean_sz, "entropy": ss.entropy, "weights": ss.weights });
            emit_json(out, &report("steady", m, vec![v]))
        }
        Command::Gap { out } => {
            let spec = full_spectrum(m, None, Vectors::None)?;
            let gap = spectral_gap(&spec)?;
            let mut v = json!({ "gap": gap, "gap_over_s": gap / m.s() });
            if m.p == 0.0 {
                let t = t1_t2(m)?;
                v["t1"] = number(t.t1);
                v["t2"] = number(t.t2);
            }
            emit_json(out, &report("gap", m, vec![v]))
        }
        Command::Bethe { q, mode, seed_file, tol, max_iter, out } => {
            let seeds = bethe_seeds(m, *q, *mode, seed_file.as_deref())?;
            let data: Vec<Value> = seeds
                .iter()
                .map(|seed| match solve_bethe(seed, *q, m, *tol, *max_iter) {
                    Ok(c) => bethe_value(&c),
                    Err(e) => json!({ "q": q, "error": e.to_string() }),
                })
                .collect();
            if data.iter().all(|d| d.get("error").is_some()) {
                return Err(Error::NoConvergence(format!("no Bethe solution converged in sector {q}")));
            }
            emit_json(out, &report("bethe", m, data))
        }
        Command::Edges { x_grid, out } => {
            let mut rows = Vec::new();
            for &x in x_grid {
                let e = spectral_edges(x, m)?;
                rows.push(vec![
                    fmt_f64(x),
                    fmt_f64(e.top),
                    e.separator.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(e.bottom),
                ]);
            }
            emit(out, |w| write_table(&["x", "top", "separator", "bottom"], &rows, w))
        }
        Command::Quantize { q, levels, out } => {
            let x = *q as f64 / m.two_s as f64;
            let rows = match levels {
                Some((a, b, region)) => (*a..=*b)
                    .map(|n| {
                        let l = quantize_lambda(n, x, m, *region);
                        vec![n.to_string(), l.map(fmt_f64).unwrap_or_default()]
                    })
                    .collect(),
                None => {
                    let ed = super::figures::sector_levels(m, *q as i32)?;
                    ed.iter()
                        .enumerate()
                        .map(|(k, l)| {
                            let pred = predict_sector_eigenvalue(k, *q, m).ok().flatten();
                            vec![k.to_string(), pred.map(fmt_f64).unwrap_or_default(), fmt_f64(*l)]
                        })
                        .collect::<Vec<_>>()
                }
            };
            let header: &[&str] = if levels.is_some() { &["n", "lambda"] } else { &["k", "predicted", "ed"] };
            emit(out, |w| write_table(header, &rows, w))
        }
        Command::Density { x_grid, lambda_grid, out } => {
            let g = density_grid(m, x_grid, lambda_grid)?;
            let mut rows = Vec::new();
            for (i, x) in g.x_axis.iter().enumerate() {
                for (j, l) in g.lambda_axis.iter().enumerate() {
                    rows.push(vec![fmt_f64(*x), fmt_f64(*l), fmt_f64(g.density[i][j]), region_name(g.region_label[i][j]).into()]);
                }
            }
            emit(out, |w| write_table(&["x", "lambda", "density", "region"], &rows, w))
        }
        Command::P0 { q, n, out } => {
            let top = m.two_s - q.unsigned_abs().min(m.two_s);
            let mut data = Vec::new();
            for k in 0..=top {
                let l = p0_eigenvalue(k, *q, m)?;
                let mut v = json!({ "n": k, "lambda": complex(l) });
                if *n == Some(k) && *q == 0 {
                    let poly = p0_eigenpoly(k, m)?;
                    v["poly"] = poly.coeffs.iter().map(|c| c.re).collect::<Vec<_>>().into();
                }
                data.push(v);
            }
            let t = t1_t2(m)?;
            let mut r = report("p0", m, data);
            r["t1"] = number(t.t1);
            r["t2"] = number(t.t2);
            emit_json(out, &r)
        }
        Command::Figures { out_dir } => {
            let paths = super::figures::write_figures(m, out_dir)?;
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn bethe_seeds(m: &ModelParams, q: i32, mode: Option<usize>, file: Option<&Path>) -> Result<Vec<Vec<crate::C64>>> {
    if let Some(path) = file {
        return Ok(vec![read_roots_csv(path)?]);
    }
    let block = build_sector_block(m, q)?;
    let pairs = eigendecompose_sector(&block, Vectors::Right)?;
    if let Some(k) = mode {
        if k >= pairs.len() {
            return Err(Error::Index(format!("mode {k} exceeds sector size {}", pairs.len())));
        }
    }
    pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| mode.is_none_or(|want| want == *k))
        .map(|(_, p)| roots_from_vector(p.right.as_deref().unwrap_or_default(), q, m.two_s))
        .collect()
}

/// Rayon pool size from `LIOUV_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("LIOUV_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("LIOUV_THREADS must be a positive integer, got `{v}`")))?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
