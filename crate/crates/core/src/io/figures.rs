//! The four figures: spectrum with edge curves, quantization against ED,
//! the density in the complex plane, and steady-state observables.

use super::svg::{Layer, Panel, Plot};
use crate::ed::{full_spectrum, build_sector_block, eigendecompose_sector, Vectors};
use crate::error::Result;
use crate::model::{ModelParams, IM_SIGN};
use crate::semiclassics::{density, fraction_above, spectral_edges, SpectralEdges};
use crate::steady::{ed_steady_weights, entropy, mean_sz, observables_from_weights};
use crate::C64;
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Sector drawn in red in the spectrum plot.
pub const HIGHLIGHT_Q: i32 = 6;
pub const EDGE_SAMPLES: usize = 201;
/// `Im Λ / s` of the two density cuts in the inset.
pub const DENSITY_CUTS: [f64; 2] = [0.3, 1.5];
pub const QUANTIZATION_Q: u32 = 5;
pub const QUANTIZATION_TWO_S: [u32; 2] = [34, 100];
pub const STEADY_TWO_S: [u32; 3] = [10, 34, 100];

fn c(s: &str) -> String {
    s.to_string()
}

/// Edge curves on a uniform `x` grid in `[0, 1]`.
pub fn edge_curves(params: &ModelParams, samples: usize) -> Result<Vec<SpectralEdges>> {
    (0..samples)
        .map(|i| spectral_edges(i as f64 / (samples - 1) as f64, params))
        .collect()
}

/// Number of ED points that fall outside the edge curves by more than
/// `margin` in `Re Λ / s`, at their own `x = |q| / 2s`.
pub fn edge_violations(points: &[(i32, C64)], params: &ModelParams, margin: f64) -> Result<usize> {
    let s = params.s();
    let mut bad = 0;
    for &(q, l) in points {
        let e = spectral_edges(q.unsigned_abs() as f64 / params.two_s as f64, params)?;
        let r = l.re / s;
        if r > e.top + margin || r < e.bottom - margin {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn spectrum_points(params: &ModelParams) -> Result<Vec<(i32, C64)>> {
    let spec = full_spectrum(params, None, Vectors::None)?;
    Ok(super::csv::sorted_rows(&spec))
}

pub fn fig1(params: &ModelParams, points: &[(i32, C64)]) -> Result<Plot> {
    let s = params.s();
    let mut panel = Panel::new((70.0, 40.0, 520.0, 420.0), "Re Λ/s", "Im Λ/s");
    panel.title = format!("h={}, Γ={}, Γ0={}, p={}, s={}", params.h, params.gamma, params.gamma0, params.p, s);
    let edges = edge_curves(params, EDGE_SAMPLES)?;
    let im = |x: f64, sign: f64| sign * IM_SIGN * 2.0 * params.h * x;
    for sign in [1.0, -1.0] {
        let top: Vec<(f64, f64)> = edges.iter().map(|e| (e.top, im(e.x, sign))).collect();
        let bottom: Vec<(f64, f64)> = edges.iter().map(|e| (e.bottom, im(e.x, sign))).collect();
        let sep: Vec<(f64, f64)> = edges
            .iter()
            .map(|e| (e.separator.unwrap_or(f64::NAN), im(e.x, sign)))
            .collect();
        for pts in [top, bottom, sep] {
            panel.layers.push(Layer::Line { pts, color: c("#999999"), width: 1.5, dashed: false, label: None });
        }
    }
    let (hl, rest): (Vec<_>, Vec<_>) = points.iter().partition(|(q, _)| *q == HIGHLIGHT_Q);
    panel.layers.push(Layer::Points {
        pts: rest.iter().map(|(_, l)| (l.re / s, l.im / s)).collect(),
        color: c("#1f4e79"),
        radius: 1.6,
        label: Some(c("ED")),
    });
    panel.layers.push(Layer::Points {
        pts: hl.iter().map(|(_, l)| (l.re / s, l.im / s)).collect(),
        color: c("#d62728"),
        radius: 2.2,
        label: Some(format!("ED q={HIGHLIGHT_Q}")),
    });
    panel.layers.push(Layer::Line { pts: vec![], color: c("#999999"), width: 1.5, dashed: false, label: Some(c("edges λ_k(x)")) });
    Ok(Plot { width: 640.0, height: 510.0, title: c("Liouvillian spectrum"), panels: vec![panel] })
}

/// Sorted `Re Λ / s` of sector `q` by exact diagonalization.
pub fn sector_levels(params: &ModelParams, q: i32) -> Result<Vec<f64>> {
    let block = build_sector_block(params, q)?;
    let mut v: Vec<f64> = eigendecompose_sector(&block, Vectors::None)?
        .iter()
        .map(|p| p.lambda.re / params.s())
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

pub fn fig2(params: &ModelParams) -> Result<Plot> {
    let q = QUANTIZATION_Q;
    let mut panel = Panel::new((70.0, 40.0, 520.0, 380.0), "fraction of sector eigenvalues above", "Re Λ/s");
    panel.title = format!("q = {q}");
    let base = params.with_two_s(QUANTIZATION_TWO_S[1])?;
    let x_of = |two_s: u32| q as f64 / two_s as f64;
    // the counting function at the larger s sets the curve; its x differs
    // from the smaller one by O(1/s)
    for (two_s, color) in QUANTIZATION_TWO_S.iter().zip(["#d62728", "#1f77b4"]) {
        let m = params.with_two_s(*two_s)?;
        let lv = sector_levels(&m, q as i32)?;
        let nq = lv.len() - 1;
        panel.layers.push(Layer::Points {
            pts: lv.iter().enumerate().map(|(k, l)| (k as f64 / nq as f64, *l)).collect(),
            color: c(color),
            radius: 2.0,
            label: Some(format!("ED s={}", m.s())),
        });
        let e = spectral_edges(x_of(*two_s), &m)?;
        let curve: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let l = e.bottom + (e.top - e.bottom) * i as f64 / 400.0;
                (fraction_above(l, x_of(*two_s), &m).unwrap_or(f64::NAN), l)
            })
            .collect();
        let (dashed, label) = if *two_s == base.two_s { (false, Some(c("leading order"))) } else { (true, None) };
        panel.layers.push(Layer::Line { pts: curve, color: c("black"), width: 1.2, dashed, label });
    }
    Ok(Plot { width: 640.0, height: 470.0, title: c("Quantization in sector q = 5"), panels: vec![panel] })
}

pub fn fig3(params: &ModelParams) -> Result<Plot> {
    let (nx, nl) = (72usize, 240usize);
    let edges = edge_curves(params, EDGE_SAMPLES)?;
    let lmin = edges.iter().map(|e| e.bottom).fold(0.0, f64::min);
    let lmax = edges.iter().map(|e| e.top).fold(lmin, f64::max);
    let (l0, l1) = (lmin - 0.02, lmax + 0.02);
    let x_edges: Vec<f64> = (0..=nl).map(|i| l0 + (l1 - l0) * i as f64 / nl as f64).collect();
    let imax = 2.0 * params.h.abs();
    let y_edges: Vec<f64> = (0..=2 * nx).map(|j| -imax + 2.0 * imax * j as f64 / (2 * nx) as f64).collect();
    let values: Vec<Vec<f64>> = (0..nl)
        .into_par_iter()
        .map(|i| {
            let l = 0.5 * (x_edges[i] + x_edges[i + 1]);
            (0..2 * nx)
                .map(|j| {
                    let y = 0.5 * (y_edges[j] + y_edges[j + 1]);
                    let x = if imax > 0.0 { y.abs() / imax } else { 0.0 };
                    density(l, x, params).map(|d| d.value).unwrap_or(0.0)
                })
                .collect()
        })
        .collect();
    let mut main = Panel::new((70.0, 40.0, 520.0, 420.0), "Re Λ/s", "Im Λ/s");
    main.layers.push(Layer::Heat { x_edges, y_edges, values, vmax: 3.0 });
    main.title = c("D(Λ/s)");
    let mut inset = Panel::new((640.0, 40.0, 260.0, 180.0), "Re Λ/s", "D");
    for (cut, color) in DENSITY_CUTS.iter().zip(["#d62728", "#1f77b4"]) {
        let x = cut / imax.max(f64::MIN_POSITIVE);
        if x > 1.0 {
            continue;
        }
        let e = spectral_edges(x, params)?;
        let pts: Vec<(f64, f64)> = (1..600)
            .map(|i| {
                let l = e.bottom + (e.top - e.bottom) * i as f64 / 600.0;
                (l, density(l, x, params).map(|d| d.value.min(6.0)).unwrap_or(f64::NAN))
            })
            .collect();
        inset.layers.push(Layer::Line { pts, color: c(color), width: 1.2, dashed: false, label: Some(format!("Im Λ/s = {cut}")) });
    }
    inset.title = c("cuts");
    Ok(Plot { width: 940.0, height: 510.0, title: c("Eigenvalue density"), panels: vec![main, inset] })
}

/// Closed-form and ED steady-state observables at one `p`.
pub fn steady_pair(params: &ModelParams) -> Result<((f64, f64), (f64, f64))> {
    let ed = observables_from_weights(&ed_steady_weights(params)?);
    Ok(((mean_sz(params), entropy(params)), ed))
}

pub fn fig4(params: &ModelParams) -> Result<Plot> {
    let mut mag = Panel::new((70.0, 40.0, 360.0, 300.0), "p", "<S_z>/s");
    let mut ent = Panel::new((520.0, 40.0, 360.0, 300.0), "p", "S_E");
    let colors = ["#2ca02c", "#d62728", "#1f77b4"];
    for (two_s, color) in STEADY_TWO_S.iter().zip(colors) {
        let base = params.with_two_s(*two_s)?;
        let s = base.s();
        let fine: Vec<f64> = (0..=400).map(|i| -1.0 + 2.0 * i as f64 / 400.0).collect();
        let mut lm = Vec::new();
        let mut le = Vec::new();
        for p in fine {
            let m = base.with_p(p)?;
            lm.push((p, mean_sz(&m) / s));
            le.push((p, entropy(&m)));
        }
        let label = Some(format!("s={s}"));
        mag.layers.push(Layer::Line { pts: lm, color: c(color), width: 1.2, dashed: false, label: label.clone() });
        ent.layers.push(Layer::Line { pts: le, color: c(color), width: 1.2, dashed: false, label });
        let dots: Vec<(f64, (f64, f64))> = (0..21)
            .into_par_iter()
            .map(|i| {
                let p = -0.99 + 0.099 * i as f64;
                let (_, ed) = steady_pair(&base.with_p(p)?)?;
                Ok((p, ed))
            })
            .collect::<Result<_>>()?;
        mag.layers.push(Layer::Points { pts: dots.iter().map(|(p, e)| (*p, e.0 / s)).collect(), color: c(color), radius: 2.4, label: None });
        ent.layers.push(Layer::Points { pts: dots.iter().map(|(p, e)| (*p, e.1)).collect(), color: c(color), radius: 2.4, label: None });
    }
    mag.title = c("magnetization");
    ent.title = c("entropy");
    Ok(Plot { width: 920.0, height: 400.0, title: c("Steady state"), panels: vec![mag, ent] })
}

/// Writes `fig1.svg` to `fig4.svg` into `dir`.
pub fn write_figures(params: &ModelParams, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::Io(format!("{}: {e}", dir.display())))?;
    let points = spectrum_points(params)?;
    let plots = [fig1(params, &points)?, fig2(params)?, fig3(params)?, fig4(params)?];
    let mut out = Vec::new();
    for (i, p) in plots.iter().enumerate() {
        let path = dir.join(format!("fig{}.svg", i + 1));
        p.write(&path)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_has_every_eigenvalue() {
        let m = ModelParams::default();
        let pts = spectrum_points(&m).unwrap();
        assert_eq!(pts.len(), 1225);
        let svg = fig1(&m, &pts).unwrap().render().unwrap();
        assert_eq!(svg.matches("<circle").count(), 1225);
        let red = svg.matches(r##"fill="#d62728""##).count();
        // the legend swatch is a rect, so the circles alone count the sector
        assert_eq!(red, 29 + 1);
    }

    #[test]
    fn small_figures_render() {
        let m = ModelParams::default().with_two_s(8).unwrap();
        assert!(fig3(&m).unwrap().render().unwrap().contains("<rect"));
        let pts = spectrum_points(&m).unwrap();
        assert_eq!(edge_violations(&pts, &m, 0.3).unwrap(), 0);
    }
}
