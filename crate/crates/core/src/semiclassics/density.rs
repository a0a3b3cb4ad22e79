//! Leading-order eigenvalue density `D_x(λ)`, normalized so that
//! `∫ D_x dλ = 1 - x`.

use super::counting::{cut_geometry, CutGeometry};
use super::curve::leading_coefficient;
use super::edges::{folded, spectral_edges};
use super::elliptic::{ellip_k, ellip_k_tilde};
use super::quad::tanh_sinh;
use super::Region;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityValue {
    pub value: f64,
    pub region: Region,
    /// Set on the separator (logarithmic) and at `λ → 0` for `p = 0, x = 0`.
    pub divergent: bool,
}

/// Density from the elliptic closed forms, falling back to quadrature when no
/// root labeling yields a real positive value.
pub fn density(lambda: f64, x: f64, params: &ModelParams) -> Result<DensityValue> {
    let m = folded(params)?;
    let edges = spectral_edges(x, &m)?;
    let region = edges.classify(lambda, EDGE_TOL);
    match region {
        Region::Outside => Err(Error::Domain(format!("λ = {lambda} outside the support at x = {x}"))),
        Region::Boundary => {
            let on_sep = edges.separator.is_some_and(|s| (lambda - s).abs() <= EDGE_TOL);
            let sqrt_edge = x == 0.0 && m.p < super::edges::P_ZERO && (lambda - edges.top).abs() <= EDGE_TOL;
            if on_sep || sqrt_edge {
                return Ok(DensityValue { value: f64::INFINITY, region, divergent: true });
            }
            // finite limit at the outer edges
            let inward = if (lambda - edges.top).abs() <= EDGE_TOL { -1.0 } else { 1.0 };
            let v = evaluate(lambda + inward * 2.0 * EDGE_TOL * (1.0 + lambda.abs()), x, &m)?;
            Ok(DensityValue { value: v, region, divergent: false })
        }
        _ => Ok(DensityValue { value: evaluate(lambda, x, &m)?, region, divergent: false }),
    }
}

fn evaluate(lambda: f64, x: f64, m: &ModelParams) -> Result<f64> {
    let geom = cut_geometry(lambda, x, m)?;
    if let Some(v) = closed_form(&geom, m) {
        return Ok(v);
    }
    density_quadrature(lambda, x, m)
}

fn accept(v: C64) -> Option<f64> {
    (v.re > 0.0 && v.re.is_finite() && v.im.abs() <= 1e-8 * v.re).then_some(v.re)
}

fn closed_form(geom: &CutGeometry, m: &ModelParams) -> Option<f64> {
    let pref = 1.0 / (PI * m.gamma * (1.0 + m.p));
    match *geom {
        CutGeometry::Unpolarized { w3 } => Some(1.0 / (m.gamma * (4.0 + w3).sqrt())),
        CutGeometry::RegionI { a } => {
            let r: Vec<C64> = a.iter().map(|v| C64::new(1.0 / v, 0.0)).collect();
            let (r1, r2, r3, r4) = (r[0], r[1], r[2], r[3]);
            let mm = (r1 - r2) * (r3 - r4) / ((r3 - r2) * (r1 - r4));
            let v = 4.0 * pref * ellip_k(mm) / ((r2 - r3) * (r1 - r4)).sqrt();
            accept(v).or_else(|| search_labelings(&r, |r1, r2, r3, r4| {
                let mm = (r1 - r2) * (r3 - r4) / ((r3 - r2) * (r1 - r4));
                vec![4.0 * pref * ellip_k(mm) / ((r2 - r3) * (r1 - r4)).sqrt()]
            }))
        }
        CutGeometry::RegionII { a1, a4, b } => {
            let r1 = C64::new(1.0 / a4, 0.0);
            let r4 = C64::new(1.0 / a1, 0.0);
            let (r2, r3) = (1.0 / b, 1.0 / b.conj());
            let f = |r1: C64, r2: C64, r3: C64, r4: C64| -> Vec<C64> {
                let mm = (r2 - r3) * (r1 - r4) / ((r1 - r3) * (r2 - r4));
                let den = ((r1 - r3) * (r4 - r2)).sqrt();
                vec![2.0 * pref * ellip_k(mm) / den, 2.0 * pref * ellip_k_tilde(mm) / den]
            };
            accept(f(r1, r2, r3, r4)[0]).or_else(|| search_labelings(&[r1, r2, r3, r4], f))
        }
    }
}

/// Try every ordering of the four roots; accept only if all real positive
/// candidates agree.
fn search_labelings<F: Fn(C64, C64, C64, C64) -> Vec<C64>>(r: &[C64], f: F) -> Option<f64> {
    let mut found: Vec<f64> = Vec::new();
    for i in 0..4 {
        for j in (0..4).filter(|&j| j != i) {
            for k in (0..4).filter(|&k| k != i && k != j) {
                let l = 6 - i - j - k;
                for v in f(r[i], r[j], r[k], r[l]) {
                    if let Some(a) = accept(v) {
                        found.push(a);
                    }
                }
            }
        }
    }
    let first = *found.first()?;
    found.iter().all(|v| (v - first).abs() <= 1e-8 * first).then_some(first)
}

/// Independent evaluation by quadrature over the cut, used as an oracle and
/// as the fallback.
pub fn density_quadrature(lambda: f64, x: f64, params: &ModelParams) -> Result<f64> {
    let m = folded(params)?;
    let l = leading_coefficient(x, &m);
    // ∫ dz / sqrt|disc| over a cut, with z = mid - half cos θ
    let theta = |g: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> f64 {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        tanh_sinh(|t| g(mid - half * t.cos()), 0.0, PI, 1e-12)
    };
    Ok(match cut_geometry(lambda, x, &m)? {
        CutGeometry::Unpolarized { w3 } => 1.0 / (m.gamma * (4.0 + w3).sqrt()),
        CutGeometry::RegionI { a } => {
            let g = |z: f64| 1.0 / (l * ((z - a[2]) * (z - a[3])).abs()).sqrt();
            2.0 * (1.0 - x) / PI * theta(&g, a[0], a[1])
        }
        CutGeometry::RegionII { a1, a4, b } => {
            let g = |z: f64| 1.0 / (l.sqrt() * (C64::new(z, 0.0) - b).norm());
            (1.0 - x) / PI * theta(&g, a1, a4)
        }
    })
}

/// `∫ D_x dλ` over the support, split at the separator.
pub fn marginal_integral(x: f64, params: &ModelParams) -> Result<f64> {
    let m = folded(params)?;
    let e = spectral_edges(x, &m)?;
    let f = |l: f64| density(l, x, &m).map(|d| d.value).unwrap_or(0.0);
    let mut total = 0.0;
    let mut breaks = vec![e.bottom];
    breaks.extend(e.separator);
    breaks.push(e.top);
    for w in breaks.windows(2) {
        total += tanh_sinh(f, w[0], w[1], 1e-9);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x_axis: Vec<f64>,
    pub lambda_axis: Vec<f64>,
    /// `density[ix][il]`, zero outside the support.
    pub density: Vec<Vec<f64>>,
    pub region_label: Vec<Vec<Region>>,
}

pub fn density_grid(params: &ModelParams, x_grid: &[f64], lambda_grid: &[f64]) -> Result<DensityGrid> {
    let m = folded(params)?;
    let rows: Vec<(Vec<f64>, Vec<Region>)> = x_grid
        .par_iter()
        .map(|&x| {
            let mut d = Vec::with_capacity(lambda_grid.len());
            let mut r = Vec::with_capacity(lambda_grid.len());
            for &l in lambda_grid {
                match density(l, x, &m) {
                    Ok(v) => {
                        d.push(v.value);
                        r.push(v.region);
                    }
                    Err(_) => {
                        d.push(0.0);
                        r.push(Region::Outside);
                    }
                }
            }
            (d, r)
        })
        .collect();
    let (density, region_label) = rows.into_iter().unzip();
    Ok(DensityGrid {
        x_axis: x_grid.to_vec(),
        lambda_axis: lambda_grid.to_vec(),
        density,
        region_label,
    })
}
