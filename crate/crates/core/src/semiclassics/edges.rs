//! Spectral edges `λ_k(x)` and region classification.
//!
//! Edges are the values of `λ` where two branch points collide. In terms of
//! `V(u) = u² + w₃u + w₂ - 2R²` a collision happens either at `u = ±2R`
//! (a root pair of `W` merging at `z̄ = ±R`) or when `V` has a double root.
//! Since `w₃, w₂` are affine in `λ` all three conditions are solved exactly.

use super::curve::{r_squared, reduced_coeffs};
use super::Region;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

/// Below this `|p|` the unpolarized limit formulas are used.
pub const P_ZERO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEdges {
    pub x: f64,
    pub top: f64,
    /// Line separating region I (above) from region II (below), if region I exists.
    pub separator: Option<f64>,
    pub bottom: f64,
}

impl SpectralEdges {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.top];
        v.extend(self.separator);
        v.push(self.bottom);
        v
    }

    /// Upper end of region II.
    pub fn region_two_top(&self) -> f64 {
        self.separator.unwrap_or(self.top)
    }

    pub fn classify(&self, lambda: f64, tol: f64) -> Region {
        let near = |e: f64| (lambda - e).abs() <= tol;
        if self.to_vec().into_iter().any(near) {
            return Region::Boundary;
        }
        if lambda > self.top || lambda < self.bottom {
            return Region::Outside;
        }
        match self.separator {
            Some(sep) if lambda > sep => Region::I,
            _ => Region::II,
        }
    }
}

/// Semiclassical quantities depend on `p` only through `|p|`.
pub(crate) fn folded(params: &ModelParams) -> Result<ModelParams> {
    if params.p.abs() >= 1.0 {
        return Err(Error::Domain("fully polarized bath (|p| = 1) has no finite branch-point curve".into()));
    }
    if params.gamma <= 0.0 {
        return Err(Error::Domain("Γ = 0: the curve degenerates".into()));
    }
    Ok(ModelParams { p: params.p.abs(), ..*params })
}

/// Affine coefficients `w(λ) = α + βλ` for `(w₃, w₂)`.
pub(crate) fn affine(x: f64, m: &ModelParams) -> ((f64, f64), (f64, f64)) {
    let (a3, a2) = reduced_coeffs(0.0, x, m);
    let (b3, b2) = reduced_coeffs(1.0, x, m);
    ((a3, b3 - a3), (a2, b2 - a2))
}

/// `λ` where the unpolarized `w₃` equals `target`.
fn p0_level(x: f64, m: &ModelParams, target: f64) -> f64 {
    let ((a3, b3), _) = affine(x, m);
    (target - a3) / b3
}

pub fn spectral_edges(x: f64, params: &ModelParams) -> Result<SpectralEdges> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    if x >= 1.0 {
        let l = -params.gamma0;
        return Ok(SpectralEdges { x, top: l, separator: None, bottom: l });
    }
    let m = folded(params)?;
    if m.p < P_ZERO {
        let m0 = ModelParams { p: 0.0, ..m };
        return Ok(SpectralEdges {
            x,
            top: p0_level(x, &m0, 4.0 * x * x - 4.0),
            separator: None,
            bottom: p0_level(x, &m0, 0.0),
        });
    }
    let r2 = r_squared(m.p);
    let r = r2.sqrt();
    let ((a3, b3), (a2, b2)) = affine(x, &m);
    // V(-2R) = 0
    let bottom = -(2.0 * r2 - 2.0 * r * a3 + a2) / (-2.0 * r * b3 + b2);
    // V(2R) = 0
    let sep = -(2.0 * r2 + 2.0 * r * a3 + a2) / (2.0 * r * b3 + b2);
    // just above the separator both roots of V must exceed 2R for region I
    let probe = sep + 1e-9 * (1.0 + sep.abs());
    let (w3, w2) = (a3 + b3 * probe, a2 + b2 * probe);
    let dv = w3 * w3 - 4.0 * (w2 - 2.0 * r2);
    let region_one = dv >= 0.0 && {
        let sq = dv.sqrt();
        0.5 * (-w3 - sq) > 2.0 * r
    };
    if !region_one {
        return Ok(SpectralEdges { x, top: sep, separator: None, bottom });
    }
    // double root of V: (a3 + b3 λ)² - 4(a2 + b2 λ) + 8R² = 0
    // coefficients that cancel to rounding level are exact zeros (x = 0)
    let clean = |v: f64, mag: f64| if v.abs() <= 1e-12 * mag { 0.0 } else { v };
    let qa = b3 * b3;
    let qb = clean(2.0 * a3 * b3 - 4.0 * b2, (2.0 * a3 * b3).abs() + (4.0 * b2).abs());
    let qc = clean(a3 * a3 - 4.0 * a2 + 8.0 * r2, a3 * a3 + (4.0 * a2).abs() + 8.0 * r2);
    let roots = quadratic_real_roots(qa, qb, qc);
    let top = roots
        .into_iter()
        .filter(|&l| l >= sep)
        .fold(f64::INFINITY, f64::min);
    if !top.is_finite() {
        return Ok(SpectralEdges { x, top: sep, separator: None, bottom });
    }
    Ok(SpectralEdges { x, top, separator: Some(sep), bottom })
}

/// Real roots of `a t² + b t + c`; a slightly negative discriminant is read as
/// a double root.
fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let d = b * b - 4.0 * a * c;
    let scale = (b * b).max((4.0 * a * c).abs());
    if d.abs() <= 1e-10 * scale {
        return vec![-b / (2.0 * a) + 0.0];
    }
    if d < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * d.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Region of a real `λ` at fraction `x`.
pub fn classify_lambda(lambda: f64, x: f64, params: &ModelParams, tol: f64) -> Result<Region> {
    Ok(spectral_edges(x, params)?.classify(lambda, tol))
}
