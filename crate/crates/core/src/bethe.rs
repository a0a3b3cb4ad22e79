//! Bethe-like equations for the roots of factorized eigen-polynomials
//! `Ψ(z̄) = ∏ (z̄ - z̄ᵢ)`.
//!
//! Evaluating `𝔏Ψ = λΨ` at a root kills the terms without derivatives, which
//! leaves `2 P2(z̄ᵢ) Σ_{j≠i} 1/(z̄ᵢ - z̄ⱼ) + s P10(z̄ᵢ) + P11(z̄ᵢ) = 0`. The
//! coefficient polynomials are real, so sectors `±q` share their equations and
//! the negative sector is recovered by conjugation.

use crate::coherent::rho_to_poly;
use crate::error::{Error, Result};
use crate::model::{poly_p_coeffs, ModelParams, PolyKind, Sector};
use crate::poly;
use crate::semiclassics::counting::{cut_geometry, CutGeometry};
use crate::semiclassics::edges::spectral_edges;
use crate::semiclassics::Region;
use crate::C64;
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 30;
const MIN_SEPARATION: f64 = 1e-8;
/// Relative half-width of the modulus band that counts region-II roots.
pub const CIRCLE_DELTA: f64 = 0.15;
/// Width of the band around an edge curve (in `Re λ / s`) read as a boundary.
pub const EDGE_BAND: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct BetheConfig {
    pub q: i32,
    pub roots: Vec<C64>,
    pub lambda: C64,
    pub residual: f64,
    pub region: Region,
    /// `None` on a boundary or where the root geometry is not classified.
    pub excitation: Option<usize>,
    /// Max-norm residual after each Newton step, starting with the seed.
    pub history: Vec<f64>,
}

/// Polynomials entering the equations, as `(s P10 + P11, 2 P2)` at `|q|`.
struct Coeffs {
    num: Vec<f64>,
    den: Vec<f64>,
    r2: f64,
}

impl Coeffs {
    fn new(q: i32, params: &ModelParams) -> Result<Self> {
        Sector::new(q, params.two_s)?;
        let x = q.unsigned_abs() as f64 / params.two_s as f64;
        let s = params.s();
        let re = |k| poly_p_coeffs(k, x, params).iter().map(|c| c.re).collect::<Vec<f64>>();
        let (p10, p11, p2) = (re(PolyKind::P10), re(PolyKind::P11), re(PolyKind::P2));
        let num = (0..3).map(|k| s * p10[k] + p11[k]).collect();
        let den = p2.iter().map(|c| 2.0 * c).collect();
        let r2 = if params.p < 1.0 { (1.0 + params.p) / (1.0 - params.p) } else { f64::INFINITY };
        Ok(Coeffs { num, den, r2 })
    }

    fn singular_point(&self, z: C64) -> Option<f64> {
        self.near_singular(z, 1e-12)
    }

    /// Looser match used to recognise frozen roots from numerical input.
    fn singular_point_loose(&self, z: C64) -> Option<f64> {
        self.near_singular(z, 1e-7)
    }

    fn near_singular(&self, z: C64, tol: f64) -> Option<f64> {
        let scale = 1.0 + z.norm();
        [0.0, 1.0, self.r2]
            .into_iter()
            .find(|&w| (z - w).norm() <= tol * scale)
    }

    /// `-(s P10 + P11) / (2 P2)` and its derivative.
    fn rhs(&self, z: C64) -> (C64, C64) {
        let n = poly::eval_real(&self.num, z);
        let dn = C64::new(self.num[1], 0.0) + 2.0 * self.num[2] * z;
        let d = poly::eval_real(&self.den, z);
        let dd = C64::new(self.den[1], 0.0) + 2.0 * self.den[2] * z + 3.0 * self.den[3] * z * z;
        (-n / d, -(dn * d - n * dd) / (d * d))
    }
}

/// Whether a root may occupy the singular point `w`: the numerator vanishes
/// there too, so that the equation for that root holds identically.
fn can_freeze(c: &Coeffs, w: f64) -> bool {
    let scale: f64 = c.num.iter().map(|a| a.abs()).sum::<f64>() * (1.0 + w * w);
    poly::eval_real(&c.num, C64::new(w, 0.0)).norm() <= 1e-12 * scale
}

/// Rejects roots on singular points; returns the roots with frozen ones
/// snapped onto their singular point, and the frozen mask.
///
/// Several roots may sit on one frozen point (at `p = 0` the points `1` and
/// `R²` merge). Numerical rooting splits such a multiple root into a cluster
/// of width `~ε^(1/m)` whose centroid is much closer, so clusters are snapped
/// as a whole.
fn check_roots(roots: &[C64], c: &Coeffs) -> Result<(Vec<C64>, Vec<bool>)> {
    let mut z = roots.to_vec();
    let mut frozen = vec![false; z.len()];
    for w in [0.0, 1.0, c.r2].into_iter().filter(|w| w.is_finite() && can_freeze(c, *w)) {
        let wz = C64::new(w, 0.0);
        let near: Vec<usize> = (0..z.len()).filter(|&i| (roots[i] - wz).norm() <= 1e-4 * (1.0 + w)).collect();
        if near.is_empty() {
            continue;
        }
        let centroid = near.iter().map(|&i| roots[i]).sum::<C64>() / near.len() as f64;
        let members: Vec<usize> = if (centroid - wz).norm() <= 1e-5 * (1.0 + w) {
            near
        } else {
            near.into_iter().filter(|&i| c.singular_point_loose(roots[i]) == Some(w)).collect()
        };
        for i in members {
            z[i] = wz;
            frozen[i] = true;
        }
    }
    for (i, r) in z.iter().enumerate() {
        if !frozen[i] {
            if let Some(w) = c.singular_point(*r) {
                return Err(Error::Pole(format!("root {i} sits on the singular point {w}")));
            }
        }
    }
    Ok((z, frozen))
}

fn check_distinct(z: &[C64], frozen: &[bool]) -> Result<()> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if !(frozen[i] && frozen[j]) && (z[i] - z[j]).norm() <= 1e-14 * (1.0 + z[i].norm()) {
                return Err(Error::Pole(format!("roots {i} and {j} coincide at {}", z[i])));
            }
        }
    }
    Ok(())
}

fn residual_unchecked(roots: &[C64], frozen: &[bool], c: &Coeffs) -> Vec<C64> {
    roots
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            if frozen[i] {
                return C64::new(0.0, 0.0);
            }
            let sum: C64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &y)| 1.0 / (z - y))
                .sum();
            sum - c.rhs(z).0
        })
        .collect()
}

/// Right-hand side `-(s P10 + P11)/(2 P2)` of the equation for one root.
pub fn bethe_rhs(z: C64, q: i32, params: &ModelParams) -> Result<C64> {
    let c = Coeffs::new(q, params)?;
    if let Some(w) = c.singular_point(z) {
        return Err(Error::Pole(format!("z̄ = {w} is a singular point")));
    }
    Ok(c.rhs(z).0)
}

/// `Σ_{j≠i} 1/(z̄ᵢ - z̄ⱼ) - rhs(z̄ᵢ)` for every root.
///
/// A root on a singular point where `s P10 + P11` also vanishes (`z̄ = 1` when
/// `q p = 0`, e.g. every traceless `q = 0` mode) satisfies its own equation
/// identically; its component is zero.
pub fn bethe_residual(roots: &[C64], q: i32, params: &ModelParams) -> Result<Vec<C64>> {
    let c = Coeffs::new(q, params)?;
    check_len(roots, q, params)?;
    let (z, frozen) = check_roots(roots, &c)?;
    check_distinct(&z, &frozen)?;
    Ok(residual_unchecked(&z, &frozen, &c))
}

fn check_len(roots: &[C64], q: i32, params: &ModelParams) -> Result<()> {
    let want = params.two_s as usize - q.unsigned_abs() as usize;
    if roots.len() != want {
        return Err(Error::Dimension { expected: want, got: roots.len() });
    }
    Ok(())
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn jacobian(roots: &[C64], frozen: &[bool], c: &Coeffs) -> DMatrix<C64> {
    let n = roots.len();
    let mut j = DMatrix::zeros(n, n);
    for a in 0..n {
        if frozen[a] {
            j[(a, a)] = C64::new(1.0, 0.0);
            continue;
        }
        let mut diag = -c.rhs(roots[a]).1;
        for b in 0..n {
            if a != b {
                let d = 1.0 / (roots[a] - roots[b]);
                let d2 = d * d;
                if !frozen[b] {
                    j[(a, b)] = d2;
                }
                diag -= d2;
            }
        }
        j[(a, a)] = diag;
    }
    j
}

/// Smallest distance between roots, ignoring pairs of frozen roots.
fn min_separation(roots: &[C64], frozen: &[bool]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if !(frozen[i] && frozen[j]) {
                m = m.min((roots[i] - roots[j]).norm());
            }
        }
    }
    m
}

/// Damped Newton iteration on the full Jacobian.
pub fn solve_bethe(initial: &[C64], q: i32, params: &ModelParams, tol: f64, max_iter: usize) -> Result<BetheConfig> {
    let c = Coeffs::new(q, params)?;
    check_len(initial, q, params)?;
    let (mut z, frozen) = check_roots(initial, &c)?;
    let sep = min_separation(&z, &frozen);
    if sep <= MIN_SEPARATION {
        return Err(Error::Collision(format!("seed roots closer than {MIN_SEPARATION:e}: {sep:.3e}")));
    }
    let mut f = residual_unchecked(&z, &frozen, &c);
    let mut res = max_norm(&f);
    let mut history = vec![res];
    let mut iter = 0;
    while res >= tol {
        if iter == max_iter {
            return Err(Error::NoConvergence(format!(
                "Bethe Newton: residual {res:.3e} after {max_iter} iterations"
            )));
        }
        iter += 1;
        let step = jacobian(&z, &frozen, &c)
            .lu()
            .solve(&DVector::from_iterator(f.len(), f.iter().map(|v| -v)))
            .ok_or_else(|| Error::NoConvergence("singular Bethe Jacobian".into()))?;
        let mut t = 1.0;
        let mut accepted = false;
        let mut collided = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<C64> = z.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            let hits_pole = trial.iter().zip(&frozen).any(|(w, &fz)| !fz && c.singular_point(*w).is_some());
            if min_separation(&trial, &frozen) <= MIN_SEPARATION || hits_pole {
                collided = true;
                t *= 0.5;
                continue;
            }
            let ft = residual_unchecked(&trial, &frozen, &c);
            let rt = max_norm(&ft);
            if rt.is_finite() && rt < res {
                z = trial;
                f = ft;
                res = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(if collided {
                Error::Collision("step damping exhausted near a root collision".into())
            } else {
                Error::NoConvergence(format!("step damping exhausted at residual {res:.3e}"))
            });
        }
        history.push(res);
    }
    let far = 1e6 * c.r2.clamp(1.0, 1e6);
    if z.iter().any(|r| r.norm() > far) {
        return Err(Error::NoConvergence("roots escaped to infinity".into()));
    }
    let lambda = eigenvalue_from_roots(&z, q, params)?;
    let mut cfg = BetheConfig { q, roots: z, lambda, residual: res, region: Region::Boundary, excitation: None, history };
    if let Ok((region, exc)) = classify_mode(&cfg, params) {
        cfg.region = region;
        cfg.excitation = exc;
    }
    Ok(cfg)
}

/// `[𝔏Ψ](z̄*) / Ψ(z̄*)` for `Ψ = ∏(z̄ - z̄ᵢ)`, at one probe.
fn ratio_at(roots: &[C64], z: C64, x: f64, params: &ModelParams) -> C64 {
    let s = params.s();
    let pe = |k| poly::eval(&poly_p_coeffs(k, x, params), z);
    let (mut s1, mut s2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for r in roots {
        let d = 1.0 / (z - r);
        s1 += d;
        s2 += d * d;
    }
    s * pe(PolyKind::P00)
        + pe(PolyKind::P01)
        + (pe(PolyKind::P10) + pe(PolyKind::P11) / s) * s1
        + pe(PolyKind::P2) / s * (s1 * s1 - s2)
}

fn probes(roots: &[C64], r2: f64) -> [C64; 3] {
    let scale = roots.iter().map(|r| r.norm()).fold(r2.max(1.0), f64::max);
    let rho = 0.5 * scale;
    // off the real axis and away from the root cloud along three directions
    [0.35, 2.2, 4.1].map(|t: f64| C64::from_polar(rho, t) + C64::new(0.0, 0.75 * scale))
}

/// Residual scale at which the probes are compared with each other.
pub const PROBE_TOL: f64 = 1e-8;

/// Eigenvalue read off by applying the operator at three probes.
///
/// Away from the roots, `[𝔏Ψ]/Ψ = λ + Σᵢ (2 P2(z̄ᵢ)/s) Fᵢ / (z̄ - z̄ᵢ)` with `Fᵢ`
/// the Bethe residuals, so the probes are accepted when their spread is no
/// larger than what residuals of size `PROBE_TOL` can produce (plus a
/// roundoff floor). Otherwise the roots are not an eigenmode.
pub fn eigenvalue_from_roots(roots: &[C64], q: i32, params: &ModelParams) -> Result<C64> {
    Sector::new(q, params.two_s)?;
    check_len(roots, q, params)?;
    let x = q.unsigned_abs() as f64 / params.two_s as f64;
    let r2 = if params.p < 1.0 { (1.0 + params.p) / (1.0 - params.p) } else { 1.0 };
    // negative sectors: conj(𝔏_{|q|} applied to the conjugate polynomial)
    let rs: Vec<C64> = if q < 0 { roots.iter().map(|r| r.conj()).collect() } else { roots.to_vec() };
    let pr = probes(&rs, r2);
    let vals = pr.map(|z| ratio_at(&rs, z, x, params));
    let spread = vals
        .iter()
        .flat_map(|a| vals.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let mean = (vals[0] + vals[1] + vals[2]) / 3.0;
    let p2 = poly_p_coeffs(PolyKind::P2, x, params);
    let reach: f64 = rs
        .iter()
        .map(|r| {
            let w = (2.0 * poly::eval(&p2, *r) / params.s()).norm();
            let d = pr.map(|z| 1.0 / (z - r));
            let diff = [(d[0] - d[1]).norm(), (d[0] - d[2]).norm(), (d[1] - d[2]).norm()];
            w * diff.into_iter().fold(0.0, f64::max)
        })
        .sum();
    let allowed = PROBE_TOL * reach + 1e-12 * mean.norm().max(1.0) * (1.0 + rs.len() as f64);
    if spread > allowed {
        return Err(Error::NotEigenmode(format!("probe spread {spread:.3e} exceeds {allowed:.3e}")));
    }
    Ok(if q < 0 { mean.conj() } else { mean })
}

/// Roots of the polynomial of a sector eigenvector.
///
/// Factors of `z̄ - 1` are divided out first and returned as exact roots:
/// eigenpolynomials often vanish there to high order (every traceless `q = 0`
/// mode, and whole towers at `p = 0`), and a companion matrix would split
/// such a multiple root into a wide cluster.
pub fn roots_from_vector(sector_vec: &[C64], q: i32, two_s: u32) -> Result<Vec<C64>> {
    let p = rho_to_poly(sector_vec, q, two_s)?;
    let want = p.coeffs.len() - 1;
    let mut c = p.coeffs;
    let mut at_one = 0;
    while c.len() > 1 {
        let size: f64 = c.iter().map(|a| a.norm()).sum();
        if c.iter().sum::<C64>().norm() > 1e-10 * size {
            break;
        }
        // synthetic division by (z̄ - 1), coefficients ascending
        let n = c.len() - 1;
        let mut quot = vec![C64::new(0.0, 0.0); n];
        quot[n - 1] = c[n];
        for k in (1..n).rev() {
            quot[k - 1] = c[k] + quot[k];
        }
        c = quot;
        at_one += 1;
    }
    let mut r = if c.len() > 1 { poly::roots(&c)? } else { Vec::new() };
    r.extend(std::iter::repeat_n(C64::new(1.0, 0.0), at_one));
    if r.len() != want {
        return Err(Error::Dimension { expected: want, got: r.len() });
    }
    Ok(r)
}

/// Region of a converged mode from the edge curves at `x = |q|/2s`, and its
/// excitation number from the root geometry.
///
/// Region I counts roots near the real cuts `[a₁, a₂] ∪ [a₃, a₄]` spanned by
/// the branch points. Region II counts roots in the modulus band
/// `(1 ± δ) R`, `R² = (1+p)/(1-p)`, and the excitation is `2s - q` minus that
/// count. Root positions are only tabulated for `p ≥ 0`.
pub fn classify_mode(config: &BetheConfig, params: &ModelParams) -> Result<(Region, Option<usize>)> {
    if params.p < 0.0 {
        return Err(Error::Domain("root geometry is classified for p ≥ 0 only".into()));
    }
    let two_s = params.two_s;
    let x = config.q.unsigned_abs() as f64 / two_s as f64;
    let lambda = config.lambda.re / params.s();
    let edges = spectral_edges(x, params)?;
    // only the separator divides regions; near the outer edges (and slightly
    // past them, where finite-s modes spill) the adjacent region applies
    let region = match edges.separator {
        Some(sep) if (lambda - sep).abs() <= EDGE_BAND => Region::Boundary,
        Some(sep) if lambda > sep => Region::I,
        _ => Region::II,
    };
    let rs: Vec<C64> = if config.q < 0 { config.roots.iter().map(|r| r.conj()).collect() } else { config.roots.clone() };
    match region {
        Region::I => {
            let clamp = lambda.min(edges.top).max(edges.separator.unwrap_or(edges.bottom));
            let a = match cut_geometry(clamp, x, params)? {
                CutGeometry::RegionI { a } => a,
                _ => return Ok((Region::I, None)),
            };
            let on = |z: &C64, lo: f64, hi: f64| {
                let pad = 0.25 * (hi - lo).max(1e-3);
                z.re >= lo - pad && z.re <= hi + pad && z.im.abs() <= pad
            };
            let n = rs.iter().filter(|z| on(z, a[0], a[1]) || on(z, a[2], a[3])).count();
            Ok((Region::I, Some(n)))
        }
        Region::II => {
            let r = ((1.0 + params.p) / (1.0 - params.p)).sqrt();
            let n = rs
                .iter()
                .filter(|z| (z.norm() - r).abs() <= CIRCLE_DELTA * r)
                .count();
            Ok((Region::II, Some(rs.len() - n)))
        }
        other => Ok((other, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::{build_sector_block, eigendecompose_sector, Vectors};
    use crate::steady::weights;
    use proptest::prelude::*;

    fn fig1(two_s: u32) -> ModelParams {
        ModelParams::new(1.0, 1.2, 0.2, 0.9, two_s).unwrap()
    }

    fn ed_modes(m: &ModelParams, q: i32) -> Vec<(C64, Vec<C64>)> {
        let block = build_sector_block(m, q).unwrap();
        eigendecompose_sector(&block, Vectors::Right)
            .unwrap()
            .into_iter()
            .map(|p| (p.lambda, roots_from_vector(p.right.as_ref().unwrap(), q, m.two_s).unwrap()))
            .collect()
    }

    #[test]
    fn rhs_matches_closed_form() {
        // Σ_{j≠i} 1/(z̄ᵢ-z̄ⱼ) = (1-p)(q/2+1)/(1+p-(1-p)z̄) + (q/2)/(1-z̄) + s/z̄
        for (p, two_s, q) in [(0.9, 34u32, 5i32), (0.3, 7, 2), (-0.4, 6, -3), (0.0, 5, 0)] {
            let m = ModelParams::new(0.4, 1.2, 0.2, p, two_s).unwrap();
            let s = m.s();
            let hq = q.unsigned_abs() as f64 / 2.0;
            for z in [C64::new(0.3, 0.2), C64::new(-1.7, 0.9), C64::new(4.0, -2.5)] {
                let want = (1.0 - p) * (hq + 1.0) / (1.0 + p - (1.0 - p) * z) + hq / (1.0 - z) + s / z;
                let got = bethe_rhs(z, q, &m).unwrap();
                assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn full_sector_is_trivial() {
        let m = fig1(6);
        assert!(bethe_residual(&[], 6, &m).unwrap().is_empty());
        let cfg = solve_bethe(&[], -6, &m, DEFAULT_TOL, 5).unwrap();
        assert!(cfg.roots.is_empty() && cfg.history.len() == 1);
    }

    #[test]
    fn spin_half_constant_polynomial() {
        // 2s = 1, q = 1: Ψ = 1 and the 1x1 block is its eigenvalue
        let m = ModelParams::new(0.7, 1.1, 0.3, 0.4, 1).unwrap();
        let block = build_sector_block(&m, 1).unwrap().to_dense();
        let l = eigenvalue_from_roots(&[], 1, &m).unwrap();
        assert!((l - block[(0, 0)]).norm() < 1e-12);
        let l = eigenvalue_from_roots(&[], -1, &m).unwrap();
        let block = build_sector_block(&m, -1).unwrap().to_dense();
        assert!((l - block[(0, 0)]).norm() < 1e-12);
    }

    #[test]
    fn ed_roots_satisfy_equations() {
        let m = fig1(6);
        for (l, roots) in ed_modes(&m, 1) {
            let r = bethe_residual(&roots, 1, &m).unwrap();
            assert!(max_norm(&r) < 1e-7, "{}", max_norm(&r));
            let lr = eigenvalue_from_roots(&roots, 1, &m).unwrap();
            assert!((lr - l).norm() < 1e-9);
        }
    }

    #[test]
    fn off_shell_roots_are_not_eigenmodes() {
        let m = fig1(6);
        for (_, roots) in ed_modes(&m, 1) {
            // move the root farthest from the singular points
            let i = (0..roots.len())
                .max_by(|&a, &b| {
                    let d = |z: C64| [0.0, 1.0, 19.0].iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
                    d(roots[a]).partial_cmp(&d(roots[b])).unwrap()
                })
                .unwrap();
            let mut z = roots.clone();
            z[i] += C64::new(1e-3, 1e-3);
            assert!(matches!(eigenvalue_from_roots(&z, 1, &m), Err(Error::NotEigenmode(_))));
        }
    }

    #[test]
    fn perturbation_is_visible() {
        let m = fig1(6);
        let (_, roots) = &ed_modes(&m, 1)[2];
        let mut bumped = roots.clone();
        bumped[0] += 1e-3;
        let r = max_norm(&bethe_residual(&bumped, 1, &m).unwrap());
        let c = Coeffs::new(1, &m).unwrap();
        let j = jacobian(roots, &vec![false; roots.len()], &c);
        let col = (0..roots.len()).map(|i| j[(i, 0)].norm()).fold(0.0, f64::max);
        assert!(r > 0.5e-3 * col, "{r} vs {col}");
    }

    #[test]
    fn completeness_small_spins() {
        for two_s in 1..=6u32 {
            for p in [0.9, 0.35, 0.0, -0.6] {
                let m = ModelParams::new(0.8, 1.2, 0.2, p, two_s).unwrap();
                for q in -(two_s as i32)..=two_s as i32 {
                    for (l, roots) in ed_modes(&m, q) {
                        let r = max_norm(&bethe_residual(&roots, q, &m).unwrap());
                        assert!(r < 1e-6, "2s={two_s} p={p} q={q}: {r}");
                        let cfg = solve_bethe(&roots, q, &m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
                        assert!(cfg.history.len() <= 4, "{:?}", cfg.history);
                        assert!((cfg.lambda - l).norm() < 1e-9, "{} vs {l}", cfg.lambda);
                    }
                }
            }
        }
    }

    #[test]
    fn newton_converges_quadratically() {
        let m = fig1(8);
        let (l, roots) = ed_modes(&m, 2).swap_remove(3);
        let seed: Vec<C64> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| r + C64::new(1e-3 * (i as f64 + 1.0), -7e-4 * i as f64))
            .collect();
        let cfg = solve_bethe(&seed, 2, &m, 1e-13, DEFAULT_MAX_ITER).unwrap();
        let h = &cfg.history;
        assert!(h.len() >= 3);
        let n = h.len();
        // the last step is limited by roundoff, so look at the one before it
        let ratio = h[n - 2] / h[n - 3];
        assert!(ratio < 1e-2, "{h:?}");
        assert!(h[n - 2] < 10.0 * h[n - 3] * h[n - 3] / h[n - 4].max(h[n - 3]) + 1e-12 || ratio < 1e-4);
        assert!((cfg.lambda - l).norm() < 1e-9);
    }

    #[test]
    fn continuation_in_s() {
        // 2s = 8 seeded from 2s = 6 roots plus two extra roots on the circle
        let small = fig1(6);
        let big = fig1(8);
        let r = (1.9f64 / 0.1).sqrt();
        let ed: Vec<C64> = ed_modes(&big, 2).into_iter().map(|(l, _)| l).collect();
        let mut ok = 0;
        for (_, roots) in ed_modes(&small, 2) {
            let mut seed = roots.clone();
            seed.push(C64::from_polar(r, 2.5));
            seed.push(C64::from_polar(r, -2.5));
            if let Ok(cfg) = solve_bethe(&seed, 2, &big, DEFAULT_TOL, 200) {
                let d = ed.iter().map(|l| (l - cfg.lambda).norm()).fold(f64::INFINITY, f64::min);
                assert!(d < 1e-8, "continued mode {} is not in the ED spectrum", cfg.lambda);
                ok += 1;
            }
        }
        eprintln!("continued {ok}");
        assert!(ok >= 1);
    }

    #[test]
    fn coincident_seed_is_rejected() {
        let m = fig1(6);
        let seed = vec![C64::new(0.5, 0.1), C64::new(0.5, 0.1), C64::new(2.0, 0.0), C64::new(3.0, 1.0), C64::new(-1.0, 0.0)];
        assert!(matches!(solve_bethe(&seed, 1, &m, DEFAULT_TOL, 10), Err(Error::Collision(_))));
        assert!(matches!(bethe_residual(&seed, 1, &m), Err(Error::Pole(_))));
        let on_pole = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.2, 0.0)];
        assert!(matches!(bethe_residual(&on_pole, 1, &m), Err(Error::Pole(_))));
    }

    #[test]
    fn steady_state_roots() {
        // Ψ ∝ Σ z_p^κ z̄^κ: roots are z_p⁻¹ ω for the nontrivial (2s+1)-th roots of unity ω
        let m = fig1(10);
        let w = weights(&m);
        let v: Vec<C64> = w.iter().map(|&x| C64::new(x, 0.0)).collect();
        let roots = roots_from_vector(&v, 0, 10).unwrap();
        let zp = m.z_p();
        for r in &roots {
            let u = r * zp;
            assert!((u.powu(11) - 1.0).norm() < 1e-9 && (u - 1.0).norm() > 0.1);
        }
        let l = eigenvalue_from_roots(&roots, 0, &m).unwrap();
        assert!(l.norm() < 1e-9);
        let cfg = BetheConfig { q: 0, roots, lambda: l, residual: 0.0, region: Region::Boundary, excitation: None, history: vec![] };
        assert_eq!(classify_mode(&cfg, &m).unwrap(), (Region::I, Some(0)));
    }

    #[test]
    fn fig1_root_geometry() {
        let m = fig1(34);
        let modes = ed_modes(&m, 6);
        for (k, (l, roots)) in modes.iter().enumerate().take(7) {
            let cfg = BetheConfig { q: 6, roots: roots.clone(), lambda: *l, residual: 0.0, region: Region::Boundary, excitation: None, history: vec![] };
            let (region, exc) = classify_mode(&cfg, &m).unwrap();
            assert_eq!(region, Region::I);
            // the two modes of a level share its root count
            assert_eq!(exc, Some((2 * k.div_ceil(2)).saturating_sub(1)), "k={k}");
        }
        let (l, roots) = modes.last().unwrap().clone();
        let cfg = BetheConfig { q: 6, roots, lambda: l, residual: 0.0, region: Region::Boundary, excitation: None, history: vec![] };
        assert_eq!(classify_mode(&cfg, &m).unwrap().0, Region::II);
        assert!(classify_mode(&cfg, &m.with_p(-0.9).unwrap()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn probe_invariance_tracks_residual(k in 0usize..6, i in 0usize..5, e in -14.0f64..-2.0, th in 0.0..std::f64::consts::TAU) {
            let m = fig1(6);
            let (_, roots) = ed_modes(&m, 1).swap_remove(k);
            let mut z = roots.clone();
            z[i] += C64::from_polar(10f64.powf(e), th);
            let r = max_norm(&bethe_residual(&z, 1, &m).unwrap());
            let l = eigenvalue_from_roots(&z, 1, &m);
            if r < 1e-8 {
                prop_assert!(l.is_ok(), "residual {r:e} but {l:?}");
            }
        }
    }
}
