//! Cut geometry, leading-order eigenvalue counting and quantization.
//!
//! The imaginary part of `G₀` on a cut (where the discriminant is negative)
//! is `sqrt|B² - 4AC| / |2A|`. Shrinking the quantization contour onto the cut
//! turns `(2s-q)/(2πi) ∮ G₀` into a real integral over it, which counts the
//! roots of `Ψ` on the cut.
//!
//! * Region I: four real branch points `a₁ < a₂ < a₃ < a₄`, cuts `[a₁, a₂]`
//!   and its mirror `[a₃, a₄]` under `z̄ → R²/z̄`. Levels come in pairs.
//! * Region II: two real branch points `a₁ < a₄` and a conjugate pair `b, b̄`
//!   on `|z̄| = R`.

use super::curve::{leading_coefficient, r_squared, u_roots, z_from_u, Curve};
use super::edges::{affine, folded, spectral_edges, SpectralEdges, P_ZERO};
use super::quad::{bracketed_root, tanh_sinh};
use super::Region;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::C64;
use std::f64::consts::PI;

const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutGeometry {
    RegionI { a: [f64; 4] },
    RegionII { a1: f64, a4: f64, b: C64 },
    /// `p = 0`: `W = (z̄-1)²(z̄² - u z̄ + 1)`, described by `w₃`.
    Unpolarized { w3: f64 },
}

/// Branch-point geometry at a real `λ` strictly inside the support. Uses `|p|`.
pub fn cut_geometry(lambda: f64, x: f64, params: &ModelParams) -> Result<CutGeometry> {
    let m = folded(params)?;
    let edges = spectral_edges(x, &m)?;
    let region = edges.classify(lambda, 0.0);
    if matches!(region, Region::Outside) {
        return Err(Error::Domain(format!("λ = {lambda} outside the support at x = {x}")));
    }
    if m.p < P_ZERO {
        let ((a3, b3), _) = affine(x, &ModelParams { p: 0.0, ..m });
        return Ok(CutGeometry::Unpolarized { w3: a3 + b3 * lambda });
    }
    let r2 = r_squared(m.p);
    let (u1, u2) = u_roots(lambda, x, &m);
    let (z1lo, z1hi) = z_from_u(u1, r2);
    let (z2lo, z2hi) = z_from_u(u2, r2);
    let in_one = matches!(region, Region::I)
        || (matches!(region, Region::Boundary) && edges.separator.is_some_and(|s| lambda > s));
    if in_one {
        let mut a = [z1lo.re, z2lo.re, z2hi.re, z1hi.re];
        a.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Ok(CutGeometry::RegionI { a })
    } else {
        let b = if z2lo.im >= 0.0 { z2lo } else { z2hi };
        Ok(CutGeometry::RegionII { a1: z1lo.re.min(z1hi.re), a4: z1lo.re.max(z1hi.re), b })
    }
}

/// `∫_0^π g(mid - half cos θ) dθ` for a cut `[lo, hi]`.
fn over_cut<F: Fn(f64, f64) -> f64>(lo: f64, hi: f64, g: F) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    tanh_sinh(|t| g(mid - half * t.cos(), half * t.sin()), 0.0, PI, QUAD_TOL)
}

/// `|2A(z̄)|` from the factored form `A = A₃ z̄(z̄-1)(z̄-R²)`.
fn two_a_abs(curve: &Curve, z: f64, r2: f64) -> f64 {
    (2.0 * curve.a[3] * z * (z - 1.0) * (z - r2)).abs()
}

/// Fraction of the `2s - q` sector eigenvalues whose real part exceeds `s λ`,
/// at leading order. Independent of `s`; uses `|p|`.
pub fn fraction_above(lambda: f64, x: f64, params: &ModelParams) -> Result<f64> {
    let m = folded(params)?;
    let edges = spectral_edges(x, &m)?;
    if x >= 1.0 {
        return Ok(if lambda >= edges.top { 0.0 } else { 1.0 });
    }
    if lambda >= edges.top {
        return Ok(0.0);
    }
    if lambda <= edges.bottom {
        return Ok(1.0);
    }
    let l = leading_coefficient(x, &m);
    let curve = Curve::real(lambda, x, &m);
    let r2 = r_squared(m.p);
    Ok(match cut_geometry(lambda, x, &m)? {
        CutGeometry::Unpolarized { w3 } => ((4.0 + w3).max(0.0).sqrt() - 2.0 * x) / (2.0 * (1.0 - x)),
        CutGeometry::RegionI { a } => {
            let v = over_cut(a[0], a[1], |z, w| {
                w * w * (l * ((z - a[2]) * (z - a[3])).abs()).sqrt() / two_a_abs(&curve, z, r2)
            });
            2.0 * v / PI
        }
        CutGeometry::RegionII { a1, a4, b } => {
            let v = over_cut(a1, a4, |z, w| {
                let zb = C64::new(z, 0.0) - b;
                w * w * l.sqrt() * zb.norm() / two_a_abs(&curve, z, r2)
            });
            v / PI
        }
    })
}

/// Roots of `Ψ` on one region-I cut, `(2s-q)/π ∫_{a₁}^{a₂} sqrt|B²-4AC| / |2A|`.
pub fn level_index(lambda: f64, x: f64, params: &ModelParams) -> Result<f64> {
    let n = params.two_s as f64 * (1.0 - x);
    Ok(0.5 * n * fraction_above(lambda, x, params)?)
}

/// Solve the quantization condition for `λ`.
///
/// In region I, `n` is the number of roots on one cut (`n = 0` is the top
/// edge). In region II, `n` counts the eigenvalues above `λ` on the whole
/// support, so `n = 2s - q` is the bottom edge.
pub fn quantize_lambda(n: u32, x: f64, params: &ModelParams, region: Region) -> Result<f64> {
    let edges = spectral_edges(x, params)?;
    let total = params.two_s as f64 * (1.0 - x);
    let count = |l: f64| -> f64 { total * fraction_above(l, x, params).unwrap_or(f64::NAN) };
    let nf = n as f64;
    match region {
        Region::I => {
            let sep = edges
                .separator
                .ok_or(Error::NoSolution { n: nf, lo: 0.0, hi: 0.0 })?;
            let hi = 0.5 * count(sep);
            if n == 0 {
                return Ok(edges.top);
            }
            if nf > hi {
                return Err(Error::NoSolution { n: nf, lo: 0.0, hi });
            }
            solve(|l| 0.5 * count(l) - nf, sep, edges.top)
        }
        Region::II => {
            let upper = edges.region_two_top();
            let lo = count(upper);
            if nf < lo || nf > total + 1e-9 {
                return Err(Error::NoSolution { n: nf, lo, hi: total });
            }
            if (nf - total).abs() < 1e-9 {
                return Ok(edges.bottom);
            }
            solve(|l| count(l) - nf, edges.bottom, upper)
        }
        _ => Err(Error::Domain(format!("cannot quantize in region {region:?}"))),
    }
}

fn solve<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let w = hi - lo;
    let (a, b) = (lo + 1e-13 * w, hi - 1e-13 * w);
    bracketed_root(&f, a, b, 1e-13 * (1.0 + w))
        .ok_or_else(|| Error::NoConvergence(format!("quantization bracket [{lo}, {hi}] has no sign change")))
}

/// Leading-order prediction for the `k`-th eigenvalue (descending real part,
/// `k = 0` the slowest) of sector `q`, as `Re Λ / s`.
///
/// Region I levels carry one root per cut and host two eigenvalues each, so
/// `k` maps to level `⌈k/2⌉` while it fits below the separator; beyond that,
/// the eigenvalue with `k + 1` eigenvalues above it (itself included) is
/// matched in region II. `None` for the last eigenvalue, which lies outside
/// the leading-order support.
pub fn predict_sector_eigenvalue(k: usize, q: u32, params: &ModelParams) -> Result<Option<f64>> {
    let two_s = params.two_s;
    if q > two_s {
        return Err(Error::Index(format!("q = {q} exceeds 2s = {two_s}")));
    }
    let x = q as f64 / two_s as f64;
    let nq = (two_s - q) as usize;
    let edges: SpectralEdges = spectral_edges(x, params)?;
    if k == 0 {
        return Ok(Some(edges.top));
    }
    if k > nq {
        return Err(Error::Index(format!("k = {k} exceeds sector size {}", nq + 1)));
    }
    if let Some(sep) = edges.separator {
        let level = k.div_ceil(2) as f64;
        if level < level_index(sep, x, params)? {
            return quantize_lambda(level as u32, x, params, Region::I).map(Some);
        }
    }
    if k == nq {
        return Ok(None);
    }
    quantize_lambda(k as u32 + 1, x, params, Region::II).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ModelParams {
        ModelParams::new(1.0, 1.2, 0.2, 0.9, 34).unwrap()
    }

    #[test]
    fn fraction_limits_and_continuity() {
        let m = fig1();
        for x in [0.05, 5.0 / 34.0, 0.3] {
            let e = spectral_edges(x, &m).unwrap();
            assert_eq!(fraction_above(e.top + 1e-3, x, &m).unwrap(), 0.0);
            assert_eq!(fraction_above(e.bottom - 1e-3, x, &m).unwrap(), 1.0);
            assert!(fraction_above(e.top - 1e-9, x, &m).unwrap() < 1e-3);
            assert!(fraction_above(e.bottom + 1e-9, x, &m).unwrap() > 0.999);
            if let Some(sep) = e.separator {
                let a = fraction_above(sep + 1e-10, x, &m).unwrap();
                let b = fraction_above(sep - 1e-10, x, &m).unwrap();
                assert!((a - b).abs() < 1e-4, "x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn counting_is_monotone() {
        let m = fig1();
        let x = 5.0 / 34.0;
        let e = spectral_edges(x, &m).unwrap();
        let n = 300;
        let mut prev = -1.0;
        for i in 0..=n {
            let l = e.top - (e.top - e.bottom) * i as f64 / n as f64;
            let f = fraction_above(l, x, &m).unwrap();
            assert!(f >= prev - 1e-12, "λ={l}");
            prev = f;
        }
    }

    #[test]
    fn unpolarized_counting_matches_sector_sizes() {
        let m = fig1().with_p(0.0).unwrap();
        for x in [0.0, 0.25, 0.5] {
            let e = spectral_edges(x, &m).unwrap();
            assert!(fraction_above(e.top, x, &m).unwrap().abs() < 1e-12);
            let near_bottom = fraction_above(e.bottom + 1e-12, x, &m).unwrap();
            assert!((near_bottom - 1.0).abs() < 1e-5);
        }
        // q = 0 at p = 0: λ_n = -Γ n(n+1)/(4s²), so about n+1 eigenvalues sit above
        let two_s = 200;
        let m = m.with_two_s(two_s).unwrap();
        let s = 100.0;
        for n in [10.0, 50.0, 120.0] {
            let l = -1.2 * n * (n + 1.0) / (4.0 * s * s);
            let count = two_s as f64 * fraction_above(l, 0.0, &m).unwrap();
            assert!((count - n).abs() < 2.0, "{count} vs {n}");
        }
    }

    #[test]
    fn quantization_tracks_ed_for_q5() {
        use crate::ed::{build_sector_block, eigendecompose_sector, Vectors};
        let m = fig1();
        let s = 17.0;
        let block = build_sector_block(&m, 5).unwrap();
        let ev = eigendecompose_sector(&block, Vectors::None).unwrap();
        let mut worst: f64 = 0.0;
        for (k, e) in ev.iter().enumerate() {
            if let Some(pred) = predict_sector_eigenvalue(k, 5, &m).unwrap() {
                worst = worst.max((pred - e.lambda.re / s).abs());
            }
        }
        assert!(worst < 0.1, "{worst}");
    }

    #[test]
    fn quantize_errors() {
        let m = fig1();
        let x = 5.0 / 34.0;
        assert!(matches!(quantize_lambda(200, x, &m, Region::I), Err(Error::NoSolution { .. })));
        assert!(matches!(quantize_lambda(2, x, &m, Region::II), Err(Error::NoSolution { .. })));
        assert_eq!(quantize_lambda(29, x, &m, Region::II).unwrap(), spectral_edges(x, &m).unwrap().bottom);
    }
}
