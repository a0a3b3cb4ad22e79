//! Leading-order algebraic curve `A G₀² + B G₀ + C = 0` and its branch points.
//!
//! With `Λ = s(λ - 2ihx)` and `q = 2sx` the leading order of the eigenvalue
//! equation reads `λ + 2ihx = P00 + 2(1-x) P10 G₀ + 4(1-x)² P2 G₀²`. The field
//! term cancels against the one in `P00`, leaving
//!
//! * `A = 4(1-x)² P2` (cubic),
//! * `B = 2(1-x) P10` (quadratic),
//! * `C = Re P00 - λ` (linear),
//!
//! so `G₀ = (Q ± sqrt(W·L)) / D` with `Q = -B`, `D = 2A` and the discriminant
//! `B² - 4AC = L·W`, where `W` is a monic quartic and `L = Γ²(1-p)²(1-x)²`.

use crate::error::{Error, Result};
use crate::model::{poly_p_coeffs, ModelParams, PolyKind};
use crate::poly;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub lambda: C64,
    pub x: f64,
    pub a: [f64; 4],
    pub b: [f64; 3],
    pub c: [C64; 2],
}

impl Curve {
    /// `lambda` may be complex; its conjugate gives the conjugate curve.
    pub fn new(lambda: C64, x: f64, params: &ModelParams) -> Self {
        let re = |k: PolyKind| -> Vec<f64> {
            poly_p_coeffs(k, x, params).iter().map(|c| c.re).collect()
        };
        let p2 = re(PolyKind::P2);
        let p10 = re(PolyKind::P10);
        let p00 = re(PolyKind::P00);
        let fa = 4.0 * (1.0 - x) * (1.0 - x);
        let fb = 2.0 * (1.0 - x);
        Curve {
            lambda,
            x,
            a: [fa * p2[0], fa * p2[1], fa * p2[2], fa * p2[3]],
            b: [fb * p10[0], fb * p10[1], fb * p10[2]],
            c: [C64::new(p00[0], 0.0) - lambda, C64::new(p00[1], 0.0)],
        }
    }

    pub fn real(lambda: f64, x: f64, params: &ModelParams) -> Self {
        Self::new(C64::new(lambda, 0.0), x, params)
    }

    pub fn eval_a(&self, z: C64) -> C64 {
        poly::eval_real(&self.a, z)
    }

    pub fn eval_b(&self, z: C64) -> C64 {
        poly::eval_real(&self.b, z)
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        self.c[0] + self.c[1] * z
    }

    /// Ascending coefficients of `B² - 4AC`.
    pub fn disc_coeffs(&self) -> [C64; 5] {
        let mut d = [C64::new(0.0, 0.0); 5];
        for i in 0..3 {
            for j in 0..3 {
                d[i + j] += self.b[i] * self.b[j];
            }
        }
        for i in 0..4 {
            for j in 0..2 {
                if i + j < 5 {
                    d[i + j] -= 4.0 * self.a[i] * self.c[j];
                }
            }
        }
        d
    }

    pub fn disc(&self, z: C64) -> C64 {
        let b = self.eval_b(z);
        b * b - 4.0 * self.eval_a(z) * self.eval_c(z)
    }

    /// Residual of the defining quadratic, scaled by the size of its terms.
    pub fn relation_residual(&self, z: C64, g: C64) -> f64 {
        let (a, b, c) = (self.eval_a(z), self.eval_b(z), self.eval_c(z));
        let scale = (a * g * g).norm() + (b * g).norm() + c.norm();
        (a * g * g + b * g + c).norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// Leading coefficient of the discriminant, independent of `λ`.
pub fn leading_coefficient(x: f64, params: &ModelParams) -> f64 {
    let g = params.gamma * (1.0 - params.p) * (1.0 - x);
    g * g
}

/// Both roots `(G₊, G₋) = (-B ± sqrt(B² - 4AC)) / 2A` (principal square root),
/// computed without cancellation.
pub fn g0_branches(zbar: C64, lambda: f64, x: f64, params: &ModelParams) -> Result<(C64, C64)> {
    if x >= 1.0 {
        return Err(Error::Domain(
            "x = 1: both A and B vanish and the curve collapses to the point λ = -Γ0".into(),
        ));
    }
    let curve = Curve::real(lambda, x, params);
    let a = curve.eval_a(zbar);
    let scale: f64 = curve
        .a
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * zbar.norm().powi(k as i32))
        .sum();
    if a.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Pole(format!("z̄ = {zbar} is a root of P2")));
    }
    let b = curve.eval_b(zbar);
    let c = curve.eval_c(zbar);
    let sq = (b * b - 4.0 * a * c).sqrt();
    let plus_side = (b.conj() * sq).re >= 0.0;
    let qq = if plus_side { -0.5 * (b + sq) } else { -0.5 * (b - sq) };
    if qq.norm() == 0.0 {
        return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    }
    let (g1, g2) = (qq / a, c / qq);
    // g1 carries the sign opposite to `sq` when plus_side
    Ok(if plus_side { (g2, g1) } else { (g1, g2) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoints {
    /// Roots of `W`, sorted by real then imaginary part.
    pub r_inv: Vec<C64>,
    pub r: Vec<C64>,
    pub lambda: C64,
    pub x: f64,
    /// Set when the leading coefficient vanishes and fewer than four roots exist.
    pub reduced: bool,
}

/// Roots of the discriminant quartic by companion eigenvalues plus polishing.
pub fn quartic_branch_points(lambda: C64, x: f64, params: &ModelParams) -> Result<BranchPoints> {
    let curve = Curve::new(lambda, x, params);
    let mut d = curve.disc_coeffs().to_vec();
    let scale = d.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut reduced = false;
    while d.len() > 1 && d[d.len() - 1].norm() < 1e-14 * scale {
        d.pop();
        reduced = true;
    }
    let r_inv = poly::roots(&d)?;
    let r = r_inv.iter().map(|z| 1.0 / z).collect();
    Ok(BranchPoints { r_inv, r, lambda, x, reduced })
}

/// Monic `W` evaluated at `z̄`.
pub fn w_monic(z: C64, lambda: C64, x: f64, params: &ModelParams) -> C64 {
    let l = leading_coefficient(x, params);
    Curve::new(lambda, x, params).disc(z) / l
}

/// `W` is self-reciprocal under `z̄ → R²/z̄` with `R² = (1+p)/(1-p)`, so
/// `W = z̄² V(u)` with `u = z̄ + R²/z̄` and `V(u) = u² + w₃ u + w₂ - 2R²`.
/// Returns `(w₃, w₂)`, both affine in `λ`.
pub fn reduced_coeffs(lambda: f64, x: f64, params: &ModelParams) -> (f64, f64) {
    let curve = Curve::real(lambda, x, params);
    let d = curve.disc_coeffs();
    let l = leading_coefficient(x, params);
    (d[3].re / l, d[2].re / l)
}

pub fn r_squared(p: f64) -> f64 {
    (1.0 + p) / (1.0 - p)
}

/// Roots of `V(u)`, ordered so that the first has the larger real part.
pub fn u_roots(lambda: f64, x: f64, params: &ModelParams) -> (C64, C64) {
    let (w3, w2) = reduced_coeffs(lambda, x, params);
    let r2 = r_squared(params.p);
    let disc = C64::new(w3 * w3 - 4.0 * (w2 - 2.0 * r2), 0.0).sqrt();
    let u1 = 0.5 * (-w3 + disc);
    let u2 = 0.5 * (-w3 - disc);
    if u1.re >= u2.re {
        (u1, u2)
    } else {
        (u2, u1)
    }
}

/// `z̄` values with `z̄ + R²/z̄ = u`, smaller modulus first.
pub fn z_from_u(u: C64, r2: f64) -> (C64, C64) {
    let sq = (u * u - 4.0 * r2).sqrt();
    let (z1, z2) = (0.5 * (u + sq), 0.5 * (u - sq));
    // the product is R², so compute the small one from the large one
    let (big, _) = if z1.norm() >= z2.norm() { (z1, z2) } else { (z2, z1) };
    (r2 / big, big)
}

/// Branch points in closed form through the reciprocal structure, sorted like
/// `quartic_branch_points`.
pub fn branch_points_reciprocal(lambda: f64, x: f64, params: &ModelParams) -> Vec<C64> {
    let r2 = r_squared(params.p);
    let (u1, u2) = u_roots(lambda, x, params);
    let (a, b) = z_from_u(u1, r2);
    let (c, d) = z_from_u(u2, r2);
    let mut out = vec![a, b, c, d];
    poly::sort_roots(&mut out);
    out
}

/// Normalized finite-`s` resolvent `Ψ'/Ψ / deg Ψ` from polynomial coefficients.
pub fn finite_s_g(coeffs: &[C64], z: C64) -> C64 {
    let deg = coeffs.len().saturating_sub(1).max(1) as f64;
    let (p, d1, _) = poly::eval_d2(coeffs, z);
    d1 / p / deg
}

/// Same resolvent from the roots of `Ψ`, `Σ 1/(z̄ - z̄ᵢ) / n`.
pub fn finite_s_g_from_roots(roots: &[C64], z: C64) -> C64 {
    let n = roots.len().max(1) as f64;
    roots.iter().map(|r| 1.0 / (z - r)).sum::<C64>() / n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ModelParams {
        ModelParams::new(1.0, 1.2, 0.2, 0.9, 34).unwrap()
    }

    #[test]
    fn branches_satisfy_relation() {
        let m = fig1();
        for &(l, x) in &[(-0.2, 5.0 / 34.0), (-0.5, 0.3), (-0.9, 0.01), (0.1, 0.7)] {
            let curve = Curve::real(l, x, &m);
            for z in [C64::new(0.3, 0.2), C64::new(-2.0, 0.5), C64::new(7.0, -3.0), C64::new(0.5, 0.0)] {
                let (gp, gm) = g0_branches(z, l, x, &m).unwrap();
                assert!(curve.relation_residual(z, gp) < 1e-11);
                assert!(curve.relation_residual(z, gm) < 1e-11);
                let sq = curve.disc(z).sqrt();
                let a2 = 2.0 * curve.eval_a(z);
                assert!((gp - (-curve.eval_b(z) + sq) / a2).norm() < 1e-10 * (1.0 + gp.norm()));
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        let m = fig1();
        assert!(matches!(g0_branches(C64::new(0.5, 0.0), -0.2, 1.0, &m), Err(Error::Domain(_))));
        for z in [0.0, 1.0, 19.0] {
            assert!(matches!(
                g0_branches(C64::new(z, 0.0), -0.2, 0.3, &m),
                Err(Error::Pole(_))
            ));
        }
    }

    #[test]
    fn physical_branch_decays_like_inverse_z() {
        let m = fig1();
        let x = 0.1;
        for r in [1e3, 1e5] {
            let z = C64::new(r, 0.3 * r);
            let (gp, gm) = g0_branches(z, -0.4, x, &m).unwrap();
            let best = (gp * z - 1.0).norm().min((gm * z - 1.0).norm());
            assert!(best < 50.0 / r, "{best}");
        }
    }

    #[test]
    fn leading_coefficient_is_lambda_independent() {
        let m = fig1();
        for x in [0.0, 0.2, 0.7] {
            for l in [-1.0, -0.3, 0.4] {
                let d = Curve::real(l, x, &m).disc_coeffs();
                assert!((d[4].re - leading_coefficient(x, &m)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn branch_points_are_roots() {
        let m = fig1();
        for &(l, x) in &[(-0.2, 5.0 / 34.0), (-0.6, 5.0 / 34.0), (-0.3, 0.5), (-2.0, 0.1)] {
            let bp = quartic_branch_points(C64::new(l, 0.0), x, &m).unwrap();
            assert_eq!(bp.r_inv.len(), 4);
            assert!(!bp.reduced);
            let curve = Curve::real(l, x, &m);
            let d = curve.disc_coeffs();
            for z in &bp.r_inv {
                let mag: f64 = d.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
                assert!(curve.disc(*z).norm() < 1e-10 * mag);
            }
            let closed = branch_points_reciprocal(l, x, &m);
            for z in &closed {
                let dmin = bp.r_inv.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(dmin < 1e-7 * (1.0 + z.norm()), "{z} {dmin}");
            }
        }
    }

    #[test]
    fn region_one_has_four_real_branch_points() {
        let m = fig1();
        let bp = quartic_branch_points(C64::new(-0.2, 0.0), 5.0 / 34.0, &m).unwrap();
        assert!(bp.r_inv.iter().all(|z| z.im.abs() < 1e-9 && z.re > 0.0));
        let bp = quartic_branch_points(C64::new(-0.5, 0.0), 5.0 / 34.0, &m).unwrap();
        let real = bp.r_inv.iter().filter(|z| z.im.abs() < 1e-9).count();
        assert_eq!(real, 2);
        // the complex pair sits on |z̄| = R
        let r = r_squared(0.9).sqrt();
        for z in bp.r_inv.iter().filter(|z| z.im.abs() >= 1e-9) {
            assert!((z.norm() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn conjugate_lambda_conjugates_roots() {
        let m = fig1();
        let lam = C64::new(-0.4, 0.23);
        let a = quartic_branch_points(lam, 0.2, &m).unwrap();
        let b = quartic_branch_points(lam.conj(), 0.2, &m).unwrap();
        for z in &a.r_inv {
            let dmin = b.r_inv.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(dmin < 1e-10 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn reduced_degree_flag() {
        let m = ModelParams::new(1.0, 1.2, 0.2, 1.0, 10).unwrap();
        let bp = quartic_branch_points(C64::new(-0.3, 0.0), 0.2, &m).unwrap();
        assert!(bp.reduced);
        assert!(bp.r_inv.len() < 4);
    }

    #[test]
    fn self_reciprocal_structure() {
        for p in [0.1, 0.5, 0.9] {
            let m = fig1().with_p(p).unwrap();
            let r2 = r_squared(p);
            for &(l, x) in &[(-0.2, 0.1), (-0.7, 0.4)] {
                let d = Curve::real(l, x, &m).disc_coeffs();
                let lc = leading_coefficient(x, &m);
                let w: Vec<f64> = d.iter().map(|c| c.re / lc).collect();
                assert!((w[0] - r2 * r2).abs() < 1e-10 * r2 * r2);
                assert!((w[1] - w[3] * r2).abs() < 1e-10 * (1.0 + w[1].abs()));
            }
        }
    }
}
