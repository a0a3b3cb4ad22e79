//! Closed-contour integrals of `G₀` with continuous tracking of `sqrt(B² - 4AC)`.

use super::curve::{quartic_branch_points, Curve};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::C64;
use std::f64::consts::TAU;

const MIN_SAMPLES: usize = 512;
const MAX_SAMPLES: usize = 1 << 16;

/// Axis-aligned ellipse `c + a cos t + i b sin t`, counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub center: C64,
    pub semi_x: f64,
    pub semi_y: f64,
    /// Sign of the square root at the starting point `t = 0`, relative to the
    /// principal branch.
    pub branch: f64,
}

impl ContourSpec {
    pub fn circle(center: C64, radius: f64) -> Self {
        ContourSpec { center, semi_x: radius, semi_y: radius, branch: 1.0 }
    }

    /// Tight ellipse around the real segment `[lo, hi]`.
    pub fn around_segment(lo: f64, hi: f64, pad: f64) -> Self {
        ContourSpec {
            center: C64::new(0.5 * (lo + hi), 0.0),
            semi_x: 0.5 * (hi - lo) + pad,
            semi_y: pad.max(0.25 * (hi - lo)),
            branch: 1.0,
        }
    }

    pub fn point(&self, t: f64) -> (C64, C64) {
        let z = self.center + C64::new(self.semi_x * t.cos(), self.semi_y * t.sin());
        let dz = C64::new(-self.semi_x * t.sin(), self.semi_y * t.cos());
        (z, dz)
    }

    fn scale(&self) -> f64 {
        self.center.norm() + self.semi_x.max(self.semi_y)
    }
}

/// Trapezoid rule for a meromorphic integrand, doubling until stable.
pub fn contour_integral<F: Fn(C64) -> C64>(f: F, spec: &ContourSpec) -> Result<C64> {
    let mut n = MIN_SAMPLES;
    let mut prev: Option<C64> = None;
    while n <= MAX_SAMPLES {
        let h = TAU / n as f64;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            let (z, dz) = spec.point(k as f64 * h);
            acc += f(z) * dz;
        }
        let est = acc * h;
        if let Some(p) = prev {
            if (est - p).norm() < 1e-9 * (1.0 + est.norm()) {
                return Ok(est);
            }
        }
        prev = Some(est);
        n *= 2;
    }
    Err(Error::NoConvergence("contour quadrature did not stabilize".into()))
}

/// `∮ G₀ dz̄` on a branch chosen at the start of the contour and continued
/// along it.
pub fn contour_integral_g0(lambda: f64, x: f64, params: &ModelParams, spec: &ContourSpec) -> Result<C64> {
    let curve = Curve::real(lambda, x, params);
    let bp = quartic_branch_points(C64::new(lambda, 0.0), x, params)?;
    let margin = 1e-3 * spec.scale();
    for z in &bp.r_inv {
        let d = distance_to_ellipse(spec, *z);
        if d < margin {
            return Err(Error::Domain(format!("contour passes within {d:.2e} of branch point {z}")));
        }
    }
    let mut n = MIN_SAMPLES;
    let mut prev: Option<C64> = None;
    while n <= MAX_SAMPLES {
        match tracked_sum(&curve, spec, n) {
            Ok(est) => {
                if let Some(p) = prev {
                    if (est - p).norm() < 1e-9 * (1.0 + est.norm()) {
                        return Ok(est);
                    }
                }
                prev = Some(est);
            }
            Err(Error::Branch(_)) if n < MAX_SAMPLES => prev = None,
            Err(e) => return Err(e),
        }
        n *= 2;
    }
    Err(Error::Branch("no stable branch-tracked integral at maximum subdivision".into()))
}

fn tracked_sum(curve: &Curve, spec: &ContourSpec, n: usize) -> Result<C64> {
    let h = TAU / n as f64;
    let (z0, _) = spec.point(0.0);
    let start = spec.branch * curve.disc(z0).sqrt();
    let mut root = start;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let (z, dz) = spec.point(k as f64 * h);
        let mut sq = curve.disc(z).sqrt();
        if (sq - root).norm() > (sq + root).norm() {
            sq = -sq;
        }
        if k > 0 && root.norm() > 0.0 && (sq / root).arg().abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Branch(format!("square-root jump at sample {k} of {n}")));
        }
        root = sq;
        if k == n {
            break;
        }
        let g = (-curve.eval_b(z) + sq) / (2.0 * curve.eval_a(z));
        acc += g * dz;
    }
    if (root - start).norm() > 1e-8 * start.norm().max(1e-300) {
        return Err(Error::Branch("branch does not close: contour encloses an odd number of branch points".into()));
    }
    Ok(acc * h)
}

fn distance_to_ellipse(spec: &ContourSpec, z: C64) -> f64 {
    let n = 2048;
    (0..n)
        .map(|k| (spec.point(TAU * k as f64 / n as f64).0 - z).norm())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::super::counting::{cut_geometry, level_index, CutGeometry};
    use super::super::curve::{finite_s_g, finite_s_g_from_roots};
    use super::*;
    use crate::coherent::rho_to_poly;
    use crate::ed::{build_sector_block, eigendecompose_sector, Vectors};
    use crate::poly;
    use std::f64::consts::PI;

    fn fig1() -> ModelParams {
        ModelParams::new(1.0, 1.2, 0.2, 0.9, 34).unwrap()
    }

    #[test]
    fn empty_contour_gives_zero() {
        let m = fig1();
        // far from the zeros of P2 and from every branch point
        let spec = ContourSpec::circle(C64::new(0.5, 3.0), 0.4);
        let v = contour_integral_g0(-0.2, 5.0 / 34.0, &m, &spec).unwrap();
        assert!(v.norm() < 1e-9);
    }

    #[test]
    fn region_one_cut_is_imaginary_and_counts_roots() {
        let m = fig1();
        let x = 5.0 / 34.0;
        for l in [-0.2, -0.3] {
            let CutGeometry::RegionI { a } = cut_geometry(l, x, &m).unwrap() else {
                panic!("expected region I");
            };
            let pad = 0.2 * (a[1] - a[0]).min(a[0] - 1.0).min(a[2] - a[1]);
            let spec = ContourSpec::around_segment(a[0], a[1], pad);
            let v = contour_integral_g0(l, x, &m, &spec).unwrap();
            assert!(v.re.abs() < 1e-9, "{v}");
            let n = 29.0 * v.im.abs() / (2.0 * PI);
            assert!((n - level_index(l, x, &m).unwrap()).abs() < 1e-6);
            // the other branch flips the sign
            let w = contour_integral_g0(l, x, &m, &ContourSpec { branch: -1.0, ..spec }).unwrap();
            assert!((v + w).norm() < 1e-8);
        }
    }

    #[test]
    fn odd_enclosure_fails_to_close() {
        let m = fig1();
        let x = 5.0 / 34.0;
        let CutGeometry::RegionI { a } = cut_geometry(-0.2, x, &m).unwrap() else { panic!() };
        // encloses a₁ only
        let spec = ContourSpec::circle(C64::new(a[0], 0.0), 0.5 * (a[1] - a[0]));
        assert!(matches!(contour_integral_g0(-0.2, x, &m, &spec), Err(Error::Branch(_))));
    }

    #[test]
    fn residue_count_of_finite_s_resolvent() {
        let m = fig1();
        let q = 5;
        let block = build_sector_block(&m, q).unwrap();
        let pairs = eigendecompose_sector(&block, Vectors::Right).unwrap();
        let nq = 29.0;
        for pair in pairs.iter().step_by(7) {
            let psi = rho_to_poly(pair.right.as_ref().unwrap(), q, m.two_s).unwrap();
            let roots = poly::roots(&psi.coeffs).unwrap();
            let mut mods: Vec<f64> = roots.iter().map(|r| r.norm()).collect();
            mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // widest relative gap between consecutive moduli
            let (k, _) = mods
                .windows(2)
                .enumerate()
                .map(|(i, w)| (i, w[1] / w[0]))
                .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
            let radius = (mods[k] * mods[k + 1]).sqrt();
            let spec = ContourSpec::circle(C64::new(0.0, 0.0), radius);
            let v = contour_integral(|z| finite_s_g_from_roots(&roots, z), &spec).unwrap();
            let want = C64::new(0.0, 2.0 * PI * (k + 1) as f64 / nq);
            assert!((v - want).norm() < 1e-8, "{v} vs {want}");
            // the coefficient form agrees up to evaluation noise
            let w = contour_integral(|z| finite_s_g(&psi.coeffs, z), &ContourSpec { ..spec });
            if let Ok(w) = w {
                assert!((w - want).norm() < 1e-5);
            }
        }
    }
}
