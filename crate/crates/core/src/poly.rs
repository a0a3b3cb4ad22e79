//! Dense complex polynomials in ascending-coefficient form.

use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;

pub fn eval(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub fn eval_real(c: &[f64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// `(p(z), p'(z), p''(z))` by a single Horner sweep.
pub fn eval_d2(c: &[C64], z: C64) -> (C64, C64, C64) {
    let zero = C64::new(0.0, 0.0);
    let (mut p, mut d1, mut d2) = (zero, zero, zero);
    for &a in c.iter().rev() {
        d2 = d2 * z + 2.0 * d1;
        d1 = d1 * z + p;
        p = p * z + a;
    }
    (p, d1, d2)
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&x| x * s).collect()
}

pub fn deriv(a: &[C64]) -> Vec<C64> {
    a.iter().enumerate().skip(1).map(|(k, &x)| x * k as f64).collect()
}

/// Monic polynomial with the given roots.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        c = mul(&c, &[-r, C64::new(1.0, 0.0)]);
    }
    c
}

fn effective_degree(c: &[C64]) -> usize {
    let mut d = c.len().saturating_sub(1);
    while d > 0 && c[d].norm() < f64::MIN_POSITIVE {
        d -= 1;
    }
    d
}

/// Roots of a polynomial: companion-matrix eigenvalues refined by
/// simultaneous Aberth iterations on the original coefficients.
///
/// Vanishing top coefficients lower the degree, so the result may have fewer
/// than `len - 1` roots.
pub fn roots(c: &[C64]) -> Result<Vec<C64>> {
    let deg = effective_degree(c);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let c = &c[..=deg];
    // rescale z = ρ w so that the scaled coefficients are balanced
    let rho = {
        let a0 = c[0].norm();
        let an = c[deg].norm();
        if a0 > 0.0 {
            (a0 / an).powf(1.0 / deg as f64)
        } else {
            1.0
        }
    };
    let scaled: Vec<C64> = c
        .iter()
        .enumerate()
        .map(|(k, &a)| a * rho.powi(k as i32))
        .collect();
    let lead = scaled[deg];
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -scaled[i] / lead;
    }
    let ev = comp
        .eigenvalues()
        .ok_or_else(|| Error::NoConvergence(format!("companion eigenvalues, degree {deg}")))?;
    let mut w: Vec<C64> = ev.iter().copied().collect();
    aberth(&scaled, &mut w, 80);
    let mut out: Vec<C64> = w.into_iter().map(|r| r * rho).collect();
    sort_roots(&mut out);
    Ok(out)
}

fn aberth(c: &[C64], z: &mut [C64], iters: usize) {
    let dc = deriv(c);
    let n = z.len();
    for _ in 0..iters {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let p = eval(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / eval(&dc, z[i]);
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += 1.0 / d;
                    }
                }
            }
            let step = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
}

/// Deterministic order: ascending real part, then imaginary part.
pub fn sort_roots(r: &mut [C64]) {
    r.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Newton polish of a single root on real coefficients.
pub fn polish_real(c: &[f64], mut z: C64, iters: usize) -> C64 {
    let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect();
    for _ in 0..iters {
        let p = eval_real(c, z);
        let dp = eval_real(&d, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        let next = z - step;
        if eval_real(c, next).norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}
