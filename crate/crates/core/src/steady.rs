//! Closed-form steady state and the exactly solvable unpolarized (`p = 0`)
//! spectrum.

use crate::coherent::CoeffPolynomial;
use crate::ed::{build_sector_block, eigendecompose_sector, Vectors};
use crate::error::{Error, Result};
use crate::model::{ModelParams, IM_SIGN};
use crate::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Below this `|p|` the closed forms switch to their Taylor expansions.
pub const SMALL_P: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub z_p: f64,
    /// Population of `|κ - s><κ - s|`, `κ = 0..=2s`.
    pub weights: Vec<f64>,
    pub mean_sz: f64,
    pub entropy: f64,
}

/// `β = -ln z_p = ln((1+p)/(1-p))`.
fn beta(p: f64) -> f64 {
    2.0 * p.atanh()
}

/// Geometric weights `w_κ ∝ z_p^κ`, normalized by factoring out the largest term.
pub fn weights(params: &ModelParams) -> Vec<f64> {
    let n = params.n_levels();
    let p = params.p;
    if p.abs() >= 1.0 {
        // fully polarized bath: all weight at one end
        let mut v = vec![0.0; n];
        v[if p > 0.0 { 0 } else { n - 1 }] = 1.0;
        return v;
    }
    let b = beta(p);
    let top = if b >= 0.0 { 0.0 } else { -b * (n - 1) as f64 };
    let raw: Vec<f64> = (0..n).map(|k| (-b * k as f64 - top).exp()).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / z).collect()
}

/// `⟨S_z⟩ = (2s+1)/(1 - z_p^{-(2s+1)}) - 1/(1 - z_p^{-1}) - s`, evaluated with
/// `z_p^{-1} = e^β` through `expm1` so that it stays accurate near `z_p = 1`.
pub fn mean_sz(params: &ModelParams) -> f64 {
    let p = params.p;
    let s = params.s();
    let n = params.n_levels() as f64;
    if p < 0.0 {
        return -mean_sz(&ModelParams { p: -p, ..*params });
    }
    if p >= 1.0 {
        return -s;
    }
    let b = beta(p);
    if p < SMALL_P {
        // mean of a slightly tilted uniform distribution on 0..2s
        let var = (n * n - 1.0) / 12.0;
        return -b * var + b.powi(3) * (n.powi(4) - 1.0) / 720.0;
    }
    let first = -n / (n * b).exp_m1();
    let second = 1.0 / b.exp_m1();
    first + second - s
}

/// Shannon entropy of the steady populations in closed form,
/// `S = ln Z + β ⟨κ⟩` with `Z = Σ z_p^κ`.
pub fn entropy(params: &ModelParams) -> f64 {
    let p = params.p.abs();
    let n = params.n_levels() as f64;
    if p >= 1.0 {
        return 0.0;
    }
    let b = beta(p);
    if p < SMALL_P {
        return n.ln() - b * b * (n * n - 1.0) / 24.0;
    }
    let ln_z = ((-n * b).exp_m1() / (-b).exp_m1()).ln();
    let mean_k = mean_sz(&ModelParams { p, ..*params }) + params.s();
    ln_z + b * mean_k
}

pub fn steady_state(params: &ModelParams) -> SteadyState {
    SteadyState {
        z_p: params.z_p(),
        weights: weights(params),
        mean_sz: mean_sz(params),
        entropy: entropy(params),
    }
}

/// Populations of the zero mode of the exact `q = 0` block, normalized to unit
/// trace.
pub fn ed_steady_weights(params: &ModelParams) -> Result<Vec<f64>> {
    let block = build_sector_block(params, 0)?;
    let pairs = eigendecompose_sector(&block, Vectors::Right)?;
    let zero = pairs
        .iter()
        .min_by(|a, b| a.lambda.norm().partial_cmp(&b.lambda.norm()).unwrap())
        .ok_or(Error::SteadyStateNotFound)?;
    if zero.lambda.norm() >= crate::ed::ZERO_MODE_TOL {
        return Err(Error::SteadyStateNotFound);
    }
    let v = zero.right.as_ref().expect("vectors requested");
    let tr: C64 = v.iter().sum();
    Ok(v.iter().map(|x| (x / tr).re).collect())
}

/// `⟨S_z⟩` and entropy computed directly from a set of populations.
pub fn observables_from_weights(w: &[f64]) -> (f64, f64) {
    let s = 0.5 * (w.len() - 1) as f64;
    let mean = w.iter().enumerate().map(|(k, x)| (k as f64 - s) * x).sum();
    let ent = -w.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>();
    (mean, ent)
}

fn require_p0(params: &ModelParams) -> Result<()> {
    if params.p != 0.0 {
        return Err(Error::Domain(format!("exact solution requires p = 0, got p = {}", params.p)));
    }
    Ok(())
}

/// Exact eigenvalues at `p = 0` for `q ∈ {-1, 0, 1}`. The imaginary part
/// follows the construction sign, `Im λ = IM_SIGN · q · h`.
pub fn p0_eigenvalue(n: u32, q: i32, params: &ModelParams) -> Result<C64> {
    require_p0(params)?;
    if q.abs() > 1 {
        return Err(Error::Domain(format!("closed form covers |q| <= 1, got q = {q}")));
    }
    if n > params.two_s - q.unsigned_abs() {
        return Err(Error::Index(format!("n = {n} exceeds 2s - |q| = {}", params.two_s - q.unsigned_abs())));
    }
    let s4 = 2.0 * params.two_s as f64;
    let nf = n as f64;
    let g = params.gamma;
    Ok(if q == 0 {
        C64::new(-g * nf * (nf + 1.0) / s4 + 0.0, 0.0)
    } else {
        C64::new(
            -(g + params.gamma0 + g * nf * (nf + 3.0)) / s4,
            IM_SIGN * q as f64 * params.h,
        )
    })
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Population polynomial of the `n`-th `q = 0` mode at `p = 0`:
/// `(z̄-1)^n ₂F₁(n+1, n-2s; 2n+2; 1-z̄)`. The series terminates and is expanded
/// in exact rational arithmetic, so no cancellation occurs when changing from
/// powers of `1-z̄` to powers of `z̄`.
pub fn p0_eigenpoly(n: u32, params: &ModelParams) -> Result<CoeffPolynomial> {
    require_p0(params)?;
    let two_s = params.two_s;
    if n > two_s {
        return Err(Error::Index(format!("n = {n} exceeds 2s = {two_s}")));
    }
    let big = |v: i64| BigRational::from_integer(BigInt::from(v));
    let m = two_s - n;
    // coefficients in y = 1 - z̄
    let mut in_y = vec![BigRational::zero(); two_s as usize + 1];
    let mut term = BigRational::one();
    let sign_n = if n.is_multiple_of(2) { big(1) } else { big(-1) };
    for k in 0..=m {
        in_y[(n + k) as usize] = &sign_n * &term;
        let kk = k as i64;
        term = term * big(n as i64 + 1 + kk) * big(kk - m as i64)
            / (big(2 * n as i64 + 2 + kk) * big(kk + 1));
    }
    let mut in_z = vec![BigRational::zero(); two_s as usize + 1];
    for (j, cy) in in_y.iter().enumerate() {
        if cy.is_zero() {
            continue;
        }
        for i in 0..=j {
            let b = BigRational::from_integer(binomial(j as u32, i as u32));
            let t = cy * b;
            if i % 2 == 0 {
                in_z[i] += t;
            } else {
                in_z[i] -= t;
            }
        }
    }
    Ok(CoeffPolynomial {
        q: 0,
        two_s,
        coeffs: in_z
            .iter()
            .map(|c| C64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationTimes {
    /// Population decay time, infinite when `Γ = 0`.
    pub t1: f64,
    /// Coherence decay time, infinite when `Γ + Γ0 = 0`.
    pub t2: f64,
}

pub fn t1_t2(params: &ModelParams) -> Result<RelaxationTimes> {
    require_p0(params)?;
    let two_s = params.two_s as f64;
    let t1 = if params.gamma > 0.0 { two_s / params.gamma } else { f64::INFINITY };
    let gt = params.gamma + params.gamma0;
    let t2 = if gt > 0.0 { 2.0 * two_s / gt } else { f64::INFINITY };
    Ok(RelaxationTimes { t1, t2 })
}
