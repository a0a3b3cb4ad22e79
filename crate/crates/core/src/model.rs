//! Model parameters, sector structure and the coefficient polynomials of the
//! differential form of the Liouvillian.
//!
//! Conventions used throughout the crate:
//!
//! * `H = -h S_z` and the Liouvillian acts as `L(ρ) = -i[H, ρ] + Σ D_W(ρ)`.
//! * The collective jump operators carry a `1/(2s)` normalization so that the
//!   spectrum scales extensively in `s`:
//!   `W± = sqrt(Γ(1∓p)/(4s)) S±` and `W0 = sqrt(Γ0/(2s)) S_z`.
//! * With this construction every eigenvalue of sector `q` has
//!   `Im λ = IM_SIGN · q · h`.

use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Sign of the sector-locked imaginary part: `Im λ = IM_SIGN · q · h`.
pub const IM_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub h: f64,
    pub gamma: f64,
    pub gamma0: f64,
    pub p: f64,
    pub two_s: u32,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            h: 1.0,
            gamma: 1.2,
            gamma0: 0.2,
            p: 0.9,
            two_s: 34,
        }
    }
}

impl ModelParams {
    pub fn new(h: f64, gamma: f64, gamma0: f64, p: f64, two_s: u32) -> Result<Self> {
        validate_params(ModelParams {
            h,
            gamma,
            gamma0,
            p,
            two_s,
        })
    }

    pub fn with_two_s(self, two_s: u32) -> Result<Self> {
        validate_params(ModelParams { two_s, ..self })
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        validate_params(ModelParams { p, ..self })
    }

    pub fn s(&self) -> f64 {
        0.5 * self.two_s as f64
    }

    /// Number of states `2s + 1` of the spin.
    pub fn n_levels(&self) -> usize {
        self.two_s as usize + 1
    }

    /// Ratio `(1-p)/(1+p)` of consecutive steady-state weights.
    pub fn z_p(&self) -> f64 {
        (1.0 - self.p) / (1.0 + self.p)
    }

    /// Rate of the raising channel, coefficient of `D[S+]`.
    pub fn rate_up(&self) -> f64 {
        self.gamma * (1.0 - self.p) / (2.0 * self.two_s as f64)
    }

    /// Rate of the lowering channel, coefficient of `D[S-]`.
    pub fn rate_down(&self) -> f64 {
        self.gamma * (1.0 + self.p) / (2.0 * self.two_s as f64)
    }

    /// Rate of the dephasing channel, coefficient of `D[S_z]`.
    pub fn rate_z(&self) -> f64 {
        self.gamma0 / self.two_s as f64
    }
}

fn invalid(field: &'static str, detail: String) -> Error {
    Error::InvalidParam { field, detail }
}

pub fn validate_params(raw: ModelParams) -> Result<ModelParams> {
    if !raw.h.is_finite() {
        return Err(invalid("h", format!("{} is not finite", raw.h)));
    }
    if !(raw.gamma.is_finite() && raw.gamma >= 0.0) {
        return Err(invalid("gamma", format!("{} must be finite and >= 0", raw.gamma)));
    }
    if !(raw.gamma0.is_finite() && raw.gamma0 >= 0.0) {
        return Err(invalid("gamma0", format!("{} must be finite and >= 0", raw.gamma0)));
    }
    if !(raw.p.is_finite() && raw.p.abs() <= 1.0) {
        return Err(invalid("p", format!("{} not in [-1, 1]", raw.p)));
    }
    if raw.two_s < 1 {
        return Err(invalid("two_s", "must be >= 1".into()));
    }
    Ok(raw)
}

/// A charge sector of the Liouvillian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub q: i32,
    pub dim: usize,
}

impl Sector {
    pub fn new(q: i32, two_s: u32) -> Result<Self> {
        if q.unsigned_abs() > two_s {
            return Err(Error::Index(format!("|q| = {} exceeds 2s = {}", q.abs(), two_s)));
        }
        Ok(Sector {
            q,
            dim: (two_s - q.unsigned_abs()) as usize + 1,
        })
    }

    /// Magnetic quantum numbers `(m1, m2)` of the basis element `|m1><m2|` at
    /// chain coordinate `kappa`.
    pub fn basis_m(&self, kappa: usize, two_s: u32) -> (f64, f64) {
        let s = 0.5 * two_s as f64;
        let k = kappa as f64;
        let aq = self.q.abs() as f64;
        if self.q >= 0 {
            (aq + k - s, k - s)
        } else {
            (k - s, aq + k - s)
        }
    }

    /// All sectors `q = -2s..=2s` in ascending order.
    pub fn all(two_s: u32) -> Vec<Sector> {
        let t = two_s as i32;
        (-t..=t).map(|q| Sector::new(q, two_s).unwrap()).collect()
    }
}

fn ln_fact(n: u32) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Weight `c_{q,κ}` of the coherent-operator basis, evaluated in log space.
pub fn coeff_c(q: u32, kappa: u32, two_s: u32) -> Result<f64> {
    if q > two_s || kappa > two_s - q {
        return Err(Error::Index(format!(
            "kappa = {kappa} outside 0..={} for q = {q}, two_s = {two_s}",
            two_s.saturating_sub(q)
        )));
    }
    let l = ln_fact(q + kappa) + ln_fact(two_s - kappa)
        - ln_fact(kappa)
        - ln_fact(two_s - q - kappa)
        + ln_fact(two_s - q)
        - ln_fact(two_s)
        - ln_fact(q);
    Ok((0.5 * l).exp())
}

/// All weights `c_{q,κ}` for `κ = 0..=2s-q`.
pub fn coeff_c_vec(q: u32, two_s: u32) -> Result<Vec<f64>> {
    if q > two_s {
        return Err(Error::Index(format!("q = {q} exceeds two_s = {two_s}")));
    }
    (0..=two_s - q).map(|k| coeff_c(q, k, two_s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolyKind {
    P00,
    P01,
    P10,
    P11,
    P2,
}

impl PolyKind {
    pub const ALL: [PolyKind; 5] = [
        PolyKind::P00,
        PolyKind::P01,
        PolyKind::P10,
        PolyKind::P11,
        PolyKind::P2,
    ];
}

/// Coefficients (ascending powers of `z̄`) of one of the five polynomials of
/// the differential Liouvillian
/// `s P00 + P01 + (P10 + P11/s) ∂ + (P2/s) ∂²` at `x = q/(2s)`.
///
/// The field term of `P00` is `+2ih x`, matching `IM_SIGN`.
pub fn poly_p_coeffs(which: PolyKind, x: f64, params: &ModelParams) -> Vec<C64> {
    let g = params.gamma;
    let g0 = params.gamma0;
    let p = params.p;
    let h = params.h;
    let r = |v: f64| C64::new(v, 0.0);
    match which {
        PolyKind::P00 => vec![
            C64::new(x * (g * (x - 1.0) - g0 * x), IM_SIGN * 2.0 * h * x),
            r(x * g * (x - 1.0) * (p - 1.0)),
        ],
        PolyKind::P01 => vec![
            r(0.5 * g * (p * (1.0 - x) - 1.0)),
            r(0.5 * g * (1.0 - x) * (1.0 - p)),
        ],
        PolyKind::P10 => vec![
            r(0.5 * g * (p + 1.0)),
            r(g * (x - 1.0)),
            r(0.5 * g * (p - 1.0) * (2.0 * x - 1.0)),
        ],
        PolyKind::P11 => vec![r(0.0), r(-0.5 * g * (p - 1.0)), r(0.5 * g * (p - 1.0))],
        PolyKind::P2 => vec![
            r(0.0),
            r(-0.25 * g * (1.0 + p)),
            r(0.5 * g),
            r(-0.25 * g * (1.0 - p)),
        ],
    }
}

pub fn poly_p(which: PolyKind, zbar: C64, x: f64, params: &ModelParams) -> C64 {
    crate::poly::eval(&poly_p_coeffs(which, x, params), zbar)
}
