//! Polynomial representation of sector operators and the Liouvillian as a
//! second-order differential operator on those polynomials.
//!
//! A sector-`q` operator with chain amplitudes `v_κ` is represented by
//! `Ψ(z̄) = Σ c_{q,κ} v_κ z̄^κ`. On these polynomials the Liouvillian acts as
//! `s P00 + P01 + (P10 + P11/s) ∂ + (P2/s) ∂²` with `∂ = d/dz̄`, and the
//! matrix of that action is `C · L_q · C⁻¹` with `C = diag(c_{q,κ})`.

use crate::error::{Error, Result};
use crate::model::{coeff_c_vec, poly_p_coeffs, ModelParams, PolyKind, Sector};
use crate::poly;
use crate::C64;
use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPolynomial {
    pub q: i32,
    pub two_s: u32,
    /// Coefficient of `z̄^κ` at index `κ`.
    pub coeffs: Vec<C64>,
}

impl CoeffPolynomial {
    pub fn zero(q: i32, two_s: u32) -> Result<Self> {
        let dim = Sector::new(q, two_s)?.dim;
        Ok(CoeffPolynomial {
            q,
            two_s,
            coeffs: vec![C64::new(0.0, 0.0); dim],
        })
    }

    pub fn eval(&self, z: C64) -> C64 {
        poly::eval(&self.coeffs, z)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn weights(q: i32, two_s: u32) -> Result<Vec<f64>> {
    Sector::new(q, two_s)?;
    coeff_c_vec(q.unsigned_abs(), two_s)
}

pub fn rho_to_poly(sector_vec: &[C64], q: i32, two_s: u32) -> Result<CoeffPolynomial> {
    let c = weights(q, two_s)?;
    if sector_vec.len() != c.len() {
        return Err(Error::Dimension {
            expected: c.len(),
            got: sector_vec.len(),
        });
    }
    Ok(CoeffPolynomial {
        q,
        two_s,
        coeffs: sector_vec.iter().zip(&c).map(|(v, w)| v * *w).collect(),
    })
}

pub fn poly_to_rho(p: &CoeffPolynomial) -> Result<Vec<C64>> {
    let c = weights(p.q, p.two_s)?;
    if p.coeffs.len() != c.len() {
        return Err(Error::Dimension {
            expected: c.len(),
            got: p.coeffs.len(),
        });
    }
    Ok(p.coeffs.iter().zip(&c).map(|(v, w)| v / *w).collect())
}

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    pub dim: usize,
    pub kl: usize,
    pub ku: usize,
    /// Row-major band storage: entry `(i, j)` at `i * (kl + ku + 1) + (j + kl - i)`.
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(dim: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            dim,
            kl,
            ku,
            data: vec![C64::new(0.0, 0.0); dim * (kl + ku + 1)],
        }
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.ku {
            None
        } else {
            Some(i * (self.kl + self.ku + 1) + (j + self.kl - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map(|k| self.data[k]).unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) -> Result<()> {
        let k = self
            .slot(i, j)
            .ok_or_else(|| Error::Index(format!("({i}, {j}) outside the band")))?;
        self.data[k] = v;
        Ok(())
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.dim - 1);
                (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }
}

/// Coefficients of `𝔏Ψ` without truncation (degree up to `2s - q + 1`).
fn apply_untruncated(params: &ModelParams, q: i32, coeffs: &[C64]) -> Vec<C64> {
    let aq = q.unsigned_abs();
    let x = aq as f64 / params.two_s as f64;
    let s = params.s();
    let pc = |k| poly_p_coeffs(k, x, params);
    let c0 = poly::add(&poly::scale(&pc(PolyKind::P00), C64::new(s, 0.0)), &pc(PolyKind::P01));
    let c1 = poly::add(&pc(PolyKind::P10), &poly::scale(&pc(PolyKind::P11), C64::new(1.0 / s, 0.0)));
    let c2 = poly::scale(&pc(PolyKind::P2), C64::new(1.0 / s, 0.0));
    let input: Vec<C64> = if q < 0 {
        coeffs.iter().map(|c| c.conj()).collect()
    } else {
        coeffs.to_vec()
    };
    let d1 = poly::deriv(&input);
    let d2 = poly::deriv(&d1);
    let mut out = poly::add(
        &poly::add(&poly::mul(&c0, &input), &poly::mul(&c1, &d1)),
        &poly::mul(&c2, &d2),
    );
    out.resize(coeffs.len() + 1, C64::new(0.0, 0.0));
    if q < 0 {
        for c in out.iter_mut() {
            *c = c.conj();
        }
    }
    out
}

/// Coefficient of `z̄^{2s-q+1}` in `𝔏Ψ`; it cancels exactly for the true
/// operator.
pub fn degree_overflow(params: &ModelParams, poly: &CoeffPolynomial) -> C64 {
    let full = apply_untruncated(params, poly.q, &poly.coeffs);
    full[poly.coeffs.len()]
}

/// Matrix of `𝔏^{(q)}` on coefficient space. The action on a monomial only
/// reaches its neighbours, so the band is tridiagonal.
pub fn build_diffop_matrix(params: &ModelParams, q: i32) -> Result<BandMatrix> {
    let dim = Sector::new(q, params.two_s)?.dim;
    let mut m = BandMatrix::zeros(dim, 1, 1);
    let mut e = vec![C64::new(0.0, 0.0); dim];
    for k in 0..dim {
        e[k] = C64::new(1.0, 0.0);
        let col = apply_untruncated(params, q, &e);
        e[k] = C64::new(0.0, 0.0);
        for (i, &v) in col.iter().enumerate().take(dim) {
            if v != C64::new(0.0, 0.0) {
                m.set(i, k, v)?;
            }
        }
    }
    Ok(m)
}

pub fn apply_diffop(params: &ModelParams, poly: &CoeffPolynomial) -> Result<CoeffPolynomial> {
    let dim = Sector::new(poly.q, params.two_s)?.dim;
    if poly.coeffs.len() != dim || poly.two_s != params.two_s {
        return Err(Error::Dimension {
            expected: dim,
            got: poly.coeffs.len(),
        });
    }
    let mut out = apply_untruncated(params, poly.q, &poly.coeffs);
    out.truncate(dim);
    Ok(CoeffPolynomial {
        q: poly.q,
        two_s: poly.two_s,
        coeffs: out,
    })
}

/// `Ψ(1)`, the trace of a `q = 0` operator.
pub fn trace_functional(poly: &CoeffPolynomial) -> Result<C64> {
    if poly.q != 0 {
        return Err(Error::Domain(format!("trace is defined on q = 0 only, got q = {}", poly.q)));
    }
    Ok(poly.coeffs.iter().sum())
}
