//! Exact diagonalization: the dense Lindblad superoperator (small-`s` oracle)
//! and the tridiagonal sector blocks used for production runs.

use crate::error::{Error, Result};
use crate::model::{ModelParams, Sector};
use crate::C64;
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest `2s` accepted by the dense superoperator builder.
pub const DENSE_MAX_TWO_S: u32 = 20;

/// Threshold on `|λ|` identifying the steady state.
pub const ZERO_MODE_TOL: f64 = 1e-10;

fn a_plus(s: f64, m: f64) -> f64 {
    ((s - m) * (s + m + 1.0)).max(0.0).sqrt()
}

fn a_minus(s: f64, m: f64) -> f64 {
    ((s + m) * (s - m + 1.0)).max(0.0).sqrt()
}

/// Liouvillian restricted to one charge sector.
///
/// `sup[k]` is the amplitude carried from `κ = k` to `κ = k+1` (the `S+ ρ S-`
/// hopping) and `sub[k]` the amplitude carried from `κ = k+1` to `κ = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock {
    pub q: i32,
    pub dim: usize,
    pub diag: Vec<C64>,
    pub sup: Vec<C64>,
    pub sub: Vec<C64>,
}

impl SectorBlock {
    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for k in 0..self.dim {
            m[(k, k)] = self.diag[k];
        }
        for k in 0..self.dim.saturating_sub(1) {
            m[(k + 1, k)] = self.sup[k];
            m[(k, k + 1)] = self.sub[k];
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out: Vec<C64> = (0..n).map(|k| self.diag[k] * v[k]).collect();
        for k in 0..n.saturating_sub(1) {
            out[k + 1] += self.sup[k] * v[k];
            out[k] += self.sub[k] * v[k + 1];
        }
        out
    }

    pub fn transpose(&self) -> SectorBlock {
        SectorBlock {
            q: self.q,
            dim: self.dim,
            diag: self.diag.clone(),
            sup: self.sub.clone(),
            sub: self.sup.clone(),
        }
    }

    fn norm_inf(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..self.dim {
            let mut r = self.diag[k].norm();
            if k > 0 {
                r += self.sup[k - 1].norm();
            }
            if k + 1 < self.dim {
                r += self.sub[k].norm();
            }
            m = m.max(r);
        }
        m
    }
}

pub fn build_sector_block(params: &ModelParams, q: i32) -> Result<SectorBlock> {
    let sector = Sector::new(q, params.two_s)?;
    let s = params.s();
    let (gu, gd, gz) = (params.rate_up(), params.rate_down(), params.rate_z());
    let aq = q.abs() as f64;
    let dim = sector.dim;
    let m_of = |k: usize| (aq + k as f64 - s, k as f64 - s);
    let mut diag = Vec::with_capacity(dim);
    for k in 0..dim {
        let (m1, m2) = m_of(k);
        let re = -0.5 * gz * aq * aq
            - 0.5 * gu * (a_plus(s, m1).powi(2) + a_plus(s, m2).powi(2))
            - 0.5 * gd * (a_minus(s, m1).powi(2) + a_minus(s, m2).powi(2));
        diag.push(C64::new(re, crate::model::IM_SIGN * params.h * aq));
    }
    let mut sup = Vec::with_capacity(dim.saturating_sub(1));
    let mut sub = Vec::with_capacity(dim.saturating_sub(1));
    for k in 0..dim.saturating_sub(1) {
        let (m1, m2) = m_of(k);
        sup.push(C64::new(gu * a_plus(s, m1) * a_plus(s, m2), 0.0));
        let (n1, n2) = m_of(k + 1);
        sub.push(C64::new(gd * a_minus(s, n1) * a_minus(s, n2), 0.0));
    }
    let mut b = SectorBlock {
        q,
        dim,
        diag,
        sup,
        sub,
    };
    if q < 0 {
        for v in b.diag.iter_mut().chain(b.sup.iter_mut()).chain(b.sub.iter_mut()) {
            *v = v.conj();
        }
    }
    Ok(b)
}

/// Flat index of `|m_i><m_j|` in the vectorized density matrix, with
/// `m_i = i - s`.
pub fn dense_index(two_s: u32, i: usize, j: usize) -> usize {
    i * (two_s as usize + 1) + j
}

fn spin_matrices(two_s: u32) -> (DMatrix<C64>, DMatrix<C64>, DMatrix<C64>) {
    let n = two_s as usize + 1;
    let s = 0.5 * two_s as f64;
    let mut sz = DMatrix::<C64>::zeros(n, n);
    let mut sp = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        let m = i as f64 - s;
        sz[(i, i)] = C64::new(m, 0.0);
        if i + 1 < n {
            sp[(i + 1, i)] = C64::new(a_plus(s, m), 0.0);
        }
    }
    let sm = sp.transpose();
    (sz, sp, sm)
}

/// Dense matrix of the Liouvillian on vectorized density matrices, built
/// directly from the Lindblad form.
pub fn build_dense_superoperator(params: &ModelParams) -> Result<DMatrix<C64>> {
    if params.two_s > DENSE_MAX_TWO_S {
        return Err(Error::TooLarge {
            two_s: params.two_s,
            max: DENSE_MAX_TWO_S,
        });
    }
    let n = params.n_levels();
    let (sz, sp, sm) = spin_matrices(params.two_s);
    let ham = &sz * C64::new(-params.h, 0.0);
    let jumps = [
        (params.rate_up(), sp.clone()),
        (params.rate_down(), sm.clone()),
        (params.rate_z(), sz.clone()),
    ];
    let mi = C64::new(0.0, -1.0);
    let mut out = DMatrix::<C64>::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut rho = DMatrix::<C64>::zeros(n, n);
            rho[(i, j)] = C64::new(1.0, 0.0);
            let mut l = (&ham * &rho - &rho * &ham) * mi;
            for (rate, w) in &jumps {
                if *rate == 0.0 {
                    continue;
                }
                let wd = w.adjoint();
                let wdw = &wd * w;
                let d = w * &rho * &wd - (&wdw * &rho + &rho * &wdw) * C64::new(0.5, 0.0);
                l += d * C64::new(*rate, 0.0);
            }
            let col = dense_index(params.two_s, i, j);
            for a in 0..n {
                for b in 0..n {
                    out[(dense_index(params.two_s, a, b), col)] = l[(a, b)];
                }
            }
        }
    }
    Ok(out)
}

/// Flat dense indices of the sector basis, ordered by `κ`.
pub fn sector_dense_indices(two_s: u32, q: i32) -> Result<Vec<usize>> {
    let sector = Sector::new(q, two_s)?;
    let aq = q.unsigned_abs() as usize;
    Ok((0..sector.dim)
        .map(|k| {
            if q >= 0 {
                dense_index(two_s, k + aq, k)
            } else {
                dense_index(two_s, k, k + aq)
            }
        })
        .collect())
}

pub fn sector_submatrix(dense: &DMatrix<C64>, two_s: u32, q: i32) -> Result<DMatrix<C64>> {
    let idx = sector_dense_indices(two_s, q)?;
    let d = idx.len();
    Ok(DMatrix::from_fn(d, d, |a, b| dense[(idx[a], idx[b])]))
}

/// Diagonal similarity by powers of two equalizing row and column norms
/// (Parlett-Reinsch). Exact in floating point; it only changes rounding
/// behaviour of the eigensolver that follows.
pub fn balance(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a general dense complex matrix (balanced, then Schur).
pub fn dense_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let mut b = m.clone();
    balance(&mut b);
    b.eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::NoConvergence(format!("dense eigenvalues of {}x{}", m.nrows(), m.ncols())))
}

/// Symmetric Hausdorff distance between two point sets in the complex plane.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Vectors {
    #[default]
    None,
    Right,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: C64,
    pub right: Option<Vec<C64>>,
    pub left: Option<Vec<C64>>,
}

/// `T = D^{-1} J D` with `J` real symmetric tridiagonal, when the block has
/// this structure. Returns `(J diagonal, J off-diagonal, ln D, shared Im)`.
fn symmetrize(b: &SectorBlock) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
    let scale = b.norm_inf().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;
    let im0 = b.diag[0].im;
    if b.diag.iter().any(|d| (d.im - im0).abs() > tol) {
        return None;
    }
    if b.sup.iter().chain(b.sub.iter()).any(|v| v.im.abs() > tol) {
        return None;
    }
    let n = b.dim;
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut ln_d = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let (bk, ck) = (b.sup[k].re, b.sub[k].re);
        if bk * ck < 0.0 {
            return None;
        }
        off.push((bk * ck).sqrt());
        ln_d[k + 1] = if bk > 0.0 && ck > 0.0 {
            ln_d[k] + 0.5 * (ck.ln() - bk.ln())
        } else {
            // decoupled link: restart the scaling
            0.0
        };
    }
    Some((b.diag.iter().map(|d| d.re).collect(), off, ln_d, im0))
}

/// Tridiagonal solve of `(T - σ) y = r` with partial pivoting. Zero pivots are
/// replaced by a tiny multiple of the matrix scale, as required for inverse
/// iteration at an exact eigenvalue.
fn tridiag_shift_solve(b: &SectorBlock, sigma: C64, rhs: &[C64]) -> Vec<C64> {
    let n = b.dim;
    let tiny = C64::new(f64::EPSILON * b.norm_inf().max(1e-300), 0.0);
    let mut d: Vec<C64> = b.diag.iter().map(|&x| x - sigma).collect();
    if n == 1 {
        let p = if d[0].norm() == 0.0 { tiny } else { d[0] };
        return vec![rhs[0] / p];
    }
    let mut dl: Vec<C64> = b.sup.clone();
    let mut du: Vec<C64> = b.sub.clone();
    let mut du2 = vec![C64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].norm() >= dl[i].norm() {
            if d[i].norm() == 0.0 {
                d[i] = tiny;
            }
            let mult = dl[i] / d[i];
            dl[i] = mult;
            d[i + 1] -= mult * du[i];
        } else {
            let mult = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = mult;
            let temp = d[i + 1];
            d[i + 1] = du[i] - mult * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -mult * du[i + 1];
            }
            du[i] = temp;
            swapped[i] = true;
        }
    }
    if d[n - 1].norm() == 0.0 {
        d[n - 1] = tiny;
    }
    let mut y = rhs.to_vec();
    for i in 0..n - 1 {
        if swapped[i] {
            let t = y[i];
            y[i] = y[i + 1];
            y[i + 1] = t - dl[i] * y[i];
        } else {
            let t = y[i];
            y[i + 1] -= dl[i] * t;
        }
    }
    y[n - 1] /= d[n - 1];
    y[n - 2] = (y[n - 2] - du[n - 2] * y[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        y[i] = (y[i] - du[i] * y[i + 1] - du2[i] * y[i + 2]) / d[i];
    }
    y
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit Euclidean norm with the first non-negligible component real positive.
pub fn normalize_phase(v: &mut [C64]) {
    let n = norm2(v);
    if n == 0.0 {
        return;
    }
    let vmax = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let lead = v
        .iter()
        .find(|x| x.norm() > 1e-12 * vmax)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    for x in v.iter_mut() {
        *x = *x * phase / n;
    }
}

fn residual(b: &SectorBlock, lambda: C64, v: &[C64]) -> f64 {
    let bv = b.apply(v);
    let r: Vec<C64> = bv.iter().zip(v).map(|(a, x)| a - lambda * x).collect();
    norm2(&r) / norm2(v)
}

fn inverse_iteration(b: &SectorBlock, lambda: C64, start: Vec<C64>) -> Vec<C64> {
    let mut v = start;
    for _ in 0..3 {
        let y = tridiag_shift_solve(b, lambda, &v);
        let n = norm2(&y);
        if !n.is_finite() || n == 0.0 {
            break;
        }
        v = y.into_iter().map(|x| x / n).collect();
        if residual(b, lambda, &v) < 1e-14 * b.norm_inf().max(1.0) {
            break;
        }
    }
    v
}

/// Starting vector `D^{∓1} u` from a symmetric-form eigenvector, rescaled in
/// log space so large similarity factors do not overflow.
fn unsymmetrize(u: &[f64], ln_d: &[f64], sign: f64) -> Vec<C64> {
    let logs: Vec<f64> = u
        .iter()
        .zip(ln_d)
        .map(|(x, l)| if *x == 0.0 { f64::NEG_INFINITY } else { x.abs().ln() + sign * l })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    u.iter()
        .zip(&logs)
        .map(|(x, l)| C64::new(x.signum() * (l - top).exp(), 0.0))
        .collect()
}

/// All eigenpairs of a sector block, sorted by real part descending.
///
/// Blocks with real hoppings of equal sign and a constant imaginary diagonal
/// (every block built by [`build_sector_block`]) are diagonalized through
/// their real symmetric form, which is exact up to rounding regardless of how
/// non-normal the block is. Other blocks go through a dense complex Schur
/// decomposition. Eigenvectors come from inverse iteration on the block.
pub fn eigendecompose_sector(block: &SectorBlock, want: Vectors) -> Result<Vec<EigenPair>> {
    let n = block.dim;
    let fail = |detail: String| Error::Eigen {
        q: block.q,
        dim: n,
        detail,
    };
    if n == 0 {
        return Err(fail("empty block".into()));
    }
    let mut pairs: Vec<(C64, Option<Vec<C64>>, Option<Vec<C64>>)> = Vec::with_capacity(n);
    match symmetrize(block) {
        Some((jd, joff, ln_d, im0)) => {
            let j = DMatrix::<f64>::from_fn(n, n, |a, b| {
                if a == b {
                    jd[a]
                } else if a + 1 == b {
                    joff[a]
                } else if b + 1 == a {
                    joff[b]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::try_new(j, f64::EPSILON, 0)
                .ok_or_else(|| fail("symmetric eigensolver did not converge".into()))?;
            for k in 0..n {
                let lambda = C64::new(eig.eigenvalues[k], im0);
                let (mut r, mut l) = (None, None);
                if want != Vectors::None {
                    let u: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
                    r = Some(inverse_iteration(block, lambda, unsymmetrize(&u, &ln_d, -1.0)));
                    if want == Vectors::Both {
                        l = Some(inverse_iteration(
                            &block.transpose(),
                            lambda,
                            unsymmetrize(&u, &ln_d, 1.0),
                        ));
                    }
                }
                pairs.push((lambda, r, l));
            }
        }
        None => {
            let ev = dense_eigenvalues(&block.to_dense()).map_err(|e| fail(e.to_string()))?;
            for (k, &lambda) in ev.iter().enumerate() {
                let start: Vec<C64> = (0..n)
                    .map(|i| C64::new(1.0 + 0.1 * ((i * 7 + k) % 5) as f64, 0.0))
                    .collect();
                let (mut r, mut l) = (None, None);
                if want != Vectors::None {
                    r = Some(inverse_iteration(block, lambda, start.clone()));
                    if want == Vectors::Both {
                        l = Some(inverse_iteration(&block.transpose(), lambda, start));
                    }
                }
                pairs.push((lambda, r, l));
            }
        }
    }
    let tol = 1e-9 * block.norm_inf().max(1.0);
    let mut out = Vec::with_capacity(n);
    for (lambda, r, l) in pairs {
        let r = match r {
            Some(mut v) => {
                let res = residual(block, lambda, &v);
                if !(res < tol) {
                    return Err(fail(format!("right eigenvector residual {res:e} at λ = {lambda}")));
                }
                normalize_phase(&mut v);
                Some(v)
            }
            None => None,
        };
        let l = match l {
            Some(mut v) => {
                let res = residual(&block.transpose(), lambda, &v);
                if !(res < tol) {
                    return Err(fail(format!("left eigenvector residual {res:e} at λ = {lambda}")));
                }
                normalize_phase(&mut v);
                Some(v)
            }
            None => None,
        };
        out.push(EigenPair {
            lambda,
            right: r,
            left: l,
        });
    }
    out.sort_by(|a, b| cmp_desc(a.lambda, b.lambda));
    Ok(out)
}

fn cmp_desc(a: C64, b: C64) -> std::cmp::Ordering {
    b.re.partial_cmp(&a.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenRecord {
    pub q: i32,
    pub lambda: C64,
    pub right: Option<Vec<C64>>,
    pub left: Option<Vec<C64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub records: Vec<EigenRecord>,
    pub params: ModelParams,
}

impl SpectrumResult {
    pub fn sector(&self, q: i32) -> impl Iterator<Item = &EigenRecord> {
        self.records.iter().filter(move |r| r.q == q)
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.records.iter().map(|r| r.lambda).collect()
    }
}

/// Spectrum over the requested sectors (all sectors by default), ordered by
/// `q` ascending then real part descending. Sectors run in parallel.
pub fn full_spectrum(
    params: &ModelParams,
    q_list: Option<&[i32]>,
    want: Vectors,
) -> Result<SpectrumResult> {
    let mut qs: Vec<i32> = match q_list {
        Some(l) => l.to_vec(),
        None => Sector::all(params.two_s).iter().map(|s| s.q).collect(),
    };
    qs.sort_unstable();
    qs.dedup();
    let per_sector: Vec<Result<Vec<EigenRecord>>> = qs
        .par_iter()
        .map(|&q| {
            let block = build_sector_block(params, q)?;
            Ok(eigendecompose_sector(&block, want)?
                .into_iter()
                .map(|e| EigenRecord {
                    q,
                    lambda: e.lambda,
                    right: e.right,
                    left: e.left,
                })
                .collect())
        })
        .collect();
    let mut records = Vec::with_capacity(params.n_levels().pow(2));
    for r in per_sector {
        records.extend(r?);
    }
    Ok(SpectrumResult {
        records,
        params: *params,
    })
}

/// Smallest `|Re λ|` over all modes other than the steady state.
pub fn spectral_gap(spec: &SpectrumResult) -> Result<f64> {
    let (idx, zero) = spec
        .records
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lambda.norm().partial_cmp(&b.1.lambda.norm()).unwrap())
        .ok_or(Error::SteadyStateNotFound)?;
    if zero.lambda.norm() >= ZERO_MODE_TOL {
        return Err(Error::SteadyStateNotFound);
    }
    Ok(spec
        .records
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, r)| r.lambda.re.abs())
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(h: f64, g: f64, g0: f64, p: f64, two_s: u32) -> ModelParams {
        ModelParams::new(h, g, g0, p, two_s).unwrap()
    }

    fn sample_points() -> Vec<(f64, f64, f64, f64)> {
        vec![
            (1.0, 1.2, 0.2, 0.9),
            (0.7, 1.0, 0.0, 0.0),
            (-0.3, 0.5, 0.8, -0.6),
            (1.5, 2.0, 0.1, 0.3),
            (0.0, 0.9, 0.4, -0.95),
        ]
    }

    #[test]
    fn spin_half_coherence_block() {
        for p in [0.0, 0.4, -0.8] {
            let m = params(1.0, 1.2, 0.2, p, 1);
            let b = build_sector_block(&m, 1).unwrap();
            assert_eq!(b.dim, 1);
            let want = C64::new(-(1.2 + 0.2) / 2.0, crate::model::IM_SIGN * 1.0);
            assert!((b.diag[0] - want).norm() < 1e-14);
            let d = build_dense_superoperator(&m).unwrap();
            assert_eq!(d.nrows(), 4);
            let sub = sector_submatrix(&d, 1, 1).unwrap();
            assert!((sub[(0, 0)] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn dense_blocks_match_sector_blocks() {
        for two_s in 1..=6 {
            for &(h, g, g0, p) in &sample_points() {
                let m = params(h, g, g0, p, two_s);
                let d = build_dense_superoperator(&m).unwrap();
                let mut seen = vec![false; d.nrows()];
                for q in -(two_s as i32)..=two_s as i32 {
                    let sub = sector_submatrix(&d, two_s, q).unwrap();
                    let blk = build_sector_block(&m, q).unwrap().to_dense();
                    assert!((sub - blk).camax() < 1e-12, "two_s={two_s} q={q}");
                    for i in sector_dense_indices(two_s, q).unwrap() {
                        seen[i] = true;
                    }
                }
                assert!(seen.iter().all(|&x| x));
                // no couplings between different sectors
                let n = m.n_levels();
                for a in 0..n * n {
                    for b in 0..n * n {
                        let qa = (a / n) as i32 - (a % n) as i32;
                        let qb = (b / n) as i32 - (b % n) as i32;
                        if qa != qb {
                            assert!(d[(a, b)].norm() < 1e-14);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unitary_limit_is_anti_hermitian() {
        let m = params(1.0, 0.0, 0.0, 0.0, 4);
        let d = build_dense_superoperator(&m).unwrap();
        assert!((&d + d.adjoint()).camax() < 1e-14);
        for ev in dense_eigenvalues(&d).unwrap() {
            assert!(ev.re.abs() < 1e-10);
        }
    }

    #[test]
    fn trace_covector_is_left_null() {
        for &(h, g, g0, p) in &sample_points() {
            let m = params(h, g, g0, p, 5);
            let d = build_dense_superoperator(&m).unwrap();
            let n = m.n_levels();
            for col in 0..n * n {
                let s: C64 = (0..n).map(|i| d[(dense_index(5, i, i), col)]).sum();
                assert!(s.norm() < 1e-12);
            }
            // in the q = 0 block the covector is all ones
            let b = build_sector_block(&m, 0).unwrap();
            let bt = b.transpose();
            let ones = vec![C64::new(1.0, 0.0); b.dim];
            assert!(bt.apply(&ones).iter().all(|x| x.norm() < 1e-12));
        }
    }

    #[test]
    fn dense_guard() {
        let m = params(1.0, 1.0, 0.0, 0.0, 21);
        assert!(matches!(build_dense_superoperator(&m), Err(Error::TooLarge { .. })));
        assert!(build_sector_block(&m, 22).is_err());
    }

    #[test]
    fn q0_block_is_real_with_nonnegative_hoppings() {
        let b = build_sector_block(&ModelParams::default(), 0).unwrap();
        assert!(b.diag.iter().all(|d| d.im == 0.0));
        assert!(b.sup.iter().chain(&b.sub).all(|v| v.im == 0.0 && v.re >= 0.0));
    }

    #[test]
    fn small_blocks() {
        let m = ModelParams::default();
        let b = build_sector_block(&m, 34).unwrap();
        assert_eq!(b.dim, 1);
        let e = eigendecompose_sector(&b, Vectors::Right).unwrap();
        assert_eq!(e[0].lambda, b.diag[0]);
        assert_eq!(build_sector_block(&m, 6).unwrap().dim, 29);
    }

    #[test]
    fn q0_has_zero_mode() {
        for &(h, g, g0, p) in &sample_points() {
            let m = params(h, g, g0, p, 17);
            let b = build_sector_block(&m, 0).unwrap();
            let e = eigendecompose_sector(&b, Vectors::None).unwrap();
            assert!(e.iter().any(|x| x.lambda.norm() < 1e-10));
        }
    }

    #[test]
    fn p0_population_spectrum() {
        let m = params(1.0, 1.2, 0.2, 0.0, 34);
        let e = eigendecompose_sector(&build_sector_block(&m, 0).unwrap(), Vectors::None).unwrap();
        for (n, pair) in e.iter().enumerate() {
            let want = -1.2 * (n * (n + 1)) as f64 / 68.0;
            assert!((pair.lambda.re - want).abs() < 1e-8);
        }
        assert!((e[1].lambda.re + 0.035294117647058823).abs() < 1e-12);
        assert!((e[2].lambda.re + 0.10588235294117647).abs() < 1e-12);
    }

    #[test]
    fn full_spectrum_structure() {
        let m = ModelParams::default();
        let spec = full_spectrum(&m, None, Vectors::None).unwrap();
        assert_eq!(spec.records.len(), 1225);
        let zeros = spec.records.iter().filter(|r| r.lambda.norm() < 1e-10).count();
        assert_eq!(zeros, 1);
        for r in &spec.records {
            assert!((r.lambda.im - crate::model::IM_SIGN * r.q as f64 * m.h).abs() < 1e-9);
            assert!(r.lambda.re <= 1e-10);
        }
        for q in 1..=34 {
            let a: Vec<C64> = spec.sector(q).map(|r| r.lambda).collect();
            let b: Vec<C64> = spec.sector(-q).map(|r| r.lambda.conj()).collect();
            assert!(hausdorff(&a, &b) < 1e-9);
        }
        // ordering
        for w in spec.records.windows(2) {
            assert!(w[0].q < w[1].q || (w[0].q == w[1].q && w[0].lambda.re >= w[1].lambda.re));
        }
    }

    #[test]
    fn eigenvector_residuals() {
        for &(h, g, g0, p) in &sample_points() {
            let m = params(h, g, g0, p, 40);
            for q in [-3, 0, 5, 39] {
                let b = build_sector_block(&m, q).unwrap();
                for e in eigendecompose_sector(&b, Vectors::Both).unwrap() {
                    let r = e.right.unwrap();
                    assert!(residual(&b, e.lambda, &r) < 1e-9);
                    assert!((norm2(&r) - 1.0).abs() < 1e-12);
                    let l = e.left.unwrap();
                    assert!(residual(&b.transpose(), e.lambda, &l) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn dense_fallback_path() {
        // a block with complex hoppings is not symmetrizable
        let b = SectorBlock {
            q: 1,
            dim: 3,
            diag: vec![C64::new(-1.0, 0.2), C64::new(-0.5, 0.0), C64::new(-2.0, 1.0)],
            sup: vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.0)],
            sub: vec![C64::new(0.1, -0.4), C64::new(0.7, 0.0)],
        };
        let e = eigendecompose_sector(&b, Vectors::Right).unwrap();
        let dense = dense_eigenvalues(&b.to_dense()).unwrap();
        let got: Vec<C64> = e.iter().map(|x| x.lambda).collect();
        assert!(hausdorff(&got, &dense) < 1e-12);
        for x in &e {
            assert!(residual(&b, x.lambda, x.right.as_ref().unwrap()) < 1e-9);
        }
    }

    #[test]
    fn gap_examples() {
        let unitary = params(1.0, 0.0, 0.0, 0.0, 6);
        let spec = full_spectrum(&unitary, None, Vectors::None).unwrap();
        assert_eq!(spectral_gap(&spec).unwrap(), 0.0);
        let p0 = params(1.0, 1.2, 0.2, 0.0, 34);
        let spec = full_spectrum(&p0, None, Vectors::None).unwrap();
        // coherences (q = ±1, rate (Γ+Γ0)/4s) outlive the first population mode (Γ/2s)
        assert!((spectral_gap(&spec).unwrap() - 1.4 / 68.0).abs() < 1e-10);
        let pop = full_spectrum(&p0, Some(&[0]), Vectors::None).unwrap();
        assert!((spectral_gap(&pop).unwrap() - 1.2 / 34.0).abs() < 1e-10);
        let spec = full_spectrum(&p0, Some(&[3, 4]), Vectors::None).unwrap();
        assert!(matches!(spectral_gap(&spec), Err(Error::SteadyStateNotFound)));
    }

    #[test]
    fn fully_polarized_bath_is_triangular() {
        let m = params(1.0, 1.0, 0.3, 1.0, 8);
        let b = build_sector_block(&m, 2).unwrap();
        let e = eigendecompose_sector(&b, Vectors::Right).unwrap();
        let mut want: Vec<C64> = b.diag.clone();
        want.sort_by(|a, b| cmp_desc(*a, *b));
        for (x, w) in e.iter().zip(&want) {
            assert!((x.lambda - w).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn blocks_match_dense_superoperator(
            h in -2.0..2.0f64, g in 0.0..2.0f64, g0 in 0.0..1.0f64,
            p in -0.99..0.99f64, two_s in 1u32..=5,
        ) {
            let m = params(h, g, g0, p, two_s);
            let dense = dense_eigenvalues(&build_dense_superoperator(&m).unwrap()).unwrap();
            let spec = full_spectrum(&m, None, Vectors::None).unwrap();
            prop_assert_eq!(spec.records.len(), dense.len());
            prop_assert!(hausdorff(&spec.eigenvalues(), &dense) < 1e-8);
            for r in &spec.records {
                prop_assert!(r.lambda.re <= 1e-10);
            }
        }
    }
}
