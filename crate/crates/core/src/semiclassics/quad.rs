//! Tanh-sinh quadrature and a bracketed scalar root finder.

use std::f64::consts::FRAC_PI_2;

const MAX_LEVEL: u32 = 12;
const T_MAX: f64 = 4.0;

/// `∫_a^b f` by double-exponential quadrature, doubling the node density until
/// successive estimates agree to `tol` relative. Integrable endpoint
/// singularities are fine: nodes are placed by their distance to the nearest
/// endpoint and never land on it.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    // contribution of node t (and its mirror -t)
    let pair = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        // distance of the node from the endpoint, computed without cancellation
        let delta = half.abs() * 2.0 / ((2.0 * u).exp() + 1.0);
        let mut acc = 0.0;
        for x in [b - half.signum() * delta, a + half.signum() * delta] {
            if x != a && x != b {
                let v = f(x);
                if v.is_finite() {
                    acc += v;
                }
            }
            if t == 0.0 {
                break;
            }
        }
        acc * w
    };
    let mut h = 1.0;
    let mut sum = pair(0.0);
    let mut t = h;
    while t <= T_MAX {
        sum += pair(t);
        t += h;
    }
    let mut est = half * h * sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += pair(t);
            t += 2.0 * h;
        }
        let next = half * h * sum;
        let done = level >= 3 && (next - est).abs() <= tol * next.abs().max(f64::MIN_POSITIVE);
        est = next;
        if done {
            break;
        }
    }
    est
}

/// Root of `f` in `[lo, hi]` given a sign change, by the Illinois variant of
/// regula falsi with bisection safeguards.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    let mut side = 0i8;
    for it in 0..200 {
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if it % 4 == 3 || !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 || (hi - lo).abs() < xtol {
            return Some(x);
        }
        if fx.signum() == fhi.signum() {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        }
    }
    Some(0.5 * (lo + hi))
}
