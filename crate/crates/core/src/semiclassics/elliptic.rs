//! Complete elliptic integral of the first kind for complex parameter.

use crate::C64;

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication, principal
/// branch of the square root throughout.
pub fn carlson_rf(x: C64, y: C64, z: C64) -> C64 {
    const TOL: f64 = 1e-16;
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let q = (3.0 * TOL).powf(-1.0 / 6.0)
        * (a0 - x).norm().max((a0 - y).norm()).max((a0 - z).norm());
    let mut pow4 = 1.0;
    for _ in 0..100 {
        if q * pow4 < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// `K(m) = ∫_0^{π/2} dt / sqrt(1 - m sin² t) = R_F(0, 1 - m, 1)`.
pub fn ellip_k(m: C64) -> C64 {
    carlson_rf(C64::new(0.0, 0.0), C64::new(1.0, 0.0) - m, C64::new(1.0, 0.0))
}

/// `K̃(m) = K(m) - 2i K(1 - m)`.
pub fn ellip_k_tilde(m: C64) -> C64 {
    ellip_k(m) - C64::new(0.0, 2.0) * ellip_k(C64::new(1.0, 0.0) - m)
}
