use liouv::ed::{build_sector_block, eigendecompose_sector, full_spectrum, Vectors};
use liouv::io::csv::{read_spectrum_csv, write_spectrum_csv};
use liouv::model::{coeff_c, poly_p, validate_params, PolyKind};
use liouv::semiclassics::curve::w_monic;
use liouv::semiclassics::{g0_branches, quartic_branch_points, spectral_edges, Curve};
use liouv::steady::{steady_state, t1_t2};
use liouv::{ModelParams, Sector, C64};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (-2.0..2.0f64, 0.05..2.0f64, 0.0..1.0f64, -0.98..0.98f64, 1u32..9)
        .prop_map(|(h, g, g0, p, two_s)| ModelParams::new(h, g, g0, p, two_s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validation_accepts_exactly_the_admissible_set(
        g in -1.0..2.0f64, g0 in -1.0..2.0f64, p in -1.5..1.5f64, two_s in 0u32..5,
    ) {
        let raw = ModelParams { h: 0.3, gamma: g, gamma0: g0, p, two_s };
        let admissible = g >= 0.0 && g0 >= 0.0 && p.abs() <= 1.0 && two_s >= 1;
        let r = validate_params(raw);
        prop_assert_eq!(r.is_ok(), admissible);
        if let Ok(m) = r {
            prop_assert_eq!(m, raw);
            prop_assert!(m.rate_up() >= 0.0 && m.rate_down() >= 0.0);
        }
    }

    #[test]
    fn sector_dimensions(two_s in 1u32..40, q in -40i32..40) {
        match Sector::new(q, two_s) {
            Ok(sec) => prop_assert_eq!(sec.dim, (two_s - q.unsigned_abs()) as usize + 1),
            Err(_) => prop_assert!(q.unsigned_abs() > two_s),
        }
    }

    #[test]
    fn coherent_weights(
        (two_s, q, k) in (1u32..13).prop_flat_map(|n| (Just(n), 0..=n)).prop_flat_map(|(n, q)| (Just(n), Just(q), 0..=n - q)),
    ) {
        // c² = C(q+κ, κ) C(2s-κ, q) / C(2s, q)
        let binom = |n: u32, k: u32| (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as f64;
        let want = (binom(q + k, k) * binom(two_s - k, q) / binom(two_s, q)).sqrt();
        let c = coeff_c(q, k, two_s).unwrap();
        prop_assert!((c - want).abs() <= 1e-12 * want, "{c} vs {want}");
        let mirror = coeff_c(q, two_s - q - k, two_s).unwrap();
        prop_assert!((c - mirror).abs() <= 1e-12 * c);
    }

    #[test]
    fn p2_vanishes_on_singular_points(m in params(), x in 0.0..0.99f64) {
        let r2 = (1.0 + m.p) / (1.0 - m.p);
        for z in [0.0, 1.0, r2] {
            let v = poly_p(PolyKind::P2, C64::new(z, 0.0), x, &m);
            prop_assert!(v.norm() < 1e-12 * (1.0 + r2 * r2 * r2), "{z}: {v}");
        }
    }

    #[test]
    fn sector_spectra_are_stable_with_fixed_imaginary_part(m in params()) {
        let two_s = m.two_s as i32;
        for q in -two_s..=two_s {
            let ev = eigendecompose_sector(&build_sector_block(&m, q).unwrap(), Vectors::None).unwrap();
            prop_assert_eq!(ev.len(), (two_s - q.abs()) as usize + 1);
            for e in ev {
                prop_assert!(e.lambda.re <= 1e-10);
                prop_assert!((e.lambda.im.abs() - (q as f64 * m.h).abs()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unique_steady_state(m in params()) {
        let spec = full_spectrum(&m, None, Vectors::None).unwrap();
        prop_assert_eq!(spec.records.len(), m.n_levels().pow(2));
        let zeros: Vec<_> = spec.records.iter().filter(|r| r.lambda.norm() < 1e-10).collect();
        prop_assert_eq!(zeros.len(), 1);
        prop_assert_eq!(zeros[0].q, 0);
    }

    #[test]
    fn steady_observables_are_bounded(m in params()) {
        let ss = steady_state(&m);
        let s = m.s();
        prop_assert!((ss.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(ss.weights.iter().all(|w| *w >= 0.0));
        prop_assert!(ss.mean_sz.abs() <= s + 1e-12);
        prop_assert!(ss.entropy >= -1e-12 && ss.entropy <= (m.n_levels() as f64).ln() + 1e-12);
        // p ↔ -p flips the magnetization
        let flipped = steady_state(&m.with_p(-m.p).unwrap());
        prop_assert!((flipped.mean_sz + ss.mean_sz).abs() < 1e-10);
    }

    #[test]
    fn relaxation_time_ratio(g in 0.1..3.0f64, g0 in 0.0..2.0f64, two_s in 1u32..60) {
        let m = ModelParams::new(1.0, g, g0, 0.0, two_s).unwrap();
        let t = t1_t2(&m).unwrap();
        prop_assert!((t.t2 / t.t1 - 2.0 * g / (g + g0)).abs() < 1e-12);
    }

    #[test]
    fn g0_branches_satisfy_the_curve(
        p in 0.05..0.98f64, x in 0.0..0.95f64, lambda in -1.5..0.0f64, re in -3.0..3.0f64, im in 0.1..3.0f64,
    ) {
        let m = ModelParams::new(1.0, 1.2, 0.2, p, 34).unwrap();
        let z = C64::new(re, im);
        let (a, b) = g0_branches(z, lambda, x, &m).unwrap();
        let curve = Curve::real(lambda, x, &m);
        prop_assert!(curve.relation_residual(z, a) < 1e-11);
        prop_assert!(curve.relation_residual(z, b) < 1e-11);
    }

    #[test]
    fn branch_points_are_roots_of_w(p in 0.05..0.98f64, x in 0.0..0.95f64, lambda in -1.5..0.0f64) {
        let m = ModelParams::new(1.0, 1.2, 0.2, p, 34).unwrap();
        let l = C64::new(lambda, 0.0);
        let bp = quartic_branch_points(l, x, &m).unwrap();
        for r in &bp.r_inv {
            let scale = 1.0 + r.norm().powi(4);
            prop_assert!(w_monic(*r, l, x, &m).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn edges_are_ordered_and_even_in_p(p in 0.0..0.98f64, x in 0.0..1.0f64) {
        let m = ModelParams::new(1.0, 1.2, 0.2, p, 34).unwrap();
        let e = spectral_edges(x, &m).unwrap();
        prop_assert!(e.bottom <= e.top + 1e-12);
        if let Some(sep) = e.separator {
            prop_assert!(e.bottom <= sep + 1e-12 && sep <= e.top + 1e-12);
        }
        prop_assert_eq!(e, spectral_edges(x, &m.with_p(-p).unwrap()).unwrap());
    }

    #[test]
    fn spectrum_csv_round_trip(m in params()) {
        let spec = full_spectrum(&m, None, Vectors::None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_spectrum_csv(&spec, &path).unwrap();
        let back = read_spectrum_csv(&path).unwrap();
        let mut want: Vec<(i32, C64)> = spec.records.iter().map(|r| (r.q, r.lambda)).collect();
        let mut got = back.clone();
        let key = |a: &(i32, C64), b: &(i32, C64)| a.0.cmp(&b.0).then(a.1.re.total_cmp(&b.1.re)).then(a.1.im.total_cmp(&b.1.im));
        want.sort_by(key);
        got.sort_by(key);
        prop_assert_eq!(got, want);
    }
}
