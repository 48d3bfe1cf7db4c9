use proptest::prelude::*;
use qorbit_core::degen::{classify_su21, Su21Case};
use qorbit_core::heis::{check_i0_invariance, HeisElement, Letter};
use qorbit_core::qfun::{kernel_plus, kernel_strange, qpochhammer, ramanujan_psi, ramanujan_psi_closed};
use qorbit_core::series::{
    casimir_from_spin, classify, gram_diagonal, integral_invariance, theorem_unitarizable, x_spectrum,
};
use qorbit_core::{Complex64, FxLattice, PochOrder, QCoeff, QSeriesContext, RepParams, SeriesKind};

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn swapped(p: &RepParams) -> RepParams {
    RepParams::new(p.q, p.d0, p.c0, p.nu0).unwrap()
}

fn generic(p: &RepParams) -> bool {
    p.plus_wall().is_none() && p.minus_wall().is_none()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn letter(n: usize) -> impl Strategy<Value = Letter> {
    prop_oneof![(0..=n).prop_map(Letter::Z), Just(Letter::C), (0..=n).prop_map(Letter::H)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_shift_keeps_class(q in 0.2f64..0.9, c0 in 0.2f64..5.0, nu0 in prop_oneof![-4.0f64..-0.01, 0.01f64..4.0]) {
        let p = RepParams::real(q, c0, nu0).unwrap();
        let s = RepParams::real(q, c0, nu0 * q * q).unwrap();
        prop_assume!(generic(&p));
        let (a, b) = (classify(&p), classify(&s));
        prop_assert_eq!(a.series, b.series);
        prop_assert!(close(a.casimir, b.casimir, 1e-12));
    }

    #[test]
    fn shift_inside_holomorphic_lattice(q in 0.2f64..0.9, c0 in 0.2f64..5.0, m in 0i32..6) {
        let p = RepParams::real(q, c0, q * c0 * q.powi(2 * m)).unwrap();
        let s = RepParams::real(q, c0, p.nu0 * q * q).unwrap();
        prop_assert_eq!(classify(&p).series, SeriesKind::HolomorphicDiscrete);
        prop_assert_eq!(classify(&s).series, SeriesKind::HolomorphicDiscrete);
    }

    #[test]
    fn swap_c0_d0_mirrors_spin(q in 0.2f64..0.9, c0 in 0.2f64..5.0, nu0 in prop_oneof![-4.0f64..-0.01, 0.01f64..4.0]) {
        let p = RepParams::real(q, c0, nu0).unwrap();
        let s = swapped(&p);
        prop_assume!(generic(&p) && generic(&s));
        let (a, b) = (classify(&p), classify(&s));
        prop_assert_eq!(a.series, b.series);
        let ln_q = q.ln();
        prop_assert!(close(((b.l + a.l + 1.0) * ln_q).exp(), cplx(1.0, 0.0), 1e-10));
        prop_assert!(close(a.casimir, b.casimir, 1e-10));
    }

    #[test]
    fn casimir_symmetric_under_reflection(q in 0.1f64..0.95, re in -3.0f64..3.0, im in -2.0f64..2.0) {
        let l = cplx(re, im);
        prop_assert!(close(casimir_from_spin(q, l), casimir_from_spin(q, -l - 1.0), 1e-9));
    }

    #[test]
    fn gram_matches_theorem(q in 0.2f64..0.9, c0 in 0.2f64..5.0, nu0 in prop_oneof![-4.0f64..-0.01, 0.01f64..4.0]) {
        let p = RepParams::real(q, c0, nu0).unwrap();
        prop_assert_eq!(gram_diagonal(&p, 30).positive, theorem_unitarizable(&p));
    }

    #[test]
    fn complex_parameters_are_principal(q in 0.2f64..0.9, theta in 0.05f64..3.0, nu0 in prop_oneof![-4.0f64..-0.01, 0.01f64..4.0]) {
        let p = RepParams::unit_circle(q, theta, nu0).unwrap();
        prop_assert_eq!(classify(&p).series, SeriesKind::PrincipalContinuous);
        prop_assert!(gram_diagonal(&p, 20).positive);
        prop_assert_eq!(x_spectrum(&p).as_str(), "M_nu0");
    }

    #[test]
    fn su21_scale_invariant(q in 0.3f64..0.8, r in prop::sample::select(vec![1, 2, 3, 5]), s in 0.1f64..10.0,
                            e1 in -8i32..8, e2 in -8i32..8, start in any::<bool>()) {
        let (c0, d0) = (1.0, q.powi(-r));
        let lam = if start { [d0 / q, q * c0] } else { [q.powf(e1 as f64 / 2.0), q.powf(e2 as f64 / 2.0)] };
        let a = classify_su21(q, c0, d0, lam);
        let b = classify_su21(q, s * c0, s * d0, [s * lam[0], s * lam[1]]);
        prop_assert_eq!(a, b);
        if start {
            prop_assert_ne!(a, Su21Case::None);
        }
    }

    #[test]
    fn integral_invariance_random(seed in any::<u64>(), c0 in 0.3f64..3.0, nu0 in 0.05f64..3.0) {
        use rand::{Rng, SeedableRng};
        let p = RepParams::real(0.5, c0, nu0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = FxLattice::new(p.q, p.c0, p.d0, p.nu0);
        for k in -2..=2 {
            for j in -3..=3 {
                f.set(k, j, cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        let r = integral_invariance(&p, &f).unwrap();
        prop_assert!(r.max_residual() < 1e-10 * r.integral.norm().max(1.0), "{:?}", r);
    }

    #[test]
    fn q_binomial_theorem(q in 0.2f64..0.9, a in (-0.9f64..0.9, -0.9f64..0.9), z in (0.0f64..0.5, 0.0f64..std::f64::consts::TAU)) {
        let ctx = QSeriesContext::new(q).unwrap();
        let t = cplx(ctx.t(), 0.0);
        let (a, z) = (cplx(a.0, a.1), Complex64::from_polar(z.0, z.1));
        let mut sum = cplx(0.0, 0.0);
        let mut term = cplx(1.0, 0.0);
        for k in 0..200 {
            sum += term;
            let tk = t.powi(k);
            term *= (cplx(1.0, 0.0) - a * tk) / (cplx(1.0, 0.0) - t * tk) * z;
        }
        let inf = |w: Complex64| qpochhammer(&ctx, w, t, PochOrder::Infinite).unwrap();
        let closed = inf(a * z) / inf(z);
        prop_assert!(close(sum, closed, 1e-12), "{} vs {}", sum, closed);
    }

    #[test]
    fn psi_sum_matches_product(q in 0.3f64..0.8, am in 1.2f64..3.0, aa in 0.0f64..std::f64::consts::TAU, bm in 0.0f64..0.5, ba in 0.0f64..std::f64::consts::TAU, xr in 0.0f64..1.0, xa in 0.0f64..std::f64::consts::TAU) {
        let ctx = QSeriesContext::new(q).unwrap();
        let t = cplx(ctx.t(), 0.0);
        let a = Complex64::from_polar(am, aa);
        let b = Complex64::from_polar(bm, ba);
        let lo = (b / a).norm();
        let x = Complex64::from_polar(lo + (0.9 - lo) * (0.05 + 0.9 * xr), xa);
        let s = ramanujan_psi(&ctx, a, b, t, x).unwrap();
        let p = ramanujan_psi_closed(&ctx, a, b, t, x).unwrap();
        prop_assert!(close(s, p, 1e-9), "{} vs {}", s, p);
    }

    #[test]
    fn plus_kernel_hermitian(l in -3.0f64..-0.5, r1 in 0.0f64..0.9, a1 in 0.0f64..std::f64::consts::TAU, r2 in 0.0f64..0.9, a2 in 0.0f64..std::f64::consts::TAU) {
        let ctx = QSeriesContext::new(0.5).unwrap();
        let (x, y) = (Complex64::from_polar(r1, a1), Complex64::from_polar(r2, a2));
        let k1 = kernel_plus(&ctx, x, y, l).unwrap();
        let k2 = kernel_plus(&ctx, y, x, l).unwrap();
        prop_assert!(close(k1, k2.conj(), 1e-12));
        prop_assert!(kernel_plus(&ctx, x, x, l).unwrap().re > 0.0);
    }

    #[test]
    fn strange_kernel_hermitian(r1 in 0.3f64..0.95, a1 in 0.0f64..std::f64::consts::TAU, r2 in 0.3f64..0.95, a2 in 0.0f64..std::f64::consts::TAU) {
        let ctx = QSeriesContext::new(0.6).unwrap();
        let (x, y) = (Complex64::from_polar(r1, a1), Complex64::from_polar(r2, a2));
        let k1 = kernel_strange(&ctx, x, y, 1.0, 0.25).unwrap();
        let k2 = kernel_strange(&ctx, y, x, 1.0, 0.25).unwrap();
        prop_assert!(close(k1, k2.conj(), 1e-10));
    }

    #[test]
    fn heisenberg_product_associative(u in prop::collection::vec(letter(2), 0..3),
                                      v in prop::collection::vec(letter(2), 0..3),
                                      w in prop::collection::vec(letter(2), 0..3)) {
        let (a, b, c) = (HeisElement::word(2, &u), HeisElement::word(2, &v), HeisElement::word(2, &w));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn c_is_q_central(u in prop::collection::vec(letter(2), 0..4)) {
        let a = HeisElement::word(2, &u);
        let weight: i32 = u.iter().map(|l| match l { Letter::Z(_) => -2, Letter::H(_) => 2, Letter::C => 0 }).sum();
        let c = HeisElement::c(2);
        prop_assert_eq!(c.mul(&a), a.mul(&c).scale(&QCoeff::q_pow(weight)));
    }
}

#[test]
fn i0_invariant_for_small_rank() {
    for n in [1, 2] {
        assert!(check_i0_invariance(n).pass);
    }
}
