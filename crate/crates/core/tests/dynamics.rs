//! Closed-form wobbling flow against an independent RK4 integration of the
//! (p, γ) equations.

use std::f64::consts::PI;

use orbita::action_angle::{
    evolve, kappa_forward, kappa_inverse, rk4_chart, root_data, trajectory, wobbling_period, ActionAnglePoint,
    Hamiltonian, OmegaModel,
};
use orbita::orbit::q_range;
use orbita::WeightVector;
use proptest::prelude::*;

fn wrap(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn closed_form_tracks_rk4(lam in 5.0..50.0f64, mu in 5.0..50.0f64, lt in 0.1..0.9f64, qt in 0.1..0.9f64, w in 0.5..3.0f64) {
        let wv = WeightVector::from_gaps(lam, mu, 0.0).unwrap();
        let l = lt * wv.l_max();
        let (lo, hi) = q_range(&wv, l).unwrap();
        let q = lo + qt * (hi - lo);
        prop_assume!((q - wv.p()[1]).abs() > 0.02 * (hi - lo));
        let rd = root_data(&wv, l, q).unwrap();
        let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
        let a0 = kappa_forward(&kappa_inverse(&ActionAnglePoint { l, q, psi: 0.0, theta: 0.3 * delta, eps_theta: 0, delta }, &wv).unwrap(), &wv).unwrap();
        let h = Hamiltonian::new(0.0, 1.0, 0.0, OmegaModel::Constant(w)).unwrap();
        let period = wobbling_period(&a0, &h);
        let c0 = kappa_inverse(&a0, &wv).unwrap();
        let steps = 40_000;
        let path = rk4_chart(&wv, l, w, (c0.p, c0.gamma), period / steps as f64, steps, 400);
        for &(t, p, g) in &path {
            let c = kappa_inverse(&evolve(&a0, &h, t), &wv).unwrap();
            prop_assert!((c.p - p).abs() < 1e-6 * wv.scale(), "p at t={}", t);
            prop_assert!(wrap(c.gamma - g).abs() < 1e-6, "gamma at t={}", t);
        }
    }
}

#[test]
fn energy_and_casimirs_are_conserved() {
    let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
    let h = Hamiltonian::default_for(&wv, 1.3, 2.0);
    let l = 33.0;
    let (lo, hi) = q_range(&wv, l).unwrap();
    let q = lo + 0.3 * (hi - lo);
    let rd = root_data(&wv, l, q).unwrap();
    let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
    let a0 = ActionAnglePoint { l, q, psi: 0.2, theta: -0.4 * delta, eps_theta: 0, delta };
    let start = kappa_inverse(&a0, &wv).unwrap();
    let rows = trajectory(&start, &wv, &h, 50.0, 101).unwrap();
    let scale = wv.scale().powi(3);
    for r in &rows {
        assert!((r.h - rows[0].h).abs() < 1e-12 * rows[0].h.abs().max(1.0));
        for k in 0..3 {
            assert!((r.casimirs[k] - rows[0].casimirs[k]).abs() < 1e-10 * scale, "C{} at t={}", k + 1, r.t);
        }
    }
}
