//! Round-trip a point through the (L, p, φ, γ) chart and read off the
//! quadrupole eigenvalues and shape coordinates.

use orbita::action_angle::{kappa_inverse, root_data, ActionAnglePoint};
use orbita::orbit::{casimir_residual, chart_forward, chart_inverse, eigenvalues, q_range, shape_projection};
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    let l = 25.0;
    let (lo, hi) = q_range(&wv, l)?;
    // A chart point on the torus through (L, Q), a quarter period along.
    let q = lo + 0.6 * (hi - lo);
    let rd = root_data(&wv, l, q)?;
    let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
    let c = kappa_inverse(&ActionAnglePoint { l, q, psi: 0.3, theta: 0.25 * delta, eps_theta: 0, delta }, &wv)?;
    let s = chart_forward(&c, &wv)?;
    let back = chart_inverse(&s, &wv)?;
    println!("chart in : {c:?}");
    println!("chart out: {back:?}");
    println!("Casimir residual: {:.3e}", casimir_residual(&s, &wv));
    println!("Q range at L = {l}: [{lo}, {hi}]");
    for q in [lo, 0.5 * (lo + hi), hi] {
        let e = eigenvalues(&wv, l, q)?;
        let (x, y) = shape_projection(&e);
        println!(
            "Q = {q:>10.5}: P = {:?}, beta = {:.5}, Gamma = {:.3} deg, (x, y) = ({x:.4}, {y:.4})",
            e.p,
            e.beta,
            e.gamma.to_degrees()
        );
    }
    Ok(())
}
