//! Follow one wobbling period in closed form and compare with RK4.

use orbita::action_angle::{
    kappa_forward, kappa_inverse, rk4_chart, root_data, trajectory, wobbling_period, ActionAnglePoint,
    Hamiltonian, OmegaModel,
};
use orbita::orbit::q_range;
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    let (l, omega) = (30.0, 1.5);
    let (lo, hi) = q_range(&wv, l)?;
    let q = lo + 0.35 * (hi - lo);
    let rd = root_data(&wv, l, q)?;
    let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
    let start = kappa_inverse(&ActionAnglePoint { l, q, psi: 0.0, theta: 0.0, eps_theta: 0, delta }, &wv)?;
    let h = Hamiltonian::new(0.0, 1.0, 0.0, OmegaModel::Constant(omega))?;
    let period = wobbling_period(&kappa_forward(&start, &wv)?, &h);
    println!("L = {l}, Q = {q:.6}, period = {period:.12}");
    let closed = trajectory(&start, &wv, &h, period, 9)?;
    let steps = 80_000;
    let rk = rk4_chart(&wv, l, omega, (start.p, start.gamma), period / steps as f64, steps, steps / 8);
    println!("{:>10} {:>18} {:>18} {:>12}", "t", "p closed", "p rk4", "|diff|");
    for (c, r) in closed.iter().zip(&rk) {
        println!("{:>10.5} {:>18.12} {:>18.12} {:>12.3e}", c.t, c.p, r.1, (c.p - r.1).abs());
    }
    Ok(())
}
