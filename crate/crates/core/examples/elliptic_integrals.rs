//! Carlson-based Legendre integrals and Jacobi sn next to textbook values.

use std::f64::consts::FRAC_PI_2;

use orbita::elliptic::{ellip_f, ellip_k, ellip_pi, jacobi_sn_am};

fn main() -> orbita::Result<()> {
    // K(1/2) = 1.854074677301372
    println!("K(0.5)          = {:.15}", ellip_k(0.5)?);
    println!("F(pi/2 | 0.5)   = {:.15}", ellip_f(FRAC_PI_2, 0.5)?);
    println!("K(1 - 1e-12)    = {:.15}", ellip_k(1.0 - 1e-12)?);
    println!("Pi(0.3; 1.0|0.6) = {:.15}", ellip_pi(0.3, 1.0, 0.6)?);
    let m = 0.7;
    let k = ellip_k(m)?;
    for u in [0.0, 0.5 * k, k, 2.0 * k] {
        let (sn, am) = jacobi_sn_am(u, m)?;
        println!("sn({u:.6} | {m}) = {sn:+.15}  am = {am:.15}");
    }
    Ok(())
}
