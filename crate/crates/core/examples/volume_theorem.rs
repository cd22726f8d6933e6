//! Numerical orbit volumes land on integers, and those integers fix the
//! so(3) multiplicities.

use orbita::orbit::q_range;
use orbita::quantize::{branching_d, volume_closed, volume_q};
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let (lam, mu) = (7u32, 4u32);
    let wv = WeightVector::from_gaps(f64::from(lam), f64::from(mu), 0.0)?;
    println!("{:>3} {:>20} {:>6} {:>3} {:>3}", "L", "quadrature", "closed", "d", "del");
    for l in 0..=lam + mu {
        let lf = f64::from(l);
        let quad = if l == 0 { 0.0 } else { volume_q(&wv, lf, q_range(&wv, lf)?.1)? };
        let rec = branching_d(lam, mu, l);
        println!("{l:>3} {quad:>20.12} {:>6} {:>3} {:>3}", volume_closed(lam, mu, l), rec.d, rec.delta);
    }
    Ok(())
}
