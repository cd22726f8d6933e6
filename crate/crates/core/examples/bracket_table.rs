//! Evaluate the reduced Poisson bracket at a point of the [60,20,0] orbit,
//! from the closed table and from the full u(3) oracle.

use orbita::orbit::chart_forward;
use orbita::poisson::{reduced_bracket_oracle, reduced_bracket_table, Generator};
use orbita::{ChartPoint, WeightVector};

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    let state = chart_forward(&ChartPoint::new(&wv, 30.0, 15.0, 0.4, 0.7), &wv)?;
    println!("state: {:?}", state.to_array());
    println!("{:>5} {:>5} {:>22} {:>22}", "f", "g", "table", "oracle");
    for (i, &f) in Generator::ALL.iter().enumerate() {
        for &g in &Generator::ALL[i + 1..] {
            let t = reduced_bracket_table(&state, 1.0, f, g)?;
            let o = reduced_bracket_oracle(&state, f, g)?;
            println!("{:>5} {:>5} {t:>22.14e} {o:>22.14e}", f.name(), g.name());
        }
    }
    Ok(())
}
