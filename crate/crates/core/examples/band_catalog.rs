//! List the five equilibrium bands of [60,20,0] with their L ranges,
//! stability and the intersections (A)-(D).

use orbita::orbit::band_catalog;
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    let cat = band_catalog(&wv, 1.0, 0.0)?;
    for b in &cat.bands {
        for seg in &b.segments {
            println!("{:>3}  L in [{:>9.4}, {:>9.4}]  {:?}  {}", b.kind.name(), seg.l_lo, seg.l_hi, seg.extremum, seg.stability.name());
        }
    }
    for x in &cat.intersections {
        println!("({}) {} x {}: L = {}, Q = {}", x.label, x.bands.0.name(), x.bands.1.name(), x.l, x.q);
    }
    Ok(())
}
