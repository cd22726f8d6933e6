//! Quantized (L, Q) levels of [60,20,0] and the ΔL pattern of the edge
//! bands for both branch choices.

use orbita::figure::spectrum_figure;
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    for s in [1.0, -1.0] {
        let fig = spectrum_figure(&wv, s, 32)?;
        println!("s = {s:+}: {} levels", fig.rows.len());
        for lv in &fig.levels {
            let ls: Vec<u32> = lv.points.iter().map(|p| p.0).collect();
            println!(
                "  {:>3} parity {:?} on curve {:<5} dL = {} L = {}..{}",
                lv.band.name(),
                lv.parity,
                lv.on_curve,
                lv.delta_l,
                ls.first().unwrap_or(&0),
                ls.last().unwrap_or(&0)
            );
        }
    }
    Ok(())
}
