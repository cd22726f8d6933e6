//! Members of the Π sequences of [60,20,0] next to the small-L limit and
//! the rational closed form.

use orbita::quantize::pi_sequence;
use orbita::WeightVector;

fn main() -> orbita::Result<()> {
    let wv = WeightVector::new(60.0, 20.0, 0.0)?;
    for s in [1.0, -1.0] {
        let pi = pi_sequence(&wv, s)?;
        println!("s = {s:+}");
        println!("  small-L limit          {:.10}", pi.q_pi);
        println!("  Qbar rule              {:?}", pi.q_bar_rule);
        println!("  closed form (swapped)  {:.10}", pi.closed_form);
        println!("  closed form (direct)   {:.10}", pi.closed_form_unswapped);
        for (l, q) in &pi.members {
            println!("  L = {l:>2}: Q = {q:.10}");
        }
    }
    Ok(())
}
