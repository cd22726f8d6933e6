//! Build the Cartan rotation for a direction vector and check that it sends
//! e3 to the unit direction.

use nalgebra::Vector3;
use orbita::cartan::{cartan_matrix, star};

fn main() -> orbita::Result<()> {
    let x = Vector3::new(1.0, -2.0, 0.5);
    let c = cartan_matrix(&x)?;
    println!("[x] =\n{}", c.m);
    let e3 = Vector3::new(0.0, 0.0, 1.0);
    println!("[x] e3      = {:?}", (c.m * e3).as_slice());
    println!("x / |x|     = {:?}", (x / x.norm()).as_slice());
    println!("[x] x*      = {:?}  (|x| e3)", (c.m * star(&x)).as_slice());
    println!("det [x]     = {:.15}", c.m.determinant());
    Ok(())
}
