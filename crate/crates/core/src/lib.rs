//! Reduced dynamics on coadjoint orbits of u(3): the Cartan model of the
//! angular-momentum frame, the seven-generator Poisson algebra, canonical
//! charts and band catalogs, elliptic action-angle variables, and
//! Bohr–Sommerfeld quantization of the wobbling momentum.

pub mod action_angle;
pub mod cartan;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod figure;
pub mod orbit;
pub mod poisson;
pub mod quantize;
pub mod verify;

pub use error::{ErrorClass, OrbitaError, Result};
pub use orbit::{BandKind, ChartPoint};
pub use poisson::{ReducedState, WeightVector};
