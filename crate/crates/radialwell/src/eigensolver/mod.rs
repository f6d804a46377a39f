//! Bound-state eigenvalue solvers: closed-form well spectra and outward
//! shooting for interacting interiors.

mod roots;
mod shooting;
mod well;
mod zeros;

pub use roots::brent;
pub use shooting::{
    shoot, shooting_eigenfunction, shooting_solve, Integrator, ShootingConfig, Shot,
};
pub use well::well_spectrum;
pub use zeros::{bessel_zero, bessel_zeros};
