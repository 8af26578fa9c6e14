//! Numerical kernels shared by the rest of the crate.
//!
//! Everything here is pure and reentrant.

pub mod bessel;
pub mod cubic;
pub mod gamma;
pub mod quadrature;
pub mod roots;

pub use bessel::{bessel_j, bessel_j_orders, bessel_j_prime};
pub use cubic::{solve_cubic_real, CubicRoot};
pub use gamma::gamma;
pub use quadrature::{integrate_adaptive, integrate_adaptive_with, QuadratureOptions, QuadratureResult};
pub use roots::{refine_root, Bracket};
