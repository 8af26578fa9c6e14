//! Two-term spectral asymptotics of the planar Lamé operator.
//!
//! The crate evaluates the competing closed-form predictions for the second
//! Weyl and heat-trace coefficients of linear elasticity, computes elastic
//! spectra of the unit disk from Bessel determinants, and fits the measured
//! coefficients so the predictions can be compared against actual spectra.
//!
//! Layout:
//! - [`numerics`]: Bessel functions, adaptive quadrature, root refinement, cubics.
//! - [`material`]: Lamé parameters, admissible ranges, Rayleigh sextic.
//! - [`predictions`]: closed-form coefficient predictions from each theory.
//! - [`spectrum`]: scalar and elastic disk spectra, verification, caching.
//! - [`asymptotics`]: counting functions, heat traces, fits, adjudication.
//! - [`cli`]: command implementations behind the `lame-weyl` binary.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// coefficient tables are quoted at their published precision
#![allow(clippy::excessive_precision)]

pub mod asymptotics;
pub mod cli;
pub mod domain;
pub mod error;
pub mod material;
pub mod numerics;
pub mod predictions;
pub mod spectrum;

pub use domain::{BoundaryCondition, DomainDescriptor, DomainKind};
pub use error::{Error, Result};
pub use material::{make_material, rayleigh_roots, ElasticMaterial, RayleighRoots};
