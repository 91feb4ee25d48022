//! Controllability analysis and steering of nonlinearly perturbed linear
//! networked systems.
//!
//! The pipeline is: assemble `(𝒜, Ψ)` from node data ([`network`]), check the
//! linear part and estimate norm bounds ([`controllability`]), combine them
//! with the Hölder data of the perturbation into the contraction constant `M`
//! ([`perturbation`]), and compute a steering trajectory as the fixed point of
//! the solution map ([`steering`]). [`cli`] wires this to configuration files.

pub mod cli;
pub mod controllability;
pub mod error;
pub mod linalg;
pub mod network;
pub mod perturbation;
pub mod quadrature;
pub mod steering;

pub use error::{Error, Result};
