//! Geometry of the hyperbolic half-plane, semi-ideal polygonal domains with
//! horocycle data at their ideal vertices, and minimal graphs over them.
//!
//! The crate is organized as a pipeline: [`geom`] supplies the half-plane
//! toolkit, [`domain`] builds polygonal domains from end specifications,
//! [`jenkins`] certifies solvability of the Dirichlet problem at infinity,
//! [`mesh`] and [`solve`] discretize and solve the minimal graph equation on
//! capped truncations, and [`flux`], [`conjugate`] and [`diag`] extract the
//! quantities that control the limit behavior.

pub mod conjugate;
pub mod diag;
pub mod domain;
pub mod error;
pub mod export;
pub mod geom;
pub mod flux;
pub mod jenkins;
pub mod mesh;
pub mod solve;

pub use error::GeomError;
