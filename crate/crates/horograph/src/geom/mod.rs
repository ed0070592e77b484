//! Exact constructions in the upper half-plane model.
//!
//! Points carry Euclidean coordinates `(x, y)` with `y > 0` and the metric is
//! `(dx^2 + dy^2) / y^2`. Ideal points are the real axis together with the
//! point at infinity. Busemann functions are normalized to vanish at the
//! basepoint `(0, 1)`, so a horocycle is described by its base together with
//! the Busemann level it sits on, and deeper horocycles have lower level.

mod geodesic;
mod horocycle;
mod length;
mod point;
mod profile;

pub use geodesic::{geodesic_through, Geodesic};
pub use horocycle::{busemann, horocycle_at, horocycle_intersection, Horocycle, HorocycleMeet};
pub use length::{hyp_length, PolylineMode};
pub use point::{dist, ClosurePoint, HPoint, IdealPoint, BASEPOINT};
pub use profile::{busemann_profile, BusemannProfile, SigmaSet};

/// Default absolute tolerance for degeneracy decisions in constructions.
pub const GEOM_TOL: f64 = 1e-10;
