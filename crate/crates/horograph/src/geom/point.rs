use serde::{Deserialize, Serialize};

/// Point of the open upper half-plane, `y > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0, "half-plane point needs y > 0, got y = {y}");
        Self { x, y }
    }
}

/// Normalization point for Busemann functions and the horocycle constructions.
pub const BASEPOINT: HPoint = HPoint { x: 0.0, y: 1.0 };

/// Point of the ideal boundary: an abscissa on the real axis or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}

impl IdealPoint {
    pub fn abscissa(self) -> Option<f64> {
        match self {
            IdealPoint::Finite(a) => Some(a),
            IdealPoint::Infinity => None,
        }
    }
}

/// Point of the closed half-plane, interior or ideal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosurePoint {
    Interior(HPoint),
    Ideal(IdealPoint),
}

impl From<HPoint> for ClosurePoint {
    fn from(p: HPoint) -> Self {
        ClosurePoint::Interior(p)
    }
}

impl From<IdealPoint> for ClosurePoint {
    fn from(b: IdealPoint) -> Self {
        ClosurePoint::Ideal(b)
    }
}

/// Hyperbolic distance between interior points.
pub fn dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    (1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)).acosh()
}
