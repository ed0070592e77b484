use serde::{Deserialize, Serialize};

use super::point::{ClosurePoint, HPoint, IdealPoint};
use crate::error::GeomError;

/// Complete geodesic: a vertical Euclidean ray or a Euclidean semicircle
/// centered on the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Geodesic {
    Vertical { x: f64 },
    Semicircle { center: f64, radius: f64 },
}

/// Geodesic through two distinct points of the closed half-plane.
///
/// Abscissae closer than `tol` are treated as equal, which turns the result
/// into a vertical line; exact ideal data is preserved where available, so a
/// geodesic built from an ideal endpoint passes through that endpoint exactly.
pub fn geodesic_through(
    a: impl Into<ClosurePoint>,
    b: impl Into<ClosurePoint>,
    tol: f64,
) -> Result<Geodesic, GeomError> {
    use ClosurePoint::{Ideal, Interior};
    use IdealPoint::{Finite, Infinity};
    match (a.into(), b.into()) {
        (Interior(p), Interior(q)) => {
            if (p.x - q.x).abs() <= tol {
                if (p.y - q.y).abs() <= tol {
                    return Err(GeomError::CoincidentPoints);
                }
                return Ok(Geodesic::Vertical {
                    x: 0.5 * (p.x + q.x),
                });
            }
            let center =
                (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
            let radius = (p.x - center).hypot(p.y);
            Ok(Geodesic::Semicircle { center, radius })
        }
        (Interior(p), Ideal(v)) | (Ideal(v), Interior(p)) => match v {
            Infinity => Ok(Geodesic::Vertical { x: p.x }),
            Finite(a) => {
                if (p.x - a).abs() <= tol {
                    return Ok(Geodesic::Vertical { x: a });
                }
                let center = (p.x * p.x + p.y * p.y - a * a) / (2.0 * (p.x - a));
                Ok(Geodesic::Semicircle {
                    center,
                    radius: (a - center).abs(),
                })
            }
        },
        (Ideal(v), Ideal(w)) => match (v, w) {
            (Infinity, Infinity) => Err(GeomError::CoincidentPoints),
            (Finite(a), Infinity) | (Infinity, Finite(a)) => Ok(Geodesic::Vertical { x: a }),
            (Finite(a), Finite(b)) => {
                if (a - b).abs() <= tol {
                    return Err(GeomError::CoincidentPoints);
                }
                Ok(Geodesic::Semicircle {
                    center: 0.5 * (a + b),
                    radius: 0.5 * (a - b).abs(),
                })
            }
        },
    }
}

impl Geodesic {
    /// Ideal endpoints in parameter order: the first is reached as the arc
    /// length parameter goes to minus infinity.
    pub fn ideal_endpoints(&self) -> (IdealPoint, IdealPoint) {
        match *self {
            Geodesic::Vertical { x } => (IdealPoint::Finite(x), IdealPoint::Infinity),
            Geodesic::Semicircle { center, radius } => (
                IdealPoint::Finite(center - radius),
                IdealPoint::Finite(center + radius),
            ),
        }
    }

    /// Unit speed parametrization. Verticals run upward, semicircles from the
    /// left endpoint to the right one.
    pub fn point_at(&self, sigma: f64) -> HPoint {
        match *self {
            Geodesic::Vertical { x } => HPoint::new(x, sigma.exp()),
            Geodesic::Semicircle { center, radius } => HPoint::new(
                center + radius * sigma.tanh(),
                radius / sigma.cosh(),
            ),
        }
    }

    /// Arc length parameter of a point assumed to lie on the geodesic.
    pub fn param_of(&self, p: HPoint) -> f64 {
        match *self {
            Geodesic::Vertical { .. } => p.y.ln(),
            Geodesic::Semicircle { center, .. } => ((p.x - center) / p.y).asinh(),
        }
    }

    /// Unit Euclidean tangent direction at parameter `sigma`, pointing toward
    /// increasing parameter.
    pub fn tangent_at(&self, sigma: f64) -> [f64; 2] {
        match *self {
            Geodesic::Vertical { .. } => [0.0, 1.0],
            Geodesic::Semicircle { .. } => {
                let c = sigma.cosh();
                [1.0 / c, -sigma.tanh()]
            }
        }
    }

    /// Sign of the defining function at `p`: for a vertical `x - x0`, for a
    /// semicircle `(x - c)^2 + y^2 - R^2`. Values within `tol` count as zero.
    pub fn side_of(&self, p: HPoint, tol: f64) -> i8 {
        let f = match *self {
            Geodesic::Vertical { x } => p.x - x,
            Geodesic::Semicircle { center, radius } => {
                let dx = p.x - center;
                dx * dx + p.y * p.y - radius * radius
            }
        };
        if f.abs() <= tol {
            0
        } else {
            f.signum() as i8
        }
    }

    /// Same sign convention as [`side_of`](Self::side_of) extended to the
    /// ideal boundary.
    pub fn side_of_ideal(&self, v: IdealPoint, tol: f64) -> i8 {
        let f = match (*self, v) {
            (Geodesic::Vertical { .. }, IdealPoint::Infinity) => 0.0,
            (Geodesic::Vertical { x }, IdealPoint::Finite(a)) => a - x,
            (Geodesic::Semicircle { .. }, IdealPoint::Infinity) => return 1,
            (Geodesic::Semicircle { center, radius }, IdealPoint::Finite(a)) => {
                let da = a - center;
                da * da - radius * radius
            }
        };
        if f.abs() <= tol {
            0
        } else {
            f.signum() as i8
        }
    }

    /// Hyperbolic distance from `p` to the geodesic.
    pub fn dist_to(&self, p: HPoint) -> f64 {
        self.sinh_dist_to(p).asinh()
    }

    /// Hyperbolic sine of the distance from `p` to the geodesic; cheaper than
    /// [`dist_to`](Self::dist_to) and monotone in it.
    pub fn sinh_dist_to(&self, p: HPoint) -> f64 {
        match *self {
            Geodesic::Vertical { x } => (p.x - x).abs() / p.y,
            Geodesic::Semicircle { center, radius } => {
                let dx = p.x - center;
                (dx * dx + p.y * p.y - radius * radius).abs() / (2.0 * radius * p.y)
            }
        }
    }
}
