use serde::{Deserialize, Serialize};

use super::point::{HPoint, IdealPoint};
use crate::error::GeomError;

/// Busemann function of `base`, normalized to vanish at the basepoint
/// `(0, 1)` and decreasing toward the base.
pub fn busemann(base: IdealPoint, p: HPoint) -> f64 {
    match base {
        IdealPoint::Infinity => -p.y.ln(),
        IdealPoint::Finite(a) => {
            let dx = p.x - a;
            (dx * dx + p.y * p.y).ln() - p.y.ln() - (a * a).ln_1p()
        }
    }
}

/// Horocycle described by its base point and the Busemann level it sits on.
///
/// The enclosed horodisk is the sublevel set `{ busemann < level }`, so
/// lowering the level shrinks the horocycle toward its base.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    pub base: IdealPoint,
    pub level: f64,
}

/// Horocycle through `p` based at `base`.
pub fn horocycle_at(base: IdealPoint, p: HPoint) -> Horocycle {
    Horocycle {
        base,
        level: busemann(base, p),
    }
}

impl Horocycle {
    /// Euclidean radius for a finite base; the Euclidean center is then
    /// `(a, radius)`.
    pub fn euclidean_radius(&self) -> Option<f64> {
        match self.base {
            IdealPoint::Finite(a) => Some(0.5 * (a * a + 1.0) * self.level.exp()),
            IdealPoint::Infinity => None,
        }
    }

    /// Euclidean height of the horizontal line realizing a horocycle based at
    /// infinity.
    pub fn height(&self) -> Option<f64> {
        match self.base {
            IdealPoint::Infinity => Some((-self.level).exp()),
            IdealPoint::Finite(_) => None,
        }
    }

    /// Busemann value at `p` minus the level: negative strictly inside the
    /// horodisk, zero on the horocycle.
    pub fn signed_depth(&self, p: HPoint) -> f64 {
        busemann(self.base, p) - self.level
    }

    /// Unit speed parametrization. A circle is traversed counterclockwise
    /// with `s = 0` at its top; a line based at infinity runs in the `+x`
    /// direction with `s = 0` at `x = 0`.
    pub fn point_at(&self, s: f64) -> HPoint {
        match self.base {
            IdealPoint::Infinity => {
                let h = self.height().unwrap();
                HPoint::new(s * h, h)
            }
            IdealPoint::Finite(a) => {
                let r = self.euclidean_radius().unwrap();
                let w = 1.0 + s * s;
                HPoint::new(a - 2.0 * r * s / w, 2.0 * r / w)
            }
        }
    }

    /// Arc length parameter of a point assumed to lie on the horocycle.
    pub fn param_of(&self, p: HPoint) -> f64 {
        match self.base {
            IdealPoint::Infinity => p.x / p.y,
            IdealPoint::Finite(a) => (a - p.x) / p.y,
        }
    }
}

/// Intersection of two horocycles with distinct bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HorocycleMeet {
    Empty,
    Tangent(HPoint),
    /// Two transversal points, ordered by decreasing `y` then increasing `x`.
    Pair(HPoint, HPoint),
}

/// Intersect two horocycles. Bases closer than `tol` are rejected; gaps
/// smaller than `tol` relative to the configuration scale count as tangent.
pub fn horocycle_intersection(
    c1: &Horocycle,
    c2: &Horocycle,
    tol: f64,
) -> Result<HorocycleMeet, GeomError> {
    use IdealPoint::{Finite, Infinity};
    match (c1.base, c2.base) {
        (Infinity, Infinity) => Err(GeomError::SameBase),
        (Finite(a), Finite(b)) if (a - b).abs() <= tol => Err(GeomError::SameBase),
        (Infinity, Finite(_)) => line_circle(c1, c2, tol),
        (Finite(_), Infinity) => line_circle(c2, c1, tol),
        (Finite(a1), Finite(a2)) => {
            let r1 = c1.euclidean_radius().unwrap();
            let r2 = c2.euclidean_radius().unwrap();
            let dx = a2 - a1;
            let dy = r2 - r1;
            let d2 = dx * dx + dy * dy;
            let d = d2.sqrt();
            let t = (d2 + r1 * r1 - r2 * r2) / (2.0 * d);
            let h2 = r1 * r1 - t * t;
            let thr = tol * d2.max(r1 * r1).max(r2 * r2).max(1.0);
            let ex = (dx / d, dy / d);
            if h2.abs() <= thr {
                let p = HPoint::new(a1 + t * ex.0, r1 + t * ex.1);
                Ok(HorocycleMeet::Tangent(p))
            } else if h2 < 0.0 {
                Ok(HorocycleMeet::Empty)
            } else {
                let h = h2.sqrt();
                let p = HPoint::new(a1 + t * ex.0 - h * ex.1, r1 + t * ex.1 + h * ex.0);
                let q = HPoint::new(a1 + t * ex.0 + h * ex.1, r1 + t * ex.1 - h * ex.0);
                Ok(order_pair(p, q))
            }
        }
    }
}

fn line_circle(line: &Horocycle, circle: &Horocycle, tol: f64) -> Result<HorocycleMeet, GeomError> {
    let h = line.height().unwrap();
    let a = circle.base.abscissa().unwrap();
    let r = circle.euclidean_radius().unwrap();
    let disc = h * (2.0 * r - h);
    let thr = tol * (h * h).max(r * r).max(1.0);
    if disc.abs() <= thr {
        Ok(HorocycleMeet::Tangent(HPoint::new(a, h)))
    } else if disc < 0.0 {
        Ok(HorocycleMeet::Empty)
    } else {
        let w = disc.sqrt();
        Ok(order_pair(
            HPoint::new(a - w, h),
            HPoint::new(a + w, h),
        ))
    }
}

fn order_pair(p: HPoint, q: HPoint) -> HorocycleMeet {
    if (q.y, p.x) > (p.y, q.x) {
        HorocycleMeet::Pair(q, p)
    } else {
        HorocycleMeet::Pair(p, q)
    }
}
