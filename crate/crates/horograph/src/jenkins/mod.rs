//! Solvability certificates for the Dirichlet problem at infinity.
//!
//! Two checks: the corner alignment condition, which asks that the two
//! corners adjacent to each ideal vertex lie on a common horocycle there,
//! and the horodisk clearance condition, which asks that every corner stays
//! strictly outside the horocycles of the ideal vertices it is not adjacent
//! to. Together they certify solvability; the truncated boundary length
//! oracle in [`truncated`] cross-checks the clearance condition by brute
//! force over inscribed polygons.

mod inscribed;
pub mod rand;
pub mod truncated;

pub use inscribed::enumerate_inscribed;

use crate::domain::{Polygon, VertexKind};
use crate::geom::busemann;

/// Residuals of the corner alignment condition, one per ideal vertex in
/// cycle order.
#[derive(Clone, Debug)]
pub struct StarReport {
    /// Ideal vertex index paired with the Busemann gap between its two
    /// adjacent corners.
    pub residuals: Vec<(usize, f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Outcome of the horodisk clearance check.
#[derive(Clone, Debug)]
pub struct CarReport {
    /// Smallest clearance over all admissible corner and ideal vertex pairs;
    /// infinite when no pair is admissible.
    pub margin: f64,
    /// Pair attaining the margin as `(corner index, ideal index)`.
    pub witness: Option<(usize, usize)>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct JsReport {
    pub star: StarReport,
    pub car: CarReport,
    pub is_js: bool,
}

/// Horocycle levels at the ideal vertices implied by the adjacent corners,
/// as `(vertex index, level)` in cycle order. The level is the mean of the
/// two adjacent corner Busemann values; the alignment residual bounds the
/// difference.
pub fn star_levels(poly: &Polygon) -> Vec<(usize, f64)> {
    let n = poly.len();
    poly.ideal_indices()
        .map(|i| {
            let base = poly.vertex(i).ideal().unwrap();
            let prev = poly.vertex((i + n - 1) % n).interior().unwrap();
            let next = poly.vertex((i + 1) % n).interior().unwrap();
            (i, 0.5 * (busemann(base, prev) + busemann(base, next)))
        })
        .collect()
}

/// Check the corner alignment condition.
pub fn check_star(poly: &Polygon, tol: f64) -> StarReport {
    let n = poly.len();
    let residuals: Vec<(usize, f64)> = poly
        .ideal_indices()
        .map(|i| {
            let base = poly.vertex(i).ideal().unwrap();
            let prev = poly.vertex((i + n - 1) % n).interior().unwrap();
            let next = poly.vertex((i + 1) % n).interior().unwrap();
            (i, (busemann(base, prev) - busemann(base, next)).abs())
        })
        .collect();
    let max_residual = residuals.iter().map(|&(_, r)| r).fold(0.0, f64::max);
    StarReport {
        residuals,
        max_residual,
        pass: max_residual <= tol,
    }
}

/// Check the horodisk clearance condition: for every corner and every ideal
/// vertex not adjacent to it, the corner must lie strictly outside that
/// vertex's horocycle. With two ideal vertices the condition is vacuous.
pub fn check_car(poly: &Polygon, tol: f64) -> CarReport {
    let n = poly.len();
    let levels = star_levels(poly);
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for j in 0..n {
        let p = match poly.vertex(j).kind {
            VertexKind::Interior(p) => p,
            VertexKind::Ideal(_) => continue,
        };
        for &(i, level) in &levels {
            if i == (j + 1) % n || i == (j + n - 1) % n {
                continue;
            }
            let base = poly.vertex(i).ideal().unwrap();
            let clearance = busemann(base, p) - level;
            if clearance < margin {
                margin = clearance;
                witness = Some((j, i));
            }
        }
    }
    CarReport {
        margin,
        witness,
        pass: margin > tol,
    }
}

/// Run both certificates.
pub fn check(poly: &Polygon, tol: f64) -> JsReport {
    let star = check_star(poly, tol);
    let car = check_car(poly, tol);
    let is_js = star.pass && car.pass;
    JsReport { star, car, is_js }
}
