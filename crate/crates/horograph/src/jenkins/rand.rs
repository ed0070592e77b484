//! Seeded generators for aligned polygons and deliberate violations.
//!
//! The aligned sampler drops a common point and takes the horocycles
//! through it at a handful of ideal bases; consecutive horocycles meet a
//! second time, and those second meets are the corners. Alignment holds by
//! construction, validity is enforced by rejection. The violation sampler
//! starts from an aligned triple and inflates one horocycle, tracking the
//! two corners it carries, until a nonadjacent corner falls inside it.

use rand::Rng;

use crate::domain::{
    alternating_labels, validate, DomainError, Polygon, Vertex, VertexKind, VertexTag,
};
use crate::geom::{
    busemann, horocycle_at, horocycle_intersection, HPoint, Horocycle, HorocycleMeet, IdealPoint,
    GEOM_TOL,
};

use super::check_car;

/// Minimum clearance magnitude accepted by both samplers, so that the
/// certificates under test are never asked to resolve a near tie.
const MARGIN_GAP: f64 = 1e-3;

fn meet_pair(h1: &Horocycle, h2: &Horocycle) -> Option<(HPoint, HPoint)> {
    match horocycle_intersection(h1, h2, GEOM_TOL) {
        Ok(HorocycleMeet::Pair(p, q)) => Some((p, q)),
        _ => None,
    }
}

fn euclid2(p: HPoint, q: HPoint) -> f64 {
    (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y)
}

/// Second meet of two horocycles: the intersection point farther from `q`.
fn second_meet_from(h1: &Horocycle, h2: &Horocycle, q: HPoint) -> Option<HPoint> {
    let (a, b) = meet_pair(h1, h2)?;
    Some(if euclid2(a, q) >= euclid2(b, q) { a } else { b })
}

fn assemble(bases: &[f64], corners: &[HPoint]) -> Result<Polygon, DomainError> {
    let mut vertices = Vec::with_capacity(2 * bases.len());
    for (i, (&b, &c)) in bases.iter().zip(corners).enumerate() {
        vertices.push(Vertex {
            kind: VertexKind::Ideal(IdealPoint::Finite(b)),
            tag: VertexTag::BlockIdeal {
                block: 1,
                index: i as i32 + 1,
            },
        });
        vertices.push(Vertex {
            kind: VertexKind::Interior(c),
            tag: VertexTag::Corner {
                block: 1,
                index: i as i32 + 1,
            },
        });
    }
    let labels = alternating_labels(&vertices);
    let poly = Polygon::new(vertices, labels)?;
    validate(&poly, GEOM_TOL)?;
    Ok(poly)
}

fn sample_parts<R: Rng>(rng: &mut R, k: usize) -> Option<(Vec<f64>, Vec<Horocycle>, HPoint)> {
    let mut bases: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
    bases.sort_by(f64::total_cmp);
    if bases.windows(2).any(|w| w[1] - w[0] < 0.4) {
        return None;
    }
    let q = HPoint::new(rng.random_range(-3.0..3.0), rng.random_range(0.3..2.5));
    let hs = bases
        .iter()
        .map(|&a| horocycle_at(IdealPoint::Finite(a), q))
        .collect();
    Some((bases, hs, q))
}

fn star_from_parts(bases: &[f64], hs: &[Horocycle], q: HPoint) -> Option<Polygon> {
    let k = bases.len();
    let corners: Option<Vec<HPoint>> = if k == 2 {
        // A quadrilateral uses both meet points: the lower one between the
        // bases in cycle order, the upper one closing the cycle.
        let (top, bottom) = meet_pair(&hs[0], &hs[1])?;
        Some(vec![bottom, top])
    } else {
        (0..k)
            .map(|i| second_meet_from(&hs[i], &hs[(i + 1) % k], q))
            .collect()
    };
    assemble(bases, &corners?).ok()
}

/// Sample a valid polygon with `k` ideal vertices satisfying the corner
/// alignment condition, by rejection.
pub fn random_star_polygon<R: Rng>(rng: &mut R, k: usize) -> Polygon {
    assert!((2..=3).contains(&k), "sampler covers two or three cusps");
    loop {
        let Some((bases, hs, q)) = sample_parts(rng, k) else {
            continue;
        };
        let Some(poly) = star_from_parts(&bases, &hs, q) else {
            continue;
        };
        let margin = check_car(&poly, GEOM_TOL).margin;
        if margin.is_finite() && margin.abs() < MARGIN_GAP {
            continue;
        }
        return poly;
    }
}

/// Sample a valid aligned polygon with three ideal vertices whose clearance
/// condition fails: one horocycle is inflated step by step, the two corners
/// on it following by continuity, until the opposite corner sits inside it
/// with a definite gap.
pub fn random_violation<R: Rng>(rng: &mut R) -> Polygon {
    'outer: loop {
        let Some((bases, mut hs, q)) = sample_parts(rng, 3) else {
            continue;
        };
        let Some(mut poly) = star_from_parts(&bases, &hs, q) else {
            continue;
        };
        // Corner 3 is the second meet of horocycles 1 and 2, the one pair
        // not involving horocycle 0; it stays put while horocycle 0 grows.
        let opposite = poly.vertex(3).interior().unwrap();
        for _ in 0..400 {
            hs[0].level += 0.05;
            let clearance = busemann(hs[0].base, opposite) - hs[0].level;
            let mut corners = vec![
                poly.vertex(1).interior().unwrap(),
                poly.vertex(3).interior().unwrap(),
                poly.vertex(5).interior().unwrap(),
            ];
            // Follow each moved corner continuously: keep the meet point
            // nearer its previous position.
            let track = |pair: Option<(HPoint, HPoint)>, prev: HPoint| {
                let (a, b) = pair?;
                Some(if euclid2(a, prev) <= euclid2(b, prev) { a } else { b })
            };
            let Some(c01) = track(meet_pair(&hs[0], &hs[1]), corners[0]) else {
                continue 'outer;
            };
            let Some(c20) = track(meet_pair(&hs[2], &hs[0]), corners[2]) else {
                continue 'outer;
            };
            corners[0] = c01;
            corners[2] = c20;
            let Ok(candidate) = assemble(&bases, &corners) else {
                continue 'outer;
            };
            poly = candidate;
            if clearance <= -MARGIN_GAP {
                return poly;
            }
        }
    }
}
