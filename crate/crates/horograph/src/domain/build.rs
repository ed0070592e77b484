use serde::{Deserialize, Serialize};

use super::{DomainError, EdgeLabel, Polygon, Side, Vertex, VertexKind, VertexTag};
use crate::geom::{
    dist, geodesic_through, horocycle_intersection, Geodesic, HPoint, Horocycle, HorocycleMeet,
    IdealPoint, BASEPOINT, GEOM_TOL,
};

/// How a limit end opens relative to its anchor: toward the block on its
/// left, on its right, or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndKind {
    Left,
    Right,
    TwoSided,
}

/// Parameters of the finite construction: `ends.len()` blocks separated by
/// the given anchor abscissae, with the first anchor at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteParams {
    /// Abscissae of the finite anchors, one per block boundary after the
    /// first; strictly increasing. Empty for a single block.
    pub anchors: Vec<f64>,
    /// End behavior at each anchor, index `m - 1` for the end at anchor `m`.
    pub ends: Vec<EndKind>,
    /// Optional per block seed abscissae overriding the defaults.
    pub seeds: Vec<Option<(f64, f64)>>,
    /// Extension depth `k >= 1`; `k = 1` is the seed polygon.
    pub depth: usize,
    /// Interpolation weight inside each choice interval, strictly between 0
    /// and 1.
    pub lambda: f64,
    /// Whether the end behavior wraps around, letting the end at the first
    /// anchor govern the far side of the last block.
    pub wrap: bool,
    pub tol: f64,
}

impl FiniteParams {
    pub fn new(blocks: usize) -> Self {
        FiniteParams {
            anchors: Vec::new(),
            ends: vec![EndKind::TwoSided; blocks],
            seeds: vec![None; blocks],
            depth: 1,
            lambda: 0.5,
            wrap: true,
            tol: GEOM_TOL,
        }
    }

    fn check(&self) -> Result<(), DomainError> {
        let m0 = self.ends.len();
        if m0 == 0 {
            return Err(DomainError::BadParams("at least one block".into()));
        }
        if self.anchors.len() != m0 - 1 {
            return Err(DomainError::BadParams(format!(
                "{} blocks need {} finite anchors, got {}",
                m0,
                m0 - 1,
                self.anchors.len()
            )));
        }
        if !self.anchors.windows(2).all(|w| w[0] < w[1]) {
            return Err(DomainError::BadAnchors);
        }
        if !self.seeds.is_empty() && self.seeds.len() != m0 {
            return Err(DomainError::BadParams(
                "seed overrides must cover every block".into(),
            ));
        }
        if self.depth == 0 {
            return Err(DomainError::BadParams("depth starts at 1".into()));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(DomainError::BadParams(
                "lambda must lie strictly between 0 and 1".into(),
            ));
        }
        Ok(())
    }
}

/// Per block working data shared by the finite and countable constructions.
pub(super) struct BlockPlan {
    pub block: usize,
    pub left: IdealPoint,
    pub right: IdealPoint,
    pub seeds: (f64, f64),
    pub depth_minus: usize,
    pub depth_plus: usize,
    pub lambda: f64,
    pub tol: f64,
}

/// Seed abscissae for a block over the interval `(lo, hi)`, where `None`
/// stands for an infinite endpoint. A block whose interval straddles zero is
/// clipped so its seeds surround zero inside the unit interval; the midpoints
/// of the clipped halves are the defaults. Bounded blocks off zero seed at
/// their third points, unbounded ones at unit offsets from their finite end.
pub(super) fn default_seeds(lo: Option<f64>, hi: Option<f64>) -> (f64, f64) {
    let lo_v = lo.unwrap_or(f64::NEG_INFINITY);
    let hi_v = hi.unwrap_or(f64::INFINITY);
    if lo_v < 0.0 && 0.0 < hi_v {
        (lo_v.max(-1.0) / 2.0, hi_v.min(1.0) / 2.0)
    } else {
        match (lo, hi) {
            (Some(lo), Some(hi)) => (lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0),
            (None, Some(hi)) => (hi - 2.0, hi - 1.0),
            (Some(lo), None) => (lo + 1.0, lo + 2.0),
            (None, None) => unreachable!("a doubly unbounded interval straddles zero"),
        }
    }
}

fn check_seeds(
    block: usize,
    lo: Option<f64>,
    hi: Option<f64>,
    seeds: (f64, f64),
) -> Result<(), DomainError> {
    let lo_v = lo.unwrap_or(f64::NEG_INFINITY);
    let hi_v = hi.unwrap_or(f64::INFINITY);
    let (s_minus, s_plus) = seeds;
    let ok = if lo_v < 0.0 && 0.0 < hi_v {
        lo_v.max(-1.0) < s_minus && s_minus < 0.0 && 0.0 < s_plus && s_plus < hi_v.min(1.0)
    } else {
        lo_v < s_minus && s_minus < s_plus && s_plus < hi_v
    };
    if ok {
        Ok(())
    } else {
        Err(DomainError::InvalidSeeds { block })
    }
}

/// Level zero horocycle at a base: the one through the basepoint.
fn c0(base: IdealPoint) -> Horocycle {
    Horocycle { base, level: 0.0 }
}

/// Second intersection of two level zero horocycles, the transversal point
/// away from the basepoint.
pub(super) fn second_meet(b1: IdealPoint, b2: IdealPoint, tol: f64) -> Result<HPoint, DomainError> {
    match horocycle_intersection(&c0(b1), &c0(b2), tol)? {
        HorocycleMeet::Pair(p, q) => {
            let (dp, dq) = (dist(p, BASEPOINT), dist(q, BASEPOINT));
            let far = if dp >= dq { p } else { q };
            if dp.max(dq) <= tol {
                return Err(DomainError::DegenerateIntersection);
            }
            Ok(far)
        }
        _ => Err(DomainError::DegenerateIntersection),
    }
}

/// Other ideal endpoint of the geodesic through `p` ending at `base`.
fn far_endpoint(base: IdealPoint, p: HPoint, tol: f64) -> Result<f64, DomainError> {
    let g = geodesic_through(base, p, tol)?;
    match (g, base) {
        (Geodesic::Vertical { x }, IdealPoint::Infinity) => Ok(x),
        (Geodesic::Vertical { .. }, IdealPoint::Finite(_)) => {
            Err(DomainError::DegenerateIntersection)
        }
        (Geodesic::Semicircle { .. }, IdealPoint::Infinity) => {
            unreachable!("a geodesic to infinity is vertical")
        }
        (Geodesic::Semicircle { center, radius }, IdealPoint::Finite(a)) => {
            let (l, r) = (center - radius, center + radius);
            Ok(if (a - l).abs() <= (a - r).abs() { r } else { l })
        }
    }
}

/// Grow one side of a block: starting from the outermost seed, repeatedly
/// intersect the current outer horocycle pair, shoot the two geodesics
/// through the corner, and place the next ideal vertex inside the choice
/// interval they cut out. Returns the ideal abscissae of the side, outermost
/// last.
fn grow_side(plan: &BlockPlan, side: Side) -> Result<Vec<f64>, DomainError> {
    let (seed, anchor, depth) = match side {
        Side::Plus => (plan.seeds.1, plan.right, plan.depth_plus),
        Side::Minus => (plan.seeds.0, plan.left, plan.depth_minus),
    };
    let mut xs = vec![seed];
    for step in 1..depth {
        let x_last = *xs.last().unwrap();
        let corner = second_meet(IdealPoint::Finite(x_last), anchor, plan.tol)?;
        let a = far_endpoint(IdealPoint::Finite(x_last), corner, plan.tol)?;
        let b = match anchor {
            IdealPoint::Infinity => corner.x,
            IdealPoint::Finite(_) => far_endpoint(anchor, corner, plan.tol)?,
        };
        let ordered = match side {
            Side::Plus => b < a - plan.tol,
            Side::Minus => a < b - plan.tol,
        };
        if !ordered {
            return Err(DomainError::EmptyChoiceInterval {
                block: plan.block,
                side,
                step,
            });
        }
        let x_new = (1.0 - plan.lambda) * b + plan.lambda * a;
        let between = match (side, anchor) {
            (Side::Plus, IdealPoint::Finite(hi)) => {
                x_new > x_last + plan.tol && x_new < hi - plan.tol
            }
            (Side::Plus, IdealPoint::Infinity) => x_new > x_last + plan.tol,
            (Side::Minus, IdealPoint::Finite(lo)) => {
                x_new < x_last - plan.tol && x_new > lo + plan.tol
            }
            (Side::Minus, IdealPoint::Infinity) => x_new < x_last - plan.tol,
        };
        if !between {
            return Err(DomainError::EmptyChoiceInterval {
                block: plan.block,
                side,
                step,
            });
        }
        xs.push(x_new);
    }
    Ok(xs)
}

/// Emit the vertex run of one block in cycle order, between its two anchors,
/// both excluded.
pub(super) fn assemble_block(plan: &BlockPlan) -> Result<Vec<Vertex>, DomainError> {
    let minus = grow_side(plan, Side::Minus)?;
    let plus = grow_side(plan, Side::Plus)?;
    let m = plan.block;
    let mut run = Vec::new();
    let corner = |b1, b2, index| -> Result<Vertex, DomainError> {
        Ok(Vertex {
            kind: VertexKind::Interior(second_meet(b1, b2, plan.tol)?),
            tag: VertexTag::Corner { block: m, index },
        })
    };
    let ideal = |x, index| Vertex {
        kind: VertexKind::Ideal(IdealPoint::Finite(x)),
        tag: VertexTag::BlockIdeal { block: m, index },
    };
    // Minus side, from the left anchor inward.
    let k_minus = minus.len();
    run.push(corner(
        plan.left,
        IdealPoint::Finite(minus[k_minus - 1]),
        -2 * k_minus as i32,
    )?);
    for j in (0..k_minus).rev() {
        run.push(ideal(minus[j], -(2 * j as i32 + 1)));
        let inner = if j > 0 {
            IdealPoint::Finite(minus[j - 1])
        } else {
            IdealPoint::Finite(plus[0])
        };
        run.push(corner(IdealPoint::Finite(minus[j]), inner, -(2 * j as i32))?);
    }
    // The corner between the innermost pair is q_0; the loop above emitted it
    // with index -0, which is fine. Continue outward on the plus side.
    for (j, &x) in plus.iter().enumerate() {
        run.push(ideal(x, 2 * j as i32 + 1));
        let outer = if j + 1 < plus.len() {
            IdealPoint::Finite(plus[j + 1])
        } else {
            plan.right
        };
        run.push(corner(IdealPoint::Finite(x), outer, 2 * (j as i32 + 1))?);
    }
    Ok(run)
}

/// Build the polygon of the finite construction.
pub fn build_finite(params: &FiniteParams) -> Result<Polygon, DomainError> {
    params.check()?;
    let m0 = params.ends.len();
    let anchor_point = |m: usize| -> IdealPoint {
        // Anchor 1 is infinity; anchor m for 2 <= m <= m0 is finite; the
        // right anchor of the last block wraps back to infinity.
        if m == 1 || m == m0 + 1 {
            IdealPoint::Infinity
        } else {
            IdealPoint::Finite(params.anchors[m - 2])
        }
    };
    let extended_plus = |m: usize| -> bool {
        // Governed by the end at the right anchor of block m.
        let e = if m == m0 {
            if !params.wrap {
                return false;
            }
            params.ends[0]
        } else {
            params.ends[m]
        };
        matches!(e, EndKind::Right | EndKind::TwoSided)
    };
    let extended_minus =
        |m: usize| -> bool { matches!(params.ends[m - 1], EndKind::Left | EndKind::TwoSided) };

    let mut vertices = Vec::new();
    for m in 1..=m0 {
        vertices.push(Vertex {
            kind: VertexKind::Ideal(anchor_point(m)),
            tag: VertexTag::Anchor { block: m },
        });
        let lo = match anchor_point(m) {
            IdealPoint::Finite(x) => Some(x),
            IdealPoint::Infinity => None,
        };
        let hi = match anchor_point(m + 1) {
            IdealPoint::Finite(x) => Some(x),
            IdealPoint::Infinity => None,
        };
        let seeds = params
            .seeds
            .get(m - 1)
            .copied()
            .flatten()
            .unwrap_or_else(|| default_seeds(lo, hi));
        check_seeds(m, lo, hi, seeds)?;
        let plan = BlockPlan {
            block: m,
            left: anchor_point(m),
            right: anchor_point(m + 1),
            seeds,
            depth_minus: if extended_minus(m) { params.depth } else { 1 },
            depth_plus: if extended_plus(m) { params.depth } else { 1 },
            lambda: params.lambda,
            tol: params.tol,
        };
        vertices.extend(assemble_block(&plan)?);
    }
    let labels = alternating_labels(&vertices);
    Polygon::new(vertices, labels)
}

/// Labels implied by the alternation rule: `A` out of an ideal vertex, `B`
/// out of an interior one.
pub(crate) fn alternating_labels(vertices: &[Vertex]) -> Vec<EdgeLabel> {
    vertices
        .iter()
        .map(|v| {
            if v.ideal().is_some() {
                EdgeLabel::A
            } else {
                EdgeLabel::B
            }
        })
        .collect()
}
