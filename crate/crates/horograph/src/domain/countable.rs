use serde::{Deserialize, Serialize};

use super::build::{alternating_labels, assemble_block, default_seeds, second_meet, BlockPlan};
use super::{DomainError, Polygon, Vertex, VertexKind, VertexTag};
use crate::geom::{geodesic_through, Geodesic, IdealPoint, GEOM_TOL};

/// Parameters of the countable family. The anchor abscissae after the first
/// two are generated by the horocycle recursion, so a single pair of starting
/// abscissae and an interpolation weight determine every exhaustion element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountableParams {
    /// Abscissa of the second anchor, in `(-1, x3)`.
    pub x2: f64,
    /// Abscissa of the third anchor, in `(0, 1]` and above `x2`.
    pub x3: f64,
    /// Interpolation weight generating the anchors past the third.
    pub lambda_inf: f64,
    /// Interpolation weight for the block extensions.
    pub lambda: f64,
    pub tol: f64,
}

impl Default for CountableParams {
    fn default() -> Self {
        CountableParams {
            x2: -0.5,
            x3: 0.5,
            lambda_inf: 0.5,
            lambda: 0.5,
            tol: GEOM_TOL,
        }
    }
}

impl CountableParams {
    fn check(&self) -> Result<(), DomainError> {
        if !(-1.0 < self.x2 && self.x2 < self.x3 && self.x3 <= 1.0 && self.x3 > 0.0) {
            return Err(DomainError::InvalidLimits);
        }
        for l in [self.lambda_inf, self.lambda] {
            if !(l > 0.0 && l < 1.0) {
                return Err(DomainError::BadParams(
                    "interpolation weights must lie strictly between 0 and 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// Anchor abscissae `x2, x3, ...` out to anchor `count + 1`: each new one
    /// is placed inside the interval cut out by the two geodesics through the
    /// unit height corner over the previous anchor.
    pub fn anchor_run(&self, count: usize) -> Result<Vec<f64>, DomainError> {
        self.check()?;
        let mut xs = vec![self.x2, self.x3];
        while xs.len() < count {
            let x = *xs.last().unwrap();
            let corner = crate::geom::HPoint::new(2.0 * x, 1.0);
            let b = corner.x;
            let g = geodesic_through(IdealPoint::Finite(x), corner, self.tol)?;
            let a = match g {
                Geodesic::Semicircle { center, radius } => {
                    let (l, r) = (center - radius, center + radius);
                    if (x - l).abs() <= (x - r).abs() {
                        r
                    } else {
                        l
                    }
                }
                Geodesic::Vertical { .. } => return Err(DomainError::DegenerateIntersection),
            };
            if !(b < a - self.tol) {
                return Err(DomainError::InvalidLimits);
            }
            xs.push((1.0 - self.lambda_inf) * b + self.lambda_inf * a);
        }
        Ok(xs)
    }
}

/// Build the `k`-th exhaustion element of the countable family: blocks
/// `1..=k+1` grown on both sides, graded so block `m` reaches depth
/// `k + 2 - m`, closed off past the last anchor by the unit height corner
/// over it.
pub fn build_countable(params: &CountableParams, k: usize) -> Result<Polygon, DomainError> {
    params.check()?;
    if k == 0 {
        return Err(DomainError::BadParams("exhaustion index starts at 1".into()));
    }
    let blocks = k + 1;
    // Anchors 2..=k+2; anchor 1 is infinity.
    let anchors = params.anchor_run(blocks + 1)?;
    let anchor_point = |m: usize| -> IdealPoint {
        if m == 1 {
            IdealPoint::Infinity
        } else {
            IdealPoint::Finite(anchors[m - 2])
        }
    };
    let mut vertices = Vec::new();
    for m in 1..=blocks {
        vertices.push(Vertex {
            kind: VertexKind::Ideal(anchor_point(m)),
            tag: VertexTag::Anchor { block: m },
        });
        let lo = anchor_point(m).abscissa();
        let hi = anchor_point(m + 1).abscissa();
        // Inner blocks are older and deeper; no block exceeds depth k.
        let depth = (k + 2 - m).min(k);
        let plan = BlockPlan {
            block: m,
            left: anchor_point(m),
            right: anchor_point(m + 1),
            seeds: default_seeds(lo, hi),
            depth_minus: depth,
            depth_plus: depth,
            lambda: params.lambda,
            tol: params.tol,
        };
        vertices.extend(assemble_block(&plan)?);
    }
    // Closing pair: the last anchor and the corner joining its horocycle to
    // the unit height one, after which the boundary runs back to infinity.
    let last = blocks + 1;
    vertices.push(Vertex {
        kind: VertexKind::Ideal(anchor_point(last)),
        tag: VertexTag::Anchor { block: last },
    });
    vertices.push(Vertex {
        kind: VertexKind::Interior(second_meet(
            anchor_point(last),
            IdealPoint::Infinity,
            params.tol,
        )?),
        tag: VertexTag::Corner {
            block: last,
            index: 0,
        },
    });
    let labels = alternating_labels(&vertices);
    Polygon::new(vertices, labels)
}
