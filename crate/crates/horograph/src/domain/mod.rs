//! Semi-ideal polygonal domains.
//!
//! A polygon here is a cyclic vertex list alternating between ideal points
//! and interior points, joined by complete geodesics, listed counterclockwise
//! so the domain sits on the left of each directed edge. Boundary edges carry
//! a two letter labeling: an edge leaving an ideal vertex is labeled `A`, an
//! edge entering one is labeled `B`. Every ideal vertex implicitly carries
//! the family of horocycles based at it; the construction normalizes them to
//! pass through the basepoint, which is Busemann level zero.

mod build;
mod countable;
mod json;
mod validate;

pub use build::{build_finite, EndKind, FiniteParams};
pub(crate) use build::alternating_labels;
pub use countable::{build_countable, CountableParams};
pub use json::{polygon_from_json, polygon_to_json};
pub use validate::validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::geom::{geodesic_through, Geodesic, HPoint, Horocycle, IdealPoint};

/// Vertex position: on the ideal boundary or in the interior.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum VertexKind {
    Ideal(IdealPoint),
    Interior(HPoint),
}

/// Structured vertex name recording which block of the construction produced
/// it. Anchors are the ideal vertices separating blocks, block ideals the
/// ideal vertices seeded or grown inside a block, corners the interior
/// vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexTag {
    Anchor { block: usize },
    BlockIdeal { block: usize, index: i32 },
    Corner { block: usize, index: i32 },
}

impl VertexTag {
    pub fn block(&self) -> usize {
        match *self {
            VertexTag::Anchor { block }
            | VertexTag::BlockIdeal { block, .. }
            | VertexTag::Corner { block, .. } => block,
        }
    }
}

impl fmt::Display for VertexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexTag::Anchor { block } => write!(f, "p_inf^{block}"),
            VertexTag::BlockIdeal { block, index } => write!(f, "p_{index}^{block}"),
            VertexTag::Corner { block, index } => write!(f, "q_{index}^{block}"),
        }
    }
}

impl std::str::FromStr for VertexTag {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DomainError::BadTag(s.to_string());
        let (head, block) = s.split_once('^').ok_or_else(bad)?;
        let block: usize = block.parse().map_err(|_| bad())?;
        if head == "p_inf" {
            return Ok(VertexTag::Anchor { block });
        }
        if let Some(idx) = head.strip_prefix("p_") {
            let index: i32 = idx.parse().map_err(|_| bad())?;
            return Ok(VertexTag::BlockIdeal { block, index });
        }
        if let Some(idx) = head.strip_prefix("q_") {
            let index: i32 = idx.parse().map_err(|_| bad())?;
            return Ok(VertexTag::Corner { block, index });
        }
        Err(bad())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub kind: VertexKind,
    pub tag: VertexTag,
}

impl Vertex {
    pub fn ideal(&self) -> Option<IdealPoint> {
        match self.kind {
            VertexKind::Ideal(v) => Some(v),
            VertexKind::Interior(_) => None,
        }
    }

    pub fn interior(&self) -> Option<HPoint> {
        match self.kind {
            VertexKind::Interior(p) => Some(p),
            VertexKind::Ideal(_) => None,
        }
    }
}

/// Boundary edge label. `A` edges leave an ideal vertex and carry the value
/// `+M` in the Dirichlet problems, `B` edges enter one and carry `-M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeLabel {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("geometry: {0}")]
    Geom(#[from] GeomError),
    #[error("anchor abscissae must be strictly increasing")]
    BadAnchors,
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error("seeds of block {block} violate their interval constraints")]
    InvalidSeeds { block: usize },
    #[error("countable family needs -1 < x2 < x3 <= 1 with x3 > 0")]
    InvalidLimits,
    #[error("empty choice interval extending block {block} ({side:?} side, step {step})")]
    EmptyChoiceInterval {
        block: usize,
        side: Side,
        step: usize,
    },
    #[error("horocycle intersection degenerates where a transversal corner is needed")]
    DegenerateIntersection,
    #[error("vertex and label counts differ or the polygon is too small")]
    BadShape,
    #[error("vertex kinds must alternate ideal and interior (vertex {0})")]
    NotAlternating(usize),
    #[error("edge {0} label does not match its endpoints")]
    BadLabel(usize),
    #[error("ideal vertices are out of cyclic order (vertex {0})")]
    IdealOrder(usize),
    #[error("at most one ideal vertex may sit at infinity")]
    DoubleInfinity,
    #[error("vertex {vertex} is not strictly on the inner side of edge {edge}")]
    NotConvex { edge: usize, vertex: usize },
    #[error("unparsable vertex tag: {0}")]
    BadTag(String),
    #[error("polygon JSON: {0}")]
    BadJson(String),
}

/// Which side of a block an operation touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Closed semi-ideal polygon with labeled edges. Edge `i` joins vertex `i`
/// to vertex `i + 1 mod n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Vertex>,
    edge_labels: Vec<EdgeLabel>,
}

impl Polygon {
    /// Assemble a polygon from raw parts, checking only the cheap structural
    /// invariants; run [`validate`] for the geometric ones.
    pub fn new(vertices: Vec<Vertex>, edge_labels: Vec<EdgeLabel>) -> Result<Self, DomainError> {
        if vertices.len() != edge_labels.len() || vertices.len() < 4 {
            return Err(DomainError::BadShape);
        }
        let poly = Polygon {
            vertices,
            edge_labels,
        };
        poly.check_alternation()?;
        Ok(poly)
    }

    fn check_alternation(&self) -> Result<(), DomainError> {
        let n = self.len();
        for i in 0..n {
            let here_ideal = self.vertices[i].ideal().is_some();
            let next_ideal = self.vertices[(i + 1) % n].ideal().is_some();
            if here_ideal == next_ideal {
                return Err(DomainError::NotAlternating(i));
            }
            let want = if here_ideal { EdgeLabel::A } else { EdgeLabel::B };
            if self.edge_labels[i] != want {
                return Err(DomainError::BadLabel(i));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i % self.len()]
    }

    pub fn label(&self, i: usize) -> EdgeLabel {
        self.edge_labels[i % self.len()]
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.edge_labels
    }

    pub fn ideal_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.vertices[i].ideal().is_some())
    }

    pub fn corner_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.vertices[i].interior().is_some())
    }

    /// Number of blocks, read off the vertex tags.
    pub fn block_count(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| v.tag.block())
            .max()
            .unwrap_or(0)
    }

    /// Geodesic carrying edge `i`.
    pub fn edge_geodesic(&self, i: usize) -> Result<Geodesic, GeomError> {
        let n = self.len();
        let p = to_closure(&self.vertices[i % n]);
        let q = to_closure(&self.vertices[(i + 1) % n]);
        geodesic_through(p, q, crate::geom::GEOM_TOL)
    }

    /// Whether edge `i` runs toward increasing arc length parameter of its
    /// geodesic.
    pub fn edge_forward(&self, i: usize) -> Result<bool, DomainError> {
        let n = self.len();
        let g = self.edge_geodesic(i)?;
        let v = &self.vertices[i % n];
        let w = &self.vertices[(i + 1) % n];
        Ok(match (&v.kind, &w.kind) {
            (VertexKind::Interior(p), VertexKind::Interior(q)) => g.param_of(*q) > g.param_of(*p),
            (VertexKind::Interior(_), VertexKind::Ideal(b)) => !is_neg_end(&g, *b),
            (VertexKind::Ideal(b), VertexKind::Interior(_)) => is_neg_end(&g, *b),
            (VertexKind::Ideal(_), VertexKind::Ideal(_)) => {
                return Err(DomainError::NotAlternating(i % n))
            }
        })
    }

    /// Sign of the defining function of edge `i` on the domain side.
    pub fn inward_sign(&self, i: usize) -> Result<i8, DomainError> {
        let g = self.edge_geodesic(i)?;
        let forward = self.edge_forward(i)?;
        Ok(match g {
            Geodesic::Vertical { .. } => {
                if forward {
                    -1
                } else {
                    1
                }
            }
            Geodesic::Semicircle { .. } => {
                if forward {
                    1
                } else {
                    -1
                }
            }
        })
    }

    /// Closed membership test against every edge geodesic. Valid polygons are
    /// convex, so this is exact for them.
    pub fn contains(&self, p: HPoint, tol: f64) -> Result<bool, DomainError> {
        for i in 0..self.len() {
            let g = self.edge_geodesic(i)?;
            let s = self.inward_sign(i)?;
            if g.side_of(p, edge_scaled_tol(&g, tol)) == -s {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Horocycle at the ideal vertex `i` sitting on the given Busemann level.
    pub fn horocycle(&self, i: usize, level: f64) -> Option<Horocycle> {
        self.vertices[i % self.len()]
            .ideal()
            .map(|base| Horocycle { base, level })
    }

    /// Edge index of the `ordinal`-th edge with the given label whose corner
    /// endpoint lies in `block`, in cycle order.
    pub fn find_edge(&self, label: EdgeLabel, block: usize, ordinal: usize) -> Option<usize> {
        let n = self.len();
        let mut seen = 0;
        for i in 0..n {
            if self.edge_labels[i] != label {
                continue;
            }
            let corner = if self.vertices[i].interior().is_some() {
                &self.vertices[i]
            } else {
                &self.vertices[(i + 1) % n]
            };
            if corner.tag.block() == block {
                if seen == ordinal {
                    return Some(i);
                }
                seen += 1;
            }
        }
        None
    }
}

pub(crate) fn to_closure(v: &Vertex) -> crate::geom::ClosurePoint {
    match v.kind {
        VertexKind::Ideal(b) => b.into(),
        VertexKind::Interior(p) => p.into(),
    }
}

/// Match an ideal point against the endpoints of a geodesic: true when it is
/// the endpoint reached as the parameter decreases.
pub(crate) fn is_neg_end(g: &Geodesic, b: IdealPoint) -> bool {
    let (neg, pos) = g.ideal_endpoints();
    match (neg, pos, b) {
        (_, IdealPoint::Infinity, IdealPoint::Infinity) => false,
        (IdealPoint::Finite(_), IdealPoint::Infinity, IdealPoint::Finite(_)) => true,
        (IdealPoint::Finite(l), IdealPoint::Finite(r), IdealPoint::Finite(a)) => {
            (a - l).abs() <= (a - r).abs()
        }
        _ => unreachable!("vertical geodesics have a finite lower endpoint"),
    }
}

/// Degeneracy tolerance scaled to the size of an edge geodesic, since the
/// defining function of a semicircle is quadratic in length.
pub(crate) fn edge_scaled_tol(g: &Geodesic, tol: f64) -> f64 {
    match *g {
        Geodesic::Vertical { .. } => tol,
        Geodesic::Semicircle { radius, .. } => tol * radius.max(1.0) * radius.max(1.0),
    }
}
