//! Triangulation of truncated polygonal domains.
//!
//! A polygon with aligned horocycles is truncated a fixed depth below its
//! alignment levels and the remaining region is meshed: the boundary becomes
//! a closed polyline of edge pieces, cap arcs and corners, the interior is
//! filled with a hyperbolic lattice, and a constrained Delaunay triangulation
//! ties the two together. Triangles are selected by flooding inward from the
//! boundary ring, so the meshed region is the polyline domain, not the exact
//! geodesic one.
//!
//! Vertices keep their boundary provenance, which is what the Dirichlet data
//! of the capped problem is defined in terms of: edge vertices carry the sign
//! of their edge label, cap arcs interpolate linearly between the two signs,
//! corners sit at zero.

mod boundary;
mod locate;

pub use locate::Locator;

use std::collections::{HashSet, VecDeque};

use spade::handles::FixedVertexHandle;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};
use thiserror::Error;

use crate::domain::{DomainError, EdgeLabel, Polygon};
use crate::geom::{busemann, HPoint, GEOM_TOL};
use crate::GeomError;
use crate::jenkins::star_levels;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("geometry: {0}")]
    Geom(#[from] GeomError),
    #[error("domain: {0}")]
    Domain(#[from] DomainError),
    #[error("triangulation: {0}")]
    Triangulation(String),
    #[error("degenerate mesh: {0}")]
    Degenerate(String),
}

/// Where a mesh vertex sits on the truncated boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryClass {
    /// On the geodesic edge with this index and label.
    Edge { edge: usize, label: EdgeLabel },
    /// On the cap arc of this ideal vertex, at fraction `t` from the
    /// entering edge to the leaving one.
    Arc { ideal: usize, t: f64 },
    /// A finite vertex of the polygon.
    Corner { vertex: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct MeshParams {
    /// Target step in hyperbolic length.
    pub h: f64,
    /// How far below the alignment levels the caps are placed.
    pub depth: f64,
    /// Interior lattice points closer than `boundary_gap * h` to an edge or
    /// cap are dropped in favor of the boundary polyline.
    pub boundary_gap: f64,
}

impl MeshParams {
    pub fn new(h: f64) -> Self {
        MeshParams {
            h,
            depth: 3.0,
            boundary_gap: 0.7,
        }
    }

    pub fn with_depth(mut self, depth: f64) -> Self {
        self.depth = depth;
        self
    }
}

/// Triangulated truncation of a polygon.
///
/// `points` and `boundary` are parallel; `triangles` index into them with
/// counterclockwise orientation. `ring` lists the boundary vertices in
/// counterclockwise order around the domain.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub points: Vec<HPoint>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<Option<BoundaryClass>>,
    pub ring: Vec<usize>,
    pub levels: Vec<(usize, f64)>,
    pub h: f64,
}

impl Mesh {
    pub fn build(poly: &Polygon, params: &MeshParams) -> Result<Mesh, MeshError> {
        if !(params.h > 0.0) || !(params.depth > 0.0) {
            return Err(MeshError::Degenerate(
                "step and depth must be positive".into(),
            ));
        }
        let levels: Vec<(usize, f64)> = star_levels(poly)
            .into_iter()
            .map(|(i, l)| (i, l - params.depth))
            .collect();
        let ring_pts = boundary::boundary_ring(poly, &levels, params.h)?;
        let lattice = lattice_points(poly, &levels, &ring_pts, params)?;

        let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> =
            ConstrainedDelaunayTriangulation::new();
        let mut ring_handles: Vec<FixedVertexHandle> = Vec::with_capacity(ring_pts.len());
        let mut inserted: Vec<(HPoint, Option<BoundaryClass>)> = Vec::new();
        for rp in &ring_pts {
            let handle = cdt
                .insert(Point2::new(rp.point.x, rp.point.y))
                .map_err(|e| MeshError::Triangulation(format!("{e:?}")))?;
            if handle.index() == inserted.len() {
                inserted.push((rp.point, Some(rp.class)));
                ring_handles.push(handle);
            } else if ring_handles.last() != Some(&handle) {
                return Err(MeshError::Degenerate(
                    "boundary ring revisits a vertex".into(),
                ));
            }
        }
        for w in ring_handles.windows(2) {
            cdt.add_constraint(w[0], w[1]);
        }
        cdt.add_constraint(*ring_handles.last().unwrap(), ring_handles[0]);

        for &p in &lattice {
            let handle = cdt
                .insert(Point2::new(p.x, p.y))
                .map_err(|e| MeshError::Triangulation(format!("{e:?}")))?;
            if handle.index() == inserted.len() {
                inserted.push((p, None));
            }
        }

        let seed = cdt
            .get_edge_from_neighbors(ring_handles[0], ring_handles[1])
            .ok_or_else(|| MeshError::Degenerate("ring edge lost in triangulation".into()))?;
        let seed_face = seed
            .face()
            .as_inner()
            .ok_or_else(|| MeshError::Degenerate("domain lies outside its ring".into()))?;

        let mut visited: HashSet<usize> = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(seed_face.index());
        queue.push_back(seed_face.fix());
        let mut faces = Vec::new();
        while let Some(fixed) = queue.pop_front() {
            faces.push(fixed);
            let face = cdt.face(fixed);
            for edge in face.adjacent_edges() {
                if cdt.is_constraint_edge(edge.fix().as_undirected()) {
                    continue;
                }
                if let Some(next) = edge.rev().face().as_inner() {
                    if visited.insert(next.index()) {
                        queue.push_back(next.fix());
                    }
                }
            }
        }
        faces.sort_by_key(|f| f.index());

        let mut keep = vec![usize::MAX; inserted.len()];
        for handle in &ring_handles {
            keep[handle.index()] = 0;
        }
        let mut raw_triangles = Vec::with_capacity(faces.len());
        for fixed in &faces {
            let vs = cdt.face(*fixed).vertices();
            let tri = [vs[0].fix().index(), vs[1].fix().index(), vs[2].fix().index()];
            for v in tri {
                keep[v] = 0;
            }
            raw_triangles.push(tri);
        }
        let mut points = Vec::new();
        let mut bclass = Vec::new();
        for (old, slot) in keep.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = points.len();
                points.push(inserted[old].0);
                bclass.push(inserted[old].1);
            }
        }
        let triangles = raw_triangles
            .into_iter()
            .map(|t| t.map(|v| keep[v]))
            .collect();
        let ring = ring_handles.iter().map(|h| keep[h.index()]).collect();

        Ok(Mesh {
            points,
            triangles,
            boundary: bclass,
            ring,
            levels,
            h: params.h,
        })
    }

    /// Capped boundary data: `m` on the A side, `-m` on the B side, linear
    /// along cap arcs, zero at corners. `None` marks interior vertices.
    pub fn dirichlet(&self, m: f64) -> Vec<Option<f64>> {
        self.boundary
            .iter()
            .map(|class| {
                class.map(|c| match c {
                    BoundaryClass::Edge { label, .. } => match label {
                        EdgeLabel::A => m,
                        EdgeLabel::B => -m,
                    },
                    BoundaryClass::Arc { t, .. } => m * (2.0 * t - 1.0),
                    BoundaryClass::Corner { .. } => 0.0,
                })
            })
            .collect()
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| i)
    }

    /// Hyperbolic diameter, realized on the boundary ring.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, &a) in self.ring.iter().enumerate() {
            for &b in &self.ring[i + 1..] {
                best = best.max(crate::geom::dist(self.points[a], self.points[b]));
            }
        }
        best
    }
}


fn lattice_points(
    poly: &Polygon,
    levels: &[(usize, f64)],
    ring: &[boundary::RingPoint],
    params: &MeshParams,
) -> Result<Vec<HPoint>, MeshError> {
    let h = params.h;
    let margin = params.boundary_gap * h;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    for rp in ring {
        ymin = ymin.min(rp.point.y);
        ymax = ymax.max(rp.point.y);
        xmin = xmin.min(rp.point.x);
        xmax = xmax.max(rp.point.x);
    }
    let geodesics: Vec<_> = (0..poly.len())
        .map(|i| poly.edge_geodesic(i))
        .collect::<Result<_, _>>()?;
    let bases: Vec<_> = levels
        .iter()
        .map(|&(i, l)| (poly.vertex(i).ideal().unwrap(), l))
        .collect();

    let jmin = (ymin.ln() / h).floor() as i64;
    let jmax = (ymax.ln() / h).ceil() as i64;
    let mut out = Vec::new();
    for j in jmin..=jmax {
        let y = (j as f64 * h).exp();
        let dx = h * y;
        let kmin = (xmin / dx - 0.5).floor() as i64;
        let kmax = (xmax / dx - 0.5).ceil() as i64;
        for k in kmin..=kmax {
            let p = HPoint::new((k as f64 + 0.5) * dx, y);
            if !poly.contains(p, GEOM_TOL)? {
                continue;
            }
            if geodesics.iter().any(|g| g.dist_to(p) < margin) {
                continue;
            }
            if bases.iter().any(|&(b, l)| busemann(b, p) - l < margin) {
                continue;
            }
            out.push(p);
        }
    }
    Ok(out)
}
