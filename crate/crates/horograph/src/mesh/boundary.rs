//! Boundary discretization of a truncated polygon.
//!
//! The truncated boundary alternates between geodesic edge pieces, running
//! from a corner down to the horocycle at the edge's ideal end, and
//! horocycle arcs capping each cusp between the two adjacent edge pieces.
//! Edge pieces are walked from the corner toward the cusp with steps capped
//! by the local wedge width, so the strip between the two edges of a cusp
//! stays meshable by near isotropic triangles; arcs are split uniformly in
//! their unit speed parameter.

use crate::domain::{DomainError, Polygon, VertexKind};
use crate::geom::{busemann_profile, BusemannProfile, Geodesic, HPoint, Horocycle, IdealPoint};

use super::{BoundaryClass, MeshError};

pub(super) struct RingPoint {
    pub point: HPoint,
    pub class: BoundaryClass,
}

/// Parameter of the crossing between an edge and the horocycle at its own
/// ideal end, on the given level.
fn cut_param(g: &Geodesic, edge_base: IdealPoint, level: f64) -> Result<f64, MeshError> {
    match busemann_profile(g, edge_base) {
        BusemannProfile::Linear { b0, slope } => Ok((level - b0) / slope),
        BusemannProfile::Cosh { .. } => Err(MeshError::Degenerate(
            "edge profile at its own ideal end must be linear".into(),
        )),
    }
}

/// Interior subdivision parameters of an edge piece, walked from the corner
/// at `from` toward the cut at `to`, excluding both endpoints. Steps shrink
/// with the distance to the opposite edge of the cusp.
fn graded_params(g: &Geodesic, from: f64, to: f64, opposite: &Geodesic, h: f64) -> Vec<f64> {
    let dir = if to >= from { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    let mut s = from;
    loop {
        let gap = opposite.dist_to(g.point_at(s));
        let step = h.min(0.7 * gap).max(1e-3 * h);
        let next = s + dir * step;
        if (to - next) * dir <= 0.3 * step {
            return out;
        }
        out.push(next);
        s = next;
    }
}

/// Closed counterclockwise polyline around the truncation of `poly` with the
/// horocycle at ideal vertex `i` placed on `levels[i]`.
pub(super) fn boundary_ring(
    poly: &Polygon,
    levels: &[(usize, f64)],
    h: f64,
) -> Result<Vec<RingPoint>, MeshError> {
    let n = poly.len();
    let level_of = |i: usize| {
        levels
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|&(_, l)| l)
            .ok_or_else(|| MeshError::Degenerate(format!("no level for ideal vertex {i}")))
    };

    let mut ring = Vec::new();
    for c in 0..n {
        let corner = match poly.vertex(c).kind {
            VertexKind::Interior(p) => p,
            VertexKind::Ideal(_) => continue,
        };
        ring.push(RingPoint {
            point: corner,
            class: BoundaryClass::Corner { vertex: c },
        });

        let i = (c + 1) % n;
        let base = poly.vertex(i).ideal().ok_or(DomainError::NotAlternating(c))?;
        let level = level_of(i)?;
        let c2 = (i + 1) % n;
        let corner_out = poly
            .vertex(c2)
            .interior()
            .ok_or(DomainError::NotAlternating(i))?;

        let edge_in = c;
        let edge_out = i;
        let g_in = poly.edge_geodesic(edge_in)?;
        let g_out = poly.edge_geodesic(edge_out)?;

        let sig_corner_in = g_in.param_of(corner);
        let cut_in = cut_param(&g_in, base, level)?;
        let sig_corner_out = g_out.param_of(corner_out);
        let cut_out = cut_param(&g_out, base, level)?;

        for s in graded_params(&g_in, sig_corner_in, cut_in, &g_out, h) {
            ring.push(RingPoint {
                point: g_in.point_at(s),
                class: BoundaryClass::Edge {
                    edge: edge_in,
                    label: poly.label(edge_in),
                },
            });
        }
        let p_in = g_in.point_at(cut_in);
        ring.push(RingPoint {
            point: p_in,
            class: BoundaryClass::Edge {
                edge: edge_in,
                label: poly.label(edge_in),
            },
        });

        let horo = Horocycle { base, level };
        let p_out = g_out.point_at(cut_out);
        let s_in = horo.param_of(p_in);
        let s_out = horo.param_of(p_out);
        let span = s_out - s_in;
        let segments = (span.abs() / h).ceil().max(1.0) as usize;
        for k in 1..segments {
            let t = k as f64 / segments as f64;
            ring.push(RingPoint {
                point: horo.point_at(s_in + span * t),
                class: BoundaryClass::Arc { ideal: i, t },
            });
        }

        ring.push(RingPoint {
            point: p_out,
            class: BoundaryClass::Edge {
                edge: edge_out,
                label: poly.label(edge_out),
            },
        });
        let mut up = graded_params(&g_out, sig_corner_out, cut_out, &g_in, h);
        up.reverse();
        for s in up {
            ring.push(RingPoint {
                point: g_out.point_at(s),
                class: BoundaryClass::Edge {
                    edge: edge_out,
                    label: poly.label(edge_out),
                },
            });
        }
    }
    if ring.len() < 3 {
        return Err(MeshError::Degenerate("empty boundary ring".into()));
    }
    Ok(ring)
}
