//! Median dual loops around sets of mesh vertices.
//!
//! The median dual cell of a vertex collects, in each incident triangle, the
//! quadrilateral between the vertex, the midpoints of its two edges and the
//! centroid. The outward flux of the piecewise constant normalized gradient
//! across a cell boundary equals minus the energy residual of the vertex, so
//! boundaries of unions of cells are the loops along which discrete flux
//! conservation is exact rather than first order.

use std::collections::HashMap;

use crate::geom::HPoint;
use crate::mesh::Mesh;

use super::FluxError;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    /// Midpoint of the mesh edge between these vertices, sorted.
    Mid(usize, usize),
    /// Centroid of this triangle.
    Centroid(usize),
}

/// Closed polylines bounding the union of median dual cells of the marked
/// vertices, each traversed with the marked side on the left.
///
/// The marked set must stay clear of the boundary ring: cells of ring
/// vertices are not closed by triangles alone.
pub fn dual_loops(mesh: &Mesh, in_set: &[bool]) -> Result<Vec<Vec<HPoint>>, FluxError> {
    assert_eq!(in_set.len(), mesh.points.len());
    let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            edge_tris.entry((u.min(v), u.max(v))).or_default().push(t);
        }
    }

    let midpoint = |u: usize, v: usize| {
        let (p, q) = (mesh.points[u], mesh.points[v]);
        HPoint::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
    };
    let centroid = |t: usize| {
        let ps = mesh.triangles[t].map(|v| mesh.points[v]);
        HPoint::new(
            (ps[0].x + ps[1].x + ps[2].x) / 3.0,
            (ps[0].y + ps[1].y + ps[2].y) / 3.0,
        )
    };

    let mut segments: Vec<(Node, Node, HPoint, HPoint)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = edge_tris.keys().copied().collect();
    edges.sort_unstable();
    for (u, v) in edges {
        if in_set[u] == in_set[v] {
            continue;
        }
        let tris = &edge_tris[&(u, v)];
        if tris.len() != 2 {
            return Err(FluxError::TouchesBoundary);
        }
        let marked = if in_set[u] { u } else { v };
        let mid = midpoint(u, v);
        for &t in tris {
            let cen = centroid(t);
            let to_marked = (
                mesh.points[marked].x - mid.x,
                mesh.points[marked].y - mid.y,
            );
            let along = (cen.x - mid.x, cen.y - mid.y);
            let cross = along.0 * to_marked.1 - along.1 * to_marked.0;
            if cross > 0.0 {
                segments.push((Node::Mid(u, v), Node::Centroid(t), mid, cen));
            } else {
                segments.push((Node::Centroid(t), Node::Mid(u, v), cen, mid));
            }
        }
    }
    if segments.is_empty() {
        return Ok(Vec::new());
    }

    let mut outgoing: HashMap<Node, usize> = HashMap::new();
    for (i, seg) in segments.iter().enumerate() {
        if outgoing.insert(seg.0, i).is_some() {
            return Err(FluxError::OpenChain);
        }
    }
    let mut seen = vec![false; segments.len()];
    let mut loops = Vec::new();
    for start in 0..segments.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = start;
        loop {
            seen[at] = true;
            cycle.push(segments[at].2);
            let next = *outgoing
                .get(&segments[at].1)
                .ok_or(FluxError::OpenChain)?;
            if next == start {
                break;
            }
            if seen[next] {
                return Err(FluxError::OpenChain);
            }
            at = next;
        }
        loops.push(cycle);
    }
    Ok(loops)
}
