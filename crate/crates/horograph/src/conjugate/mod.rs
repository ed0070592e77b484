//! Conjugation diagnostics: angle function, conjugate height, and the
//! flatness of the boundary pieces that collapse onto corner walls.
//!
//! The graph immersion (x, y) -> (x, y, u) carries the product metric; the
//! differential of the height rotated by a quarter turn in the induced
//! metric of each triangle gives the conjugate one-form. In coordinates it
//! comes out as (q dx - p dy) / W with (p, q) the Euclidean gradient and W
//! the tilt, which is minus the flux form. The sign picks the rotation J
//! with (v, Jv) positively oriented.
//!
//! The form is piecewise constant, so it is single-valued on segments that
//! stay inside one triangle. Integration therefore runs over the dual graph:
//! centroid to edge midpoint to neighboring centroid, each half inside its
//! own triangle. Around a mesh vertex that path is the median cell boundary,
//! whose circulation is the vertex residual of the energy, so at a converged
//! solution the one-form is closed up to solver tolerance and the height
//! integrates consistently along any dual path. A spanning tree of the dual
//! graph fixes the triangle values and vertex values come from averaging the
//! affine extensions of the incident triangles.
//!
//! The holonomy is reported on the median cells themselves: one independent
//! cycle per interior vertex, which is a basis of the dual cycle space, and
//! the basis in which closedness of the form is literally the discrete
//! harmonicity of the height. Two dual paths between the same triangles can
//! disagree by at most the sum of the cell holonomies they enclose, each
//! bounded by the reported defect.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::geom::dist;
use crate::mesh::{BoundaryClass, Mesh};

#[derive(Debug, thiserror::Error)]
pub enum ConjError {
    #[error("mesh is not a triangulated disk")]
    MeshNotSimplyConnected,
}

/// Per-triangle Euclidean gradient by Cramer's rule on the edge vectors.
/// The solver keeps its own shape-vector route; this one exists so the two
/// can be compared as independent computations.
fn tri_gradient(mesh: &Mesh, u: &[f64], t: usize) -> [f64; 2] {
    let [a, b, c] = mesh.triangles[t];
    let (pa, pb, pc) = (mesh.points[a], mesh.points[b], mesh.points[c]);
    let e1 = [pb.x - pa.x, pb.y - pa.y];
    let e2 = [pc.x - pa.x, pc.y - pa.y];
    let du1 = u[b] - u[a];
    let du2 = u[c] - u[a];
    let det = e1[0] * e2[1] - e1[1] * e2[0];
    [
        (du1 * e2[1] - du2 * e1[1]) / det,
        (e1[0] * du2 - e2[0] * du1) / det,
    ]
}

fn centroid(mesh: &Mesh, t: usize) -> [f64; 2] {
    let [a, b, c] = mesh.triangles[t];
    let (pa, pb, pc) = (mesh.points[a], mesh.points[b], mesh.points[c]);
    [(pa.x + pb.x + pc.x) / 3.0, (pa.y + pb.y + pc.y) / 3.0]
}

/// Vertical component of the upward unit normal, per triangle:
/// 1 / sqrt(1 + y^2 |grad u|^2) with y at the centroid. Lies in (0, 1],
/// equal to 1 exactly on horizontal graphs.
pub fn angle_function(mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    (0..mesh.triangles.len())
        .map(|t| {
            let g = tri_gradient(mesh, u, t);
            let yc = centroid(mesh, t)[1];
            1.0 / (1.0 + yc * yc * (g[0] * g[0] + g[1] * g[1])).sqrt()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ConjugateDiagnostics {
    /// Angle function per triangle.
    pub nu: Vec<f64>,
    /// Conjugate height per vertex, zero at the designated base vertex.
    pub h_star: Vec<f64>,
    /// Largest absolute holonomy of the conjugate one-form over the median
    /// cell loops, one independent cycle per interior vertex.
    pub loop_defect: f64,
    /// Spread of the conjugate height along each boundary component.
    pub boundary_variation: Vec<f64>,
}

pub fn conjugate_height(
    mesh: &Mesh,
    u: &[f64],
    base: usize,
) -> Result<ConjugateDiagnostics, ConjError> {
    let nv = mesh.points.len();
    let nt = mesh.triangles.len();
    let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            let key = (a.min(b), a.max(b));
            edge_tris.entry(key).or_default().push(t);
        }
    }
    if edge_tris.values().any(|ts| ts.len() > 2) {
        return Err(ConjError::MeshNotSimplyConnected);
    }
    let euler = nv as i64 - edge_tris.len() as i64 + nt as i64;
    if euler != 1 {
        return Err(ConjError::MeshNotSimplyConnected);
    }

    let grads: Vec<[f64; 2]> = (0..nt).map(|t| tri_gradient(mesh, u, t)).collect();
    let centroids: Vec<[f64; 2]> = (0..nt).map(|t| centroid(mesh, t)).collect();
    let omega: Vec<[f64; 2]> = (0..nt)
        .map(|t| {
            let [p, q] = grads[t];
            let yc = centroids[t][1];
            let w = (1.0 + yc * yc * (p * p + q * q)).sqrt();
            [q / w, -p / w]
        })
        .collect();
    let nu: Vec<f64> = (0..nt)
        .map(|t| {
            let [p, q] = grads[t];
            let yc = centroids[t][1];
            1.0 / (1.0 + yc * yc * (p * p + q * q)).sqrt()
        })
        .collect();

    struct Crossing {
        from: usize,
        to: usize,
        delta: f64,
    }
    let mut crossings = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nt];
    for (&(a, b), ts) in &edge_tris {
        if let [t0, t1] = ts[..] {
            let m = [
                (mesh.points[a].x + mesh.points[b].x) / 2.0,
                (mesh.points[a].y + mesh.points[b].y) / 2.0,
            ];
            let (c0, c1) = (centroids[t0], centroids[t1]);
            let delta = omega[t0][0] * (m[0] - c0[0])
                + omega[t0][1] * (m[1] - c0[1])
                + omega[t1][0] * (c1[0] - m[0])
                + omega[t1][1] * (c1[1] - m[1]);
            adj[t0].push(crossings.len());
            adj[t1].push(crossings.len());
            crossings.push(Crossing {
                from: t0,
                to: t1,
                delta,
            });
        }
    }

    let mut h_tri = vec![f64::NAN; nt];
    let mut seen = vec![false; nt];
    h_tri[0] = 0.0;
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for &e in &adj[t] {
            let cr = &crossings[e];
            let (next, signed) = if cr.from == t {
                (cr.to, cr.delta)
            } else {
                (cr.from, -cr.delta)
            };
            if !seen[next] {
                seen[next] = true;
                h_tri[next] = h_tri[t] + signed;
                queue.push_back(next);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ConjError::MeshNotSimplyConnected);
    }

    let mut cell = vec![0.0f64; nv];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for i in 0..3 {
            let v = tri[i];
            let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            let enter = [
                (mesh.points[v].x + mesh.points[a].x) / 2.0,
                (mesh.points[v].y + mesh.points[a].y) / 2.0,
            ];
            let exit = [
                (mesh.points[v].x + mesh.points[b].x) / 2.0,
                (mesh.points[v].y + mesh.points[b].y) / 2.0,
            ];
            cell[v] += omega[t][0] * (exit[0] - enter[0]) + omega[t][1] * (exit[1] - enter[1]);
        }
    }
    let mut loop_defect: f64 = 0.0;
    for (v, class) in mesh.boundary.iter().enumerate() {
        if class.is_none() {
            loop_defect = loop_defect.max(cell[v].abs());
        }
    }

    let mut sum = vec![0.0f64; nv];
    let mut count = vec![0usize; nv];
    for t in 0..nt {
        let c = centroids[t];
        for &v in &mesh.triangles[t] {
            let p = mesh.points[v];
            sum[v] += h_tri[t] + omega[t][0] * (p.x - c[0]) + omega[t][1] * (p.y - c[1]);
            count[v] += 1;
        }
    }
    let mut h_star: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
        .collect();
    let shift = h_star[base];
    for v in &mut h_star {
        *v -= shift;
    }

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &mesh.ring {
        lo = lo.min(h_star[v]);
        hi = hi.max(h_star[v]);
    }
    let boundary_variation = vec![if mesh.ring.is_empty() { 0.0 } else { hi - lo }];

    Ok(ConjugateDiagnostics {
        nu,
        h_star,
        loop_defect,
        boundary_variation,
    })
}

/// Flatness of the conjugate height where the boundary passes a corner.
///
/// The graph over the domain has a vertical wall over each corner, a
/// geodesic segment, so its conjugate is a curvature line in a horizontal
/// slice: the conjugate height should approach a single value there. The
/// wall projects to the corner point, so the measurable shadow is the
/// spread of h* over the near-corner piece of the two adjoining edge runs,
/// compared against the spread over the full runs.
#[derive(Clone, Copy, Debug)]
pub struct ArcFlatness {
    /// Polygon vertex index of the corner.
    pub corner: usize,
    /// Ring vertices in the cut-to-cut arc through the corner.
    pub count: usize,
    /// Spread of h* within an eighth of the arc radius of the corner.
    pub variation: f64,
    /// Spread of h* over the whole arc.
    pub scale: f64,
    /// variation / scale, zero for an exactly flat arc.
    pub normalized: f64,
}

pub fn boundary_flatness(mesh: &Mesh, diag: &ConjugateDiagnostics) -> Vec<ArcFlatness> {
    let ring = &mesh.ring;
    let n = ring.len();
    let class = |pos: usize| mesh.boundary[ring[pos]].expect("ring vertices carry classes");
    let mut out = Vec::new();
    for pos in 0..n {
        let BoundaryClass::Corner { vertex } = class(pos) else {
            continue;
        };
        let run = |step: i64| {
            let mut ids = Vec::new();
            let mut cur = pos as i64;
            let mut edge = None;
            loop {
                cur = (cur + step).rem_euclid(n as i64);
                match class(cur as usize) {
                    BoundaryClass::Edge { edge: e, .. } if edge.is_none() || edge == Some(e) => {
                        edge = Some(e);
                        ids.push(cur as usize);
                    }
                    _ => break,
                }
            }
            ids
        };
        let before = run(-1);
        let after = run(1);
        let mut arc: Vec<usize> = before.into_iter().rev().collect();
        arc.push(pos);
        arc.extend(after);
        let cp = mesh.points[ring[pos]];
        let radius = arc
            .iter()
            .map(|&i| dist(mesh.points[ring[i]], cp))
            .fold(0.0f64, f64::max);
        let spread = |sel: &dyn Fn(usize) -> bool| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &arc {
                if sel(i) {
                    let v = diag.h_star[ring[i]];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if hi >= lo {
                hi - lo
            } else {
                0.0
            }
        };
        let scale = spread(&|_| true);
        let variation = spread(&|i| dist(mesh.points[ring[i]], cp) <= radius / 8.0);
        let normalized = if scale > 0.0 { variation / scale } else { 0.0 };
        out.push(ArcFlatness {
            corner: vertex,
            count: arc.len(),
            variation,
            scale,
            normalized,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_finite, FiniteParams};
    use crate::mesh::MeshParams;
    use crate::solve::{solve, Elements, SolveParams};

    fn hexagon_mesh(h: f64) -> Mesh {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        Mesh::build(&poly, &MeshParams::new(h)).unwrap()
    }

    fn wavy(mesh: &Mesh) -> Vec<f64> {
        mesh.points
            .iter()
            .map(|p| 0.4 * (3.0 * p.x + 2.0 * p.y).sin() + 0.1 * p.x)
            .collect()
    }

    #[test]
    fn angle_function_agrees_with_the_solver_tilt() {
        let mesh = hexagon_mesh(0.3);
        let u = wavy(&mesh);
        let nu = angle_function(&mesh, &u);
        let el = Elements::new(&mesh);
        for t in 0..mesh.triangles.len() {
            let g = el.gradient_of(&mesh, &u, t);
            let w = el.tilt(g, t);
            assert!((nu[t] * w - 1.0).abs() <= 1e-12, "triangle {t}");
            assert!(nu[t] > 0.0 && nu[t] <= 1.0);
        }
    }

    #[test]
    fn constant_graph_conjugates_to_zero() {
        let mesh = hexagon_mesh(0.3);
        let u = vec![1.25; mesh.points.len()];
        let nu = angle_function(&mesh, &u);
        assert!(nu.iter().all(|&v| v == 1.0));
        let diag = conjugate_height(&mesh, &u, 0).unwrap();
        assert!(diag.h_star.iter().all(|&v| v == 0.0));
        assert_eq!(diag.loop_defect, 0.0);
        assert_eq!(diag.boundary_variation[0], 0.0);
        let flat = boundary_flatness(&mesh, &diag);
        assert_eq!(flat.len(), 3);
        assert!(flat.iter().all(|a| a.variation == 0.0 && a.normalized == 0.0));
    }

    #[test]
    fn shifting_the_graph_changes_no_bits() {
        let mesh = hexagon_mesh(0.3);
        let scale = (1u64 << 26) as f64;
        let u: Vec<f64> = wavy(&mesh)
            .iter()
            .map(|v| (v * scale).round() / scale)
            .collect();
        let shifted: Vec<f64> = u.iter().map(|v| v + 0.75).collect();
        // The field is quantized so every shifted entry is exact; from there
        // on the difference-form gradients keep the two runs bit-identical.
        let a = conjugate_height(&mesh, &u, 0).unwrap();
        let b = conjugate_height(&mesh, &shifted, 0).unwrap();
        for (x, y) in a.nu.iter().zip(&b.nu) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for (x, y) in a.h_star.iter().zip(&b.h_star) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a.loop_defect.to_bits(), b.loop_defect.to_bits());
    }

    #[test]
    fn defect_is_tiny_once_the_graph_is_minimal() {
        let mesh = hexagon_mesh(0.15);
        let sol = solve(&mesh, &mesh.dirichlet(2.0), &SolveParams::default()).unwrap();
        let diag = conjugate_height(&mesh, &sol.u, 0).unwrap();
        let diam = mesh.diameter();
        assert!(
            diag.loop_defect < 1e-8 * diam,
            "defect {} vs diameter {}",
            diag.loop_defect,
            diam
        );
        assert!(diag.boundary_variation[0] > 0.0);
    }

    #[test]
    fn corner_arcs_flatten_as_the_cap_grows() {
        let mesh = hexagon_mesh(0.15);
        let worst = |m: f64| {
            let sol = solve(&mesh, &mesh.dirichlet(m), &SolveParams::default()).unwrap();
            let diag = conjugate_height(&mesh, &sol.u, 0).unwrap();
            boundary_flatness(&mesh, &diag)
                .iter()
                .map(|a| a.normalized)
                .fold(0.0f64, f64::max)
        };
        let (lo, hi) = (worst(2.0), worst(6.0));
        assert!(
            hi < lo,
            "normalized corner variation should shrink: {lo} at m=2, {hi} at m=6"
        );
    }
}
