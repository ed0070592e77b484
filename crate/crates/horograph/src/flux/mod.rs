//! Flux of a graph across curves in the meshed domain.
//!
//! The field of interest is the normalized gradient `X = ∇u / W` with
//! `W = sqrt(1 + y^2 |∇u|^2)`. Its hyperbolic flux across a curve reduces to
//! the Euclidean line integral `∫ X·n ds`: the conformal factors of the unit
//! normal, the length element and the gradient cancel against each other.
//! Pointwise `|X| < 1/y`, so every flux is strictly below the curve's
//! hyperbolic length.
//!
//! Curves are polylines of straight segments. Each segment is clipped
//! against the triangles it crosses, so the integral of the piecewise
//! constant field is exact. Curves must not run along interior mesh edges;
//! running along the boundary ring is fine, since only one triangle borders
//! it.

mod dual;

pub use dual::dual_loops;

use thiserror::Error;

use crate::domain::Polygon;
use crate::geom::{hyp_length, HPoint, PolylineMode};
use crate::mesh::{BoundaryClass, Locator, Mesh};
use crate::solve::Elements;

#[derive(Debug, Error)]
pub enum FluxError {
    #[error("curve leaves the meshed domain")]
    CurveOutsideDomain,
    #[error("dual region touches the mesh boundary")]
    TouchesBoundary,
    #[error("dual boundary did not close")]
    OpenChain,
    #[error("no curve piece inside the requested window")]
    EmptyWindow,
    #[error("window selects a disconnected piece of the edge")]
    SplitWindow,
}

/// Flux across an oriented curve, with the curve's length for comparison.
/// The normal points to the right of the travel direction, so a
/// counterclockwise boundary reports outward flux.
///
/// Two lengths are reported. `hyp_length` is the true hyperbolic length of
/// the polyline. `frozen_length` weights each piece by the same centroid
/// height the energy freezes per triangle; since `|X| < 1/yc` holds exactly
/// triangle by triangle, the strict bound `|value| < frozen_length` is a
/// theorem of the discretization, while `hyp_length` matches it only to
/// first order in the mesh size.
#[derive(Debug, Clone, Copy)]
pub struct FluxResult {
    pub value: f64,
    pub hyp_length: f64,
    pub frozen_length: f64,
}

/// Per triangle normalized gradient `∇u / W`.
pub fn normalized_gradient(el: &Elements, mesh: &Mesh, u: &[f64]) -> Vec<[f64; 2]> {
    (0..mesh.triangles.len())
        .map(|t| {
            let g = el.gradient_of(mesh, u, t);
            let w = el.tilt(g, t);
            [g[0] / w, g[1] / w]
        })
        .collect()
}

/// Exact integral of the piecewise constant field `x` along a polyline,
/// against the right-hand normal.
pub fn polyline_flux(
    mesh: &Mesh,
    loc: &Locator,
    x: &[[f64; 2]],
    pts: &[HPoint],
    closed: bool,
) -> Result<FluxResult, FluxError> {
    let mut value = 0.0;
    let mut frozen_length = 0.0;
    let mut closed_pts;
    let pts = if closed {
        closed_pts = pts.to_vec();
        closed_pts.push(pts[0]);
        &closed_pts[..]
    } else {
        pts
    };
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let len = dx.hypot(dy);
        if len == 0.0 {
            continue;
        }
        let n = [dy / len, -dx / len];
        let lo = (a.x.min(b.x), a.y.min(b.y));
        let hi = (a.x.max(b.x), a.y.max(b.y));
        let mut covered = 0.0;
        for t in loc.candidates_in_box(lo, hi) {
            let tri = mesh.triangles[t];
            let ps = tri.map(|v| mesh.points[v]);
            let mut t0 = 0.0_f64;
            let mut t1 = 1.0_f64;
            for k in 0..3 {
                let (p, q) = (ps[k], ps[(k + 1) % 3]);
                let (ex, ey) = (q.x - p.x, q.y - p.y);
                let ca = ex * (a.y - p.y) - ey * (a.x - p.x);
                let cb = ex * (b.y - p.y) - ey * (b.x - p.x);
                let d = cb - ca;
                if d.abs() < f64::MIN_POSITIVE {
                    if ca < 0.0 {
                        t0 = 1.0;
                        t1 = 0.0;
                        break;
                    }
                } else {
                    let root = -ca / d;
                    if d > 0.0 {
                        t0 = t0.max(root);
                    } else {
                        t1 = t1.min(root);
                    }
                }
            }
            if t1 > t0 {
                let piece = t1 - t0;
                covered += piece;
                value += (x[t][0] * n[0] + x[t][1] * n[1]) * len * piece;
                let yc = (ps[0].y + ps[1].y + ps[2].y) / 3.0;
                frozen_length += len * piece / yc;
            }
        }
        if covered < 1.0 - 1e-9 {
            return Err(FluxError::CurveOutsideDomain);
        }
    }
    Ok(FluxResult {
        value,
        hyp_length: hyp_length(pts, PolylineMode::Euclidean),
        frozen_length,
    })
}

/// Ring vertices lying on polygon edge `edge`, as (ring position, parameter
/// along the edge geodesic), in ring order. Corners count for both of their
/// edges.
fn ring_params_on_edge(poly: &Polygon, mesh: &Mesh, edge: usize) -> Vec<(usize, f64)> {
    let n = poly.len();
    let g = poly.edge_geodesic(edge).expect("edge of a valid polygon");
    let on_edge = |class: BoundaryClass| match class {
        BoundaryClass::Edge { edge: e, .. } => e == edge,
        BoundaryClass::Corner { vertex } => vertex == edge || vertex == (edge + 1) % n,
        BoundaryClass::Arc { .. } => false,
    };
    mesh.ring
        .iter()
        .enumerate()
        .filter(|&(_, &v)| mesh.boundary[v].is_some_and(on_edge))
        .map(|(k, &v)| (k, g.param_of(mesh.points[v])))
        .collect()
}

/// Parameter interval of the meshed piece of polygon edge `edge`.
pub fn edge_span(poly: &Polygon, mesh: &Mesh, edge: usize) -> (f64, f64) {
    let params = ring_params_on_edge(poly, mesh, edge);
    let lo = params.iter().map(|&(_, s)| s).fold(f64::INFINITY, f64::min);
    let hi = params
        .iter()
        .map(|&(_, s)| s)
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Flux across the part of polygon edge `edge` whose geodesic parameter lies
/// in `[lo, hi]`, with outward normal. The curve snaps to whole boundary
/// segments inside the window.
pub fn edge_subarc_flux(
    poly: &Polygon,
    mesh: &Mesh,
    loc: &Locator,
    x: &[[f64; 2]],
    edge: usize,
    lo: f64,
    hi: f64,
) -> Result<FluxResult, FluxError> {
    let params = ring_params_on_edge(poly, mesh, edge);
    let mut inside: Vec<usize> = params
        .iter()
        .filter(|&&(_, s)| s >= lo && s <= hi)
        .map(|&(k, _)| k)
        .collect();
    if inside.len() < 2 {
        return Err(FluxError::EmptyWindow);
    }
    let n = mesh.ring.len();
    let gaps: Vec<usize> = (0..inside.len())
        .filter(|&i| (inside[i] + 1) % n != inside[(i + 1) % inside.len()])
        .map(|i| (i + 1) % inside.len())
        .collect();
    match gaps[..] {
        // A run through ring position zero sorts to two blocks; rotating at
        // the one interior gap restores walk order.
        [] => {}
        [start] => inside.rotate_left(start),
        _ => return Err(FluxError::SplitWindow),
    }
    let pts: Vec<HPoint> = inside
        .iter()
        .map(|&k| mesh.points[mesh.ring[k]])
        .collect();
    polyline_flux(mesh, loc, x, &pts, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_finite, FiniteParams};
    use crate::geom::geodesic_through;
    use crate::mesh::MeshParams;
    use crate::solve::{energy_gradient, solve, SolveParams};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn solved_hexagon(h: f64, m: f64) -> (Polygon, Mesh, Vec<f64>) {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(h)).unwrap();
        let sol = solve(&mesh, &mesh.dirichlet(m), &SolveParams::default()).unwrap();
        (poly, mesh, sol.u)
    }

    #[test]
    fn constant_graphs_have_zero_flux() {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(0.3)).unwrap();
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let u = vec![3.0; mesh.points.len()];
        let x = normalized_gradient(&el, &mesh, &u);
        let square = [
            HPoint::new(-0.2, 0.8),
            HPoint::new(0.2, 0.8),
            HPoint::new(0.2, 1.2),
            HPoint::new(-0.2, 1.2),
        ];
        let f = polyline_flux(&mesh, &loc, &x, &square, true).unwrap();
        assert_eq!(f.value, 0.0);
        assert!(f.hyp_length > 0.0);
    }

    #[test]
    fn dual_loop_flux_is_minus_the_residual() {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(0.3)).unwrap();
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let u: Vec<f64> = mesh
            .points
            .iter()
            .map(|p| 0.5 * (2.0 * p.x - p.y).sin() + 0.3 * p.x * p.x)
            .collect();
        let x = normalized_gradient(&el, &mesh, &u);
        let grad = energy_gradient(&el, &mesh, &u);

        let mut checked = 0;
        for v in mesh.interior_indices() {
            if checked == 12 {
                break;
            }
            let mut in_set = vec![false; mesh.points.len()];
            in_set[v] = true;
            let loops = match dual_loops(&mesh, &in_set) {
                Ok(l) => l,
                Err(FluxError::TouchesBoundary) => continue,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(loops.len(), 1);
            let f = polyline_flux(&mesh, &loc, &x, &loops[0], true).unwrap();
            assert!(
                (f.value + grad[v]).abs() <= 1e-12 * grad[v].abs().max(1.0),
                "vertex {v}: flux {:e} vs residual {:e}",
                f.value,
                grad[v]
            );
            checked += 1;
        }
        assert_eq!(checked, 12);
    }

    #[test]
    fn patch_dual_loop_adds_residuals() {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(0.25)).unwrap();
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let u: Vec<f64> = mesh.points.iter().map(|p| (p.x + p.y).cos()).collect();
        let x = normalized_gradient(&el, &mesh, &u);
        let grad = energy_gradient(&el, &mesh, &u);

        let mut in_set = vec![false; mesh.points.len()];
        let mut total = 0.0;
        for i in mesh.interior_indices() {
            let p = mesh.points[i];
            if (p.x * p.x + (p.y - 1.0) * (p.y - 1.0)).sqrt() < 0.35 {
                in_set[i] = true;
                total += grad[i];
            }
        }
        assert!(in_set.iter().filter(|&&b| b).count() > 3);
        let loops = dual_loops(&mesh, &in_set).unwrap();
        let mut flux = 0.0;
        for cycle in &loops {
            flux += polyline_flux(&mesh, &loc, &x, cycle, true).unwrap().value;
        }
        assert!((flux + total).abs() <= 1e-12 * total.abs().max(1.0));
    }

    #[test]
    fn closed_loops_vanish_at_the_solution() {
        let (_, mesh, u) = solved_hexagon(0.2, 3.0);
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let x = normalized_gradient(&el, &mesh, &u);
        let mut checked = 0;
        for v in mesh.interior_indices().step_by(7) {
            let mut in_set = vec![false; mesh.points.len()];
            in_set[v] = true;
            let loops = match dual_loops(&mesh, &in_set) {
                Ok(l) => l,
                Err(FluxError::TouchesBoundary) => continue,
                Err(e) => panic!("{e}"),
            };
            let f = polyline_flux(&mesh, &loc, &x, &loops[0], true).unwrap();
            assert!(f.value.abs() < 1e-10 * f.hyp_length);
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn interior_geodesic_segments_stay_below_their_length() {
        let (_, mesh, u) = solved_hexagon(0.2, 4.0);
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let x = normalized_gradient(&el, &mesh, &u);
        let interior: Vec<usize> = mesh.interior_indices().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(910);
        let mut done = 0;
        while done < 50 {
            let a = mesh.points[interior[rng.random_range(0..interior.len())]];
            let b = mesh.points[interior[rng.random_range(0..interior.len())]];
            if (a.x - b.x).abs() + (a.y - b.y).abs() < 1e-9 {
                continue;
            }
            let g = geodesic_through(a, b, crate::geom::GEOM_TOL).unwrap();
            let (s0, s1) = (g.param_of(a), g.param_of(b));
            let pieces = ((s1 - s0).abs() / 0.05).ceil().max(1.0) as usize;
            let pts: Vec<HPoint> = (0..=pieces)
                .map(|k| g.point_at(s0 + (s1 - s0) * k as f64 / pieces as f64))
                .collect();
            let f = match polyline_flux(&mesh, &loc, &x, &pts, false) {
                Ok(f) => f,
                Err(FluxError::CurveOutsideDomain) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(
                f.value.abs() < f.frozen_length,
                "flux {:e} exceeds frozen length {:e}",
                f.value,
                f.frozen_length
            );
            assert!((f.frozen_length - f.hyp_length).abs() < 0.5 * 0.2 * f.hyp_length);
            done += 1;
        }
    }

    #[test]
    fn cap_growth_pushes_edge_flux_toward_its_length() {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(0.15)).unwrap();
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let a_edge = (0..poly.len())
            .find(|&e| poly.label(e) == crate::domain::EdgeLabel::A)
            .unwrap();
        let (lo, hi) = edge_span(&poly, &mesh, a_edge);
        let span = hi - lo;
        let (wlo, whi) = (lo + 0.25 * span, hi - 0.25 * span);

        let mut prev = f64::NEG_INFINITY;
        for m in [2.0, 4.0] {
            let sol = solve(&mesh, &mesh.dirichlet(m), &SolveParams::default()).unwrap();
            let x = normalized_gradient(&el, &mesh, &sol.u);
            let f = edge_subarc_flux(&poly, &mesh, &loc, &x, a_edge, wlo, whi).unwrap();
            let ratio = f.value / f.hyp_length;
            assert!(ratio > prev, "ratio must increase with the cap");
            assert!(ratio > 0.0 && ratio < 1.0);
            prev = ratio;
        }
        assert!(prev > 0.7, "ratio at cap 4 too far from 1: {prev}");
    }

    #[test]
    fn windows_wrapping_the_ring_start_match_the_direct_walk() {
        let (poly, mesh, u) = solved_hexagon(0.2, 3.0);
        let el = Elements::new(&mesh);
        let loc = Locator::new(&mesh);
        let x = normalized_gradient(&el, &mesh, &u);
        let edge = 0;
        let (lo, hi) = edge_span(&poly, &mesh, edge);
        let f = edge_subarc_flux(&poly, &mesh, &loc, &x, edge, lo, hi).unwrap();

        let g = poly.edge_geodesic(edge).unwrap();
        let mut params: Vec<(f64, HPoint)> = mesh
            .ring
            .iter()
            .filter(|&&v| {
                matches!(
                    mesh.boundary[v],
                    Some(BoundaryClass::Edge { edge: e, .. }) if e == edge
                ) || matches!(
                    mesh.boundary[v],
                    Some(BoundaryClass::Corner { vertex }) if vertex == (edge + 1) % poly.len()
                )
            })
            .map(|&v| (g.param_of(mesh.points[v]), mesh.points[v]))
            .collect();
        params.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pts: Vec<HPoint> = params.into_iter().map(|(_, p)| p).collect();
        let direct = polyline_flux(&mesh, &loc, &x, &pts, false).unwrap();

        assert!(
            (f.value.abs() - direct.value.abs()).abs() < 1e-12,
            "window {} vs direct {}",
            f.value,
            direct.value
        );
        assert!((f.hyp_length - direct.hyp_length).abs() < 1e-12);
        assert!(f.value / f.hyp_length > 0.5, "wall flux should be near its length");
    }
}
