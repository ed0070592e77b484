//! Minimal graph solver on a triangulated truncation.
//!
//! The vertical graph of `u` over the meshed domain has area
//! `Σ (A / yc^2) sqrt(1 + yc^2 |∇u|^2)` over the triangles, a smooth convex
//! function of the nodal values. Dirichlet values are pinned wherever the
//! data vector carries one; the rest is minimized by a damped Newton
//! iteration whose steps come from conjugate gradients on the exact Hessian,
//! which is positive definite for any nodal state.
//!
//! Everything here is deterministic: the same mesh and data produce the same
//! bits, and negating the data negates the solution exactly.

mod elements;
mod pcg;

pub use elements::{triangle_gradients, Elements};
pub use pcg::Csr;

use thiserror::Error;

use crate::mesh::Mesh;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("data vector does not match the mesh: {0}")]
    DataMismatch(String),
    #[error("linear solve stalled at relative residual {0:e}")]
    LinearSolve(f64),
    #[error("line search failed at gradient norm {0:e}")]
    LineSearch(f64),
    #[error("no convergence after {iterations} iterations, gradient norm {grad_norm:e}")]
    NoConvergence {
        iterations: usize,
        grad_norm: f64,
        /// Energy after each accepted step, for post-mortems.
        energies: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct SolveParams {
    /// Stop when the sup norm of the free gradient drops below this.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Relative residual for each Newton step solve.
    pub pcg_tol: f64,
    pub max_pcg: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            newton_tol: 1e-11,
            max_newton: 50,
            pcg_tol: 1e-13,
            max_pcg: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Nodal values, Dirichlet entries included.
    pub u: Vec<f64>,
    pub newton_iterations: usize,
    pub grad_norm: f64,
    /// Area of the solved graph.
    pub energy: f64,
}

/// Area of the graph of `u`.
pub fn energy(el: &Elements, mesh: &Mesh, u: &[f64]) -> f64 {
    let mut e = 0.0;
    for t in 0..mesh.triangles.len() {
        let g = el.gradient_of(mesh, u, t);
        let y = el.yc[t];
        e += el.area[t] / (y * y) * el.tilt(g, t);
    }
    e
}

/// Nodal gradient of the area, over all vertices.
pub fn energy_gradient(el: &Elements, mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    let mut grad = vec![0.0; u.len()];
    for t in 0..mesh.triangles.len() {
        let g = el.gradient_of(mesh, u, t);
        let w = el.tilt(g, t);
        let tri = mesh.triangles[t];
        let b = el.b[t];
        for k in 0..3 {
            let gb = g[0] * b[k][0] + g[1] * b[k][1];
            grad[tri[k]] += el.area[t] * gb / w;
        }
    }
    grad
}

/// Hessian of the area restricted to the free vertices, as a CSR matrix in
/// the numbering given by `free`.
pub fn energy_hessian(
    el: &Elements,
    mesh: &Mesh,
    u: &[f64],
    free: &[Option<usize>],
    pattern: &mut Csr,
) {
    for v in pattern.vals.iter_mut() {
        *v = 0.0;
    }
    for t in 0..mesh.triangles.len() {
        let g = el.gradient_of(mesh, u, t);
        let w = el.tilt(g, t);
        let y = el.yc[t];
        let tri = mesh.triangles[t];
        let b = el.b[t];
        let gb = [0, 1, 2].map(|k| g[0] * b[k][0] + g[1] * b[k][1]);
        for k in 0..3 {
            let Some(row) = free[tri[k]] else { continue };
            for l in 0..3 {
                let Some(col) = free[tri[l]] else { continue };
                let bb = b[k][0] * b[l][0] + b[k][1] * b[l][1];
                let h = el.area[t] * (bb / w - y * y * gb[k] * gb[l] / (w * w * w));
                let lo = pattern.rowptr[row];
                let hi = pattern.rowptr[row + 1];
                let at = pattern.colidx[lo..hi]
                    .binary_search(&col)
                    .expect("pattern covers every element pair");
                pattern.vals[lo + at] += h;
            }
        }
    }
}

fn symbolic_pattern(mesh: &Mesh, free: &[Option<usize>], ndof: usize) -> Csr {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ndof];
    for t in &mesh.triangles {
        for &vi in t {
            let Some(row) = free[vi] else { continue };
            for &vj in t {
                if let Some(col) = free[vj] {
                    adj[row].push(col);
                }
            }
        }
    }
    let mut rowptr = vec![0];
    let mut colidx = Vec::new();
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
        colidx.extend_from_slice(row);
        rowptr.push(colidx.len());
    }
    let nnz = colidx.len();
    Csr {
        rowptr,
        colidx,
        vals: vec![0.0; nnz],
    }
}

/// Minimize the graph area with the given Dirichlet data.
///
/// `data` is parallel to the mesh vertices; `Some` pins the value, `None`
/// leaves it free. The usual choice is [`Mesh::dirichlet`].
pub fn solve(mesh: &Mesh, data: &[Option<f64>], params: &SolveParams) -> Result<Solution, SolveError> {
    if data.len() != mesh.points.len() {
        return Err(SolveError::DataMismatch(format!(
            "{} values for {} vertices",
            data.len(),
            mesh.points.len()
        )));
    }
    if data.iter().flatten().any(|v| !v.is_finite()) {
        return Err(SolveError::DataMismatch("non finite boundary value".into()));
    }
    let mut ndof = 0;
    let free: Vec<Option<usize>> = data
        .iter()
        .map(|d| {
            d.is_none().then(|| {
                ndof += 1;
                ndof - 1
            })
        })
        .collect();
    if ndof == data.len() {
        return Err(SolveError::DataMismatch("no pinned vertices".into()));
    }

    let el = Elements::new(mesh);
    let mut u: Vec<f64> = data.iter().map(|d| d.unwrap_or(0.0)).collect();
    if ndof == 0 {
        let e = energy(&el, mesh, &u);
        return Ok(Solution {
            u,
            newton_iterations: 0,
            grad_norm: 0.0,
            energy: e,
        });
    }
    let mut pattern = symbolic_pattern(mesh, &free, ndof);

    let mut grad_norm = f64::INFINITY;
    let mut energies = Vec::new();
    for it in 0..params.max_newton {
        let grad = energy_gradient(&el, mesh, &u);
        let mut rhs = vec![0.0; ndof];
        for (v, f) in free.iter().enumerate() {
            if let Some(row) = *f {
                rhs[row] = -grad[v];
            }
        }
        grad_norm = rhs.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if grad_norm <= params.newton_tol {
            let e = energy(&el, mesh, &u);
            return Ok(Solution {
                u,
                newton_iterations: it,
                grad_norm,
                energy: e,
            });
        }

        energy_hessian(&el, mesh, &u, &free, &mut pattern);
        let (step, _) = pcg::solve_pcg(&pattern, &rhs, params.pcg_tol, params.max_pcg)
            .map_err(SolveError::LinearSolve)?;

        let e0 = energy(&el, mesh, &u);
        let slope: f64 = rhs.iter().zip(&step).map(|(r, d)| -r * d).sum();
        let tiny = slope.abs() <= 1e-12 * (e0.abs() + 1.0);
        let mut alpha = 1.0;
        loop {
            let mut trial = u.clone();
            for (v, f) in free.iter().enumerate() {
                if let Some(row) = *f {
                    trial[v] += alpha * step[row];
                }
            }
            let e1 = energy(&el, mesh, &trial);
            if tiny || e1 <= e0 + 1e-4 * alpha * slope {
                u = trial;
                energies.push(e1);
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                return Err(SolveError::LineSearch(grad_norm));
            }
        }
    }
    Err(SolveError::NoConvergence {
        iterations: params.max_newton,
        grad_norm,
        energies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_finite, FiniteParams};
    use crate::mesh::{BoundaryClass, Locator, MeshParams};
    use proptest::prelude::*;

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
    fn gradient_matches_finite_differences() {
        let mesh = hexagon_mesh(0.45);
        let el = Elements::new(&mesh);
        let mut u = wavy(&mesh);
        let grad = energy_gradient(&el, &mesh, &u);
        let eps = 1e-5;
        for i in 0..u.len() {
            let keep = u[i];
            u[i] = keep + eps;
            let ep = energy(&el, &mesh, &u);
            u[i] = keep - eps;
            let em = energy(&el, &mesh, &u);
            u[i] = keep;
            let fd = (ep - em) / (2.0 * eps);
            assert!(
                (fd - grad[i]).abs() <= 1e-6 * grad[i].abs().max(1.0),
                "vertex {i}: fd {fd:e} vs grad {:e}",
                grad[i]
            );
        }
    }

    #[test]
    fn hessian_matches_differenced_gradients() {
        let mesh = hexagon_mesh(0.45);
        let el = Elements::new(&mesh);
        let u = wavy(&mesh);
        let free: Vec<Option<usize>> = (0..u.len()).map(Some).collect();
        let mut h = symbolic_pattern(&mesh, &free, u.len());
        energy_hessian(&el, &mesh, &u, &free, &mut h);

        let dir: Vec<f64> = mesh
            .points
            .iter()
            .map(|p| (1.7 * p.x - 0.6 * p.y).cos())
            .collect();
        let eps = 1e-6;
        let up: Vec<f64> = u.iter().zip(&dir).map(|(a, d)| a + eps * d).collect();
        let um: Vec<f64> = u.iter().zip(&dir).map(|(a, d)| a - eps * d).collect();
        let gp = energy_gradient(&el, &mesh, &up);
        let gm = energy_gradient(&el, &mesh, &um);
        let mut hv = vec![0.0; u.len()];
        h.mul(&dir, &mut hv);
        for i in 0..u.len() {
            let fd = (gp[i] - gm[i]) / (2.0 * eps);
            assert!(
                (fd - hv[i]).abs() <= 1e-5 * hv[i].abs().max(1.0),
                "vertex {i}: fd {fd:e} vs Hv {:e}",
                hv[i]
            );
        }
    }

    #[test]
    fn constant_data_is_reproduced_exactly() {
        let mesh = hexagon_mesh(0.25);
        let data: Vec<Option<f64>> = mesh.boundary.iter().map(|c| c.map(|_| 7.5)).collect();
        let sol = solve(&mesh, &data, &SolveParams::default()).unwrap();
        for &v in &sol.u {
            assert!((v - 7.5).abs() < 1e-12);
        }
        assert!(sol.newton_iterations <= 12);
    }

    #[test]
    fn solution_respects_the_boundary_range() {
        let mesh = hexagon_mesh(0.2);
        let sol = solve(&mesh, &mesh.dirichlet(2.0), &SolveParams::default()).unwrap();
        for &v in &sol.u {
            assert!(v <= 2.0 + 1e-12 && v >= -2.0 - 1e-12);
        }
    }

    #[test]
    fn negated_data_negates_the_bits() {
        let mesh = hexagon_mesh(0.2);
        let data = mesh.dirichlet(3.0);
        let flipped: Vec<Option<f64>> = data.iter().map(|d| d.map(|v| -v)).collect();
        let a = solve(&mesh, &data, &SolveParams::default()).unwrap();
        let b = solve(&mesh, &flipped, &SolveParams::default()).unwrap();
        assert_eq!(a.newton_iterations, b.newton_iterations);
        for (x, y) in a.u.iter().zip(&b.u) {
            assert_eq!((-x).to_bits(), y.to_bits());
        }
    }

    #[test]
    fn shifted_data_shifts_the_solution() {
        let mesh = hexagon_mesh(0.25);
        let data = mesh.dirichlet(1.5);
        let shifted: Vec<Option<f64>> = data.iter().map(|d| d.map(|v| v + 0.8)).collect();
        let a = solve(&mesh, &data, &SolveParams::default()).unwrap();
        let b = solve(&mesh, &shifted, &SolveParams::default()).unwrap();
        for (x, y) in a.u.iter().zip(&b.u) {
            assert!((y - x - 0.8).abs() < 1e-9);
        }
    }

    #[test]
    fn barrier_data_decays_along_inward_normals() {
        let poly = build_finite(&FiniteParams::new(1)).unwrap();
        let mesh = Mesh::build(&poly, &MeshParams::new(0.2)).unwrap();
        let data: Vec<Option<f64>> = mesh
            .boundary
            .iter()
            .map(|c| {
                c.map(|class| match class {
                    BoundaryClass::Edge { edge: 0, .. } => 2.0,
                    _ => 0.0,
                })
            })
            .collect();
        let sol = solve(&mesh, &data, &SolveParams::default()).unwrap();
        let loc = Locator::new(&mesh);
        let g = poly.edge_geodesic(0).unwrap();
        let params: Vec<f64> = mesh
            .ring
            .iter()
            .filter(|&&v| matches!(mesh.boundary[v], Some(BoundaryClass::Edge { edge: 0, .. })))
            .map(|&v| g.param_of(mesh.points[v]))
            .collect();
        let (lo, hi) = params
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
        let mut probed = 0;
        for q in [0.3, 0.5, 0.7] {
            let sigma = lo + q * (hi - lo);
            let p = g.point_at(sigma);
            let t = g.tangent_at(sigma);
            let norm = (t[0] * t[0] + t[1] * t[1]).sqrt();
            let mut n = [-t[1] / norm, t[0] / norm];
            let step = 0.08 * p.y;
            let inward = crate::geom::HPoint::new(p.x + n[0] * step, p.y + n[1] * step);
            if !poly.contains(inward, 1e-9).unwrap() {
                n = [-n[0], -n[1]];
            }
            let mut prev = f64::INFINITY;
            for k in 0..10 {
                let q = crate::geom::HPoint::new(p.x + n[0] * step * k as f64, p.y + n[1] * step * k as f64);
                let Some(val) = loc.eval(&mesh, &sol.u, q) else { break };
                assert!(val <= prev + 1e-7, "u rises from {prev} to {val} moving away from the barrier edge");
                prev = val;
                probed += 1;
            }
        }
        assert!(probed >= 12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn area_is_convex_along_segments(seed in 0u64..1000, lambda in 0.0f64..1.0) {
            let mesh = hexagon_mesh(0.5);
            let el = Elements::new(&mesh);
            let n = mesh.points.len();
            let u: Vec<f64> = (0..n).map(|i| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 250.0 - 2.0).collect();
            let v: Vec<f64> = (0..n).map(|i| ((i as u64 * 40503 + 7 * seed) % 1000) as f64 / 250.0 - 2.0).collect();
            let mix: Vec<f64> = u.iter().zip(&v).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
            let e_mix = energy(&el, &mesh, &mix);
            let bound = lambda * energy(&el, &mesh, &u) + (1.0 - lambda) * energy(&el, &mesh, &v);
            prop_assert!(e_mix <= bound + 1e-9 * bound.abs());
        }
    }
}
