//! Diagnostics across an exhaustion of polygons.
//!
//! Solving the capped problem on each element of a nested family gives a
//! sequence of graphs that should settle down on any compact set well inside
//! the first element: hyperbolic gradient bounds and successive differences
//! are the two quantities worth watching. Everything here samples on a fixed
//! polar grid in a hyperbolic disk so the numbers are comparable across the
//! family.

use crate::domain::{DomainError, Polygon};
use crate::geom::HPoint;
use crate::mesh::{Locator, Mesh, MeshError, MeshParams};
use crate::solve::{solve, triangle_gradients, Solution, SolveError, SolveParams};

#[derive(Debug, thiserror::Error)]
pub enum DiagError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("sample point ({0}, {1}) is outside the solved domain")]
    OutsideDomain(f64, f64),
    #[error("need at least one polygon")]
    EmptyFamily,
}

/// Hyperbolic disk, the compact set the sequence is watched on.
#[derive(Clone, Copy, Debug)]
pub struct DiskSpec {
    pub center: HPoint,
    pub radius: f64,
}

impl DiskSpec {
    /// Polar sample grid. A hyperbolic circle of radius `rho` about
    /// `(x0, y0)` is the Euclidean circle with center `(x0, y0 cosh rho)`
    /// and radius `y0 sinh rho`, so the grid stays genuinely hyperbolic.
    pub fn grid(&self, radial: usize, angular: usize) -> Vec<HPoint> {
        let (x0, y0) = (self.center.x, self.center.y);
        let mut pts = vec![self.center];
        for i in 1..=radial {
            let rho = self.radius * i as f64 / radial as f64;
            let (sh, ch) = (rho.sinh(), rho.cosh());
            for j in 0..angular {
                let theta = std::f64::consts::TAU * j as f64 / angular as f64;
                pts.push(HPoint::new(
                    x0 + y0 * sh * theta.cos(),
                    y0 * ch + y0 * sh * theta.sin(),
                ));
            }
        }
        pts
    }
}

#[derive(Clone, Debug)]
pub struct SequenceParams {
    pub mesh: MeshParams,
    pub solve: SolveParams,
    /// Magnitude of the capped boundary data.
    pub cap: f64,
    /// Every solution is shifted to vanish here before comparisons.
    pub base: HPoint,
    /// Ratio of last to first gradient sup that, together with monotone
    /// growth, raises the divergence flag.
    pub growth_factor: f64,
    pub radial: usize,
    pub angular: usize,
}

impl SequenceParams {
    pub fn new(mesh: MeshParams, cap: f64) -> SequenceParams {
        SequenceParams {
            mesh,
            solve: SolveParams::default(),
            cap,
            base: HPoint::new(0.0, 1.0),
            growth_factor: 2.0,
            radial: 8,
            angular: 24,
        }
    }
}

/// One row per element of the family.
#[derive(Clone, Copy, Debug)]
pub struct SequenceRow {
    pub k: usize,
    /// Sup over the disk grid of the hyperbolic gradient `y |grad u|`.
    pub grad_sup: f64,
    /// Sup over the grid of the normalized difference to the previous row.
    pub diff_sup: Option<f64>,
    pub newton_iterations: usize,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct SequenceReport {
    pub rows: Vec<SequenceRow>,
    /// True when the gradient sup grows monotonically and the total growth
    /// exceeds the configured factor.
    pub diverging: bool,
}

/// Meshes and solutions are kept so later diagnostics can reuse them
/// without solving again.
#[derive(Debug)]
pub struct SequenceRun {
    pub meshes: Vec<Mesh>,
    pub solutions: Vec<Solution>,
    pub report: SequenceReport,
}

pub fn sequence_diagnostics(
    polys: &[Polygon],
    disk: DiskSpec,
    params: &SequenceParams,
) -> Result<SequenceRun, DiagError> {
    if polys.is_empty() {
        return Err(DiagError::EmptyFamily);
    }
    let grid = disk.grid(params.radial, params.angular);
    let mut meshes = Vec::new();
    let mut solutions = Vec::new();
    let mut rows: Vec<SequenceRow> = Vec::new();
    let mut prev_values: Option<Vec<f64>> = None;
    for (idx, poly) in polys.iter().enumerate() {
        let mesh = Mesh::build(poly, &params.mesh)?;
        let sol = solve(&mesh, &mesh.dirichlet(params.cap), &params.solve)?;
        let loc = Locator::new(&mesh);
        let at_base = loc
            .eval(&mesh, &sol.u, params.base)
            .ok_or(DiagError::OutsideDomain(params.base.x, params.base.y))?;
        let grads = triangle_gradients(&mesh, &sol.u);
        let mut values = Vec::with_capacity(grid.len());
        let mut grad_sup: f64 = 0.0;
        for &p in &grid {
            let (tri, _) = loc
                .locate(&mesh, p)
                .ok_or(DiagError::OutsideDomain(p.x, p.y))?;
            let v = loc.eval(&mesh, &sol.u, p).unwrap();
            values.push(v - at_base);
            let g = grads[tri];
            grad_sup = grad_sup.max(p.y * (g[0] * g[0] + g[1] * g[1]).sqrt());
        }
        let diff_sup = prev_values.as_ref().map(|prev| {
            values
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
        });
        rows.push(SequenceRow {
            k: idx + 1,
            grad_sup,
            diff_sup,
            newton_iterations: sol.newton_iterations,
            energy: sol.energy,
        });
        prev_values = Some(values);
        meshes.push(mesh);
        solutions.push(sol);
    }
    let monotone = rows.windows(2).all(|w| w[1].grad_sup > w[0].grad_sup);
    let diverging = rows.len() > 1
        && monotone
        && rows.last().unwrap().grad_sup > params.growth_factor * rows[0].grad_sup;
    Ok(SequenceRun {
        meshes,
        solutions,
        report: SequenceReport { rows, diverging },
    })
}
