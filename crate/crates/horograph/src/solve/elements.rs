//! Per triangle quantities for the graph area functional.
//!
//! On the upper half plane the area of a vertical graph is
//! `∫ sqrt(1 + y^2 |∇u|^2) / y^2 dx dy` with Euclidean gradient and measure,
//! so piecewise linear elements only need Euclidean shape gradients, the
//! Euclidean area and one height sample per triangle. The height is frozen
//! at the centroid; the nonlinearity in `∇u` is kept exact.

use crate::mesh::Mesh;

pub struct Elements {
    /// Euclidean triangle areas.
    pub area: Vec<f64>,
    /// Centroid heights.
    pub yc: Vec<f64>,
    /// Shape function gradients, one `[d/dx, d/dy]` per corner.
    pub b: Vec<[[f64; 2]; 3]>,
}

impl Elements {
    pub fn new(mesh: &Mesh) -> Elements {
        let m = mesh.triangles.len();
        let mut area = Vec::with_capacity(m);
        let mut yc = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for t in &mesh.triangles {
            let p = t.map(|v| mesh.points[v]);
            let det = (p[1].x - p[0].x) * (p[2].y - p[0].y)
                - (p[2].x - p[0].x) * (p[1].y - p[0].y);
            area.push(0.5 * det);
            yc.push((p[0].y + p[1].y + p[2].y) / 3.0);
            let g = [
                [(p[1].y - p[2].y) / det, (p[2].x - p[1].x) / det],
                [(p[2].y - p[0].y) / det, (p[0].x - p[2].x) / det],
                [(p[0].y - p[1].y) / det, (p[1].x - p[0].x) / det],
            ];
            b.push(g);
        }
        Elements { area, yc, b }
    }

    /// Gradient of the piecewise linear interpolant on triangle `t`.
    ///
    /// Written in difference form so a constant field has gradient exactly
    /// zero; the shape gradients only sum to zero up to rounding.
    pub fn gradient_of(&self, mesh: &Mesh, u: &[f64], t: usize) -> [f64; 2] {
        let tri = mesh.triangles[t];
        let b = self.b[t];
        let mut g = [0.0, 0.0];
        for k in 1..3 {
            let d = u[tri[k]] - u[tri[0]];
            g[0] += d * b[k][0];
            g[1] += d * b[k][1];
        }
        g
    }

    /// Tilt factor `sqrt(1 + y^2 |∇u|^2)` of triangle `t`.
    pub fn tilt(&self, g: [f64; 2], t: usize) -> f64 {
        let y = self.yc[t];
        (1.0 + y * y * (g[0] * g[0] + g[1] * g[1])).sqrt()
    }
}

/// Per triangle gradients of the interpolant of `u`.
pub fn triangle_gradients(mesh: &Mesh, u: &[f64]) -> Vec<[f64; 2]> {
    let el = Elements::new(mesh);
    (0..mesh.triangles.len())
        .map(|t| el.gradient_of(mesh, u, t))
        .collect()
}
