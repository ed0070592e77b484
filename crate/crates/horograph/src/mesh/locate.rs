//! Point location and interpolation on a mesh.

use crate::geom::HPoint;

use super::Mesh;

/// Uniform bucket grid over the mesh's bounding box, for point queries.
pub struct Locator {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl Locator {
    pub fn new(mesh: &Mesh) -> Locator {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for p in &mesh.points {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let ntri = mesh.triangles.len().max(1);
        let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
        let cell = span / (ntri as f64).sqrt().ceil();
        let nx = ((xmax - xmin) / cell).ceil() as usize + 1;
        let ny = ((ymax - ymin) / cell).ceil() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let ps = tri.map(|v| mesh.points[v]);
            let bx0 = ps.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
            let bx1 = ps.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
            let by0 = ps.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
            let by1 = ps.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
            let i0 = (((bx0 - xmin) / cell) as usize).min(nx - 1);
            let i1 = (((bx1 - xmin) / cell) as usize).min(nx - 1);
            let j0 = (((by0 - ymin) / cell) as usize).min(ny - 1);
            let j1 = (((by1 - ymin) / cell) as usize).min(ny - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Locator {
            x0: xmin,
            y0: ymin,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    /// Triangles whose bounding boxes overlap the box from `lo` to `hi`.
    pub fn candidates_in_box(&self, lo: (f64, f64), hi: (f64, f64)) -> Vec<usize> {
        let clamp = |v: f64, n: usize| ((v.max(0.0)) as usize).min(n - 1);
        let i0 = clamp((lo.0 - self.x0) / self.cell, self.nx);
        let i1 = clamp((hi.0 - self.x0) / self.cell, self.nx);
        let j0 = clamp((lo.1 - self.y0) / self.cell, self.ny);
        let j1 = clamp((hi.1 - self.y0) / self.cell, self.ny);
        let mut out = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                out.extend_from_slice(&self.buckets[j * self.nx + i]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Triangle containing `p` together with its barycentric coordinates.
    pub fn locate(&self, mesh: &Mesh, p: HPoint) -> Option<(usize, [f64; 3])> {
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for t in self.candidates_in_box((p.x, p.y), (p.x, p.y)) {
            let tri = mesh.triangles[t];
            let [a, b, c] = tri.map(|v| mesh.points[v]);
            let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
            let l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
            let l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
            let l0 = 1.0 - l1 - l2;
            let worst = l0.min(l1).min(l2);
            if worst >= 0.0 {
                return Some((t, [l0, l1, l2]));
            }
            if best.map_or(true, |(_, _, w)| worst > w) {
                best = Some((t, [l0, l1, l2], worst));
            }
        }
        match best {
            Some((t, l, w)) if w > -1e-12 => Some((t, l)),
            _ => None,
        }
    }

    /// Interpolated value of the nodal field `u` at `p`.
    pub fn eval(&self, mesh: &Mesh, u: &[f64], p: HPoint) -> Option<f64> {
        let (t, l) = self.locate(mesh, p)?;
        let tri = mesh.triangles[t];
        Some(l[0] * u[tri[0]] + l[1] * u[tri[1]] + l[2] * u[tri[2]])
    }
}
