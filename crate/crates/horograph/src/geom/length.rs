use super::point::{dist, HPoint};

/// How consecutive polyline points are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolylineMode {
    /// Geodesic arcs between consecutive points.
    Geodesic,
    /// Euclidean straight segments, measured in the hyperbolic metric.
    Euclidean,
}

/// Hyperbolic length of a polyline.
pub fn hyp_length(pts: &[HPoint], mode: PolylineMode) -> f64 {
    pts.windows(2)
        .map(|w| match mode {
            PolylineMode::Geodesic => dist(w[0], w[1]),
            PolylineMode::Euclidean => straight_segment_length(w[0], w[1]),
        })
        .sum()
}

/// Hyperbolic length of the Euclidean straight segment from `p` to `q`:
/// the Euclidean length times the mean of `1/y` along the segment.
fn straight_segment_length(p: HPoint, q: HPoint) -> f64 {
    let le = (q.x - p.x).hypot(q.y - p.y);
    let dy = q.y - p.y;
    if dy == 0.0 {
        le / p.y
    } else {
        le * (dy / p.y).ln_1p() / dy
    }
}
