use super::{edge_scaled_tol, DomainError, Polygon, VertexKind};
use crate::geom::IdealPoint;

/// Check that a polygon is a valid semi-ideal polygon: alternating vertex
/// kinds with matching labels, ideal vertices in cyclic boundary order with
/// at most one at infinity, and strict convexity, meaning every vertex lies
/// strictly on the domain side of every nonincident edge.
pub fn validate(poly: &Polygon, tol: f64) -> Result<(), DomainError> {
    poly.check_alternation()?;
    check_ideal_order(poly)?;
    check_convexity(poly, tol)?;
    Ok(())
}

fn check_ideal_order(poly: &Polygon) -> Result<(), DomainError> {
    let ideal: Vec<(usize, IdealPoint)> = poly
        .ideal_indices()
        .map(|i| (i, poly.vertex(i).ideal().unwrap()))
        .collect();
    let infinities = ideal
        .iter()
        .filter(|(_, v)| matches!(v, IdealPoint::Infinity))
        .count();
    if infinities > 1 {
        return Err(DomainError::DoubleInfinity);
    }
    // Walk the finite abscissae in cycle order: they must increase, with a
    // single wrap, and the wrap must happen at infinity when it is present.
    let mut descents = Vec::new();
    for w in 0..ideal.len() {
        let (_, a) = ideal[w];
        let (j, b) = ideal[(w + 1) % ideal.len()];
        match (a, b) {
            (IdealPoint::Finite(x), IdealPoint::Finite(y)) => {
                if y <= x {
                    descents.push(j);
                }
            }
            // Infinity sits between the largest and smallest abscissae.
            (IdealPoint::Finite(_), IdealPoint::Infinity)
            | (IdealPoint::Infinity, IdealPoint::Finite(_)) => {}
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!(),
        }
    }
    let allowed = if infinities == 1 { 0 } else { 1 };
    if descents.len() > allowed {
        return Err(DomainError::IdealOrder(descents[0]));
    }
    Ok(())
}

fn check_convexity(poly: &Polygon, tol: f64) -> Result<(), DomainError> {
    let n = poly.len();
    for e in 0..n {
        let g = poly.edge_geodesic(e)?;
        let s = poly.inward_sign(e)?;
        let stol = edge_scaled_tol(&g, tol);
        for v in 0..n {
            if v == e || v == (e + 1) % n {
                continue;
            }
            let side = match poly.vertex(v).kind {
                VertexKind::Interior(p) => g.side_of(p, stol),
                VertexKind::Ideal(b) => g.side_of_ideal(b, stol),
            };
            if side != s {
                return Err(DomainError::NotConvex { edge: e, vertex: v });
            }
        }
    }
    Ok(())
}
