//! Truncated boundary length oracle.
//!
//! Cutting the domain along horocycles at its ideal vertices leaves finite
//! boundary length, and solvability is equivalent to a family of strict
//! length inequalities over inscribed polygons: for every proper inscribed
//! polygon `P`, twice the `A` length and twice the `B` length of its boundary
//! must each stay below the total truncated perimeter. The horocycles are
//! first pushed down far enough to be pairwise disjoint; the inequalities
//! are then depth independent in sign, with each slack affine in the depth.

use crate::domain::{is_neg_end, DomainError, Polygon, VertexKind};
use crate::geom::{busemann_profile, geodesic_through, IdealPoint, SigmaSet, GEOM_TOL};

use super::{enumerate_inscribed, star_levels};

/// Extra uniform depth below the corner levels at which the horodisks become
/// pairwise disjoint, floored at zero.
pub fn disjointness_baseline(poly: &Polygon) -> f64 {
    let levels = star_levels(poly);
    let mut need = 0.0f64;
    for (a, &(i, li)) in levels.iter().enumerate() {
        for &(j, lj) in &levels[a + 1..] {
            let bi = poly.vertex(i).ideal().unwrap();
            let bj = poly.vertex(j).ideal().unwrap();
            let t = match (bi, bj) {
                (IdealPoint::Infinity, IdealPoint::Finite(c))
                | (IdealPoint::Finite(c), IdealPoint::Infinity) => {
                    let (lc, linf) = if bi == IdealPoint::Infinity {
                        (lj, li)
                    } else {
                        (li, lj)
                    };
                    0.5 * ((c * c).ln_1p() + lc + linf)
                }
                (IdealPoint::Finite(c), IdealPoint::Finite(d)) => {
                    0.5 * ((c * c).ln_1p() + (d * d).ln_1p() + li + lj) - (c - d).abs().ln()
                }
                (IdealPoint::Infinity, IdealPoint::Infinity) => f64::INFINITY,
            };
            need = need.max(t);
        }
    }
    need.max(0.0)
}

/// Fixed truncation of a polygon: every ideal vertex horocycle pushed the
/// same depth below the level its adjacent corners sit on.
pub struct Truncation<'a> {
    poly: &'a Polygon,
    levels: Vec<(usize, f64)>,
}

impl<'a> Truncation<'a> {
    pub fn new(poly: &'a Polygon, depth: f64) -> Self {
        let levels = star_levels(poly)
            .into_iter()
            .map(|(i, l)| (i, l - depth))
            .collect();
        Truncation { poly, levels }
    }

    /// Length of the geodesic through vertices `u` and `w` clipped to the
    /// complement of every horodisk. Ends at ideal vertices are always
    /// clipped by their own horodisk, so the result is finite.
    pub fn edge_length(&self, u: usize, w: usize) -> Result<f64, DomainError> {
        let vu = self.poly.vertex(u);
        let vw = self.poly.vertex(w);
        let g = geodesic_through(
            crate::domain::to_closure(vu),
            crate::domain::to_closure(vw),
            GEOM_TOL,
        )?;
        let sigma = |v: &crate::domain::Vertex| match v.kind {
            VertexKind::Interior(p) => g.param_of(p),
            VertexKind::Ideal(b) => {
                if is_neg_end(&g, b) {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        };
        let (mut lo, mut hi) = (sigma(vu), sigma(vw));
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }

        let mut cuts: Vec<(f64, f64)> = Vec::new();
        for &(i, level) in &self.levels {
            let base = self.poly.vertex(i).ideal().unwrap();
            let cut = match busemann_profile(&g, base).sublevel(level) {
                SigmaSet::Empty => continue,
                SigmaSet::Interval(a, b) => (a, b),
                SigmaSet::Below(s) => (f64::NEG_INFINITY, s),
                SigmaSet::Above(s) => (s, f64::INFINITY),
            };
            let clipped = (cut.0.max(lo), cut.1.min(hi));
            if clipped.0 < clipped.1 {
                cuts.push(clipped);
            }
        }
        cuts.sort_by(|p, q| p.0.total_cmp(&q.0));

        let mut len = 0.0;
        let mut cursor = lo;
        for (a, b) in cuts {
            if a > cursor {
                len += a - cursor;
            }
            cursor = cursor.max(b);
        }
        if hi > cursor {
            len += hi - cursor;
        }
        debug_assert!(len.is_finite(), "edge {u}-{w} escaped every horodisk");
        Ok(len)
    }

    /// Slack of the two length inequalities for the inscribed polygon on the
    /// given vertex subset, as `(A slack, B slack)`: perimeter minus twice
    /// the respective labeled length.
    pub fn slack(&self, subset: &[usize]) -> Result<(f64, f64), DomainError> {
        let n = self.poly.len();
        let mut alpha = 0.0;
        let mut beta = 0.0;
        let mut chords = 0.0;
        for (t, &u) in subset.iter().enumerate() {
            let w = subset[(t + 1) % subset.len()];
            let len = self.edge_length(u, w)?;
            if w == (u + 1) % n {
                match self.poly.label(u) {
                    crate::domain::EdgeLabel::A => alpha += len,
                    crate::domain::EdgeLabel::B => beta += len,
                }
            } else {
                chords += len;
            }
        }
        Ok((beta - alpha + chords, alpha - beta + chords))
    }
}

#[derive(Clone, Debug)]
pub struct TruncationReport {
    /// Depth at which the horodisks become pairwise disjoint.
    pub n0: f64,
    /// Smallest slack over all inscribed polygons and requested depths.
    pub worst_slack: f64,
    /// Subset and depth attaining the worst slack.
    pub witness: Option<(Vec<usize>, f64)>,
    pub holds: bool,
}

/// Evaluate every inscribed polygon inequality at each depth (measured past
/// the disjointness baseline) and report the worst slack.
pub fn oracle(poly: &Polygon, depths: &[f64], tol: f64) -> Result<TruncationReport, DomainError> {
    let n0 = disjointness_baseline(poly);
    let subsets = enumerate_inscribed(poly.len());
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for &d in depths {
        let tr = Truncation::new(poly, n0 + d);
        for s in &subsets {
            let (sa, sb) = tr.slack(s)?;
            let m = sa.min(sb);
            if m < worst {
                worst = m;
                witness = Some((s.clone(), d));
            }
        }
    }
    Ok(TruncationReport {
        n0,
        worst_slack: worst,
        witness,
        holds: worst > tol,
    })
}
