use super::geodesic::Geodesic;
use super::point::IdealPoint;

/// Restriction of a Busemann function to a unit speed geodesic.
///
/// Along any geodesic the Busemann function of a base point is either affine
/// with slope plus or minus one, when the geodesic ends at that base, or of
/// the form `bmin + ln cosh(sigma - sigma0)` otherwise. Both cases admit
/// closed form level crossings, which is what the truncation machinery runs
/// on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BusemannProfile {
    Linear { b0: f64, slope: f64 },
    Cosh { bmin: f64, sigma0: f64 },
}

/// Set of parameters where a profile stays strictly below a level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaSet {
    Empty,
    /// Bounded interval `(lo, hi)`.
    Interval(f64, f64),
    /// Half line `sigma < hi`.
    Below(f64),
    /// Half line `sigma > lo`.
    Above(f64),
}

/// Profile of the Busemann function of `base` along `g`.
///
/// A base within rounding distance of an endpoint of `g` is snapped onto it,
/// since the generic branch loses all precision there; the cutoff is far
/// below any vertex separation arising in a polygon.
pub fn busemann_profile(g: &Geodesic, base: IdealPoint) -> BusemannProfile {
    match (*g, base) {
        (Geodesic::Vertical { .. }, IdealPoint::Infinity) => BusemannProfile::Linear {
            b0: 0.0,
            slope: -1.0,
        },
        (Geodesic::Vertical { x }, IdealPoint::Finite(a)) => {
            let d = x - a;
            if d.abs() <= 1e-12 * a.abs().max(1.0) {
                BusemannProfile::Linear {
                    b0: -(a * a).ln_1p(),
                    slope: 1.0,
                }
            } else {
                BusemannProfile::Cosh {
                    bmin: (2.0 * d.abs()).ln() - (a * a).ln_1p(),
                    sigma0: d.abs().ln(),
                }
            }
        }
        (Geodesic::Semicircle { radius, .. }, IdealPoint::Infinity) => BusemannProfile::Cosh {
            bmin: -radius.ln(),
            sigma0: 0.0,
        },
        (Geodesic::Semicircle { center, radius }, IdealPoint::Finite(a)) => {
            let e = center - a;
            if (e.abs() - radius).abs() <= 1e-12 * radius.max(a.abs()).max(1.0) {
                // Base at an endpoint: left when `e` is positive, reached as
                // sigma decreases, right otherwise.
                BusemannProfile::Linear {
                    b0: (2.0 * radius).ln() - (a * a).ln_1p(),
                    slope: if e > 0.0 { 1.0 } else { -1.0 },
                }
            } else {
                let dd = (e * e + radius * radius) / radius;
                let ee = 2.0 * e;
                BusemannProfile::Cosh {
                    bmin: ((e * e - radius * radius).abs() / radius).ln() - (a * a).ln_1p(),
                    sigma0: -(ee / dd).atanh(),
                }
            }
        }
    }
}

/// `ln cosh` without overflow for large arguments.
fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Inverse of `ln cosh` on the nonnegative branch, stable for large values.
fn ln_cosh_inv(v: f64) -> f64 {
    debug_assert!(v >= 0.0);
    if v > 30.0 {
        v + std::f64::consts::LN_2
    } else {
        v.exp().acosh()
    }
}

impl BusemannProfile {
    pub fn eval(&self, sigma: f64) -> f64 {
        match *self {
            BusemannProfile::Linear { b0, slope } => b0 + slope * sigma,
            BusemannProfile::Cosh { bmin, sigma0 } => bmin + ln_cosh(sigma - sigma0),
        }
    }

    /// Minimum of the profile over the whole geodesic.
    pub fn min_value(&self) -> f64 {
        match *self {
            BusemannProfile::Linear { .. } => f64::NEG_INFINITY,
            BusemannProfile::Cosh { bmin, .. } => bmin,
        }
    }

    /// Parameters where the profile is strictly below `level`. Tangency, a
    /// cosh profile whose minimum equals the level, counts as empty.
    pub fn sublevel(&self, level: f64) -> SigmaSet {
        match *self {
            BusemannProfile::Linear { b0, slope } => {
                let s = (level - b0) / slope;
                if slope > 0.0 {
                    SigmaSet::Below(s)
                } else {
                    SigmaSet::Above(s)
                }
            }
            BusemannProfile::Cosh { bmin, sigma0 } => {
                if level <= bmin {
                    SigmaSet::Empty
                } else {
                    let w = ln_cosh_inv(level - bmin);
                    SigmaSet::Interval(sigma0 - w, sigma0 + w)
                }
            }
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{busemann, geodesic_through, HPoint, GEOM_TOL};
    use approx::assert_abs_diff_eq;

    fn check_profile_matches_pointwise(g: &Geodesic, base: IdealPoint) {
        let prof = busemann_profile(g, base);
        for k in -24..=24 {
            let sigma = 0.5 * k as f64;
            let direct = busemann(base, g.point_at(sigma));
            assert_abs_diff_eq!(prof.eval(sigma), direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn profiles_agree_with_pointwise_busemann() {
        let gs = [
            Geodesic::Vertical { x: 0.0 },
            Geodesic::Vertical { x: -2.5 },
            Geodesic::Semicircle {
                center: 1.75,
                radius: 1.25,
            },
            Geodesic::Semicircle {
                center: -0.3,
                radius: 4.0,
            },
        ];
        let bases = [
            IdealPoint::Infinity,
            IdealPoint::Finite(0.0),
            IdealPoint::Finite(-2.5),
            IdealPoint::Finite(3.0),
            IdealPoint::Finite(0.5),
        ];
        for g in &gs {
            for &b in &bases {
                check_profile_matches_pointwise(g, b);
            }
        }
    }

    #[test]
    fn endpoint_bases_give_affine_profiles() {
        let g = geodesic_through(IdealPoint::Finite(0.5), IdealPoint::Finite(3.0), GEOM_TOL)
            .unwrap();
        match busemann_profile(&g, IdealPoint::Finite(0.5)) {
            BusemannProfile::Linear { slope, .. } => assert_eq!(slope, 1.0),
            other => panic!("expected a linear profile, got {other:?}"),
        }
        match busemann_profile(&g, IdealPoint::Finite(3.0)) {
            BusemannProfile::Linear { slope, .. } => assert_eq!(slope, -1.0),
            other => panic!("expected a linear profile, got {other:?}"),
        }
        match busemann_profile(&Geodesic::Vertical { x: 2.0 }, IdealPoint::Finite(2.0)) {
            BusemannProfile::Linear { slope, b0 } => {
                assert_eq!(slope, 1.0);
                assert_abs_diff_eq!(b0, -5.0f64.ln(), epsilon = 1e-15);
            }
            other => panic!("expected a linear profile, got {other:?}"),
        }
    }

    #[test]
    fn sublevel_roots_sit_on_the_level() {
        let g = Geodesic::Semicircle {
            center: 0.4,
            radius: 2.0,
        };
        let base = IdealPoint::Finite(-1.0);
        let prof = busemann_profile(&g, base);
        for level in [-0.5, 0.0, 1.0, 4.0, 20.0] {
            match prof.sublevel(level) {
                SigmaSet::Interval(lo, hi) => {
                    assert!(lo < hi);
                    assert_abs_diff_eq!(busemann(base, g.point_at(lo)), level, epsilon = 1e-9);
                    assert_abs_diff_eq!(busemann(base, g.point_at(hi)), level, epsilon = 1e-9);
                }
                SigmaSet::Empty => assert!(level <= prof.min_value()),
                other => panic!("cosh profile cannot give {other:?}"),
            }
        }
    }

    #[test]
    fn linear_sublevels_are_half_lines() {
        let prof = busemann_profile(&Geodesic::Vertical { x: 1.0 }, IdealPoint::Infinity);
        assert_eq!(prof.sublevel(-3.0), SigmaSet::Above(3.0));
        let prof = busemann_profile(&Geodesic::Vertical { x: 0.0 }, IdealPoint::Finite(0.0));
        assert_eq!(prof.sublevel(0.0), SigmaSet::Below(0.0));
    }

    #[test]
    fn deep_levels_use_the_asymptotic_branch() {
        let prof = BusemannProfile::Cosh {
            bmin: 0.0,
            sigma0: 0.0,
        };
        match prof.sublevel(50.0) {
            SigmaSet::Interval(lo, hi) => {
                assert_abs_diff_eq!(hi, 50.0 + std::f64::consts::LN_2, epsilon = 1e-12);
                assert_abs_diff_eq!(lo, -hi, epsilon = 1e-12);
                assert_abs_diff_eq!(prof.eval(hi), 50.0, epsilon = 1e-12);
            }
            other => panic!("expected an interval, got {other:?}"),
        }
    }

    #[test]
    fn profile_of_circle_through_basepoint_bottoms_out_at_zero_level() {
        // Geodesic through the basepoint heading to the base at 1/2: the
        // horocycle level 0 cuts it where the Busemann function hits 0.
        let g = geodesic_through(HPoint::new(0.0, 1.0), IdealPoint::Finite(0.5), GEOM_TOL)
            .unwrap();
        let prof = busemann_profile(&g, IdealPoint::Finite(0.5));
        let s0 = g.param_of(HPoint::new(0.0, 1.0));
        assert_abs_diff_eq!(prof.eval(s0), 0.0, epsilon = 1e-13);
    }
}
