//! Cross-checks of the closed form geometry against independent numerics:
//! distances against adaptive quadrature of the length integrand, and
//! intersections against the incidence equations they must satisfy.

use horograph::geom::{
    busemann, dist, geodesic_through, horocycle_intersection, Horocycle, HorocycleMeet, HPoint,
    IdealPoint, GEOM_TOL,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b))
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, whole: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let left = simpson(f, a, c);
    let right = simpson(f, c, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, c, 0.5 * eps, left, depth - 1)
            + adaptive(f, c, b, 0.5 * eps, right, depth - 1)
    }
}

fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    let whole = simpson(&f, a, b);
    adaptive(&f, a, b, eps, whole, 48)
}

/// Distance by numeric integration of `ds / y` along the connecting arc,
/// built from scratch out of Euclidean circle geometry.
fn dist_by_quadrature(p: HPoint, q: HPoint) -> f64 {
    if p.x == q.x {
        let (lo, hi) = if p.y < q.y { (p.y, q.y) } else { (q.y, p.y) };
        return quad(|y| 1.0 / y, lo, hi, 1e-13);
    }
    // Center of the circle through p and q orthogonal to the real axis.
    let t = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
    let phi_p = p.y.atan2(p.x - t);
    let phi_q = q.y.atan2(q.x - t);
    let (lo, hi) = if phi_p < phi_q {
        (phi_p, phi_q)
    } else {
        (phi_q, phi_p)
    };
    quad(|phi| 1.0 / phi.sin(), lo, hi, 1e-13)
}

fn sample_point(rng: &mut ChaCha8Rng) -> HPoint {
    HPoint::new(
        rng.random_range(-4.0..4.0),
        rng.random_range(-2.5f64..2.5).exp(),
    )
}

#[test]
fn distance_matches_quadrature_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut tested = 0;
    while tested < 300 {
        let p = sample_point(&mut rng);
        let mut q = sample_point(&mut rng);
        if tested % 5 == 0 {
            q.x = p.x;
        } else if (p.x - q.x).abs() < 1e-3 {
            continue;
        }
        let d = dist(p, q);
        if !(0.05..12.0).contains(&d) {
            continue;
        }
        let oracle = dist_by_quadrature(p, q);
        assert!(
            (d - oracle).abs() <= 1e-8 * oracle.max(1.0),
            "closed form {d} vs quadrature {oracle} for {p:?} {q:?}"
        );
        tested += 1;
    }
}

fn sample_horocycle(rng: &mut ChaCha8Rng) -> Horocycle {
    let base = if rng.random_range(0..6) == 0 {
        IdealPoint::Infinity
    } else {
        IdealPoint::Finite(rng.random_range(-3.0..3.0))
    };
    Horocycle {
        base,
        level: rng.random_range(-2.0..1.0),
    }
}

#[test]
fn intersections_satisfy_the_incidence_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut pairs = 0;
    let mut tested = 0;
    while tested < 300 {
        let c1 = sample_horocycle(&mut rng);
        let c2 = sample_horocycle(&mut rng);
        let meet = match horocycle_intersection(&c1, &c2, GEOM_TOL) {
            Ok(m) => m,
            Err(_) => continue,
        };
        tested += 1;
        let check = |p: HPoint| {
            for c in [&c1, &c2] {
                let residual = (busemann(c.base, p) - c.level).abs();
                assert!(
                    residual < 1e-10,
                    "incidence residual {residual} at {p:?} for {c:?}"
                );
            }
        };
        match meet {
            HorocycleMeet::Pair(p, q) => {
                check(p);
                check(q);
                pairs += 1;
            }
            HorocycleMeet::Tangent(p) => check(p),
            HorocycleMeet::Empty => {}
        }
    }
    assert!(pairs > 100, "only {pairs} transversal pairs sampled");
}

proptest! {
    #[test]
    fn triangle_inequality(
        (x1, x2, x3) in (-4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64),
        (t1, t2, t3) in (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
    ) {
        let p = HPoint::new(x1, t1.exp());
        let q = HPoint::new(x2, t2.exp());
        let r = HPoint::new(x3, t3.exp());
        prop_assert!(dist(p, r) <= dist(p, q) + dist(q, r) + 1e-12);
        prop_assert!((dist(p, q) - dist(q, p)).abs() <= 1e-15);
    }

    #[test]
    fn distance_is_invariant_under_translation_and_scaling(
        (x1, x2) in (-3.0..3.0f64, -3.0..3.0f64),
        (t1, t2) in (-2.0..2.0f64, -2.0..2.0f64),
        shift in -5.0..5.0f64,
        logscale in -2.0..2.0f64,
    ) {
        let s = logscale.exp();
        let p = HPoint::new(x1, t1.exp());
        let q = HPoint::new(x2, t2.exp());
        let pm = HPoint::new(s * (p.x + shift), s * p.y);
        let qm = HPoint::new(s * (q.x + shift), s * q.y);
        let d = dist(p, q);
        prop_assert!((d - dist(pm, qm)).abs() <= 1e-9 * (1.0 + d));
    }

    #[test]
    fn busemann_differences_are_invariant_at_a_shared_base(
        a in -3.0..3.0f64,
        (x1, x2) in (-3.0..3.0f64, -3.0..3.0f64),
        (t1, t2) in (-1.5..1.5f64, -1.5..1.5f64),
        shift in -4.0..4.0f64,
        logscale in -1.5..1.5f64,
    ) {
        let s = logscale.exp();
        let p = HPoint::new(x1, t1.exp());
        let q = HPoint::new(x2, t2.exp());
        let diff = busemann(IdealPoint::Finite(a), p) - busemann(IdealPoint::Finite(a), q);
        let pm = HPoint::new(s * (p.x + shift), s * p.y);
        let qm = HPoint::new(s * (q.x + shift), s * q.y);
        let moved = busemann(IdealPoint::Finite(s * (a + shift)), pm)
            - busemann(IdealPoint::Finite(s * (a + shift)), qm);
        prop_assert!((diff - moved).abs() <= 1e-10 * (1.0 + diff.abs()));
    }

    #[test]
    fn constructed_geodesics_pass_through_their_data(
        (x1, x2) in (-3.0..3.0f64, -3.0..3.0f64),
        (t1, t2) in (-1.5..1.5f64, -1.5..1.5f64),
    ) {
        let p = HPoint::new(x1, t1.exp());
        let q = HPoint::new(x2, t2.exp());
        prop_assume!(dist(p, q) > 1e-6);
        let g = geodesic_through(p, q, GEOM_TOL).unwrap();
        prop_assert!(g.dist_to(p) <= 1e-9);
        prop_assert!(g.dist_to(q) <= 1e-9);
        // The parametrization recovers both points.
        let pp = g.point_at(g.param_of(p));
        prop_assert!(dist(pp, p) <= 1e-9);
    }

    #[test]
    fn horocycle_parametrization_roundtrips(
        a in -3.0..3.0f64,
        level in -2.0..1.0f64,
        s in -20.0..20.0f64,
    ) {
        let c = Horocycle { base: IdealPoint::Finite(a), level };
        let p = c.point_at(s);
        prop_assert!(c.signed_depth(p).abs() <= 1e-10);
        prop_assert!((c.param_of(p) - s).abs() <= 1e-8 * (1.0 + s.abs()));
    }
}
