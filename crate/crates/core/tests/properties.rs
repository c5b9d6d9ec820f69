use std::f64::consts::PI;

use proptest::prelude::*;

use compass_nav::geometry::{gamma_path, hausdorff_distance, sector_index, CrossParams, DomainShape, Point, Polyline, Rect};
use compass_nav::limits::{constants, predict, predict_cost_with_moment};
use compass_nav::navigation::{costs, NavKind, NavSpec, Navigator};
use compass_nav::point_process::{sample_ppp, DensitySpec, PointSet, SectorQuery};

fn unit_point() -> impl Strategy<Value = Point> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn inner_point() -> impl Strategy<Value = Point> {
    (0.1..0.9f64, 0.1..0.9f64).prop_map(|(x, y)| Point::new(x, y))
}

fn guarded_navs() -> Vec<NavSpec> {
    vec![
        NavSpec::with_sectors(NavKind::Yao, 6).unwrap(),
        NavSpec::with_sectors(NavKind::T, 8).unwrap(),
        NavSpec::with_angle(NavKind::StraightYao, 1.2).unwrap(),
        NavSpec::with_angle(NavKind::StraightT, PI / 2.0).unwrap(),
    ]
}

/// Brute-force nearest point of a sector, by angle and projection.
fn brute_nearest(points: &[Point], q: &SectorQuery) -> Option<f64> {
    points
        .iter()
        .filter_map(|&p| {
            let v = p - q.apex;
            if v.norm() == 0.0 {
                return None;
            }
            let angle = (v.y.atan2(v.x) - q.direction + 3.0 * PI).rem_euclid(2.0 * PI) - PI;
            let u = v.x * q.direction.cos() + v.y * q.direction.sin();
            match q.shape {
                DomainShape::Camembert if angle.abs() <= q.half_angle => Some(v.norm()),
                DomainShape::Triangle if u > 0.0 && angle.abs() <= q.half_angle => Some(u),
                _ => None,
            }
        })
        .min_by(f64::total_cmp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sector_query_matches_brute_force(
        seed in 0u64..1000,
        apex in unit_point(),
        direction in -PI..PI,
        half in 0.05..1.5f64,
        triangle in any::<bool>(),
    ) {
        let ps = sample_ppp(&DensitySpec::uniform_unit_square(0.05).unwrap(), 400.0, seed).unwrap();
        let q = SectorQuery {
            apex,
            direction,
            half_angle: half,
            shape: if triangle { DomainShape::Triangle } else { DomainShape::Camembert },
        };
        let fast = ps.nearest_in_sector(&q, None).map(|h| h.key);
        let slow = brute_nearest(ps.points(), &q);
        match (fast, slow) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}"),
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn guarded_runs_approach_the_target(seed in 0u64..500, s in unit_point(), t in unit_point(), which in 0usize..4) {
        let ps = sample_ppp(&DensitySpec::uniform_unit_square(0.05).unwrap(), 300.0, seed).unwrap();
        let nav = &guarded_navs()[which];
        let r = Navigator::new(nav, &ps).unwrap().run(s, t);
        prop_assert!(r.success);
        prop_assert!(r.strictly_approaches());
        prop_assert!(r.within_start_ball());
        prop_assert_eq!(r.big_jump_violations(), 0);
        prop_assert_eq!(r.last(), t);
        prop_assert!(r.length >= s.distance(t) - 1e-12);
    }

    #[test]
    fn cost_identities_hold(seed in 0u64..500, s in unit_point(), t in unit_point()) {
        let ps = sample_ppp(&DensitySpec::uniform_unit_square(0.05).unwrap(), 300.0, seed).unwrap();
        let r = Navigator::new(&guarded_navs()[1], &ps).unwrap().run(s, t);
        let c = costs(&r, &[0.0, 1.0, 2.0]);
        prop_assert_eq!(c.get(0.0), Some(r.nb as f64));
        prop_assert_eq!(c.get(1.0), Some(r.length));
        let direct: f64 = r.stages.iter().map(|d| d.norm_sqr()).sum();
        prop_assert!((c.get(2.0).unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn translation_keeps_stops(seed in 0u64..200, s in unit_point(), t in unit_point(), which in 0usize..4) {
        let base = sample_ppp(&DensitySpec::uniform_unit_square(0.05).unwrap(), 200.0, seed).unwrap();
        // power-of-two shift keeps every coordinate exact
        let shift = Point::new(2.0, -4.0);
        let moved = PointSet::from_points(
            base.points().iter().map(|&p| p + shift).collect(),
            Rect::new(2.0, -4.0, 3.0, -3.0).unwrap(),
        ).unwrap();
        let nav = &guarded_navs()[which];
        let a = Navigator::new(nav, &base).unwrap().run(s, t);
        let b = Navigator::new(nav, &moved).unwrap().run(s + shift, t + shift);
        prop_assert_eq!(a.stop_ids, b.stop_ids);
    }

    #[test]
    fn sector_index_contains_direction(p in 3u32..12, s in unit_point(), t in unit_point()) {
        prop_assume!(s != t);
        let cross = CrossParams::new(p).unwrap();
        let k = sector_index(s, t, cross).unwrap();
        let bis = cross.bisector(k, 0.0);
        let d = ((t - s).arg() - bis + 3.0 * PI).rem_euclid(2.0 * PI) - PI;
        prop_assert!(d.abs() <= cross.theta() / 2.0 + 1e-9);
    }

    #[test]
    fn gamma_chains_s_to_t(s in inner_point(), t in inner_point()) {
        prop_assume!(s != t);
        let cross = CrossParams::new(6).unwrap();
        let g = gamma_path(s, t, cross);
        // both pieces lie in one sector, so Γ is at most 1/cos(θ/2) longer than [s, t]
        prop_assert_eq!(g.vertices().first().copied(), Some(s));
        prop_assert_eq!(g.vertices().last().copied(), Some(t));
        prop_assert!(g.length() >= s.distance(t) - 1e-12);
        prop_assert!(g.length() <= s.distance(t) / (PI / 6.0).cos() + 1e-12);
    }

    #[test]
    fn hausdorff_is_a_metric_on_samples(a in inner_point(), b in inner_point(), c in inner_point()) {
        let p = Polyline::new(vec![a, b]);
        let q = Polyline::new(vec![a, c]);
        let d = hausdorff_distance(&p, &q, 1e-3).unwrap();
        prop_assert!((d - hausdorff_distance(&q, &p, 1e-3).unwrap()).abs() < 1e-12);
        prop_assert!(d <= b.distance(c) + 1e-12);
        prop_assert!(hausdorff_distance(&p, &p, 1e-3).unwrap() < 1e-12);
    }

    #[test]
    fn straight_predictions_scale_with_distance(s in inner_point(), t in inner_point(), theta in 0.3..1.5f64) {
        let nav = NavSpec::with_angle(NavKind::StraightT, theta).unwrap();
        let density = DensitySpec::uniform_unit_square(0.05).unwrap();
        let p = predict(&nav, s, t, &density).unwrap();
        let c = constants(NavKind::StraightT, theta).unwrap();
        prop_assert!((p.limit_length - c.q_bis * s.distance(t)).abs() < 1e-12);
        // constant density: the hit time is |s - t| / C̄ up to one Euler step
        let h = 1e-4 * density.domain.diameter();
        prop_assert!((p.limit_nb_over_sqrt_n - s.distance(t) / c.c_bis).abs() <= h);
        let g0 = predict_cost_with_moment(&nav, 0.0, 1.0, s, t, &density).unwrap();
        prop_assert_eq!(g0, p.limit_nb_over_sqrt_n);
    }
}
