use std::f64::consts::PI;

use compass_nav::geometry::{Point, Rect};
use compass_nav::harness::{
    generate_pairs, run_experiment, summarize, write_outputs, ExperimentConfig, Outputs, PairSource, SlopeStatus,
};
use compass_nav::limits::{
    constants, euler_solve, predict, predict_cost, LimitCurve, MomentCache, OdeSpec, Stop,
};
use compass_nav::navigation::{NavKind, NavSpec, Navigator};
use compass_nav::point_process::{io, maxball, navmax, r_min, sample_iid, sample_ppp, DensityKind, DensitySpec};

fn affine() -> DensitySpec {
    DensitySpec::new(DensityKind::Affine { a: 1.0, b: 1.0, c: 0.5 }, Rect::UNIT, 0.05).unwrap()
}

#[test]
fn poisson_counts_match_the_intensity() {
    let d = affine();
    let n = 2000.0;
    let counts: Vec<f64> = (0..40).map(|s| sample_ppp(&d, n, s).unwrap().len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let expected = n * d.integral();
    // Poisson: the mean of 40 counts has standard deviation sqrt(expected / 40)
    assert!((mean - expected).abs() < 4.0 * (expected / 40.0).sqrt(), "{mean} vs {expected}");
    assert_eq!(sample_iid(&d, 777, 3).unwrap().len(), 777);
}

#[test]
fn point_sets_survive_both_formats() {
    let ps = sample_ppp(&affine(), 500.0, 11).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for name in ["set.csv", "set.bin"] {
        let path = dir.path().join(name);
        io::save(&ps, &path).unwrap();
        let back = io::load(&path).unwrap();
        assert_eq!(back.points(), ps.points());
        assert_eq!(back.meta(), ps.meta());
    }
}

#[test]
fn sampled_set_navigates_and_diagnoses() {
    let ps = sample_ppp(&DensitySpec::uniform_unit_square(0.1).unwrap(), 3000.0, 5).unwrap();
    let spec = NavSpec::with_sectors(NavKind::Yao, 6).unwrap();
    let r = Navigator::new(&spec, &ps).unwrap().run(Point::new(0.2, 0.3), Point::new(0.85, 0.7));
    assert!(r.success && r.strictly_approaches());
    let report = navmax(&ps, PI / 3.0, 0.05).unwrap();
    assert!(report.value.is_finite() && report.value > 0.0);
    // a ball of radius r_min / 2 around any lattice point holds at most one point
    let rm = r_min(&ps).unwrap();
    assert!(maxball(&ps, rm / 2.0, 0.01).unwrap() <= 1);
}

#[test]
fn unit_cost_is_ratio_times_distance_for_any_density() {
    let d = affine();
    let (s, t) = (Point::new(0.1, 0.2), Point::new(0.8, 0.75));
    let c = constants(NavKind::StraightT, PI / 2.0).unwrap();
    let spec = OdeSpec::new(c.c_bis, (t - s).arg(), s, d).with_cost(c.q_bis * c.c_bis, 1.0);
    let curve = euler_solve(&spec, Stop::HitPoint { target: t, tol: 1e-9 }).unwrap();
    // C' = Q̄ C̄ / √f along a path run at speed C̄ / √f gives Q̄ |s - t|
    let cost = curve.final_cost().unwrap();
    assert!((cost - c.q_bis * s.distance(t)).abs() < 1e-3, "{cost}");
}

#[test]
fn cost_prediction_for_g2_matches_direct_quadrature() {
    let d = affine();
    let spec = NavSpec::with_angle(NavKind::StraightT, PI / 2.0).unwrap();
    let (s, t) = (Point::new(0.1, 0.5), Point::new(0.9, 0.5));
    let mut cache = MomentCache::default();
    let cost = predict_cost(&spec, 2.0, s, t, &d, &mut cache).unwrap();
    // along y = 0.5: ∫ q / f dx / C̄ · √f = q / C̄ ∫ f^{-1/2} dx with f = 1.25 + x
    let c = constants(NavKind::StraightT, PI / 2.0).unwrap();
    let integral = 2.0 * ((2.15f64).sqrt() - (1.35f64).sqrt());
    let expected = 4.0 / 3.0 / c.c_bis * integral;
    assert!((cost - expected).abs() < 1e-3, "{cost} vs {expected}");
}

#[test]
fn limit_curve_reaches_the_corner_then_the_target() {
    let spec = NavSpec::with_sectors(NavKind::Yao, 6).unwrap();
    let (s, t) = (Point::new(0.2, 0.2), Point::new(0.8, 0.45));
    let p = predict(&spec, s, t, &DensitySpec::uniform_unit_square(0.05).unwrap()).unwrap();
    let corner = p.corner.unwrap();
    let curve: &LimitCurve = &p.curve;
    assert!(curve.positions.contains(&corner));
    assert_eq!(curve.final_position(), Some(t));
    assert_eq!(curve.position_at(1e9), t);
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("time,x,y,cost\n"));
}

fn small_config(dir: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        density: DensitySpec::uniform_unit_square(0.05).unwrap(),
        nav: NavSpec::with_sectors(NavKind::T, 6).unwrap(),
        n_values: vec![1000.0, 4000.0],
        seeds_per_n: 2,
        pairs: PairSource::Grid { step: 0.25, inset: 0.1, max_pairs: 5 },
        exponents: vec![0.0, 1.0, 2.0],
        outputs: Outputs {
            csv: Some(dir.join("rows.csv")),
            json: Some(dir.join("rows.json")),
            svg: Some(dir.join("scene.svg")),
        },
        master_seed: 42,
        navmax_step: Some(0.1),
        moment_samples: 10_000,
        record_wall_time: false,
    }
}

#[test]
fn experiment_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let rows = run_experiment(&config).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 5);
    write_outputs(&config, &rows).unwrap();
    let first = std::fs::read(dir.path().join("rows.csv")).unwrap();
    let svg = std::fs::read(dir.path().join("scene.svg")).unwrap();
    let rows = run_experiment(&config).unwrap();
    write_outputs(&config, &rows).unwrap();
    assert_eq!(std::fs::read(dir.path().join("rows.csv")).unwrap(), first);
    assert_eq!(std::fs::read(dir.path().join("scene.svg")).unwrap(), svg);
    let text = std::fs::read_to_string(dir.path().join("rows.json")).unwrap();
    assert!(text.contains("\"format\": \"compass-nav-results\""));

    for r in &rows {
        // g = 0 and g = 1 columns reproduce the stage count and the length
        assert_eq!(r.costs[0], r.nb_over_sqrt_n);
        assert_eq!(r.costs[1], r.length);
        assert_eq!(r.predicted_costs[1], r.predicted_length);
        assert!(r.navmax.is_some());
    }
    let summary = summarize(&rows).unwrap();
    assert_eq!(summary.per_n.len(), 2);
    assert!(summary.per_n.iter().all(|s| s.monotone_violations == 0 && s.successes == 10));
    assert_eq!(summary.length_slope.status, SlopeStatus::Fitted);
}

#[test]
fn master_seed_changes_samples_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path());
    config.navmax_step = None;
    let a = run_experiment(&config).unwrap();
    config.master_seed = 43;
    let b = run_experiment(&config).unwrap();
    assert_ne!(a[0].seed, b[0].seed);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.predicted_length, y.predicted_length);
        assert_eq!(x.predicted_nb_over_sqrt_n, y.predicted_nb_over_sqrt_n);
    }
    assert_eq!(generate_pairs(&config).unwrap().len(), 5);
}
