use dmbst::starsearch::{self, fixture, fixture_ids, verify_fixture, SearchOptions, FIXTURE_SLACK, SEARCH_SLACK};
use dmbst::Point3;

#[test]
fn search_from_a_fixture_never_reports_less() {
    for id in fixture_ids() {
        let f = fixture(id).unwrap();
        let check = verify_fixture(id).unwrap();
        let opts = SearchOptions {
            restarts: 2,
            iterations: 200,
            seed: 11,
            init: Some(f.points.iter().map(|&p| Point3::from(p)).collect()),
            record_trajectory: false,
        };
        let config = f.config().unwrap();
        let r = starsearch::search(config.metric, config.children.len(), config.kind, &opts).unwrap();
        assert!(r.best_value >= check.recomputed, "{id}: {} < {}", r.best_value, check.recomputed);
        assert!(r.best_config.is_feasible(FIXTURE_SLACK), "{id}");
    }
}

#[test]
fn random_restarts_stay_feasible() {
    for (metric, count) in [(dmbst::Metric::Euclidean, 6), (dmbst::Metric::Rectilinear, 6)] {
        let opts = SearchOptions { restarts: 8, iterations: 300, seed: 3, ..Default::default() };
        let r = starsearch::search(metric, count, starsearch::ObjectiveKind::NkrySwap, &opts).unwrap();
        assert!(r.best_config.is_feasible(SEARCH_SLACK));
        assert_eq!(starsearch::objective(&r.best_config).unwrap(), r.best_value);
    }
}

#[test]
fn search_is_seed_deterministic() {
    let opts = SearchOptions { restarts: 4, iterations: 200, seed: 42, ..Default::default() };
    let kind = starsearch::ObjectiveKind::PkrySwap(2);
    let a = starsearch::search(dmbst::Metric::Euclidean, 5, kind, &opts).unwrap();
    let b = starsearch::search(dmbst::Metric::Euclidean, 5, kind, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn side_chord_is_longest_at_equal_arms() {
    for step in 0..=120 {
        let theta = (60.0 + step as f64).to_radians();
        let z = |x: f64| (x * x + 1.0 - 2.0 * x * theta.cos()).sqrt();
        let top = z(1.0);
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            assert!(z(x) <= top + 1e-15, "theta {step}+60, x {x}");
        }
    }
}
