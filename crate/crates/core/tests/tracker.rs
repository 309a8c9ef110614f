use realwitness::tracker::{cauchy_endgame, track_between, track_path, Homotopy, PathStatus, TrackOptions};
use realwitness::{parse_system, C64};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn homotopy(text: &str) -> Homotopy {
    Homotopy::new(parse_system(text).unwrap(), 11).unwrap()
}

#[test]
fn square_root_path_converges_to_two() {
    // x(t) = sqrt(4 - 3t)
    let h = homotopy("variables: x t\nx^2 - (4 - 3*t)");
    let r = track_path(&h, &[re(1.0)], &TrackOptions::default());
    assert_eq!(r.status, PathStatus::Converged, "{r:?}");
    assert_eq!(r.winding, 1);
    let x = r.endpoint.unwrap()[0];
    assert!((x - re(2.0)).norm() < 1e-12, "{x}");
}

#[test]
fn reciprocal_path_is_at_infinity() {
    let h = homotopy("variables: x t\nt*x - 1");
    let r = track_path(&h, &[re(1.0)], &TrackOptions::default());
    assert_eq!(r.status, PathStatus::AtInfinity, "{r:?}");
}

#[test]
fn endgame_on_square_root_branch() {
    let h = homotopy("variables: x t\nx^2 - t");
    for te in [0.1_f64, 0.01] {
        let opts = TrackOptions::default();
        let eg = cauchy_endgame(&h, &[re(te.sqrt())], te, &opts);
        assert!(eg.ok);
        assert_eq!(eg.winding, 2);
        assert!(eg.endpoint[0].norm() < 1e-10, "{:?}", eg.endpoint);
    }
    let r = track_path(&h, &[re(1.0)], &TrackOptions::default());
    assert_eq!(r.status, PathStatus::ConvergedSingular);
    assert_eq!(r.winding, 2);
    assert!(r.endpoint.unwrap()[0].norm() < 1e-10);
}

#[test]
fn endgame_matches_plain_tracking_for_nonsingular_endpoint() {
    let h = homotopy("variables: x t\nx^3 - 2*x - (1 + t)");
    let opts = TrackOptions::default();
    let start = [re(1.7692923542386314)];
    let direct = track_between(&h, &start, 1.0, 0.0, &opts).unwrap();
    let approach = track_between(&h, &start, 1.0, opts.endgame_start, &opts).unwrap();
    let eg = cauchy_endgame(&h, &approach, opts.endgame_start, &opts);
    assert!(eg.ok);
    assert_eq!(eg.winding, 1);
    assert!((eg.endpoint[0] - direct[0]).norm() < 1e-9);
}
