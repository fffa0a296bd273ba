use hyperslender::analysis::{converge, default_grid, strictly_decreasing, Quantity};
use hyperslender::closed_forms::{solve_a3, solve_b, Problem, SolveConfig};
use hyperslender::flow_state::{scaled_upstream, upstream};
use hyperslender::geometry::{AdmissibilityOptions, BodyProfile};
use hyperslender::measure::{RegionKind, RegionSpec};
use hyperslender::output::{render_csv, solution_rows};
use hyperslender::verifier::{sample_bumps, verify_tau_identity};

#[test]
fn csv_round_trip_matches_weights() {
    let body = BodyProfile::parse("sum:linear:a=0.5+log:a=1,c=2", 4.0).unwrap();
    let sol = solve_b(&body, &scaled_upstream(1.5, 1.3).unwrap(), &SolveConfig::default()).unwrap();
    let grid: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64).collect();
    let text = render_csv(&serde_json::json!({}), sol.csv_header(), &solution_rows(&sol, &grid).unwrap());
    for (line, &x) in text.lines().skip(2).zip(&grid) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let w = sol.weights_at(x).unwrap();
        assert_eq!(cells[0], x);
        assert_eq!(&cells[1..], &w.csv_values()[..]);
    }
}

#[test]
fn tau_identity_on_composite_body() {
    let body = BodyProfile::parse("sum:linear:a=0.3+exp:a=0.2,k=0.5", 3.0).unwrap();
    let st = upstream(0.8, 0.15, 1.4, 2.0, 3.0).unwrap();
    for (problem, kind) in [(Problem::A, RegionKind::AboveCurve2d), (Problem::A3, RegionKind::OutsideCurveAxisym)] {
        let region = RegionSpec::new(kind, body.clone(), 1.0, RegionSpec::default_height(&body, 1.0)).unwrap();
        let bumps = sample_bumps(&region, 9, 21, (0.1, 0.4)).unwrap();
        for c in verify_tau_identity(problem, &body, &st, &bumps, &SolveConfig::default()).unwrap() {
            assert!(c.rel_err <= 1e-9, "{problem}: {}", c.rel_err);
        }
    }
}

#[test]
fn exponential_body_converges() {
    let body = BodyProfile::parse("exp:a=0.5,k=0.3", 4.0).unwrap();
    let opts = AdmissibilityOptions::default();
    let s = converge(Problem::A3, &body, 1.0, 1.4, &[0.2, 0.1, 0.05], &default_grid(&body, 101), &opts).unwrap();
    for q in [Quantity::UTrace, Quantity::VTrace, Quantity::DensityWeightRatio, Quantity::PressureWeight] {
        assert!(strictly_decreasing(&s.report(q).sup_errors), "{q:?}");
    }
}

#[test]
fn cone_pressure_sign_is_recorded() {
    let body = BodyProfile::parse("linear:a=1", 5.0).unwrap();
    let sol = solve_a3(&body, &upstream(1.0, 0.1, 1.4, 1.0, 1.0).unwrap(), &SolveConfig::default()).unwrap();
    assert!(sol.pressure_violations.is_empty());
    assert!(sol.verdict.admissible);
}
