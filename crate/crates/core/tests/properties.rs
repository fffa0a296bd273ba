use hyperslender::closed_forms::{
    nonlinear_constraints, solve, weight_ode_residuals, Field, MeasureSolution, Problem, SolveConfig,
};
use hyperslender::flow_state::{scaled_upstream, upstream};
use hyperslender::geometry::BodyProfile;
use hyperslender::verifier::{max_normalized, sample_bumps, verify_weak};
use proptest::prelude::*;

const ALL: [Problem; 4] = [Problem::A, Problem::B, Problem::A3, Problem::B3];

fn build(problem: Problem, spec: &str, k: f64, tau: f64, gamma: f64) -> Option<MeasureSolution> {
    let body = BodyProfile::parse(spec, 3.0).unwrap();
    let st = upstream(k, tau, gamma, 1.0, 1.0).unwrap();
    let sc = scaled_upstream(k, gamma).unwrap();
    solve(problem, &body, Some(&st), &sc, &SolveConfig::default()).ok()
}

#[test]
fn every_weight_defect_is_detected() {
    for problem in ALL {
        let sol = build(problem, "log:a=1", 1.0, 0.1, 1.4).unwrap();
        let bumps = sample_bumps(&sol.region, 24, 11, (0.1, 0.5)).unwrap();
        let clean = max_normalized(&verify_weak(&sol, &bumps).unwrap());
        let base = nonlinear_constraints(&sol, 64).max_relative;
        for f in Field::ALL {
            let bad = sol.with_defect(f, 1.05);
            // the density weight only enters through the trace constraints
            if f == Field::WRho {
                assert!(nonlinear_constraints(&bad, 64).max_relative > 1e-3, "{problem}");
                assert!(base < 1e-10);
                continue;
            }
            let dirty = max_normalized(&verify_weak(&bad, &bumps).unwrap());
            assert!(dirty > 100.0 * clean.max(1e-16), "{problem} {f:?}: {clean:e} -> {dirty:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_bodies_satisfy_closed_form_checks(
        a in 0.2f64..1.5, p in 2.0f64..3.5, k in 0.5f64..2.0, tau in 0.02f64..0.3, gamma in 1.1f64..1.67,
        which in 0usize..4,
    ) {
        let spec = format!("power:a={a},p={p}");
        if let Some(sol) = build(ALL[which], &spec, k, tau, gamma) {
            prop_assert!(nonlinear_constraints(&sol, 64).max_relative <= 1e-10);
            for r in weight_ode_residuals(&sol, 64) {
                prop_assert!(r.relative <= 1e-6, "{} {}", r.name, r.relative);
            }
            let bumps = sample_bumps(&sol.region, 6, 5, (0.1, 0.4)).unwrap();
            prop_assert!(max_normalized(&verify_weak(&sol, &bumps).unwrap()) <= 1e-6);
        }
    }

    #[test]
    fn residual_ignores_bump_amplitude(alpha in 0.01f64..100.0, which in 0usize..4) {
        let sol = build(ALL[which], "sum:linear:a=0.5+power:a=0.2,p=2", 1.0, 0.1, 1.4).unwrap();
        let bumps = sample_bumps(&sol.region, 3, 2, (0.1, 0.4)).unwrap();
        let scaled: Vec<_> = bumps.iter().map(|b| b.scaled(alpha)).collect();
        let r1 = verify_weak(&sol, &bumps).unwrap();
        let r2 = verify_weak(&sol, &scaled).unwrap();
        for (x, y) in r1.iter().zip(&r2) {
            for (u, v) in x.residuals.iter().zip(&y.residuals) {
                prop_assert!((u.normalized - v.normalized).abs() <= 1e-9);
                prop_assert!((u.raw * alpha - v.raw).abs() <= 1e-9 * (1.0 + v.raw.abs()));
            }
        }
    }
}
