//! Pointwise self-checks of a solution: Radon-Nikodym constraints and the
//! first-order ODEs the weights obey along the body.

use super::{MeasureSolution, Problem, Role, WeightRow};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub max_relative: f64,
    pub worst_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub problem: Problem,
    pub points: usize,
    pub checks: Vec<ConstraintCheck>,
    pub max_relative: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Uniform grid of `n` points on `(0, X]`.
pub fn boundary_grid(x_end: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| x_end * i as f64 / n as f64).collect()
}

type Identity = (&'static str, fn(&WeightRow) -> (f64, f64));

fn identities(problem: Problem) -> Vec<Identity> {
    let common: Vec<Identity> = vec![
        ("w1x = u^2 w_rho", |r| (r.w1x, r.u * r.u * r.w_rho)),
        ("w1y = u v w_rho", |r| (r.w1y, r.u * r.v * r.w_rho)),
        ("w2x = u v w_rho", |r| (r.w2x, r.u * r.v * r.w_rho)),
        ("w2y = v^2 w_rho", |r| (r.w2y, r.v * r.v * r.w_rho)),
        ("w3x = E u w_rho", |r| (r.w3x, r.e * r.u * r.w_rho)),
        ("w3y = E v w_rho", |r| (r.w3y, r.e * r.v * r.w_rho)),
    ];
    let scaled: Vec<Identity> = vec![
        ("w0x = w_rho", |r| (r.w0x, r.w_rho)),
        ("w0y = v w_rho", |r| (r.w0y, r.v * r.w_rho)),
        ("w1x = u w_rho", |r| (r.w1x, r.u * r.w_rho)),
        ("w1y = u v w_rho", |r| (r.w1y, r.u * r.v * r.w_rho)),
        ("w2x = v w_rho", |r| (r.w2x, r.v * r.w_rho)),
        ("w2y = v^2 w_rho", |r| (r.w2y, r.v * r.v * r.w_rho)),
        ("w3x = E w_rho", |r| (r.w3x, r.e * r.w_rho)),
        ("w3y = E v w_rho", |r| (r.w3y, r.e * r.v * r.w_rho)),
    ];
    if problem.is_scaled() {
        scaled
    } else {
        let mut v: Vec<Identity> = vec![
            ("w0x = u w_rho", |r| (r.w0x, r.u * r.w_rho)),
            ("w0y = v w_rho", |r| (r.w0y, r.v * r.w_rho)),
        ];
        v.extend(common);
        v
    }
}

/// Relative defect of every nonlinear constraint over `n` points of `(0, X]`.
pub fn nonlinear_constraints(sol: &MeasureSolution, n: usize) -> ConstraintReport {
    let grid = boundary_grid(sol.profile.domain_end(), n);
    let rows: Vec<WeightRow> = grid.iter().map(|&x| sol.row_raw(x)).collect();
    let mut checks = Vec::new();
    for (name, f) in identities(sol.problem) {
        let mut worst = (0.0, 0.0);
        for (x, r) in grid.iter().zip(&rows) {
            let (a, b) = f(r);
            let e = rel(a, b);
            if !(e <= worst.0) {
                worst = (e, *x);
            }
        }
        checks.push(ConstraintCheck {
            name: name.to_string(),
            max_relative: worst.0,
            worst_x: worst.1,
        });
    }
    let max_relative = checks.iter().map(|c| c.max_relative).fold(0.0, f64::max);
    ConstraintReport {
        problem: sol.problem,
        points: n,
        checks,
        max_relative,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub name: String,
    pub max_abs: f64,
    pub scale: f64,
    pub relative: f64,
    pub worst_x: f64,
}

fn five_point(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Residuals of the transport ODEs along the body, derivatives by 5-point
/// central differences at `n` interior points.
///
/// With `g` the body curve in the problem's plane, `c = 1` planar or `c = g`
/// axisymmetric, and `A_k` the upstream fluxes:
/// `(c s w0x)' = c g' A_0`, `(c s w1x)' = c g' (A_1 + P - w_p)`,
/// `(c s w2x)' = c (w_p - P)`, `(c s w3x)' = c g' A_3`, with `s = sqrt(1+g'^2)`;
/// plus `w_ky = g' w_kx`.
pub fn weight_ode_residuals(sol: &MeasureSolution, n: usize) -> Vec<OdeResidual> {
    let x_end = sol.profile.domain_end();
    let grid: Vec<f64> = (1..=n).map(|i| x_end * i as f64 / (n + 1) as f64).collect();
    let h = (0.2 * grid[0]).min(1e-3 * x_end / 5.0);
    let axisym = sol.problem.is_axisym();
    let ac = |role: Role| sol.component(role).map_or(0.0, |m| m.ac().uniform);
    let (a0, a1, a3, p) = (
        ac(Role::MassX),
        ac(Role::MomxX),
        ac(Role::EnergyX),
        ac(Role::Pressure),
    );
    let geom = |x: f64| {
        let (g, dg) = sol.curve(x);
        let c = if axisym { g } else { 1.0 };
        (c, dg, (1.0 + dg * dg).sqrt())
    };
    let carrier = |pick: fn(&WeightRow) -> f64| {
        move |x: f64| {
            let (c, _, s) = geom(x);
            c * s * pick(&sol.row_raw(x))
        }
    };

    let mut out = Vec::new();
    let mut record = |name: &str, pairs: Vec<(f64, f64, f64)>| {
        let mut max_abs = 0.0f64;
        let mut scale = 0.0f64;
        let mut worst_x = 0.0;
        for (x, l, r) in pairs {
            let d = (l - r).abs();
            if !(d <= max_abs) {
                max_abs = d;
                worst_x = x;
            }
            scale = scale.max(l.abs()).max(r.abs());
        }
        let relative = if scale == 0.0 { max_abs } else { max_abs / scale };
        out.push(OdeResidual {
            name: name.to_string(),
            max_abs,
            scale,
            relative,
            worst_x,
        });
    };

    type Rhs<'a> = Box<dyn Fn(f64, &WeightRow) -> f64 + 'a>;
    let transports: Vec<(&str, fn(&WeightRow) -> f64, Rhs)> = vec![
        (
            "mass",
            |r| r.w0x,
            Box::new(|x, _| {
                let (c, dg, _) = geom(x);
                c * dg * a0
            }),
        ),
        (
            "momentum_x",
            |r| r.w1x,
            Box::new(|x, r| {
                let (c, dg, _) = geom(x);
                c * dg * (a1 + p - r.w_p)
            }),
        ),
        (
            "momentum_y",
            |r| r.w2x,
            Box::new(|x, r| {
                let (c, _, _) = geom(x);
                c * (r.w_p - p)
            }),
        ),
        (
            "energy",
            |r| r.w3x,
            Box::new(|x, _| {
                let (c, dg, _) = geom(x);
                c * dg * a3
            }),
        ),
    ];
    for (name, pick, rhs) in &transports {
        let f = carrier(*pick);
        let pairs = grid
            .iter()
            .map(|&x| (x, five_point(&f, x, h), rhs(x, &sol.row_raw(x))))
            .collect();
        record(name, pairs);
    }
    let slopes: [(&str, fn(&WeightRow) -> (f64, f64)); 4] = [
        ("slope_mass", |r| (r.w0y, r.w0x)),
        ("slope_momentum_x", |r| (r.w1y, r.w1x)),
        ("slope_momentum_y", |r| (r.w2y, r.w2x)),
        ("slope_energy", |r| (r.w3y, r.w3x)),
    ];
    for (name, pick) in slopes {
        let pairs = grid
            .iter()
            .map(|&x| {
                let (y, xw) = pick(&sol.row_raw(x));
                (x, y, geom(x).1 * xw)
            })
            .collect();
        record(name, pairs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{solve_a, solve_a3, solve_b, solve_b3, Field, SolveConfig};
    use super::*;
    use crate::flow_state::{scaled_upstream, upstream};
    use crate::geometry::BodyProfile;

    fn all(spec: &str) -> Vec<MeasureSolution> {
        let p = BodyProfile::parse(spec, 5.0).unwrap();
        let st = upstream(1.0, 0.1, 1.4, 1.0, 1.0).unwrap();
        let sc = scaled_upstream(1.0, 1.4).unwrap();
        let c = SolveConfig::default();
        vec![
            solve_a(&p, &st, &c).unwrap(),
            solve_b(&p, &sc, &c).unwrap(),
            solve_a3(&p, &st, &c).unwrap(),
            solve_b3(&p, &sc, &c).unwrap(),
        ]
    }

    #[test]
    fn constraints_hold() {
        for spec in ["linear:a=1", "power:a=1,p=2", "log:a=1"] {
            for sol in all(spec) {
                let r = nonlinear_constraints(&sol, 512);
                assert!(r.max_relative <= 1e-10, "{spec} {:?}: {:?}", sol.problem, r.checks);
                assert_eq!(r.checks.len(), 8);
            }
        }
    }

    #[test]
    fn odes_hold() {
        for spec in ["linear:a=1", "power:a=1,p=2", "log:a=1"] {
            for sol in all(spec) {
                for r in weight_ode_residuals(&sol, 512) {
                    assert!(r.relative <= 1e-6, "{spec} {:?} {}: {:?}", sol.problem, r.name, r);
                }
            }
        }
    }

    #[test]
    fn defects_are_detected() {
        let sol = &all("log:a=1")[0];
        let bad = sol.with_defect(Field::W1x, 1.05);
        assert!(nonlinear_constraints(&bad, 64).max_relative > 0.04);
        let worst = weight_ode_residuals(&bad, 64)
            .into_iter()
            .map(|r| r.relative)
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
        let bad = sol.with_defect(Field::WP, 1.05);
        let mom_y = weight_ode_residuals(&bad, 64)
            .into_iter()
            .find(|r| r.name == "momentum_y")
            .unwrap();
        assert!(mom_y.relative > 1e-2);
    }
}
