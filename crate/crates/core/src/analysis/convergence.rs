//! Hypersonic similarity: scaled traces of the dimensional solutions against
//! the small-disturbance solutions as `tau -> 0` at fixed `K`.
//!
//! The dimensional traces differ from the upstream state by `O(tau^2)`, so
//! subtracting and dividing by `tau^2` loses digits. Every difference below is
//! rewritten with `1 - sqrt(1+t) = -t/(1+sqrt(1+t))` so it is formed without
//! cancellation.

use crate::closed_forms::Problem;
use crate::error::{Error, Result};
use crate::flow_state::scaled_upstream;
use crate::geometry::{admissible_a3_with, admissible_a_with, AdmissibilityOptions, BodyProfile};
use crate::quadrature::{integrate_1d, CumulativeIntegral, ProfileIntegral, QuadratureConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const GRID_X_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    UTrace,
    VTrace,
    ETrace,
    DensityWeightRatio,
    PressureWeight,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::UTrace,
        Quantity::VTrace,
        Quantity::ETrace,
        Quantity::DensityWeightRatio,
        Quantity::PressureWeight,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Quantity::UTrace => "sup_err_u",
            Quantity::VTrace => "sup_err_v",
            Quantity::ETrace => "sup_err_E",
            Quantity::DensityWeightRatio => "sup_err_density_ratio",
            Quantity::PressureWeight => "sup_err_wp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub quantity: Quantity,
    pub taus: Vec<f64>,
    pub sup_errors: Vec<f64>,
    /// slope of `log err` against `log tau`, largest tau left out; `None`
    /// when an error vanishes or fewer than two points remain
    pub fitted_rate: Option<f64>,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweep {
    pub problem: Problem,
    pub profile: String,
    #[serde(rename = "K")]
    pub k: f64,
    pub gamma: f64,
    pub reports: Vec<ConvergenceReport>,
    /// taus dropped from the sweep, with the reason
    pub skipped: Vec<(f64, String)>,
    /// `|u-bar^(tau)(0) - u-bar(0)|` per retained tau
    pub apex_u_errors: Vec<f64>,
}

impl ConvergenceSweep {
    pub fn report(&self, q: Quantity) -> &ConvergenceReport {
        self.reports.iter().find(|r| r.quantity == q).expect("every quantity is reported")
    }
}

/// Uniform grid on `[x_min, X]`.
pub fn default_grid(profile: &BodyProfile, n: usize) -> Vec<f64> {
    let x_end = profile.domain_end();
    let n = n.max(2);
    (0..n)
        .map(|i| GRID_X_MIN + (x_end - GRID_X_MIN) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Running integral of `g` along an ascending grid starting from 0.
fn running(g: impl Fn(f64) -> f64, grid: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        if x < prev {
            return Err(Error::BadParameter("convergence grid must be ascending".into()));
        }
        acc += integrate_1d(&g, prev, x, cfg)?.0;
        out.push(acc);
        prev = x;
    }
    Ok(out)
}

/// Signed defects of the scaled dimensional quantities at one tau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceDefects {
    pub u_bar_tau: f64,
    pub v_bar_tau: f64,
    #[serde(rename = "E_bar_tau")]
    pub e_bar_tau: f64,
    pub du: f64,
    pub dv: f64,
    #[serde(rename = "dE")]
    pub de: f64,
    pub ratio_minus_one: f64,
    pub dwp: f64,
}

fn check_x(profile: &BodyProfile, x: f64) -> Result<()> {
    profile.eval(x).map(|_| ())
}

fn defects(
    axisym: bool,
    profile: &BodyProfile,
    tau: f64,
    x: f64,
    g: f64,
    ib: f64,
    p_bar: f64,
    e_bar: f64,
) -> TraceDefects {
    let (b, db, ddb) = profile.eval_raw(x);
    let t2 = tau * tau;
    let sq = (1.0 + t2 * db * db).sqrt();
    let one_sq = 1.0 + sq;
    if x == 0.0 {
        let u_bar_tau = -db * db / (sq * sq);
        let u_bar = -db * db;
        let wp_tau = p_bar + db * db / (sq * sq);
        return TraceDefects {
            u_bar_tau,
            v_bar_tau: db / (sq * sq),
            e_bar_tau: e_bar,
            du: u_bar_tau - u_bar,
            dv: -t2 * db * db * db / (sq * sq),
            de: 0.0,
            ratio_minus_one: 0.0,
            dwp: wp_tau - (p_bar + db * db),
        };
    }
    let (u_bar_tau, u_bar, ratio_minus_one, dwp) = if axisym {
        // g = \int f f'^3 / (s(1+s)),  ib = \int f^2 f' f''
        let f = b;
        let lead = 2.0 * g + f * f * db * db / one_sq;
        let m = 0.5 * f * f - t2 * g;
        let u_bar_tau = -lead / (f * f * sq);
        let u_bar = -db * db + ib / (f * f);
        let s3 = sq * sq * sq;
        let dwp = t2
            * (ddb * (-g / (f * s3) - f * db * db * (1.0 + sq + sq * sq) / (2.0 * one_sq * s3))
                - db.powi(4) / (sq * sq));
        (u_bar_tau, u_bar, t2 * lead / (2.0 * m), dwp)
    } else {
        // g = \int b'^3 / (s(1+s)),  ib = \int b b' b''
        let lead = g + b * db * db / one_sq;
        let h = b - t2 * g;
        let u_bar_tau = -lead / (b * sq);
        let u_bar = -db * db + ib / b;
        let s3 = sq * sq * sq;
        let dwp = t2
            * (ddb * (-g / s3 - b * db * db * (1.0 + sq + sq * sq) / (one_sq * s3)) - db.powi(4) / (sq * sq));
        (u_bar_tau, u_bar, t2 * lead / h, dwp)
    };
    TraceDefects {
        u_bar_tau,
        v_bar_tau: db * (1.0 + t2 * u_bar_tau),
        e_bar_tau: e_bar,
        du: u_bar_tau - u_bar,
        dv: t2 * db * u_bar_tau,
        de: 0.0,
        ratio_minus_one,
        dwp,
    }
}

fn g_integrand(axisym: bool, profile: &BodyProfile, tau: f64) -> impl Fn(f64) -> f64 + '_ {
    move |t| {
        let (b, db, _) = profile.eval_raw(t);
        let sq = (1.0 + tau * tau * db * db).sqrt();
        let core = db * db * db / (sq * (1.0 + sq));
        if axisym {
            b * core
        } else {
            core
        }
    }
}

fn trace_at(axisym: bool, profile: &BodyProfile, k: f64, gamma: f64, tau: f64, x: f64) -> Result<TraceDefects> {
    check_x(profile, x)?;
    let sc = scaled_upstream(k, gamma)?;
    let cfg = QuadratureConfig::default();
    let (g, ib) = if x == 0.0 {
        (0.0, 0.0)
    } else {
        let kind = if axisym { ProfileIntegral::J } else { ProfileIntegral::I };
        (
            integrate_1d(g_integrand(axisym, profile, tau), 0.0, x, &cfg)?.0,
            integrate_1d(kind.integrand(profile, 0.0), 0.0, x, &cfg)?.0,
        )
    };
    Ok(defects(axisym, profile, tau, x, g, ib, sc.p_bar_inf, sc.e_bar_inf))
}

/// `(u-bar^(tau), v-bar^(tau), E-bar^(tau))` of the Problem A traces at `x`.
pub fn scaled_trace_a(profile: &BodyProfile, k: f64, gamma: f64, tau: f64, x: f64) -> Result<(f64, f64, f64)> {
    let d = trace_at(false, profile, k, gamma, tau, x)?;
    Ok((d.u_bar_tau, d.v_bar_tau, d.e_bar_tau))
}

/// Axisymmetric analog of [`scaled_trace_a`].
pub fn scaled_trace_a3(profile: &BodyProfile, k: f64, gamma: f64, tau: f64, x: f64) -> Result<(f64, f64, f64)> {
    let d = trace_at(true, profile, k, gamma, tau, x)?;
    Ok((d.u_bar_tau, d.v_bar_tau, d.e_bar_tau))
}

pub fn trace_defects(problem: Problem, profile: &BodyProfile, k: f64, gamma: f64, tau: f64, x: f64) -> Result<TraceDefects> {
    match problem {
        Problem::A => trace_at(false, profile, k, gamma, tau, x),
        Problem::A3 => trace_at(true, profile, k, gamma, tau, x),
        other => Err(Error::BadParameter(format!(
            "convergence compares A or A3 against its scaled problem, not {other}"
        ))),
    }
}

/// Least-squares slope of `ln err` on `ln tau`, largest tau excluded.
pub fn fitted_rate(taus: &[f64], errors: &[f64]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = taus.iter().copied().zip(errors.iter().copied()).collect();
    if pts.iter().any(|&(_, e)| !(e > 0.0) || !e.is_finite()) {
        return None;
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let pts: Vec<(f64, f64)> = pts.into_iter().skip(1).map(|(t, e)| (t.ln(), e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Sup-grid errors of every tracked quantity along a tau sweep.
///
/// Inadmissible taus are recorded in `skipped` and the sweep continues.
pub fn converge(
    problem: Problem,
    profile: &BodyProfile,
    k: f64,
    gamma: f64,
    taus: &[f64],
    grid: &[f64],
    opts: &AdmissibilityOptions,
) -> Result<ConvergenceSweep> {
    let axisym = match problem {
        Problem::A => false,
        Problem::A3 => true,
        other => {
            return Err(Error::BadParameter(format!(
                "convergence sweeps run on A or A3, not {other}"
            )))
        }
    };
    if taus.is_empty() || taus.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::BadParameter("taus must lie in (0, 1)".into()));
    }
    if grid.is_empty() {
        return Err(Error::BadParameter("empty convergence grid".into()));
    }
    for &x in grid {
        check_x(profile, x)?;
    }
    let sc = scaled_upstream(k, gamma)?;
    let cfg = opts.quad;
    let kind = if axisym { ProfileIntegral::J } else { ProfileIntegral::I };
    let ib = CumulativeIntegral::along(profile, kind, 0.0, grid, &cfg)?;

    let per_tau: Vec<Result<std::result::Result<([f64; 5], f64), String>>> = taus
        .par_iter()
        .map(|&tau| {
            let verdict = if axisym {
                admissible_a3_with(profile, tau, gamma, k, opts)?
            } else {
                admissible_a_with(profile, tau, gamma, k, opts)?
            };
            if !verdict.admissible {
                return Ok(Err(format!(
                    "not admissible: margin {} at x = {}",
                    verdict.worst_margin, verdict.worst_x
                )));
            }
            let gs = running(g_integrand(axisym, profile, tau), grid, &cfg)?;
            let mut sup = [0.0f64; 5];
            for (i, &x) in grid.iter().enumerate() {
                let d = defects(axisym, profile, tau, x, gs[i], ib[i], sc.p_bar_inf, sc.e_bar_inf);
                let vals = [d.du, d.dv, d.de, d.ratio_minus_one, d.dwp];
                for (s, v) in sup.iter_mut().zip(vals) {
                    *s = s.max(v.abs());
                }
            }
            let apex = defects(axisym, profile, tau, 0.0, 0.0, 0.0, sc.p_bar_inf, sc.e_bar_inf);
            Ok(Ok((sup, apex.du.abs())))
        })
        .collect();

    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for (&tau, r) in taus.iter().zip(per_tau) {
        match r? {
            Ok(v) => kept.push((tau, v)),
            Err(msg) => skipped.push((tau, msg)),
        }
    }
    let kept_taus: Vec<f64> = kept.iter().map(|k| k.0).collect();
    let reports = Quantity::ALL
        .iter()
        .enumerate()
        .map(|(qi, &quantity)| {
            let sup_errors: Vec<f64> = kept.iter().map(|k| k.1 .0[qi]).collect();
            ConvergenceReport {
                quantity,
                taus: kept_taus.clone(),
                fitted_rate: fitted_rate(&kept_taus, &sup_errors),
                sup_errors,
                grid: grid.to_vec(),
            }
        })
        .collect();
    Ok(ConvergenceSweep {
        problem,
        profile: profile.spec(),
        k,
        gamma,
        reports,
        skipped,
        apex_u_errors: kept.iter().map(|k| k.1 .1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{solve_a, solve_a3, solve_b, solve_b3, SolveConfig};
    use crate::flow_state::{scale_fields, upstream};
    use approx::assert_relative_eq;

    const TAUS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

    fn lin() -> BodyProfile {
        BodyProfile::parse("linear:a=1", 5.0).unwrap()
    }

    #[test]
    fn wedge_closed_forms() {
        for &tau in &TAUS {
            for x in [0.0, 0.5, 3.0] {
                let (u, v, e) = scaled_trace_a(&lin(), 1.0, 1.4, tau, x).unwrap();
                assert_relative_eq!(u, -1.0 / (1.0 + tau * tau), max_relative = 1e-13);
                assert_relative_eq!(v, 1.0 / (1.0 + tau * tau), max_relative = 1e-13);
                assert_relative_eq!(e, 5.0, max_relative = 1e-15);
                let (u3, _, _) = scaled_trace_a3(&lin(), 1.0, 1.4, tau, x).unwrap();
                assert_relative_eq!(u3, -1.0 / (1.0 + tau * tau), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn stable_forms_agree_with_naive_scaling() {
        // at moderate tau the naive subtraction still has ~10 digits
        let p = BodyProfile::parse("log:a=1", 5.0).unwrap();
        let st = upstream(1.0, 0.3, 1.4, 1.0, 1.0).unwrap();
        let a = solve_a(&p, &st, &SolveConfig::default()).unwrap();
        let a3 = solve_a3(&p, &st, &SolveConfig::default()).unwrap();
        for x in [0.2, 1.0, 4.0] {
            let r = a.weights_at(x).unwrap();
            let f = scale_fields(r.u, r.v, r.e, 1.0, 1.0, &st);
            let (u, v, e) = scaled_trace_a(&p, 1.0, 1.4, 0.3, x).unwrap();
            assert_relative_eq!(u, f.u_bar, max_relative = 1e-8);
            assert_relative_eq!(v, f.v_bar, max_relative = 1e-8);
            assert_eq!(e, f.e_bar);
            let r = a3.weights_at(x).unwrap();
            let f = scale_fields(r.u, r.v, r.e, 1.0, 1.0, &st);
            let (u, v, _) = scaled_trace_a3(&p, 1.0, 1.4, 0.3, x).unwrap();
            assert_relative_eq!(u, f.u_bar, max_relative = 1e-8);
            assert_relative_eq!(v, f.v_bar, max_relative = 1e-8);
        }
    }

    #[test]
    fn defects_match_direct_differences() {
        let p = BodyProfile::parse("power:a=1,p=2", 5.0).unwrap();
        let tau = 0.3;
        let st = upstream(1.0, tau, 1.4, 1.0, 1.0).unwrap();
        let c = SolveConfig::default();
        let sc = scaled_upstream(1.0, 1.4).unwrap();
        let (a, b) = (solve_a(&p, &st, &c).unwrap(), solve_b(&p, &sc, &c).unwrap());
        let (a3, b3) = (solve_a3(&p, &st, &c).unwrap(), solve_b3(&p, &sc, &c).unwrap());
        for x in [0.3, 1.7] {
            let (ra, rb) = (a.weights_at(x).unwrap(), b.weights_at(x).unwrap());
            let d = trace_defects(Problem::A, &p, 1.0, 1.4, tau, x).unwrap();
            let db = 2.0 * x;
            let ratio = ra.w_rho / tau * (1.0 + tau * tau * db * db).sqrt() / (rb.w_rho * (1.0 + db * db).sqrt());
            assert_relative_eq!(d.ratio_minus_one, ratio - 1.0, max_relative = 1e-8);
            assert_relative_eq!(d.dwp, ra.w_p / (tau * tau) - rb.w_p, max_relative = 1e-8);
            let (ra, rb) = (a3.weights_at(x).unwrap(), b3.weights_at(x).unwrap());
            let d = trace_defects(Problem::A3, &p, 1.0, 1.4, tau, x).unwrap();
            let ratio = ra.w_rho / tau * (1.0 + tau * tau * db * db).sqrt() / (rb.w_rho * (1.0 + db * db).sqrt());
            assert_relative_eq!(d.ratio_minus_one, ratio - 1.0, max_relative = 1e-8);
            assert_relative_eq!(d.dwp, ra.w_p / (tau * tau) - rb.w_p, max_relative = 1e-8);
            assert_relative_eq!(d.du, (ra.u - 1.0) / (tau * tau) - rb.u, max_relative = 1e-7);
        }
    }

    #[test]
    fn wedge_sweep() {
        let grid = default_grid(&lin(), 64);
        let s = converge(Problem::A, &lin(), 1.0, 1.4, &TAUS, &grid, &AdmissibilityOptions::default()).unwrap();
        let u = s.report(Quantity::UTrace);
        let expected = [0.0384615, 0.0099010, 0.0024938, 0.0006246];
        for (i, &tau) in TAUS.iter().enumerate() {
            assert_relative_eq!(u.sup_errors[i], tau * tau / (1.0 + tau * tau), max_relative = 1e-9);
            assert!((u.sup_errors[i] - expected[i]).abs() < 5e-7);
            let d = s.report(Quantity::DensityWeightRatio).sup_errors[i];
            assert_relative_eq!(d, tau * tau, max_relative = 1e-9);
        }
        assert!((u.fitted_rate.unwrap() - 2.0).abs() < 0.05);
        assert!(s.report(Quantity::ETrace).sup_errors.iter().all(|&e| e == 0.0));
        assert_eq!(s.report(Quantity::ETrace).fitted_rate, None);
        assert!(strictly_decreasing(&s.report(Quantity::PressureWeight).sup_errors));
        assert!(s.skipped.is_empty());
    }

    #[test]
    fn sweeps_decrease() {
        for spec in ["linear:a=1", "power:a=1,p=2", "log:a=1"] {
            let p = BodyProfile::parse(spec, 5.0).unwrap();
            let grid = default_grid(&p, 48);
            for k in [0.5, 1.0, 2.0] {
                for problem in [Problem::A, Problem::A3] {
                    let s = converge(problem, &p, k, 1.4, &TAUS, &grid, &AdmissibilityOptions::default()).unwrap();
                    for q in [Quantity::UTrace, Quantity::VTrace, Quantity::DensityWeightRatio, Quantity::PressureWeight] {
                        let r = s.report(q);
                        assert!(strictly_decreasing(&r.sup_errors), "{spec} K={k} {problem} {q:?}: {:?}", r.sup_errors);
                    }
                }
            }
        }
    }

    #[test]
    fn rate_fit() {
        let taus = [0.4, 0.2, 0.1];
        assert_relative_eq!(fitted_rate(&taus, &[9.0, 0.04, 0.01]).unwrap(), 2.0, max_relative = 1e-12);
        assert_eq!(fitted_rate(&taus, &[1.0, 0.0, 0.0]), None);
        assert_eq!(fitted_rate(&[0.1], &[1.0]), None);
    }

    #[test]
    fn rejects_bad_input() {
        let g = default_grid(&lin(), 8);
        let o = AdmissibilityOptions::default();
        assert!(converge(Problem::B, &lin(), 1.0, 1.4, &TAUS, &g, &o).is_err());
        assert!(converge(Problem::A, &lin(), 1.0, 1.4, &[1.5], &g, &o).is_err());
        assert!(converge(Problem::A, &lin(), 1.0, 1.4, &TAUS, &[6.0], &o).is_err());
    }
}
