//! Weak-form certification of measure solutions against batches of bumps.

use crate::closed_forms::{solve_a, solve_a3, MeasureSolution, Problem, Role, SolveConfig};
use crate::error::{Error, Result};
use crate::flow_state::UpstreamState;
use crate::geometry::BodyProfile;
use crate::measure::{inflow_term, tau_factor_pairing, Deriv, RegionSpec};
use crate::quadrature::{make_bump, TestFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EPS_FLOOR: f64 = 1e-30;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Mass,
    MomX,
    /// `mom_y` planar, `mom_r` axisymmetric
    MomY,
    Energy,
}

impl Equation {
    pub const ALL: [Equation; 4] = [Equation::Mass, Equation::MomX, Equation::MomY, Equation::Energy];

    pub fn label(self, problem: Problem) -> &'static str {
        match self {
            Equation::Mass => "mass",
            Equation::MomX => "mom_x",
            Equation::MomY if problem.is_axisym() => "mom_r",
            Equation::MomY => "mom_y",
            Equation::Energy => "energy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpResidual {
    pub bump: TestFunction,
    pub raw: f64,
    pub normalized: f64,
    pub terms: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub problem: Problem,
    pub equation: String,
    pub residuals: Vec<BumpResidual>,
    pub max_normalized: f64,
}

fn normalized(terms: &[(String, f64)]) -> (f64, f64) {
    let sum: f64 = terms.iter().map(|t| t.1).sum();
    let mag: f64 = terms.iter().map(|t| t.1.abs()).sum();
    (sum, sum.abs() / (mag + EPS_FLOOR))
}

/// Every pairing term of one conservation law against one bump.
pub fn weak_terms(sol: &MeasureSolution, eq: Equation, phi: &TestFunction) -> Result<Vec<(String, f64)>> {
    let cfg = &sol.quad;
    let flavor = sol.problem.flavor();
    let pair = |role: Role, d: Deriv| -> Result<f64> {
        sol.component(role)
            .map_or(Ok(0.0), |m| m.pair(phi, d, cfg))
    };
    let mut t: Vec<(String, f64)> = Vec::new();
    match eq {
        Equation::Mass => {
            t.push(("mass_x.dx".into(), pair(Role::MassX, Deriv::DX)?));
            t.push(("mass_y.dy".into(), pair(Role::MassY, Deriv::DY)?));
            t.push(("inflow".into(), inflow_term(sol.inflow.mass, phi, flavor)));
        }
        Equation::MomX => {
            t.push(("momx_x.dx".into(), pair(Role::MomxX, Deriv::DX)?));
            t.push(("pressure.dx".into(), pair(Role::Pressure, Deriv::DX)?));
            t.push(("momx_y.dy".into(), pair(Role::MomxY, Deriv::DY)?));
            t.push((
                "wall_pressure_n1".into(),
                sol.boundary_pressure[0].pair(phi, Deriv::None, cfg)?,
            ));
            t.push(("inflow".into(), inflow_term(sol.inflow.mom_x, phi, flavor)));
        }
        Equation::MomY => {
            t.push(("momy_x.dx".into(), pair(Role::MomyX, Deriv::DX)?));
            t.push(("momy_y.dy".into(), pair(Role::MomyY, Deriv::DY)?));
            t.push(("pressure.dy".into(), pair(Role::Pressure, Deriv::DY)?));
            t.push((
                "wall_pressure_n2".into(),
                sol.boundary_pressure[1].pair(phi, Deriv::None, cfg)?,
            ));
            if sol.problem.is_axisym() {
                t.push(("pressure_zeroth".into(), pair(Role::PressureZeroth, Deriv::None)?));
            }
        }
        Equation::Energy => {
            t.push(("energy_x.dx".into(), pair(Role::EnergyX, Deriv::DX)?));
            t.push(("energy_y.dy".into(), pair(Role::EnergyY, Deriv::DY)?));
            t.push(("inflow".into(), inflow_term(sol.inflow.energy, phi, flavor)));
        }
    }
    Ok(t)
}

/// Residuals of all four conservation laws, one report per law, bumps in input order.
pub fn verify_weak(sol: &MeasureSolution, bumps: &[TestFunction]) -> Result<Vec<ResidualReport>> {
    for b in bumps {
        sol.region.check_support(b)?;
    }
    let per_bump: Vec<Vec<BumpResidual>> = bumps
        .par_iter()
        .map(|phi| {
            Equation::ALL
                .iter()
                .map(|&eq| {
                    let terms = weak_terms(sol, eq, phi)?;
                    let (raw, normalized) = normalized(&terms);
                    Ok(BumpResidual {
                        bump: *phi,
                        raw,
                        normalized,
                        terms,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Equation::ALL
        .iter()
        .enumerate()
        .map(|(k, &eq)| {
            let residuals: Vec<BumpResidual> = per_bump.iter().map(|row| row[k].clone()).collect();
            let max_normalized = residuals.iter().map(|r| r.normalized).fold(0.0, f64::max);
            ResidualReport {
                problem: sol.problem,
                equation: eq.label(sol.problem).to_string(),
                residuals,
                max_normalized,
            }
        })
        .collect())
}

pub fn max_normalized(reports: &[ResidualReport]) -> f64 {
    reports.iter().map(|r| r.max_normalized).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpClass {
    NearBody,
    Interior,
    Inflow,
}

/// Which of the three support classes a bump falls in.
pub fn classify(region: &RegionSpec, phi: &TestFunction) -> BumpClass {
    if phi.center.0 - phi.radii.0 < 0.0 {
        return BumpClass::Inflow;
    }
    let (g_lo, _) = region.curve(phi.center.0 - phi.radii.0);
    let (g_hi, _) = region.curve((phi.center.0 + phi.radii.0).min(region.window.0));
    if phi.center.1 - phi.radii.1 < g_hi && phi.center.1 + phi.radii.1 > g_lo {
        BumpClass::NearBody
    } else {
        BumpClass::Interior
    }
}

/// Deterministic bumps from `seed`: a third centred near the body, a third
/// in the open region, a third straddling the inflow axis.
pub fn sample_bumps(region: &RegionSpec, n: usize, seed: u64, scale_range: (f64, f64)) -> Result<Vec<TestFunction>> {
    let (lo, hi) = scale_range;
    if n == 0 {
        return Err(Error::BadParameter("need at least one bump".into()));
    }
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::BadParameter(format!("bad radius range [{lo}, {hi}]")));
    }
    let (x_end, y_end) = region.window;
    if 2.0 * hi >= x_end || 2.0 * hi >= y_end {
        return Err(Error::BadParameter(format!(
            "radius {hi} too large for window [0, {x_end}] x [0, {y_end}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let rx = rng.gen_range(lo..=hi);
        let ry = rng.gen_range(lo..=hi);
        let (x0, y0) = match i % 3 {
            0 => {
                let x0 = rng.gen_range(rx..=x_end - rx);
                let y0 = region.curve(x0).0 + rng.gen_range(-0.5..=0.5) * ry;
                (x0, y0)
            }
            1 => {
                let x0 = rng.gen_range(rx..=x_end - rx);
                let floor = region.curve(x0 + rx).0 + 1.05 * ry;
                let ceil = y_end - ry;
                let y0 = if floor < ceil {
                    rng.gen_range(floor..=ceil)
                } else {
                    ceil
                };
                (x0, y0)
            }
            _ => {
                let x0 = rng.gen_range(-0.5..=0.5) * rx;
                let y0 = rng.gen_range(0.5 * ry..=y_end - ry);
                (x0, y0)
            }
        };
        let y0 = y0.min(y_end - ry);
        out.push(make_bump((x0, y0), (rx, ry), TestFunction::DEFAULT_ORDER)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// Both sides of the slenderness scaling identity for the density measure of
/// Problem A (planar) or A3 (axisymmetric). Bumps live in the scaled plane.
pub fn verify_tau_identity(
    problem: Problem,
    profile: &BodyProfile,
    state: &UpstreamState,
    bumps: &[TestFunction],
    cfg: &SolveConfig,
) -> Result<Vec<TauCheck>> {
    let sol = match problem {
        Problem::A => solve_a(profile, state, cfg)?,
        Problem::A3 => solve_a3(profile, state, cfg)?,
        other => {
            return Err(Error::BadParameter(format!(
                "scaling identity is stated for A and A3, not {other}"
            )))
        }
    };
    let rho = sol.density_measure();
    let (x_end, y_end) = sol.region.window;
    for b in bumps {
        if b.center.0 + b.radii.0 > x_end || state.tau * (b.center.1 + b.radii.1) > y_end {
            return Err(Error::SupportOutsideWindow(b.describe()));
        }
    }
    bumps
        .par_iter()
        .map(|phi| {
            let (lhs, rhs) = tau_factor_pairing(&rho, phi, state.tau, &cfg.quad)?;
            let s = lhs.abs().max(rhs.abs());
            let rel_err = if s == 0.0 { 0.0 } else { (lhs - rhs).abs() / s };
            Ok(TauCheck { lhs, rhs, rel_err })
        })
        .collect()
}
