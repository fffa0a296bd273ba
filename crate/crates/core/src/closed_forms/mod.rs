//! The explicit measure solutions of Problems A, B (wedge) and A3, B3 (cone).

mod axisymmetric;
pub mod checks;
mod planar;

pub use checks::{nonlinear_constraints, weight_ode_residuals, ConstraintReport, OdeResidual};

use crate::error::{Error, Result};
use crate::flow_state::{ScaledUpstreamState, UpstreamState};
use crate::geometry::{
    admissibility_grid, admissible_a3_with, admissible_a_with, admissible_b3_with, admissible_b_with,
    AdmissibilityOptions, AdmissibilityVerdict, BodyProfile,
};
use crate::measure::{AcDensity, Flavor, RadonMeasure, RegionKind, RegionSpec, Weight};
use crate::quadrature::{CumulativeIntegral, ProfileIntegral, QuadratureConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Problem {
    A,
    B,
    A3,
    B3,
}

impl Problem {
    pub fn flavor(self) -> Flavor {
        match self {
            Problem::A => Flavor::Planar,
            Problem::B => Flavor::PlanarScaled,
            Problem::A3 => Flavor::Axisym,
            Problem::B3 => Flavor::AxisymScaled,
        }
    }

    pub fn is_scaled(self) -> bool {
        matches!(self, Problem::B | Problem::B3)
    }

    pub fn is_axisym(self) -> bool {
        matches!(self, Problem::A3 | Problem::B3)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Problem::A => "A",
            Problem::B => "B",
            Problem::A3 => "A3",
            Problem::B3 => "B3",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Problem::A),
            "B" => Ok(Problem::B),
            "A3" => Ok(Problem::A3),
            "B3" => Ok(Problem::B3),
            other => Err(Error::BadParameter(format!(
                "unknown problem '{other}' (A, B, A3, B3)"
            ))),
        }
    }
}

/// Which conservation-law slot a component measure fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    MassX,
    MassY,
    MomxX,
    MomxY,
    MomyX,
    MomyY,
    EnergyX,
    EnergyY,
    Pressure,
    PressureZeroth,
}

/// Every Dirac weight and boundary trace at one abscissa.
///
/// `(w0x, w0y)` are the mass-flux weights (m0, n0 planar; a0, b0 axisymmetric),
/// `(w1x, w1y)` and `(w2x, w2y)` the momentum fluxes, `(w3x, w3y)` the
/// energy fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightRow {
    pub w_rho: f64,
    pub w0x: f64,
    pub w0y: f64,
    pub w1x: f64,
    pub w1y: f64,
    pub w2x: f64,
    pub w2y: f64,
    pub w3x: f64,
    pub w3y: f64,
    pub w_p: f64,
    pub u: f64,
    pub v: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    WRho,
    W0x,
    W0y,
    W1x,
    W1y,
    W2x,
    W2y,
    W3x,
    W3y,
    WP,
}

impl Field {
    pub const ALL: [Field; 10] = [
        Field::WRho,
        Field::W0x,
        Field::W0y,
        Field::W1x,
        Field::W1y,
        Field::W2x,
        Field::W2y,
        Field::W3x,
        Field::W3y,
        Field::WP,
    ];
}

impl WeightRow {
    pub fn get(&self, f: Field) -> f64 {
        match f {
            Field::WRho => self.w_rho,
            Field::W0x => self.w0x,
            Field::W0y => self.w0y,
            Field::W1x => self.w1x,
            Field::W1y => self.w1y,
            Field::W2x => self.w2x,
            Field::W2y => self.w2y,
            Field::W3x => self.w3x,
            Field::W3y => self.w3y,
            Field::WP => self.w_p,
        }
    }

    fn get_mut(&mut self, f: Field) -> &mut f64 {
        match f {
            Field::WRho => &mut self.w_rho,
            Field::W0x => &mut self.w0x,
            Field::W0y => &mut self.w0y,
            Field::W1x => &mut self.w1x,
            Field::W1y => &mut self.w1y,
            Field::W2x => &mut self.w2x,
            Field::W2y => &mut self.w2y,
            Field::W3x => &mut self.w3x,
            Field::W3y => &mut self.w3y,
            Field::WP => &mut self.w_p,
        }
    }

    pub fn csv_values(&self) -> [f64; 13] {
        [
            self.w_rho, self.w0x, self.w0y, self.w1x, self.w1y, self.w2x, self.w2y, self.w3x, self.w3y,
            self.w_p, self.u, self.v, self.e,
        ]
    }
}

pub const CSV_HEADER_PLANAR: &str = "x,w_rho,w_m0,w_n0,w_m1,w_n1,w_m2,w_n2,w_m3,w_n3,w_p,u_trace,v_trace,E_trace";
pub const CSV_HEADER_AXISYM: &str = "x,w_rho,w_a0,w_b0,w_a1,w_b1,w_a2,w_b2,w_a3,w_b3,w_p,u_trace,v_trace,E_trace";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionState {
    Dimensional(UpstreamState),
    Scaled(ScaledUpstreamState),
}

/// Constants of the inflow terms on the axis `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inflow {
    pub mass: f64,
    pub mom_x: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub(crate) enum Kernel {
    A { st: UpstreamState, h: CumulativeIntegral },
    B { st: ScaledUpstreamState, i: CumulativeIntegral },
    A3 { st: UpstreamState, m: CumulativeIntegral },
    B3 { st: ScaledUpstreamState, j: CumulativeIntegral },
}

#[derive(Debug, Clone)]
pub(crate) struct KernelWithDefect {
    kernel: Kernel,
    profile: BodyProfile,
    defect: Option<(Field, f64)>,
}

impl KernelWithDefect {
    fn row(&self, x: f64) -> WeightRow {
        let mut r = match &self.kernel {
            Kernel::A { st, h } => planar::row_a(&self.profile, st, h, x),
            Kernel::B { st, i } => planar::row_b(&self.profile, st, i, x),
            Kernel::A3 { st, m } => axisymmetric::row_a3(&self.profile, st, m, x),
            Kernel::B3 { st, j } => axisymmetric::row_b3(&self.profile, st, j, x),
        };
        if let Some((f, factor)) = self.defect {
            *r.get_mut(f) *= factor;
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub quad: QuadratureConfig,
    pub admissibility: AdmissibilityOptions,
    /// knots of the running-integral tables
    pub knots: usize,
    /// window height for test-function supports; default from the curve
    pub window_y: Option<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            admissibility: AdmissibilityOptions::default(),
            knots: CumulativeIntegral::DEFAULT_KNOTS,
            window_y: None,
        }
    }
}

/// A complete explicit solution: component measures, boundary pressure,
/// traces, and the data needed to assemble the weak form.
#[derive(Clone)]
pub struct MeasureSolution {
    pub problem: Problem,
    pub state: SolutionState,
    pub profile: BodyProfile,
    pub region: Arc<RegionSpec>,
    pub components: BTreeMap<Role, RadonMeasure>,
    /// `w_p n_1 delta` and `w_p n_2 delta`
    pub boundary_pressure: [RadonMeasure; 2],
    pub inflow: Inflow,
    pub verdict: AdmissibilityVerdict,
    /// grid points where `w_p < 0` (only recorded for A3)
    pub pressure_violations: Vec<(f64, f64)>,
    pub quad: QuadratureConfig,
    kernel: Arc<KernelWithDefect>,
}

impl fmt::Debug for MeasureSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureSolution")
            .field("problem", &self.problem)
            .field("state", &self.state)
            .field("profile", &self.profile.spec())
            .field("verdict", &self.verdict)
            .finish()
    }
}

impl MeasureSolution {
    /// Weights and traces at `x` in `[0, X]`.
    pub fn weights_at(&self, x: f64) -> Result<WeightRow> {
        self.profile.eval(x)?;
        Ok(self.kernel.row(x))
    }

    pub fn row_raw(&self, x: f64) -> WeightRow {
        self.kernel.row(x)
    }

    pub fn table(&self, grid: &[f64]) -> Result<Vec<(f64, WeightRow)>> {
        grid.iter().map(|&x| Ok((x, self.weights_at(x)?))).collect()
    }

    pub fn csv_header(&self) -> &'static str {
        if self.problem.is_axisym() {
            CSV_HEADER_AXISYM
        } else {
            CSV_HEADER_PLANAR
        }
    }

    pub fn component(&self, role: Role) -> Option<&RadonMeasure> {
        self.components.get(&role)
    }

    /// Slenderness of the dimensional problems.
    pub fn tau(&self) -> Option<f64> {
        match self.state {
            SolutionState::Dimensional(s) => Some(s.tau),
            SolutionState::Scaled(_) => None,
        }
    }

    /// The density measure: uniform upstream density plus `w_rho` on the body.
    pub fn density_measure(&self) -> RadonMeasure {
        let rho = match self.state {
            SolutionState::Dimensional(s) => s.rho_inf,
            SolutionState::Scaled(_) => 1.0,
        };
        let k = self.kernel.clone();
        let w: Weight = Arc::new(move |x| k.row(x).w_rho);
        RadonMeasure::new(self.problem.flavor(), self.region.clone(), AcDensity::uniform(rho), Some(w))
            .expect("flavor matches region by construction")
    }

    /// Copy with one weight field multiplied by `factor` everywhere.
    pub fn with_defect(&self, field: Field, factor: f64) -> MeasureSolution {
        let kernel = Arc::new(KernelWithDefect {
            defect: Some((field, factor)),
            ..(*self.kernel).clone()
        });
        assemble(
            self.problem,
            self.state,
            self.profile.clone(),
            self.region.clone(),
            kernel,
            self.verdict,
            self.pressure_violations.clone(),
            self.quad,
        )
    }

    /// Curve `g` and slope `g'` of the body in this problem's plane.
    pub fn curve(&self, x: f64) -> (f64, f64) {
        self.region.curve(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceDensity {
    pub force: (f64, f64),
    pub magnitude: f64,
    pub pressure_positive: bool,
}

/// Force per unit length exerted on the body: `w_p (-n)` with `n` the unit
/// normal pointing into the flow.
pub fn pressure_force_density(sol: &MeasureSolution, x: f64) -> Result<ForceDensity> {
    let row = sol.weights_at(x)?;
    let (_, dg) = sol.curve(x);
    let norm = (1.0 + dg * dg).sqrt();
    let force = (row.w_p * dg / norm, -row.w_p / norm);
    Ok(ForceDensity {
        force,
        magnitude: (force.0 * force.0 + force.1 * force.1).sqrt(),
        pressure_positive: row.w_p > 0.0,
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    problem: Problem,
    state: SolutionState,
    profile: BodyProfile,
    region: Arc<RegionSpec>,
    kernel: Arc<KernelWithDefect>,
    verdict: AdmissibilityVerdict,
    pressure_violations: Vec<(f64, f64)>,
    quad: QuadratureConfig,
) -> MeasureSolution {
    let flavor = problem.flavor();
    let (ac, inflow) = match state {
        SolutionState::Dimensional(s) => {
            let (r, u, e, p) = (s.rho_inf, s.u_inf, s.e_inf, s.p_inf);
            (
                [r * u, 0.0, r * u * u, 0.0, 0.0, 0.0, r * u * e, 0.0, p],
                Inflow {
                    mass: r * u,
                    mom_x: r * u * u + p,
                    energy: r * u * e,
                },
            )
        }
        SolutionState::Scaled(s) => (
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, s.e_bar_inf, 0.0, s.p_bar_inf],
            Inflow {
                mass: 1.0,
                mom_x: s.p_bar_inf,
                energy: s.e_bar_inf,
            },
        ),
    };
    let slots = [
        (Role::MassX, Some(Field::W0x)),
        (Role::MassY, Some(Field::W0y)),
        (Role::MomxX, Some(Field::W1x)),
        (Role::MomxY, Some(Field::W1y)),
        (Role::MomyX, Some(Field::W2x)),
        (Role::MomyY, Some(Field::W2y)),
        (Role::EnergyX, Some(Field::W3x)),
        (Role::EnergyY, Some(Field::W3y)),
        (Role::Pressure, None),
    ];
    let mut components = BTreeMap::new();
    for (i, (role, field)) in slots.iter().enumerate() {
        let weight: Option<Weight> = field.map(|f| {
            let k = kernel.clone();
            Arc::new(move |x: f64| k.row(x).get(f)) as Weight
        });
        let m = RadonMeasure::new(flavor, region.clone(), AcDensity::uniform(ac[i]), weight)
            .expect("flavor matches region by construction");
        components.insert(*role, m);
    }
    if problem.is_axisym() {
        let m = RadonMeasure::new(flavor, region.clone(), AcDensity::per_radius(ac[8]), None)
            .expect("axisymmetric region");
        components.insert(Role::PressureZeroth, m);
    }
    let boundary_pressure = [0usize, 1].map(|c| {
        let k = kernel.clone();
        let reg = region.clone();
        let w: Weight = Arc::new(move |x: f64| {
            let (_, dg) = reg.curve(x);
            let norm = (1.0 + dg * dg).sqrt();
            let n = if c == 0 { -dg / norm } else { 1.0 / norm };
            k.row(x).w_p * n
        });
        RadonMeasure::new(flavor, region.clone(), AcDensity::ZERO, Some(w)).expect("flavor matches region")
    });
    MeasureSolution {
        problem,
        state,
        profile,
        region,
        components,
        boundary_pressure,
        inflow,
        verdict,
        pressure_violations,
        quad,
        kernel,
    }
}

fn not_admissible(problem: Problem, v: AdmissibilityVerdict) -> Error {
    Error::NotAdmissible {
        problem: problem.to_string(),
        margin: v.worst_margin,
        x: v.worst_x,
    }
}

fn region_for(problem: Problem, profile: &BodyProfile, scale: f64, cfg: &SolveConfig) -> Result<Arc<RegionSpec>> {
    let kind = if problem.is_axisym() {
        RegionKind::OutsideCurveAxisym
    } else {
        RegionKind::AboveCurve2d
    };
    let y = cfg
        .window_y
        .unwrap_or_else(|| RegionSpec::default_height(profile, scale));
    Ok(Arc::new(RegionSpec::new(kind, profile.clone(), scale, y)?))
}

pub fn solve_a(profile: &BodyProfile, state: &UpstreamState, cfg: &SolveConfig) -> Result<MeasureSolution> {
    let v = admissible_a_with(profile, state.tau, state.gamma, state.k, &cfg.admissibility)?;
    if !v.admissible {
        return Err(not_admissible(Problem::A, v));
    }
    let h = CumulativeIntegral::new(profile, ProfileIntegral::H, state.tau, cfg.knots, &cfg.quad)?;
    let kernel = Arc::new(KernelWithDefect {
        kernel: Kernel::A { st: *state, h },
        profile: profile.clone(),
        defect: None,
    });
    let region = region_for(Problem::A, profile, state.tau, cfg)?;
    Ok(assemble(
        Problem::A,
        SolutionState::Dimensional(*state),
        profile.clone(),
        region,
        kernel,
        v,
        Vec::new(),
        cfg.quad,
    ))
}

pub fn solve_b(profile: &BodyProfile, state: &ScaledUpstreamState, cfg: &SolveConfig) -> Result<MeasureSolution> {
    let v = admissible_b_with(profile, state.gamma, state.k, &cfg.admissibility)?;
    if !v.admissible {
        return Err(not_admissible(Problem::B, v));
    }
    let i = CumulativeIntegral::new(profile, ProfileIntegral::I, 0.0, cfg.knots, &cfg.quad)?;
    let kernel = Arc::new(KernelWithDefect {
        kernel: Kernel::B { st: *state, i },
        profile: profile.clone(),
        defect: None,
    });
    let region = region_for(Problem::B, profile, 1.0, cfg)?;
    Ok(assemble(
        Problem::B,
        SolutionState::Scaled(*state),
        profile.clone(),
        region,
        kernel,
        v,
        Vec::new(),
        cfg.quad,
    ))
}

pub fn solve_a3(profile: &BodyProfile, state: &UpstreamState, cfg: &SolveConfig) -> Result<MeasureSolution> {
    let v = admissible_a3_with(profile, state.tau, state.gamma, state.k, &cfg.admissibility)?;
    if !v.admissible {
        return Err(not_admissible(Problem::A3, v));
    }
    let m = CumulativeIntegral::new(profile, ProfileIntegral::M, state.tau, cfg.knots, &cfg.quad)?;
    let kernel = Arc::new(KernelWithDefect {
        kernel: Kernel::A3 { st: *state, m },
        profile: profile.clone(),
        defect: None,
    });
    let grid = admissibility_grid(profile.domain_end(), cfg.admissibility.grid_points, true);
    let violations: Vec<(f64, f64)> = grid
        .iter()
        .map(|&x| (x, kernel.row(x).w_p))
        .filter(|&(_, wp)| wp < 0.0)
        .collect();
    let region = region_for(Problem::A3, profile, state.tau, cfg)?;
    Ok(assemble(
        Problem::A3,
        SolutionState::Dimensional(*state),
        profile.clone(),
        region,
        kernel,
        v,
        violations,
        cfg.quad,
    ))
}

pub fn solve_b3(profile: &BodyProfile, state: &ScaledUpstreamState, cfg: &SolveConfig) -> Result<MeasureSolution> {
    let v = admissible_b3_with(profile, state.gamma, state.k, &cfg.admissibility)?;
    if !v.admissible {
        return Err(not_admissible(Problem::B3, v));
    }
    let j = CumulativeIntegral::new(profile, ProfileIntegral::J, 0.0, cfg.knots, &cfg.quad)?;
    let kernel = Arc::new(KernelWithDefect {
        kernel: Kernel::B3 { st: *state, j },
        profile: profile.clone(),
        defect: None,
    });
    let region = region_for(Problem::B3, profile, 1.0, cfg)?;
    Ok(assemble(
        Problem::B3,
        SolutionState::Scaled(*state),
        profile.clone(),
        region,
        kernel,
        v,
        Vec::new(),
        cfg.quad,
    ))
}

/// Dispatch on the problem; dimensional problems need `upstream`.
pub fn solve(
    problem: Problem,
    profile: &BodyProfile,
    upstream: Option<&UpstreamState>,
    scaled: &ScaledUpstreamState,
    cfg: &SolveConfig,
) -> Result<MeasureSolution> {
    let need = || Error::BadParameter(format!("problem {problem} needs a dimensional upstream state"));
    match problem {
        Problem::A => solve_a(profile, upstream.ok_or_else(need)?, cfg),
        Problem::A3 => solve_a3(profile, upstream.ok_or_else(need)?, cfg),
        Problem::B => solve_b(profile, scaled, cfg),
        Problem::B3 => solve_b3(profile, scaled, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow_state::{scaled_upstream, upstream};
    use approx::assert_relative_eq;

    fn lin() -> BodyProfile {
        BodyProfile::parse("linear:a=1", 5.0).unwrap()
    }

    #[test]
    fn newtonian_busemann_wedge() {
        let st = upstream(1.0, 0.1, 1.4, 1.0, 1.0).unwrap();
        let sol = solve_a(&lin(), &st, &SolveConfig::default()).unwrap();
        for &x in &[0.0, 0.01, 1.0, 2.5, 5.0] {
            let r = sol.weights_at(x).unwrap();
            assert_relative_eq!(r.w_p, 0.01 / 1.4 + 0.01 / 1.01, max_relative = 1e-12);
            assert!((r.w_p - 0.0170438472).abs() < 1e-10);
            assert_relative_eq!(r.u, 1.0 / 1.01, max_relative = 1e-12);
            assert_relative_eq!(r.v, 0.1 / 1.01, max_relative = 1e-12);
            assert_eq!(r.e, st.e_inf);
            assert!((r.u - 0.99009901).abs() < 1e-8);
            assert!((r.v - 0.099009901).abs() < 1e-9);
            assert_relative_eq!(r.w_rho, 0.1 * x * 1.01f64.sqrt(), max_relative = 1e-12);
        }
        assert_eq!(sol.weights_at(0.0).unwrap().w_rho, 0.0);
        assert!(sol.weights_at(5.5).is_err());
        let f = pressure_force_density(&sol, 1.0).unwrap();
        assert_relative_eq!(f.magnitude, 0.0170438472, max_relative = 1e-8);
        assert!(f.pressure_positive);
    }

    #[test]
    fn apex_limits() {
        let st = upstream(1.5, 0.2, 1.4, 1.3, 2.0).unwrap();
        let p = BodyProfile::parse("log:a=1", 5.0).unwrap();
        let sol = solve_a(&p, &st, &SolveConfig::default()).unwrap();
        let r0 = sol.weights_at(0.0).unwrap();
        assert_relative_eq!(r0.u, 2.0 / 1.04, max_relative = 1e-14);
        assert_eq!(r0.w_rho, 0.0);
        let r = sol.weights_at(1e-7).unwrap();
        assert_relative_eq!(r.u, r0.u, max_relative = 1e-6);
        for f in Field::ALL {
            if f != Field::WP {
                assert_eq!(r0.get(f), 0.0, "{f:?}");
            }
        }
    }

    #[test]
    fn hsd_wedge() {
        let sc = scaled_upstream(1.0, 1.4).unwrap();
        let sol = solve_b(&lin(), &sc, &SolveConfig::default()).unwrap();
        let r = sol.weights_at(2.0).unwrap();
        assert_relative_eq!(r.u, -1.0, max_relative = 1e-14);
        assert_eq!(r.v, 1.0);
        assert_relative_eq!(r.w_p, 1.7142857142857142, max_relative = 1e-14);
        assert_relative_eq!(r.w_rho, 2.0 / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(r.e, 5.0, max_relative = 1e-15);
        let f = pressure_force_density(&sol, 2.0).unwrap();
        assert_relative_eq!(f.magnitude, 1.7142857142857142, max_relative = 1e-14);
        assert_relative_eq!(f.force.0, 1.7142857142857142 / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(f.force.1, -1.7142857142857142 / 2f64.sqrt(), max_relative = 1e-14);
        let q = BodyProfile::parse("power:a=1,p=2", 5.0).unwrap();
        let sol = solve_b(&q, &sc, &SolveConfig::default()).unwrap();
        let r = sol.weights_at(1.0).unwrap();
        assert_eq!(r.v, 2.0);
        assert_relative_eq!(r.u, -3.0, max_relative = 1e-12);
        assert_relative_eq!(r.w_p, sc.p_bar_inf + 6.0, max_relative = 1e-14);
    }

    #[test]
    fn cone_examples() {
        let st = upstream(1.0, 0.1, 1.4, 1.0, 1.0).unwrap();
        let sol = solve_a3(&lin(), &st, &SolveConfig::default()).unwrap();
        let r = sol.weights_at(2.0).unwrap();
        assert_relative_eq!(r.u, 1.0 / 1.01, max_relative = 1e-12);
        assert_relative_eq!(r.w_p, st.p_inf + 0.01 / 1.01, max_relative = 1e-12);
        assert_relative_eq!(r.w_rho, 0.1 * 2.0 * 1.01f64.sqrt() / 2.0, max_relative = 1e-12);
        assert!((r.w_rho - 0.0502494 * 2.0).abs() < 1e-6);
        assert_eq!(r.e, st.e_inf);
        assert!(sol.pressure_violations.is_empty());
        let r0 = sol.weights_at(0.0).unwrap();
        assert_eq!(r0.w_rho, 0.0);
        assert_relative_eq!(r0.u, 1.0 / 1.01, max_relative = 1e-14);
        assert!(sol.weights_at(1e-6).unwrap().w_rho < 1e-6);

        let sc = scaled_upstream(1.0, 1.4).unwrap();
        let sol = solve_b3(&lin(), &sc, &SolveConfig::default()).unwrap();
        let r = sol.weights_at(3.0).unwrap();
        assert_relative_eq!(r.u, -1.0, max_relative = 1e-14);
        assert_eq!(r.v, 1.0);
        assert_relative_eq!(r.w_p, 1.7142857142857142, max_relative = 1e-14);
        assert_relative_eq!(r.w_rho, 3.0 / (2.0 * 2f64.sqrt()), max_relative = 1e-14);
        let q = BodyProfile::parse("power:a=1,p=2", 5.0).unwrap();
        let sol = solve_b3(&q, &sc, &SolveConfig::default()).unwrap();
        let r = sol.weights_at(1.0).unwrap();
        assert_relative_eq!(r.u, -10.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(r.w_p, sc.p_bar_inf + 5.0, max_relative = 1e-14);
        assert_eq!(r.e, sc.e_bar_inf);
    }

    #[test]
    fn not_admissible_is_reported() {
        let p = BodyProfile::parse("log:a=1", 20.0).unwrap();
        let sc = scaled_upstream(10.0, 1.4).unwrap();
        assert!(matches!(
            solve_b(&p, &sc, &SolveConfig::default()),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn components_and_defects() {
        let st = upstream(1.0, 0.1, 1.4, 1.0, 1.0).unwrap();
        let sol = solve_a3(&lin(), &st, &SolveConfig::default()).unwrap();
        assert_eq!(sol.components.len(), 10);
        assert_eq!(sol.component(Role::PressureZeroth).unwrap().ac().per_radius, st.p_inf);
        assert_eq!(sol.component(Role::Pressure).unwrap().ac().uniform, st.p_inf);
        assert_eq!(sol.component(Role::EnergyX).unwrap().ac().uniform, st.e_inf);
        let bad = sol.with_defect(Field::WP, 1.05);
        let a = sol.weights_at(1.0).unwrap();
        let b = bad.weights_at(1.0).unwrap();
        assert_relative_eq!(b.w_p, 1.05 * a.w_p, max_relative = 1e-15);
        assert_eq!(a.w1x, b.w1x);
        let sc = scaled_upstream(1.0, 1.4).unwrap();
        let solb = solve_b(&lin(), &sc, &SolveConfig::default()).unwrap();
        assert_eq!(solb.components.len(), 9);
        assert!(solb.component(Role::PressureZeroth).is_none());
        assert_eq!(solb.inflow.mom_x, sc.p_bar_inf);
        assert_eq!(solb.csv_header(), CSV_HEADER_PLANAR);
        assert_eq!(sol.csv_header(), CSV_HEADER_AXISYM);
    }

    #[test]
    fn problem_names() {
        for p in [Problem::A, Problem::B, Problem::A3, Problem::B3] {
            assert_eq!(p.to_string().parse::<Problem>().unwrap(), p);
        }
        assert!("C".parse::<Problem>().is_err());
    }
}
