//! Upstream states and the hypersonic scaling maps.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dimensional oncoming flow, parametrised by the similarity parameter `K`,
/// the slenderness `tau` and the adiabatic exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpstreamState {
    pub rho_inf: f64,
    pub u_inf: f64,
    #[serde(rename = "E_inf")]
    pub e_inf: f64,
    pub p_inf: f64,
    pub gamma: f64,
    pub tau: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

/// Nondimensional oncoming flow of the small-disturbance problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledUpstreamState {
    #[serde(rename = "E_bar_inf")]
    pub e_bar_inf: f64,
    pub p_bar_inf: f64,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("{name} must be positive, got {v}")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("gamma must exceed 1, got {gamma}")))
    }
}

pub fn upstream(k: f64, tau: f64, gamma: f64, rho_inf: f64, u_inf: f64) -> Result<UpstreamState> {
    positive("K", k)?;
    positive("tau", tau)?;
    if tau >= 1.0 {
        return Err(Error::BadParameter(format!("tau must lie in (0, 1), got {tau}")));
    }
    check_gamma(gamma)?;
    positive("rho_inf", rho_inf)?;
    positive("u_inf", u_inf)?;
    let e_inf = 0.5 * u_inf * u_inf * (1.0 + 2.0 * tau * tau / ((gamma - 1.0) * k * k));
    let p_inf = rho_inf * u_inf * u_inf * tau * tau / (gamma * k * k);
    Ok(UpstreamState {
        rho_inf,
        u_inf,
        e_inf,
        p_inf,
        gamma,
        tau,
        k,
    })
}

pub fn scaled_upstream(k: f64, gamma: f64) -> Result<ScaledUpstreamState> {
    positive("K", k)?;
    check_gamma(gamma)?;
    Ok(ScaledUpstreamState {
        e_bar_inf: 2.0 / ((gamma - 1.0) * k * k),
        p_bar_inf: 1.0 / (gamma * k * k),
        gamma,
        k,
    })
}

impl UpstreamState {
    pub fn mach_inf(&self) -> f64 {
        self.k / self.tau
    }

    /// The scaled state with the same `(K, gamma)`.
    pub fn scaled(&self) -> ScaledUpstreamState {
        scaled_upstream(self.k, self.gamma).expect("validated at construction")
    }
}

/// Polytropic equation of state `p = (gamma-1)/gamma * rho (E - (u^2+v^2)/2)`.
pub fn pressure_from_state(rho: f64, u: f64, v: f64, e: f64, gamma: f64) -> f64 {
    (gamma - 1.0) / gamma * rho * (e - 0.5 * (u * u + v * v))
}

/// Scaled equation of state `p = (gamma-1)/(2 gamma) rho (E - 2u - v^2)`.
pub fn scaled_pressure_from_state(rho: f64, u: f64, v: f64, e: f64, gamma: f64) -> f64 {
    (gamma - 1.0) / (2.0 * gamma) * rho * (e - 2.0 * u - v * v)
}

pub fn scale_point(x: f64, y: f64, tau: f64) -> (f64, f64) {
    (x, y / tau)
}

pub fn scale_point_3d(x: f64, y: f64, z: f64, tau: f64) -> (f64, f64, f64) {
    (x, y / tau, z / tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledFields {
    pub u_bar: f64,
    pub v_bar: f64,
    #[serde(rename = "E_bar")]
    pub e_bar: f64,
    pub rho_bar: f64,
    pub p_bar: f64,
}

/// Small-disturbance variables of a dimensional state.
///
/// `E` and `p` are measured from the upstream values, which is the same map
/// `(2E - u^2)/(u^2 tau^2)` and `p/(gamma p M^2 tau^2)` rearranged so the
/// upstream state lands exactly on the scaled upstream state.
pub fn scale_fields(u: f64, v: f64, e: f64, rho: f64, p: f64, up: &UpstreamState) -> ScaledFields {
    let t2 = up.tau * up.tau;
    let scaled = up.scaled();
    ScaledFields {
        u_bar: (u - up.u_inf) / (up.u_inf * t2),
        v_bar: v / (up.u_inf * up.tau),
        e_bar: scaled.e_bar_inf + 2.0 * (e - up.e_inf) / (up.u_inf * up.u_inf * t2),
        rho_bar: rho / up.rho_inf,
        p_bar: scaled.p_bar_inf * (p / up.p_inf),
    }
}

/// Swirl component of the 3-D map.
pub fn scale_swirl(w: f64, up: &UpstreamState) -> f64 {
    w / (up.u_inf * up.tau)
}
