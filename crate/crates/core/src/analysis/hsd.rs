//! Eigenstructure of the hypersonic small-disturbance system in the
//! primitive variables `(rho, u, v, E)`.

use crate::error::{Error, Result};
use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEGENERATE_TOL: f64 = 1e-6;
pub const FD_REL_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsdState {
    pub rho_bar: f64,
    pub u_bar: f64,
    pub v_bar: f64,
    #[serde(rename = "E_bar")]
    pub e_bar: f64,
}

impl HsdState {
    pub fn new(rho_bar: f64, u_bar: f64, v_bar: f64, e_bar: f64) -> Result<Self> {
        if !(rho_bar > 0.0) || !rho_bar.is_finite() {
            return Err(Error::BadParameter(format!("rho_bar must be positive, got {rho_bar}")));
        }
        let s = Self {
            rho_bar,
            u_bar,
            v_bar,
            e_bar,
        };
        if !(s.internal() > 0.0) || !s.internal().is_finite() {
            return Err(Error::NonHyperbolic(s.internal()));
        }
        Ok(s)
    }

    /// State with prescribed sound speed `c`.
    pub fn with_sound_speed(rho_bar: f64, u_bar: f64, v_bar: f64, c: f64, gamma: f64) -> Result<Self> {
        Self::new(rho_bar, u_bar, v_bar, 2.0 * u_bar + v_bar * v_bar + 2.0 * c * c / (gamma - 1.0))
    }

    /// `E - 2u - v^2`
    pub fn internal(&self) -> f64 {
        self.e_bar - 2.0 * self.u_bar - self.v_bar * self.v_bar
    }

    pub fn sound_speed_sq(&self, gamma: f64) -> f64 {
        0.5 * (gamma - 1.0) * self.internal()
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        self.sound_speed_sq(gamma).sqrt()
    }

    pub fn pressure(&self, gamma: f64) -> f64 {
        (gamma - 1.0) * self.rho_bar * self.internal() / (2.0 * gamma)
    }

    fn as_array(&self) -> [f64; 4] {
        [self.rho_bar, self.u_bar, self.v_bar, self.e_bar]
    }

    fn from_array(a: [f64; 4]) -> Self {
        Self {
            rho_bar: a[0],
            u_bar: a[1],
            v_bar: a[2],
            e_bar: a[3],
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("gamma must exceed 1, got {gamma}")))
    }
}

/// Jacobians of the x-flux `W` and y-flux `H` with respect to `(rho, u, v, E)`.
pub fn hsd_flux_jacobians(s: &HsdState, gamma: f64) -> (Matrix4<f64>, Matrix4<f64>) {
    let (r, u, v, e) = (s.rho_bar, s.u_bar, s.v_bar, s.e_bar);
    let k = (gamma - 1.0) / (2.0 * gamma);
    let q = s.internal();
    #[rustfmt::skip]
    let dw = Matrix4::new(
        1.0,         0.0,       0.0,                          0.0,
        u + k * q,   r / gamma, (1.0 - gamma) * r * v / gamma, k * r,
        v,           0.0,       r,                            0.0,
        e,           0.0,       0.0,                          r,
    );
    #[rustfmt::skip]
    let dh = Matrix4::new(
        v,             0.0,                     r,                            0.0,
        u * v,         r * v,                   r * u,                        0.0,
        v * v + k * q, (1.0 - gamma) * r / gamma, (gamma + 1.0) * r * v / gamma, k * r,
        v * e,         0.0,                     r * e,                        r * v,
    );
    (dw, dh)
}

/// `det(lambda dW - dH)`.
pub fn char_poly(s: &HsdState, gamma: f64, lambda: f64) -> f64 {
    let (dw, dh) = hsd_flux_jacobians(s, gamma);
    (dw * lambda - dh).determinant()
}

/// `(v - c, v, v, v + c)`.
pub fn eigenvalues(s: &HsdState, gamma: f64) -> [f64; 4] {
    let c = s.sound_speed(gamma);
    [s.v_bar - c, s.v_bar, s.v_bar, s.v_bar + c]
}

pub fn eigenvectors(s: &HsdState, gamma: f64) -> [[f64; 4]; 4] {
    let c = s.sound_speed(gamma);
    let (r, v, q) = (s.rho_bar, s.v_bar, s.internal());
    [
        [-r / c, c - v, 1.0, 0.0],
        [2.0 * r / q, 1.0, 0.0, 0.0],
        [-r / q, 0.0, 0.0, 1.0],
        [r / c, -v - c, 1.0, 0.0],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldClass {
    GenuinelyNonlinear,
    LinearlyDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharField {
    pub index: usize,
    /// finite-difference `grad lambda . r`
    pub value: f64,
    pub classification: FieldClass,
    /// `grad lambda . r` from differentiating `v -+ c` exactly
    pub analytic: f64,
    /// reference value `(gamma - 1) c + 1` for fields 1 and 4, 0 otherwise
    pub stated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub state: HsdState,
    pub gamma: f64,
    pub sound_speed: f64,
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [[f64; 4]; 4],
    pub char_fields: Vec<CharField>,
    /// `|det(lambda_i dW - dH)| / (|det dW| (1 + |v| + c)^4)` per eigenvalue
    pub char_poly_residuals: [f64; 4],
    /// `|(lambda_i dW - dH) r_i| / (|lambda_i dW| |r_i| + |dH| |r_i|)` per field
    pub eigvec_residuals: [f64; 4],
}

fn lambda_of(a: [f64; 4], gamma: f64, index: usize) -> f64 {
    let s = HsdState::from_array(a);
    let c = s.sound_speed_sq(gamma).max(0.0).sqrt();
    match index {
        1 => s.v_bar - c,
        4 => s.v_bar + c,
        _ => s.v_bar,
    }
}

/// Central-difference gradient of `lambda_index` in `(rho, u, v, E)`.
pub fn eigenvalue_gradient_fd(s: &HsdState, gamma: f64, index: usize) -> [f64; 4] {
    let base = s.as_array();
    let mut g = [0.0; 4];
    for (j, gj) in g.iter_mut().enumerate() {
        let h = FD_REL_STEP * base[j].abs().max(1.0);
        let mut p = base;
        let mut m = base;
        p[j] += h;
        m[j] -= h;
        *gj = (lambda_of(p, gamma, index) - lambda_of(m, gamma, index)) / (2.0 * h);
    }
    g
}

/// Exact gradient of `v -+ c` (fields 1, 4) or `v` (fields 2, 3).
pub fn eigenvalue_gradient(s: &HsdState, gamma: f64, index: usize) -> [f64; 4] {
    let c = s.sound_speed(gamma);
    let dc = [
        0.0,
        -(gamma - 1.0) / (2.0 * c),
        -(gamma - 1.0) * s.v_bar / (2.0 * c),
        (gamma - 1.0) / (4.0 * c),
    ];
    match index {
        1 => [-dc[0], -dc[1], 1.0 - dc[2], -dc[3]],
        4 => [dc[0], dc[1], 1.0 + dc[2], dc[3]],
        _ => [0.0, 0.0, 1.0, 0.0],
    }
}

fn dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// FD value of `grad lambda_i . r_i` and its classification.
pub fn characteristic_field_class(s: &HsdState, gamma: f64, index: usize) -> Result<CharField> {
    check_gamma(gamma)?;
    if !(1..=4).contains(&index) {
        return Err(Error::BadParameter(format!("field index must be 1..4, got {index}")));
    }
    let r = eigenvectors(s, gamma)[index - 1];
    let value = dot(eigenvalue_gradient_fd(s, gamma, index), r);
    let analytic = dot(eigenvalue_gradient(s, gamma, index), r);
    let stated = match index {
        1 | 4 => (gamma - 1.0) * s.sound_speed(gamma) + 1.0,
        _ => 0.0,
    };
    let classification = if value.abs() <= DEGENERATE_TOL {
        FieldClass::LinearlyDegenerate
    } else {
        FieldClass::GenuinelyNonlinear
    };
    Ok(CharField {
        index,
        value,
        classification,
        analytic,
        stated,
    })
}

pub fn hsd_eigen(s: &HsdState, gamma: f64) -> Result<EigenReport> {
    check_gamma(gamma)?;
    let c2 = s.sound_speed_sq(gamma);
    if !(c2 > 0.0) {
        return Err(Error::NonHyperbolic(c2));
    }
    let c = c2.sqrt();
    let (dw, dh) = hsd_flux_jacobians(s, gamma);
    let lams = eigenvalues(s, gamma);
    let vecs = eigenvectors(s, gamma);
    let lead = dw.determinant().abs() * (1.0 + s.v_bar.abs() + c).powi(4);
    let mut char_poly_residuals = [0.0; 4];
    let mut eigvec_residuals = [0.0; 4];
    for i in 0..4 {
        let m = dw * lams[i] - dh;
        char_poly_residuals[i] = m.determinant().abs() / lead;
        let r = Vector4::from(vecs[i]);
        let scale = ((dw * lams[i]).norm() + dh.norm()) * r.norm();
        eigvec_residuals[i] = (m * r).norm() / scale;
    }
    let char_fields = (1..=4)
        .map(|i| characteristic_field_class(s, gamma, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenReport {
        state: *s,
        gamma,
        sound_speed: c,
        eigenvalues: lams,
        eigenvectors: vecs,
        char_fields,
        char_poly_residuals,
        eigvec_residuals,
    })
}

/// Seeded hyperbolic states with `rho in [0.1, 5]`, `u, v in [-2, 2]`,
/// `c in [0.1, 3]`, `gamma in [1.05, 3]`.
pub fn random_states(n: usize, seed: u64) -> Vec<(HsdState, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let gamma = rng.gen_range(1.05..3.0);
            let rho = rng.gen_range(0.1..5.0);
            let u = rng.gen_range(-2.0..2.0);
            let v = rng.gen_range(-2.0..2.0);
            let c = rng.gen_range(0.1..3.0);
            let s = HsdState::with_sound_speed(rho, u, v, c, gamma).expect("positive internal energy by construction");
            (s, gamma)
        })
        .collect()
}
