use super::{integrate_1d, QuadratureConfig};
use crate::error::{Error, Result};
use crate::geometry::BodyProfile;
use serde::{Deserialize, Serialize};

/// The running integrals the closed-form solutions are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileIntegral {
    /// `\int b' / sqrt(1 + tau^2 b'^2)`
    H,
    /// `\int f f' / sqrt(1 + tau^2 f'^2)`
    M,
    /// `\int b b' b''`
    I,
    /// `\int f^2 f' f''`
    J,
}

impl ProfileIntegral {
    pub fn integrand(self, profile: &BodyProfile, tau: f64) -> impl Fn(f64) -> f64 + '_ {
        move |t| {
            let (b, db, ddb) = profile.eval_raw(t);
            match self {
                ProfileIntegral::H => db / (1.0 + tau * tau * db * db).sqrt(),
                ProfileIntegral::M => b * db / (1.0 + tau * tau * db * db).sqrt(),
                ProfileIntegral::I => b * db * ddb,
                ProfileIntegral::J => b * b * db * ddb,
            }
        }
    }
}

fn integral(
    profile: &BodyProfile,
    kind: ProfileIntegral,
    tau: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    profile.eval(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(integrate_1d(kind.integrand(profile, tau), 0.0, x, cfg)?.0)
}

pub fn h_of(profile: &BodyProfile, tau: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integral(profile, ProfileIntegral::H, tau, x, cfg)
}

pub fn m_of(profile: &BodyProfile, tau: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integral(profile, ProfileIntegral::M, tau, x, cfg)
}

pub fn i_of(profile: &BodyProfile, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integral(profile, ProfileIntegral::I, 0.0, x, cfg)
}

pub fn j_of(profile: &BodyProfile, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integral(profile, ProfileIntegral::J, 0.0, x, cfg)
}

/// A running integral anchored on uniform knots, so each evaluation only
/// integrates from the nearest knot below.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    profile: BodyProfile,
    kind: ProfileIntegral,
    tau: f64,
    step: f64,
    values: Vec<f64>,
    cfg: QuadratureConfig,
}

impl CumulativeIntegral {
    pub const DEFAULT_KNOTS: usize = 256;

    pub fn new(
        profile: &BodyProfile,
        kind: ProfileIntegral,
        tau: f64,
        knots: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        let knots = knots.max(1);
        let step = profile.domain_end() / knots as f64;
        let grid: Vec<f64> = (0..=knots).map(|i| step * i as f64).collect();
        let values = Self::along(profile, kind, tau, &grid, cfg)?;
        Ok(Self {
            profile: profile.clone(),
            kind,
            tau,
            step,
            values,
            cfg: *cfg,
        })
    }

    /// Cumulative values at an ascending grid of nonnegative points.
    pub fn along(
        profile: &BodyProfile,
        kind: ProfileIntegral,
        tau: f64,
        grid: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<Vec<f64>> {
        let g = kind.integrand(profile, tau);
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for &x in grid {
            if x < prev || x < 0.0 {
                return Err(Error::BadParameter(format!(
                    "cumulative grid must be ascending and nonnegative (saw {x} after {prev})"
                )));
            }
            if x > prev {
                acc += integrate_1d(&g, prev, x, cfg)?.0;
            }
            out.push(acc);
            prev = x;
        }
        Ok(out)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::OutOfDomain {
                x,
                end: self.profile.domain_end(),
            });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let last = self.values.len() - 1;
        let j = ((x / self.step).floor() as usize).min(last);
        let x0 = self.step * j as f64;
        let g = self.kind.integrand(&self.profile, self.tau);
        let (piece, _) = if x >= x0 {
            integrate_1d(&g, x0, x, &self.cfg)?
        } else {
            let (v, e) = integrate_1d(&g, x, x0, &self.cfg)?;
            (-v, e)
        };
        Ok(self.values[j] + piece)
    }

    pub fn kind(&self) -> ProfileIntegral {
        self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_profile, Family};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn h_examples() {
        let p = make_profile(Family::Linear, &[1.0], 5.0).unwrap();
        let h = h_of(&p, 0.1, 1.0, &cfg()).unwrap();
        assert_relative_eq!(h, 1.0 / 1.01f64.sqrt(), max_relative = 1e-13);
        assert!((h - 0.9950372).abs() < 1e-7);
        assert_eq!(h_of(&p, 0.1, 0.0, &cfg()).unwrap(), 0.0);
        let q = make_profile(Family::Power, &[1.0, 2.0], 5.0).unwrap();
        let h = h_of(&q, 0.5, 1.0, &cfg()).unwrap();
        assert_relative_eq!(h, 2.0 * (2f64.sqrt() - 1.0), max_relative = 1e-12);
        for spec in ["log:a=1", "exp:a=1,k=0.4", "power:a=2,p=3"] {
            let r = BodyProfile::parse(spec, 3.0).unwrap();
            let h = h_of(&r, 0.0, 2.5, &cfg()).unwrap();
            assert_relative_eq!(h, r.eval(2.5).unwrap().0, max_relative = 1e-12);
        }
        assert!(h_of(&p, 0.1, 6.0, &cfg()).is_err());
    }

    #[test]
    fn m_examples() {
        let p = make_profile(Family::Linear, &[1.0], 5.0).unwrap();
        let m = m_of(&p, 0.1, 2.0, &cfg()).unwrap();
        assert_relative_eq!(m, 2.0 / 1.01f64.sqrt(), max_relative = 1e-13);
        assert!((m - 1.9900744).abs() < 1e-7);
        let r = BodyProfile::parse("log:a=1", 3.0).unwrap();
        let m = m_of(&r, 0.0, 2.5, &cfg()).unwrap();
        assert_relative_eq!(m, 0.5 * r.eval(2.5).unwrap().0.powi(2), max_relative = 1e-12);
    }

    #[test]
    fn m_quadratic_against_composite_reference() {
        let q = make_profile(Family::Power, &[1.0, 2.0], 5.0).unwrap();
        let m = m_of(&q, 1.0, 1.0, &cfg()).unwrap();
        // composite Simpson with 10^6 panels
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let g = |t: f64| 2.0 * t * t * t / (1.0 + 4.0 * t * t).sqrt();
        let mut s = g(0.0) + g(1.0);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        let reference = s * h / 3.0;
        assert_relative_eq!(m, reference, max_relative = 1e-12);
        assert!((m - 0.2696723).abs() < 1e-7);
    }

    #[test]
    fn cumulative_matches_direct() {
        let p = BodyProfile::parse("sum:log:a=1+power:a=0.2,p=2", 5.0).unwrap();
        let c = CumulativeIntegral::new(&p, ProfileIntegral::H, 0.3, 16, &cfg()).unwrap();
        for &x in &[0.0, 1e-9, 0.3125, 1.0, 4.99, 5.0] {
            let d = h_of(&p, 0.3, x, &cfg()).unwrap();
            assert!((c.eval(x).unwrap() - d).abs() <= 1e-12 * d.max(1e-12));
        }
        assert!(c.eval(-1.0).is_err());
        assert_eq!(c.kind(), ProfileIntegral::H);
    }

    proptest! {
        #[test]
        fn h_and_m_monotone(a in 0.1f64..3.0, c in 0.1f64..3.0, tau in 0.0f64..0.9, x in 0.0f64..4.0, dx in 0.0f64..1.0) {
            let p = BodyProfile::parse(&format!("log:a={a},c={c}"), 5.0).unwrap();
            let h1 = h_of(&p, tau, x, &cfg()).unwrap();
            let h2 = h_of(&p, tau, x + dx, &cfg()).unwrap();
            prop_assert!(h2 >= h1);
            let m1 = m_of(&p, tau, x, &cfg()).unwrap();
            let m2 = m_of(&p, tau, x + dx, &cfg()).unwrap();
            prop_assert!(m2 >= m1);
        }
    }
}
