//! Body generator profiles b(x) (wedge) and f(x) (cone), and the admissibility
//! inequalities under which the explicit measure solutions exist.

use crate::error::{Error, Result};
use crate::quadrature::{CumulativeIntegral, ProfileIntegral, QuadratureConfig};
use serde::{Deserialize, Serialize};

pub const DEFAULT_DOMAIN_END: f64 = 5.0;
pub const MONOTONE_CHECK_POINTS: usize = 10_000;
pub const DEFAULT_ADMISSIBILITY_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Power,
    Exponential,
    Logarithmic,
    Sum,
}

/// One closed-form building block of a profile. Every term vanishes at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Term {
    /// a x
    Linear { a: f64 },
    /// a x^p
    Power { a: f64, p: f64 },
    /// a (e^{kx} - 1)
    Exponential { a: f64, k: f64 },
    /// a ln(1 + c x)
    Logarithmic { a: f64, c: f64 },
}

impl Term {
    fn family(&self) -> Family {
        match self {
            Term::Linear { .. } => Family::Linear,
            Term::Power { .. } => Family::Power,
            Term::Exponential { .. } => Family::Exponential,
            Term::Logarithmic { .. } => Family::Logarithmic,
        }
    }

    fn coefficients(&self) -> Vec<f64> {
        match *self {
            Term::Linear { a } => vec![a],
            Term::Power { a, p } => vec![a, p],
            Term::Exponential { a, k } => vec![a, k],
            Term::Logarithmic { a, c } => vec![a, c],
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = self.coefficients().iter().all(|c| c.is_finite());
        if !finite {
            return Err(Error::BadParameter(format!("non-finite coefficient in {self:?}")));
        }
        match *self {
            Term::Power { p, .. } => {
                if p != 1.0 && p < 2.0 {
                    return Err(Error::BadExponent(p));
                }
            }
            Term::Exponential { k: 0.0, .. } => {
                return Err(Error::BadParameter("exponential rate k must be nonzero".into()));
            }
            Term::Logarithmic { c, .. } if c <= 0.0 => {
                return Err(Error::BadParameter(format!(
                    "logarithmic scale c must be positive, got {c}"
                )));
            }
            _ => {}
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        match *self {
            Term::Linear { a } => (a * x, a, 0.0),
            Term::Power { a, p } => {
                if p == 1.0 {
                    (a * x, a, 0.0)
                } else if p == 2.0 {
                    (a * x * x, 2.0 * a * x, 2.0 * a)
                } else {
                    (
                        a * x.powf(p),
                        a * p * x.powf(p - 1.0),
                        a * p * (p - 1.0) * x.powf(p - 2.0),
                    )
                }
            }
            Term::Exponential { a, k } => {
                let e = (k * x).exp();
                (a * (k * x).exp_m1(), a * k * e, a * k * k * e)
            }
            Term::Logarithmic { a, c } => {
                let s = 1.0 + c * x;
                (a * (c * x).ln_1p(), a * c / s, -a * c * c / (s * s))
            }
        }
    }

    // closed form of \int_0^x b b' b''
    fn exact_i(&self, x: f64) -> f64 {
        match *self {
            Term::Linear { .. } => 0.0,
            Term::Power { a, p } => {
                if p == 1.0 {
                    0.0
                } else {
                    a.powi(3) * p * p * (p - 1.0) * x.powf(3.0 * p - 2.0) / (3.0 * p - 2.0)
                }
            }
            Term::Exponential { a, k } => {
                let e2 = (2.0 * k * x).exp_m1();
                let e3 = (3.0 * k * x).exp_m1();
                a.powi(3) * k * k * (e3 / 3.0 - e2 / 2.0)
            }
            Term::Logarithmic { a, c } => {
                let s = 1.0 + c * x;
                let l = s.ln();
                a.powi(3) * c * c * (l / (2.0 * s * s) + 1.0 / (4.0 * s * s) - 0.25)
            }
        }
    }

    // closed form of \int_0^x f^2 f' f''
    fn exact_j(&self, x: f64) -> f64 {
        match *self {
            Term::Linear { .. } => 0.0,
            Term::Power { a, p } => {
                if p == 1.0 {
                    0.0
                } else {
                    a.powi(4) * p * p * (p - 1.0) * x.powf(4.0 * p - 2.0) / (4.0 * p - 2.0)
                }
            }
            Term::Exponential { a, k } => {
                let e2 = (2.0 * k * x).exp_m1();
                let e3 = (3.0 * k * x).exp_m1();
                let e4 = (4.0 * k * x).exp_m1();
                a.powi(4) * k * k * (e4 / 4.0 - 2.0 * e3 / 3.0 + e2 / 2.0)
            }
            Term::Logarithmic { a, c } => {
                let s = 1.0 + c * x;
                let l = s.ln();
                let s2 = s * s;
                a.powi(4) * c * c * (l * l / (2.0 * s2) + l / (2.0 * s2) + 1.0 / (4.0 * s2) - 0.25)
            }
        }
    }

    fn spec(&self) -> String {
        match *self {
            Term::Linear { a } => format!("linear:a={a}"),
            Term::Power { a, p } => format!("power:a={a},p={p}"),
            Term::Exponential { a, k } => format!("exp:a={a},k={k}"),
            Term::Logarithmic { a, c } => format!("log:a={a},c={c}"),
        }
    }
}

/// A C^2 generator curve on `[0, domain_end]` with `b(0) = 0` and `b' > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyProfile {
    terms: Vec<Term>,
    domain_end: f64,
}

pub fn make_profile(family: Family, coefficients: &[f64], domain_end: f64) -> Result<BodyProfile> {
    let get = |i: usize, default: Option<f64>| -> Result<f64> {
        coefficients.get(i).copied().or(default).ok_or_else(|| {
            Error::BadParameter(format!(
                "{family:?} profile needs at least {} coefficient(s)",
                i + 1
            ))
        })
    };
    let max_len = match family {
        Family::Linear => 1,
        Family::Sum => {
            return Err(Error::BadParameter(
                "sum profiles are built from terms, see BodyProfile::from_terms".into(),
            ))
        }
        _ => 2,
    };
    if coefficients.len() > max_len {
        return Err(Error::BadParameter(format!(
            "{family:?} profile takes at most {max_len} coefficient(s), got {}",
            coefficients.len()
        )));
    }
    let term = match family {
        Family::Linear => Term::Linear { a: get(0, None)? },
        Family::Power => Term::Power {
            a: get(0, None)?,
            p: get(1, None)?,
        },
        Family::Exponential => Term::Exponential {
            a: get(0, None)?,
            k: get(1, Some(1.0))?,
        },
        Family::Logarithmic => Term::Logarithmic {
            a: get(0, None)?,
            c: get(1, Some(1.0))?,
        },
        Family::Sum => unreachable!(),
    };
    BodyProfile::from_terms(vec![term], domain_end)
}

impl BodyProfile {
    pub fn from_terms(terms: Vec<Term>, domain_end: f64) -> Result<Self> {
        if !(domain_end > 0.0) || !domain_end.is_finite() {
            return Err(Error::BadParameter(format!(
                "domain_end must be positive and finite, got {domain_end}"
            )));
        }
        if terms.is_empty() {
            return Err(Error::BadParameter("profile needs at least one term".into()));
        }
        for t in &terms {
            t.validate()?;
        }
        let profile = Self { terms, domain_end };
        for i in 1..=MONOTONE_CHECK_POINTS {
            let x = domain_end * i as f64 / MONOTONE_CHECK_POINTS as f64;
            let (b, db, ddb) = profile.eval_raw(x);
            if !(b.is_finite() && db.is_finite() && ddb.is_finite()) {
                return Err(Error::BadParameter(format!(
                    "profile not finite at x = {x}"
                )));
            }
            if !(db > 0.0) {
                return Err(Error::NonMonotone { x, slope: db });
            }
        }
        Ok(profile)
    }

    /// Parse the CLI grammar, e.g. `power:a=1,p=2` or `sum:linear:a=1+log:a=0.5`.
    pub fn parse(spec: &str, domain_end: f64) -> Result<Self> {
        let spec = spec.trim();
        let terms = if let Some(rest) = spec.strip_prefix("sum:") {
            let parts: Vec<&str> = rest.split('+').collect();
            if parts.iter().any(|p| p.trim().is_empty()) {
                return Err(Error::ProfileSyntax(format!("empty summand in '{spec}'")));
            }
            parts
                .iter()
                .map(|p| parse_term(p.trim()))
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![parse_term(spec)?]
        };
        Self::from_terms(terms, domain_end)
    }

    pub fn family(&self) -> Family {
        if self.terms.len() == 1 {
            self.terms[0].family()
        } else {
            Family::Sum
        }
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.coefficients()).collect()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn with_domain_end(&self, domain_end: f64) -> Result<Self> {
        Self::from_terms(self.terms.clone(), domain_end)
    }

    /// Canonical spec string; parsing it gives back the same profile.
    pub fn spec(&self) -> String {
        if self.terms.len() == 1 {
            self.terms[0].spec()
        } else {
            let parts: Vec<String> = self.terms.iter().map(|t| t.spec()).collect();
            format!("sum:{}", parts.join("+"))
        }
    }

    /// `(b, b', b'')` at `x`, checked against the domain.
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        if !(x >= 0.0) || x > self.domain_end * (1.0 + 1e-12) {
            return Err(Error::OutOfDomain {
                x,
                end: self.domain_end,
            });
        }
        Ok(self.eval_raw(x))
    }

    /// `(b, b', b'')` without the domain check.
    pub fn eval_raw(&self, x: f64) -> (f64, f64, f64) {
        self.terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
            let (b, db, ddb) = t.eval(x);
            (acc.0 + b, acc.1 + db, acc.2 + ddb)
        })
    }

    /// Closed form of `\int_0^x b b' b''` for single-term profiles.
    pub fn exact_i(&self, x: f64) -> Option<f64> {
        match self.terms.as_slice() {
            [t] => Some(t.exact_i(x)),
            _ => None,
        }
    }

    /// Closed form of `\int_0^x f^2 f' f''` for single-term profiles.
    pub fn exact_j(&self, x: f64) -> Option<f64> {
        match self.terms.as_slice() {
            [t] => Some(t.exact_j(x)),
            _ => None,
        }
    }
}

fn parse_term(spec: &str) -> Result<Term> {
    let (name, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::ProfileSyntax(format!("expected <family>:<key>=<value>,..., got '{spec}'")))?;
    let mut pairs: Vec<(String, f64)> = Vec::new();
    for kv in args.split(',') {
        let kv = kv.trim();
        if kv.is_empty() {
            return Err(Error::ProfileSyntax(format!("empty argument in '{spec}'")));
        }
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::ProfileSyntax(format!("expected key=value, got '{kv}'")))?;
        let k = k.trim().to_string();
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::ProfileSyntax(format!("bad number '{}' for key '{k}'", v.trim())))?;
        if pairs.iter().any(|(q, _)| *q == k) {
            return Err(Error::ProfileSyntax(format!("duplicate key '{k}' in '{spec}'")));
        }
        pairs.push((k, v));
    }
    let allowed: &[&str] = match name.trim() {
        "linear" => &["a"],
        "power" => &["a", "p"],
        "exp" => &["a", "k"],
        "log" => &["a", "c"],
        other => {
            return Err(Error::ProfileSyntax(format!(
                "unknown family '{other}' (linear, power, exp, log, sum)"
            )))
        }
    };
    for (k, _) in &pairs {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::ProfileSyntax(format!(
                "unknown key '{k}' for '{}' (allowed: {})",
                name.trim(),
                allowed.join(", ")
            )));
        }
    }
    let get = |k: &str| pairs.iter().find(|(q, _)| q == k).map(|(_, v)| *v);
    let a = get("a").unwrap_or(1.0);
    Ok(match name.trim() {
        "linear" => Term::Linear { a },
        "power" => Term::Power {
            a,
            p: get("p").ok_or_else(|| Error::ProfileSyntax("power profile needs p".into()))?,
        },
        "exp" => Term::Exponential {
            a,
            k: get("k").unwrap_or(1.0),
        },
        _ => Term::Logarithmic {
            a,
            c: get("c").unwrap_or(1.0),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub worst_margin: f64,
    pub worst_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityOptions {
    pub grid_points: usize,
    pub quad: QuadratureConfig,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_ADMISSIBILITY_POINTS,
            quad: QuadratureConfig::default(),
        }
    }
}

fn check_params(tau: Option<f64>, gamma: f64, k: f64) -> Result<()> {
    if let Some(t) = tau {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::BadParameter(format!("tau must be >= 0, got {t}")));
        }
    }
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::BadParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::BadParameter(format!("K must be positive, got {k}")));
    }
    Ok(())
}

/// `[0, X]` with `n` points, or `(0, X]` with `n` points when `open_left`.
pub fn admissibility_grid(domain_end: f64, n: usize, open_left: bool) -> Vec<f64> {
    let n = n.max(2);
    if open_left {
        (1..=n).map(|i| domain_end * i as f64 / n as f64).collect()
    } else {
        (0..n)
            .map(|i| domain_end * i as f64 / (n - 1) as f64)
            .collect()
    }
}

fn verdict(grid: &[f64], margins: &[f64], allow_zero: bool) -> AdmissibilityVerdict {
    let mut worst = f64::INFINITY;
    let mut worst_x = grid[0];
    for (&x, &m) in grid.iter().zip(margins) {
        if m < worst || m.is_nan() {
            worst = m;
            worst_x = x;
            if m.is_nan() {
                break;
            }
        }
    }
    let admissible = if allow_zero { worst >= 0.0 } else { worst > 0.0 };
    AdmissibilityVerdict {
        admissible,
        worst_margin: worst,
        worst_x,
    }
}

fn integral_on_grid(
    profile: &BodyProfile,
    kind: ProfileIntegral,
    tau: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    CumulativeIntegral::along(profile, kind, tau, grid, cfg)
}

/// Problem A: `(1+tau^2 b'^2)^{3/2}/(gamma K^2) + b'' H + b'^2 sqrt(1+tau^2 b'^2) > 0`.
pub fn admissible_a(profile: &BodyProfile, tau: f64, gamma: f64, k: f64) -> Result<AdmissibilityVerdict> {
    admissible_a_with(profile, tau, gamma, k, &AdmissibilityOptions::default())
}

pub fn admissible_a_with(
    profile: &BodyProfile,
    tau: f64,
    gamma: f64,
    k: f64,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityVerdict> {
    check_params(Some(tau), gamma, k)?;
    let grid = admissibility_grid(profile.domain_end(), opts.grid_points, false);
    let h = integral_on_grid(profile, ProfileIntegral::H, tau, &grid, &opts.quad)?;
    let margins: Vec<f64> = grid
        .iter()
        .zip(&h)
        .map(|(&x, &hx)| {
            let (_, db, ddb) = profile.eval_raw(x);
            let sq = (1.0 + tau * tau * db * db).sqrt();
            // H(0) = 0 makes the curvature term vanish at the apex
            let curv = if x == 0.0 { 0.0 } else { ddb * hx };
            sq * sq * sq / (gamma * k * k) + curv + db * db * sq
        })
        .collect();
    Ok(verdict(&grid, &margins, false))
}

/// Problem B: `1/(gamma K^2) + b'^2 + b b'' > 0`.
pub fn admissible_b(profile: &BodyProfile, gamma: f64, k: f64) -> Result<AdmissibilityVerdict> {
    admissible_b_with(profile, gamma, k, &AdmissibilityOptions::default())
}

pub fn admissible_b_with(
    profile: &BodyProfile,
    gamma: f64,
    k: f64,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityVerdict> {
    check_params(None, gamma, k)?;
    let grid = admissibility_grid(profile.domain_end(), opts.grid_points, false);
    let margins: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let (b, db, ddb) = profile.eval_raw(x);
            1.0 / (gamma * k * k) + db * db + b * ddb
        })
        .collect();
    Ok(verdict(&grid, &margins, false))
}

/// Problem A3, kept in its published form:
/// `f (1+tau^2 f'^2)^{3/2} + gamma K^2 f'' M + sqrt(1+tau^2 f'^2) f f'^2 >= 0`.
pub fn admissible_a3(profile: &BodyProfile, tau: f64, gamma: f64, k: f64) -> Result<AdmissibilityVerdict> {
    admissible_a3_with(profile, tau, gamma, k, &AdmissibilityOptions::default())
}

pub fn admissible_a3_with(
    profile: &BodyProfile,
    tau: f64,
    gamma: f64,
    k: f64,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityVerdict> {
    check_params(Some(tau), gamma, k)?;
    let grid = admissibility_grid(profile.domain_end(), opts.grid_points, true);
    let m = integral_on_grid(profile, ProfileIntegral::M, tau, &grid, &opts.quad)?;
    let margins: Vec<f64> = grid
        .iter()
        .zip(&m)
        .map(|(&x, &mx)| {
            let (f, df, ddf) = profile.eval_raw(x);
            let sq = (1.0 + tau * tau * df * df).sqrt();
            f * sq * sq * sq + gamma * k * k * ddf * mx + sq * f * df * df
        })
        .collect();
    Ok(verdict(&grid, &margins, true))
}

/// Problem B3: `2f + gamma K^2 (2 f f'^2 + f^2 f'') > 0`.
pub fn admissible_b3(profile: &BodyProfile, gamma: f64, k: f64) -> Result<AdmissibilityVerdict> {
    admissible_b3_with(profile, gamma, k, &AdmissibilityOptions::default())
}

pub fn admissible_b3_with(
    profile: &BodyProfile,
    gamma: f64,
    k: f64,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityVerdict> {
    check_params(None, gamma, k)?;
    let grid = admissibility_grid(profile.domain_end(), opts.grid_points, true);
    let margins: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let (f, df, ddf) = profile.eval_raw(x);
            2.0 * f + gamma * k * k * (2.0 * f * df * df + f * f * ddf)
        })
        .collect();
    Ok(verdict(&grid, &margins, false))
}
