//! Radon measures of the form "constant density on a region + weighted Dirac
//! measure on the boundary curve", in planar and axisymmetric flavors, and
//! their pairings with test functions.

use crate::error::{Error, Result};
use crate::geometry::BodyProfile;
use crate::quadrature::{fixed_panel, integrate_1d, integrate_pieces, QuadratureConfig, TestFunction};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `{ y > g(x), x >= 0 }`
    AboveCurve2d,
    /// `{ r > g(x), x >= 0 }` in the meridional half plane
    OutsideCurveAxisym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Planar,
    PlanarScaled,
    Axisym,
    AxisymScaled,
}

impl Flavor {
    pub fn is_axisym(self) -> bool {
        matches!(self, Flavor::Axisym | Flavor::AxisymScaled)
    }

    pub fn region_kind(self) -> RegionKind {
        if self.is_axisym() {
            RegionKind::OutsideCurveAxisym
        } else {
            RegionKind::AboveCurve2d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deriv {
    None,
    DX,
    DY,
}

/// Region bounded below by `g = curve_scale * b`, with the window
/// `[0, X] x [0, Y]` that test-function supports must stay under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub profile: BodyProfile,
    pub curve_scale: f64,
    pub window: (f64, f64),
}

impl RegionSpec {
    pub fn new(kind: RegionKind, profile: BodyProfile, curve_scale: f64, window_y: f64) -> Result<Self> {
        if !(curve_scale > 0.0) || !curve_scale.is_finite() {
            return Err(Error::BadParameter(format!(
                "curve scale must be positive, got {curve_scale}"
            )));
        }
        let x_end = profile.domain_end();
        if !(window_y > 0.0) || !window_y.is_finite() {
            return Err(Error::BadParameter(format!(
                "window height must be positive, got {window_y}"
            )));
        }
        Ok(Self {
            kind,
            profile,
            curve_scale,
            window: (x_end, window_y),
        })
    }

    /// Default window height: the curve top plus half the domain length.
    pub fn default_height(profile: &BodyProfile, curve_scale: f64) -> f64 {
        let x_end = profile.domain_end();
        curve_scale * profile.eval_raw(x_end).0 + 0.5 * x_end
    }

    /// `(g, g')` at `x`.
    pub fn curve(&self, x: f64) -> (f64, f64) {
        let (b, db, _) = self.profile.eval_raw(x);
        (self.curve_scale * b, self.curve_scale * db)
    }

    pub fn check_support(&self, phi: &TestFunction) -> Result<()> {
        let slack = 1e-12 * (1.0 + self.window.0.max(self.window.1));
        if phi.center.0 + phi.radii.0 > self.window.0 + slack || phi.center.1 + phi.radii.1 > self.window.1 + slack {
            return Err(Error::SupportOutsideWindow(format!(
                "{} vs window [0, {}] x [0, {}]",
                phi.describe(),
                self.window.0,
                self.window.1
            )));
        }
        Ok(())
    }

    /// Abscissae in `[a, b]` where the curve crosses the support boundary.
    fn crossings(&self, phi: &TestFunction, a: f64, b: f64) -> Vec<f64> {
        const SAMPLES: usize = 128;
        let psi = |x: f64| {
            let (g, _) = self.curve(x);
            phi.inside_margin(x, g)
        };
        let mut out = Vec::new();
        let mut x_prev = a;
        let mut p_prev = psi(a);
        for i in 1..=SAMPLES {
            let x = a + (b - a) * i as f64 / SAMPLES as f64;
            let p = psi(x);
            if (p_prev > 0.0) != (p > 0.0) {
                let (mut lo, mut hi) = (x_prev, x);
                let lo_inside = p_prev > 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (psi(mid) > 0.0) == lo_inside {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            x_prev = x;
            p_prev = p;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AcDensity {
    /// density with respect to the reference area measure of the flavor
    pub uniform: f64,
    /// axisymmetric only: density `c / r`, i.e. `c dx dr`
    pub per_radius: f64,
}

impl AcDensity {
    pub const ZERO: AcDensity = AcDensity {
        uniform: 0.0,
        per_radius: 0.0,
    };

    pub fn uniform(c: f64) -> Self {
        Self {
            uniform: c,
            per_radius: 0.0,
        }
    }

    pub fn per_radius(c: f64) -> Self {
        Self {
            uniform: 0.0,
            per_radius: c,
        }
    }

    fn is_zero(&self) -> bool {
        self.uniform == 0.0 && self.per_radius == 0.0
    }
}

pub type Weight = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Split pairing value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PairParts {
    pub ac: f64,
    pub dirac: f64,
}

impl PairParts {
    pub fn total(&self) -> f64 {
        self.ac + self.dirac
    }
}

#[derive(Clone)]
pub struct RadonMeasure {
    flavor: Flavor,
    region: Arc<RegionSpec>,
    ac: AcDensity,
    weight: Option<Weight>,
}

impl fmt::Debug for RadonMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadonMeasure")
            .field("flavor", &self.flavor)
            .field("curve", &self.region.profile.spec())
            .field("curve_scale", &self.region.curve_scale)
            .field("ac", &self.ac)
            .field("has_weight", &self.weight.is_some())
            .finish()
    }
}

impl RadonMeasure {
    pub fn new(flavor: Flavor, region: Arc<RegionSpec>, ac: AcDensity, weight: Option<Weight>) -> Result<Self> {
        if flavor.region_kind() != region.kind {
            return Err(Error::FlavorMismatch(format!(
                "{flavor:?} measure on a {:?} region",
                region.kind
            )));
        }
        if !flavor.is_axisym() && ac.per_radius != 0.0 {
            return Err(Error::FlavorMismatch(
                "per-radius density only exists for axisymmetric measures".into(),
            ));
        }
        Ok(Self {
            flavor,
            region,
            ac,
            weight,
        })
    }

    pub fn zero(flavor: Flavor, region: Arc<RegionSpec>) -> Result<Self> {
        Self::new(flavor, region, AcDensity::ZERO, None)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn region(&self) -> &Arc<RegionSpec> {
        &self.region
    }

    pub fn ac(&self) -> AcDensity {
        self.ac
    }

    pub fn weight_at(&self, x: f64) -> f64 {
        self.weight.as_ref().map_or(0.0, |w| w(x))
    }

    /// Same measure with the Dirac weight transformed pointwise.
    pub fn map_weight(&self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let old = self.weight.clone();
        let w: Weight = Arc::new(move |x| f(x, old.as_ref().map_or(0.0, |w| w(x))));
        Self {
            weight: Some(w),
            ..self.clone()
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &RadonMeasure, beta: f64) -> Result<Self> {
        if self.flavor != other.flavor || *self.region != *other.region {
            return Err(Error::FlavorMismatch(
                "linear combination of measures on different regions or flavors".into(),
            ));
        }
        let ac = AcDensity {
            uniform: alpha * self.ac.uniform + beta * other.ac.uniform,
            per_radius: alpha * self.ac.per_radius + beta * other.ac.per_radius,
        };
        let weight: Option<Weight> = match (&self.weight, &other.weight) {
            (None, None) => None,
            (a, b) => {
                let (a, b) = (a.clone(), b.clone());
                Some(Arc::new(move |x| {
                    alpha * a.as_ref().map_or(0.0, |w| w(x)) + beta * b.as_ref().map_or(0.0, |w| w(x))
                }))
            }
        };
        Self::new(self.flavor, self.region.clone(), ac, weight)
    }

    pub fn pair(&self, phi: &TestFunction, deriv: Deriv, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(self.pair_parts(phi, deriv, cfg)?.total())
    }

    /// Pairing split into its absolutely continuous and Dirac parts.
    pub fn pair_parts(&self, phi: &TestFunction, deriv: Deriv, cfg: &QuadratureConfig) -> Result<PairParts> {
        self.region.check_support(phi)?;
        let shape = phi.unit_shape();
        let (xa, xb) = shape.x_extent();
        let xa = xa.max(0.0);
        let xb = xb.min(self.region.window.0);
        if xa >= xb {
            return Ok(PairParts::default());
        }
        let mut breaks = vec![xa];
        breaks.extend(self.region.crossings(&shape, xa, xb));
        breaks.push(xb);
        let axisym = self.flavor.is_axisym();
        let pick = move |v: (f64, f64, f64)| match deriv {
            Deriv::None => v.0,
            Deriv::DX => v.1,
            Deriv::DY => v.2,
        };

        let dirac = match &self.weight {
            None => 0.0,
            Some(w) => {
                let integrand = |x: f64| {
                    let (g, dg) = self.region.curve(x);
                    let val = pick(shape.eval(x, g));
                    if val == 0.0 {
                        return 0.0;
                    }
                    let arc = (1.0 + dg * dg).sqrt();
                    let r = if axisym { g } else { 1.0 };
                    w(x) * val * arc * r
                };
                let mut sum = 0.0;
                for piece in breaks.windows(2) {
                    let (a, b) = (piece[0], piece[1]);
                    if b <= a {
                        continue;
                    }
                    let mid = 0.5 * (a + b);
                    if shape.inside_margin(mid, self.region.curve(mid).0) <= 0.0 {
                        continue;
                    }
                    sum += integrate_1d(integrand, a, b, cfg)?.0;
                }
                sum
            }
        };

        // Derivative pairings go through the divergence theorem: the chord
        // integral at the window ends plus a line integral along the curve.
        // A support clear of the curve and the axis then pairs to exactly 0.
        let ac = if self.ac.is_zero() {
            0.0
        } else {
            let AcDensity { uniform, per_radius } = self.ac;
            let dens = move |y: f64| if axisym { uniform * y + per_radius } else { uniform };
            let chord = |x: f64, f: &dyn Fn(f64) -> f64| -> f64 {
                let Some((bottom, top)) = shape.y_chord(x) else {
                    return 0.0;
                };
                let lo = bottom.max(self.region.curve(x).0);
                if lo >= top {
                    return 0.0;
                }
                if shape.order <= 15 {
                    fixed_panel(f, lo, top)
                } else {
                    integrate_1d(f, lo, top, cfg).map(|v| v.0).unwrap_or(f64::NAN)
                }
            };
            let area = |f: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
                Ok(integrate_pieces(|x| chord(x, &|y| f(x, y)), &breaks, cfg)?.0)
            };
            let along_curve = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
                let mut sum = 0.0;
                for piece in breaks.windows(2) {
                    let (a, b) = (piece[0], piece[1]);
                    if b <= a {
                        continue;
                    }
                    let mid = 0.5 * (a + b);
                    if shape.inside_margin(mid, self.region.curve(mid).0) <= 0.0 {
                        continue;
                    }
                    sum += integrate_1d(f, a, b, cfg)?.0;
                }
                Ok(sum)
            };
            match deriv {
                Deriv::None => area(&|x, y| dens(y) * shape.eval(x, y).0)?,
                Deriv::DX => {
                    let ends = chord(xb, &|y| dens(y) * shape.eval(xb, y).0)
                        - chord(xa, &|y| dens(y) * shape.eval(xa, y).0);
                    let wall = along_curve(&|x| {
                        let (g, dg) = self.region.curve(x);
                        dens(g) * shape.eval(x, g).0 * dg
                    })?;
                    ends + wall
                }
                Deriv::DY => {
                    let wall = along_curve(&|x| {
                        let g = self.region.curve(x).0;
                        dens(g) * shape.eval(x, g).0
                    })?;
                    let radial = if axisym && uniform != 0.0 {
                        uniform * area(&|x, y| shape.eval(x, y).0)?
                    } else {
                        0.0
                    };
                    -wall - radial
                }
            }
        };

        Ok(PairParts {
            ac: phi.amplitude * ac,
            dirac: phi.amplitude * dirac,
        })
    }

    /// Debug dump: flavor, curve, constants and a sampled weight table.
    pub fn to_json(&self, samples: &[f64]) -> serde_json::Value {
        serde_json::json!({
            "flavor": self.flavor,
            "curve": self.region.profile.spec(),
            "curve_scale": self.region.curve_scale,
            "ac": self.ac,
            "weights": samples.iter().map(|&x| [x, self.weight_at(x)]).collect::<Vec<_>>(),
        })
    }
}

/// `c * \int_0^infty phi(0, y) dy`, with an extra `r` for axisymmetric flavors.
pub fn inflow_term(c: f64, phi: &TestFunction, flavor: Flavor) -> f64 {
    let shape = phi.unit_shape();
    let Some((bottom, top)) = shape.y_chord(0.0) else {
        return 0.0;
    };
    let lo = bottom.max(0.0);
    if lo >= top {
        return 0.0;
    }
    let axisym = flavor.is_axisym();
    let f = |y: f64| {
        let r = if axisym { y } else { 1.0 };
        r * shape.eval(0.0, y).0
    };
    let v = if shape.order <= 15 {
        fixed_panel(f, lo, top)
    } else {
        integrate_1d(f, lo, top, &QuadratureConfig::default())
            .map(|v| v.0)
            .unwrap_or(f64::NAN)
    };
    c * phi.amplitude * v
}

/// Both sides of the scaling identity for a dimensional density measure:
/// `lhs = <rho, phi(x, y/tau)>` and `rhs = tau^d <rho-bar^(tau), phi>` on the
/// scaled plane, with `d = 1` planar and `d = 2` axisymmetric.
pub fn tau_factor_pairing(
    rho: &RadonMeasure,
    phi: &TestFunction,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let power = match rho.flavor {
        Flavor::Planar => 1,
        Flavor::Axisym => 2,
        other => {
            return Err(Error::FlavorMismatch(format!(
                "scaling identity needs a dimensional measure, got {other:?}"
            )))
        }
    };
    let region = rho.region.clone();
    if (region.curve_scale - tau).abs() > 1e-14 * tau {
        return Err(Error::BadParameter(format!(
            "measure curve is scaled by {}, expected tau = {tau}",
            region.curve_scale
        )));
    }
    let dimensional = TestFunction {
        center: (phi.center.0, tau * phi.center.1),
        radii: (phi.radii.0, tau * phi.radii.1),
        ..*phi
    };
    let lhs = rho.pair(&dimensional, Deriv::None, cfg)?;

    let scaled_region = Arc::new(RegionSpec::new(
        region.kind,
        region.profile.clone(),
        1.0,
        region.window.1 / tau,
    )?);
    let profile = region.profile.clone();
    let w = rho.weight.clone();
    let weight: Weight = Arc::new(move |x| {
        let db = profile.eval_raw(x).1;
        let wx = w.as_ref().map_or(0.0, |w| w(x));
        wx * (1.0 + tau * tau * db * db).sqrt() / (tau * (1.0 + db * db).sqrt())
    });
    let scaled_flavor = if power == 1 {
        Flavor::PlanarScaled
    } else {
        Flavor::AxisymScaled
    };
    let scaled = RadonMeasure::new(scaled_flavor, scaled_region, rho.ac, Some(weight))?;
    let rhs = tau.powi(power) * scaled.pair(phi, Deriv::None, cfg)?;
    Ok((lhs, rhs))
}
