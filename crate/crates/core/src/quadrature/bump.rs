use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Compact polynomial bump `amplitude * max(0, 1 - s)^k` on an ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: (f64, f64),
    pub radii: (f64, f64),
    pub order: u32,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

pub fn make_bump(center: (f64, f64), radii: (f64, f64), order: u32) -> Result<TestFunction> {
    if !(radii.0 > 0.0 && radii.1 > 0.0) || !radii.0.is_finite() || !radii.1.is_finite() {
        return Err(Error::BadParameter(format!(
            "bump radii must be positive, got {radii:?}"
        )));
    }
    if order < 3 {
        return Err(Error::BadParameter(format!(
            "bump order must be at least 3, got {order}"
        )));
    }
    if !center.0.is_finite() || !center.1.is_finite() {
        return Err(Error::BadParameter("bump center not finite".into()));
    }
    Ok(TestFunction {
        center,
        radii,
        order,
        amplitude: 1.0,
    })
}

impl TestFunction {
    pub const DEFAULT_ORDER: u32 = 4;

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            amplitude: self.amplitude * alpha,
            ..*self
        }
    }

    pub fn unit_shape(&self) -> Self {
        Self {
            amplitude: 1.0,
            ..*self
        }
    }

    fn s(&self, x: f64, y: f64) -> f64 {
        let dx = (x - self.center.0) / self.radii.0;
        let dy = (y - self.center.1) / self.radii.1;
        dx * dx + dy * dy
    }

    /// `1 - s` at a point; positive exactly on the open support.
    pub fn inside_margin(&self, x: f64, y: f64) -> f64 {
        1.0 - self.s(x, y)
    }

    /// Value and gradient `(phi, d_x phi, d_y phi)`.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let t = 1.0 - self.s(x, y);
        if t <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let k = self.order as i32;
        let tk1 = t.powi(k - 1);
        let a = self.amplitude;
        let g = -2.0 * k as f64 * tk1 * a;
        (
            a * tk1 * t,
            g * (x - self.center.0) / (self.radii.0 * self.radii.0),
            g * (y - self.center.1) / (self.radii.1 * self.radii.1),
        )
    }

    pub fn x_extent(&self) -> (f64, f64) {
        (self.center.0 - self.radii.0, self.center.0 + self.radii.0)
    }

    /// Vertical chord of the support at abscissa `x`, if any.
    pub fn y_chord(&self, x: f64) -> Option<(f64, f64)> {
        let xi = (x - self.center.0) / self.radii.0;
        let q = 1.0 - xi * xi;
        if q <= 0.0 {
            return None;
        }
        let h = self.radii.1 * q.sqrt();
        Some((self.center.1 - h, self.center.1 + h))
    }

    pub fn describe(&self) -> String {
        format!(
            "center=({}, {}) radii=({}, {}) k={}",
            self.center.0, self.center.1, self.radii.0, self.radii.1, self.order
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn maximum_and_outside() {
        let b = make_bump((0.0, 0.0), (1.0, 1.0), 3).unwrap();
        assert_eq!(b.eval(0.0, 0.0), (1.0, 0.0, 0.0));
        assert_eq!(b.eval(2.0, 0.0), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hand_values() {
        let b = make_bump((0.0, 0.0), (1.0, 1.0), 3).unwrap();
        let (p, px, py) = b.eval(0.5, 0.0);
        assert_relative_eq!(p, 0.421875, max_relative = 1e-15);
        assert_relative_eq!(px, -1.6875, max_relative = 1e-15);
        assert_eq!(py, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_bump((0.0, 0.0), (0.0, 1.0), 3).is_err());
        assert!(make_bump((0.0, 0.0), (1.0, 1.0), 2).is_err());
    }

    #[test]
    fn chord() {
        let b = make_bump((1.0, 2.0), (0.5, 0.25), 4).unwrap();
        let (lo, hi) = b.y_chord(1.0).unwrap();
        assert_relative_eq!(lo, 1.75);
        assert_relative_eq!(hi, 2.25);
        assert!(b.y_chord(1.5).is_none());
    }

    #[test]
    fn amplitude_scales_everything() {
        let b = make_bump((0.3, 0.1), (0.4, 0.7), 4).unwrap();
        let (p, px, py) = b.eval(0.4, 0.2);
        let (q, qx, qy) = b.scaled(-3.0).eval(0.4, 0.2);
        assert_relative_eq!(q, -3.0 * p);
        assert_relative_eq!(qx, -3.0 * px);
        assert_relative_eq!(qy, -3.0 * py);
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(
            cx in -1.0f64..1.0, cy in -1.0f64..1.0,
            rx in 0.2f64..1.0, ry in 0.2f64..1.0,
            u in -0.95f64..0.95, v in 0.0f64..std::f64::consts::TAU,
            k in 3u32..7,
        ) {
            let b = make_bump((cx, cy), (rx, ry), k).unwrap();
            let x = cx + u * rx * v.cos();
            let y = cy + u * ry * v.sin();
            let h = 1e-6;
            let (_, px, py) = b.eval(x, y);
            let fx = (b.eval(x + h, y).0 - b.eval(x - h, y).0) / (2.0 * h);
            let fy = (b.eval(x, y + h).0 - b.eval(x, y - h).0) / (2.0 * h);
            prop_assert!((px - fx).abs() < 1e-6);
            prop_assert!((py - fy).abs() < 1e-6);
        }
    }
}
