//! Adaptive Gauss-Kronrod integration and the test functions used for pairings.

mod bump;
mod profile_integrals;

pub use bump::{make_bump, TestFunction};
pub use profile_integrals::{h_of, i_of, j_of, m_of, CumulativeIntegral, ProfileIntegral};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::BadParameter(format!(
                "quadrature tolerances must be positive (abs {abs_tol}, rel {rel_tol}, max {max_subdivisions})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

// 21-point Kronrod abscissae (descending, last is the centre) with the
// embedded 10-point Gauss weights on the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    l1: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel. Returns (kronrod value, error estimate).
///
/// The estimate follows the QUADPACK rescaling of |K21 - G10|.
pub fn gk21<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> (f64, f64) {
    let (v, e, _) = gk21_l1(g, a, b);
    (v, e)
}

/// As [`gk21`], also returning the Kronrod estimate of the integral of |g|.
fn gk21_l1<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();
    let fc = g(center);
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err, res_abs)
}

// Below this multiple of eps * integral of |g| the error estimate is roundoff,
// so a cancelling integral cannot be pushed under a tiny absolute tolerance.
const ROUNDOFF_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Adaptive integration of `g` over `[a, b]` by bisecting the panel with the
/// largest error estimate. Returns (value, error estimate).
pub fn integrate_1d<F: Fn(f64) -> f64>(
    g: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !(a <= b) {
        return Err(Error::BadParameter(format!(
            "integration bounds out of order: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v0, e0, l0) = gk21_l1(&g, a, b);
    if !v0.is_finite() {
        return Err(Error::BadParameter(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let mut total = v0;
    let mut total_err = e0;
    let mut total_l1 = l0;
    let tol = |v: f64, l1: f64| cfg.abs_tol.max(cfg.rel_tol * v.abs()).max(ROUNDOFF_FLOOR * l1);
    if total_err <= tol(total, total_l1) {
        return Ok((total, total_err));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v0,
        error: e0,
        l1: l0,
    });
    // panels too narrow to split further are retired here
    let mut frozen_err = 0.0;
    let mut frozen_l1 = 0.0;
    let mut splits = 0usize;
    while total_err > tol(total, total_l1) {
        let Some(p) = heap.pop() else {
            // nothing left to refine; the remaining error is roundoff
            break;
        };
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b || (p.b - p.a) < 8.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            frozen_err += p.error;
            frozen_l1 += p.l1;
            continue;
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::NoConvergence {
                a,
                b,
                subdivisions: splits,
                error: total_err,
            });
        }
        splits += 1;
        let (v1, e1, l1) = gk21_l1(&g, p.a, mid);
        let (v2, e2, l2) = gk21_l1(&g, mid, p.b);
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        total_l1 += l1 + l2 - p.l1;
        heap.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
            l1,
        });
        heap.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
            l1: l2,
        });
        if heap.len() % 64 == 0 {
            // re-sum to keep the running totals free of drift
            total = heap.iter().map(|q| q.value).sum::<f64>();
            total_err = heap.iter().map(|q| q.error).sum::<f64>() + frozen_err;
            total_l1 = heap.iter().map(|q| q.l1).sum::<f64>() + frozen_l1;
        }
    }
    let value: f64 = heap.iter().map(|q| q.value).sum::<f64>();
    let value = if heap.is_empty() { total } else { value };
    if !value.is_finite() {
        return Err(Error::BadParameter(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    Ok((value, total_err))
}

/// Integrate over consecutive break points, summing the pieces.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    g: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let mut value = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (v, e) = integrate_1d(&g, w[0], w[1], cfg)?;
            value += v;
            err += e;
        }
    }
    Ok((value, err))
}

/// A single Kronrod panel without error control, exact for polynomials of
/// degree up to 31.
pub fn fixed_panel<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    gk21(&g, a, b).0
}
