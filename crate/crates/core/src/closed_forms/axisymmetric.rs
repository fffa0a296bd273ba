use super::WeightRow;
use crate::flow_state::{ScaledUpstreamState, UpstreamState};
use crate::geometry::BodyProfile;
use crate::quadrature::CumulativeIntegral;

pub(super) fn row_a3(profile: &BodyProfile, st: &UpstreamState, m: &CumulativeIntegral, x: f64) -> WeightRow {
    let (rho, u, e, tau) = (st.rho_inf, st.u_inf, st.e_inf, st.tau);
    let (f, df, ddf) = profile.eval_raw(x);
    let mx = m.eval(x).unwrap_or(f64::NAN);
    let sq = (1.0 + tau * tau * df * df).sqrt();
    let slope = tau * df;
    let q = rho * u * u * tau * tau;

    let (w_rho, u_tr, w1x, w_p) = if x == 0.0 {
        (0.0, u / (sq * sq), 0.0, st.p_inf + q * df * df / (sq * sq))
    } else {
        (
            tau * rho * f * f * f / (4.0 * mx),
            2.0 * u * mx / (f * f * sq),
            tau * rho * u * u * mx / (f * sq * sq),
            st.p_inf + q * (ddf * mx + sq * f * df * df) / (f * sq * sq * sq),
        )
    };
    let w0x = tau * rho * u * f / (2.0 * sq);
    let w2x = slope * w1x;
    let w3x = tau * rho * u * e * f / (2.0 * sq);
    WeightRow {
        w_rho,
        w0x,
        w0y: slope * w0x,
        w1x,
        w1y: slope * w1x,
        w2x,
        w2y: slope * w2x,
        w3x,
        w3y: slope * w3x,
        w_p,
        u: u_tr,
        v: slope * u_tr,
        e,
    }
}

pub(super) fn row_b3(profile: &BodyProfile, st: &ScaledUpstreamState, j: &CumulativeIntegral, x: f64) -> WeightRow {
    let (f, df, ddf) = profile.eval_raw(x);
    let jx = j.eval(x).unwrap_or(f64::NAN);
    let w = (1.0 + df * df).sqrt();
    let (u_tr, w1x) = if x == 0.0 {
        (-df * df, 0.0)
    } else {
        (-df * df + jx / (f * f), (-f * f * df * df + jx) / (2.0 * f * w))
    };
    let w3x = st.e_bar_inf * f / (2.0 * w);
    WeightRow {
        w_rho: f / (2.0 * w),
        w0x: f / (2.0 * w),
        w0y: f * df / (2.0 * w),
        w1x,
        w1y: df * w1x,
        w2x: f * df / (2.0 * w),
        w2y: f * df * df / (2.0 * w),
        w3x,
        w3y: df * w3x,
        w_p: st.p_bar_inf + df * df + 0.5 * f * ddf,
        u: u_tr,
        v: df,
        e: st.e_bar_inf,
    }
}
