use super::WeightRow;
use crate::flow_state::{ScaledUpstreamState, UpstreamState};
use crate::geometry::BodyProfile;
use crate::quadrature::CumulativeIntegral;

pub(super) fn row_a(profile: &BodyProfile, st: &UpstreamState, h: &CumulativeIntegral, x: f64) -> WeightRow {
    let (rho, u, e, tau) = (st.rho_inf, st.u_inf, st.e_inf, st.tau);
    let (b, db, ddb) = profile.eval_raw(x);
    let hx = h.eval(x).unwrap_or(f64::NAN);
    let sq = (1.0 + tau * tau * db * db).sqrt();
    let slope = tau * db;

    let (w_rho, u_tr) = if x == 0.0 {
        (0.0, u / (sq * sq))
    } else {
        (rho * tau * b * b / hx, u * hx / (b * sq))
    };
    let w0x = rho * u * tau * b / sq;
    let w1x = rho * u * u * tau * hx / (sq * sq);
    let w2x = slope * w1x;
    let w3x = rho * u * e * tau * b / sq;
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
        w_p: st.p_inf + rho * u * u * tau * tau * (ddb * hx + db * db * sq) / (sq * sq * sq),
        u: u_tr,
        v: slope * u_tr,
        e,
    }
}

pub(super) fn row_b(profile: &BodyProfile, st: &ScaledUpstreamState, i: &CumulativeIntegral, x: f64) -> WeightRow {
    let (b, db, ddb) = profile.eval_raw(x);
    let ix = i.eval(x).unwrap_or(f64::NAN);
    let w = (1.0 + db * db).sqrt();
    let u_tr = if x == 0.0 { -db * db } else { -db * db + ix / b };
    let w1x = (-b * db * db + ix) / w;
    let w3x = st.e_bar_inf * b / w;
    WeightRow {
        w_rho: b / w,
        w0x: b / w,
        w0y: b * db / w,
        w1x,
        w1y: db * w1x,
        w2x: b * db / w,
        w2y: b * db * db / w,
        w3x,
        w3y: db * w3x,
        w_p: st.p_bar_inf + db * db + b * ddb,
        u: u_tr,
        v: db,
        e: st.e_bar_inf,
    }
}
