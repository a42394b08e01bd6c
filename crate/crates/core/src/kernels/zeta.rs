use crate::error::{invalid, Error, Result};

/// Terms of the accelerated alternating series; the error bound is about
/// `3 / (3 + sqrt 8)^n`, far below double precision at this size.
const ETA_TERMS: usize = 48;

/// Dirichlet eta `sum_{k>=1} (-1)^(k-1) k^(-s)` by the Cohen, Rodriguez Villegas
/// and Zagier weighting of the partial sums.
fn eta(s: f64) -> f64 {
    let n = ETA_TERMS as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..ETA_TERMS {
        let kf = k as f64;
        c = b - c;
        sum += c * (kf + 1.0).powf(-s);
        b = (kf + n) * (kf - n) * b / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Riemann zeta on the real axis for `s > 0`, `s != 1`.
pub fn zeta_real(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole(1.0));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid(format!("zeta_real supports finite s > 0 (got {s})")));
    }
    // 1 - 2^(1-s), written to keep relative accuracy next to the pole
    let denom = -((1.0 - s) * std::f64::consts::LN_2).exp_m1();
    Ok(eta(s) / denom)
}
