use crate::error::{invalid, Result};
use crate::kernels::EULER_GAMMA;

const MAX_ITER: usize = 500;
const TINY: f64 = 1e-300;

/// `e^z E_1(z)`, finite for every `z > 0` (no overflow for large `z`).
pub fn scaled_exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid(format!("E1 needs finite z > 0 (got {z})")));
    }
    if z <= 1.0 {
        Ok(z.exp() * e1_series(z))
    } else {
        Ok(e1_scaled_continued_fraction(z))
    }
}

/// Exponential integral `E_1(z) = int_z^inf e^-t / t dt` for `z > 0`.
///
/// Power series up to `z = 1`, modified Lentz continued fraction beyond.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid(format!("E1 needs finite z > 0 (got {z})")));
    }
    if z <= 1.0 {
        Ok(e1_series(z))
    } else {
        Ok(e1_scaled_continued_fraction(z) * (-z).exp())
    }
}

fn e1_series(z: f64) -> f64 {
    // -gamma - ln z + sum_{k>=1} (-1)^(k+1) z^k / (k k!)
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -z / kf;
        let add = -term / kf;
        sum += add;
        if add.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - z.ln() + sum
}

fn e1_scaled_continued_fraction(z: f64) -> f64 {
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
