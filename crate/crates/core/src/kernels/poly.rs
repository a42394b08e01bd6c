use std::f64::consts::{LN_2, PI};

use crate::error::{invalid, Result};

/// Exact binomial coefficient. Overflows past `n = 67`; callers stay far below that.
pub fn binomial_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> f64 {
    binomial_exact(n as u64, k as u64) as f64
}

/// `k * C(n, k) == (n + 1 - k) * C(n, k - 1)` in integer arithmetic, for `1 <= k <= n`.
///
/// This is the identity that cancels every `Log^k[eps]` coefficient when the
/// small circle around the branch point is shrunk to a point.
pub fn binomial_shift_identity(n: u64, k: u64) -> bool {
    assert!(1 <= k && k <= n, "identity is stated for 1 <= k <= n");
    u128::from(k) * binomial_exact(n, k) == u128::from(n + 1 - k) * binomial_exact(n, k - 1)
}

/// Coefficients (in `y`) of `Im[(y + i pi)^m] / pi`.
///
/// Only odd `j` in the binomial expansion contribute:
/// `sum_{j odd} C(m, j) (-1)^((j-1)/2) pi^(j-1) y^(m-j)`.
fn im_power_coeffs(m: usize) -> Vec<f64> {
    if m == 0 {
        return Vec::new();
    }
    let mut coeffs = vec![0.0; m];
    let mut j = 1;
    while j <= m {
        let sign = if (j - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[m - j] = sign * binomial(m, j) * PI.powi(j as i32 - 1);
        j += 2;
    }
    coeffs
}

fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

/// Dense polynomial in `w = Log[y+1] + Log[y-1]`; `coeffs[i]` multiplies `w^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialInW {
    pub coeffs: Vec<f64>,
}

impl PolynomialInW {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, w: f64) -> f64 {
        horner(&self.coeffs, w)
    }
}

/// The polynomial `p_n` with `sum_{k<n} U^(n-1-k) V^k = p_n(w)`, where
/// `U = w - i pi` and `V = w + i pi`.
///
/// The sum telescopes to `(V^n - U^n) / (V - U) = Im[V^n] / pi`, which is
/// expanded here in real arithmetic.
pub fn p_poly(n: usize) -> Result<PolynomialInW> {
    if n == 0 {
        return Err(invalid("p_n is defined for n >= 1"));
    }
    Ok(PolynomialInW {
        coeffs: im_power_coeffs(n),
    })
}

/// Coefficients in `L = Log[y+1]` of `f[n, k, y] / (2 pi i)`.
///
/// `f[n,k,y] = (i pi + L)^(n-k) - (-i pi + L)^(n-k) = 2i Im[(L + i pi)^(n-k)]`,
/// so the scaled value is real and the `Re(.)` wrapper is the identity.
pub fn f_real_poly(n: usize, k: usize) -> Result<Vec<f64>> {
    if k > n {
        return Err(invalid(format!("f[n,k,y] needs k <= n (got n={n}, k={k})")));
    }
    Ok(im_power_coeffs(n - k))
}

/// `f[n, k, y] / (2 pi i)` evaluated at `L = Log[y+1]`.
pub fn f_real(n: usize, k: usize, log_y1: f64) -> Result<f64> {
    Ok(horner(&f_real_poly(n, k)?, log_y1))
}

/// `(d/dy f[n, k, y]) / (2 pi i) = (n - k) f_real(n-1, k, Log[y+1]) / (y + 1)`.
pub fn f_real_dy(n: usize, k: usize, y: f64) -> Result<f64> {
    if k > n {
        return Err(invalid(format!("f[n,k,y] needs k <= n (got n={n}, k={k})")));
    }
    if !(y > -1.0) {
        return Err(invalid(format!("f[n,k,y] needs y > -1 (got {y})")));
    }
    if n == k {
        return Ok(0.0);
    }
    let inner = f_real(n - 1, k, (y + 1.0).ln())?;
    Ok((n - k) as f64 * inner / (y + 1.0))
}

/// `Re( (1/2pi) int_{-pi}^{pi} (Log 2 + i phi)^n dphi )`, in closed form.
///
/// Odd powers of `i phi` integrate to zero; even powers contribute
/// `(-1)^(j/2) pi^j / (j+1)`.
pub fn a1_term(n: usize) -> f64 {
    (0..=n)
        .step_by(2)
        .map(|j| {
            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, j) * LN_2.powi((n - j) as i32) * PI.powi(j as i32) / (j + 1) as f64
        })
        .sum()
}
