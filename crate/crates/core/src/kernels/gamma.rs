use crate::error::Result;

use super::zeta::zeta_real;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gamma function for real arguments.
pub fn gamma_real(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Derivatives `Gamma^(n)(1)` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaJet {
    pub values: Vec<f64>,
}

impl GammaJet {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Builds the jet from `log Gamma(1+z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k`
/// by exponentiating the power series.
pub fn gamma_derivs_at_one(n_max: usize) -> Result<GammaJet> {
    let mut log_coeffs = vec![0.0; n_max + 1];
    if n_max >= 1 {
        log_coeffs[1] = -EULER_GAMMA;
    }
    for (k, c) in log_coeffs.iter_mut().enumerate().skip(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *c = sign * zeta_real(k as f64)? / k as f64;
    }

    // exp of a series with zero constant term: n e_n = sum_{k=1}^n k l_k e_{n-k}
    let mut exp_coeffs = vec![0.0; n_max + 1];
    exp_coeffs[0] = 1.0;
    for n in 1..=n_max {
        let acc: f64 = (1..=n)
            .map(|k| k as f64 * log_coeffs[k] * exp_coeffs[n - k])
            .sum();
        exp_coeffs[n] = acc / n as f64;
    }

    let mut factorial = 1.0;
    let values = exp_coeffs
        .iter()
        .enumerate()
        .map(|(n, &e)| {
            if n > 0 {
                factorial *= n as f64;
            }
            e * factorial
        })
        .collect();
    Ok(GammaJet { values })
}

/// `2 Gamma''(1) - 2 Gamma'(1)^2 - 2 zeta(2)`, which vanishes identically.
pub fn gamma_cancellation_residual(jet: &GammaJet) -> Result<f64> {
    let g1 = jet.values[1];
    let g2 = jet.values[2];
    Ok(2.0 * g2 - 2.0 * g1 * g1 - 2.0 * zeta_real(2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assert_rel;
    use std::f64::consts::PI;

    /// psi(1) = psi(N+1) - H_N with the asymptotic series for psi(N+1).
    fn digamma_one_euler_maclaurin(n: usize) -> f64 {
        let z = (n + 1) as f64;
        let bernoulli_terms = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0];
        let mut psi = z.ln() - 0.5 / z;
        for (i, &c) in bernoulli_terms.iter().enumerate() {
            psi -= c / z.powi(2 * (i as i32 + 1));
        }
        let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        psi - harmonic
    }

    #[test]
    fn low_orders() {
        let jet = gamma_derivs_at_one(4).unwrap();
        assert_eq!(jet.values[0], 1.0);
        assert_rel!(jet.values[1], digamma_one_euler_maclaurin(40), 1e-14);
        assert_rel!(jet.values[2], 1.978_111_990_655_945_1, 1e-14);
        // mpmath.diff(gamma, 1, 3), mpmath.diff(gamma, 1, 4)
        assert_rel!(jet.values[3], -5.444_874_456_485_317_7, 1e-13);
        assert_rel!(jet.values[4], 23.561_474_084_025_604, 1e-12);
        assert_eq!(gamma_derivs_at_one(0).unwrap().values, vec![1.0]);
    }

    #[test]
    fn second_derivative_is_gamma_squared_plus_zeta2() {
        let jet = gamma_derivs_at_one(2).unwrap();
        let expected = EULER_GAMMA * EULER_GAMMA + PI * PI / 6.0;
        assert_rel!(jet.values[2], expected, 1e-15);
        assert!(gamma_cancellation_residual(&jet).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn jet_matches_finite_differences_of_gamma() {
        let jet = gamma_derivs_at_one(2).unwrap();
        let h = 1e-4;
        let d1 = (gamma_real(1.0 + h) - gamma_real(1.0 - h)) / (2.0 * h);
        let d2 = (gamma_real(1.0 + h) - 2.0 + gamma_real(1.0 - h)) / (h * h);
        assert_rel!(jet.values[1], d1, 1e-7);
        assert_rel!(jet.values[2], d2, 1e-6);
    }

    #[test]
    fn gamma_real_spot_values() {
        assert_rel!(gamma_real(0.5), PI.sqrt(), 1e-15);
        assert_rel!(gamma_real(0.25), 3.625_609_908_221_908_3, 1e-15);
        assert_rel!(gamma_real(5.0), 24.0, 1e-15);
    }
}
