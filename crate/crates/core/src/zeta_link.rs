//! The arithmetic side: the multiplicative weights `a`, `b`, the coefficients
//! `c[s, j]`, the Bessel series `h(s) = sum_j c[s, j] K[s, 2 pi sqrt j]`, its
//! closed form through the completed zeta function, and the Taylor
//! coefficients of `h` at `s = 1/2`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::{Config, DEFAULT};
use crate::derivatives::k_jet;
use crate::error::{invalid, Error, Result};
use crate::jet::TaylorJet;
use crate::kernels::{gamma_real, zeta_real};
use crate::reference::bessel_k;

/// Prime factorization with ascending distinct primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Trial division; fine for the `j <= 10^6` used here.
    pub fn factor(mut j: u64) -> Result<Self> {
        if j == 0 {
            return Err(invalid("can only factor positive integers"));
        }
        let mut factors = Vec::new();
        let mut p = 2;
        while p * p <= j {
            if j % p == 0 {
                let mut e = 0;
                while j % p == 0 {
                    j /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if j > 1 {
            factors.push((j, 1));
        }
        Ok(Self { factors })
    }

    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

fn sigma1_prime_power(p: u64, e: u32) -> u64 {
    (p.pow(e + 1) - 1) / (p - 1)
}

fn a_prime_power(p: u64, e: u32) -> u64 {
    if p == 2 {
        1 << e
    } else {
        sigma1_prime_power(p, e)
    }
}

fn b_prime_power(p: u64, e: u32) -> u64 {
    match (p, e) {
        (_, 0) => 1,
        (2, _) => 0,
        _ => sigma1_prime_power(p, e),
    }
}

/// `a(2^m) = 2^m`, `a(p^e) = sigma_1(p^e)` for odd `p`, extended multiplicatively.
pub fn a_fn(j: u64) -> Result<u64> {
    Ok(FactoredInteger::factor(j)?
        .factors
        .iter()
        .map(|&(p, e)| a_prime_power(p, e))
        .product())
}

/// `b(2^m) = 0` for `m >= 1`, `b(p^e) = sigma_1(p^e)` for odd `p`, extended multiplicatively.
pub fn b_fn(j: u64) -> Result<u64> {
    Ok(FactoredInteger::factor(j)?
        .factors
        .iter()
        .map(|&(p, e)| b_prime_power(p, e))
        .product())
}

fn divisors(j: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= j {
        if j % d == 0 {
            small.push(d);
            if d * d != j {
                large.push(j / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `c[s, j] = sum_{d | j} a(d) b(j/d) (j / d^2)^(s/2)`, summed as written.
pub fn c_coeff(s: f64, j: u64) -> Result<f64> {
    if j == 0 {
        return Err(invalid("c[s, j] needs j >= 1"));
    }
    let mut acc = 0.0;
    for d in divisors(j) {
        let weight = a_fn(d)? * b_fn(j / d)?;
        if weight != 0 {
            let ratio = j as f64 / (d as f64 * d as f64);
            acc += weight as f64 * ratio.powf(0.5 * s);
        }
    }
    Ok(acc)
}

/// Jet at `s = 1/2` of `s -> c[s, p^e]`: each divisor `p^i` contributes
/// `a(p^i) b(p^(e-i)) p^((e - 2i) s / 2)`.
pub fn prime_power_c_jet(p: u64, e: u32, n_max: usize) -> TaylorJet {
    let log_p = (p as f64).ln();
    let mut jet = TaylorJet::constant(0.0, n_max);
    for i in 0..=e {
        let weight = (a_prime_power(p, i) * b_prime_power(p, e - i)) as f64;
        if weight == 0.0 {
            continue;
        }
        let rate = 0.5 * (f64::from(e) - 2.0 * f64::from(i)) * log_p;
        jet = jet.add(&TaylorJet::exponential(weight * (0.5 * rate).exp(), rate, n_max));
    }
    jet
}

/// Jet of `s -> c[s, j]` at `s = 1/2`, built as the product of prime-power jets.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientJet {
    pub j: u64,
    pub jet: TaylorJet,
}

impl CoefficientJet {
    pub fn new(j: u64, n_max: usize) -> Result<Self> {
        let factored = FactoredInteger::factor(j)?;
        let jet = factored
            .factors
            .iter()
            .fold(TaylorJet::constant(1.0, n_max), |acc, &(p, e)| {
                &acc * &prime_power_c_jet(p, e, n_max)
            });
        Ok(Self { j, jet })
    }
}

/// Completed zeta `pi^(-s/2) Gamma(s/2) zeta(s)` for real `s > 0`, `s != 1`.
pub fn zeta_star(s: f64) -> Result<f64> {
    let z = zeta_real(s)?;
    Ok(PI.powf(-0.5 * s) * gamma_real(0.5 * s) * z)
}

/// Fixed-tree pairwise sum; the result does not depend on how work was split.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

fn bessel_argument(j: u64) -> f64 {
    2.0 * PI * (j as f64).sqrt()
}

/// `sum_{j <= j_max} c[s, j] K[s, 2 pi sqrt j]`.
pub fn h_partial(s: f64, j_max: u64) -> Result<f64> {
    let terms: Vec<f64> = (1..=j_max)
        .into_par_iter()
        .map(|j| Ok(c_coeff(s, j)? * bessel_k(s, bessel_argument(j))?))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// `s(s+1) / (32 pi^2 sqrt 2) (2^(s/2) - 2^(-s/2)) (2^((s-1)/2) - 2^(-(s-1)/2)) zeta*(s) zeta*(s+1)`.
///
/// At `s = 1` the vanishing factor meets the pole of `zeta*(s)`; that point is
/// reported as a pole instead of being evaluated as a limit.
pub fn h_closed(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole(1.0));
    }
    if !(s > 0.0) {
        return Err(invalid(format!("h_closed supports s > 0 (got {s})")));
    }
    let prefactor = s * (s + 1.0) / (32.0 * PI * PI * 2f64.sqrt());
    let f1 = 2f64.powf(0.5 * s) - 2f64.powf(-0.5 * s);
    let f2 = 2f64.powf(0.5 * (s - 1.0)) - 2f64.powf(-0.5 * (s - 1.0));
    Ok(prefactor * f1 * f2 * zeta_star(s)? * zeta_star(s + 1.0)?)
}

/// Taylor coefficients (as derivatives) of `h` at `s = 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSeries {
    pub n_max: usize,
    pub j_max: u64,
    /// `per_j[j - 1][n]` is `alpha_n(j)`.
    pub per_j: Vec<Vec<f64>>,
    /// `alpha_n` summed over `j <= j_max`.
    pub totals: Vec<f64>,
    /// Geometric estimate of the discarded `j > j_max` tail, per order.
    pub tail_estimates: Vec<f64>,
}

/// `alpha_n(j)` for `n <= n_max`: entries of the product of the `c[., j]`
/// jet with the `K[., 2 pi sqrt j]` jet.
pub fn alpha_terms(j: u64, n_max: usize, tol: f64) -> Result<Vec<f64>> {
    let c = CoefficientJet::new(j, n_max)?;
    let k = k_jet(n_max, bessel_argument(j), tol)?;
    Ok((&c.jet * &k).values)
}

pub fn alpha_series(n_max: usize, j_max: u64, tol: f64) -> Result<AlphaSeries> {
    alpha_series_with(n_max, j_max, tol, &DEFAULT)
}

pub fn alpha_series_with(n_max: usize, j_max: u64, tol: f64, cfg: &Config) -> Result<AlphaSeries> {
    if n_max > cfg.max_alpha_order {
        return Err(invalid(format!(
            "alpha order {n_max} exceeds configured max {}",
            cfg.max_alpha_order
        )));
    }
    if j_max == 0 {
        return Err(invalid("alpha needs j_max >= 1"));
    }
    let per_j: Vec<Vec<f64>> = (1..=j_max)
        .into_par_iter()
        .map(|j| alpha_terms(j, n_max, tol))
        .collect::<Result<_>>()?;

    // successive terms shrink roughly like exp(-pi / sqrt j)
    let ratio = (-PI / (j_max as f64).sqrt()).exp();
    let mut totals = Vec::with_capacity(n_max + 1);
    let mut tail_estimates = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let column: Vec<f64> = per_j.iter().map(|row| row[n]).collect();
        totals.push(pairwise_sum(&column));
        let last = column.iter().rev().take(3).fold(0.0f64, |m, v| m.max(v.abs()));
        tail_estimates.push(last * ratio / (1.0 - ratio));
    }
    Ok(AlphaSeries {
        n_max,
        j_max,
        per_j,
        totals,
        tail_estimates,
    })
}

/// `alpha_n = sum_{j <= j_max} alpha_n(j)` at the default tolerance.
pub fn alpha_coeff(n: usize, j_max: u64) -> Result<f64> {
    Ok(alpha_series(n, j_max, DEFAULT.quad_tol)?.totals[n])
}
