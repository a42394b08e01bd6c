//! Order derivatives of `T[s, x]` and `K[s, x]` at `s = 1/2`.
//!
//! The n-th derivative of the kernel is `(-1)^n T[1/2, x] (A1 + A2 + A3 + A4)`
//! where `A1` is a polynomial in `pi` and `Log 2` and `A2..A4` are finite
//! linear combinations of `U[a, b, eps](x)`. The combinations are built once
//! per order as coefficient maps and then integrated.

use std::f64::consts::{LN_2, PI};

use crate::config::{Config, DEFAULT};
use crate::error::{invalid, Result};
use crate::jet::TaylorJet;
use crate::kernels::{
    a1_term, binomial, f_real_poly, gamma_derivs_at_one, p_poly, zeta_real, EULER_GAMMA,
};
use crate::quadrature::{
    damped_log_poly_integral, scaled_exp_integral_e1, u_integral, CoeffMap, QuadratureSpec,
};

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("x must be finite and > 0 (got {x})")));
    }
    Ok(())
}

fn check_order(n: usize, cfg: &Config) -> Result<()> {
    if n > cfg.max_order {
        return Err(invalid(format!("order {n} exceeds configured max {}", cfg.max_order)));
    }
    Ok(())
}

/// `T[1/2, x] = (pi/2) e^{-x}`.
pub fn t_half(x: f64) -> f64 {
    0.5 * PI * (-x).exp()
}

/// `K[1/2, x] = sqrt(pi / 2x) e^{-x}`.
pub fn k_half(x: f64) -> f64 {
    (PI / (2.0 * x)).sqrt() * (-x).exp()
}

/// `int_0^inf e^{-u} du / (u + 2x) = U[0,0,1](x) = e^{2x} E1(2x)`.
fn first_order_integral(x: f64) -> Result<f64> {
    scaled_exp_integral_e1(2.0 * x)
}

/// First derivative of `T` at `s = 1/2`:
/// `(int_0^inf e^{-u}/(u+2x) du + Log x - Gamma'(1) - Log 2) T[1/2, x]`.
pub fn t_deriv1(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok((first_order_integral(x)? + x.ln() + EULER_GAMMA - LN_2) * t_half(x))
}

/// First derivative of `K` at `s = 1/2`: `K[1/2, x] e^{2x} E1(2x)`.
pub fn k_deriv1(x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(k_half(x) * first_order_integral(x)?)
}

/// The order-`n` decomposition before any quadrature.
///
/// `a3` is the `eps = 0` map still to be multiplied by `x`; `a2` and `a4`
/// are `eps = 1` maps.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Maps {
    pub n: usize,
    pub a1: f64,
    pub a2: CoeffMap,
    pub a3: CoeffMap,
    pub a4: CoeffMap,
}

fn accumulate(map: &mut CoeffMap, a: usize, b: usize, c: f64) {
    if c != 0.0 {
        *map.entry((a as u32, b as u32)).or_insert(0.0) += c;
    }
}

/// Builds `A1` and the coefficient maps of `A2`, `A3`, `A4` for order `n >= 1`.
///
/// The `Re(.)` wrappers of the `f`-terms are dropped: `f[n,k,y] / (2 pi i)`
/// is `Im[(L + i pi)^(n-k)] / pi`, already real.
pub fn theorem2_maps(n: usize) -> Result<Theorem2Maps> {
    if n == 0 {
        return Err(invalid("the decomposition is stated for n >= 1"));
    }

    // A2 = -int e^{-xu} p_n(Log[u+2] + Log[u]) du / (u+2)
    let mut a2 = CoeffMap::new();
    for (m, &c) in p_poly(n)?.coeffs.iter().enumerate() {
        for i in 0..=m {
            accumulate(&mut a2, i, m - i, -c * binomial(m, i));
        }
    }

    // A3 = x sum_k C(n,k) int e^{-xu} f(n,k,L) Log^{k+1}[u] / (k+1), L = Log[u+2]
    // A4 = -sum_k C(n,k) int e^{-xu} (n-k) f(n-1,k,L) / (u+2) Log^{k+1}[u] / (k+1)
    let mut a3 = CoeffMap::new();
    let mut a4 = CoeffMap::new();
    for k in 0..n {
        let weight = binomial(n, k) / (k + 1) as f64;
        for (a, &c) in f_real_poly(n, k)?.iter().enumerate() {
            accumulate(&mut a3, a, k + 1, weight * c);
        }
        for (a, &c) in f_real_poly(n - 1, k)?.iter().enumerate() {
            accumulate(&mut a4, a, k + 1, -weight * (n - k) as f64 * c);
        }
    }

    Ok(Theorem2Maps {
        n,
        a1: a1_term(n),
        a2,
        a3,
        a4,
    })
}

/// The four pieces of the bracket at one `(n, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Terms {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    /// Absolute error bound on the bracket from the three quadratures.
    pub abs_error_estimate: f64,
}

impl Theorem2Terms {
    pub fn bracket(&self) -> f64 {
        self.a1 + self.a2 + self.a3 + self.a4
    }
}

pub fn theorem2_terms(n: usize, x: f64, tol: f64) -> Result<Theorem2Terms> {
    check_x(x)?;
    check_order(n, &DEFAULT)?;
    let maps = theorem2_maps(n)?;
    let a2 = damped_log_poly_integral(&maps.a2, 1, x, tol)?;
    let a3 = damped_log_poly_integral(&maps.a3, 0, x, tol)?;
    let a4 = damped_log_poly_integral(&maps.a4, 1, x, tol)?;
    Ok(Theorem2Terms {
        a1: maps.a1,
        a2: a2.value,
        a3: x * a3.value,
        a4: a4.value,
        abs_error_estimate: a2.abs_error_estimate
            + x * a3.abs_error_estimate
            + a4.abs_error_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// `d^n/ds^n T[s, x]` at `s = 1/2` for `1 <= n <= max_order`, with its
/// quadrature error bound.
pub fn t_deriv_n_estimate(n: usize, x: f64, tol: f64) -> Result<DerivativeValue> {
    if n == 0 {
        return Err(invalid("t_deriv_n needs n >= 1; use t_half for n = 0"));
    }
    let terms = theorem2_terms(n, x, tol)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = t_half(x);
    Ok(DerivativeValue {
        value: sign * prefactor * terms.bracket(),
        abs_error_estimate: prefactor * terms.abs_error_estimate,
    })
}

/// `d^n/ds^n T[s, x]` at `s = 1/2` by the `A1..A4` assembly.
pub fn t_deriv_n(n: usize, x: f64, tol: f64) -> Result<f64> {
    t_deriv_n_estimate(n, x, tol).map(|d| d.value)
}

fn u(a: u32, b: u32, eps: u32, x: f64, tol: f64) -> Result<f64> {
    Ok(u_integral(QuadratureSpec::new(a, b, eps, x)?, tol)?.value)
}

/// Second derivative of `T` from the hand-simplified bracket:
/// `Log^2 2 - 2 zeta(2) - 2 U[1,0,1] - 4 U[0,1,1] + 2x U[1,1,0] + x U[0,2,0]`.
pub fn t_deriv2_explicit(x: f64, tol: f64) -> Result<f64> {
    check_x(x)?;
    let bracket = LN_2 * LN_2 - 2.0 * zeta_real(2.0)? - 2.0 * u(1, 0, 1, x, tol)?
        - 4.0 * u(0, 1, 1, x, tol)?
        + 2.0 * x * u(1, 1, 0, x, tol)?
        + x * u(0, 2, 0, x, tol)?;
    Ok(t_half(x) * bracket)
}

/// Jet of `T[., x]` at `s = 1/2` through order `n_max`, plus per-entry error bounds.
pub fn t_jet(n_max: usize, x: f64, tol: f64) -> Result<(TaylorJet, Vec<f64>)> {
    check_x(x)?;
    check_order(n_max, &DEFAULT)?;
    let mut values = vec![t_half(x)];
    let mut errors = vec![0.0];
    for n in 1..=n_max {
        let d = t_deriv_n_estimate(n, x, tol)?;
        values.push(d.value);
        errors.push(d.abs_error_estimate);
    }
    Ok((TaylorJet::new(values), errors))
}

/// Jet of `(1/sqrt pi) (2/x)^s Gamma(s + 1/2)` at `s = 1/2`.
pub fn k_prefactor_jet(n_max: usize, x: f64) -> Result<TaylorJet> {
    let log_ratio = (2.0 / x).ln();
    let power = TaylorJet::exponential((2.0 / x).sqrt(), log_ratio, n_max);
    let gamma = TaylorJet::new(gamma_derivs_at_one(n_max)?.values);
    Ok((&power * &gamma).scale(1.0 / PI.sqrt()))
}

/// Jet of `K[., x]` at `s = 1/2`: the Leibniz product of the `(2/x)^s`,
/// `Gamma(s + 1/2)` and `T[s, x]` jets, scaled by `1/sqrt(pi)`.
pub fn k_jet(n_max: usize, x: f64, tol: f64) -> Result<TaylorJet> {
    let (t, _) = t_jet(n_max, x, tol)?;
    Ok(&k_prefactor_jet(n_max, x)? * &t)
}

/// [`k_jet`] together with a propagated absolute error bound per entry.
pub fn k_jet_estimate(n_max: usize, x: f64, tol: f64) -> Result<(TaylorJet, Vec<f64>)> {
    let (t, t_err) = t_jet(n_max, x, tol)?;
    let pre = k_prefactor_jet(n_max, x)?;
    let err = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|m| binomial(n, m) * pre.values[n - m].abs() * t_err[m])
                .sum()
        })
        .collect();
    Ok((&pre * &t, err))
}

/// `K''/K` at `s = 1/2` split into the Gamma group
/// `2 Gamma''(1) - 2 Gamma'(1)^2 - 2 zeta(2)` (zero) and everything else.
///
/// The group collects `Gamma''/Gamma`, the `-Gamma'(1)` part of `T'/T` inside
/// `2 (Gamma'/Gamma)(T'/T)`, and the `Gamma''(1)` and `-2 zeta(2)` parts of
/// `T''/T` (through `x U[0,2,0] = Gamma''(1) - 2 Log x Gamma'(1) + Log^2 x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSecondLogDerivative {
    pub gamma_group: f64,
    pub remainder: f64,
}

impl KSecondLogDerivative {
    pub fn total(&self) -> f64 {
        self.gamma_group + self.remainder
    }
}

pub fn k_second_log_derivative(x: f64, tol: f64) -> Result<KSecondLogDerivative> {
    check_x(x)?;
    let gamma = gamma_derivs_at_one(2)?;
    let (g1, g2) = (gamma.values[1], gamma.values[2]);
    let zeta2 = zeta_real(2.0)?;
    let l = (2.0 / x).ln();
    let lx = x.ln();
    let u001 = u(0, 0, 1, x, tol)?;
    // T'/T = U[0,0,1] - l - Gamma'(1)
    let t1 = u001 - l - g1;
    let t2_rest = LN_2 * LN_2 - 2.0 * u(1, 0, 1, x, tol)? - 4.0 * u(0, 1, 1, x, tol)?
        + 2.0 * x * u(1, 1, 0, x, tol)?
        - 2.0 * lx * g1
        + lx * lx;

    let gamma_group = 2.0 * g2 - 2.0 * g1 * g1 - 2.0 * zeta2;
    // S''/S + T''/T remainder + 2 (S'/S Gamma' + S'/S T'/T + Gamma' (T'/T + Gamma'))
    let remainder = l * l + t2_rest + 2.0 * (l * g1 + l * t1 + g1 * (u001 - l));
    Ok(KSecondLogDerivative {
        gamma_group,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assert_rel;
    use crate::reference::{bessel_k, fd_order_derivative, OrderDerivativeRequest, Target};

    const TOL: f64 = 1e-12;
    const GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0];

    #[test]
    fn half_order_values() {
        assert_rel!(t_half(1.0), 0.577_863_674_895_460_86, 1e-15);
        assert_rel!(t_half(0.5), 0.952_736_132_365_089_97, 1e-15);
        assert_rel!(k_half(1.0), 0.461_068_504_447_894_56, 1e-15);
        let decay: Vec<f64> = (0..50).map(|i| t_half(i as f64)).collect();
        assert!(decay.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn first_derivatives() {
        assert_rel!(k_deriv1(1.0).unwrap(), 0.166_597_245_002_879_04, 1e-13);
        assert_rel!(t_deriv1(1.0).unwrap(), 0.141_806_070_725_351_5, 1e-13);
        assert_rel!(t_deriv1(0.5).unwrap(), -0.202_676_828_288_144_82, 1e-13);
        let x = 10.0;
        let d = t_deriv1(x).unwrap();
        let leading = (1.0 / (2.0 * x) + x.ln() + EULER_GAMMA - LN_2) * t_half(x);
        assert!(d > 0.0);
        assert_rel!(d, leading, 1e-2);
        assert!(k_deriv1(30.0).unwrap() < k_half(30.0) / 60.0);
        assert!(t_deriv1(0.0).is_err());
    }

    #[test]
    fn first_order_maps_reduce_by_hand() {
        let maps = theorem2_maps(1).unwrap();
        assert_rel!(maps.a1, LN_2, 1e-15);
        assert_eq!(maps.a2, [((0, 0), -1.0)].into_iter().collect());
        assert_eq!(maps.a3, [((0, 1), 1.0)].into_iter().collect());
        assert!(maps.a4.is_empty());
    }

    #[test]
    fn second_order_maps_match_simplified_bracket() {
        let maps = theorem2_maps(2).unwrap();
        let mut eps1 = maps.a2.clone();
        for (k, v) in &maps.a4 {
            *eps1.entry(*k).or_insert(0.0) += v;
        }
        assert_eq!(eps1, [((1, 0), -2.0), ((0, 1), -4.0)].into_iter().collect());
        assert_eq!(maps.a3, [((1, 1), 2.0), ((0, 2), 1.0)].into_iter().collect());
    }

    #[test]
    fn general_assembly_reduces_to_first_derivative() {
        for &x in &GRID {
            let d = t_deriv1(x).unwrap();
            assert_rel!(t_deriv_n(1, x, TOL).unwrap(), d, 1e-11);
        }
    }

    #[test]
    fn general_assembly_matches_explicit_second_derivative() {
        for &x in &GRID {
            assert_rel!(t_deriv_n(2, x, TOL).unwrap(), t_deriv2_explicit(x, TOL).unwrap(), 1e-10);
        }
    }

    #[test]
    fn agrees_with_finite_differences() {
        for n in 1..=4 {
            for &x in &[0.5, 1.0, 2.0, 5.0] {
                let fd = fd_order_derivative(OrderDerivativeRequest::new(n, x, Target::Kernel))
                    .unwrap();
                assert_rel!(t_deriv_n(n, x, TOL).unwrap(), fd, 1e-6);
            }
        }
    }

    #[test]
    fn higher_orders_against_frozen_values() {
        // d^n/ds^n of sqrt(pi) (x/2)^s K_s(x) / Gamma(s + 1/2), mpmath at 30 digits
        let cases = [
            (3, 1.0, 0.942_956_953_129_137_72),
            (4, 1.0, -1.203_510_106_357_680_7),
            (4, 0.5, -7.689_695_064_652_404_3),
            (3, 5.0, -0.006_022_952_075_061_445),
        ];
        for (n, x, expected) in cases {
            assert_rel!(t_deriv_n(n, x, TOL).unwrap(), expected, 1e-11);
        }
    }

    #[test]
    fn orders_five_and_six_against_finite_differences() {
        for n in 5..=6 {
            let fd =
                fd_order_derivative(OrderDerivativeRequest::new(n, 1.0, Target::Kernel)).unwrap();
            assert_rel!(t_deriv_n(n, 1.0, TOL).unwrap(), fd, 1e-4);
        }
    }

    #[test]
    fn bracket_is_the_ratio_to_the_prefactor() {
        for &x in &[0.5, 3.0, 20.0] {
            let terms = theorem2_terms(3, x, TOL).unwrap();
            let d = t_deriv_n(3, x, TOL).unwrap();
            assert_rel!(-d / t_half(x), terms.bracket(), 1e-14);
            assert!(terms.bracket().is_finite());
        }
    }

    #[test]
    fn k_jet_entries() {
        let jet = k_jet(4, 1.0, TOL).unwrap();
        assert_rel!(jet.values[0], 0.461_068_504_447_894_56, 1e-14);
        assert_rel!(jet.values[0], bessel_k(0.5, 1.0).unwrap(), 1e-13);
        assert_rel!(jet.values[1], k_deriv1(1.0).unwrap(), 1e-10);
        for n in 2..=4 {
            let fd =
                fd_order_derivative(OrderDerivativeRequest::new(n, 1.0, Target::BesselK)).unwrap();
            assert_rel!(jet.values[n], fd, 1e-6);
        }
        assert_rel!(jet.values[2], 0.385_783_822_562_964_73, 1e-10);
    }

    #[test]
    fn gamma_group_cancels_in_second_log_derivative() {
        for &x in &[0.5, 1.0, 4.0] {
            let parts = k_second_log_derivative(x, TOL).unwrap();
            assert!(parts.gamma_group.abs() <= 1e-12);
            let jet = k_jet(2, x, TOL).unwrap();
            assert_rel!(parts.total(), jet.values[2] / jet.values[0], 1e-11);
            assert_rel!(parts.remainder, jet.values[2] / jet.values[0], 1e-11);
        }
    }

    #[test]
    fn order_limits() {
        assert!(t_deriv_n(0, 1.0, TOL).is_err());
        assert!(t_deriv_n(7, 1.0, TOL).is_err());
        assert!(k_jet(7, 1.0, TOL).is_err());
        assert!(t_deriv_n(2, -1.0, TOL).is_err());
        assert_eq!(k_jet(0, 1.0, TOL).unwrap().order(), 0);
    }
}
