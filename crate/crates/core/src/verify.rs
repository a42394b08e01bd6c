//! Named oracle-vs-formula checks grouped into suites.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivatives::{
    k_deriv1, k_half, k_jet, k_second_log_derivative, t_deriv1, t_deriv2_explicit, t_deriv_n,
    t_half,
};
use crate::error::{invalid, Result};
use crate::kernels::{
    a1_term, binomial_exact, f_real, gamma_cancellation_residual, gamma_derivs_at_one, p_poly,
    zeta_real, EULER_GAMMA,
};
use crate::quadrature::{exp_integral_e1, scaled_exp_integral_e1, u_integral, QuadratureSpec};
use crate::reference::{fd_order_derivative, richardson_derivative, OrderDerivativeRequest, Target};
use crate::zeta_link::{alpha_series, c_coeff, h_closed, h_partial};
use crate::config::DEFAULT;

/// The `x` grid shared by the first-derivative and quadrature checks.
pub const X_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0];
/// The smaller grid used against finite differences of order `>= 2`.
pub const FD_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const H_IDENTITY_S: [f64; 5] = [1.5, 2.0, 2.5, 3.0, 4.0];

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// `pass` iff `rel_diff <= tol`, or `abs_diff <= tol` when `rhs == 0`.
    pub fn new(check_id: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_diff = (lhs - rhs).abs();
        let rel_diff = if rhs == 0.0 { abs_diff } else { abs_diff / rhs.abs() };
        let pass = if rhs == 0.0 { abs_diff <= tol } else { rel_diff <= tol };
        Self {
            check_id: check_id.into(),
            lhs,
            rhs,
            abs_diff,
            rel_diff,
            tol,
            pass,
        }
    }

    fn badness(&self) -> f64 {
        if self.rel_diff.is_nan() {
            f64::INFINITY
        } else if self.tol > 0.0 {
            self.rel_diff / self.tol
        } else {
            self.rel_diff
        }
    }
}

/// Collapses a sweep into its worst point, relabelled with `check_id`.
fn worst(check_id: &str, reports: Vec<VerificationReport>) -> VerificationReport {
    let mut worst = reports
        .into_iter()
        .max_by(|a, b| a.badness().total_cmp(&b.badness()))
        .expect("sweeps are non-empty");
    worst.check_id = check_id.to_string();
    worst
}

fn sweep<T: Copy>(
    check_id: &str,
    points: &[T],
    mut check: impl FnMut(T) -> Result<VerificationReport>,
) -> Result<VerificationReport> {
    let reports = points.iter().map(|&p| check(p)).collect::<Result<Vec<_>>>()?;
    Ok(worst(check_id, reports))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kernels,
    Quadrature,
    Theorem1,
    Theorem2,
    Zeta,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Kernels,
        Suite::Quadrature,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Zeta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kernels => "kernels",
            Suite::Quadrature => "quadrature",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Zeta => "zeta",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kernels" => Suite::Kernels,
            "quadrature" => Suite::Quadrature,
            "theorem1" => Suite::Theorem1,
            "theorem2" => Suite::Theorem2,
            "zeta" => Suite::Zeta,
            "all" => Suite::All,
            other => return Err(invalid(format!("unknown suite {other:?}"))),
        })
    }
}

/// Runs one suite (or all of them, in a fixed order). `Err` means the
/// machinery itself failed, as opposed to a check not passing.
pub fn run_suite(suite: Suite, tol: f64) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Kernels => kernels_suite(),
        Suite::Quadrature => quadrature_suite(tol),
        Suite::Theorem1 => theorem1_suite(),
        Suite::Theorem2 => theorem2_suite(tol),
        Suite::Zeta => zeta_suite(tol),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::ALL {
                all.extend(run_suite(s, tol)?);
            }
            Ok(all)
        }
    }
}

#[derive(Clone, Copy)]
struct Complex(f64, f64);

impl Complex {
    fn mul(self, o: Complex) -> Complex {
        Complex(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }

    fn powi(self, n: usize) -> Complex {
        (0..n).fold(Complex(1.0, 0.0), |acc, _| acc.mul(self))
    }
}

/// `sum_{k<n} U^(n-1-k) V^k` with `U = w - i pi`, `V = w + i pi`, in complex arithmetic.
fn uv_sum(n: usize, w: f64) -> f64 {
    let u = Complex(w, -PI);
    let v = Complex(w, PI);
    let mut acc = Complex(0.0, 0.0);
    for k in 0..n {
        let t = u.powi(n - 1 - k).mul(v.powi(k));
        acc = Complex(acc.0 + t.0, acc.1 + t.1);
    }
    acc.0
}

/// Romberg integration of a smooth function on `[a, b]`.
fn romberg(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut rows: Vec<f64> = vec![0.5 * (b - a) * (f(a) + f(b))];
    for level in 1..16 {
        let n = 1usize << level;
        let h = (b - a) / n as f64;
        let mid: f64 = (1..n).step_by(2).map(|i| f(a + i as f64 * h)).sum();
        let mut row = vec![0.5 * rows[0] + h * mid];
        let mut factor = 1.0;
        for m in 1..=level {
            factor *= 4.0;
            let v = row[m - 1] + (row[m - 1] - rows[m - 1]) / (factor - 1.0);
            row.push(v);
        }
        let done = (row[level] - rows[level - 1]).abs() <= 1e-15 * row[level].abs().max(1e-300);
        rows = row;
        if done && level > 4 {
            break;
        }
    }
    *rows.last().unwrap()
}

fn kernels_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);

    let ws: Vec<f64> = (0..100).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let mut reports = Vec::new();
    for n in 1..=12 {
        let p = p_poly(n)?;
        for &w in &ws {
            reports.push(VerificationReport::new("", p.eval(w), uv_sum(n, w), 1e-11));
        }
    }
    out.push(worst("p_poly_direct_sum", reports));

    let mut reports = Vec::new();
    for n in 0..=10 {
        for k in 0..=n {
            for _ in 0..10 {
                let l: f64 = rng.gen_range(0.0..5.0);
                let plus = Complex(l, PI).powi(n - k);
                let minus = Complex(l, -PI).powi(n - k);
                // (plus - minus) / (2 pi i) is real: Im part difference over 2 pi
                let direct = (plus.1 - minus.1) / (2.0 * PI);
                reports.push(VerificationReport::new("", f_real(n, k, l)?, direct, 1e-11));
            }
        }
    }
    out.push(worst("f_real_complex", reports));

    let mut reports = Vec::new();
    for n in 0..=8 {
        let quad = romberg(
            |phi| Complex(LN_2, phi).powi(n).0 / (2.0 * PI),
            -PI,
            PI,
        );
        reports.push(VerificationReport::new("", a1_term(n), quad, 1e-10));
    }
    out.push(worst("a1_quadrature", reports));

    let jet = gamma_derivs_at_one(2)?;
    out.push(VerificationReport::new(
        "gamma_cancellation",
        gamma_cancellation_residual(&jet)?,
        0.0,
        1e-12,
    ));
    out.push(VerificationReport::new(
        "gamma_prime_one",
        jet.values[1],
        -EULER_GAMMA,
        1e-15,
    ));

    let mut max_gap = 0.0f64;
    for n in 1..=30u64 {
        for k in 1..=n {
            let lhs = u128::from(k) * binomial_exact(n, k);
            let rhs = u128::from(n + 1 - k) * binomial_exact(n, k - 1);
            max_gap = max_gap.max(lhs.abs_diff(rhs) as f64);
        }
    }
    out.push(VerificationReport::new("binomial_identity", max_gap, 0.0, 0.0));

    out.push(VerificationReport::new("zeta_s2", zeta_real(2.0)?, PI * PI / 6.0, 1e-13));
    out.push(VerificationReport::new("zeta_s4", zeta_real(4.0)?, PI.powi(4) / 90.0, 1e-13));
    Ok(out)
}

fn u_value(a: u32, b: u32, eps: u32, x: f64, tol: f64) -> Result<f64> {
    Ok(u_integral(QuadratureSpec::new(a, b, eps, x)?, tol)?.value)
}

fn quadrature_suite(tol: f64) -> Result<Vec<VerificationReport>> {
    let jet = gamma_derivs_at_one(2)?;
    let (g1, g2) = (jet.values[1], jet.values[2]);
    Ok(vec![
        sweep("u000_reciprocal", &X_GRID, |x| {
            Ok(VerificationReport::new("", u_value(0, 0, 0, x, tol)?, 1.0 / x, 1e-10))
        })?,
        sweep("u001_exp_integral", &X_GRID, |x| {
            let closed = scaled_exp_integral_e1(2.0 * x)?;
            Ok(VerificationReport::new("", u_value(0, 0, 1, x, tol)?, closed, 1e-10))
        })?,
        sweep("u010_log_identity", &X_GRID, |x| {
            let lhs = x * u_value(0, 1, 0, x, tol)?;
            Ok(VerificationReport::new("", lhs, g1 - x.ln(), 1e-10))
        })?,
        sweep("u020_log_identity", &X_GRID, |x| {
            let lx = x.ln();
            let lhs = x * u_value(0, 2, 0, x, tol)?;
            Ok(VerificationReport::new("", lhs, g2 - 2.0 * lx * g1 + lx * lx, 1e-10))
        })?,
    ])
}

fn theorem1_suite() -> Result<Vec<VerificationReport>> {
    Ok(vec![
        sweep("thm1_fd", &X_GRID, |x| {
            let fd = fd_order_derivative(OrderDerivativeRequest::new(1, x, Target::Kernel))?;
            Ok(VerificationReport::new("", t_deriv1(x)?, fd, 1e-7))
        })?,
        sweep("thm1_closed", &X_GRID, |x| {
            let integral = (2.0 * x).exp() * exp_integral_e1(2.0 * x)?;
            let closed = (integral + x.ln() + EULER_GAMMA - LN_2) * 0.5 * PI * (-x).exp();
            Ok(VerificationReport::new("", t_deriv1(x)?, closed, 1e-11))
        })?,
        sweep("k_deriv1_fd", &X_GRID, |x| {
            let fd = fd_order_derivative(OrderDerivativeRequest::new(1, x, Target::BesselK))?;
            Ok(VerificationReport::new("", k_deriv1(x)?, fd, 1e-7))
        })?,
        sweep("k_half_closed", &X_GRID, |x| {
            let reference = crate::reference::bessel_k(0.5, x)?;
            Ok(VerificationReport::new("", k_half(x), reference, 1e-12))
        })?,
    ])
}

fn theorem2_suite(tol: f64) -> Result<Vec<VerificationReport>> {
    let mut out = vec![
        sweep("thm2_n1_equals_thm1", &X_GRID, |x| {
            Ok(VerificationReport::new("", t_deriv_n(1, x, tol)?, t_deriv1(x)?, 1e-11))
        })?,
        sweep("thm2_n2_explicit", &X_GRID, |x| {
            Ok(VerificationReport::new("", t_deriv_n(2, x, tol)?, t_deriv2_explicit(x, tol)?, 1e-9))
        })?,
    ];
    for n in 2..=4 {
        out.push(sweep(&format!("thm2_fd_n{n}"), &FD_GRID, |x| {
            let fd = fd_order_derivative(OrderDerivativeRequest::new(n, x, Target::Kernel))?;
            Ok(VerificationReport::new("", t_deriv_n(n, x, tol)?, fd, 1e-5))
        })?);
    }
    out.push(sweep("k_jet_fd_n2", &FD_GRID, |x| {
        let fd = fd_order_derivative(OrderDerivativeRequest::new(2, x, Target::BesselK))?;
        Ok(VerificationReport::new("", k_jet(2, x, tol)?.values[2], fd, 1e-6))
    })?);
    out.push(sweep("gamma_group_term_level", &FD_GRID, |x| {
        Ok(VerificationReport::new("", k_second_log_derivative(x, tol)?.gamma_group, 0.0, 1e-12))
    })?);
    out.push(sweep("t_half_closed", &X_GRID, |x| {
        Ok(VerificationReport::new("", t_half(x), crate::reference::t_kernel(0.5, x)?, 1e-12))
    })?);
    Ok(out)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// 200 coprime pairs `(j1, j2)` with both entries in `1..=500`, from a fixed seed.
pub fn coprime_pairs(count: usize, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let j1 = rng.gen_range(1..=500u64);
        let j2 = rng.gen_range(1..=500u64);
        if gcd(j1, j2) == 1 {
            pairs.push((j1, j2));
        }
    }
    pairs
}

fn zeta_suite(tol: f64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &s in &H_IDENTITY_S {
        out.push(VerificationReport::new(
            format!("h_identity_s{s}"),
            h_partial(s, DEFAULT.j_max)?,
            h_closed(s)?,
            1e-9,
        ));
    }

    let pairs = coprime_pairs(200, 0x5eed_0002);
    let mut reports = Vec::new();
    for &s in &[0.5, 2.0] {
        for &(j1, j2) in &pairs {
            let lhs = c_coeff(s, j1 * j2)?;
            let rhs = c_coeff(s, j1)? * c_coeff(s, j2)?;
            reports.push(VerificationReport::new("", lhs, rhs, 1e-12));
        }
    }
    out.push(worst("c_multiplicative", reports));

    let series = alpha_series(2, DEFAULT.j_max, tol)?;
    out.push(VerificationReport::new("alpha0_h_half", series.totals[0], h_closed(0.5)?, 1e-8));
    for n in 1..=2 {
        let fd = richardson_derivative(h_closed, 0.5, n, &DEFAULT)?;
        out.push(VerificationReport::new(
            format!("alpha{n}_fd"),
            series.totals[n],
            fd.value,
            1e-5,
        ));
    }
    Ok(out)
}
