//! The damped log-power integrals
//! `U[a, b, eps](x) = int_0^inf e^{-xu} Log^a[u+2] Log^b[u] (u+2)^{-eps} du`
//! and the exponential integral that gives `U[0, 0, 1]` in closed form.

mod de;
mod e1;

use std::collections::BTreeMap;

use crate::config::DEFAULT;
use crate::error::{invalid, Error, Result, UTerm};

pub use e1::{exp_integral_e1, scaled_exp_integral_e1};

/// Coefficients of a linear combination of `U[a, b, eps]` at fixed `eps`,
/// keyed by `(a, b)`.
pub type CoeffMap = BTreeMap<(u32, u32), f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub a: u32,
    pub b: u32,
    pub eps: u32,
    pub x: f64,
}

impl QuadratureSpec {
    pub fn new(a: u32, b: u32, eps: u32, x: f64) -> Result<Self> {
        let spec = Self { a, b, eps, x };
        spec.validate()?;
        Ok(spec)
    }

    pub fn term(&self) -> UTerm {
        UTerm {
            a: self.a,
            b: self.b,
            eps: self.eps,
        }
    }

    fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        check_x(self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

fn check_eps(eps: u32) -> Result<()> {
    if eps > 1 {
        return Err(invalid(format!("eps must be 0 or 1 (got {eps})")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("damping rate x must be finite and > 0 (got {x})")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be > 0 (got {tol})")));
    }
    Ok(())
}

/// Smallest `u_max` (on a geometric search) with
/// `scale * (2/x) e^{-x u_max} Log^m[u_max + 2] < tol / 10`, where past `u_max`
/// the majorant `Log^m[u+2] e^{-xu/2}` is already decreasing. For `u >= 1`
/// every integrand of total log power `m` is bounded by `Log^m[u+2]`, so this
/// bounds the discarded tail. Returns the cutoff and the bound itself.
fn tail_cutoff(x: f64, m: u32, scale: f64, tol: f64) -> (f64, f64) {
    let mf = f64::from(m);
    let bound = |u: f64| scale * 2.0 / x * (-x * u).exp() * (u + 2.0).ln().powi(m as i32);
    let mut u = 1.0;
    loop {
        let decreasing = mf <= 0.5 * x * (u + 2.0) * (u + 2.0).ln();
        let b = bound(u);
        if decreasing && b < tol / 10.0 {
            return (u, b);
        }
        u = u * 1.125 + 0.5;
    }
}

/// `U[a, b, eps](x)` to absolute tolerance `tol`.
pub fn u_integral(spec: QuadratureSpec, tol: f64) -> Result<QuadratureResult> {
    spec.validate()?;
    check_tol(tol)?;
    let QuadratureSpec { a, b, eps, x } = spec;
    let (u_max, tail) = tail_cutoff(x, a + b, 1.0, tol);

    let g = |u: f64, log_u: f64| {
        let log_u2 = (u + 2.0).ln();
        let mut v = (-x * u).exp() * log_u2.powi(a as i32) * log_u.powi(b as i32);
        if eps == 1 {
            v /= u + 2.0;
        }
        v
    };
    let out = de::integrate(g, x, u_max, tol, DEFAULT.refinement_cap);
    if !out.converged {
        return Err(Error::NonConvergence {
            term: Some(spec.term()),
            best_estimate: out.value,
            abs_error_estimate: out.abs_error_estimate,
            tol,
        });
    }
    Ok(QuadratureResult {
        value: out.value,
        abs_error_estimate: out.abs_error_estimate + tail,
        evaluations: out.evaluations,
    })
}

/// `sum_{(a,b)} coeffs[a,b] U[a, b, eps](x)` on a single shared node set.
///
/// On non-convergence each term is retried alone so the error names the
/// first `U[a, b, eps]` that fails by itself.
pub fn damped_log_poly_integral(
    coeffs: &CoeffMap,
    eps: u32,
    x: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    check_eps(eps)?;
    check_x(x)?;
    check_tol(tol)?;
    let terms: Vec<(u32, u32, f64)> = coeffs
        .iter()
        .filter(|(_, &c)| c != 0.0)
        .map(|(&(a, b), &c)| (a, b, c))
        .collect();
    if terms.is_empty() {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let max_a = terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
    let max_b = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
    let max_m = terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0);
    let scale: f64 = terms.iter().map(|t| t.2.abs()).sum();
    let (u_max, tail) = tail_cutoff(x, max_m, scale, tol);

    let g = |u: f64, log_u: f64| {
        let log_u2 = (u + 2.0).ln();
        let mut pow_a = [1.0; 16];
        let mut pow_b = [1.0; 16];
        for i in 1..=max_a {
            pow_a[i] = pow_a[i - 1] * log_u2;
        }
        for i in 1..=max_b {
            pow_b[i] = pow_b[i - 1] * log_u;
        }
        let poly: f64 = terms
            .iter()
            .map(|&(a, b, c)| c * pow_a[a as usize] * pow_b[b as usize])
            .sum();
        let mut v = (-x * u).exp() * poly;
        if eps == 1 {
            v /= u + 2.0;
        }
        v
    };
    if max_a >= 16 || max_b >= 16 {
        return Err(invalid("log powers above 15 are not supported"));
    }
    let out = de::integrate(g, x, u_max, tol, DEFAULT.refinement_cap);
    if out.converged {
        return Ok(QuadratureResult {
            value: out.value,
            abs_error_estimate: out.abs_error_estimate + tail,
            evaluations: out.evaluations,
        });
    }

    for &(a, b, _) in &terms {
        u_integral(QuadratureSpec { a, b, eps, x }, tol)?;
    }
    Err(Error::NonConvergence {
        term: None,
        best_estimate: out.value,
        abs_error_estimate: out.abs_error_estimate,
        tol,
    })
}
