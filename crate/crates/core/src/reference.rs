//! Oracles that never touch the closed forms under test: `K[s, x]` from the
//! cosh integral, `T[s, x]` from `K` through the Gamma-factor relation, and
//! Richardson-extrapolated finite differences in the order.

use std::f64::consts::PI;

use crate::config::{Config, DEFAULT};
use crate::error::{invalid, Error, Result};
use crate::kernels::{binomial, gamma_real};

/// Bound on the order accepted by [`bessel_k`].
pub const MAX_ABS_ORDER: f64 = 30.0;

/// `K[s, x] = int_0^inf e^{-x cosh t} cosh(s t) dt`, by the nested trapezoidal
/// rule (the integrand is entire and decays double exponentially).
pub fn bessel_k(s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("bessel_k needs finite x > 0 (got {x})")));
    }
    if !(s.abs() <= MAX_ABS_ORDER) {
        return Err(invalid(format!("bessel_k supports |s| <= {MAX_ABS_ORDER} (got {s})")));
    }
    let s = s.abs();
    let integrand = |t: f64| {
        let base = -x * t.cosh();
        0.5 * ((base + s * t).exp() + (base - s * t).exp())
    };
    let t_peak = (s / x).asinh();

    // one-sided sum over k*h for k in [start, inf) with the given stride
    let tail_sum = |h: f64, start: usize, stride: usize| {
        let mut acc = 0.0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let v = integrand(t);
            acc += v;
            if t > t_peak && v <= 1e-20 * acc {
                break;
            }
            k += stride;
        }
        acc
    };

    let mut h = 0.5;
    let mut raw = 0.5 * integrand(0.0) + tail_sum(h, 1, 1);
    let mut prev = raw * h;
    for _ in 0..10 {
        h *= 0.5;
        raw += tail_sum(h, 1, 2);
        let cur = raw * h;
        if (cur - prev).abs() <= 2.0 * f64::EPSILON * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// `T[s, x] = sqrt(pi) (x/2)^s K[s, x] / Gamma(s + 1/2)` for `s > -1/2`.
pub fn t_kernel(s: f64, x: f64) -> Result<f64> {
    if !(s > -0.5) {
        return Err(invalid(format!("t_kernel needs s > -1/2 (got {s})")));
    }
    let k = bessel_k(s, x)?;
    Ok(PI.sqrt() * (0.5 * x).powf(s) * k / gamma_real(s + 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The cosine kernel `T[s, x]`.
    Kernel,
    /// The Bessel function `K[s, x]`.
    BesselK,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderDerivativeRequest {
    pub n: usize,
    pub x: f64,
    pub target: Target,
}

impl OrderDerivativeRequest {
    pub fn new(n: usize, x: f64, target: Target) -> Self {
        Self { n, x, target }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// `n`-th order derivative at `s = 1/2` by central differences and a
/// Richardson tableau over halved steps.
pub fn fd_order_derivative(req: OrderDerivativeRequest) -> Result<f64> {
    fd_order_derivative_with(req, &DEFAULT).map(|e| e.value)
}

pub fn fd_order_derivative_with(req: OrderDerivativeRequest, cfg: &Config) -> Result<FdEstimate> {
    if req.n == 0 {
        return Err(invalid("finite-difference oracle needs n >= 1"));
    }
    if req.n > cfg.max_order {
        return Err(invalid(format!("order {} exceeds configured max {}", req.n, cfg.max_order)));
    }
    if !(req.x > 0.0) || !req.x.is_finite() {
        return Err(invalid(format!("x must be finite and > 0 (got {})", req.x)));
    }
    let f = |s: f64| match req.target {
        Target::Kernel => t_kernel(s, req.x),
        Target::BesselK => bessel_k(s, req.x),
    };
    let h0 = fd_initial_step(req.n, cfg.fd_base_step);
    richardson(f, 0.5, req.n, h0, cfg.fd_halvings, cfg.fd_max_rel_error)
}

/// Initial step for order `n`: `2 n` times the base step, capped so the widest
/// stencil point stays above `s = -0.3` (the kernel is singular at `-1/2`).
///
/// Rounding noise in the `n`-th difference grows like `h^-n`, so higher
/// orders need wider steps; a fixed `0.05` leaves `n = 4` near `1e-6`.
pub fn fd_initial_step(n: usize, base_step: f64) -> f64 {
    let n = n as f64;
    (2.0 * n * base_step).min(1.6 / n)
}

/// Richardson-extrapolated `n`-th derivative of an arbitrary `f` at `s0`,
/// using the same step schedule as [`fd_order_derivative`].
pub fn richardson_derivative<F>(f: F, s0: f64, n: usize, cfg: &Config) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if n == 0 {
        return Err(invalid("finite-difference oracle needs n >= 1"));
    }
    let h0 = fd_initial_step(n, cfg.fd_base_step);
    richardson(f, s0, n, h0, cfg.fd_halvings, cfg.fd_max_rel_error)
}

fn central_difference<F>(f: &F, s0: f64, n: usize, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut acc = 0.0;
    for i in 0..=n {
        let offset = (0.5 * n as f64 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(n, i) * f(s0 + offset)?;
    }
    Ok(acc / h.powi(n as i32))
}

/// Extrapolation in `h^2`, keeping the tableau entry with the smallest
/// error estimate and stopping once the diagonal starts to diverge.
fn richardson<F>(
    f: F,
    s0: f64,
    n: usize,
    h0: f64,
    halvings: usize,
    max_rel_error: f64,
) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut prev_row: Vec<f64> = vec![central_difference(&f, s0, n, h0)?];
    let mut best = FdEstimate {
        value: prev_row[0],
        error_estimate: f64::INFINITY,
    };
    let mut h = h0;
    for i in 1..=halvings {
        h *= 0.5;
        let mut row = vec![central_difference(&f, s0, n, h)?];
        let mut factor = 1.0;
        for m in 1..=i {
            factor *= 4.0;
            let next = row[m - 1] + (row[m - 1] - prev_row[m - 1]) / (factor - 1.0);
            let err = (next - row[m - 1]).abs().max((next - prev_row[m - 1]).abs());
            if err <= best.error_estimate {
                best = FdEstimate {
                    value: next,
                    error_estimate: err,
                };
            }
            row.push(next);
        }
        let diverging = (row[i] - prev_row[i - 1]).abs() >= 2.0 * best.error_estimate;
        prev_row = row;
        if diverging {
            break;
        }
    }
    if !(best.error_estimate <= max_rel_error * best.value.abs()) {
        return Err(Error::LossOfSignificance {
            value: best.value,
            error_estimate: best.error_estimate,
        });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assert_rel;
    use crate::quadrature::scaled_exp_integral_e1;

    fn k_half(x: f64) -> f64 {
        (PI / (2.0 * x)).sqrt() * (-x).exp()
    }

    #[test]
    fn half_order_closed_form() {
        assert_rel!(bessel_k(0.5, 1.0).unwrap(), 0.461_068_504_447_894_56, 1e-14);
        assert_rel!(bessel_k(-0.5, 1.0).unwrap(), 0.461_068_504_447_894_56, 1e-14);
        for &x in &[0.1, 0.5, 2.0, 7.5, 40.0, 200.0] {
            assert_rel!(bessel_k(0.5, x).unwrap(), k_half(x), 1e-13);
        }
    }

    #[test]
    fn three_halves_closed_form() {
        assert_rel!(bessel_k(1.5, 2.0).unwrap(), 0.179_906_657_952_092_17, 1e-14);
        let mut x = 0.5;
        while x <= 10.0 {
            assert_rel!(bessel_k(1.5, x).unwrap(), k_half(x) * (1.0 + 1.0 / x), 1e-11);
            x += 0.25;
        }
    }

    #[test]
    fn even_in_order() {
        for &s in &[0.3, 0.5, 1.1] {
            for &x in &[0.5, 1.0, 5.0] {
                assert_rel!(bessel_k(-s, x).unwrap(), bessel_k(s, x).unwrap(), 1e-12);
            }
        }
    }

    #[test]
    fn integer_and_large_orders() {
        // mpmath.besselk
        assert_rel!(bessel_k(2.0, 2.0 * PI).unwrap(), 0.001_230_754_963_688_673_9, 1e-13);
        assert_rel!(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_33, 1e-13);
        assert_rel!(bessel_k(30.0, 0.5).unwrap(), 5.085_956_260_640_620_1e48, 1e-12);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(bessel_k(0.5, 0.0).is_err());
        assert!(bessel_k(31.0, 1.0).is_err());
        assert!(t_kernel(-0.5, 1.0).is_err());
    }

    #[test]
    fn kernel_at_half_order() {
        assert_rel!(t_kernel(0.5, 1.0).unwrap(), 0.577_863_674_895_460_86, 1e-14);
        assert_rel!(t_kernel(0.5, 3.0).unwrap(), 0.078_205_344_114_127_07, 1e-14);
    }

    /// `int_0^inf cos(x u) / (u^2 + 1)^2 du` by Simpson over half-periods and
    /// repeated averaging of the alternating partial sums.
    fn cosine_integral_slow(x: f64, power: f64) -> f64 {
        let f = |u: f64| (x * u).cos() / (u * u + 1.0).powf(power);
        let simpson = |a: f64, b: f64| {
            let m = 400;
            let h = (b - a) / m as f64;
            let mut acc = f(a) + f(b);
            for i in 1..m {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
            }
            acc * h / 3.0
        };
        let period = PI / x;
        let mut partial = Vec::new();
        let mut acc = simpson(0.0, 0.5 * period);
        for k in 0..60 {
            let a = (k as f64 + 0.5) * period;
            acc += simpson(a, a + period);
            partial.push(acc);
        }
        // Euler transform via repeated averaging of the last partial sums
        let mut level: Vec<f64> = partial[40..].to_vec();
        while level.len() > 1 {
            level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        level[0]
    }

    #[test]
    fn kernel_matches_cosine_integral() {
        // s = 3/2 -> exponent s + 1/2 = 2
        let slow = cosine_integral_slow(1.0, 2.0);
        assert_rel!(t_kernel(1.5, 1.0).unwrap(), slow, 1e-10);
        let slow = cosine_integral_slow(2.0, 1.0);
        assert_rel!(t_kernel(0.5, 2.0).unwrap(), slow, 1e-10);
    }

    #[test]
    fn gamma_relation_round_trip() {
        for &s in &[-0.4, -0.1, 0.25, 0.5, 1.0, 2.2, 3.0] {
            for &x in &[0.5, 1.0, 2.5, 5.0, 10.0] {
                let lhs = (2.0_f64 / x).powf(s) * gamma_real(s + 0.5) * t_kernel(s, x).unwrap()
                    / PI.sqrt();
                assert_rel!(lhs, bessel_k(s, x).unwrap(), 1e-11);
            }
        }
    }

    #[test]
    fn fd_first_derivative_of_k() {
        let fd = fd_order_derivative(OrderDerivativeRequest::new(1, 1.0, Target::BesselK)).unwrap();
        let closed = k_half(1.0) * scaled_exp_integral_e1(2.0).unwrap();
        assert_rel!(closed, 0.166_597_245_002_879_04, 1e-13);
        assert_rel!(fd, closed, 1e-9);
    }

    #[test]
    fn fd_higher_orders_of_kernel() {
        // mpmath.diff of sqrt(pi) (x/2)^s K_s(x) / Gamma(s + 1/2) at s = 1/2, x = 1
        let expected = [
            0.141_806_070_725_351_5,
            -0.507_685_466_490_730_2,
            0.942_956_953_129_137_7,
            -1.203_510_106_357_680_7,
        ];
        for (i, &e) in expected.iter().enumerate() {
            let est = fd_order_derivative_with(
                OrderDerivativeRequest::new(i + 1, 1.0, Target::Kernel),
                &DEFAULT,
            )
            .unwrap();
            assert_rel!(est.value, e, 1e-7);
            assert!(est.error_estimate < 1e-6 * e.abs());
        }
    }

    #[test]
    fn fd_rejects_order_zero() {
        assert!(fd_order_derivative(OrderDerivativeRequest::new(0, 1.0, Target::Kernel)).is_err());
        assert!(fd_order_derivative(OrderDerivativeRequest::new(7, 1.0, Target::Kernel)).is_err());
    }

    #[test]
    fn fd_reports_loss_of_significance() {
        let noisy = |s: f64| Ok(s.exp() * (1.0 + 1e-9 * (1e6 * s).sin()));
        let out = richardson(noisy, 0.5, 4, 0.05, 4, 1e-12);
        assert!(matches!(out, Err(Error::LossOfSignificance { .. })));
    }
}
