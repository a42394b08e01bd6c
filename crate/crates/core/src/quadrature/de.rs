//! Double-exponential rules for `int_0^inf e^{-xu} g(u) du` with `g` allowed a
//! logarithmic singularity at `u = 0`.
//!
//! `[0, 1]` uses the tanh-sinh map `u = (1 + tanh(pi/2 sinh t)) / 2`;
//! `[1, inf)` uses the exp-sinh map `u = 1 + exp(pi/2 sinh t) / x`.
//! Both rules are nested: every halving of the step reuses the previous nodes,
//! so successive sums share work and their difference is the error estimate.

use std::f64::consts::FRAC_PI_2;

/// Coarsest step.
const H0: f64 = 0.5;
/// Half-width of the tanh-sinh grid. At this `t` the distance to `u = 0`
/// has underflowed (`~1e-300`), so even `Log^b[u]` weights vanish.
const TANH_SINH_T: f64 = 6.1;
/// Left end of the exp-sinh grid; `exp(pi/2 sinh(-4.5))` is below `1e-30`.
const EXP_SINH_T_MIN: f64 = -4.5;
/// Below this level a small difference is not trusted as convergence.
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct DeOutcome {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Node of a transformed rule: abscissa, `ln u` to full relative accuracy, and `du/dt`.
#[derive(Debug, Clone, Copy)]
struct Node {
    u: f64,
    log_u: f64,
    weight: f64,
}

fn tanh_sinh_node(t: f64) -> Node {
    let v = FRAC_PI_2 * t.sinh();
    // q = exp(-2|v|); the endpoint nearer to t's sign is at distance q / (1 + q)
    let q = (-2.0 * v.abs()).exp();
    let weight = std::f64::consts::PI * t.cosh() * q / ((1.0 + q) * (1.0 + q));
    if t < 0.0 {
        Node {
            u: q / (1.0 + q),
            log_u: -2.0 * v.abs() - q.ln_1p(),
            weight,
        }
    } else {
        Node {
            u: 1.0 / (1.0 + q),
            log_u: -q.ln_1p(),
            weight,
        }
    }
}

fn exp_sinh_node(t: f64, scale: f64) -> Node {
    let e = (FRAC_PI_2 * t.sinh()).exp();
    let offset = scale * e;
    Node {
        u: 1.0 + offset,
        log_u: offset.ln_1p(),
        weight: scale * FRAC_PI_2 * t.cosh() * e,
    }
}

#[derive(Default)]
struct Accumulator {
    raw: f64,
    raw_abs: f64,
    evaluations: usize,
}

/// Integrates `g(u, ln u)` over `[0, u_max]` where `g` already carries the
/// damping. `x` only sets the exp-sinh scale.
pub(crate) fn integrate<G>(g: G, x: f64, u_max: f64, tol: f64, refinement_cap: u32) -> DeOutcome
where
    G: Fn(f64, f64) -> f64,
{
    let scale = 1.0 / x;
    let t_max_right = if u_max > 1.0 {
        (((u_max - 1.0) / scale).ln() / FRAC_PI_2).asinh()
    } else {
        f64::NEG_INFINITY
    };

    let mut acc = Accumulator::default();
    let add = |node: Node, acc: &mut Accumulator| {
        if node.weight == 0.0 || node.u > u_max {
            return;
        }
        let term = g(node.u, node.log_u) * node.weight;
        acc.evaluations += 1;
        acc.raw += term;
        acc.raw_abs += term.abs();
    };

    let mut previous: Option<f64> = None;
    let mut last_diff = f64::INFINITY;
    let mut h = H0;
    let mut estimate = 0.0;

    for level in 0..=refinement_cap {
        // level 0 takes every multiple of h; later levels only the odd ones
        let (start, stride) = if level == 0 { (0i64, 1i64) } else { (1, 2) };

        let k_max = (TANH_SINH_T / h).floor() as i64;
        let mut k = start;
        while k <= k_max {
            let t = k as f64 * h;
            add(tanh_sinh_node(t), &mut acc);
            if k != 0 {
                add(tanh_sinh_node(-t), &mut acc);
            }
            k += stride;
        }

        let k_lo = (EXP_SINH_T_MIN / h).ceil() as i64;
        let k_hi = (t_max_right / h).floor().max(k_lo as f64 - 1.0) as i64;
        let mut k = if level == 0 { k_lo } else { k_lo | 1 };
        while k <= k_hi {
            add(exp_sinh_node(k as f64 * h, scale), &mut acc);
            k += stride;
        }

        let sum = acc.raw * h;
        let roundoff = 64.0 * f64::EPSILON * acc.raw_abs * h;
        if let Some(prev) = previous {
            last_diff = (sum - prev).abs();
            estimate = last_diff.max(roundoff);
            if level >= MIN_LEVEL && last_diff <= tol.max(roundoff) {
                return DeOutcome {
                    value: sum,
                    abs_error_estimate: estimate,
                    evaluations: acc.evaluations,
                    converged: true,
                };
            }
        }
        previous = Some(sum);
        h *= 0.5;
    }

    DeOutcome {
        value: previous.unwrap_or(0.0),
        abs_error_estimate: if last_diff.is_finite() { estimate } else { f64::INFINITY },
        evaluations: acc.evaluations,
        converged: false,
    }
}
