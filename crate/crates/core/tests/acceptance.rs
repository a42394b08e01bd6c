//! One line per acceptance criterion; run with `--nocapture` to see them.

use std::f64::consts::{LN_2, PI};

use korder::config::DEFAULT;
use korder::derivatives::{k_deriv1, t_deriv1, t_deriv2_explicit, t_deriv_n, k_second_log_derivative};
use korder::kernels::{binomial_exact, gamma_cancellation_residual, gamma_derivs_at_one, EULER_GAMMA};
use korder::quadrature::{exp_integral_e1, u_integral, QuadratureSpec};
use korder::reference::{fd_order_derivative, richardson_derivative, OrderDerivativeRequest, Target};
use korder::verify::coprime_pairs;
use korder::zeta_link::{alpha_series, c_coeff, h_closed, h_partial};

const GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0];
const TOL: f64 = DEFAULT.quad_tol;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    worst: f64,
    tol: f64,
}

impl Criterion {
    fn pass(&self) -> bool {
        self.worst <= self.tol
    }
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

fn u(a: u32, b: u32, eps: u32, x: f64) -> f64 {
    u_integral(QuadratureSpec::new(a, b, eps, x).unwrap(), TOL).unwrap().value
}

fn c1_first_derivative() -> Vec<Criterion> {
    let fd = max(GRID.iter().map(|&x| {
        let oracle = fd_order_derivative(OrderDerivativeRequest::new(1, x, Target::Kernel)).unwrap();
        rel(t_deriv1(x).unwrap(), oracle)
    }));
    let closed = max(GRID.iter().map(|&x| {
        let assembled = ((2.0 * x).exp() * exp_integral_e1(2.0 * x).unwrap() + x.ln() + EULER_GAMMA
            - LN_2)
            * 0.5
            * PI
            * (-x).exp();
        rel(t_deriv1(x).unwrap(), assembled)
    }));
    vec![
        Criterion { id: 1, name: "first derivative vs finite differences", worst: fd, tol: 1e-7 },
        Criterion { id: 1, name: "first derivative vs closed assembly", worst: closed, tol: 1e-11 },
    ]
}

fn c2_reductions() -> Vec<Criterion> {
    let n1 = max(GRID.iter().map(|&x| rel(t_deriv_n(1, x, TOL).unwrap(), t_deriv1(x).unwrap())));
    let n2 = max(GRID.iter().map(|&x| {
        rel(t_deriv_n(2, x, TOL).unwrap(), t_deriv2_explicit(x, TOL).unwrap())
    }));
    vec![
        Criterion { id: 2, name: "general formula at n=1 reduces to first derivative", worst: n1, tol: 1e-11 },
        Criterion { id: 2, name: "general formula at n=2 matches explicit form", worst: n2, tol: 1e-9 },
    ]
}

fn c3_higher_orders() -> Vec<Criterion> {
    let worst = max((2..=4).flat_map(|n| {
        [0.5, 1.0, 2.0, 5.0].into_iter().map(move |x| {
            let fd = fd_order_derivative(OrderDerivativeRequest::new(n, x, Target::Kernel)).unwrap();
            rel(t_deriv_n(n, x, TOL).unwrap(), fd)
        })
    }));
    vec![Criterion { id: 3, name: "orders 2..4 vs finite differences", worst, tol: 1e-5 }]
}

fn c4_bessel_first() -> Vec<Criterion> {
    let worst = max(GRID.iter().map(|&x| {
        let fd = fd_order_derivative(OrderDerivativeRequest::new(1, x, Target::BesselK)).unwrap();
        rel(k_deriv1(x).unwrap(), fd)
    }));
    vec![Criterion { id: 4, name: "d/ds K at s=1/2 vs finite differences", worst, tol: 1e-7 }]
}

fn c5_quadrature_identities() -> Vec<Criterion> {
    let jet = gamma_derivs_at_one(2).unwrap();
    let (g1, g2) = (jet.values[1], jet.values[2]);
    let e1 = max(GRID.iter().map(|&x| {
        rel(u(0, 0, 1, x), (2.0 * x).exp() * exp_integral_e1(2.0 * x).unwrap())
    }));
    let log2 = max(GRID.iter().map(|&x| {
        let lx = x.ln();
        rel(x * u(0, 2, 0, x), g2 - 2.0 * lx * g1 + lx * lx)
    }));
    vec![
        Criterion { id: 5, name: "U[0,0,1] = e^(2x) E1(2x)", worst: e1, tol: 1e-10 },
        Criterion { id: 5, name: "x U[0,2,0] log-moment identity", worst: log2, tol: 1e-10 },
    ]
}

fn c6_gamma_cancellation() -> Vec<Criterion> {
    let residual = gamma_cancellation_residual(&gamma_derivs_at_one(2).unwrap()).unwrap().abs();
    let term_level = max([0.5, 1.0, 2.0, 5.0].iter().map(|&x| {
        k_second_log_derivative(x, TOL).unwrap().gamma_group.abs()
    }));
    vec![
        Criterion { id: 6, name: "2G''(1) - 2G'(1)^2 - 2 zeta(2) = 0", worst: residual, tol: 1e-12 },
        Criterion { id: 6, name: "gamma group in second log-derivative of K", worst: term_level, tol: 1e-12 },
    ]
}

fn c7_binomial() -> Vec<Criterion> {
    let mut gap = 0.0f64;
    for n in 1..=30u64 {
        for k in 1..=n {
            let l = u128::from(k) * binomial_exact(n, k);
            let r = u128::from(n + 1 - k) * binomial_exact(n, k - 1);
            gap = gap.max(l.abs_diff(r) as f64);
        }
    }
    vec![Criterion { id: 7, name: "k C(n,k) = (n+1-k) C(n,k-1), exact, n <= 30", worst: gap, tol: 0.0 }]
}

fn c8_series_identity() -> Vec<Criterion> {
    let worst = max([1.5, 2.0, 2.5, 3.0, 4.0].iter().map(|&s| {
        rel(h_partial(s, DEFAULT.j_max).unwrap(), h_closed(s).unwrap())
    }));
    vec![Criterion { id: 8, name: "Bessel series for h(s) vs zeta* product", worst, tol: 1e-9 }]
}

fn c9_alpha() -> Vec<Criterion> {
    let series = alpha_series(2, DEFAULT.j_max, TOL).unwrap();
    let mut worst = rel(series.totals[0], h_closed(0.5).unwrap());
    for n in 1..=2 {
        let fd = richardson_derivative(h_closed, 0.5, n, &DEFAULT).unwrap();
        worst = worst.max(rel(series.totals[n], fd.value));
    }
    vec![Criterion { id: 9, name: "alpha_0..2 vs derivatives of h at 1/2", worst, tol: 1e-5 }]
}

fn c10_multiplicative() -> Vec<Criterion> {
    let pairs = coprime_pairs(200, 20_261_014);
    let worst = max([0.5, 2.0].iter().flat_map(|&s| {
        pairs.iter().map(move |&(a, b)| {
            rel(c_coeff(s, a * b).unwrap(), c_coeff(s, a).unwrap() * c_coeff(s, b).unwrap())
        })
    }));
    vec![Criterion { id: 10, name: "c[s, j] multiplicative on coprime pairs", worst, tol: 1e-12 }]
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = [
        c1_first_derivative as fn() -> Vec<Criterion>,
        c2_reductions,
        c3_higher_orders,
        c4_bessel_first,
        c5_quadrature_identities,
        c6_gamma_cancellation,
        c7_binomial,
        c8_series_identity,
        c9_alpha,
        c10_multiplicative,
    ]
    .iter()
    .flat_map(|f| f())
    .collect();

    for c in &criteria {
        println!(
            "{} criterion {:>2}: {:<52} worst {:.3e} (tol {:.0e})",
            if c.pass() { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.worst,
            c.tol
        );
    }
    let failed: Vec<_> = criteria.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
