//! Order derivatives of the modified Bessel function `K[s, x]` at `s = 1/2`.
//!
//! The derivatives of the cosine kernel `T[s, x] = int_0^inf cos(xu) (u^2+1)^{-s-1/2} du`
//! reduce to finite combinations of the damped log-power integrals
//! `U[a, b, eps](x)`; derivatives of `K` follow from a three-factor Leibniz
//! product. Independent oracles (cosh-integral Bessel values, Richardson
//! finite differences) live in [`reference`], and [`zeta_link`] assembles the
//! Bessel series for `h(s)` and its Taylor coefficients at `s = 1/2`.

pub mod config;
pub mod derivatives;
pub mod error;
pub mod jet;
pub mod kernels;
pub mod quadrature;
pub mod reference;
pub mod verify;
pub mod zeta_link;

pub use config::Config;
pub use error::{Error, Result, UTerm};

/// `|a - b| <= tol * |b|`, or `|a| <= tol` when `b == 0`.
#[doc(hidden)]
#[macro_export]
macro_rules! assert_rel {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b, tol): (f64, f64, f64) = ($a, $b, $tol);
        let diff = (a - b).abs();
        let ok = if b == 0.0 { diff <= tol } else { diff <= tol * b.abs() };
        assert!(ok, "{a:e} vs {b:e}: diff {diff:e}, rel {:e}, tol {tol:e}", diff / b.abs());
    }};
}
