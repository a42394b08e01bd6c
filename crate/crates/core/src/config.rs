//! Numerical defaults shared by every module.
//!
//! The quadrature tolerance may be overridden at run time through the
//! `KORDER_TOL` environment variable (read by [`Config::from_env`]).

/// Environment variable holding a default absolute quadrature tolerance.
pub const TOL_ENV_VAR: &str = "KORDER_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Absolute tolerance for each damped log-power integral.
    pub quad_tol: f64,
    /// Maximum number of step halvings in the double-exponential rules.
    pub refinement_cap: u32,
    /// Largest order accepted by the Theorem-2 assembly and the K jet.
    pub max_order: usize,
    /// Largest order accepted for the Taylor coefficients of h(s).
    pub max_alpha_order: usize,
    /// Truncation of the j-sum for h(s) and its coefficients.
    pub j_max: u64,
    /// Base step of the Richardson finite-difference oracle.
    pub fd_base_step: f64,
    /// Number of step halvings in the Richardson tableau.
    pub fd_halvings: usize,
    /// Relative error estimate above which the oracle reports loss of significance.
    pub fd_max_rel_error: f64,
}

pub const DEFAULT: Config = Config {
    quad_tol: 1e-12,
    refinement_cap: 12,
    max_order: 6,
    max_alpha_order: 4,
    j_max: 60,
    fd_base_step: 0.05,
    fd_halvings: 4,
    fd_max_rel_error: 1e-4,
};

impl Default for Config {
    fn default() -> Self {
        DEFAULT
    }
}

impl Config {
    /// Defaults, with `quad_tol` taken from `KORDER_TOL` when it parses as a positive number.
    pub fn from_env() -> Self {
        let mut cfg = DEFAULT;
        if let Some(tol) = std::env::var(TOL_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
        {
            cfg.quad_tol = tol;
        }
        cfg
    }
}
