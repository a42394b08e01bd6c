//! Closed-form ingredients of the order-derivative formulas.

mod gamma;
mod poly;
mod zeta;

pub use gamma::{gamma_cancellation_residual, gamma_derivs_at_one, gamma_real, GammaJet, EULER_GAMMA};
pub use poly::{
    a1_term, binomial, binomial_exact, binomial_shift_identity, f_real, f_real_dy, f_real_poly,
    p_poly, PolynomialInW,
};
pub use zeta::zeta_real;
