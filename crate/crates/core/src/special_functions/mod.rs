//! Exact constants and extended-precision special functions: incomplete
//! beta, its closed-form part, Gauss ₂F₁, and Fay's radial functions.

mod beta;
mod constants;
mod fay;
mod hypergeometric;

pub use beta::{beta0, beta0_split, incomplete_beta, incomplete_beta_split};
pub use constants::{a_const, cal_c, complete_beta, d_coeff, e_coeff, script_c_hat, script_c_principal, InvPiMultiple};
pub use fay::{fay_p_radial, fay_q_radial, fay_q_radial_regularized};
pub use hypergeometric::{euler_transform_check, gamma, gauss_2f1, gauss_2f1_real, nonpositive_integer};
