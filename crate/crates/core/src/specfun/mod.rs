//! Special functions behind the meta-distribution formulas: the regularized
//! incomplete beta function and its inverse, erfc and its inverse, and the
//! Student-T density, survival function and quantile.
//!
//! Everything here is a pure function of its arguments.

mod beta;
mod erf;
mod student;

pub use beta::{beta, inv_reg_inc_beta, ln_beta, reg_inc_beta, reg_inc_beta_derivative, BetaArgs, INVERSE_MAX_ITER};
pub use erf::{erf, erfc, inv_erfc, INV_ERFC_SATURATION};
pub use student::{student_t_pdf, student_t_survival, student_t_survival_inverse, T_SATURATION};

#[cfg(test)]
pub(crate) use beta::ibeta;
pub(crate) use beta::inv_ibeta_pair;
pub(crate) use erf::inv_erfc_unchecked;
pub(crate) use student::{t_isf, t_pdf, t_sf};
