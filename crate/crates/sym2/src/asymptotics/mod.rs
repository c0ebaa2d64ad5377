pub mod cxintegral;
pub mod dummigan;
pub mod main_terms;

pub use cxintegral::{i_bessel_integral, i_closed, i_numeric};
pub use dummigan::{dummigan_beta, dummigan_coefficients};
pub use main_terms::{
    c_cosines, c_table, diagonal_residue, legendre_bridge, m1, m1_constant, m1_constant_reflection, m_minus3,
    m_minus3_prime, m_minus4, m_minus4_residue_form, minus3_digits, moment_rhs, s_sign, MainTerms, MomentReport,
    MomentSummary,
};
