pub mod bessel;
pub mod contour;
pub mod dirichlet;
pub mod gamma;
pub mod hypergeometric;
pub mod quadrature;
pub mod zeta;

pub use bessel::{bessel_j, bessel_j_mb};
pub use contour::{bent_integral, line_integral, Bend, ContourSpec};
pub use dirichlet::{completed_l, dirichlet_l, gauss_sum, root_number, DirichletCharacter};
pub use gamma::{digamma, log_gamma};
pub use hypergeometric::{hyp2f1, legendre_p};
pub use zeta::{hurwitz_zeta, periodic_zeta, riemann_zeta};
