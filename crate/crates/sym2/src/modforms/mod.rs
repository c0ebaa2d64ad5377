pub mod basis;
pub mod cache;
pub mod hecke;
pub mod petersson;
pub mod qexp;

pub use basis::{cusp_dimension, miller_basis};
pub use cache::{cache_dir_from_env, cached_miller_basis, CACHE_ENV};
pub use hecke::{charpoly, eigenforms_from_basis, hecke_eigenforms, hecke_matrix, HeckeEigenform};
pub use petersson::{petersson_c_max, petersson_rhs, petersson_rhs_batch, petersson_tail_bound, solve_weights};
pub use qexp::{delta, eisenstein, QExpansion};
