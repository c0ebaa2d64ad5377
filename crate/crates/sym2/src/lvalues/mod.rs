pub mod afe;
pub mod kernel;
pub(crate) mod mellin;
pub mod moment;
pub mod oracle;
pub mod series;

pub use afe::{afe_cutoff, sym2_central_afe, sym2_central_afe_partial, AfePartial, CutoffChoice};
pub use kernel::{afe_tail_bound, gamma_ratio_three, gamma_ratio_two, v_kernel, AfeKernelSpec, WeightKernel};
pub use moment::{central_values_oracle, moment_lhs, moment_lhs_from_forms, weighted_eigenforms, LhsRoute, MomentLhs};
pub use oracle::{dirichlet_coefficients, sym2_central_oracle, sym2_oracle, sym2_oracle_checked, OracleKernel};
pub use series::{sym2_series, SeriesValue};
