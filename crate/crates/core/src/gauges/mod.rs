//! Fully symmetric norms, anti-norms and the limit and sandwich checks
//! relating them.

mod antinorm;
mod checks;
mod norm;

pub use antinorm::{
    antinorm_eval, antinorm_eval_detailed, antinorm_eval_eigenvalues, antinorm_eval_matrix,
    antinorm_eval_matrix_detailed, marcus_lopes_ratio, AntiNormSpec, AntiNormValue,
};
pub use checks::{
    cauchy_schwarz_check, delta_limit_check, derived_limit_check, sandwich_check, scaled_tolerance, Comparison,
    DeltaLimitReport, DerivedLimitReport, SandwichReport, CHECK_TOL,
};
pub use norm::{gauge_power, norm_eval, norm_eval_matrix, qnorm_lift, SymmetricGauge, WeightedGauge, MIN_T};
