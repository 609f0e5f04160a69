//! The theorem harness: seeded random instances of every inequality,
//! evaluated into reproducible reports.

mod cases;
mod counterexample;
mod equivalence;
mod report;
mod suite;
mod theorems;

pub use counterexample::{
    counterexample_scaled, counterexample_trace_truncation, random_truncation_search, truncated_trace,
    truncation_report, TruncationCounterexample, TRUNCATION_GAP,
};
pub use equivalence::{
    check_equivalence, check_equivalence_steps, equivalence_report, equivalence_to_report, integrability_hypothesis,
    log_power_mean, EquivalenceDirection, EquivalenceReport, CONVERSE_P, DETECTION_P_MAX,
};
pub use report::{Fingerprint, InequalityReport, DEFAULT_TOLERANCE};
pub use suite::{case_ids, resolve_case, run_suite, trial_seed, CaseSummary, SuiteConfig, SuiteResult};
pub use theorems::{
    check_class_s_superadditivity, check_det_minkowski, check_inverse_power_sum, check_marcus_lopes_ratio,
    check_product_inequality, check_superadditivity, check_trace_ratio,
};
