use rand::Rng;
use serde::Serialize;

use super::report::{Fingerprint, InequalityReport};
use crate::error::Result;
use crate::linalg::random::{random_psd, rng_from_seed};
use crate::linalg::{psd_eigenvalues, ComplexMatrix, HermitianMatrix, C64};

/// Required strict gap of the truncation counterexample.
pub const TRUNCATION_GAP: f64 = 0.999;

/// `Tr min(X, s) = Σ min(λᵢ, s)`
pub fn truncated_trace(x: &HermitianMatrix, s: f64) -> Result<f64> {
    Ok(psd_eigenvalues(x)?.iter().map(|v| v.min(s)).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationCounterexample {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub cut: f64,
    /// `Tr min(A+B, s)`
    pub truncated_sum: f64,
    /// `Tr min(A, s) + Tr min(B, s)`
    pub sum_of_truncated: f64,
    pub gap: f64,
}

fn evaluate(a: &HermitianMatrix, b: &HermitianMatrix, cut: f64) -> Result<TruncationCounterexample> {
    let truncated_sum = truncated_trace(&a.add(b), cut)?;
    let sum_of_truncated = truncated_trace(a, cut)? + truncated_trace(b, cut)?;
    Ok(TruncationCounterexample {
        a: a.as_matrix().real_part(),
        b: b.as_matrix().real_part(),
        cut,
        truncated_sum,
        sum_of_truncated,
        gap: sum_of_truncated - truncated_sum,
    })
}

/// `A = B = [[1/2, 1/2], [1/2, 1/2]]` scaled by `c`: the unnormalized trace
/// of the truncation at 1 is not superadditive (`1 < 2` for `c = 1`).
pub fn truncation_pair(c: f64) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_fn(2, |_, _| C64::new(0.5 * c, 0.0)))
}

pub fn counterexample_trace_truncation() -> Result<TruncationCounterexample> {
    let a = truncation_pair(1.0);
    evaluate(&a, &a, 1.0)
}

pub fn counterexample_scaled(c: f64) -> Result<TruncationCounterexample> {
    let a = truncation_pair(c);
    evaluate(&a, &a, 1.0)
}

/// Random 2×2 PSD pairs until one violates superadditivity of
/// `X ↦ Tr min(X, 1)`; returns the first violation found.
pub fn random_truncation_search(seed: u64, tries: usize) -> Result<Option<TruncationCounterexample>> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..tries {
        let s: f64 = rng.random_range(0.5..3.0);
        let a = random_psd(2, &mut rng).scale(s);
        let b = random_psd(2, &mut rng).scale(s);
        let c = evaluate(&a, &b, 1.0)?;
        if c.gap > 1e-6 {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Report for the scaled fixed pair: `lhs` is the gap, `rhs` the
/// required [`TRUNCATION_GAP`].
pub fn truncation_report(c: f64) -> Result<InequalityReport> {
    let r = counterexample_scaled(c)?;
    let a = truncation_pair(c);
    Ok(InequalityReport::with_margin(
        "counterexample_trace_truncation",
        r.gap,
        TRUNCATION_GAP,
        r.gap - TRUNCATION_GAP,
        1e-10,
    )
    .params(format!(
        "c={c} cut=1 truncated_sum={} sum_of_truncated={}",
        r.truncated_sum, r.sum_of_truncated
    ))
    .fingerprint(Fingerprint::new().matrix(a.as_matrix()).matrix(a.as_matrix())))
}
