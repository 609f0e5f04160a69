use serde::Serialize;

use super::antinorm::{antinorm_eval, antinorm_eval_matrix, AntiNormSpec};
use super::norm::{norm_eval, norm_eval_matrix, SymmetricGauge};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, matrix_function_with, operator_norm, ComplexMatrix, HermitianMatrix};
use crate::spectral::{IntegralMode, IntegralValue, Scale, SpectralScale};

/// `tol = rel · max(|lhs|, |rhs|, 1)`
pub fn scaled_tolerance(rel: f64, lhs: f64, rhs: f64) -> f64 {
    rel * lhs.abs().max(rhs.abs()).max(1.0)
}

/// One side of an inequality, oriented so that `margin ≥ 0` means it holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    /// `lhs ≤ rhs`
    pub fn at_most(lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::with_margin(lhs, rhs, rhs - lhs, rel)
    }

    /// `lhs ≥ rhs`
    pub fn at_least(lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::with_margin(lhs, rhs, lhs - rhs, rel)
    }

    fn with_margin(lhs: f64, rhs: f64, margin: f64, rel: f64) -> Self {
        let tolerance = scaled_tolerance(rel, lhs, rhs);
        let margin = if lhs == rhs { 0.0 } else { margin };
        Comparison {
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}

pub const CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedLimitReport {
    pub eps: Vec<f64>,
    /// `‖(A+εI)^{−p}‖^{−1/p}` along the grid.
    pub values: Vec<f64>,
    /// Closed-form value from [`antinorm_eval_matrix`].
    pub limit: f64,
    pub monotone: bool,
    /// `values.last − limit`
    pub gap: f64,
    pub pass: bool,
}

/// Evaluates the ε-regularized sequence by explicit matrix powers and
/// compares it with the closed form. `pass` requires a non-increasing
/// sequence that stays above the limit and ends within `tol` of it.
pub fn derived_limit_check(
    g: &SymmetricGauge,
    p: f64,
    a: &HermitianMatrix,
    eps_grid: &[f64],
    tol: f64,
) -> Result<DerivedLimitReport> {
    if eps_grid.is_empty()
        || eps_grid.iter().any(|e| e.is_nan() || *e <= 0.0)
        || eps_grid.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter(
            "eps grid must be positive and strictly decreasing".into(),
        ));
    }
    let limit = antinorm_eval_matrix(&AntiNormSpec::derived(g.clone(), p), a)?;
    let mut values = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let shifted = a.shift(eps);
        let inv = matrix_function_with(&shifted, "t^-p", |t| t.max(0.0).powf(-p))?;
        let v = norm_eval_matrix(g, inv.as_matrix())?.powf(-1.0 / p);
        values.push(v);
    }
    let monotone = values
        .windows(2)
        .all(|w| w[1] <= w[0] + scaled_tolerance(tol, w[0], w[1]));
    let last = *values.last().expect("non-empty grid");
    let gap = last - limit;
    let t = scaled_tolerance(tol, last, limit);
    Ok(DerivedLimitReport {
        eps: eps_grid.to_vec(),
        values,
        limit,
        monotone,
        gap,
        pass: monotone && gap >= -t && gap <= t,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaLimitReport {
    pub t: f64,
    pub p: Vec<f64>,
    /// `((1/t)∫_{1−t}^1 λ^{−p})^{−1/p}`; `None` where the integral diverges.
    pub values: Vec<Option<f64>>,
    /// `Δ_t(a)`
    pub target: f64,
    pub monotone: bool,
    /// `|value at the smallest p − Δ_t|`, `NaN` when that value is missing.
    pub gap: f64,
    pub hypothesis_violated: bool,
}

/// The `p ↘ 0` power means of the tail of `a` against `Δ_t(a)`.
pub fn delta_limit_check(t: f64, a: &dyn Scale, p_grid: &[f64]) -> Result<DeltaLimitReport> {
    if p_grid.is_empty() || p_grid.iter().any(|p| p.is_nan() || *p <= 0.0) || p_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "p grid must be positive and strictly decreasing".into(),
        ));
    }
    let target = antinorm_eval(&AntiNormSpec::LogMean { t }, a)?;
    let mut values = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let v = match a.integral(1.0 - t, 1.0, IntegralMode::NegPower(p))? {
            IntegralValue::Finite(i) => Some((-(i / t).ln() / p).exp()),
            _ => None,
        };
        values.push(v);
    }
    let hypothesis_violated = values.iter().all(Option::is_none);
    let finite: Vec<f64> = values.iter().flatten().copied().collect();
    let monotone = finite
        .windows(2)
        .all(|w| w[1] >= w[0] - scaled_tolerance(CHECK_TOL, w[0], w[1]));
    let gap = match values.last() {
        Some(Some(v)) => (v - target).abs(),
        _ => f64::NAN,
    };
    Ok(DeltaLimitReport {
        t,
        p: p_grid.to_vec(),
        values,
        target,
        monotone,
        gap,
        hypothesis_violated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    /// `‖X‖_1 ‖I‖ ≤ ‖X‖`
    pub norm_lower: Comparison,
    /// `‖X‖ ≤ ‖X‖_∞ ‖I‖`
    pub norm_upper: Comparison,
    /// `λ_1(A) ‖I‖_! ≤ ‖A‖_!`
    pub antinorm_lower: Comparison,
    /// `‖A‖_! ≤ τ(A) ‖I‖_!`
    pub antinorm_upper: Comparison,
    pub pass: bool,
}

pub fn sandwich_check(
    g: &SymmetricGauge,
    spec: &AntiNormSpec,
    x: &ComplexMatrix,
    a: &HermitianMatrix,
) -> Result<SandwichReport> {
    let unit = norm_eval(g, &SpectralScale::constant(1.0))?;
    let nx = norm_eval_matrix(g, x)?;
    let trace_norm = norm_eval_matrix(&SymmetricGauge::ky_fan(1.0), x)?;
    let op = operator_norm(x);
    let norm_lower = Comparison::at_most(trace_norm * unit, nx, CHECK_TOL);
    let norm_upper = Comparison::at_most(nx, op * unit, CHECK_TOL);

    let unit_bang = antinorm_eval_matrix(spec, &HermitianMatrix::identity(a.n()))?;
    let na = antinorm_eval_matrix(spec, a)?;
    let min = eigenvalues(a).last().copied().unwrap_or(0.0).max(0.0);
    let antinorm_lower = Comparison::at_most(min * unit_bang, na, CHECK_TOL);
    let antinorm_upper = Comparison::at_most(na, a.tau() * unit_bang, CHECK_TOL);
    let pass = norm_lower.pass && norm_upper.pass && antinorm_lower.pass && antinorm_upper.pass;
    Ok(SandwichReport {
        norm_lower,
        norm_upper,
        antinorm_lower,
        antinorm_upper,
        pass,
    })
}

/// `‖X^*Y‖ ≤ ‖X^*X‖^{1/2} ‖Y^*Y‖^{1/2}`
pub fn cauchy_schwarz_check(g: &SymmetricGauge, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Comparison> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    let xa = x.adjoint();
    let lhs = norm_eval_matrix(g, &(&xa * y))?;
    let xx = norm_eval_matrix(g, &(&xa * x))?;
    let yy = norm_eval_matrix(g, &(&y.adjoint() * y))?;
    Ok(Comparison::at_most(lhs, (xx * yy).sqrt(), CHECK_TOL))
}
