use std::fmt;
use std::sync::Arc;

use super::quadrature::integrate;
use super::{check_interval, IntegralMode, IntegralValue, Scale};
use crate::error::{Error, Result};

type LogTail = dyn Fn(f64) -> f64 + Send + Sync;
type ClosedForm = dyn Fn(f64, f64, IntegralMode) -> Option<IntegralValue> + Send + Sync;

/// A scale given by a formula, represented through
/// `ℓ(u) = log λ_{1−u}` so that the behaviour as `s → 1` is resolved in
/// full precision.
#[derive(Clone)]
pub struct AnalyticScale {
    description: String,
    log_tail: Arc<LogTail>,
    closed_form: Option<Arc<ClosedForm>>,
}

impl fmt::Debug for AnalyticScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticScale")
            .field("description", &self.description)
            .finish()
    }
}

const MONOTONE_GRID: usize = 1000;

impl AnalyticScale {
    /// From `s ↦ λ_s` on `(0, 1)`, positive and non-increasing; the
    /// monotonicity is spot-checked on a 10³-point grid.
    pub fn from_values(
        description: impl Into<String>,
        lambda: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::from_log_tail(description, move |u| lambda(1.0 - u).ln())
    }

    /// From `u ↦ log λ_{1−u}`, which must be non-decreasing in `u`.
    pub fn from_log_tail(
        description: impl Into<String>,
        log_tail: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let description = description.into();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..MONOTONE_GRID {
            let u = i as f64 / MONOTONE_GRID as f64;
            let l = log_tail(u);
            if l.is_nan() || l == f64::INFINITY {
                return Err(Error::InvalidScale(format!(
                    "{description}: value at s = {} is not a finite positive number",
                    1.0 - u
                )));
            }
            if l < prev - 1e-12 * prev.abs().max(1.0) {
                return Err(Error::InvalidScale(format!(
                    "{description}: increases near s = {}",
                    1.0 - u
                )));
            }
            prev = l;
        }
        Ok(Self {
            description,
            log_tail: Arc::new(log_tail),
            closed_form: None,
        })
    }

    fn with_closed_form(
        mut self,
        f: impl Fn(f64, f64, IntegralMode) -> Option<IntegralValue> + Send + Sync + 'static,
    ) -> Self {
        self.closed_form = Some(Arc::new(f));
        self
    }

    /// `λ_s = exp(−1/√(1−s))`: finite log-integral, divergent negative
    /// powers for every exponent.
    pub fn exp_inv_sqrt() -> Self {
        Self::from_log_tail("exp(-1/sqrt(1-s))", |u| -1.0 / u.sqrt())
            .expect("monotone")
            .with_closed_form(|lo, hi, mode| match mode {
                IntegralMode::Log => Some(IntegralValue::Finite(-2.0 * ((1.0 - lo).sqrt() - (1.0 - hi).sqrt()))),
                IntegralMode::NegPower(p) if p > 0.0 && hi == 1.0 => Some(IntegralValue::Divergent),
                IntegralMode::Power(q) if q < 0.0 && hi == 1.0 => Some(IntegralValue::Divergent),
                _ => None,
            })
    }

    /// `λ_s = e^{−s}`.
    pub fn exp_neg() -> Self {
        Self::from_log_tail("exp(-s)", |u| u - 1.0)
            .expect("monotone")
            .with_closed_form(|lo, hi, mode| {
                let power = |q: f64| {
                    if q == 0.0 {
                        hi - lo
                    } else {
                        (-q * lo).exp() * -(-q * (hi - lo)).exp_m1() / q
                    }
                };
                Some(IntegralValue::Finite(match mode {
                    IntegralMode::Plain => power(1.0),
                    IntegralMode::Log => -(hi * hi - lo * lo) / 2.0,
                    IntegralMode::NegPower(p) => power(-p),
                    IntegralMode::Power(q) => power(q),
                }))
            })
    }

    /// Named scales: `exp_inv_sqrt`, `exp_neg`, or `constant:<c>`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "exp_inv_sqrt" => Ok(Self::exp_inv_sqrt()),
            "exp_neg" => Ok(Self::exp_neg()),
            other => {
                if let Some(c) = other.strip_prefix("constant:") {
                    let c: f64 = c.parse().map_err(|_| Error::UnknownScale(other.into()))?;
                    if !(c > 0.0 && c.is_finite()) {
                        return Err(Error::InvalidScale(format!("constant {c} must be positive")));
                    }
                    let l = c.ln();
                    return Self::from_log_tail(format!("constant {c}"), move |_| l);
                }
                Err(Error::UnknownScale(other.into()))
            }
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    fn log_value(&self, s: f64) -> f64 {
        (self.log_tail)(1.0 - s)
    }

    /// Adaptive quadrature, ignoring any closed form.
    pub fn integral_by_quadrature(&self, lo: f64, hi: f64, mode: IntegralMode) -> Result<IntegralValue> {
        check_interval(lo, hi)?;
        let l = &self.log_tail;
        let integrand: Box<dyn Fn(f64) -> f64> = match mode {
            IntegralMode::Plain => Box::new(move |u| l(u).exp()),
            IntegralMode::Log => Box::new(move |u| l(u)),
            IntegralMode::NegPower(p) => Box::new(move |u| (-p * l(u)).exp()),
            IntegralMode::Power(q) => Box::new(move |u| (q * l(u)).exp()),
        };
        Ok(integrate(integrand.as_ref(), 1.0 - hi, 1.0 - lo))
    }
}

impl Scale for AnalyticScale {
    fn integral(&self, lo: f64, hi: f64, mode: IntegralMode) -> Result<IntegralValue> {
        check_interval(lo, hi)?;
        if let Some(v) = self.closed_form.as_ref().and_then(|cf| cf(lo, hi, mode)) {
            return Ok(v);
        }
        self.integral_by_quadrature(lo, hi, mode)
    }

    fn value_at(&self, t: f64) -> f64 {
        self.log_value(t.clamp(0.0, 1.0)).exp()
    }

    fn sup(&self) -> f64 {
        self.log_value(0.0).exp()
    }

    /// The limit `λ_1 = lim_{t↗1} λ_t`.
    fn inf(&self) -> f64 {
        (self.log_tail)(f64::MIN_POSITIVE).exp()
    }

    fn describe(&self) -> String {
        self.description.clone()
    }
}
