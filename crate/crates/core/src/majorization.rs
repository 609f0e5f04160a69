//! The four order relations between spectral scales.
//!
//! Partial integrals `t ↦ ∫₀ᵗ λ_s ds` (and their tail and logarithmic
//! variants) of step functions are piecewise linear, with kinks only at
//! breakpoints. The difference of two such functions is piecewise linear
//! on the merged breakpoint grid, so its minimum over `[0, 1]` is attained
//! at a grid point. Checking the merged breakpoints is therefore exact.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::random::rng_from_seed;
use crate::spectral::{merged_breakpoints, Scale, SpectralScale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `A ≺_w B`: `∫₀ᵗ λ(A) ≤ ∫₀ᵗ λ(B)` for all `t`.
    SubW,
    /// `A ≺ B`: `A ≺_w B` and `τ(A) = τ(B)`.
    Maj,
    /// `A ≺^w B`: `∫_t^1 λ(A) ≥ ∫_t^1 λ(B)` for all `t`.
    SuperW,
    /// `A ≺^{w(log)} B`: `∫_t^1 log λ(A) ≥ ∫_t^1 log λ(B)` for all `t`.
    SuperWlog,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::SubW, Relation::Maj, Relation::SuperW, Relation::SuperWlog];

    pub fn name(self) -> &'static str {
        match self {
            Relation::SubW => "sub_w",
            Relation::Maj => "maj",
            Relation::SuperW => "super_w",
            Relation::SuperWlog => "super_wlog",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation `{s}`")))
    }
}

/// Trace equality tolerance for [`Relation::Maj`].
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation: Relation,
    pub holds: bool,
    /// Breakpoint where the slack is smallest.
    pub worst_t: f64,
    /// Minimum slack of the defining inequality; may be `±∞` for
    /// `super_wlog`.
    #[serde(serialize_with = "serialize_extended")]
    pub margin: f64,
    pub tolerance: f64,
}

/// Writes non-finite values as the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Default absolute tolerance: `1e-12 · (1 + max |value|)`.
pub fn default_tolerance(a: &SpectralScale, b: &SpectralScale) -> f64 {
    let top = a.values().chain(b.values()).fold(0.0f64, |m, v| m.max(v.abs()));
    1e-12 * (1.0 + top)
}

/// Decides `a ⊲ b` for the chosen relation at the default tolerance.
pub fn relation_check(a: &SpectralScale, b: &SpectralScale, relation: Relation) -> Result<RelationReport> {
    relation_check_tol(a, b, relation, default_tolerance(a, b))
}

/// As [`relation_check`]; the relation holds iff `margin ≥ −tol`
/// (for `maj`, additionally `|τ(a) − τ(b)| ≤ 1e-10`).
pub fn relation_check_tol(
    a: &SpectralScale,
    b: &SpectralScale,
    relation: Relation,
    tol: f64,
) -> Result<RelationReport> {
    let grid = merged_breakpoints(a, b);
    relation_on_grid(a, b, relation, tol, &grid)
}

/// Evaluates the relation on an arbitrary grid containing the merged
/// breakpoints; refining the grid never changes the outcome.
pub fn relation_on_grid(
    a: &SpectralScale,
    b: &SpectralScale,
    relation: Relation,
    tol: f64,
    grid: &[f64],
) -> Result<RelationReport> {
    let (worst_t, margin) = match relation {
        Relation::SubW | Relation::Maj => min_slack(grid, |t| t > 0.0, |t| Ok(b.head(t) - a.head(t)))?,
        Relation::SuperW => min_slack(grid, |t| t < 1.0, |t| Ok(a.tail(t) - b.tail(t)))?,
        Relation::SuperWlog => min_slack(
            grid,
            |t| t < 1.0,
            |t| {
                let (la, lb) = (log_tail(a, t)?, log_tail(b, t)?);
                Ok(extended_difference(la, lb))
            },
        )?,
    };
    let mut report = RelationReport {
        relation,
        holds: margin >= -tol,
        worst_t,
        margin,
        tolerance: tol,
    };
    if relation == Relation::Maj {
        let gap = (a.tau() - b.tau()).abs();
        if -gap < report.margin {
            report.margin = -gap;
            report.worst_t = 1.0;
        }
        report.holds = margin >= -tol && gap <= TRACE_TOL;
    }
    Ok(report)
}

/// `x − y` with the conventions `−∞ − (−∞) = 0`, `−∞ − finite = −∞`,
/// `finite − (−∞) = +∞`.
fn extended_difference(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY && y == f64::NEG_INFINITY {
        0.0
    } else {
        x - y
    }
}

fn min_slack(grid: &[f64], relevant: impl Fn(f64) -> bool, slack: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::INFINITY);
    for &t in grid.iter().filter(|&&t| relevant(t)) {
        let s = slack(t)?;
        if s < best.1 || best.0.is_nan() {
            best = (t, s);
        }
    }
    Ok(best)
}

/// `∫_t^1 log λ_s ds`, `−∞` when a zero value meets `(t, 1)`.
pub fn log_tail(a: &SpectralScale, t: f64) -> Result<f64> {
    if t >= 1.0 {
        return Ok(0.0);
    }
    let v = a.integral(t, 1.0, crate::spectral::IntegralMode::Log)?;
    Ok(v.to_f64())
}

/// A certified pair `(a, b)` with `a ≺^{w(log)} b` holding and `a ≺^w b`
/// failing. `b` is a random two-step scale and `a` the constant between
/// the geometric and arithmetic means of `b`.
pub fn wlog_weaker_witness(seed: u64) -> Result<(SpectralScale, SpectralScale)> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..64 {
        let w: f64 = rng.random_range(0.1..0.9);
        let x: f64 = rng.random_range(1.0..5.0);
        let y: f64 = rng.random_range(0.1..1.0);
        let geometric = (w * x.ln() + (1.0 - w) * y.ln()).exp();
        let arithmetic = w * x + (1.0 - w) * y;
        let c = geometric + rng.random_range(0.1..0.9) * (arithmetic - geometric);
        let b = SpectralScale::from_steps(&[(w, x), (1.0 - w, y)])?;
        let a = SpectralScale::constant(c);
        if certify_wlog_weaker(&a, &b)? {
            return Ok((a, b));
        }
    }
    let b = SpectralScale::from_steps(&[(0.5, 4.0), (0.5, 1.0)])?;
    let a = SpectralScale::constant(2.2);
    if certify_wlog_weaker(&a, &b)? {
        Ok((a, b))
    } else {
        Err(Error::WitnessNotFound { best_margin: f64::NAN })
    }
}

fn certify_wlog_weaker(a: &SpectralScale, b: &SpectralScale) -> Result<bool> {
    let log = relation_check(a, b, Relation::SuperWlog)?;
    let plain = relation_check(a, b, Relation::SuperW)?;
    Ok(log.holds && log.margin > 1e-9 && !plain.holds)
}
