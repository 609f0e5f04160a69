//! Both directions of the equivalence between log-supermajorization and
//! the ordering by every derived anti-norm.
//!
//! Derived Ky Fan anti-norms are compared through the logarithm of the
//! normalized power mean `h_p(a; L) = −(1/p) log((1/L)∫_{1−L}^1 λ^{−p})`,
//! since `log ‖a‖_! = −(1/p) log L + h_p(a; L)` and the first term is
//! common to both sides. `h_p` is evaluated as
//! `−log1p(p·J/L)/p` with `J = ∫ expm1(−p log λ)/p`, which stays accurate
//! as `p → 0`.

use serde::Serialize;

use super::report::{Fingerprint, InequalityReport};
use crate::error::{Error, Result};
use crate::majorization::{relation_check, Relation};
use crate::spectral::{merged_breakpoints, AnyScale, IntegralMode, IntegralValue, Scale, SpectralScale};

/// Small exponents used to expose a failing log-tail inequality.
pub const CONVERSE_P: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
/// Largest exponent accepted as a detection.
pub const DETECTION_P_MAX: f64 = 1e-3;
/// Exponents of the forward monotonicity grid.
pub const FORWARD_P: [f64; 7] = [4.0, 2.0, 1.0, 0.5, 1e-1, 1e-2, 1e-3];
/// Tail lengths of the forward grid (merged breakpoints are added).
pub const FORWARD_T: [f64; 6] = [0.05, 0.1, 0.25, 0.5, 0.75, 1.0];
/// Exponents tried for the integrability hypothesis on `b`.
pub const HYPOTHESIS_P: [f64; 5] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4];

const FORWARD_TOL: f64 = 1e-9;

/// `h_p(a; L)` on a step scale; `−∞` if `a` vanishes on the tail.
pub fn log_power_mean(a: &SpectralScale, len: f64, p: f64) -> f64 {
    let lo = 1.0 - len;
    let mut j = 0.0;
    let mut start = 0.0;
    for step in a.steps() {
        let end = start + step.width;
        let overlap = end.min(1.0) - start.max(lo);
        if overlap > 0.0 {
            if step.value <= 0.0 {
                return f64::NEG_INFINITY;
            }
            j += overlap * (-p * step.value.ln()).exp_m1() / p;
        }
        start = end;
    }
    -(p * j / len).ln_1p() / p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceDirection {
    /// The relation holds; every grid anti-norm must order the pair.
    Forward,
    /// The relation fails; some small-`p` anti-norm must reverse the order.
    Converse,
    /// `∫ b^{−p} = ∞` for every tried `p`.
    OutOfScope,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub direction: EquivalenceDirection,
    pub relation_holds: Option<bool>,
    pub relation_margin: Option<f64>,
    pub worst_t: Option<f64>,
    /// Forward: the smallest `log‖a‖_! − log‖b‖_!` over the grid.
    /// Converse: the most negative value at `p ≤ 1e-3`.
    pub min_log_gap: f64,
    /// `(tail length, p)` of the detecting anti-norm.
    pub detected: Option<(f64, f64)>,
    pub grid_size: usize,
    pub pass: bool,
}

/// Whether `∫₀¹ b^{−p}` is finite for some `p` in [`HYPOTHESIS_P`].
pub fn integrability_hypothesis(b: &dyn Scale) -> Result<bool> {
    for p in HYPOTHESIS_P {
        if matches!(
            b.integral(0.0, 1.0, IntegralMode::NegPower(p))?,
            IntegralValue::Finite(_)
        ) {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn check_equivalence(a: &AnyScale, b: &AnyScale) -> Result<EquivalenceReport> {
    if !integrability_hypothesis(b.as_scale())? {
        return Ok(EquivalenceReport {
            direction: EquivalenceDirection::OutOfScope,
            relation_holds: None,
            relation_margin: None,
            worst_t: None,
            min_log_gap: f64::NAN,
            detected: None,
            grid_size: 0,
            pass: true,
        });
    }
    let (AnyScale::Step(a), AnyScale::Step(b)) = (a, b) else {
        return Err(Error::Unsupported(
            "the equivalence check needs step scales when b satisfies the integrability hypothesis".into(),
        ));
    };
    check_equivalence_steps(a, b)
}

fn tail_lengths(a: &SpectralScale, b: &SpectralScale, extra: &[f64]) -> Vec<f64> {
    let mut lens: Vec<f64> = merged_breakpoints(a, b)
        .into_iter()
        .filter(|&t| t < 1.0)
        .map(|t| 1.0 - t)
        .chain(extra.iter().copied())
        .collect();
    lens.sort_by(|x, y| y.total_cmp(x));
    lens.dedup();
    lens
}

pub fn check_equivalence_steps(a: &SpectralScale, b: &SpectralScale) -> Result<EquivalenceReport> {
    let rel = relation_check(a, b, Relation::SuperWlog)?;
    if rel.holds {
        let lens = tail_lengths(a, b, &FORWARD_T);
        let mut worst = f64::INFINITY;
        let mut count = 0;
        for &len in &lens {
            for p in FORWARD_P {
                let gap = log_gap(a, b, len, p);
                count += 1;
                if gap < worst {
                    worst = gap;
                }
            }
        }
        Ok(EquivalenceReport {
            direction: EquivalenceDirection::Forward,
            relation_holds: Some(true),
            relation_margin: Some(rel.margin),
            worst_t: Some(rel.worst_t),
            min_log_gap: worst,
            detected: None,
            grid_size: count,
            pass: worst >= -FORWARD_TOL,
        })
    } else {
        let mut lens = vec![1.0 - rel.worst_t];
        lens.extend(tail_lengths(a, b, &[]));
        let mut best: Option<(f64, (f64, f64))> = None;
        let mut count = 0;
        for &len in &lens {
            for p in CONVERSE_P.iter().copied().filter(|&p| p <= DETECTION_P_MAX) {
                let gap = log_gap(a, b, len, p);
                count += 1;
                if best.is_none_or(|(g, _)| gap < g) {
                    best = Some((gap, (len, p)));
                }
            }
            if best.is_some_and(|(g, _)| g < 0.0) {
                break;
            }
        }
        let (gap, at) = best.expect("non-empty grid");
        Ok(EquivalenceReport {
            direction: EquivalenceDirection::Converse,
            relation_holds: Some(false),
            relation_margin: Some(rel.margin),
            worst_t: Some(rel.worst_t),
            min_log_gap: gap,
            detected: (gap < 0.0).then_some(at),
            grid_size: count,
            pass: gap < 0.0,
        })
    }
}

/// `log ‖a‖_! − log ‖b‖_!` for the derived anti-norm of Ky Fan `(len)`
/// and exponent `p`.
fn log_gap(a: &SpectralScale, b: &SpectralScale, len: f64, p: f64) -> f64 {
    let (ha, hb) = (log_power_mean(a, len, p), log_power_mean(b, len, p));
    if ha == hb {
        0.0
    } else {
        ha - hb
    }
}

/// Converts an equivalence outcome into an inequality report.
pub fn equivalence_report(a: &SpectralScale, b: &SpectralScale) -> Result<InequalityReport> {
    let e = check_equivalence(&AnyScale::Step(a.clone()), &AnyScale::Step(b.clone()))?;
    let fp = Fingerprint::new().scale(a).scale(b);
    Ok(equivalence_to_report(&e).fingerprint(fp))
}

pub fn equivalence_to_report(e: &EquivalenceReport) -> InequalityReport {
    match e.direction {
        EquivalenceDirection::OutOfScope => {
            InequalityReport::out_of_scope("equivalence", "direction=out_of_scope integrability hypothesis fails")
        }
        EquivalenceDirection::Forward => {
            InequalityReport::with_margin("equivalence", e.min_log_gap, 0.0, e.min_log_gap, FORWARD_TOL)
                .params(format!("direction=forward grid={}", e.grid_size))
        }
        EquivalenceDirection::Converse => {
            let (len, p) = e.detected.unwrap_or((f64::NAN, f64::NAN));
            let mut r = InequalityReport::with_margin("equivalence", 0.0, e.min_log_gap, -e.min_log_gap, 0.0);
            r.pass = e.pass;
            r.params(format!("direction=converse detected_t={len} detected_p={p}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::AnalyticScale;

    fn steps(v: &[(f64, f64)]) -> SpectralScale {
        SpectralScale::from_steps(v).unwrap()
    }

    #[test]
    fn log_power_mean_limits() {
        let a = steps(&[(0.5, 4.0), (0.5, 1.0)]);
        // p → 0: mean log over the whole interval = log 2
        assert!((log_power_mean(&a, 1.0, 1e-8) - 2f64.ln()).abs() < 1e-7);
        // p = 1: harmonic mean of (4, 1) = 1.6
        assert!((log_power_mean(&a, 1.0, 1.0) - 1.6f64.ln()).abs() < 1e-14);
        assert_eq!(
            log_power_mean(&steps(&[(0.5, 1.0), (0.5, 0.0)]), 0.25, 0.1),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn identical_scales_are_consistent() {
        let a = steps(&[(0.25, 3.0), (0.75, 0.5)]);
        let r = check_equivalence_steps(&a, &a).unwrap();
        assert_eq!(r.direction, EquivalenceDirection::Forward);
        assert!(r.pass);
        assert_eq!(r.min_log_gap, 0.0);
    }

    #[test]
    fn deliberate_violation_is_detected() {
        // geometric mean of a on the last half is below b's: log tail fails
        let a = steps(&[(0.5, 10.0), (0.5, 0.5)]);
        let b = SpectralScale::constant(1.0);
        let r = check_equivalence_steps(&a, &b).unwrap();
        assert_eq!(r.direction, EquivalenceDirection::Converse);
        let (_, p) = r.detected.unwrap();
        assert!(p <= 1e-3);
        assert!(r.pass);
    }

    #[test]
    fn boundary_scale_is_out_of_scope() {
        let b = AnyScale::Analytic(AnalyticScale::exp_inv_sqrt());
        let r = check_equivalence(&b, &b).unwrap();
        assert_eq!(r.direction, EquivalenceDirection::OutOfScope);
        assert!(equivalence_to_report(&r).out_of_scope);
        let singular = AnyScale::Step(steps(&[(0.5, 1.0), (0.5, 0.0)]));
        assert_eq!(
            check_equivalence(&singular, &singular).unwrap().direction,
            EquivalenceDirection::OutOfScope
        );
    }
}
