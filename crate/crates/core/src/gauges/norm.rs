use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::spectral::{s_numbers, IntegralMode, IntegralValue, Scale, SpectralScale};

/// Smallest admissible Ky Fan / tail parameter.
pub const MIN_T: f64 = 1e-6;

/// A fully symmetric norm, given by its action on s-number scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SymmetricGauge {
    /// `‖X‖_(t) = ∫₀ᵗ μ_s(X) ds`
    #[serde(rename = "kyfan")]
    KyFan { t: f64 },
    /// `(∫₀¹ μ_s^p ds)^{1/p}`, `p ≥ 1`
    #[serde(rename = "schatten")]
    Schatten { p: f64 },
    /// `μ_0(X) = ‖X‖_∞`
    #[serde(rename = "op")]
    OperatorSup,
    /// `Σ wᵢ ‖X‖ᵢ`, `wᵢ > 0`
    #[serde(rename = "mixture")]
    Mixture { terms: Vec<WeightedGauge> },
    /// `‖X^*X‖^{1/2}`, i.e. `a ↦ g(a²)^{1/2}` on scales.
    #[serde(rename = "qlift")]
    QLift { inner: Box<SymmetricGauge> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGauge {
    pub weight: f64,
    pub gauge: SymmetricGauge,
}

impl SymmetricGauge {
    pub fn ky_fan(t: f64) -> Self {
        SymmetricGauge::KyFan { t }
    }

    pub fn schatten(p: f64) -> Self {
        SymmetricGauge::Schatten { p }
    }

    pub fn mixture(terms: &[(f64, SymmetricGauge)]) -> Self {
        SymmetricGauge::Mixture {
            terms: terms
                .iter()
                .map(|(weight, gauge)| WeightedGauge {
                    weight: *weight,
                    gauge: gauge.clone(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymmetricGauge::KyFan { t } => in_range("kyfan t", *t, MIN_T, 1.0, "[1e-6, 1]"),
            SymmetricGauge::Schatten { p } => {
                if *p >= 1.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(out_of_range("schatten p", *p, "[1, inf)"))
                }
            }
            SymmetricGauge::OperatorSup => Ok(()),
            SymmetricGauge::Mixture { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidParameter("mixture has no terms".into()));
                }
                for term in terms {
                    if !(term.weight > 0.0 && term.weight.is_finite()) {
                        return Err(out_of_range("mixture weight", term.weight, "(0, inf)"));
                    }
                    term.gauge.validate()?;
                }
                Ok(())
            }
            SymmetricGauge::QLift { inner } => inner.validate(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SymmetricGauge::KyFan { t } => format!("kyfan({t})"),
            SymmetricGauge::Schatten { p } => format!("schatten({p})"),
            SymmetricGauge::OperatorSup => "op".into(),
            SymmetricGauge::Mixture { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|w| format!("{}*{}", w.weight, w.gauge.describe()))
                    .collect();
                format!("mixture({})", parts.join(" + "))
            }
            SymmetricGauge::QLift { inner } => format!("qlift({})", inner.describe()),
        }
    }
}

pub(crate) fn out_of_range(what: &'static str, value: f64, range: &str) -> Error {
    Error::OutOfRange {
        what,
        value,
        range: range.into(),
    }
}

pub(crate) fn in_range(what: &'static str, v: f64, lo: f64, hi: f64, range: &str) -> Result<()> {
    if v >= lo && v <= hi {
        Ok(())
    } else {
        Err(out_of_range(what, v, range))
    }
}

/// `X ↦ ‖X^*X‖^{1/2}`
pub fn qnorm_lift(g: &SymmetricGauge) -> SymmetricGauge {
    SymmetricGauge::QLift {
        inner: Box::new(g.clone()),
    }
}

fn integral_power(a: &dyn Scale, lo: f64, hi: f64, e: f64) -> Result<IntegralValue> {
    let mode = if e == 1.0 {
        IntegralMode::Plain
    } else {
        IntegralMode::Power(e)
    };
    a.integral(lo, hi, mode)
}

/// `g(a^e)` for a non-negative scale `a` and real `e ≠ 0`; `+∞` when
/// a negative power meets a zero value or the integral diverges.
///
/// For `e < 0` the scale of `a^e` is the reversal of `a` raised to `e`,
/// so head integrals of `a^e` become tail integrals of `a`.
pub fn gauge_power(g: &SymmetricGauge, a: &dyn Scale, e: f64) -> Result<f64> {
    Ok(match g {
        SymmetricGauge::KyFan { t } => {
            let v = if e >= 0.0 {
                integral_power(a, 0.0, *t, e)?
            } else {
                integral_power(a, 1.0 - t, 1.0, e)?
            };
            v.to_f64()
        }
        SymmetricGauge::Schatten { p } => integral_power(a, 0.0, 1.0, e * p)?.to_f64().powf(1.0 / p),
        SymmetricGauge::OperatorSup => {
            let base = if e >= 0.0 { a.sup() } else { a.inf() };
            if base == 0.0 && e < 0.0 {
                f64::INFINITY
            } else {
                base.powf(e)
            }
        }
        SymmetricGauge::Mixture { terms } => {
            let mut acc = 0.0;
            for term in terms {
                acc += term.weight * gauge_power(&term.gauge, a, e)?;
            }
            acc
        }
        SymmetricGauge::QLift { inner } => gauge_power(inner, a, 2.0 * e)?.sqrt(),
    })
}

/// Moduli of a step scale, re-sorted (identity on non-negative scales).
pub(crate) fn modulus_scale(a: &SpectralScale) -> SpectralScale {
    if a.inf() >= 0.0 {
        a.clone()
    } else {
        a.apply_with("abs", false, f64::abs).expect("abs is finite")
    }
}

/// `‖a‖` for an s-number scale (step scales with negative values are
/// replaced by their moduli).
pub fn norm_eval(g: &SymmetricGauge, a: &dyn Scale) -> Result<f64> {
    g.validate()?;
    match a.as_step() {
        Some(step) if step.inf() < 0.0 => gauge_power(g, &modulus_scale(step), 1.0),
        _ => {
            if a.inf() < 0.0 {
                return Err(Error::InvalidScale("norms take non-negative scales".into()));
            }
            gauge_power(g, a, 1.0)
        }
    }
}

/// `‖X‖ = g(μ(X))`
pub fn norm_eval_matrix(g: &SymmetricGauge, x: &ComplexMatrix) -> Result<f64> {
    norm_eval(g, &s_numbers(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_complex, rng_from_seed};
    use crate::linalg::{modulus, HermitianMatrix};

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diag(v)
    }

    #[test]
    fn ky_fan_examples() {
        let v = norm_eval_matrix(&SymmetricGauge::ky_fan(0.75), &diag(&[3.0, 1.0])).unwrap();
        assert!((v - 1.75).abs() < 1e-15);
        for t in [0.1, 0.5, 1.0] {
            let v = norm_eval_matrix(&SymmetricGauge::ky_fan(t), &ComplexMatrix::identity(3)).unwrap();
            assert!((v - t).abs() < 1e-15);
        }
    }

    #[test]
    fn ky_fan_one_is_trace_norm() {
        let mut rng = rng_from_seed(5);
        let x = random_complex(4, &mut rng);
        let v = norm_eval_matrix(&SymmetricGauge::ky_fan(1.0), &x).unwrap();
        assert!((v - modulus(&x).tau()).abs() < 1e-12);
    }

    #[test]
    fn schatten_and_operator() {
        let x = diag(&[3.0, -4.0]);
        let s2 = norm_eval_matrix(&SymmetricGauge::schatten(2.0), &x).unwrap();
        assert!((s2 - (12.5f64).sqrt()).abs() < 1e-14);
        let op = norm_eval_matrix(&SymmetricGauge::OperatorSup, &x).unwrap();
        assert!((op - 4.0).abs() < 1e-14);
        let mix = SymmetricGauge::mixture(&[(2.0, SymmetricGauge::OperatorSup), (1.0, SymmetricGauge::ky_fan(1.0))]);
        let v = norm_eval_matrix(&mix, &x).unwrap();
        assert!((v - (8.0 + 3.5)).abs() < 1e-14);
    }

    #[test]
    fn qlift_definition() {
        let lift = qnorm_lift(&SymmetricGauge::ky_fan(1.0));
        let v = norm_eval_matrix(&lift, &ComplexMatrix::identity(3)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let mut rng = rng_from_seed(6);
        let x = random_complex(3, &mut rng);
        let g = SymmetricGauge::schatten(3.0);
        let xx = HermitianMatrix::from_hermitian_part(&(&x.adjoint() * &x));
        let direct = norm_eval_matrix(&g, xx.as_matrix()).unwrap().sqrt();
        let lifted = norm_eval_matrix(&qnorm_lift(&g), &x).unwrap();
        assert!((direct - lifted).abs() < 1e-10 * direct);
    }

    #[test]
    fn validation() {
        assert!(SymmetricGauge::ky_fan(0.0).validate().is_err());
        assert!(SymmetricGauge::ky_fan(1.5).validate().is_err());
        assert!(SymmetricGauge::schatten(0.5).validate().is_err());
        assert!(SymmetricGauge::mixture(&[]).validate().is_err());
        assert!(SymmetricGauge::mixture(&[(-1.0, SymmetricGauge::OperatorSup)])
            .validate()
            .is_err());
    }

    #[test]
    fn json_tags() {
        let g: SymmetricGauge = serde_json::from_str(r#"{"kind":"kyfan","t":0.5}"#).unwrap();
        assert_eq!(g, SymmetricGauge::ky_fan(0.5));
        let g: SymmetricGauge = serde_json::from_str(
            r#"{"kind":"mixture","terms":[{"weight":1,"gauge":{"kind":"op"}},{"weight":0.5,"gauge":{"kind":"qlift","inner":{"kind":"schatten","p":3}}}]}"#,
        )
        .unwrap();
        assert_eq!(
            g,
            SymmetricGauge::mixture(&[
                (1.0, SymmetricGauge::OperatorSup),
                (0.5, qnorm_lift(&SymmetricGauge::schatten(3.0)))
            ])
        );
        let back: SymmetricGauge = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
