use serde::{Deserialize, Serialize};

use super::norm::{gauge_power, in_range, out_of_range, SymmetricGauge, MIN_T};
use crate::error::{Error, Result};
use crate::linalg::{elementary_symmetric, psd_eigenvalues, HermitianMatrix};
use crate::spectral::{IntegralMode, IntegralValue, Scale, SpectralScale};

/// The anti-norm family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AntiNormSpec {
    /// `‖A‖_! = ‖A^{−p}‖^{−1/p}`, zero on singular inputs.
    #[serde(rename = "derived")]
    Derived { gauge: SymmetricGauge, p: f64 },
    /// `∫_{1−t}^1 λ_s ds`
    #[serde(rename = "tail")]
    TailIntegral { t: f64 },
    /// `Δ_t(A) = exp((1/t) ∫_{1−t}^1 log λ_s ds)`
    #[serde(rename = "logmean")]
    LogMean { t: f64 },
    /// Fuglede–Kadison determinant `Δ = Δ_1`.
    #[serde(rename = "fkdet")]
    FkDet,
    /// `τ(A^q)^{1/q}`, `0 < q ≤ 1`
    #[serde(rename = "schattenq")]
    SchattenQ { q: f64 },
    /// `e_m(λ)/e_{m−1}(λ)` of the eigenvalues (matrices only).
    #[serde(rename = "marcuslopes")]
    MarcusLopes { m: usize },
    /// `A ↦ ‖A^q‖_!^{1/q}`, `0 < q < 1`
    #[serde(rename = "powercompose")]
    PowerCompose { q: f64, inner: Box<AntiNormSpec> },
}

/// An anti-norm value with the Marcus–Lopes degeneracy flag
/// (`e_{m−1} = 0`, value taken as 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AntiNormValue {
    pub value: f64,
    pub degenerate: bool,
}

impl AntiNormSpec {
    pub fn derived(gauge: SymmetricGauge, p: f64) -> Self {
        AntiNormSpec::Derived { gauge, p }
    }

    pub fn power_compose(q: f64, inner: AntiNormSpec) -> Self {
        AntiNormSpec::PowerCompose {
            q,
            inner: Box::new(inner),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AntiNormSpec::Derived { gauge, p } => {
                gauge.validate()?;
                if *p > 0.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(out_of_range("derived p", *p, "(0, inf)"))
                }
            }
            AntiNormSpec::TailIntegral { t } => in_range("tail t", *t, MIN_T, 1.0, "[1e-6, 1]"),
            AntiNormSpec::LogMean { t } => in_range("logmean t", *t, MIN_T, 1.0, "[1e-6, 1]"),
            AntiNormSpec::FkDet => Ok(()),
            AntiNormSpec::SchattenQ { q } => {
                if *q > 0.0 && *q <= 1.0 {
                    Ok(())
                } else {
                    Err(out_of_range("schattenq q", *q, "(0, 1]"))
                }
            }
            AntiNormSpec::MarcusLopes { m } => {
                if *m >= 1 {
                    Ok(())
                } else {
                    Err(out_of_range("marcuslopes m", *m as f64, "[1, n]"))
                }
            }
            AntiNormSpec::PowerCompose { q, inner } => {
                if !(*q > 0.0 && *q < 1.0) {
                    return Err(out_of_range("powercompose q", *q, "(0, 1)"));
                }
                inner.validate()
            }
        }
    }

    /// Whether this is a derived anti-norm (possibly behind power
    /// compositions, which preserve the derived form).
    pub fn is_derived(&self) -> bool {
        match self {
            AntiNormSpec::Derived { .. } => true,
            AntiNormSpec::PowerCompose { inner, .. } => inner.is_derived(),
            _ => false,
        }
    }

    pub fn needs_matrix(&self) -> bool {
        match self {
            AntiNormSpec::MarcusLopes { .. } => true,
            AntiNormSpec::PowerCompose { inner, .. } => inner.needs_matrix(),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AntiNormSpec::Derived { gauge, p } => format!("derived({}, p={p})", gauge.describe()),
            AntiNormSpec::TailIntegral { t } => format!("tail({t})"),
            AntiNormSpec::LogMean { t } => format!("logmean({t})"),
            AntiNormSpec::FkDet => "fkdet".into(),
            AntiNormSpec::SchattenQ { q } => format!("schattenq({q})"),
            AntiNormSpec::MarcusLopes { m } => format!("marcuslopes({m})"),
            AntiNormSpec::PowerCompose { q, inner } => format!("powercompose({q}, {})", inner.describe()),
        }
    }
}

struct Spectrum<'a> {
    scale: &'a dyn Scale,
    /// Eigenvalues (non-increasing) when the input is a matrix.
    eigenvalues: Option<&'a [f64]>,
}

/// `Δ_t(a)^e`
fn log_mean_power(a: &dyn Scale, t: f64, e: f64) -> Result<f64> {
    Ok(match a.integral(1.0 - t, 1.0, IntegralMode::Log)? {
        IntegralValue::Finite(v) => (e * v / t).exp(),
        IntegralValue::NegInfinite => 0.0,
        IntegralValue::Divergent => f64::INFINITY,
    })
}

/// `‖a^e‖_!` for `e > 0`.
fn eval_power(spec: &AntiNormSpec, input: &Spectrum<'_>, e: f64) -> Result<AntiNormValue> {
    let plain = |value: f64| AntiNormValue {
        value,
        degenerate: false,
    };
    let a = input.scale;
    Ok(match spec {
        AntiNormSpec::Derived { gauge, p } => {
            let v = gauge_power(gauge, a, -p * e)?;
            plain(if v.is_finite() { v.powf(-1.0 / p) } else { 0.0 })
        }
        AntiNormSpec::TailIntegral { t } => {
            let mode = if e == 1.0 {
                IntegralMode::Plain
            } else {
                IntegralMode::Power(e)
            };
            plain(a.integral(1.0 - t, 1.0, mode)?.to_f64())
        }
        AntiNormSpec::LogMean { t } => plain(log_mean_power(a, *t, e)?),
        AntiNormSpec::FkDet => plain(log_mean_power(a, 1.0, e)?),
        AntiNormSpec::SchattenQ { q } => {
            plain(a.integral(0.0, 1.0, IntegralMode::Power(q * e))?.to_f64().powf(1.0 / q))
        }
        AntiNormSpec::MarcusLopes { m } => {
            let Some(eigs) = input.eigenvalues else {
                return Err(Error::Unsupported(
                    "marcuslopes needs a matrix input (the dimension is part of its definition)".into(),
                ));
            };
            let powered: Vec<f64> = eigs.iter().map(|v| if e == 1.0 { *v } else { v.powf(e) }).collect();
            marcus_lopes_ratio(&powered, *m)?
        }
        AntiNormSpec::PowerCompose { q, inner } => {
            let v = eval_power(inner, input, q * e)?;
            AntiNormValue {
                value: v.value.powf(1.0 / q),
                degenerate: v.degenerate,
            }
        }
    })
}

/// `e_m(v)/e_{m−1}(v)`; zero with the degeneracy flag when `e_{m−1} = 0`.
pub fn marcus_lopes_ratio(values: &[f64], m: usize) -> Result<AntiNormValue> {
    let n = values.len();
    if m == 0 || m > n {
        return Err(out_of_range("marcuslopes m", m as f64, &format!("[1, {n}]")));
    }
    let num = elementary_symmetric(values, m)?;
    let den = elementary_symmetric(values, m - 1)?;
    Ok(if den <= 0.0 {
        AntiNormValue {
            value: 0.0,
            degenerate: true,
        }
    } else {
        AntiNormValue {
            value: num / den,
            degenerate: false,
        }
    })
}

fn check_nonnegative(a: &dyn Scale) -> Result<()> {
    let min = a.inf();
    if min < 0.0 {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(())
}

/// `‖a‖_!` of a non-negative scale.
pub fn antinorm_eval(spec: &AntiNormSpec, a: &dyn Scale) -> Result<f64> {
    Ok(antinorm_eval_detailed(spec, a)?.value)
}

pub fn antinorm_eval_detailed(spec: &AntiNormSpec, a: &dyn Scale) -> Result<AntiNormValue> {
    spec.validate()?;
    check_nonnegative(a)?;
    eval_power(
        spec,
        &Spectrum {
            scale: a,
            eigenvalues: None,
        },
        1.0,
    )
}

/// `‖A‖_!` of a PSD matrix (eigenvalues above `−1e-10·‖A‖` are clamped to 0).
pub fn antinorm_eval_matrix(spec: &AntiNormSpec, a: &HermitianMatrix) -> Result<f64> {
    Ok(antinorm_eval_matrix_detailed(spec, a)?.value)
}

pub fn antinorm_eval_matrix_detailed(spec: &AntiNormSpec, a: &HermitianMatrix) -> Result<AntiNormValue> {
    let eigs = psd_eigenvalues(a)?;
    antinorm_eval_eigenvalues(spec, &eigs)
}

/// `‖A‖_!` from the non-increasing, non-negative eigenvalues of `A`.
pub fn antinorm_eval_eigenvalues(spec: &AntiNormSpec, eigs: &[f64]) -> Result<AntiNormValue> {
    spec.validate()?;
    let scale = SpectralScale::from_sorted_values(eigs)?;
    check_nonnegative(&scale)?;
    eval_power(
        spec,
        &Spectrum {
            scale: &scale,
            eigenvalues: Some(eigs),
        },
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_function_with, HermitianMatrix};
    use crate::spectral::spectral_scale;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    #[test]
    fn fk_determinant_two_point() {
        let v = antinorm_eval_matrix(&AntiNormSpec::FkDet, &diag(&[1.0, 4.0])).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn derived_ky_fan_closed_form() {
        let spec = AntiNormSpec::derived(SymmetricGauge::ky_fan(1.0), 1.0);
        let v = antinorm_eval_matrix(&spec, &diag(&[1.0, 2.0])).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-14);
        // ε-limit cross-check: ‖(A+εI)^{-1}‖^{-1} → 4/3.
        for eps in [1e-4, 1e-6, 1e-8] {
            let shifted = diag(&[1.0 + eps, 2.0 + eps]);
            let inv = matrix_function_with(&shifted, "1/t", |t| 1.0 / t).unwrap();
            let approx = 1.0 / spectral_scale(&inv).tau();
            assert!((approx - 4.0 / 3.0).abs() < 2.0 * eps);
        }
    }

    #[test]
    fn singular_inputs_vanish_for_derived() {
        let a = diag(&[1.0, 0.0]);
        for gauge in [
            SymmetricGauge::ky_fan(0.3),
            SymmetricGauge::ky_fan(1.0),
            SymmetricGauge::schatten(2.0),
            SymmetricGauge::OperatorSup,
        ] {
            for p in [0.1, 1.0, 3.0] {
                let v = antinorm_eval_matrix(&AntiNormSpec::derived(gauge.clone(), p), &a).unwrap();
                assert_eq!(v, 0.0);
            }
        }
        assert_eq!(antinorm_eval_matrix(&AntiNormSpec::FkDet, &a).unwrap(), 0.0);
    }

    #[test]
    fn marcus_lopes_example_and_degeneracy() {
        let spec = AntiNormSpec::MarcusLopes { m: 2 };
        let v = antinorm_eval_matrix(&spec, &diag(&[1.0, 2.0, 3.0])).unwrap();
        assert!((v - 11.0 / 6.0).abs() < 1e-15);
        let d = antinorm_eval_matrix_detailed(&AntiNormSpec::MarcusLopes { m: 3 }, &diag(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.degenerate);
        let err = antinorm_eval(&spec, &SpectralScale::constant(1.0)).unwrap_err();
        assert_eq!(err.code(), "E_UNSUPPORTED");
        let err = antinorm_eval_matrix(&AntiNormSpec::MarcusLopes { m: 4 }, &diag(&[1.0, 2.0, 3.0])).unwrap_err();
        assert_eq!(err.code(), "E_OUT_OF_RANGE");
    }

    #[test]
    fn tail_schatten_and_compose() {
        let a = diag(&[4.0, 1.0]);
        let tail = antinorm_eval_matrix(&AntiNormSpec::TailIntegral { t: 0.75 }, &a).unwrap();
        assert!((tail - (0.5 * 1.0 + 0.25 * 4.0)).abs() < 1e-15);
        let sq = antinorm_eval_matrix(&AntiNormSpec::SchattenQ { q: 0.5 }, &a).unwrap();
        assert!((sq - 2.25).abs() < 1e-14);
        let lm = antinorm_eval_matrix(&AntiNormSpec::LogMean { t: 0.5 }, &a).unwrap();
        assert!((lm - 1.0).abs() < 1e-15);
        let pc = AntiNormSpec::power_compose(0.5, AntiNormSpec::TailIntegral { t: 1.0 });
        let v = antinorm_eval_matrix(&pc, &a).unwrap();
        assert!((v - 2.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_indefinite_input() {
        let err = antinorm_eval_matrix(&AntiNormSpec::FkDet, &diag(&[1.0, -0.5])).unwrap_err();
        assert_eq!(err.code(), "E_NOT_PSD");
    }

    #[test]
    fn json_tags() {
        let spec: AntiNormSpec =
            serde_json::from_str(r#"{"kind":"derived","gauge":{"kind":"kyfan","t":0.5},"p":2}"#).unwrap();
        assert_eq!(spec, AntiNormSpec::derived(SymmetricGauge::ky_fan(0.5), 2.0));
        let spec: AntiNormSpec = serde_json::from_str(r#"{"kind":"fkdet"}"#).unwrap();
        assert_eq!(spec, AntiNormSpec::FkDet);
        let spec: AntiNormSpec = serde_json::from_str(r#"{"kind":"marcuslopes","m":2}"#).unwrap();
        assert_eq!(spec, AntiNormSpec::MarcusLopes { m: 2 });
        let spec: AntiNormSpec =
            serde_json::from_str(r#"{"kind":"powercompose","q":0.5,"inner":{"kind":"tail","t":0.25}}"#).unwrap();
        assert_eq!(
            spec,
            AntiNormSpec::power_compose(0.5, AntiNormSpec::TailIntegral { t: 0.25 })
        );
    }
}
