//! Spectral scales `λ_t(A)`, s-numbers `μ_t(X)` and their integrals.
//!
//! Step scales represent both matrices (widths `1/n`) and hand-built
//! operators of the diffuse algebra; analytic scales cover formulas such
//! as `exp(−1/√(1−s))` whose integrals need quadrature.

mod analytic;
pub mod quadrature;
mod step;

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use analytic::AnalyticScale;
pub use step::{merged_breakpoints, s_numbers, spectral_scale, SpectralScale, Step};

/// The integrand applied to `λ_s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegralMode {
    /// `λ_s`
    Plain,
    /// `log λ_s`
    Log,
    /// `λ_s^{−p}`, `p > 0`
    NegPower(f64),
    /// `λ_s^q` for any real `q`
    Power(f64),
}

impl IntegralMode {
    pub fn describe(&self) -> String {
        match self {
            IntegralMode::Plain => "lambda".into(),
            IntegralMode::Log => "log(lambda)".into(),
            IntegralMode::NegPower(p) => format!("lambda^(-{p})"),
            IntegralMode::Power(q) => format!("lambda^({q})"),
        }
    }
}

/// Result of integrating a scale: a number or a certified infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum IntegralValue {
    Finite(f64),
    /// `+∞` (e.g. a zero value under a negative power).
    Divergent,
    /// `−∞` (e.g. a zero value under the logarithm).
    NegInfinite,
}

impl IntegralValue {
    pub fn to_f64(self) -> f64 {
        match self {
            IntegralValue::Finite(v) => v,
            IntegralValue::Divergent => f64::INFINITY,
            IntegralValue::NegInfinite => f64::NEG_INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            IntegralValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

pub(crate) fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if 0.0 <= lo && lo < hi && hi <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInterval { lo, hi })
    }
}

/// Common interface of step and analytic scales.
pub trait Scale: Send + Sync {
    /// `∫_lo^hi h(λ_s) ds` for `0 ≤ lo < hi ≤ 1`.
    fn integral(&self, lo: f64, hi: f64, mode: IntegralMode) -> Result<IntegralValue>;
    fn value_at(&self, t: f64) -> f64;
    /// `λ_0`
    fn sup(&self) -> f64;
    /// `λ_1 := lim_{t↗1} λ_t`
    fn inf(&self) -> f64;
    fn as_step(&self) -> Option<&SpectralScale> {
        None
    }
    fn describe(&self) -> String;
}

/// Either kind of scale, as loaded from a file or a name.
#[derive(Clone, Debug)]
pub enum AnyScale {
    Step(SpectralScale),
    Analytic(AnalyticScale),
}

impl AnyScale {
    pub fn as_scale(&self) -> &dyn Scale {
        match self {
            AnyScale::Step(s) => s,
            AnyScale::Analytic(a) => a,
        }
    }
}

#[derive(serde::Deserialize)]
struct ScaleFile {
    steps: Vec<(f64, f64)>,
}

pub fn scale_from_json(text: &str) -> Result<SpectralScale> {
    let file: ScaleFile = serde_json::from_str(text)?;
    SpectralScale::from_steps(&file.steps)
}

pub fn scale_to_json(scale: &SpectralScale) -> String {
    serde_json::to_string(scale).expect("scale serializes")
}

pub fn load_scale(path: &Path) -> Result<SpectralScale> {
    scale_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{power, ScalarFunction};
    use crate::linalg::random::{random_complex, random_hermitian, random_psd, rng_from_seed};
    use crate::linalg::{eigenvalues, matrix_function, ComplexMatrix, HermitianMatrix};

    fn scale(steps: &[(f64, f64)]) -> SpectralScale {
        SpectralScale::from_steps(steps).unwrap()
    }

    fn pairs(s: &SpectralScale) -> Vec<(f64, f64)> {
        s.steps().iter().map(|s| (s.width, s.value)).collect()
    }

    #[test]
    fn diagonal_scale() {
        let s = spectral_scale(&HermitianMatrix::from_real_diag(&[3.0, 1.0]));
        assert_eq!(pairs(&s), vec![(0.5, 3.0), (0.5, 1.0)]);
    }

    #[test]
    fn identity_merges_to_one_step() {
        let s = spectral_scale(&HermitianMatrix::identity(5));
        assert_eq!(pairs(&s), vec![(1.0, 1.0)]);
    }

    /// `λ_t = inf{s : #(eigs > s)/n ≤ t}`, evaluated by bisection-free
    /// search over the eigenvalues themselves.
    fn counting_oracle(eigs: &[f64], t: f64) -> f64 {
        let n = eigs.len() as f64;
        let mut cands: Vec<f64> = eigs.to_vec();
        cands.sort_by(f64::total_cmp);
        cands
            .into_iter()
            .find(|&s| eigs.iter().filter(|&&e| e > s).count() as f64 / n <= t)
            .unwrap()
    }

    #[test]
    fn matches_counting_definition() {
        let mut rng = rng_from_seed(4);
        for _ in 0..20 {
            let a = random_hermitian(5, &mut rng);
            let eigs = eigenvalues(&a);
            let s = spectral_scale(&a);
            for i in 0..200 {
                let t = i as f64 / 200.0;
                assert_eq!(s.value_at(t), counting_oracle(&eigs, t), "t = {t}");
            }
        }
    }

    #[test]
    fn s_numbers_examples() {
        let u = crate::linalg::haar_unitary(4, 3);
        let s = s_numbers(u.as_matrix());
        assert_eq!(s.steps().len(), 1);
        assert!((s.steps()[0].value - 1.0).abs() < 1e-12);
        let s = s_numbers(&ComplexMatrix::from_diag(&[-2.0, 1.0]));
        assert_eq!(pairs(&s), vec![(0.5, 2.0), (0.5, 1.0)]);
    }

    #[test]
    fn s_numbers_match_gram_eigenvalues() {
        let mut rng = rng_from_seed(8);
        for n in 1..=6 {
            let x = random_complex(n, &mut rng);
            let gram = HermitianMatrix::from_hermitian_part(&(&x.adjoint() * &x));
            let oracle: Vec<f64> = eigenvalues(&gram).iter().map(|v| v.max(0.0).sqrt()).collect();
            let s = s_numbers(&x);
            for (i, o) in oracle.iter().enumerate() {
                let t = (i as f64 + 0.5) / n as f64;
                assert!((s.value_at(t) - o).abs() < 1e-10);
            }
            let sa = s_numbers(&x.adjoint());
            for i in 0..n {
                let t = (i as f64 + 0.5) / n as f64;
                assert!((s.value_at(t) - sa.value_at(t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn truncation() {
        let a = scale(&[(0.5, 3.0), (0.5, 1.0)]);
        assert_eq!(pairs(&a.truncate(2.0)), vec![(0.5, 2.0), (0.5, 1.0)]);
        assert_eq!(a.truncate(3.0), a);
        assert_eq!(a.truncate(10.0), a);
        assert_eq!(pairs(&a.truncate(0.5)), vec![(1.0, 0.5)]);
    }

    #[test]
    fn truncation_monotone_and_converges() {
        let mut rng = rng_from_seed(12);
        let a = spectral_scale(&random_psd(6, &mut rng));
        let mut prev = 0.0;
        for k in 0..40 {
            let s = 0.05 * k as f64;
            let t = a.truncate(s);
            for i in 0..60 {
                let x = i as f64 / 60.0;
                assert!(t.value_at(x) <= a.value_at(x));
            }
            assert!(t.tau() >= prev);
            prev = t.tau();
        }
        assert!((a.truncate(1e6).tau() - a.tau()).abs() < 1e-15);
    }

    #[test]
    fn plain_step_integral() {
        let a = scale(&[(0.5, 3.0), (0.5, 1.0)]);
        let v = a.integral(0.0, 0.75, IntegralMode::Plain).unwrap();
        assert_eq!(v, IntegralValue::Finite(1.75));
        assert!(a.integral(0.5, 0.5, IntegralMode::Plain).is_err());
        assert!(a.integral(-0.1, 0.5, IntegralMode::Plain).is_err());
    }

    #[test]
    fn zero_values_give_infinities() {
        let a = scale(&[(0.5, 3.0), (0.5, 0.0)]);
        assert_eq!(
            a.integral(0.0, 1.0, IntegralMode::Log).unwrap(),
            IntegralValue::NegInfinite
        );
        assert_eq!(
            a.integral(0.0, 1.0, IntegralMode::NegPower(0.5)).unwrap(),
            IntegralValue::Divergent
        );
        let head = a.integral(0.0, 0.5, IntegralMode::Log).unwrap();
        assert_eq!(head, IntegralValue::Finite(0.5 * 3f64.ln()));
    }

    #[test]
    fn trace_equals_plain_integral() {
        let mut rng = rng_from_seed(13);
        for n in 1..=8 {
            let a = random_hermitian(n, &mut rng);
            let s = spectral_scale(&a);
            let v = s.integral(0.0, 1.0, IntegralMode::Plain).unwrap().to_f64();
            assert!((v - a.tau()).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_scale_integrals() {
        let b = AnalyticScale::exp_inv_sqrt();
        let closed = b.integral(0.0, 1.0, IntegralMode::Log).unwrap().to_f64();
        assert!((closed + 2.0).abs() < 1e-12);
        let quad = b.integral_by_quadrature(0.0, 1.0, IntegralMode::Log).unwrap().to_f64();
        assert!((quad + 2.0).abs() < 1e-6, "{quad}");
        for p in [0.01, 0.1, 1.0] {
            assert_eq!(
                b.integral_by_quadrature(0.0, 1.0, IntegralMode::NegPower(p)).unwrap(),
                IntegralValue::Divergent
            );
            assert_eq!(
                b.integral(0.0, 1.0, IntegralMode::NegPower(p)).unwrap(),
                IntegralValue::Divergent
            );
        }
        // Away from s = 1 everything is finite.
        let v = b.integral(0.0, 0.5, IntegralMode::NegPower(1.0)).unwrap();
        assert!(v.finite().is_some());
    }

    #[test]
    fn exp_neg_quadrature_matches_closed_form() {
        let a = AnalyticScale::exp_neg();
        for mode in [
            IntegralMode::Plain,
            IntegralMode::Log,
            IntegralMode::NegPower(0.3),
            IntegralMode::Power(2.5),
        ] {
            for (lo, hi) in [(0.0, 1.0), (0.25, 0.9), (0.5, 1.0)] {
                let c = a.integral(lo, hi, mode).unwrap().to_f64();
                let q = a.integral_by_quadrature(lo, hi, mode).unwrap().to_f64();
                assert!((c - q).abs() < 1e-12, "{mode:?} ({lo},{hi}): {c} vs {q}");
            }
        }
        assert!((a.sup() - 1.0).abs() < 1e-15);
        assert!((a.inf() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn analytic_monotonicity_checked() {
        assert!(AnalyticScale::from_values("increasing", |s| 1.0 + s).is_err());
        assert!(AnalyticScale::from_values("decreasing", |s| 2.0 - s).is_ok());
        assert!(AnalyticScale::named("nope").is_err());
        let c = AnalyticScale::named("constant:3").unwrap();
        assert!((c.integral(0.0, 1.0, IntegralMode::Plain).unwrap().to_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn apply_function_examples() {
        let a = scale(&[(0.5, 3.0), (0.5, 1.0)]);
        let sq = power(2.0).unwrap();
        assert_eq!(pairs(&a.apply_function(&sq).unwrap()), vec![(0.5, 9.0), (0.5, 1.0)]);
        let c = ScalarFunction::parse("2").unwrap();
        assert_eq!(pairs(&a.apply_function(&c).unwrap()), vec![(1.0, 2.0)]);
        let b = scale(&[(0.5, 3.0), (0.5, 0.0)]);
        let f = ScalarFunction::parse("(t-2)^2").unwrap();
        let got = b.apply_function(&f).unwrap();
        assert_eq!(pairs(&got), vec![(0.5, 4.0), (0.5, 1.0)]);
        let oracle = spectral_scale(&matrix_function(&HermitianMatrix::from_real_diag(&[3.0, 0.0]), &f).unwrap());
        assert_eq!(got, oracle);
        let inv = ScalarFunction::parse("1/t").unwrap();
        assert_eq!(b.apply_function(&inv).unwrap_err().code(), "E_DOMAIN");
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = scale(&[(0.25, 2.0), (0.75, -1.0)]);
        assert_eq!(scale_from_json(&scale_to_json(&a)).unwrap(), a);
        assert_eq!(a.lattice(), Some(4));
        assert!(scale_from_json(r#"{"steps":[[0.5,1],[0.5,2]]}"#).is_err());
        assert!(scale_from_json(r#"{"steps":[[0.5,1],[0.4,0]]}"#).is_err());
        assert!(scale_from_json(r#"{"steps":[[0,1],[1,0]]}"#).is_err());
        let odd = scale(&[(0.1234567, 1.0), (0.8765433, 0.0)]);
        assert_eq!(odd.lattice(), None);
    }

    #[test]
    fn lattice_breakpoints_are_exact() {
        let a = spectral_scale(&HermitianMatrix::from_real_diag(&[5.0, 4.0, 3.0]));
        let b = spectral_scale(&HermitianMatrix::from_real_diag(&[6.0, 5.0, 4.0, 3.0, 2.0, 1.0]));
        let merged = merged_breakpoints(&a, &b);
        assert_eq!(merged.len(), 7);
        assert_eq!(merged[2], 1.0 / 3.0);
    }
}
