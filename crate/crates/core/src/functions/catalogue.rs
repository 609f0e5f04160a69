//! Named functions with their known properties declared, and the
//! class-S composition.

use super::{Flag, ScalarFunction};
use crate::error::{Error, Result};

use Flag::*;

const POSITIVE_CONVEX: [Flag; 8] = [
    Convex,
    Superadditive,
    LogConcave,
    NonDecreasing,
    StrictlyIncreasing,
    NonNegative,
    ZeroAtZero,
    ClassS,
];

/// Upper end of the domain of `t ↦ h(t^γ)` with `h` of exponential growth,
/// keeping values far from overflow.
fn exponential_domain(gamma: f64) -> f64 {
    300f64.powf(1.0 / gamma).min(super::DEFAULT_DOMAIN_MAX)
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

pub fn identity() -> ScalarFunction {
    ScalarFunction::new("t", &Flag::ALL, |t| t)
}

/// `t^p` for `p > 0`; convex when `p ≥ 1`, concave when `p ≤ 1`.
pub fn power(p: f64) -> Result<ScalarFunction> {
    check(p > 0.0 && p.is_finite(), "power exponent must be positive")?;
    let flags: &[Flag] = if p == 1.0 {
        &Flag::ALL
    } else if p > 1.0 {
        &POSITIVE_CONVEX
    } else {
        &[
            Concave,
            LogConcave,
            NonDecreasing,
            StrictlyIncreasing,
            NonNegative,
            ZeroAtZero,
        ]
    };
    let desc = format!("t^{p}");
    Ok(if p.fract() == 0.0 && p <= 64.0 {
        let k = p as i32;
        ScalarFunction::new(desc, flags, move |t| t.powi(k))
    } else {
        ScalarFunction::new(desc, flags, move |t| t.powf(p))
    })
}

/// The angle function `(t − α)_+`.
pub fn angle(alpha: f64) -> Result<ScalarFunction> {
    check(alpha > 0.0, "angle offset must be positive")?;
    Ok(ScalarFunction::new(
        format!("max(t - {alpha}, 0)"),
        &[
            Convex,
            Superadditive,
            LogConcave,
            NonDecreasing,
            NonNegative,
            ZeroAtZero,
            ClassS,
        ],
        move |t| (t - alpha).max(0.0),
    ))
}

pub fn t_arctan() -> ScalarFunction {
    ScalarFunction::new("t*arctan(t)", &POSITIVE_CONVEX, |t| t * t.atan())
}

const CONVEX_NOT_LOG_CONCAVE: [Flag; 7] = [
    Convex,
    Superadditive,
    NonDecreasing,
    StrictlyIncreasing,
    NonNegative,
    ZeroAtZero,
    ClassS,
];

/// `sinh(t^γ)`, `γ > 1`.
pub fn sinh_power(gamma: f64) -> Result<ScalarFunction> {
    check(gamma > 1.0, "sinh exponent must exceed 1")?;
    Ok(ScalarFunction::with_domain(
        format!("sinh(t^{gamma})"),
        &CONVEX_NOT_LOG_CONCAVE,
        exponential_domain(gamma),
        move |t| t.powf(gamma).sinh(),
    ))
}

/// `t·exp(t^γ)`, `γ > 1`.
pub fn t_exp_power(gamma: f64) -> Result<ScalarFunction> {
    check(gamma > 1.0, "exp exponent must exceed 1")?;
    Ok(ScalarFunction::with_domain(
        format!("t*exp(t^{gamma})"),
        &CONVEX_NOT_LOG_CONCAVE,
        exponential_domain(gamma),
        move |t| t * t.powf(gamma).exp(),
    ))
}

const LOG_CONCAVE_NOT_CONVEX: [Flag; 6] = [
    Superadditive,
    LogConcave,
    NonDecreasing,
    NonNegative,
    ZeroAtZero,
    ClassS,
];

/// `min{t^α, t^β}` with `1 ≤ α < β`.
pub fn min_power(alpha: f64, beta: f64) -> Result<ScalarFunction> {
    check(1.0 <= alpha && alpha < beta, "min power needs 1 <= alpha < beta")?;
    let mut flags = LOG_CONCAVE_NOT_CONVEX.to_vec();
    flags.push(StrictlyIncreasing);
    Ok(ScalarFunction::new(
        format!("min(t^{alpha}, t^{beta})"),
        &flags,
        move |t| t.powf(alpha).min(t.powf(beta)),
    ))
}

/// `t^α exp(−1/t^β)` with `α ≥ 1` and `β > 2α − 1 + 2√(α(α−1))`.
pub fn exp_power_damped(alpha: f64, beta: f64) -> Result<ScalarFunction> {
    let threshold = 2.0 * alpha - 1.0 + 2.0 * (alpha * (alpha - 1.0)).sqrt();
    check(
        alpha >= 1.0 && beta > threshold,
        "damped power needs alpha >= 1 and beta above threshold",
    )?;
    Ok(ScalarFunction::new(
        format!("t^{alpha}*exp(-1/t^{beta})"),
        &LOG_CONCAVE_NOT_CONVEX,
        move |t| {
            if t == 0.0 {
                0.0
            } else {
                t.powf(alpha) * (-t.powf(-beta)).exp()
            }
        },
    ))
}

/// `(t − a)·1_[b,∞)(t)` with `0 < a < b`; discontinuous at `b`.
pub fn shifted_indicator(a: f64, b: f64) -> Result<ScalarFunction> {
    check(0.0 < a && a < b, "shifted indicator needs 0 < a < b")?;
    Ok(ScalarFunction::new(
        format!("(t - {a})*indicator(t - {b})"),
        &LOG_CONCAVE_NOT_CONVEX,
        move |t| if t >= b { t - a } else { 0.0 },
    ))
}

/// `ψ = f ∘ g` with `f` superadditive log-concave and `g` superadditive
/// convex with `g(0) = 0`. The result is flagged as a class-S member,
/// superadditive and non-decreasing with `ψ(0) = 0`.
pub fn compose_class_s(f: &ScalarFunction, g: &ScalarFunction) -> Result<ScalarFunction> {
    f.require(&[Superadditive, LogConcave])?;
    g.require(&[Superadditive, Convex, ZeroAtZero])?;
    let mut flags = vec![ClassS, Superadditive, NonDecreasing, NonNegative, ZeroAtZero];
    if f.has(StrictlyIncreasing) && g.has(StrictlyIncreasing) {
        flags.push(StrictlyIncreasing);
    }
    let desc = if f.description() == "t" {
        g.description().to_string()
    } else if g.description() == "t" {
        f.description().to_string()
    } else {
        format!("({}) o ({})", f.description(), g.description())
    };
    let (fc, gc) = (f.clone(), g.clone());
    Ok(ScalarFunction::with_domain(desc, &flags, g.domain_max(), move |t| {
        fc.eval(gc.eval(t))
    }))
}

/// `g_m(t) = t^m / (1 + t + ⋯ + t^{m−1}) = (Σ_{k=1}^m t^{−k})^{−1}`.
pub fn inverse_power_sum_function(m: u32) -> Result<ScalarFunction> {
    check(m >= 1, "inverse power sum order must be at least 1")?;
    if m == 1 {
        return Ok(identity());
    }
    Ok(ScalarFunction::new(
        format!("t^{m}/(1 + ... + t^{})", m - 1),
        &POSITIVE_CONVEX,
        move |t| {
            if t <= 1.0 {
                let denom: f64 = (0..m).map(|k| t.powi(k as i32)).sum();
                t.powi(m as i32) / denom
            } else {
                let s: f64 = (1..=m).map(|k| t.powi(-(k as i32))).sum();
                1.0 / s
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{verify_properties, VerifyGrid};

    fn report(f: &ScalarFunction) -> crate::functions::PropertyReport {
        verify_properties(f, &VerifyGrid::for_domain(f.domain_max()))
    }

    fn assert_flags(f: &ScalarFunction, holds: &[Flag], fails: &[Flag]) {
        let r = report(f);
        for &flag in holds {
            assert!(
                r.holds(flag),
                "{}: {flag} should hold: {:?}",
                f.description(),
                r.get(flag)
            );
        }
        for &flag in fails {
            let c = r.get(flag);
            assert!(!c.holds, "{}: {flag} should be refuted", f.description());
            assert!(c.witness.is_some());
        }
    }

    #[test]
    fn declared_flags_verify_across_catalogue() {
        let all = [
            identity(),
            power(2.0).unwrap(),
            power(1.5).unwrap(),
            power(0.5).unwrap(),
            angle(1.0).unwrap(),
            t_arctan(),
            sinh_power(2.0).unwrap(),
            t_exp_power(1.5).unwrap(),
            min_power(1.0, 2.0).unwrap(),
            min_power(1.5, 3.0).unwrap(),
            exp_power_damped(1.0, 1.5).unwrap(),
            exp_power_damped(2.0, 6.0).unwrap(),
            shifted_indicator(0.5, 1.0).unwrap(),
        ];
        for f in &all {
            let r = report(f);
            assert!(r.declared_hold(), "{}: {:?}", f.description(), r.checks);
        }
    }

    #[test]
    fn power_and_angle_in_both_subclasses() {
        let both = [Convex, Superadditive, LogConcave];
        assert_flags(&power(3.0).unwrap(), &both, &[Concave]);
        assert_flags(&angle(0.7).unwrap(), &both, &[Concave, StrictlyIncreasing]);
        assert_flags(&t_arctan(), &both, &[Concave]);
    }

    #[test]
    fn exponential_growth_is_not_log_concave() {
        let f = sinh_power(2.0).unwrap();
        assert_flags(&f, &[Convex, Superadditive], &[LogConcave]);
        let g = t_exp_power(2.0).unwrap();
        assert_flags(&g, &[Convex, Superadditive], &[LogConcave]);
    }

    #[test]
    fn min_power_is_log_concave_not_convex() {
        let f = min_power(1.0, 2.0).unwrap();
        assert_flags(&f, &[Superadditive, LogConcave], &[Convex]);
        let d = exp_power_damped(1.0, 2.0).unwrap();
        assert_flags(&d, &[Superadditive, LogConcave], &[Convex]);
        let s = shifted_indicator(0.5, 1.0).unwrap();
        assert_flags(&s, &[Superadditive, LogConcave], &[Convex]);
    }

    #[test]
    fn damped_power_below_threshold_rejected() {
        assert!(exp_power_damped(2.0, 5.0).is_err());
        assert!(min_power(2.0, 1.0).is_err());
        assert!(sinh_power(1.0).is_err());
    }

    #[test]
    fn composition_with_identity() {
        let sq = power(2.0).unwrap();
        let psi = compose_class_s(&identity(), &sq).unwrap();
        for t in [0.0, 0.3, 1.0, 7.0] {
            assert_eq!(psi.eval(t), t * t);
        }
        assert!(psi.has(ClassS));
    }

    #[test]
    fn composition_neither_convex_nor_log_concave() {
        let f = min_power(1.0, 2.0).unwrap();
        let g = sinh_power(2.0).unwrap();
        let psi = compose_class_s(&f, &g).unwrap();
        assert_flags(
            &psi,
            &[Superadditive, NonDecreasing, ZeroAtZero, ClassS],
            &[Convex, LogConcave],
        );
    }

    #[test]
    fn composition_rejects_missing_flags() {
        let sq = power(2.0).unwrap();
        let e = compose_class_s(&sq, &sinh_power(2.0).unwrap());
        assert!(e.is_ok());
        let err = compose_class_s(&sinh_power(2.0).unwrap(), &sq).unwrap_err();
        assert_eq!(err.code(), "E_MISSING_FLAG");
        let err = compose_class_s(&identity(), &min_power(1.0, 2.0).unwrap()).unwrap_err();
        assert_eq!(err.code(), "E_MISSING_FLAG");
    }

    #[test]
    fn inverse_power_sum_values() {
        let g1 = inverse_power_sum_function(1).unwrap();
        assert_eq!(g1.eval(2.5), 2.5);
        let g2 = inverse_power_sum_function(2).unwrap();
        assert_eq!(g2.eval(1.0), 0.5);
        for m in 1..=10u32 {
            let g = inverse_power_sum_function(m).unwrap();
            for i in 1..200 {
                let t = 0.05 * i as f64;
                let oracle = 1.0 / (1..=m).map(|k| t.powi(-(k as i32))).sum::<f64>();
                let direct = t.powi(m as i32) / (0..m).map(|k| t.powi(k as i32)).sum::<f64>();
                assert!((g.eval(t) - oracle).abs() <= 1e-13 * oracle.max(1e-300));
                assert!((g.eval(t) - direct).abs() <= 1e-13 * direct.max(1e-300));
            }
        }
        assert!(inverse_power_sum_function(0).is_err());
    }

    #[test]
    fn inverse_power_sum_convex_on_wide_grid() {
        let g = inverse_power_sum_function(10).unwrap();
        let r = verify_properties(&g, &VerifyGrid::log_spaced(1e-6, 100.0, 2000));
        assert!(r.holds(Convex), "{:?}", r.get(Convex));
        assert!(r.holds(ZeroAtZero));
    }
}
