//! The superadditivity theorems and their corollaries, one check per
//! statement. Every check evaluates both sides on the given instance and
//! returns an [`InequalityReport`] with `margin = lhs − rhs`.

use super::report::{Fingerprint, InequalityReport, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::functions::{inverse_power_sum_function, Flag, ScalarFunction};
use crate::gauges::{antinorm_eval_eigenvalues, gauge_power, norm_eval_matrix, AntiNormSpec, SymmetricGauge};
use crate::linalg::{elementary_symmetric, matrix_function_with, psd_eigenvalues, HermitianMatrix};
use crate::spectral::SpectralScale;

fn pair_fingerprint(a: &HermitianMatrix, b: &HermitianMatrix) -> Fingerprint {
    Fingerprint::new().matrix(a.as_matrix()).matrix(b.as_matrix())
}

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// Eigenvalues of a PSD matrix that must be nonsingular (smallest above 1e-10).
fn nonsingular_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let e = psd_eigenvalues(a)?;
    let min = e.last().copied().unwrap_or(0.0);
    if min <= 1e-10 {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    Ok(e)
}

/// `‖g(A+B)‖_! ≥ ‖g(A)‖_! + ‖g(B)‖_!` for convex `g ≥ 0` with `g(0) = 0`.
pub fn check_superadditivity(
    spec: &AntiNormSpec,
    g: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    g.require(&[Flag::Convex, Flag::ZeroAtZero, Flag::NonNegative])?;
    superadditivity_of(spec, g, a, b, "superadditivity")
}

/// `‖ψ(A+B)‖_! ≥ ‖ψ(A)‖_! + ‖ψ(B)‖_!` for class-S `ψ` and derived `‖·‖_!`.
pub fn check_class_s_superadditivity(
    spec: &AntiNormSpec,
    psi: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    if !spec.is_derived() {
        return Err(Error::Unsupported(format!(
            "class-S superadditivity is stated for derived anti-norms, got {}",
            spec.describe()
        )));
    }
    psi.require(&[Flag::ClassS])?;
    superadditivity_of(spec, psi, a, b, "class_s_superadditivity")
}

fn superadditivity_of(
    spec: &AntiNormSpec,
    g: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    case: &str,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    // spectral mapping: the eigenvalues of g(X) are g of those of X
    let eval = |x: &HermitianMatrix| -> Result<f64> {
        let mut mapped: Vec<f64> = psd_eigenvalues(x)?.into_iter().map(|t| g.eval(t)).collect();
        mapped.sort_by(|u, v| v.total_cmp(u));
        Ok(antinorm_eval_eigenvalues(spec, &mapped)?.value)
    };
    let lhs = eval(&a.add(b))?;
    let rhs = eval(a)? + eval(b)?;
    Ok(InequalityReport::at_least(case, lhs, rhs, DEFAULT_TOLERANCE)
        .params(format!("antinorm={} g={}", spec.describe(), g.description()))
        .fingerprint(pair_fingerprint(a, b)))
}

/// `Π ‖(A+B)^{−pᵢ}‖^{−1} ≥ Π ‖A^{−pᵢ}‖^{−1} + Π ‖B^{−pᵢ}‖^{−1}` for
/// `Σ pᵢ ≥ 1`.
pub fn check_product_inequality(
    g: &SymmetricGauge,
    ps: &[f64],
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    g.validate()?;
    if ps.is_empty() || ps.iter().any(|p| !(*p > 0.0 && p.is_finite())) || ps.iter().sum::<f64>() < 1.0 {
        return Err(Error::InvalidParameter(
            "product inequality needs positive exponents with sum >= 1".into(),
        ));
    }
    let product = |x: &HermitianMatrix| -> Result<f64> {
        let scale = SpectralScale::from_sorted_values(&nonsingular_eigenvalues(x)?)?;
        let mut acc = 1.0;
        for p in ps {
            acc /= gauge_power(g, &scale, -p)?;
        }
        Ok(acc)
    };
    let lhs = product(&a.add(b))?;
    let rhs = product(a)? + product(b)?;
    Ok(InequalityReport::at_least("product", lhs, rhs, DEFAULT_TOLERANCE)
        .params(format!("gauge={} ps={ps:?}", g.describe()))
        .fingerprint(pair_fingerprint(a, b)))
}

/// `‖Σ_{k≤m} (A+B)^{−k}‖^{−1} ≥ ‖Σ_{k≤m} A^{−k}‖^{−1} + ‖Σ_{k≤m} B^{−k}‖^{−1}`.
/// The convexity of `t^m/(1 + ⋯ + t^{m−1})` is certified numerically first.
pub fn check_inverse_power_sum(
    g: &SymmetricGauge,
    m: u32,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    g.validate()?;
    inverse_power_sum_function(m)?.require(&[Flag::Convex, Flag::ZeroAtZero])?;
    let value = |x: &HermitianMatrix| -> Result<f64> {
        nonsingular_eigenvalues(x)?;
        let sum = matrix_function_with(x, "sum t^-k", |t| (1..=m as i32).map(|k| t.powi(-k)).sum())?;
        Ok(1.0 / norm_eval_matrix(g, sum.as_matrix())?)
    };
    let lhs = value(&a.add(b))?;
    let rhs = value(a)? + value(b)?;
    Ok(
        InequalityReport::at_least("inverse_power_sum", lhs, rhs, DEFAULT_TOLERANCE)
            .params(format!("gauge={} m={m}", g.describe()))
            .fingerprint(pair_fingerprint(a, b)),
    )
}

/// `{e_m/e_{m−1}}^{1/q}` of the eigenvalues of `g^q(X)`.
fn marcus_lopes_q(g: &ScalarFunction, q: f64, m: usize, x: &HermitianMatrix) -> Result<f64> {
    let mut values: Vec<f64> = nonsingular_eigenvalues(x)?
        .into_iter()
        .map(|v| g.eval(v).powf(q))
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    let num = elementary_symmetric(&values, m)?;
    let den = elementary_symmetric(&values, m - 1)?;
    Ok((num / den).powf(1.0 / q))
}

/// The Marcus–Lopes corollary for strictly increasing convex `g` with
/// `g(0) = 0`; `m = q = 1` is the Rotfel'd trace inequality.
pub fn check_marcus_lopes_ratio(
    g: &ScalarFunction,
    q: f64,
    m: usize,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::OutOfRange {
            what: "q",
            value: q,
            range: "(0, 1]".into(),
        });
    }
    if m == 0 || m > a.n() {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as f64,
            range: format!("[1, {}]", a.n()),
        });
    }
    g.require(&[Flag::StrictlyIncreasing, Flag::Convex, Flag::ZeroAtZero])?;
    let lhs = marcus_lopes_q(g, q, m, &a.add(b))?;
    let rhs = marcus_lopes_q(g, q, m, a)? + marcus_lopes_q(g, q, m, b)?;
    Ok(
        InequalityReport::at_least("marcus_lopes_ratio", lhs, rhs, DEFAULT_TOLERANCE)
            .params(format!("g={} q={q} m={m}", g.description()))
            .fingerprint(pair_fingerprint(a, b)),
    )
}

/// `τ(g^p(A+B))/τ(ψ^{p−1}(A+B)) ≥` the same at `A` plus at `B`.
pub fn check_trace_ratio(
    g: &ScalarFunction,
    psi: &ScalarFunction,
    p: f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: "(0, 1]".into(),
        });
    }
    g.require(&[Flag::Convex, Flag::ZeroAtZero, Flag::NonNegative])?;
    psi.require(&[Flag::ClassS, Flag::StrictlyIncreasing])?;
    let ratio = |x: &HermitianMatrix| -> Result<f64> {
        let e = nonsingular_eigenvalues(x)?;
        let n = e.len() as f64;
        let num: f64 = e.iter().map(|&v| g.eval(v).powf(p)).sum::<f64>() / n;
        let den: f64 = e.iter().map(|&v| psi.eval(v).powf(p - 1.0)).sum::<f64>() / n;
        Ok(num / den)
    };
    let lhs = ratio(&a.add(b))?;
    let rhs = ratio(a)? + ratio(b)?;
    Ok(InequalityReport::at_least("trace_ratio", lhs, rhs, DEFAULT_TOLERANCE)
        .params(format!("g={} psi={} p={p}", g.description(), psi.description()))
        .fingerprint(pair_fingerprint(a, b)))
}

/// `Δ(√(ψω)(A+B)) ≥ Δ(√(ψω)(A)) + Δ(√(ψω)(B))` for class-S `ψ`, `ω`.
/// The identity `Δ(√(ψω)(X)) = {Δ(ψ(X))Δ(ω(X))}^{1/2}` is asserted on
/// every evaluation.
pub fn check_det_minkowski(
    psi: &ScalarFunction,
    omega: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<InequalityReport> {
    same_dim(a, b)?;
    psi.require(&[Flag::ClassS])?;
    omega.require(&[Flag::ClassS])?;
    let det = |x: &HermitianMatrix| -> Result<f64> {
        let ev = psd_eigenvalues(x)?;
        let fk = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
            let mapped: Vec<f64> = ev.iter().map(|&t| f(t)).collect();
            Ok(antinorm_eval_eigenvalues(&AntiNormSpec::FkDet, &mapped)?.value)
        };
        let direct = fk(&|t| (psi.eval(t) * omega.eval(t)).sqrt())?;
        let split = (fk(&|t| psi.eval(t))? * fk(&|t| omega.eval(t))?).sqrt();
        let scale = direct.abs().max(split.abs()).max(f64::MIN_POSITIVE);
        if (direct - split).abs() > 1e-8 * scale {
            return Err(Error::InvalidParameter(format!(
                "geometric-mean identity failed: {direct} vs {split}"
            )));
        }
        Ok(direct)
    };
    let lhs = det(&a.add(b))?;
    let rhs = det(a)? + det(b)?;
    Ok(InequalityReport::at_least("det_minkowski", lhs, rhs, DEFAULT_TOLERANCE)
        .params(format!("psi={} omega={}", psi.description(), omega.description()))
        .fingerprint(pair_fingerprint(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{angle, identity, min_power, power, t_arctan};
    use crate::linalg::random::{random_psd, random_psd_nonsingular, rng_from_seed};

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    #[test]
    fn linear_tail_integral_is_the_axiom() {
        let r = check_superadditivity(
            &AntiNormSpec::TailIntegral { t: 0.5 },
            &identity(),
            &diag(&[1.0, 3.0]),
            &diag(&[2.0, 0.5]),
        )
        .unwrap();
        assert!(r.pass && r.margin >= 0.0);
    }

    #[test]
    fn angle_derived_random() {
        let mut rng = rng_from_seed(12);
        let spec = AntiNormSpec::derived(SymmetricGauge::ky_fan(0.5), 2.0);
        let g = angle(1.0).unwrap();
        for _ in 0..50 {
            let r = check_superadditivity(&spec, &g, &random_psd(4, &mut rng), &random_psd(4, &mut rng)).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn rotfeld_matches_schatten_one() {
        let mut rng = rng_from_seed(13);
        let g = power(2.0).unwrap();
        for _ in 0..20 {
            let a = random_psd_nonsingular(4, 0.1, &mut rng);
            let b = random_psd_nonsingular(4, 0.1, &mut rng);
            let ml = check_marcus_lopes_ratio(&g, 1.0, 1, &a, &b).unwrap();
            let sq = check_superadditivity(&AntiNormSpec::SchattenQ { q: 1.0 }, &g, &a, &b).unwrap();
            assert!((ml.margin / 4.0 - sq.margin).abs() <= 1e-12 * ml.lhs.max(1.0));
        }
    }

    #[test]
    fn marcus_lopes_hand_values() {
        let r = check_marcus_lopes_ratio(
            &identity(),
            1.0,
            2,
            &diag(&[1.0, 2.0, 3.0]),
            &HermitianMatrix::identity(3),
        )
        .unwrap();
        // e2/e1 of (2,3,4) = 26/9, of (1,2,3) = 11/6, of (1,1,1) = 1
        assert!((r.lhs - 26.0 / 9.0).abs() < 1e-14);
        assert!((r.rhs - (11.0 / 6.0 + 1.0)).abs() < 1e-14);
        assert!(r.margin >= 0.0);
    }

    #[test]
    fn inverse_power_sum_diagonal() {
        let a = diag(&[1.0, 2.0]);
        let b = diag(&[2.0, 1.0]);
        let r = check_inverse_power_sum(&SymmetricGauge::ky_fan(1.0), 3, &a, &b).unwrap();
        let s = |t: f64| 1.0 / t + 1.0 / (t * t) + 1.0 / (t * t * t);
        let value = |x: f64, y: f64| 1.0 / ((s(x) + s(y)) / 2.0);
        assert!((r.lhs - value(3.0, 3.0)).abs() < 1e-14);
        assert!((r.rhs - 2.0 * value(1.0, 2.0)).abs() < 1e-14);
        assert!(r.margin >= 0.0);
    }

    #[test]
    fn product_identity_case() {
        let id = HermitianMatrix::identity(3);
        let r = check_product_inequality(&SymmetricGauge::ky_fan(1.0), &[0.5, 0.5], &id, &id).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14 && (r.rhs - 2.0).abs() < 1e-14);
        assert!(check_product_inequality(&SymmetricGauge::ky_fan(1.0), &[0.3, 0.3], &id, &id).is_err());
        let err =
            check_product_inequality(&SymmetricGauge::ky_fan(1.0), &[1.0], &diag(&[1.0, 1.0, 0.0]), &id).unwrap_err();
        assert_eq!(err.code(), "E_SINGULAR");
    }

    #[test]
    fn trace_ratio_and_minkowski() {
        let sq = power(2.0).unwrap();
        let r = check_trace_ratio(&sq, &sq, 0.5, &diag(&[1.0, 2.0]), &diag(&[2.0, 1.0])).unwrap();
        assert!(r.margin >= 0.0);
        let id = identity();
        let r = check_det_minkowski(&id, &id, &diag(&[1.0, 4.0]), &diag(&[4.0, 1.0])).unwrap();
        // Δ(A+B) = 5, Δ(A) = Δ(B) = 2
        assert!((r.lhs - 5.0).abs() < 1e-13 && (r.rhs - 4.0).abs() < 1e-13);
        let mut rng = rng_from_seed(2);
        let m = min_power(1.0, 2.0).unwrap();
        for _ in 0..20 {
            let a = random_psd(3, &mut rng);
            let b = random_psd(3, &mut rng);
            assert!(check_det_minkowski(&t_arctan(), &sq, &a, &b).unwrap().pass);
            assert!(check_det_minkowski(&m, &t_arctan(), &a, &b).unwrap().pass);
        }
    }

    #[test]
    fn preconditions_rejected() {
        let sqrt = power(0.5).unwrap();
        let id = HermitianMatrix::identity(2);
        let err = check_superadditivity(&AntiNormSpec::FkDet, &sqrt, &id, &id).unwrap_err();
        assert_eq!(err.code(), "E_MISSING_FLAG");
        let lying = ScalarFunction::new(
            "sqrt(t) declared convex",
            &[Flag::Convex, Flag::ZeroAtZero, Flag::NonNegative],
            f64::sqrt,
        );
        let err = check_superadditivity(&AntiNormSpec::FkDet, &lying, &id, &id).unwrap_err();
        assert_eq!(err.code(), "E_FLAG_REFUTED");
        let err = check_class_s_superadditivity(&AntiNormSpec::FkDet, &identity(), &id, &id).unwrap_err();
        assert_eq!(err.code(), "E_UNSUPPORTED");
    }
}
