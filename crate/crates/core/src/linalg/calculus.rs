use super::eigen::{eigh, EigenDecomposition};
use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use crate::functions::ScalarFunction;

/// `f(A) = Q f(Λ) Q^*`. Fails with a domain error naming the first
/// eigenvalue at which `f` is not finite.
pub fn matrix_function(a: &HermitianMatrix, f: &ScalarFunction) -> Result<HermitianMatrix> {
    apply_to_eigen(&eigh(a), f.description(), |x| f.eval(x))
}

/// Same as [`matrix_function`] for a closure.
pub fn matrix_function_with(a: &HermitianMatrix, name: &str, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    apply_to_eigen(&eigh(a), name, f)
}

pub fn apply_to_eigen(e: &EigenDecomposition, name: &str, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    for &v in &e.values {
        if !f(v).is_finite() {
            return Err(Error::Domain {
                function: name.to_string(),
                value: v,
            });
        }
    }
    Ok(HermitianMatrix::from_hermitian_part(&e.reconstruct_with(f)))
}

/// `f(A)` for a matrix asserted PSD: eigenvalues are clamped at zero
/// (see [`psd_eigenvalues`]) before `f` is applied.
pub fn psd_function(a: &HermitianMatrix, f: &ScalarFunction) -> Result<HermitianMatrix> {
    psd_function_with(a, f.description(), |x| f.eval(x))
}

pub fn psd_function_with(a: &HermitianMatrix, name: &str, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let mut e = eigh(a);
    e.values = clamp_psd(e.values)?;
    apply_to_eigen(&e, name, f)
}

/// Eigenvalues of a matrix asserted PSD. Rejects eigenvalues below
/// `−1e-10 · max(1, ‖A‖)`; values under the round-off floor
/// `8 n ε ‖A‖` become exactly zero.
pub fn psd_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let values = super::eigen::eigenvalues(a);
    clamp_psd(values)
}

pub(crate) fn clamp_psd(mut values: Vec<f64>) -> Result<Vec<f64>> {
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -1e-10 * top.max(1.0);
    if let Some(&min) = values.last() {
        if min < floor {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let noise = 8.0 * values.len() as f64 * f64::EPSILON * top;
    for v in values.iter_mut() {
        if *v <= noise {
            *v = 0.0;
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::ScalarFunction;
    use crate::linalg::random::{random_psd, rng_from_seed};
    use crate::linalg::ComplexMatrix;

    #[test]
    fn identity_function() {
        let mut rng = rng_from_seed(1);
        let a = random_psd(4, &mut rng);
        let id = ScalarFunction::parse("t").unwrap();
        let b = matrix_function(&a, &id).unwrap();
        assert!((b.as_matrix() - a.as_matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn square_root_of_diagonal() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 4.0]);
        let f = ScalarFunction::parse("sqrt(t)").unwrap();
        let b = matrix_function(&a, &f).unwrap();
        assert!((b.as_matrix() - &ComplexMatrix::from_diag(&[1.0, 2.0])).max_abs() < 1e-15);
    }

    #[test]
    fn square_matches_product() {
        let mut rng = rng_from_seed(4);
        for _ in 0..10 {
            let a = random_psd(5, &mut rng);
            let sq = matrix_function_with(&a, "t^2", |x| x * x).unwrap();
            let direct = a.as_matrix() * a.as_matrix();
            assert!((sq.as_matrix() - &direct).max_abs() < 1e-10);
        }
    }

    #[test]
    fn domain_error_names_eigenvalue() {
        let a = HermitianMatrix::from_real_diag(&[2.0, 0.0]);
        let err = matrix_function_with(&a, "t^-1", |x| x.powf(-1.0)).unwrap_err();
        match err {
            Error::Domain { value, .. } => assert_eq!(value, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn composition_commutes_with_calculus() {
        let mut rng = rng_from_seed(8);
        let a = random_psd(4, &mut rng);
        let g = |x: f64| x + 0.5;
        let f = |x: f64| x.ln();
        let once = matrix_function_with(&a, "log(t+0.5)", |x| f(g(x))).unwrap();
        let inner = matrix_function_with(&a, "t+0.5", g).unwrap();
        let twice = matrix_function_with(&inner, "log", f).unwrap();
        assert!((once.as_matrix() - twice.as_matrix()).max_abs() < 1e-9);
    }
}
