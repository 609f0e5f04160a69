//! Seeded random matrices. All generators take the RNG explicitly so that
//! every instance is reproducible from a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn random_complex(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| gaussian_c64(rng))
}

/// Real Gaussian matrix.
pub fn random_real(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let g = random_complex(n, rng);
    HermitianMatrix::from_hermitian_part(&(&g + &g.adjoint()).scale(0.5))
}

/// `G G^* / n` with Gaussian `G`.
pub fn random_psd(n: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let g = random_complex(n, rng);
    HermitianMatrix::from_hermitian_part(&(&g * &g.adjoint()).scale(1.0 / n as f64))
}

/// Random PSD matrix whose smallest eigenvalue is at least `floor`.
pub fn random_psd_nonsingular(n: usize, floor: f64, rng: &mut impl Rng) -> HermitianMatrix {
    let a = random_psd(n, rng);
    let shift = floor * (1.0 + rng.random::<f64>());
    a.shift(shift)
}

/// Random PSD matrix with a prescribed rank (`rank ≤ n`).
pub fn random_psd_rank(n: usize, rank: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let u = haar_unitary_from_rng(n, rng);
    let diag: Vec<f64> = (0..n)
        .map(|i| if i < rank { 0.2 + 2.0 * rng.random::<f64>() } else { 0.0 })
        .collect();
    HermitianMatrix::from_real_diag(&diag).conjugate_by(u.as_matrix())
}

/// Haar-distributed unitary from an explicit RNG.
///
/// Gram–Schmidt on a Ginibre matrix yields `G = QR` with `diag(R) > 0`,
/// which is exactly the phase-corrected QR whose `Q` is Haar distributed.
pub fn haar_unitary_from_rng(n: usize, rng: &mut impl Rng) -> UnitaryMatrix {
    loop {
        let g = random_complex(n, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return UnitaryMatrix::new_unchecked(q);
        }
    }
}

/// Haar unitary, deterministic per `(n, seed)`.
pub fn haar_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    haar_unitary_from_rng(n, &mut rng)
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
/// Returns `None` if a column is numerically dependent.
pub(crate) fn orthonormalize_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.n();
    let mut q = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut v = g.column(j);
        let norm0 = norm(&v);
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let proj: C64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(&qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let nv = norm(&v);
        if nv <= 1e-10 * norm0.max(1e-300) {
            return None;
        }
        for z in v.iter_mut() {
            *z /= nv;
        }
        q.set_column(j, &v);
    }
    Some(q)
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_is_unimodular() {
        let u = haar_unitary(1, 5);
        assert!((u.as_matrix()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        assert_eq!(haar_unitary(5, 42), haar_unitary(5, 42));
        assert_ne!(haar_unitary(5, 42), haar_unitary(5, 43));
    }

    #[test]
    fn six_by_six_unitary() {
        for seed in 0..20 {
            assert!(haar_unitary(6, seed).defect() <= 1e-10);
        }
    }

    #[test]
    fn haar_first_entry_modulus_mean() {
        // For Haar U in U(n), E|u_11|^2 = 1/n.
        let mut rng = rng_from_seed(1);
        let n = 4;
        let trials = 4000;
        let mean: f64 = (0..trials)
            .map(|_| haar_unitary_from_rng(n, &mut rng).as_matrix()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
    }
}
