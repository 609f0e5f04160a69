//! One-sided (Hestenes) Jacobi SVD and the polar decomposition built on it.

use super::eigen::EigenDecomposition;
use super::matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `X = U diag(σ) V^*` with `σ` non-increasing and `U`, `V` unitary.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(x: &ComplexMatrix) -> Svd {
    let n = x.n();
    let mut w = x.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..n {
                    let a = w[(k, i)];
                    let b = w[(k, j)];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se = e * s;
                let sec = se.conj();
                for k in 0..n {
                    let a = w[(k, i)];
                    let b = w[(k, j)];
                    w[(k, i)] = a * c - b * sec;
                    w[(k, j)] = a * se + b * c;
                    let a = v[(k, i)];
                    let b = v[(k, j)];
                    v[(k, i)] = a * c - b * sec;
                    v[(k, j)] = a * se + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let scale = norms.iter().copied().fold(0.0, f64::max);
    let cutoff = scale * n as f64 * eps;
    let mut u = ComplexMatrix::zeros(n);
    let mut vs = ComplexMatrix::zeros(n);
    let mut sigma = Vec::with_capacity(n);
    let mut have = vec![false; n];
    for (dst, &src) in idx.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        vs.set_column(dst, &v.column(src));
        if s > cutoff && s > 0.0 {
            let col: Vec<C64> = w.column(src).iter().map(|z| z / s).collect();
            u.set_column(dst, &col);
            have[dst] = true;
        }
    }
    complete_orthonormal(&mut u, &have);
    Svd { u, sigma, v: vs }
}

/// Fills the columns not marked in `have` with an orthonormal completion of
/// the marked ones (Gram–Schmidt against standard basis vectors).
fn complete_orthonormal(u: &mut ComplexMatrix, have: &[bool]) {
    let n = u.n();
    let mut basis: Vec<Vec<C64>> = (0..n).filter(|&j| have[j]).map(|j| u.column(j)).collect();
    let mut candidate = 0usize;
    for (j, _) in have.iter().enumerate().filter(|(_, &h)| !h) {
        loop {
            assert!(candidate < n + n, "orthonormal completion failed");
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[candidate % n] = C64::new(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv > 1e-8 {
                for z in v.iter_mut() {
                    *z /= nv;
                }
                u.set_column(j, &v);
                basis.push(v);
                break;
            }
        }
    }
}

pub fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    svd(x).sigma
}

/// Operator norm `‖X‖_∞`.
pub fn operator_norm(x: &ComplexMatrix) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}

/// Polar decomposition `X = U P`, `P = |X|`, `U` a full unitary (completed
/// on the kernel when `X` is singular).
#[derive(Clone, Debug)]
pub struct Polar {
    pub unitary: UnitaryMatrix,
    pub modulus: HermitianMatrix,
    /// Eigendecomposition of `|X|`, reused by callers needing `f(|X|)`.
    pub modulus_eigen: EigenDecomposition,
}

pub fn polar(x: &ComplexMatrix) -> Polar {
    let Svd { u, sigma, v } = svd(x);
    let unitary = UnitaryMatrix::new_unchecked(&u * &v.adjoint());
    let eig = EigenDecomposition {
        values: sigma,
        vectors: v,
    };
    let modulus = HermitianMatrix::from_hermitian_part(&eig.reconstruct());
    Polar {
        unitary,
        modulus,
        modulus_eigen: eig,
    }
}

/// `|X| = (X^*X)^{1/2}`
pub fn modulus(x: &ComplexMatrix) -> HermitianMatrix {
    polar(x).modulus
}

/// Writes a contraction as the mean of two unitaries:
/// `T = U|T|`, `U1 = U(|T| + i√(I−|T|²))`, `U2 = U(|T| − i√(I−|T|²))`.
pub fn contraction_to_unitaries(t: &ComplexMatrix) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    let p = polar(t);
    let top = p.modulus_eigen.max();
    if top > 1.0 + 1e-12 {
        return Err(Error::NotContraction { norm: top });
    }
    let n = t.n();
    let q = &p.modulus_eigen.vectors;
    let diag = |sign: f64| -> ComplexMatrix {
        let d: Vec<C64> = p
            .modulus_eigen
            .values
            .iter()
            .map(|&s| {
                let s = s.clamp(0.0, 1.0);
                C64::new(s, sign * (1.0 - s * s).sqrt())
            })
            .collect();
        let mid = ComplexMatrix::from_complex_diag(&d);
        &(q * &mid) * &q.adjoint()
    };
    let w = p.unitary.as_matrix();
    let u1 = w * &diag(1.0);
    let u2 = w * &diag(-1.0);
    debug_assert_eq!(u1.n(), n);
    Ok((UnitaryMatrix::new_unchecked(u1), UnitaryMatrix::new_unchecked(u2)))
}
