//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair with a unitary plane
//! rotation `G = [[c, s·e], [−s·ē, c]]` where `e` is the phase of `a_pq`.
//! Sweeps repeat until the off-diagonal mass is below `1e-17 · ‖A‖_F`
//! (quadratic convergence makes this cheap at desk-scale dimensions).

use super::matrix::{ComplexMatrix, HermitianMatrix, C64};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted non-increasing with a unitary of matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `Q f(Λ) Q^*` for an arbitrary map of the eigenvalues.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<C64> = self.values.iter().map(|&v| C64::new(f(v), 0.0)).collect();
        let n = self.values.len();
        let q = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &d) in mapped.iter().enumerate() {
                    acc += q[(i, k)] * d * q[(j, k)].conj();
                }
                out[(i, j)] = acc;
                if i != j {
                    out[(j, i)] = acc.conj();
                } else {
                    out[(i, i)] = C64::new(acc.re, 0.0);
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|v| v)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Full eigendecomposition. Deterministic for a fixed input.
pub fn eigh(a: &HermitianMatrix) -> EigenDecomposition {
    let (values, vectors) = jacobi(a.as_matrix(), true);
    let vectors = vectors.expect("vectors requested");
    order(values, vectors)
}

/// Eigenvalues only, sorted non-increasing.
pub fn eigenvalues(a: &HermitianMatrix) -> Vec<f64> {
    let (mut values, _) = jacobi(a.as_matrix(), false);
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

fn jacobi(input: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = input.n();
    let mut a = input.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius();
    if scale == 0.0 || n == 1 {
        let values = (0..n).map(|i| a[(i, i)].re).collect();
        return (values, v);
    }
    let threshold = (1e-17 * scale).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r < 1e-300 {
                    continue;
                }
                let e = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se = e * s;
                let sec = se.conj();

                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * sec;
                    a[(k, q)] = akp * se + akq * c;
                }
                // A <- G^* A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * se;
                    a[(q, k)] = apk * sec + aqk * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * sec;
                        v[(k, q)] = vkp * se + vkq * c;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}

/// Sort non-increasing; phase-normalize each eigenvector so that its
/// largest-modulus entry (lowest index among near-ties) is real positive.
/// Exactly equal eigenvalues are ordered by that pivot index.
fn order(values: Vec<f64>, vectors: ComplexMatrix) -> EigenDecomposition {
    let n = values.len();
    let mut cols: Vec<(f64, usize, Vec<C64>)> = (0..n)
        .map(|j| {
            let mut col = vectors.column(j);
            let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = col.iter().position(|z| z.norm() >= peak * (1.0 - 1e-12)).unwrap_or(0);
            let phase = col[pivot].conj() / col[pivot].norm();
            if phase.re.is_finite() && phase.im.is_finite() {
                for z in col.iter_mut() {
                    *z *= phase;
                }
            }
            (values[j], pivot, col)
        })
        .collect();
    cols.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut q = ComplexMatrix::zeros(n);
    let mut sorted = Vec::with_capacity(n);
    for (j, (val, _, col)) in cols.into_iter().enumerate() {
        q.set_column(j, &col);
        sorted.push(val);
    }
    EigenDecomposition {
        values: sorted,
        vectors: q,
    }
}

/// Smallest eigenvalue; `A` is PSD at tolerance `tol` iff this is `≥ −tol`.
pub fn psd_margin(a: &HermitianMatrix) -> f64 {
    eigenvalues(a).last().copied().unwrap_or(0.0)
}
