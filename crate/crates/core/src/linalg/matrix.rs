use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_complex_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from real and imaginary row arrays; `im` may be empty.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if !im.is_empty() && im.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: im.len(),
            });
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            if re[i].len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} of the real part has {} entries, expected {n}",
                    re[i].len()
                )));
            }
            if !im.is_empty() && im[i].len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} of the imaginary part has {} entries, expected {n}",
                    im[i].len()
                )));
            }
            for j in 0..n {
                let y = if im.is_empty() { 0.0 } else { im[i][j] };
                m[(i, j)] = C64::new(re[i][j], y);
            }
        }
        if !m.is_finite() {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(m)
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// max |a_ij - conj(a_ji)|
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Matrix sum with a multiple of the identity.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += s;
        }
        m
    }

    /// `self * other * self^*`
    pub fn conjugate(&self, other: &ComplexMatrix) -> Self {
        &(self * other) * &self.adjoint()
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &ComplexMatrix) -> Self {
        let n = self.n + other.n;
        Self::from_fn(n, |i, j| {
            if i < self.n && j < self.n {
                self[(i, j)]
            } else if i >= self.n && j >= self.n {
                other[(i - self.n, j - self.n)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Hermitian matrix. Construction checks the defect and stores the exact
/// Hermitian part `(A + A^*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    base: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let defect = m.hermiticity_defect();
        let tolerance = 1e-12 * (1.0 + m.max_abs());
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(Self::symmetrized(m, defect))
    }

    /// Symmetrizes without checking; for products that are Hermitian in
    /// exact arithmetic (e.g. `X^* X`).
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        let defect = m.hermiticity_defect();
        Self::symmetrized(m.clone(), defect)
    }

    fn symmetrized(m: ComplexMatrix, defect: f64) -> Self {
        let n = m.n();
        let base = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                C64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Self {
            base,
            hermiticity_defect: defect,
        }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_hermitian_part(&ComplexMatrix::from_diag(diag))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Normalized trace `Tr(A)/n`.
    pub fn tau(&self) -> f64 {
        self.base.trace().re / self.n() as f64
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        Self::from_hermitian_part(&(&self.base + &other.base))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        Self::from_hermitian_part(&(&self.base - &other.base))
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        Self::from_hermitian_part(&self.base.scale(s))
    }

    pub fn shift(&self, s: f64) -> HermitianMatrix {
        Self::from_hermitian_part(&self.base.shift(s))
    }

    /// `U A U^*` for any square `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> HermitianMatrix {
        Self::from_hermitian_part(&u.conjugate(&self.base))
    }
}

/// Unitary matrix; construction checks `‖U^*U − I‖ ≤ 1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    base: ComplexMatrix,
}

pub const UNITARY_TOL: f64 = 1e-10;

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = unitarity_defect(&m);
        if defect > UNITARY_TOL {
            return Err(Error::InvalidMatrix(format!("not unitary: ‖U*U − I‖ = {defect:e}")));
        }
        Ok(Self { base: m })
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self { base: m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            base: ComplexMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self {
            base: self.base.adjoint(),
        }
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self {
            base: &self.base * &other.base,
        }
    }

    pub fn defect(&self) -> f64 {
        unitarity_defect(&self.base)
    }
}

/// Operator norm of `U^*U − I`, computed as the largest singular value.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let d = &(&u.adjoint() * u) - &ComplexMatrix::identity(u.n());
    let h = HermitianMatrix::from_hermitian_part(&d);
    let values = super::eigen::eigenvalues(&h);
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}
