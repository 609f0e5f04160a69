//! Unitary-orbit witnesses for the matrix inequalities behind the
//! superadditivity theorems. Every witness is certified by the smallest
//! eigenvalue of the difference of the two sides.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{Flag, ScalarFunction};
use crate::linalg::random::{haar_unitary_from_rng, random_hermitian, rng_from_seed};
use crate::linalg::{
    eigenvalues, eigh, polar, psd_eigenvalues, psd_function, psd_function_with, psd_margin, ComplexMatrix,
    HermitianMatrix, UnitaryMatrix, C64,
};

/// Witnesses are accepted when their PSD margin is at least `−ACCEPT_TOL`.
pub const ACCEPT_TOL: f64 = 1e-8;
/// Kernel cutoff for pseudo-inverses, relative to the operator norm.
pub const KERNEL_CUTOFF: f64 = 1e-12;
pub const SEARCH_SEEDS: u64 = 256;
pub const SEARCH_STEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMethod {
    Constructive,
    Search,
}

impl fmt::Display for WitnessMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessMethod::Constructive => "constructive",
            WitnessMethod::Search => "search",
        })
    }
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    pub unitaries: Vec<UnitaryMatrix>,
    pub psd_margin: f64,
    pub method: WitnessMethod,
    pub epsilon_used: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitMode {
    /// `g(A+B) + εI ≥ U g(A) U^* + V g(B) V^*` for convex `g ≥ 0`, `g(0) = 0`.
    ConvexSuper,
    /// `f(A+B) ≤ U f(A) U^* + V f(B) V^* + εI` for concave `f ≥ 0`.
    ConcaveSub,
}

impl std::str::FromStr for OrbitMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex_super" => Ok(OrbitMode::ConvexSuper),
            "concave_sub" => Ok(OrbitMode::ConcaveSub),
            other => Err(Error::InvalidParameter(format!(
                "unknown orbit mode `{other}` (expected convex_super or concave_sub)"
            ))),
        }
    }
}

impl OrbitMode {
    pub fn required_flags(self) -> &'static [Flag] {
        match self {
            OrbitMode::ConvexSuper => &[Flag::Convex, Flag::ZeroAtZero, Flag::NonNegative],
            OrbitMode::ConcaveSub => &[Flag::Concave, Flag::NonNegative],
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// An inequality `lower ≤ Σ wᵢ Uᵢ Rᵢ Uᵢ^*` (or its reverse) between a fixed
/// matrix and a weighted sum over unitary orbits, shifted by `εI` in favour
/// of the inequality.
struct OrbitInequality {
    fixed: HermitianMatrix,
    parts: Vec<(f64, HermitianMatrix)>,
    /// `true` when the fixed matrix is the larger side.
    fixed_on_top: bool,
    eps: f64,
}

impl OrbitInequality {
    fn margin(&self, unitaries: &[ComplexMatrix]) -> f64 {
        let n = self.fixed.n();
        let mut sum = ComplexMatrix::zeros(n);
        for ((w, r), u) in self.parts.iter().zip(unitaries) {
            sum = &sum + &u.conjugate(r.as_matrix()).scale(*w);
        }
        let diff = if self.fixed_on_top {
            self.fixed.as_matrix() - &sum
        } else {
            &sum - self.fixed.as_matrix()
        };
        psd_margin(&HermitianMatrix::from_hermitian_part(&diff.shift(self.eps)))
    }

    fn accept(&self, unitaries: Vec<ComplexMatrix>, method: WitnessMethod) -> Option<WitnessResult> {
        let margin = self.margin(&unitaries);
        (margin >= -ACCEPT_TOL).then(|| WitnessResult {
            unitaries: unitaries.into_iter().map(UnitaryMatrix::new_unchecked).collect(),
            psd_margin: margin,
            method,
            epsilon_used: self.eps,
        })
    }

    /// Seeded Haar starts followed by random geodesic refinement
    /// `U ← U exp(iδH)` with a shrinking step.
    fn search(&self, seed: u64) -> Result<WitnessResult> {
        let n = self.fixed.n();
        let k = self.parts.len();
        let mut best = f64::NEG_INFINITY;
        for trial in 0..SEARCH_SEEDS {
            let mut rng = rng_from_seed(seed.wrapping_mul(0x100_0000_01b3).wrapping_add(trial));
            let mut current: Vec<ComplexMatrix> = (0..k)
                .map(|_| haar_unitary_from_rng(n, &mut rng).into_matrix())
                .collect();
            let mut score = self.margin(&current);
            let mut step = 0.5;
            for _ in 0..SEARCH_STEPS {
                if score >= -ACCEPT_TOL {
                    break;
                }
                let proposal: Vec<ComplexMatrix> = current
                    .iter()
                    .map(|u| u * &unitary_exp(&random_hermitian(n, &mut rng), step * rng.random::<f64>()))
                    .collect();
                let s = self.margin(&proposal);
                if s > score {
                    current = proposal;
                    score = s;
                } else {
                    step *= 0.93;
                }
            }
            best = best.max(score);
            if let Some(w) = self.accept(current, WitnessMethod::Search) {
                return Ok(w);
            }
        }
        Err(Error::WitnessNotFound { best_margin: best })
    }
}

/// `exp(iδH)`
fn unitary_exp(h: &HermitianMatrix, delta: f64) -> ComplexMatrix {
    let e = eigh(h);
    let d: Vec<C64> = e.values.iter().map(|v| C64::from_polar(1.0, delta * v)).collect();
    let q = &e.vectors;
    &(q * &ComplexMatrix::from_complex_diag(&d)) * &q.adjoint()
}

/// `Q_B Q_A^*`, aligning the sorted eigenbases of `A` and `B`.
fn align(a: &HermitianMatrix, b: &HermitianMatrix) -> ComplexMatrix {
    &eigh(b).vectors * &eigh(a).vectors.adjoint()
}

/// `U` with `U A U^* ≤ B`, given `λ_k(A) ≤ λ_k(B)` for all `k`.
pub fn dominance_unitary(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<WitnessResult> {
    check_dims(a.n(), b.n())?;
    let la = eigenvalues(a);
    let lb = eigenvalues(b);
    let scale = la.iter().chain(&lb).fold(1.0f64, |m, v| m.max(v.abs()));
    for (k, (x, y)) in la.iter().zip(&lb).enumerate() {
        if *x > y + 1e-12 * scale {
            return Err(Error::DominanceViolated {
                index: k + 1,
                lhs: *x,
                rhs: *y,
            });
        }
    }
    let u = align(a, b);
    let margin = psd_margin(&b.sub(&a.conjugate_by(&u)));
    Ok(WitnessResult {
        unitaries: vec![UnitaryMatrix::new_unchecked(u)],
        psd_margin: margin,
        method: WitnessMethod::Constructive,
        epsilon_used: 0.0,
    })
}

/// `|BA| ≤ (A² + V B² V^*)/2` with `BA = V^*|BA|`.
pub fn agm_witness(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<WitnessResult> {
    check_dims(a.n(), b.n())?;
    let ba = b.as_matrix() * a.as_matrix();
    let p = polar(&ba);
    let v = p.unitary.adjoint();
    let a2 = a.as_matrix() * a.as_matrix();
    let b2 = HermitianMatrix::from_hermitian_part(&(b.as_matrix() * b.as_matrix()));
    let rhs = &(&a2 + b2.conjugate_by(v.as_matrix()).as_matrix()).scale(0.5) - p.modulus.as_matrix();
    Ok(WitnessResult {
        psd_margin: psd_margin(&HermitianMatrix::from_hermitian_part(&rhs)),
        unitaries: vec![v],
        method: WitnessMethod::Constructive,
        epsilon_used: 0.0,
    })
}

struct TriangleParts {
    w: UnitaryMatrix,
    sum_modulus: HermitianMatrix,
    /// `|X| + |Y|`
    m: HermitianMatrix,
    /// `|X^*| + |Y^*|`
    n: HermitianMatrix,
}

fn triangle_parts(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<TriangleParts> {
    check_dims(x.n(), y.n())?;
    let p = polar(&(x + y));
    let m = polar(x).modulus.add(&polar(y).modulus);
    let n = polar(&x.adjoint()).modulus.add(&polar(&y.adjoint()).modulus);
    Ok(TriangleParts {
        w: p.unitary,
        sum_modulus: p.modulus,
        m,
        n,
    })
}

/// `|X+Y| ≤ (|X| + |Y| + W^*(|X^*| + |Y^*|)W)/2` with `X + Y = W|X+Y|`.
pub fn triangle_witness(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<WitnessResult> {
    let t = triangle_parts(x, y)?;
    let wn = t.n.conjugate_by(t.w.adjoint().as_matrix());
    let rhs = &t.m.add(&wn).scale(0.5).into_matrix() - t.sum_modulus.as_matrix();
    Ok(WitnessResult {
        psd_margin: psd_margin(&HermitianMatrix::from_hermitian_part(&rhs)),
        unitaries: vec![t.w],
        method: WitnessMethod::Constructive,
        epsilon_used: 0.0,
    })
}

/// Contractions `K₁ = A^{1/2}T^{+1/2} + (I − Π)`, `K₂ = B^{1/2}T^{+1/2}`
/// with `T = A + B`, `Π` the range projection of `T`. They satisfy
/// `K₁^*K₁ + K₂^*K₂ = I` and `Kᵢ T Kᵢ^* = Aᵢ`.
fn contraction_pair(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<[ComplexMatrix; 2]> {
    let t = a.add(b);
    let e = eigh(&t);
    let cutoff = KERNEL_CUTOFF * e.max().max(0.0);
    let inv_sqrt = e.reconstruct_with(|v| if v > cutoff { 1.0 / v.sqrt() } else { 0.0 });
    let kernel = e.reconstruct_with(|v| if v > cutoff { 0.0 } else { 1.0 });
    let sa = psd_function_with(a, "sqrt", f64::sqrt)?;
    let sb = psd_function_with(b, "sqrt", f64::sqrt)?;
    Ok([&(sa.as_matrix() * &inv_sqrt) + &kernel, sb.as_matrix() * &inv_sqrt])
}

/// The orbit inequalities for a convex or concave function of a sum.
///
/// Constructive path: with `Kᵢ` from the contraction pair and
/// `G = f(T)^{1/2}`, the matrices `Xᵢ = KᵢG` satisfy `Σ Xᵢ^*Xᵢ = f(T)` and
/// `XᵢXᵢ^* = Kᵢ f(T) Kᵢ^*`, which is spectrally comparable with
/// `f(Kᵢ T Kᵢ^*) = f(Aᵢ)`. Polar phases of `Xᵢ` and eigenbasis alignment
/// assemble `U`, `V`. Falls back to a seeded search when the constructive
/// margin is not accepted.
pub fn orbit_witness(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &ScalarFunction,
    mode: OrbitMode,
    eps: f64,
) -> Result<WitnessResult> {
    orbit_witness_seeded(a, b, f, mode, eps, 0)
}

pub fn orbit_witness_seeded(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &ScalarFunction,
    mode: OrbitMode,
    eps: f64,
    seed: u64,
) -> Result<WitnessResult> {
    check_dims(a.n(), b.n())?;
    check_eps(eps)?;
    f.require(mode.required_flags())?;
    psd_eigenvalues(a)?;
    psd_eigenvalues(b)?;
    let t = a.add(b);
    let ft = psd_function(&t, f)?;
    let fa = psd_function(a, f)?;
    let fb = psd_function(b, f)?;
    let problem = OrbitInequality {
        fixed: ft.clone(),
        parts: vec![(1.0, fa.clone()), (1.0, fb.clone())],
        fixed_on_top: mode == OrbitMode::ConvexSuper,
        eps,
    };

    let g = psd_function_with(&ft, "sqrt", f64::sqrt)?;
    let ks = contraction_pair(a, b)?;
    let mut unitaries = Vec::with_capacity(2);
    for (k, fi) in ks.iter().zip([&fa, &fb]) {
        let x = k * g.as_matrix();
        let w = polar(&x).unitary.into_matrix();
        let compressed = HermitianMatrix::from_hermitian_part(&k.conjugate(ft.as_matrix()));
        // X^*X = W^* (K f(T) K^*) W
        let u = match mode {
            OrbitMode::ConcaveSub => &w.adjoint() * &align(&compressed, fi).adjoint(),
            OrbitMode::ConvexSuper => &w.adjoint() * &align(fi, &compressed),
        };
        unitaries.push(u);
    }
    if let Some(found) = problem.accept(unitaries, WitnessMethod::Constructive) {
        return Ok(found);
    }
    problem.search(seed)
}

/// `g(|X+Y|) ≤ (U g(|X|+|Y|) U^* + V g(|X^*|+|Y^*|) V^*)/2 + εI` for
/// non-decreasing convex `g`.
///
/// `g(|X+Y|)` is spectrally dominated by `g((M + W^*NW)/2)`, which in turn
/// is dominated by `(g(M) + W^*g(N)W)/2`; one alignment unitary finishes.
pub fn mixed_witness(x: &ComplexMatrix, y: &ComplexMatrix, g: &ScalarFunction, eps: f64) -> Result<WitnessResult> {
    mixed_witness_seeded(x, y, g, eps, 0)
}

pub fn mixed_witness_seeded(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    g: &ScalarFunction,
    eps: f64,
    seed: u64,
) -> Result<WitnessResult> {
    check_eps(eps)?;
    g.require(&[Flag::NonDecreasing, Flag::Convex])?;
    let t = triangle_parts(x, y)?;
    let lhs = psd_function(&t.sum_modulus, g)?;
    let gm = psd_function(&t.m, g)?;
    let gn = psd_function(&t.n, g)?;
    let problem = OrbitInequality {
        fixed: lhs.clone(),
        parts: vec![(0.5, gm.clone()), (0.5, gn.clone())],
        fixed_on_top: false,
        eps,
    };
    let wa = t.w.adjoint().into_matrix();
    let rhs = gm.add(&gn.conjugate_by(&wa)).scale(0.5);
    let d = align(&lhs, &rhs).adjoint();
    let unitaries = vec![d.clone(), &d * &wa];
    if let Some(found) = problem.accept(unitaries, WitnessMethod::Constructive) {
        return Ok(found);
    }
    problem.search(seed)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "eps",
            value: eps,
            range: "[0, inf)".into(),
        })
    }
}

/// Re-certifies a witness for the orbit inequality independently of the
/// construction that produced it.
pub fn orbit_margin(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &ScalarFunction,
    mode: OrbitMode,
    eps: f64,
    witness: &WitnessResult,
) -> Result<f64> {
    let problem = OrbitInequality {
        fixed: psd_function(&a.add(b), f)?,
        parts: vec![(1.0, psd_function(a, f)?), (1.0, psd_function(b, f)?)],
        fixed_on_top: mode == OrbitMode::ConvexSuper,
        eps,
    };
    Ok(problem.margin(&unitary_matrices(witness)))
}

/// Independent re-certification of a mixed witness.
pub fn mixed_margin(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    g: &ScalarFunction,
    eps: f64,
    witness: &WitnessResult,
) -> Result<f64> {
    let t = triangle_parts(x, y)?;
    let problem = OrbitInequality {
        fixed: psd_function(&t.sum_modulus, g)?,
        parts: vec![(0.5, psd_function(&t.m, g)?), (0.5, psd_function(&t.n, g)?)],
        fixed_on_top: false,
        eps,
    };
    Ok(problem.margin(&unitary_matrices(witness)))
}

fn unitary_matrices(w: &WitnessResult) -> Vec<ComplexMatrix> {
    w.unitaries.iter().map(|u| u.as_matrix().clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{identity, power};
    use crate::linalg::random::{random_complex, random_psd};

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diag(v)
    }

    #[test]
    fn dominance_examples() {
        let w = dominance_unitary(&diag(&[1.0, 1.0]), &diag(&[3.0, 2.0])).unwrap();
        assert!((w.psd_margin - 1.0).abs() < 1e-14);
        let a = diag(&[2.0, 5.0]);
        assert!(dominance_unitary(&a, &a).unwrap().psd_margin.abs() < 1e-12);
        match dominance_unitary(&diag(&[3.0, 1.0]), &diag(&[2.0, 2.0])).unwrap_err() {
            Error::DominanceViolated { index, .. } => assert_eq!(index, 1),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn dominance_random_sorted_draws() {
        let mut rng = rng_from_seed(17);
        for _ in 0..100 {
            let n = 4;
            let base: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 3.0).collect();
            let upper: Vec<f64> = base.iter().map(|v| v + rng.random::<f64>()).collect();
            let a = diag(&base).conjugate_by(haar_unitary_from_rng(n, &mut rng).as_matrix());
            let b = diag(&upper).conjugate_by(haar_unitary_from_rng(n, &mut rng).as_matrix());
            let w = dominance_unitary(&a, &b).unwrap();
            assert!(w.psd_margin >= -1e-10);
            let shifted = dominance_unitary(&a, &b.shift(0.25)).unwrap();
            assert!((shifted.psd_margin - w.psd_margin - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn agm_examples() {
        let a = diag(&[2.0, 1.0]);
        let w = agm_witness(&a, &HermitianMatrix::from_real_diag(&[0.0, 0.0])).unwrap();
        assert!((w.psd_margin - 0.5).abs() < 1e-14);
        let id = agm_witness(&HermitianMatrix::identity(3), &HermitianMatrix::identity(3)).unwrap();
        assert!(id.psd_margin.abs() < 1e-14);
        let mut rng = rng_from_seed(3);
        for _ in 0..100 {
            let w = agm_witness(&random_psd(4, &mut rng), &random_psd(4, &mut rng)).unwrap();
            assert!(w.psd_margin >= -1e-9);
            assert!(w.unitaries[0].defect() < 1e-10);
        }
    }

    #[test]
    fn triangle_examples() {
        let mut rng = rng_from_seed(5);
        let x = random_complex(3, &mut rng);
        let w = triangle_witness(&x, &x.scale(-1.0)).unwrap();
        assert!(w.psd_margin >= -1e-12);
        for _ in 0..100 {
            let w = triangle_witness(&random_complex(4, &mut rng), &random_complex(4, &mut rng)).unwrap();
            assert!(w.psd_margin >= -1e-9, "{}", w.psd_margin);
        }
    }

    #[test]
    fn linear_orbit_is_trivial() {
        let mut rng = rng_from_seed(1);
        let a = random_psd(3, &mut rng);
        let b = random_psd(3, &mut rng);
        let f = identity();
        for mode in [OrbitMode::ConvexSuper, OrbitMode::ConcaveSub] {
            let w = orbit_witness(&a, &b, &f, mode, 0.0).unwrap();
            assert_eq!(w.method, WitnessMethod::Constructive);
            assert!(w.psd_margin.abs() < 1e-10);
        }
    }

    #[test]
    fn convex_diagonal_needs_no_eps() {
        let g = power(2.0).unwrap();
        let w = orbit_witness(
            &diag(&[1.0, 2.0, 0.0]),
            &diag(&[0.5, 0.0, 3.0]),
            &g,
            OrbitMode::ConvexSuper,
            0.0,
        )
        .unwrap();
        assert!(w.psd_margin >= -1e-12);
        let recheck = orbit_margin(
            &diag(&[1.0, 2.0, 0.0]),
            &diag(&[0.5, 0.0, 3.0]),
            &g,
            OrbitMode::ConvexSuper,
            0.0,
            &w,
        )
        .unwrap();
        assert_eq!(recheck, w.psd_margin);
    }

    #[test]
    fn random_orbit_witnesses() {
        let mut rng = rng_from_seed(21);
        let sq = power(2.0).unwrap();
        let root = power(0.5).unwrap();
        for _ in 0..50 {
            let a = random_psd(4, &mut rng);
            let b = random_psd(4, &mut rng);
            let w = orbit_witness(&a, &b, &sq, OrbitMode::ConvexSuper, 0.0).unwrap();
            assert_eq!(w.method, WitnessMethod::Constructive);
            assert!(w.psd_margin >= -1e-9);
            let w = orbit_witness(&a, &b, &root, OrbitMode::ConcaveSub, 0.0).unwrap();
            assert_eq!(w.method, WitnessMethod::Constructive);
            assert!(w.psd_margin >= -1e-9);
        }
    }

    #[test]
    fn rank_deficient_orbit() {
        let mut rng = rng_from_seed(2);
        let a = crate::linalg::random::random_psd_rank(4, 1, &mut rng);
        let b = crate::linalg::random::random_psd_rank(4, 2, &mut rng);
        let root = power(0.5).unwrap();
        let w = orbit_witness(&a, &b, &root, OrbitMode::ConcaveSub, 0.0).unwrap();
        assert!(w.psd_margin >= -1e-8);
        let w = orbit_witness(&a, &b, &power(3.0).unwrap(), OrbitMode::ConvexSuper, 0.0).unwrap();
        assert!(w.psd_margin >= -1e-8);
    }

    #[test]
    fn mixed_witnesses() {
        let mut rng = rng_from_seed(6);
        let x = random_complex(3, &mut rng);
        let w = mixed_witness(&x, &ComplexMatrix::zeros(3), &identity(), 0.0).unwrap();
        assert!(w.psd_margin >= -1e-10);
        let sq = power(2.0).unwrap();
        for _ in 0..50 {
            let x = crate::linalg::random::random_real(4, &mut rng);
            let y = crate::linalg::random::random_real(4, &mut rng);
            let w = mixed_witness(&x, &y, &sq, 0.0).unwrap();
            assert_eq!(w.method, WitnessMethod::Constructive);
            assert!(mixed_margin(&x, &y, &sq, 0.0, &w).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn flags_are_required() {
        let root = power(0.5).unwrap();
        let err = orbit_witness(&diag(&[1.0]), &diag(&[1.0]), &root, OrbitMode::ConvexSuper, 0.0).unwrap_err();
        assert_eq!(err.code(), "E_MISSING_FLAG");
    }

    #[test]
    fn search_finds_witness_for_easy_target() {
        let problem = OrbitInequality {
            fixed: diag(&[1.0, 0.0]),
            parts: vec![(1.0, diag(&[0.0, 1.0]))],
            fixed_on_top: false,
            eps: 1e-3,
        };
        let w = problem.search(3).unwrap();
        assert_eq!(w.method, WitnessMethod::Search);
        assert!(w.psd_margin >= -ACCEPT_TOL);
    }
}
