//! Numeric verification of declared function properties.
//!
//! Every check is pointwise (no derivatives), so discontinuous functions
//! are handled. A refuted flag carries the points that refute it.

use rand::Rng;
use serde::Serialize;

use super::{Flag, ScalarFunction};
use crate::linalg::random::rng_from_seed;

/// Points and sampling budget used by [`verify_properties`].
#[derive(Clone, Debug)]
pub struct VerifyGrid {
    /// Sorted positive abscissae; `0` is always checked in addition.
    pub points: Vec<f64>,
    /// Number of random pairs for superadditivity and log-concavity.
    pub pairs: usize,
    pub seed: u64,
    /// Relative tolerance.
    pub tolerance: f64,
}

impl VerifyGrid {
    /// `count` log-spaced points on `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Self {
        assert!(lo > 0.0 && hi > lo && count >= 3);
        let (a, b) = (lo.ln(), hi.ln());
        let points = (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
            .collect();
        Self {
            points,
            pairs: 10_000,
            seed: 0x5eed,
            tolerance: 1e-9,
        }
    }

    /// The default grid: 2000 log-spaced points on `(1e-6, min(1e3, t_max))`.
    pub fn for_domain(t_max: f64) -> Self {
        Self::log_spaced(1e-6, t_max.min(1e3), 2000)
    }

    fn lo(&self) -> f64 {
        self.points[0]
    }

    fn hi(&self) -> f64 {
        *self.points.last().expect("non-empty grid")
    }
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self::for_domain(1e3)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagCheck {
    pub flag: Flag,
    pub declared: bool,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub function: String,
    pub checks: Vec<FlagCheck>,
}

impl PropertyReport {
    pub fn holds(&self, flag: Flag) -> bool {
        self.get(flag).holds
    }

    pub fn get(&self, flag: Flag) -> &FlagCheck {
        self.checks.iter().find(|c| c.flag == flag).expect("all flags checked")
    }

    /// True when every declared flag was confirmed.
    pub fn declared_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.declared || c.holds)
    }
}

/// Confirms or refutes every flag (declared or not) on `grid`.
pub fn verify_properties(f: &ScalarFunction, grid: &VerifyGrid) -> PropertyReport {
    let mut xs = Vec::with_capacity(grid.points.len() + 1);
    xs.push(0.0);
    xs.extend_from_slice(&grid.points);
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();

    let checks = if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
        let witness = format!("f({}) = {} is not finite", xs[i], ys[i]);
        Flag::ALL
            .iter()
            .map(|&flag| FlagCheck {
                flag,
                declared: f.has(flag),
                holds: false,
                witness: Some(witness.clone()),
            })
            .collect()
    } else {
        let pairs = sample_pairs(grid);
        let v = Verifier {
            f,
            xs: &xs,
            ys: &ys,
            pairs: &pairs,
            tol: grid.tolerance,
        };
        let superadditive = v.superadditive();
        let non_decreasing = v.non_decreasing();
        let zero = v.zero_at_zero();
        let class_s = superadditive
            .clone()
            .or_else(|| non_decreasing.clone())
            .or_else(|| zero.clone());
        let results = [
            (Flag::Convex, v.convex(1.0)),
            (Flag::Concave, v.convex(-1.0)),
            (Flag::Superadditive, superadditive),
            (Flag::LogConcave, v.log_concave()),
            (Flag::NonDecreasing, non_decreasing),
            (Flag::StrictlyIncreasing, v.strictly_increasing()),
            (Flag::NonNegative, v.non_negative()),
            (Flag::ZeroAtZero, zero),
            (Flag::ClassS, class_s),
        ];
        results
            .into_iter()
            .map(|(flag, witness)| FlagCheck {
                flag,
                declared: f.has(flag),
                holds: witness.is_none(),
                witness,
            })
            .collect()
    };
    PropertyReport {
        function: f.description().to_string(),
        checks,
    }
}

/// Log-uniform pairs `(a, b)` with `a + b` inside the grid range.
fn sample_pairs(grid: &VerifyGrid) -> Vec<(f64, f64)> {
    let mut rng = rng_from_seed(grid.seed);
    let (lo, hi) = (grid.lo().ln(), (grid.hi() / 2.0).max(grid.lo()).ln());
    (0..grid.pairs)
        .map(|_| {
            let a = rng.random_range(lo..=hi).exp();
            let b = rng.random_range(lo..=hi).exp();
            (a, b)
        })
        .collect()
}

struct Verifier<'a> {
    f: &'a ScalarFunction,
    xs: &'a [f64],
    ys: &'a [f64],
    pairs: &'a [(f64, f64)],
    tol: f64,
}

impl Verifier<'_> {
    fn slack(&self, values: &[f64]) -> f64 {
        self.tol * values.iter().map(|v| v.abs()).sum::<f64>() + 1e-300
    }

    /// `sign = 1` checks convexity, `sign = −1` concavity.
    fn convex(&self, sign: f64) -> Option<String> {
        for i in 1..self.xs.len() - 1 {
            let (x0, x1, x2) = (self.xs[i - 1], self.xs[i], self.xs[i + 1]);
            let (y0, y1, y2) = (self.ys[i - 1], self.ys[i], self.ys[i + 1]);
            let chord = ((x2 - x1) * y0 + (x1 - x0) * y2) / (x2 - x0);
            if sign * (y1 - chord) > self.slack(&[y0, y1, y2]) {
                return Some(format!("f({x0:e}) = {y0:e}, f({x1:e}) = {y1:e}, f({x2:e}) = {y2:e}"));
            }
        }
        None
    }

    fn non_decreasing(&self) -> Option<String> {
        for w in 0..self.xs.len() - 1 {
            let (y0, y1) = (self.ys[w], self.ys[w + 1]);
            if y1 < y0 - self.slack(&[y0, y1]) {
                return Some(format!(
                    "f({:e}) = {y0:e} > f({:e}) = {y1:e}",
                    self.xs[w],
                    self.xs[w + 1]
                ));
            }
        }
        None
    }

    fn strictly_increasing(&self) -> Option<String> {
        for w in 0..self.xs.len() - 1 {
            let (y0, y1) = (self.ys[w], self.ys[w + 1]);
            if y1 <= y0 {
                return Some(format!(
                    "f({:e}) = {y0:e} >= f({:e}) = {y1:e}",
                    self.xs[w],
                    self.xs[w + 1]
                ));
            }
        }
        None
    }

    fn non_negative(&self) -> Option<String> {
        self.xs
            .iter()
            .zip(self.ys)
            .find(|(_, &y)| y < -1e-12)
            .map(|(x, y)| format!("f({x:e}) = {y:e} < 0"))
    }

    fn zero_at_zero(&self) -> Option<String> {
        let y = self.ys[0];
        (y.abs() > 1e-12).then(|| format!("f(0) = {y:e}"))
    }

    fn superadditive(&self) -> Option<String> {
        let diag = self.xs[1..].iter().map(|&x| (x, x));
        for (a, b) in diag.chain(self.pairs.iter().copied()) {
            let (fa, fb, fab) = (self.f.eval(a), self.f.eval(b), self.f.eval(a + b));
            if !fab.is_finite() {
                continue;
            }
            if fab < fa + fb - self.slack(&[fa, fb, fab]) {
                return Some(format!(
                    "f({a:e} + {b:e}) = {fab:e} < f({a:e}) + f({b:e}) = {:e}",
                    fa + fb
                ));
            }
        }
        None
    }

    /// Midpoint log-concavity `f((a+b)/2)² ≥ f(a) f(b)`, compared in logs.
    fn log_concave(&self) -> Option<String> {
        if let Some(w) = self.non_negative() {
            return Some(w);
        }
        let grid_pairs = (0..self.xs.len().saturating_sub(2)).map(|i| (self.xs[i], self.xs[i + 2]));
        for (a, b) in grid_pairs.chain(self.pairs.iter().copied()) {
            let (fa, fb) = (self.f.eval(a), self.f.eval(b));
            if fa <= 0.0 || fb <= 0.0 {
                continue;
            }
            let m = 0.5 * (a + b);
            let fm = self.f.eval(m);
            let (la, lb) = (fa.ln(), fb.ln());
            let fails = if fm <= 0.0 {
                true
            } else {
                2.0 * fm.ln() < la + lb - self.tol * (la.abs() + lb.abs() + 1.0)
            };
            if fails {
                return Some(format!(
                    "f({m:e})^2 = {:e} < f({a:e}) f({b:e}) = {:e}",
                    fm * fm,
                    fa * fb
                ));
            }
        }
        None
    }
}
