use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_interval, IntegralMode, IntegralValue, Scale};
use crate::error::{Error, Result};
use crate::functions::{Flag, ScalarFunction};
use crate::linalg::{eigenvalues, singular_values, ComplexMatrix, HermitianMatrix};

/// One constant piece of a step scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub width: f64,
    pub value: f64,
}

/// Largest lattice denominator probed when loading hand-written scales.
const MAX_LATTICE: u32 = 4096;
const WIDTH_TOL: f64 = 1e-12;

/// A non-increasing, right-continuous step function on `(0, 1)`.
///
/// Scales built from matrices live on the lattice `k/n`; their breakpoints
/// are recomputed as exact ratios so that two scales with compatible
/// lattices share bit-identical breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralScale {
    steps: Vec<Step>,
    lattice: Option<u32>,
}

impl SpectralScale {
    /// Validates and normalizes `(width, value)` pairs: widths positive,
    /// values finite and non-increasing, total width `1 ± 1e-12`.
    /// Adjacent equal values are merged.
    pub fn from_steps(steps: &[(f64, f64)]) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidScale("no steps".into()));
        }
        let mut total = 0.0;
        for (i, &(w, v)) in steps.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidScale(format!("step {i}: width {w} is not positive")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidScale(format!("step {i}: value {v} is not finite")));
            }
            if i > 0 && v > steps[i - 1].1 {
                return Err(Error::InvalidScale(format!(
                    "step {i}: value {v} exceeds previous value {}",
                    steps[i - 1].1
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > WIDTH_TOL {
            return Err(Error::InvalidScale(format!("total width {total} is not 1")));
        }
        let lattice = detect_lattice(steps.iter().map(|s| s.0));
        let raw = steps.iter().map(|&(width, value)| Step { width, value }).collect();
        Ok(Self::assemble(raw, lattice))
    }

    /// Scale of a sorted (non-increasing) list of eigenvalues, width `1/n` each.
    pub fn from_sorted_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidScale("empty spectrum".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidScale("values are not sorted non-increasing".into()));
        }
        let w = 1.0 / n as f64;
        let raw = values.iter().map(|&value| Step { width: w, value }).collect();
        Ok(Self::assemble(raw, Some(n as u32)))
    }

    pub fn constant(value: f64) -> Self {
        Self {
            steps: vec![Step { width: 1.0, value }],
            lattice: Some(1),
        }
    }

    fn assemble(raw: Vec<Step>, lattice: Option<u32>) -> Self {
        let mut steps: Vec<Step> = Vec::with_capacity(raw.len());
        for s in raw {
            match steps.last_mut() {
                Some(last) if last.value == s.value => last.width += s.width,
                _ => steps.push(s),
            }
        }
        let mut scale = Self { steps, lattice };
        if let Some(n) = lattice {
            // Snap widths to exact multiples of 1/n.
            let bps = scale.breakpoints();
            for (i, s) in scale.steps.iter_mut().enumerate() {
                s.width = bps[i + 1] - bps[i];
            }
            scale.lattice = Some(n);
        }
        scale
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn lattice(&self) -> Option<u32> {
        self.lattice
    }

    /// `0 = b_0 < b_1 < … < b_k = 1` where step `i` occupies `[b_i, b_{i+1})`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(0.0);
        let mut cum = 0.0;
        for s in &self.steps[..self.steps.len() - 1] {
            cum += s.width;
            out.push(match self.lattice {
                Some(n) => (cum * n as f64).round() / n as f64,
                None => cum,
            });
        }
        out.push(1.0);
        out
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.value)
    }

    /// `τ(A) = ∫₀¹ λ_s ds`
    pub fn tau(&self) -> f64 {
        self.steps.iter().map(|s| s.width * s.value).sum()
    }

    /// `∫₀ᵗ λ_s ds`, exact.
    pub fn head(&self, t: f64) -> f64 {
        self.plain_between(0.0, t)
    }

    /// `∫_t^1 λ_s ds`, exact.
    pub fn tail(&self, t: f64) -> f64 {
        self.plain_between(t, 1.0)
    }

    fn plain_between(&self, lo: f64, hi: f64) -> f64 {
        self.sum_between(lo, hi, |v| v)
    }

    /// `Σ_i |[b_i, b_{i+1}) ∩ [lo, hi]| · h(v_i)` skipping empty overlaps.
    fn sum_between(&self, lo: f64, hi: f64, h: impl Fn(f64) -> f64) -> f64 {
        let bps = self.breakpoints();
        let mut acc = 0.0;
        for (i, s) in self.steps.iter().enumerate() {
            let a = bps[i].max(lo);
            let b = bps[i + 1].min(hi);
            if b > a {
                acc += (b - a) * h(s.value);
            }
        }
        acc
    }

    /// Whether some step with value satisfying `pred` meets `(lo, hi)`.
    fn any_between(&self, lo: f64, hi: f64, pred: impl Fn(f64) -> bool) -> bool {
        let bps = self.breakpoints();
        self.steps
            .iter()
            .enumerate()
            .any(|(i, s)| bps[i + 1].min(hi) > bps[i].max(lo) && pred(s.value))
    }

    /// `A ∧ s`: every value replaced by `min(value, s)`.
    pub fn truncate(&self, s: f64) -> Self {
        self.map_monotone(|v| v.min(s))
    }

    /// `c·λ` for `c ≥ 0`.
    pub fn scale_by(&self, c: f64) -> Self {
        self.map_monotone(|v| c * v)
    }

    /// Maps values with a non-decreasing function (order preserved).
    pub(crate) fn map_monotone(&self, f: impl Fn(f64) -> f64) -> Self {
        let raw = self
            .steps
            .iter()
            .map(|s| Step {
                width: s.width,
                value: f(s.value),
            })
            .collect();
        Self::assemble(raw, self.lattice)
    }

    /// `λ(f(A))`: values mapped through `f`; re-sorted unless `f` is
    /// declared non-decreasing.
    pub fn apply_function(&self, f: &ScalarFunction) -> Result<Self> {
        self.apply_with(f.description(), f.has(Flag::NonDecreasing), |v| f.eval(v))
    }

    pub fn apply_with(&self, name: &str, non_decreasing: bool, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut raw: Vec<Step> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let value = f(s.value);
            if !value.is_finite() {
                return Err(Error::Domain {
                    function: name.to_string(),
                    value: s.value,
                });
            }
            raw.push(Step { width: s.width, value });
        }
        if !non_decreasing {
            raw.sort_by(|a, b| b.value.total_cmp(&a.value));
        }
        Ok(Self::assemble(raw, self.lattice))
    }

    /// Pointwise sum `λ(a) + λ(b)` of two scales (both non-increasing, so
    /// the sum is too).
    pub fn pointwise_sum(&self, other: &SpectralScale) -> Self {
        let grid = merged_breakpoints(self, other);
        let lattice = match (self.lattice, other.lattice) {
            (Some(a), Some(b)) => {
                let l = lcm(a as u64, b as u64);
                (l <= u32::MAX as u64).then_some(l as u32)
            }
            _ => None,
        };
        let raw = grid
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                Step {
                    width: w[1] - w[0],
                    value: self.value_at(mid) + other.value_at(mid),
                }
            })
            .collect();
        Self::assemble(raw, lattice)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Smallest `n ≤ 4096` making every width a multiple of `1/n`.
fn detect_lattice(widths: impl Iterator<Item = f64> + Clone) -> Option<u32> {
    (1..=MAX_LATTICE).find(|&n| {
        widths.clone().all(|w| {
            let k = w * n as f64;
            k.round() >= 1.0 && (k - k.round()).abs() <= 1e-9
        })
    })
}

/// Sorted union of the breakpoints of two scales, exact duplicates removed.
pub fn merged_breakpoints(a: &SpectralScale, b: &SpectralScale) -> Vec<f64> {
    let mut all = a.breakpoints();
    all.extend(b.breakpoints());
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

impl Scale for SpectralScale {
    fn integral(&self, lo: f64, hi: f64, mode: IntegralMode) -> Result<IntegralValue> {
        check_interval(lo, hi)?;
        if mode != IntegralMode::Plain && self.any_between(lo, hi, |v| v < 0.0) {
            return Err(Error::Domain {
                function: mode.describe(),
                value: self.steps.last().map(|s| s.value).unwrap_or(0.0),
            });
        }
        let touches_zero = self.any_between(lo, hi, |v| v == 0.0);
        Ok(match mode {
            IntegralMode::Plain => IntegralValue::Finite(self.plain_between(lo, hi)),
            IntegralMode::Log if touches_zero => IntegralValue::NegInfinite,
            IntegralMode::Log => IntegralValue::Finite(self.sum_between(lo, hi, f64::ln)),
            IntegralMode::NegPower(p) if touches_zero && p > 0.0 => IntegralValue::Divergent,
            IntegralMode::NegPower(p) => IntegralValue::Finite(self.sum_between(lo, hi, |v| v.powf(-p))),
            IntegralMode::Power(q) if touches_zero && q < 0.0 => IntegralValue::Divergent,
            IntegralMode::Power(q) => IntegralValue::Finite(self.sum_between(lo, hi, |v| v.powf(q))),
        })
    }

    /// Right-continuous: the value of the step containing `t`; `t ≥ 1`
    /// gives the left limit at 1.
    fn value_at(&self, t: f64) -> f64 {
        let bps = self.breakpoints();
        for (i, s) in self.steps.iter().enumerate() {
            if t < bps[i + 1] {
                return s.value;
            }
        }
        self.steps.last().expect("non-empty").value
    }

    fn sup(&self) -> f64 {
        self.steps[0].value
    }

    fn inf(&self) -> f64 {
        self.steps.last().expect("non-empty").value
    }

    fn as_step(&self) -> Option<&SpectralScale> {
        Some(self)
    }

    fn describe(&self) -> String {
        format!("step scale with {} steps", self.steps.len())
    }
}

/// `λ(A)` under `τ = Tr/n`.
pub fn spectral_scale(a: &HermitianMatrix) -> SpectralScale {
    SpectralScale::from_sorted_values(&eigenvalues(a)).expect("eigenvalues are sorted")
}

/// `μ(X) = λ(|X|)`, the singular values of `X` with width `1/n`.
pub fn s_numbers(x: &ComplexMatrix) -> SpectralScale {
    SpectralScale::from_sorted_values(&singular_values(x)).expect("singular values are sorted")
}

#[derive(Serialize, Deserialize)]
struct ScaleFile {
    steps: Vec<(f64, f64)>,
}

impl Serialize for SpectralScale {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScaleFile {
            steps: self.steps.iter().map(|s| (s.width, s.value)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpectralScale {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = ScaleFile::deserialize(deserializer)?;
        SpectralScale::from_steps(&file.steps).map_err(serde::de::Error::custom)
    }
}
