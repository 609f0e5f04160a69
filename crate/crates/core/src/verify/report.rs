use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::gauges::scaled_tolerance;
use crate::linalg::ComplexMatrix;
use crate::majorization::serialize_extended;
use crate::spectral::SpectralScale;

/// Default relative tolerance of theorem checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One evaluated instance of an inequality. `margin ≥ 0` means the
/// inequality holds; `pass ⇔ margin ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub case_id: String,
    pub params: String,
    #[serde(serialize_with = "serialize_extended")]
    pub lhs: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub rhs: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs_fingerprint: String,
    pub seed: u64,
    /// Set when the instance lies outside the hypotheses of the theorem
    /// being tested; such reports pass without asserting anything.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub out_of_scope: bool,
}

impl InequalityReport {
    /// `lhs ≥ rhs` with tolerance `rel · max(|lhs|, |rhs|, 1)`.
    pub fn at_least(case_id: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        let margin = if lhs == rhs { 0.0 } else { lhs - rhs };
        Self::with_margin(case_id, lhs, rhs, margin, scaled_tolerance(rel, lhs, rhs))
    }

    /// `lhs = rhs` up to tolerance; the margin is `−|lhs − rhs|`.
    pub fn equal(case_id: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        let margin = if lhs == rhs { 0.0 } else { -(lhs - rhs).abs() };
        Self::with_margin(case_id, lhs, rhs, margin, scaled_tolerance(rel, lhs, rhs))
    }

    pub fn with_margin(case_id: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        InequalityReport {
            case_id: case_id.to_string(),
            params: String::new(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            inputs_fingerprint: String::new(),
            seed: 0,
            out_of_scope: false,
        }
    }

    pub fn out_of_scope(case_id: &str, params: impl Into<String>) -> Self {
        let mut r = Self::with_margin(case_id, f64::NAN, f64::NAN, f64::NAN, 0.0);
        r.pass = true;
        r.out_of_scope = true;
        r.params = params.into();
        r
    }

    pub fn params(mut self, params: impl Into<String>) -> Self {
        self.params = params.into();
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn case(mut self, case_id: &str) -> Self {
        self.case_id = case_id.to_string();
        self
    }

    /// Stamps the fingerprint of `inputs` combined with the case id and
    /// parameter text.
    pub fn fingerprint(mut self, inputs: Fingerprint) -> Self {
        self.inputs_fingerprint = inputs.text(&self.case_id).text(&self.params).finish();
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// SHA-256 over the exact bit patterns of the inputs.
#[derive(Clone, Default)]
pub struct Fingerprint {
    hasher: Sha256,
}

impl Fingerprint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(mut self, s: &str) -> Self {
        self.hasher.update((s.len() as u64).to_le_bytes());
        self.hasher.update(s.as_bytes());
        self
    }

    pub fn number(mut self, v: f64) -> Self {
        self.hasher.update(v.to_bits().to_le_bytes());
        self
    }

    pub fn numbers(mut self, vs: &[f64]) -> Self {
        self.hasher.update((vs.len() as u64).to_le_bytes());
        for v in vs {
            self.hasher.update(v.to_bits().to_le_bytes());
        }
        self
    }

    pub fn matrix(mut self, m: &ComplexMatrix) -> Self {
        let n = m.n();
        self.hasher.update((n as u64).to_le_bytes());
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                self.hasher.update(z.re.to_bits().to_le_bytes());
                self.hasher.update(z.im.to_bits().to_le_bytes());
            }
        }
        self
    }

    pub fn scale(self, s: &SpectralScale) -> Self {
        let flat: Vec<f64> = s.steps().iter().flat_map(|st| [st.width, st.value]).collect();
        self.numbers(&flat)
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}
