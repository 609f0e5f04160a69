//! Scalar functions on `[0, T_max]` carrying declared structural properties
//! (convexity, superadditivity, log-concavity, ...) that are checked
//! numerically before a function is used in an inequality.

mod catalogue;
mod expr;
mod properties;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalogue::{
    angle, compose_class_s, exp_power_damped, identity, inverse_power_sum_function, min_power, power,
    shifted_indicator, sinh_power, t_arctan, t_exp_power,
};
pub use expr::Expr;
pub use properties::{verify_properties, FlagCheck, PropertyReport, VerifyGrid};

/// Structural properties a function may declare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Convex,
    Concave,
    Superadditive,
    LogConcave,
    NonDecreasing,
    StrictlyIncreasing,
    NonNegative,
    ZeroAtZero,
    /// Member of the class of `f ∘ g` with `f` superadditive log-concave
    /// and `g` superadditive convex.
    ClassS,
}

impl Flag {
    pub const ALL: [Flag; 9] = [
        Flag::Convex,
        Flag::Concave,
        Flag::Superadditive,
        Flag::LogConcave,
        Flag::NonDecreasing,
        Flag::StrictlyIncreasing,
        Flag::NonNegative,
        Flag::ZeroAtZero,
        Flag::ClassS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Convex => "convex",
            Flag::Concave => "concave",
            Flag::Superadditive => "superadditive",
            Flag::LogConcave => "log_concave",
            Flag::NonDecreasing => "non_decreasing",
            Flag::StrictlyIncreasing => "strictly_increasing",
            Flag::NonNegative => "non_negative",
            Flag::ZeroAtZero => "zero_at_zero",
            Flag::ClassS => "class_s",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Evaluator = dyn Fn(f64) -> f64 + Send + Sync;

struct Inner {
    description: String,
    eval: Box<Evaluator>,
    flags: BTreeSet<Flag>,
    domain_max: f64,
    verified: OnceLock<Result<()>>,
}

/// A real function on `[0, domain_max]` with declared flags.
///
/// Cloning is cheap; the default-grid verification result is computed once
/// and shared between clones.
#[derive(Clone)]
pub struct ScalarFunction {
    inner: Arc<Inner>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("description", &self.inner.description)
            .field("flags", &self.inner.flags)
            .field("domain_max", &self.inner.domain_max)
            .finish()
    }
}

pub const DEFAULT_DOMAIN_MAX: f64 = 1e3;

impl ScalarFunction {
    pub fn new(
        description: impl Into<String>,
        flags: &[Flag],
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::with_domain(description, flags, DEFAULT_DOMAIN_MAX, eval)
    }

    pub fn with_domain(
        description: impl Into<String>,
        flags: &[Flag],
        domain_max: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            inner: Arc::new(Inner {
                description: description.into(),
                eval: Box::new(eval),
                flags: flags.iter().copied().collect(),
                domain_max,
                verified: OnceLock::new(),
            }),
        }
    }

    /// Parses an expression in `t` with no declared flags.
    pub fn parse(source: &str) -> Result<Self> {
        let expr = Arc::new(Expr::parse(source)?);
        Ok(Self::new(source.trim(), &[], move |t| expr.eval(t)))
    }

    /// Parses an expression and declares every flag the default verifier
    /// confirms on it.
    pub fn parse_inferred(source: &str) -> Result<Self> {
        let plain = Self::parse(source)?;
        let report = verify_properties(&plain, &VerifyGrid::for_domain(plain.domain_max()));
        let flags: Vec<Flag> = report
            .checks
            .iter()
            .filter(|c| c.holds && c.flag != Flag::ClassS)
            .map(|c| c.flag)
            .collect();
        let expr = Arc::new(Expr::parse(source)?);
        Ok(Self::new(source.trim(), &flags, move |t| expr.eval(t)))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.inner.eval)(t)
    }

    pub fn description(&self) -> &str {
        &self.inner.description
    }

    pub fn flags(&self) -> &BTreeSet<Flag> {
        &self.inner.flags
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.inner.flags.contains(&flag)
    }

    pub fn domain_max(&self) -> f64 {
        self.inner.domain_max
    }

    /// Copy with additional declared flags (verification is redone).
    pub fn with_flags(&self, extra: &[Flag]) -> Self {
        let me = self.clone();
        let mut flags: Vec<Flag> = self.inner.flags.iter().copied().collect();
        flags.extend_from_slice(extra);
        Self::with_domain(self.description(), &flags, self.domain_max(), move |t| me.eval(t))
    }

    /// Checks every declared flag on the default grid; cached.
    pub fn verified(&self) -> Result<()> {
        self.inner
            .verified
            .get_or_init(|| {
                let report = verify_properties(self, &VerifyGrid::for_domain(self.domain_max()));
                match report.checks.iter().find(|c| c.declared && !c.holds) {
                    None => Ok(()),
                    Some(c) => Err(Error::FlagRefuted {
                        function: self.description().to_string(),
                        flag: c.flag.name().to_string(),
                        witness: c.witness.clone().unwrap_or_default(),
                    }),
                }
            })
            .clone()
    }

    /// Requires the flags to be declared and the declaration to verify.
    pub fn require(&self, flags: &[Flag]) -> Result<()> {
        for &flag in flags {
            if !self.has(flag) {
                return Err(Error::MissingFlag {
                    function: self.description().to_string(),
                    flag: flag.name().to_string(),
                });
            }
        }
        self.verified()
    }

    /// `x ↦ self(x)^q`
    pub fn powf(&self, q: f64) -> ScalarFunction {
        let me = self.clone();
        ScalarFunction::with_domain(
            format!("({})^{q}", self.description()),
            &[],
            self.domain_max(),
            move |t| me.eval(t).powf(q),
        )
    }
}
