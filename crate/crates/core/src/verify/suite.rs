use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::cases::{Catalog, Trial, CASES, GROUPS};
use super::report::InequalityReport;
use crate::error::{Error, Result};
use crate::spectral::AnyScale;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub tolerance: f64,
    pub seed: u64,
    pub cases: Vec<String>,
    /// Replaces the generated pairs of the equivalence case by a single
    /// instance with this `b` (and `a = b`).
    pub scale_b: Option<AnyScale>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 1000,
            dims: vec![2, 3, 4, 5, 6],
            tolerance: super::report::DEFAULT_TOLERANCE,
            seed: 0,
            cases: vec!["all".into()],
            scale_b: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&n| !(2..=16).contains(&n)) {
            return Err(Error::InvalidParameter(
                "dims must be a non-empty list of sizes in [2, 16]".into(),
            ));
        }
        self.resolved_cases().map(|_| ())
    }

    /// Expands groups and aliases into the ordered list of case ids.
    pub fn resolved_cases(&self) -> Result<Vec<&'static str>> {
        let mut out: Vec<&'static str> = Vec::new();
        for name in &self.cases {
            let expanded = resolve_case(name)?;
            for c in expanded {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("no cases selected".into()));
        }
        Ok(out)
    }
}

/// Case ids for a case name, alias or group name.
pub fn resolve_case(name: &str) -> Result<Vec<&'static str>> {
    let name = match name {
        "equivalence_6_12" => "equivalence",
        other => other,
    };
    if let Some(id) = CASES.iter().find(|c| c.id == name).map(|c| c.id) {
        return Ok(vec![id]);
    }
    if let Some((_, members)) = GROUPS.iter().find(|(g, _)| *g == name) {
        return Ok(members.to_vec());
    }
    Err(Error::UnknownCase(name.to_string()))
}

pub fn case_ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.id).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseSummary {
    pub case_id: String,
    pub reports: usize,
    pub failures: usize,
    pub out_of_scope: usize,
    #[serde(serialize_with = "crate::majorization::serialize_extended")]
    pub min_margin: f64,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub reports: Vec<InequalityReport>,
    pub summary: Vec<CaseSummary>,
}

impl SuiteResult {
    pub fn failures(&self) -> usize {
        self.summary.iter().map(|s| s.failures).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    /// One JSON object per line, in report order.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out
    }

    /// Per-case CSV; runtimes are left out so the text is reproducible.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("case_id,reports,failures,out_of_scope,min_margin\n");
        for s in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{:e}\n",
                s.case_id, s.reports, s.failures, s.out_of_scope, s.min_margin
            ));
        }
        out
    }

    pub fn reports_for<'a>(&'a self, case_id: &'a str) -> impl Iterator<Item = &'a InequalityReport> + 'a {
        self.reports.iter().filter(move |r| r.case_id == case_id)
    }
}

/// 64-bit FNV-1a, used to separate the seed streams of the cases.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, case_id: &str, index: usize) -> u64 {
    mix(mix(seed ^ fnv1a(case_id)).wrapping_add(index as u64))
}

/// Runs the selected cases. Trials run in parallel on the current rayon
/// pool; the output depends only on the configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    cfg.validate()?;
    let catalog = Catalog::new()?;
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for id in cfg.resolved_cases()? {
        let case = CASES.iter().find(|c| c.id == id).expect("resolved");
        let started = Instant::now();
        let mut case_reports: Vec<InequalityReport> = if let (true, Some(b)) = (id == "equivalence", &cfg.scale_b) {
            let e = super::equivalence::check_equivalence(b, b)?;
            let fp = super::report::Fingerprint::new().text(&b.as_scale().describe());
            vec![super::equivalence::equivalence_to_report(&e)
                .fingerprint(fp)
                .seed(cfg.seed)]
        } else {
            let per_trial: Vec<Result<Vec<InequalityReport>>> = (0..cfg.trials)
                .into_par_iter()
                .map(|index| {
                    let seed = trial_seed(cfg.seed, id, index);
                    let mut rng = crate::linalg::random::rng_from_seed(seed);
                    let n = cfg.dims[rng.random_range(0..cfg.dims.len())];
                    let mut trial = Trial {
                        index,
                        seed,
                        n,
                        rng,
                        catalog: &catalog,
                    };
                    let out = (case.run)(&mut trial)?;
                    Ok(out
                        .into_iter()
                        .map(|r| retolerance(r, cfg.tolerance).case(id).seed(seed))
                        .collect())
                })
                .collect();
            let mut flat = Vec::new();
            for r in per_trial {
                flat.extend(r?);
            }
            flat
        };
        case_reports.sort_by(|x, y| x.inputs_fingerprint.cmp(&y.inputs_fingerprint));
        let runtime_ms = started.elapsed().as_millis();
        let failures = case_reports.iter().filter(|r| !r.pass).count();
        let out_of_scope = case_reports.iter().filter(|r| r.out_of_scope).count();
        let min_margin = case_reports
            .iter()
            .filter(|r| !r.out_of_scope)
            .map(|r| r.margin)
            .fold(f64::INFINITY, |m, v| if v.is_nan() { f64::NAN } else { m.min(v) });
        summary.push(CaseSummary {
            case_id: id.to_string(),
            reports: case_reports.len(),
            failures,
            out_of_scope,
            min_margin,
            runtime_ms,
        });
        reports.extend(case_reports);
    }
    Ok(SuiteResult { reports, summary })
}

/// Reports built with the default relative tolerance are rescaled to the
/// configured one; cases with fixed absolute tolerances keep theirs.
fn retolerance(mut r: InequalityReport, rel: f64) -> InequalityReport {
    let default = super::report::DEFAULT_TOLERANCE;
    if rel != default && !r.out_of_scope {
        let base = crate::gauges::scaled_tolerance(default, r.lhs, r.rhs);
        if r.tolerance == base {
            r.tolerance = crate::gauges::scaled_tolerance(rel, r.lhs, r.rhs);
            r.pass = r.margin >= -r.tolerance;
        }
    }
    r
}
