//! Instance generators for the suite cases. Each case maps a seeded trial
//! to one or more reports.

use rand::Rng;

use super::counterexample::truncation_report;
use super::equivalence::equivalence_report;
use super::report::{Fingerprint, InequalityReport, DEFAULT_TOLERANCE};
use super::theorems::*;
use crate::error::{Error, Result};
use crate::functions::{
    angle, compose_class_s, identity, min_power, power, sinh_power, t_arctan, Flag, ScalarFunction,
};
use crate::gauges::{
    antinorm_eval, antinorm_eval_eigenvalues, antinorm_eval_matrix, cauchy_schwarz_check, derived_limit_check,
    norm_eval, norm_eval_matrix, sandwich_check, AntiNormSpec, Comparison, SymmetricGauge,
};
use crate::linalg::random::{
    haar_unitary_from_rng, random_complex, random_psd, random_psd_nonsingular, random_psd_rank, random_real, TrialRng,
};
use crate::linalg::{modulus, psd_margin, ComplexMatrix, HermitianMatrix};
use crate::majorization::{relation_check, wlog_weaker_witness, Relation};
use crate::orbit::{
    agm_witness, dominance_unitary, mixed_margin, mixed_witness_seeded, orbit_margin, orbit_witness_seeded,
    triangle_witness, OrbitMode, WitnessResult, ACCEPT_TOL,
};
use crate::spectral::SpectralScale;

/// Functions shared by all trials; their flags are verified once.
pub(crate) struct Catalog {
    identity: ScalarFunction,
    square: ScalarFunction,
    cube: ScalarFunction,
    sqrt: ScalarFunction,
    cbrt: ScalarFunction,
    log1p: ScalarFunction,
    angle_one: ScalarFunction,
    angle_half: ScalarFunction,
    t_arctan: ScalarFunction,
    min_t_t2: ScalarFunction,
    composed: ScalarFunction,
}

impl Catalog {
    pub(crate) fn new() -> Result<Self> {
        let min_t_t2 = min_power(1.0, 2.0)?;
        let composed = compose_class_s(&min_t_t2, &sinh_power(2.0)?)?;
        Ok(Catalog {
            identity: identity(),
            square: power(2.0)?,
            cube: power(3.0)?,
            sqrt: power(0.5)?,
            cbrt: power(1.0 / 3.0)?,
            log1p: ScalarFunction::new(
                "log(1+t)",
                &[
                    Flag::Concave,
                    Flag::NonDecreasing,
                    Flag::StrictlyIncreasing,
                    Flag::NonNegative,
                    Flag::ZeroAtZero,
                ],
                f64::ln_1p,
            ),
            angle_one: angle(1.0)?,
            angle_half: angle(0.5)?,
            t_arctan: t_arctan(),
            min_t_t2,
            composed,
        })
    }
}

pub(crate) struct Trial<'a> {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub rng: TrialRng,
    pub catalog: &'a Catalog,
}

impl Trial<'_> {
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Random PSD matrix; one in four is rank deficient.
    fn psd(&mut self) -> HermitianMatrix {
        let s = self.uniform(0.3, 1.5);
        if self.rng.random_range(0..4) == 0 {
            let rank = self.rng.random_range(0..self.n);
            random_psd_rank(self.n, rank, &mut self.rng).scale(s)
        } else {
            random_psd(self.n, &mut self.rng).scale(s)
        }
    }

    /// PSD with smallest eigenvalue at least 0.1.
    fn psd_nonsingular(&mut self) -> HermitianMatrix {
        random_psd_nonsingular(self.n, 0.1, &mut self.rng)
    }

    fn complex(&mut self) -> ComplexMatrix {
        random_complex(self.n, &mut self.rng)
    }

    fn gauge(&mut self) -> SymmetricGauge {
        match self.rng.random_range(0..5) {
            0 => SymmetricGauge::ky_fan(self.uniform(0.05, 1.0)),
            1 => SymmetricGauge::schatten(self.uniform(1.0, 4.0)),
            2 => SymmetricGauge::OperatorSup,
            3 => SymmetricGauge::mixture(&[
                (self.uniform(0.1, 2.0), SymmetricGauge::ky_fan(self.uniform(0.05, 1.0))),
                (self.uniform(0.1, 2.0), SymmetricGauge::schatten(self.uniform(1.0, 4.0))),
            ]),
            _ => {
                let inner = if self.rng.random() {
                    SymmetricGauge::ky_fan(self.uniform(0.05, 1.0))
                } else {
                    SymmetricGauge::schatten(self.uniform(1.0, 4.0))
                };
                crate::gauges::qnorm_lift(&inner)
            }
        }
    }

    fn derived(&mut self) -> AntiNormSpec {
        let g = self.gauge();
        AntiNormSpec::derived(g, self.uniform(0.25, 3.0))
    }

    fn antinorm(&mut self, allow_compose: bool) -> AntiNormSpec {
        match self.rng.random_range(0..7) {
            0 => self.derived(),
            1 => AntiNormSpec::TailIntegral {
                t: self.uniform(0.05, 1.0),
            },
            2 => AntiNormSpec::LogMean {
                t: self.uniform(0.05, 1.0),
            },
            3 => AntiNormSpec::FkDet,
            4 => AntiNormSpec::SchattenQ {
                q: self.uniform(0.1, 1.0),
            },
            5 => AntiNormSpec::MarcusLopes {
                m: self.rng.random_range(1..=self.n),
            },
            _ if allow_compose => {
                let q = self.uniform(0.2, 0.9);
                AntiNormSpec::power_compose(q, self.antinorm(false))
            }
            _ => AntiNormSpec::FkDet,
        }
    }

    /// Sorted diagonal of `U diag(v) U^*` for a Haar `U`; majorized by `v`.
    fn schur_horn(&mut self, v: &[f64]) -> Vec<f64> {
        let u = haar_unitary_from_rng(v.len(), &mut self.rng);
        let m = HermitianMatrix::from_real_diag(v).conjugate_by(u.as_matrix());
        let mut d: Vec<f64> = (0..v.len()).map(|i| m.as_matrix()[(i, i)].re).collect();
        d.sort_by(|x, y| y.total_cmp(x));
        d
    }

    fn sorted_values(&mut self, lo: f64, hi: f64) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n).map(|_| self.rng.random_range(lo..hi)).collect();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    }
}

pub(crate) struct Case {
    pub id: &'static str,
    pub run: fn(&mut Trial<'_>) -> Result<Vec<InequalityReport>>,
}

pub(crate) const CASES: &[Case] = &[
    Case {
        id: "superadditivity",
        run: superadditivity,
    },
    Case {
        id: "class_s_superadditivity",
        run: class_s_superadditivity,
    },
    Case {
        id: "product",
        run: product,
    },
    Case {
        id: "inverse_power_sum",
        run: inverse_power_sum,
    },
    Case {
        id: "marcus_lopes_ratio",
        run: marcus_lopes_ratio,
    },
    Case {
        id: "rotfeld",
        run: rotfeld,
    },
    Case {
        id: "trace_ratio",
        run: trace_ratio,
    },
    Case {
        id: "det_minkowski",
        run: det_minkowski,
    },
    Case {
        id: "gauge_axioms",
        run: gauge_axioms,
    },
    Case {
        id: "antinorm_axioms",
        run: antinorm_axioms,
    },
    Case {
        id: "cauchy_schwarz",
        run: cauchy_schwarz,
    },
    Case {
        id: "derived_limit",
        run: derived_limit,
    },
    Case {
        id: "majorization_monotonicity",
        run: majorization_monotonicity,
    },
    Case {
        id: "sandwich",
        run: sandwich,
    },
    Case {
        id: "witness_agm",
        run: witness_agm,
    },
    Case {
        id: "witness_triangle",
        run: witness_triangle,
    },
    Case {
        id: "witness_dominance",
        run: witness_dominance,
    },
    Case {
        id: "witness_orbit_convex",
        run: witness_orbit_convex,
    },
    Case {
        id: "witness_orbit_concave",
        run: witness_orbit_concave,
    },
    Case {
        id: "witness_mixed",
        run: witness_mixed,
    },
    Case {
        id: "equivalence",
        run: equivalence,
    },
    Case {
        id: "counterexample_trace_truncation",
        run: counterexample,
    },
];

pub(crate) const GROUPS: &[(&str, &[&str])] = &[
    (
        "theorems",
        &[
            "superadditivity",
            "class_s_superadditivity",
            "product",
            "inverse_power_sum",
            "marcus_lopes_ratio",
            "rotfeld",
            "trace_ratio",
            "det_minkowski",
        ],
    ),
    (
        "axioms",
        &["gauge_axioms", "antinorm_axioms", "cauchy_schwarz", "derived_limit"],
    ),
    ("monotonicity", &["majorization_monotonicity", "sandwich"]),
    (
        "witnesses",
        &[
            "witness_agm",
            "witness_triangle",
            "witness_dominance",
            "witness_orbit_convex",
            "witness_orbit_concave",
            "witness_mixed",
        ],
    ),
    (
        "all",
        &[
            "superadditivity",
            "class_s_superadditivity",
            "product",
            "inverse_power_sum",
            "marcus_lopes_ratio",
            "rotfeld",
            "trace_ratio",
            "det_minkowski",
            "gauge_axioms",
            "antinorm_axioms",
            "cauchy_schwarz",
            "derived_limit",
            "majorization_monotonicity",
            "sandwich",
            "witness_agm",
            "witness_triangle",
            "witness_dominance",
            "witness_orbit_convex",
            "witness_orbit_concave",
            "witness_mixed",
            "equivalence",
            "counterexample_trace_truncation",
        ],
    ),
];

fn pick<'a>(items: &[&'a ScalarFunction], k: usize) -> &'a ScalarFunction {
    items[k % items.len()]
}

fn superadditivity(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let g = pick(&[&c.square, &c.angle_one, &c.t_arctan], t.index);
    let spec = match (t.index / 3) % 6 {
        0 => AntiNormSpec::derived(SymmetricGauge::ky_fan(t.uniform(0.05, 1.0)), t.uniform(0.25, 3.0)),
        1 => AntiNormSpec::SchattenQ { q: t.uniform(0.1, 1.0) },
        2 => AntiNormSpec::TailIntegral {
            t: t.uniform(0.05, 1.0),
        },
        3 => AntiNormSpec::LogMean {
            t: t.uniform(0.05, 1.0),
        },
        4 => AntiNormSpec::FkDet,
        _ => AntiNormSpec::MarcusLopes {
            m: t.rng.random_range(1..=t.n),
        },
    };
    let (a, b) = (t.psd(), t.psd());
    Ok(vec![check_superadditivity(&spec, g, &a, &b)?])
}

fn class_s_superadditivity(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let psi = pick(&[&c.min_t_t2, &c.composed, &c.t_arctan], t.index);
    let spec = t.derived();
    let (a, b) = (t.psd(), t.psd());
    Ok(vec![check_class_s_superadditivity(&spec, psi, &a, &b)?])
}

fn product(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let g = t.gauge();
    let k = t.rng.random_range(1..=3);
    let raw: Vec<f64> = (0..k).map(|_| t.uniform(0.1, 1.0)).collect();
    let total = t.uniform(1.0, 2.5);
    let sum: f64 = raw.iter().sum();
    let mut ps: Vec<f64> = raw.iter().map(|r| r / sum * total).collect();
    // keep Σ pᵢ ≥ 1 exactly despite rounding
    let s: f64 = ps.iter().sum();
    if s < 1.0 {
        ps[0] += 1.0 - s;
    }
    let (a, b) = (t.psd_nonsingular(), t.psd_nonsingular());
    Ok(vec![check_product_inequality(&g, &ps, &a, &b)?])
}

fn inverse_power_sum(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let m = 1 + (t.index % 10) as u32;
    let g = t.gauge();
    let (a, b) = (t.psd_nonsingular(), t.psd_nonsingular());
    Ok(vec![check_inverse_power_sum(&g, m, &a, &b)?])
}

fn marcus_lopes_ratio(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let g = pick(&[&c.identity, &c.square, &c.t_arctan, &c.cube], t.index);
    let q = t.uniform(0.05, 1.0);
    let m = t.rng.random_range(1..=t.n);
    let (a, b) = (t.psd_nonsingular(), t.psd_nonsingular());
    Ok(vec![check_marcus_lopes_ratio(g, q, m, &a, &b)?])
}

fn rotfeld(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let g = pick(&[&c.identity, &c.square, &c.t_arctan, &c.cube], t.index);
    let (a, b) = (t.psd_nonsingular(), t.psd_nonsingular());
    Ok(vec![check_marcus_lopes_ratio(g, 1.0, 1, &a, &b)?])
}

fn trace_ratio(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let g = pick(&[&c.square, &c.angle_one, &c.t_arctan], t.index);
    let psi = pick(&[&c.square, &c.t_arctan, &c.min_t_t2], t.index / 3);
    let p = t.uniform(0.05, 1.0);
    let (a, b) = (t.psd_nonsingular(), t.psd_nonsingular());
    Ok(vec![check_trace_ratio(g, psi, p, &a, &b)?])
}

fn det_minkowski(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let fs = [&c.identity, &c.square, &c.t_arctan, &c.min_t_t2, &c.composed];
    let psi = pick(&fs, t.index);
    let omega = pick(&fs, t.index / 5);
    let (a, b) = (t.psd(), t.psd());
    Ok(vec![check_det_minkowski(psi, omega, &a, &b)?])
}

fn gauge_axioms(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let g = t.gauge();
    let (x, y) = (t.complex(), t.complex());
    let c = t.uniform(0.1, 5.0);
    let u = haar_unitary_from_rng(t.n, &mut t.rng);
    let v = haar_unitary_from_rng(t.n, &mut t.rng);
    let nx = norm_eval_matrix(&g, &x)?;
    let fp = || Fingerprint::new().matrix(&x).matrix(&y);
    let desc = g.describe();
    let homogeneity = InequalityReport::equal(
        "gauge_axioms",
        norm_eval_matrix(&g, &x.scale(c))?,
        c * nx,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=homogeneity gauge={desc} c={c}"))
    .fingerprint(fp());
    let uxv = &(u.as_matrix() * &x) * v.as_matrix();
    let invariance = InequalityReport::equal("gauge_axioms", norm_eval_matrix(&g, &uxv)?, nx, DEFAULT_TOLERANCE)
        .params(format!("axiom=unitary_invariance gauge={desc}"))
        .fingerprint(fp().matrix(u.as_matrix()).matrix(v.as_matrix()));
    let triangle = InequalityReport::at_least(
        "gauge_axioms",
        nx + norm_eval_matrix(&g, &y)?,
        norm_eval_matrix(&g, &(&x + &y))?,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=triangle gauge={desc}"))
    .fingerprint(fp());
    let a = t.psd();
    let b = a.add(&t.psd());
    let monotone = InequalityReport::at_least(
        "gauge_axioms",
        norm_eval_matrix(&g, b.as_matrix())?,
        norm_eval_matrix(&g, a.as_matrix())?,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=monotone gauge={desc}"))
    .fingerprint(Fingerprint::new().matrix(a.as_matrix()).matrix(b.as_matrix()));
    Ok(vec![homogeneity, invariance, triangle, monotone])
}

/// `ε` of the continuity-from-above check and the admitted increase.
const CONTINUITY_EPS: f64 = 1e-9;
const CONTINUITY_SLACK: f64 = 1e-6;

fn antinorm_axioms(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let spec = t.antinorm(true);
    let desc = spec.describe();
    let (a, b) = (t.psd(), t.psd());
    let c = t.uniform(0.1, 5.0);
    let u = haar_unitary_from_rng(t.n, &mut t.rng);
    let na = antinorm_eval_matrix(&spec, &a)?;
    let fp = || Fingerprint::new().matrix(a.as_matrix()).matrix(b.as_matrix());
    let homogeneity = InequalityReport::equal(
        "antinorm_axioms",
        antinorm_eval_matrix(&spec, &a.scale(c))?,
        c * na,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=homogeneity antinorm={desc} c={c}"))
    .fingerprint(fp());
    let invariance = InequalityReport::equal(
        "antinorm_axioms",
        antinorm_eval_matrix(&spec, &a.conjugate_by(u.as_matrix()))?,
        na,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=unitary_invariance antinorm={desc}"))
    .fingerprint(fp().matrix(u.as_matrix()));
    let superadditive = InequalityReport::at_least(
        "antinorm_axioms",
        antinorm_eval_matrix(&spec, &a.add(&b))?,
        na + antinorm_eval_matrix(&spec, &b)?,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=superadditivity antinorm={desc}"))
    .fingerprint(fp());

    let bounded = t.psd_nonsingular();
    let base = antinorm_eval_matrix(&spec, &bounded)?;
    let shifted = antinorm_eval_matrix(&spec, &bounded.shift(CONTINUITY_EPS))?;
    let fpb = || Fingerprint::new().matrix(bounded.as_matrix());
    let from_above = InequalityReport::at_least("antinorm_axioms", shifted, base, DEFAULT_TOLERANCE)
        .params(format!(
            "axiom=continuity_monotone antinorm={desc} eps={CONTINUITY_EPS}"
        ))
        .fingerprint(fpb());
    let limit = InequalityReport::at_least(
        "antinorm_axioms",
        base + CONTINUITY_SLACK * base.max(1.0),
        shifted,
        DEFAULT_TOLERANCE,
    )
    .params(format!("axiom=continuity_limit antinorm={desc} eps={CONTINUITY_EPS}"))
    .fingerprint(fpb());
    Ok(vec![homogeneity, invariance, superadditive, from_above, limit])
}

fn cauchy_schwarz(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let g = t.gauge();
    let x = t.complex();
    let y = if t.index.is_multiple_of(8) {
        x.clone()
    } else {
        t.complex()
    };
    let c = cauchy_schwarz_check(&g, &x, &y)?;
    Ok(vec![comparison_report("cauchy_schwarz", &c)
        .params(format!("gauge={}", g.describe()))
        .fingerprint(Fingerprint::new().matrix(&x).matrix(&y))])
}

/// Orients a `lhs ≤ rhs` comparison as `rhs ≥ lhs`.
fn comparison_report(case: &str, c: &Comparison) -> InequalityReport {
    InequalityReport::with_margin(case, c.rhs, c.lhs, c.margin, c.tolerance)
}

const EPS_GRID: [f64; 6] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12];

fn derived_limit(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let g = t.gauge();
    let p = t.uniform(0.25, 3.0);
    let a = t.psd_nonsingular();
    let r = derived_limit_check(&g, p, &a, &EPS_GRID, DEFAULT_TOLERANCE)?;
    let last = *r.values.last().expect("grid");
    let mut report = InequalityReport::equal("derived_limit", last, r.limit, DEFAULT_TOLERANCE);
    if !r.monotone {
        report.margin = f64::NEG_INFINITY;
        report.pass = false;
    }
    Ok(vec![report
        .params(format!("gauge={} p={p} monotone={}", g.describe(), r.monotone))
        .fingerprint(Fingerprint::new().matrix(a.as_matrix()))])
}

/// Report for a pair that failed its own certification.
fn uncertified(case: &str, what: &str, margin: f64) -> InequalityReport {
    let mut r = InequalityReport::with_margin(case, margin, 0.0, margin, 0.0);
    r.pass = false;
    r.params(format!("uncertified {what}"))
}

fn majorization_monotonicity(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    const CASE: &str = "majorization_monotonicity";
    let mut out = Vec::with_capacity(3);

    // a ≺_w b: a scaled-down Schur–Horn diagonal of b.
    let b = t.sorted_values(0.0, 3.0);
    let c = t.uniform(0.3, 1.0);
    let a: Vec<f64> = t.schur_horn(&b).iter().map(|v| c * v).collect();
    let (sa, sb) = (
        SpectralScale::from_sorted_values(&a)?,
        SpectralScale::from_sorted_values(&b)?,
    );
    let rel = relation_check(&sa, &sb, Relation::SubW)?;
    let g = t.gauge();
    out.push(
        if rel.holds {
            InequalityReport::at_least(CASE, norm_eval(&g, &sb)?, norm_eval(&g, &sa)?, DEFAULT_TOLERANCE)
                .params(format!("relation=sub_w gauge={}", g.describe()))
        } else {
            uncertified(CASE, "sub_w", rel.margin)
        }
        .fingerprint(Fingerprint::new().numbers(&a).numbers(&b)),
    );

    // a ≺^w b: a scaled-up Schur–Horn diagonal of b.
    let b = t.sorted_values(0.05, 3.0);
    let c = t.uniform(1.0, 2.0);
    let a: Vec<f64> = t.schur_horn(&b).iter().map(|v| c * v).collect();
    let (sa, sb) = (
        SpectralScale::from_sorted_values(&a)?,
        SpectralScale::from_sorted_values(&b)?,
    );
    let rel = relation_check(&sa, &sb, Relation::SuperW)?;
    let spec = t.antinorm(true);
    out.push(
        if rel.holds {
            InequalityReport::at_least(
                CASE,
                antinorm_eval_eigenvalues(&spec, &a)?.value,
                antinorm_eval_eigenvalues(&spec, &b)?.value,
                DEFAULT_TOLERANCE,
            )
            .params(format!("relation=super_w antinorm={}", spec.describe()))
        } else {
            uncertified(CASE, "super_w", rel.margin)
        }
        .fingerprint(Fingerprint::new().numbers(&a).numbers(&b)),
    );

    // a ≺^{w(log)} b: Schur–Horn on the logarithms, or a pair for which
    // only the logarithmic relation holds.
    let spec = t.derived();
    let (sa, sb) = if t.index.is_multiple_of(4) {
        wlog_weaker_witness(t.seed)?
    } else {
        let b = t.sorted_values(0.05, 3.0);
        let logs: Vec<f64> = b.iter().map(|v| v.ln()).collect();
        let c = t.uniform(1.0, 1.5);
        let a: Vec<f64> = t.schur_horn(&logs).iter().map(|v| c * v.exp()).collect();
        (
            SpectralScale::from_sorted_values(&a)?,
            SpectralScale::from_sorted_values(&b)?,
        )
    };
    let rel = relation_check(&sa, &sb, Relation::SuperWlog)?;
    out.push(
        if rel.holds {
            InequalityReport::at_least(
                CASE,
                antinorm_eval(&spec, &sa)?,
                antinorm_eval(&spec, &sb)?,
                DEFAULT_TOLERANCE,
            )
            .params(format!("relation=super_wlog antinorm={}", spec.describe()))
        } else {
            uncertified(CASE, "super_wlog", rel.margin)
        }
        .fingerprint(Fingerprint::new().scale(&sa).scale(&sb)),
    );
    Ok(out)
}

fn sandwich(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let g = t.gauge();
    let spec = t.antinorm(true);
    let x = t.complex();
    let a = t.psd();
    let r = sandwich_check(&g, &spec, &x, &a)?;
    let fp = || Fingerprint::new().matrix(&x).matrix(a.as_matrix());
    Ok([
        ("norm_lower", &r.norm_lower),
        ("norm_upper", &r.norm_upper),
        ("antinorm_lower", &r.antinorm_lower),
        ("antinorm_upper", &r.antinorm_upper),
    ]
    .into_iter()
    .map(|(side, c)| {
        comparison_report("sandwich", c)
            .params(format!(
                "bound={side} gauge={} antinorm={}",
                g.describe(),
                spec.describe()
            ))
            .fingerprint(fp())
    })
    .collect())
}

/// Witness report from an independently recomputed PSD margin.
fn witness_report(case: &str, margin: f64, w: &WitnessResult, params: String, fp: Fingerprint) -> InequalityReport {
    let defect = w.unitaries.iter().map(|u| u.defect()).fold(0.0, f64::max);
    let mut r = InequalityReport::with_margin(case, margin, 0.0, margin, ACCEPT_TOL);
    if defect > crate::linalg::UNITARY_TOL {
        r.pass = false;
    }
    r.params(format!("{params} method={} defect={defect:.1e}", w.method))
        .fingerprint(fp)
}

fn not_found(case: &str, err: Error, params: String, fp: Fingerprint) -> Result<InequalityReport> {
    match err {
        Error::WitnessNotFound { best_margin } => {
            let mut r = InequalityReport::with_margin(case, best_margin, 0.0, best_margin, ACCEPT_TOL);
            r.pass = false;
            Ok(r.params(format!("{params} witness not found")).fingerprint(fp))
        }
        other => Err(other),
    }
}

fn psd_diff(m: &ComplexMatrix) -> f64 {
    psd_margin(&HermitianMatrix::from_hermitian_part(m))
}

fn witness_agm(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let (a, b) = (t.psd(), t.psd());
    let w = agm_witness(&a, &b)?;
    let v = w.unitaries[0].as_matrix();
    let am = a.as_matrix();
    let bm = b.as_matrix();
    let rhs = &(&(am * am) + &v.conjugate(&(bm * bm))).scale(0.5) - modulus(&(bm * am)).as_matrix();
    let fp = Fingerprint::new().matrix(am).matrix(bm);
    Ok(vec![witness_report(
        "witness_agm",
        psd_diff(&rhs),
        &w,
        String::new(),
        fp,
    )])
}

fn witness_triangle(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let x = if t.index.is_multiple_of(4) {
        random_real(t.n, &mut t.rng)
    } else {
        t.complex()
    };
    let y = if t.index % 8 == 1 { x.scale(-1.0) } else { t.complex() };
    let w = triangle_witness(&x, &y)?;
    let wm = w.unitaries[0].as_matrix();
    let m = &modulus(&x).into_matrix() + modulus(&y).as_matrix();
    let n = &modulus(&x.adjoint()).into_matrix() + modulus(&y.adjoint()).as_matrix();
    let rhs = &(&m + &wm.adjoint().conjugate(&n)).scale(0.5) - modulus(&(&x + &y)).as_matrix();
    let fp = Fingerprint::new().matrix(&x).matrix(&y);
    Ok(vec![witness_report(
        "witness_triangle",
        psd_diff(&rhs),
        &w,
        String::new(),
        fp,
    )])
}

fn witness_dominance(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let lower = t.sorted_values(0.0, 3.0);
    let upper: Vec<f64> = lower.iter().map(|v| v + t.rng.random_range(0.0..1.0)).collect();
    let ua = haar_unitary_from_rng(t.n, &mut t.rng);
    let ub = haar_unitary_from_rng(t.n, &mut t.rng);
    let a = HermitianMatrix::from_real_diag(&lower).conjugate_by(ua.as_matrix());
    let b = HermitianMatrix::from_real_diag(&upper).conjugate_by(ub.as_matrix());
    let w = dominance_unitary(&a, &b)?;
    let margin = psd_diff(&(b.as_matrix() - &w.unitaries[0].as_matrix().conjugate(a.as_matrix())));
    let fp = Fingerprint::new().matrix(a.as_matrix()).matrix(b.as_matrix());
    Ok(vec![witness_report("witness_dominance", margin, &w, String::new(), fp)])
}

fn orbit_case(t: &mut Trial<'_>, case: &str, mode: OrbitMode, f: &ScalarFunction) -> Result<Vec<InequalityReport>> {
    let diagonal = t.index.is_multiple_of(4);
    let (a, b) = if diagonal {
        let x = t.sorted_values(0.0, 2.0);
        let mut y = t.sorted_values(0.0, 2.0);
        y.reverse();
        (HermitianMatrix::from_real_diag(&x), HermitianMatrix::from_real_diag(&y))
    } else {
        (t.psd(), t.psd())
    };
    let params = format!("f={} diagonal={diagonal} eps=0", f.description());
    let fp = Fingerprint::new().matrix(a.as_matrix()).matrix(b.as_matrix());
    match orbit_witness_seeded(&a, &b, f, mode, 0.0, t.seed) {
        Ok(w) => {
            let margin = orbit_margin(&a, &b, f, mode, 0.0, &w)?;
            Ok(vec![witness_report(case, margin, &w, params, fp)])
        }
        Err(e) => Ok(vec![not_found(case, e, params, fp)?]),
    }
}

fn witness_orbit_convex(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let f = pick(
        &[&c.square, &c.cube, &c.angle_half, &c.t_arctan, &c.identity],
        t.index / 4,
    );
    orbit_case(t, "witness_orbit_convex", OrbitMode::ConvexSuper, f)
}

fn witness_orbit_concave(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let f = pick(&[&c.sqrt, &c.cbrt, &c.log1p, &c.identity], t.index / 4);
    orbit_case(t, "witness_orbit_concave", OrbitMode::ConcaveSub, f)
}

fn witness_mixed(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = t.catalog;
    let g = pick(&[&c.identity, &c.square, &c.angle_one, &c.t_arctan], t.index);
    let (x, y) = match (t.index / 4) % 3 {
        0 => (t.complex(), t.complex()),
        1 => (random_real(t.n, &mut t.rng), random_real(t.n, &mut t.rng)),
        _ => (t.psd().into_matrix(), t.psd().into_matrix()),
    };
    let params = format!("g={}", g.description());
    let fp = Fingerprint::new().matrix(&x).matrix(&y);
    match mixed_witness_seeded(&x, &y, g, 0.0, t.seed) {
        Ok(w) => {
            let margin = mixed_margin(&x, &y, g, 0.0, &w)?;
            Ok(vec![witness_report("witness_mixed", margin, &w, params, fp)])
        }
        Err(e) => Ok(vec![not_found("witness_mixed", e, params, fp)?]),
    }
}

fn equivalence(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    // forward: log-Schur–Horn construction, so a ≺^{w(log)} b
    let b = t.sorted_values(0.2, 3.0);
    let logs: Vec<f64> = b.iter().map(|v| v.ln()).collect();
    let c = t.uniform(1.0, 1.3);
    let a: Vec<f64> = t.schur_horn(&logs).iter().map(|v| c * v.exp()).collect();
    let forward = equivalence_report(
        &SpectralScale::from_sorted_values(&a)?,
        &SpectralScale::from_sorted_values(&b)?,
    )?;

    // converse: shrink the lower part of b (the last log tail fails by at
    // least log(1/0.6)/n) and optionally inflate the top value
    let b = t.sorted_values(0.2, 3.0);
    let k = t.rng.random_range(t.n / 2..t.n);
    let f = t.uniform(0.2, 0.6);
    let top = t.uniform(1.0, 3.0);
    let mut a = b.clone();
    for v in a.iter_mut().skip(k) {
        *v *= f;
    }
    a[0] *= top;
    a.sort_by(|x, y| y.total_cmp(x));
    let converse = equivalence_report(
        &SpectralScale::from_sorted_values(&a)?,
        &SpectralScale::from_sorted_values(&b)?,
    )?;
    Ok(vec![forward, converse])
}

fn counterexample(t: &mut Trial<'_>) -> Result<Vec<InequalityReport>> {
    let c = if t.index.is_multiple_of(2) { 1.0 } else { 2.0 };
    Ok(vec![truncation_report(c)?])
}
