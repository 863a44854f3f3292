//! The `core` verification suite: one criterion per group of checks, each
//! reported with its numbers. Reports contain no timings so that repeated
//! runs are byte-identical.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use twzeta_core::cohomology::cohomology_dims;
use twzeta_core::fuchsian::brute::naive_classes;
use twzeta_core::fuchsian::enumerate_spectrum_indexed;
use twzeta_core::linalg::{self, RANK_TOL};
use twzeta_core::predictions::{
    adjoint_audit, adjoint_dims, generic_prediction, tau_jordan_dims, torsion_from_c, trivial_rep_dims,
    PredictionReport,
};
use twzeta_core::presentation::{fundamental_residual, surface_presentation, unit_tangent_presentation};
use twzeta_core::representation::{
    adjoint_rep, classify, clock_shift_pair, geodesic_lift_holonomy, sl2_lift_rep, trivial_rep, unitary_generic_rep,
};
use twzeta_core::zeta::{verify_prepared, Identity, IdentityCheck};
use twzeta_core::{
    bolza_group, enumerate_spectrum, Complex64, EnumOptions, HolonomyAssignment,
    LengthSpectrum, PreparedSpectrum, PresentationKind, Result, ZetaOptions,
};

pub const SUITE_SCHEMA_VERSION: u32 = 1;

/// Largest relative identity budget allowed at `s = 3`.
pub const BUDGET_AT_3: f64 = 1e-3;
pub const TORSION_TOL: f64 = 1e-14;
pub const RELATOR_TOL: f64 = 1e-12;
pub const COMMUTATOR_TOL: f64 = 1e-14;
pub const GAP_MIN: f64 = 1e3;
pub const LENGTH_TOL: f64 = 1e-12;
pub const HOLONOMY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: u32, title: &str, checks: Vec<Check>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        CriterionReport { id, title: title.into(), pass, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

fn guard<F: FnOnce() -> Result<Vec<Check>>>(name: &str, f: F) -> Vec<Check> {
    match f() {
        Ok(c) => c,
        Err(e) => vec![check(name, false, format!("error: {e}"))],
    }
}

/// Fox calculus: `Σ ∂r/∂g (g − 1) = r − 1` for every relator of both
/// presentations, `G = 2..4`, as exact group ring elements.
pub fn criterion_fox() -> CriterionReport {
    let checks = guard("fox", || {
        let mut out = Vec::new();
        for g in 2..=4 {
            for p in [surface_presentation(g)?, unit_tangent_presentation(g)?] {
                let bad = p.relators.iter().filter(|r| !fundamental_residual(r, &p.generators).is_zero()).count();
                out.push(check(
                    format!("{}", p.kind),
                    bad == 0,
                    format!("{} relators, {} with nonzero residual", p.relators.len(), bad),
                ));
            }
        }
        Ok(out)
    });
    CriterionReport::new(1, "Fox calculus fundamental identity", checks)
}

/// Unitary constructions satisfy the relators and the generic-set test;
/// the clock and shift matrices commute up to `e^{2πi/r}`.
pub fn criterion_construction() -> CriterionReport {
    let checks = guard("construction", || {
        let mut out = Vec::new();
        for g in 2..=3 {
            for r in 2..=3 {
                let mut worst = 0.0f64;
                let mut non_generic = Vec::new();
                for j in 1..=r * (2 * g - 2) {
                    let rep = unitary_generic_rep(g, r, j)?;
                    worst = worst.max(rep.relator_residual());
                    if !classify(&rep)?.generic_member {
                        non_generic.push(j);
                    }
                }
                out.push(check(
                    format!("unitary G={g} r={r}"),
                    worst <= RELATOR_TOL && non_generic.is_empty(),
                    format!("max relator residual {worst:.3e}, non-generic j: {non_generic:?}"),
                ));
            }
        }
        for r in 2..=5 {
            let (a, b) = clock_shift_pair(r)?;
            let comm = &a * &b * linalg::inverse(&a)? * linalg::inverse(&b)?;
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / r as f64);
            let dev = linalg::max_abs_diff(&comm, &linalg::scalar(r, omega));
            out.push(check(format!("clock-shift r={r}"), dev <= COMMUTATOR_TOL, format!("|ABA^-1B^-1 - w Id| = {dev:.3e}")));
        }
        Ok(out)
    });
    CriterionReport::new(2, "unitary construction and generic-set membership", checks)
}

/// Cohomology dimensions of the named examples, with rank gaps.
pub fn criterion_cohomology() -> CriterionReport {
    let checks = guard("cohomology", || {
        let p = unit_tangent_presentation(2)?;
        let bolza = bolza_group();
        let cases = [
            ("trivial G=2", trivial_rep(PresentationKind::UnitTangent(2), 1)?, Some([1, 4, 4, 1])),
            ("unitary G=2 r=2 j=1", unitary_generic_rep(2, 2, 1)?, Some([0, 0, 0, 0])),
            ("factoring irreducible r=2", unitary_generic_rep(2, 2, 4)?, None),
            ("sl2 lift on Bolza", sl2_lift_rep(&bolza, None)?, Some([0, 0, 0, 0])),
        ];
        let mut out = Vec::new();
        for (name, rep, expected) in cases {
            let d = cohomology_dims(&p, &rep, RANK_TOL)?;
            let h = [d.h0, d.h1, d.h2, d.h3];
            let min_gap = d.gap_report.iter().map(|g| g.rank.gap_ratio).fold(f64::INFINITY, f64::min);
            let dims_ok = match expected {
                Some(e) => h == e,
                None => d.h0 == 0 && d.h1 == 4,
            };
            out.push(check(name, dims_ok && min_gap >= GAP_MIN, format!("h = {h:?}, min gap ratio {min_gap:.3e}")));
        }
        Ok(out)
    });
    CriterionReport::new(3, "cohomology dimensions", checks)
}

fn identity_check(rep: &PredictionReport) -> Check {
    let ok = rep.order_identity_holds() && rep.pass();
    check(format!("order identity: {} G={}", rep.family, rep.genus), ok, format!("m = {}, dims {:?}", rep.m_order, rep.generalized()))
}

/// Integer predictions: adjoint dimensions against their re-derivation,
/// the order identity in every report, the trivial order, the τ table.
pub fn criterion_predictions() -> CriterionReport {
    let checks = guard("predictions", || {
        let mut out = Vec::new();
        let mut adj_bad = Vec::new();
        let mut triv_bad = Vec::new();
        let mut reports = Vec::new();
        for g in 2..=10 {
            let a = adjoint_dims(g)?;
            let audit = adjoint_audit(g)?;
            let direct = a.generalized().unwrap_or([0; 3]);
            if direct != [audit.res0, audit.res1, audit.res0] || direct[0] as usize != 2 * g + 1 || direct[1] as usize != 10 * g - 4 {
                adj_bad.push(g);
            }
            let t = trivial_rep_dims(g)?;
            if t.m_order != 2 * g as i64 - 2 {
                triv_bad.push(g);
            }
            reports.push(a);
            reports.push(t);
        }
        out.push(check("adjoint 2G+1, 10G-4 vs audit, G=2..10", adj_bad.is_empty(), format!("mismatches at G = {adj_bad:?}")));
        out.push(check("trivial m = 2G-2, G=2..10", triv_bad.is_empty(), format!("mismatches at G = {triv_bad:?}")));
        let mut linear = true;
        for n in 0..=10u64 {
            let d = tau_jordan_dims(2, n)?;
            linear &= d.generalized() == Some([2 * n, 4 * n, 2 * n]) && d.m_order == 0;
            reports.push(d);
        }
        out.push(check("sl2-lift table linear in N", linear, "generalized dims (2N, 4N, 2N), m = 0 for N = 0..10"));
        for (g, r, j) in [(2, 2, 1), (2, 2, 4), (3, 3, 5), (3, 2, 8)] {
            reports.push(generic_prediction(&classify(&unitary_generic_rep(g, r, j)?)?, g)?);
        }
        let failed: Vec<Check> = reports.iter().map(identity_check).filter(|c| !c.pass).collect();
        out.push(check(
            "order identity in every report",
            failed.is_empty(),
            format!("{} reports, {} failing", reports.len(), failed.len()),
        ));
        out.extend(failed);
        Ok(out)
    });
    CriterionReport::new(4, "prediction arithmetic", checks)
}

/// The three worked torsion values.
pub fn criterion_torsion() -> CriterionReport {
    let checks = guard("torsion", || {
        let mut out = Vec::new();
        let t = torsion_from_c(&linalg::scalar(2, Complex64::new(-1.0, 0.0)), 2)?;
        let e = (t - Complex64::new(16.0, 0.0)).norm();
        out.push(check("-Id2, G=2 -> 16", e <= TORSION_TOL, format!("value {t}, error {e:.3e}")));
        let id = torsion_from_c(&linalg::identity(2), 2);
        out.push(check("Id -> not acyclic", matches!(id, Err(twzeta_core::Error::NotAcyclic)), format!("{id:?}")));
        let i = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2);
        let t = torsion_from_c(&linalg::scalar(1, i), 2)?;
        let e = (t - Complex64::new(0.0, -2.0)).norm();
        out.push(check("i Id1, G=2 -> -2i", e <= TORSION_TOL, format!("value {t}, error {e:.3e}")));
        Ok(out)
    });
    CriterionReport::new(5, "torsion values", checks)
}

/// Production enumerator against the naive word enumeration at `L = 4`.
pub fn criterion_oracle() -> CriterionReport {
    let checks = guard("oracle", || {
        let g = bolza_group();
        let (sp, index) = enumerate_spectrum_indexed(&g, 4.0, &EnumOptions::default())?;
        let naive = naive_classes(&g, 4.0, 8, 2)?;
        let mut hit: HashMap<usize, usize> = HashMap::new();
        let (mut split, mut missing, mut merged) = (0, 0, 0);
        let mut worst = 0.0f64;
        for (k, nc) in naive.iter().enumerate() {
            let targets: Vec<Option<usize>> = nc.members.iter().map(|(m, _)| index.classify(m)).collect();
            match targets[0] {
                None => missing += 1,
                Some(t) => {
                    if targets.iter().any(|x| *x != Some(t)) {
                        split += 1;
                    }
                    if hit.insert(t, k).is_some() {
                        merged += 1;
                    }
                    worst = worst.max((sp.classes[t].length - nc.length).abs());
                }
            }
        }
        let pass = naive.len() == sp.classes.len() && split + missing + merged == 0 && worst <= LENGTH_TOL;
        Ok(vec![check(
            "Bolza L=4, words of length <= 8",
            pass,
            format!(
                "production {} classes, reference {}; split {split}, missing {missing}, merged {merged}; max length difference {worst:.3e}",
                sp.classes.len(),
                naive.len()
            ),
        )])
    });
    CriterionReport::new(6, "spectrum oracle equivalence", checks)
}

pub fn bolza_spectrum_5() -> Result<LengthSpectrum> {
    enumerate_spectrum(&bolza_group(), 5.0, &EnumOptions::default())
}

fn identity_tag(id: Identity) -> &'static str {
    match id {
        Identity::RuelleSelbergQuotient => "a",
        Identity::Det0SelbergProduct => "b",
        Identity::AdjointSelberg => "c",
        Identity::DetFactorization => "d",
    }
}

fn describe(c: &IdentityCheck) -> String {
    match (&c.error, c.rel_gap) {
        (Some(e), _) => format!("not evaluated: {e}"),
        (None, Some(g)) => format!("rel gap {g:.3e}, budget {:.3e}", c.budget.total()),
        _ => String::new(),
    }
}

/// Identity checks on Bolza `L = 5` at `s ∈ {2, 2.5, 3}` for the trivial,
/// adjoint and SL2-lift holonomies, `j_max = 64`, `k_max` for a `1e-12` tail.
pub fn criterion_zeta(sp: &LengthSpectrum) -> CriterionReport {
    let checks = guard("zeta", || {
        let bolza = bolza_group();
        let opts = ZetaOptions::default();
        let base = PreparedSpectrum::trivial(sp);
        let holonomies = [
            ("trivial", HolonomyAssignment::factoring(trivial_rep(PresentationKind::UnitTangent(2), 1)?)?),
            ("adjoint", HolonomyAssignment::factoring(adjoint_rep(&bolza)?)?),
            ("sl2-lift", HolonomyAssignment::sl2_lift(sl2_lift_rep(&bolza, None)?, None)?),
        ];
        let points = [2.0, 2.5, 3.0].map(|x| Complex64::new(x, 0.0));
        let mut out = Vec::new();
        for (name, h) in &holonomies {
            let p = PreparedSpectrum::new(sp, h)?;
            let mut ids = vec![Identity::RuelleSelbergQuotient, Identity::Det0SelbergProduct, Identity::DetFactorization];
            let report = verify_prepared(&p, &base, h.label(), &points, &ids, &opts);
            let mut checks = report.checks;
            if *name == "adjoint" {
                ids = vec![Identity::AdjointSelberg];
                checks.extend(verify_prepared(&p, &base, h.label(), &[Complex64::new(3.0, 0.0)], &ids, &opts).checks);
            }
            for c in checks {
                let within = c.s.re != 3.0 || c.budget.total() < BUDGET_AT_3;
                out.push(check(
                    format!("7{} {name} s={}", identity_tag(c.identity), c.s.re),
                    c.pass && within,
                    describe(&c),
                ));
            }
        }
        Ok(out)
    });
    CriterionReport::new(7, "zeta identities on Bolza L=5", checks)
}

/// `tr τ(γ)^j = 2 cosh(jℓ/2)` over the enumerated classes.
pub fn criterion_holonomy(sp: &LengthSpectrum) -> CriterionReport {
    let checks = guard("holonomy", || {
        let tau = sl2_lift_rep(&bolza_group(), None)?;
        let mut worst = 0.0f64;
        let mut count = 0;
        for cls in sp.classes.iter() {
            let h = geodesic_lift_holonomy(&tau, cls)?;
            let mut pw = h.clone();
            for j in 1..=4 {
                let expected = 2.0 * (j as f64 * cls.length / 2.0).cosh();
                let tr = pw.trace();
                worst = worst.max((tr - Complex64::new(expected, 0.0)).norm() / expected);
                count += 1;
                pw = &pw * &h;
            }
        }
        Ok(vec![check(
            "Bolza L=5, j = 1..4",
            count > 0 && worst <= HOLONOMY_TOL,
            format!("{count} traces, max relative error {worst:.3e}"),
        )])
    });
    CriterionReport::new(8, "SL2-lift holonomy law", checks)
}

/// Zeta report serialized under one and under eight worker threads.
pub fn criterion_determinism(sp: &LengthSpectrum) -> CriterionReport {
    let checks = guard("determinism", || {
        let render = |threads: usize| -> Result<String> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| twzeta_core::Error::InvalidInput(e.to_string()))?;
            Ok(pool.install(|| serde_json::to_string(&criterion_zeta(sp)).unwrap_or_default()))
        };
        let one = render(1)?;
        let eight = render(8)?;
        Ok(vec![check(
            "zeta report, 1 vs 8 threads",
            !one.is_empty() && one == eight,
            format!("{} bytes, identical: {}", one.len(), one == eight),
        )])
    });
    CriterionReport::new(9, "determinism", checks)
}

pub fn run_core() -> SuiteReport {
    let sp = bolza_spectrum_5();
    let mut criteria = vec![
        criterion_fox(),
        criterion_construction(),
        criterion_cohomology(),
        criterion_predictions(),
        criterion_torsion(),
        criterion_oracle(),
    ];
    match &sp {
        Ok(sp) => {
            criteria.push(criterion_zeta(sp));
            criteria.push(criterion_holonomy(sp));
            criteria.push(criterion_determinism(sp));
        }
        Err(e) => {
            for (id, title) in [(7, "zeta identities on Bolza L=5"), (8, "SL2-lift holonomy law"), (9, "determinism")] {
                criteria.push(CriterionReport::new(id, title, vec![check("spectrum", false, format!("error: {e}"))]));
            }
        }
    }
    let pass = criteria.iter().all(|c| c.pass);
    SuiteReport { schema_version: SUITE_SCHEMA_VERSION, suite: "core".into(), pass, criteria }
}
