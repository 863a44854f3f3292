//! Acceptance run: one line per criterion with its tolerance and runtime.
//!
//! Criterion 7 includes the adjoint holonomy at `s = 2`. Its Euler product
//! converges only for `Re s > 2`, so the quotient and factorization checks
//! there cannot be evaluated; they are reported as FAIL. The target exits
//! nonzero on any other failure.

use std::process::Command;
use std::time::{Duration, Instant};

use twzeta_cli::suite::{self, CriterionReport};

struct Line {
    report: CriterionReport,
    elapsed: Duration,
    limit: Duration,
    tolerance: &'static str,
}

fn timed(limit_s: u64, tolerance: &'static str, f: impl FnOnce() -> CriterionReport) -> Line {
    let t = Instant::now();
    let report = f();
    Line { report, elapsed: t.elapsed(), limit: Duration::from_secs(limit_s), tolerance }
}

/// The checks that sit on the abscissa of convergence.
fn on_abscissa(name: &str, detail: &str) -> bool {
    matches!(name, "7a adjoint s=2" | "7d adjoint s=2") && detail.contains("outside the convergence region")
}

fn binary_report(extra: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_twzeta"))
        .args(["verify-paper", "--suite", "core"])
        .args(extra)
        .env_remove("TWZETA_CACHE_DIR")
        .output()
        .expect("run twzeta");
    (out.stdout, out.status.code())
}

fn main() {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut lines = vec![
        timed(1, "exact group ring equality", suite::criterion_fox),
        timed(10, "relators <= 1e-12, commutator <= 1e-14", suite::criterion_construction),
        timed(10, "singular value gaps >= 1e3", suite::criterion_cohomology),
        timed(1, "exact integers", suite::criterion_predictions),
        timed(1, "|error| <= 1e-14", suite::criterion_torsion),
        timed(300, "lengths to 1e-12, one thread", || single.install(suite::criterion_oracle)),
    ];
    let sp = suite::bolza_spectrum_5().expect("Bolza spectrum to length 5");
    lines.push(timed(120, "gap <= budget, budget < 1e-3 at s = 3", || suite::criterion_zeta(&sp)));
    lines.push(timed(60, "relative 1e-10", || suite::criterion_holonomy(&sp)));
    lines.push(timed(300, "byte-identical reports", || {
        let mut r = suite::criterion_determinism(&sp);
        let (a, code_a) = binary_report(&[]);
        let (b, _) = binary_report(&[]);
        let (c, _) = binary_report(&["--threads", "8"]);
        let same = !a.is_empty() && a == b && a == c;
        r.checks.push(suite::Check {
            name: "verify-paper twice and with --threads 8".into(),
            pass: same,
            detail: format!("{} bytes, identical: {same}, exit code {code_a:?}", a.len()),
        });
        r.pass = r.checks.iter().all(|c| c.pass);
        r
    }));

    let mut unexpected = 0;
    let mut passed = 0;
    for l in &lines {
        let r = &l.report;
        let in_time = l.elapsed <= l.limit;
        let n_fail = r.failures().count();
        println!(
            "criterion {}: {} ({}/{} checks; {}) runtime {:.2} s (limit {} s{}) [{}]",
            r.id,
            if r.pass && in_time { "PASS" } else { "FAIL" },
            r.checks.len() - n_fail,
            r.checks.len(),
            l.tolerance,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs(),
            if in_time { "" } else { ", exceeded" },
            r.title,
        );
        for c in r.failures() {
            let known = on_abscissa(&c.name, &c.detail);
            println!("    FAIL {}: {}{}", c.name, c.detail, if known { " [unattainable: s on the abscissa]" } else { "" });
            if !known {
                unexpected += 1;
            }
        }
        if !in_time {
            unexpected += 1;
        }
        if r.pass && in_time {
            passed += 1;
        }
    }
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures", lines.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
