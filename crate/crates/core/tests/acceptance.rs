//! End-to-end acceptance battery. Run with
//! `cargo test --test acceptance -- --nocapture` to see the one-line
//! verdict per criterion; the test fails unless every criterion passes.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chiral_core::iso::{inverse_map, sample_tensors, single_line_n3, spanning_functions};
use chiral_core::modules::{ClassicalOp, FreeDModule};
use chiral_core::{run_suite, LineForest, SuiteReport, DEFAULT_SEED};

struct Verdict {
    label: &'static str,
    passed: bool,
    detail: String,
}

fn suite_verdict(
    label: &'static str,
    name: &str,
    n_max: u32,
    budget_ms: u64,
) -> Verdict {
    let reports = run_suite(name, n_max, DEFAULT_SEED).expect("known suite");
    let report: &SuiteReport = &reports[0];
    let in_budget = report.elapsed_ms < budget_ms;
    Verdict {
        label,
        passed: report.passed() && in_budget,
        detail: if in_budget {
            report.to_text()
        } else {
            format!(
                "{} (exceeded the {budget_ms} ms budget)",
                report.to_text()
            )
        },
    }
}

/// Three-slot tables supported on the single full line, general evaluator
/// against the independent iterated-residue formula on the spanning
/// family.
fn single_line_verdict() -> Verdict {
    let start = Instant::now();
    let module = Arc::new(FreeDModule::rank2_graded());
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let line = LineForest::new(3, vec![vec![1, 2, 3]]).expect("canonical forest");
    let funcs = spanning_functions(3);
    let tensors = sample_tensors(&module, 3, 1, &mut rng);
    let mut cases = 0u64;
    let mut ops = 0;
    while ops < 4 {
        let degree = rng.random_range(0..=2i64);
        let full = ClassicalOp::random(module.clone(), 3, degree, 1, 2, &mut rng);
        let mut table = BTreeMap::new();
        if let Some(values) = full.table().get(&line) {
            table.insert(line.clone(), values.clone());
        }
        let y = match ClassicalOp::new(module.clone(), 3, degree, table) {
            Ok(y) if !y.is_zero() => y,
            _ => continue,
        };
        ops += 1;
        let x = match inverse_map(&y, true) {
            Ok(x) => x,
            Err(e) => {
                return Verdict {
                    label: "criterion 7 (single-line oracle at n = 3)",
                    passed: false,
                    detail: format!("evaluator construction failed: {e}"),
                }
            }
        };
        for v in &tensors {
            for (label, f) in &funcs {
                cases += 1;
                let direct = single_line_n3(&y, v, f).expect("oracle accepts the input");
                let general = x.eval(v, f).expect("evaluator accepts the input");
                if direct != general {
                    return Verdict {
                        label: "criterion 7 (single-line oracle at n = 3)",
                        passed: false,
                        detail: format!(
                            "mismatch on {} (x) {label}: oracle {}, evaluator {}",
                            v.display_text(&module),
                            direct.display_text(&module),
                            general.display_text(&module)
                        ),
                    };
                }
            }
        }
    }
    Verdict {
        label: "criterion 7 (single-line oracle at n = 3)",
        passed: true,
        detail: format!(
            "{cases} comparisons across {ops} tables agree exactly, {} ms",
            start.elapsed().as_millis()
        ),
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let verdicts = vec![
        suite_verdict(
            "criterion 1 (line-forest basis ranks, n = 2..4)",
            "line-basis",
            4,
            60_000,
        ),
        suite_verdict(
            "criterion 2 (transform delta on all equal-edge pairs, n <= 5)",
            "fourier-delta",
            5,
            120_000,
        ),
        suite_verdict(
            "criterion 3 (residue identities, 200 samples each, n <= 4)",
            "residue-lemmas",
            4,
            60_000,
        ),
        suite_verdict(
            "criterion 4 (convolution identities and witnesses, p <= 3)",
            "convolution",
            3,
            30_000,
        ),
        suite_verdict(
            "criterion 5 (inverse/forward round trip, n = 2, 3)",
            "roundtrip",
            3,
            300_000,
        ),
        suite_verdict(
            "criterion 6 (two-slot closed form, m in [-3, 3])",
            "n2-closed-form",
            2,
            60_000,
        ),
        single_line_verdict(),
        suite_verdict(
            "criterion 8 (solution-space dimensions and word bijection)",
            "lie-dim",
            6,
            60_000,
        ),
    ];
    let mut all_passed = true;
    for v in &verdicts {
        println!(
            "{}: {} -- {}",
            v.label,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        all_passed &= v.passed;
    }
    let total = start.elapsed();
    println!(
        "overall: {} -- full battery in {} ms (budget 600000 ms)",
        if all_passed && total.as_millis() < 600_000 {
            "PASS"
        } else {
            "FAIL"
        },
        total.as_millis()
    );
    assert!(all_passed, "one or more acceptance criteria failed");
    assert!(
        total.as_millis() < 600_000,
        "the full battery exceeded the ten-minute budget"
    );
}
