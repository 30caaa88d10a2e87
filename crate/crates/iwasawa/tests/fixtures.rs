//! Invariants of the shipped fixture corpus: every record deduces, derived
//! results never contradict the recorded expectations, and a few anchor
//! values hold exactly.

use std::fs::File;
use std::path::PathBuf;

use iwasawa::class_data::{load_fixtures, ExampleRecord, ExpectedValue};
use iwasawa::deduction::{deduce, LambdaResult, MuResult, NuResult};

fn fixtures() -> Vec<ExampleRecord> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/paper_examples.json");
    load_fixtures(File::open(path).expect("fixture file is shipped")).expect("fixtures validate")
}

#[test]
fn corpus_is_large_and_labeled() {
    let records = fixtures();
    assert!(records.len() >= 30, "only {} records", records.len());
    // labels are unique per prime
    let mut keys: Vec<(u64, &str)> = records.iter().map(|r| (r.p, r.label.as_str())).collect();
    keys.sort();
    let before = keys.len();
    keys.dedup();
    assert_eq!(keys.len(), before, "duplicate (p, label)");
    // q=71 appears for both primes
    assert_eq!(
        records.iter().filter(|r| r.label == "q=71").count(),
        2,
        "q=71 is a record for p=2 and for p=3"
    );
}

#[test]
fn every_record_deduces() {
    for rec in fixtures() {
        deduce(&rec).unwrap_or_else(|e| panic!("{}: {e}", rec.label));
    }
}

#[test]
fn anchor_exponent_differences() {
    let records = fixtures();
    let e = |label: &str| {
        records
            .iter()
            .find(|r| r.label == label)
            .unwrap()
            .e_sequence()
    };
    let d1870 = e("d=1870");
    assert_eq!(d1870[1] - d1870[0], 7);
    assert_eq!(e("d=5·11·173"), vec![6, 14]);
    assert_eq!(e("d=3·7·11"), vec![3, 5, 9, 17]);
    assert_eq!(e("d=11·19·23"), vec![6, 13, 23]);
}

fn mu_consistent(exp: ExpectedValue, derived: &MuResult) -> bool {
    let (lo, hi) = derived.bounds();
    match exp {
        ExpectedValue::Exact(v) => v >= 0 && derived.contains(v as u64),
        ExpectedValue::Range(a, b) => (lo as i64) <= b && (hi as i64) >= a,
        ExpectedValue::Min(a) => (hi as i64) >= a,
        ExpectedValue::Max(b) => (lo as i64) <= b,
        ExpectedValue::Unknown => true,
    }
}

fn lambda_consistent(exp: ExpectedValue, derived: &LambdaResult) -> bool {
    match (exp, derived) {
        (ExpectedValue::Exact(v), LambdaResult::Exact(w)) => v == *w as i64,
        (ExpectedValue::Exact(v), LambdaResult::Constrained { divisor, max }) => {
            v >= 0 && (v as u64).is_multiple_of(*divisor) && max.is_none_or(|m| v as u64 <= m)
        }
        (ExpectedValue::Max(b), LambdaResult::Exact(w)) => (*w as i64) <= b,
        _ => true,
    }
}

fn nu_consistent(exp: ExpectedValue, derived: &NuResult) -> bool {
    match (exp, derived) {
        (ExpectedValue::Exact(v), NuResult::Exact(w)) => v == *w,
        (ExpectedValue::Exact(v), NuResult::AtLeast(m)) => v >= *m,
        (ExpectedValue::Min(a), NuResult::Exact(w)) => *w >= a,
        _ => true,
    }
}

#[test]
fn derived_results_never_contradict_expectations() {
    for rec in fixtures() {
        let Some(exp) = rec.expected else { continue };
        let res = deduce(&rec).unwrap();
        if let Some(v) = exp.mu {
            assert!(
                mu_consistent(v, &res.mu),
                "{}: μ expected {v:?}, derived {:?}",
                rec.label,
                res.mu
            );
        }
        if let Some(v) = exp.lambda {
            assert!(
                lambda_consistent(v, &res.lambda),
                "{}: λ expected {v:?}, derived {:?}",
                rec.label,
                res.lambda
            );
        }
        if let Some(v) = exp.nu {
            assert!(
                nu_consistent(v, &res.nu),
                "{}: ν expected {v:?}, derived {:?}",
                rec.label,
                res.nu
            );
        }
    }
}

#[test]
fn exact_results_postdict_all_levels() {
    use iwasawa::deduction::consistency_check;
    for rec in fixtures() {
        let res = deduce(&rec).unwrap();
        let exact =
            res.mu.exact().is_some() && res.lambda.exact().is_some() && res.nu.exact().is_some();
        if !exact {
            continue;
        }
        for v in consistency_check(&rec, &res).unwrap() {
            assert!(
                v.matches || v.asymptotic_exempt,
                "{}: level {} predicted {} observed {}",
                rec.label,
                v.level,
                v.predicted,
                v.observed
            );
        }
    }
}
