//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 6 (full length-32 enumeration, under a minute in release mode)
//! is skipped when `HFP_SKIP_DEEP=1`.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use hfp_core::cli;
use hfp_core::hadamard::check_bounds;
use hfp_core::propelinear::power_elem;
use hfp_core::search;
use hfp_core::{
    assemble, associated_group_order, cchm_equivalent, code_to_cchm, element_power, is_cchm, is_full_propelinear,
    is_hadamard_code, is_propelinear, kernel, profile, run_search, sylvester_double, Candidate, Family, Mode,
    PropelinearCode, QuaternaryRow, SearchOptions, SearchTask, TableOptions,
};

fn cli_out(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("hfp").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn within(start: Instant, limit: Duration, what: &str) {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
}

fn criterion_1() {
    let start = Instant::now();
    let code = assemble(Family::TwoT4U, 8, &Candidate::Generator(bv(EXAMPLE_1))).unwrap();
    let p = profile(&code).unwrap();
    assert_eq!((p.length, p.size), (32, 64));
    assert!(is_hadamard_code(&code.vectors(), 8));
    assert!(is_full_propelinear(&code));
    assert_eq!(p.rk(), (11, 2));
    within(start, Duration::from_secs(1), "example 1");
}

fn criterion_2() {
    let start = Instant::now();
    let code = assemble(Family::TwoT4U, 8, &Candidate::Generator(bv(EXAMPLE_2))).unwrap();
    assert_eq!(profile(&code).unwrap().rk(), (13, 1));
    within(start, Duration::from_secs(1), "example 2");
}

fn criterion_3() {
    let start = Instant::now();
    let r1: QuaternaryRow = ROW_1.parse().unwrap();
    let r2: QuaternaryRow = ROW_2.parse().unwrap();
    assert!(is_cchm(&r1));
    assert!(is_cchm(&r2));
    let code = assemble(Family::TwoT4U, 8, &Candidate::Generator(bv(EXAMPLE_1))).unwrap();
    let extracted = code_to_cchm(&code).unwrap();
    assert!(cchm_equivalent(&extracted, &r1));
    within(start, Duration::from_secs(1), "CCHM checks");
}

fn criterion_4() {
    let start = Instant::now();
    let opts = TableOptions { workers: 4, deep: false };
    let table = hfp_core::reproduce_table(5, &opts).unwrap();
    for row in &table.rows {
        for cell in row {
            let want = golden(cell.t, cell.family);
            match want {
                None => assert_eq!(cell.status, search::CellStatus::NotApplicable, "t={} {}", cell.t, cell.family),
                Some(set) => {
                    assert_eq!(cell.profiles, set, "t={} {}", cell.t, cell.family);
                    assert_ne!(cell.status, search::CellStatus::SkippedBudget);
                }
            }
        }
    }
    // analytic cells agree with search where both can run
    for (family, t) in [(Family::FourTU2, 3), (Family::TwoT22U, 3), (Family::TwoT4U, 3), (Family::TwoT22U, 2)] {
        let res = run_search(&SearchTask::full(family, t, Mode::All, 4), &SearchOptions::default()).unwrap();
        assert!(res.codes.is_empty(), "{family} t={t}");
    }
    within(start, Duration::from_secs(600), "table t <= 5");
}

fn criterion_5() {
    let start = Instant::now();
    let res = run_search(
        &SearchTask::full(Family::TQU, 7, Mode::All, 4),
        &SearchOptions {
            workers: 4,
            checkpoint: None,
        },
    )
    .unwrap();
    assert!(!res.codes.is_empty());
    assert_eq!(res.profile_set(), BTreeSet::from([(27, 1)]));
    within(start, Duration::from_secs(1800), "tQu t = 7");
}

fn criterion_6() -> Option<()> {
    if std::env::var("HFP_SKIP_DEEP").as_deref() == Ok("1") {
        return None;
    }
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("deep.ckpt");
    let task = SearchTask::full(Family::TwoT4U, 8, Mode::All, 4);
    let opts = SearchOptions {
        workers: 4,
        checkpoint: Some(ckpt),
    };
    let res = run_search(&task, &opts).unwrap();
    assert_eq!(res.counts.examined, 300_546_630);
    assert_eq!(res.profile_set(), BTreeSet::from([(11, 2), (13, 1)]));
    // a second run resumes entirely from the checkpoint
    let again = run_search(&task, &opts).unwrap();
    assert_eq!(again.profile_set(), res.profile_set());
    assert_eq!(again.counts, res.counts);
    Some(())
}

fn accepted_codes() -> Vec<PropelinearCode> {
    let mut codes = Vec::new();
    for t in 1..=5 {
        for family in Family::TABLE {
            if search::analytic_status(family, t).is_some() {
                continue;
            }
            let res = run_search(&SearchTask::full(family, t, Mode::All, 2), &SearchOptions::default()).unwrap();
            for c in res.codes {
                codes.push(assemble(family, t, &c.candidate).unwrap());
            }
        }
    }
    for a in [EXAMPLE_1, EXAMPLE_2] {
        codes.push(assemble(Family::TwoT4U, 8, &Candidate::Generator(bv(a))).unwrap());
    }
    codes
}

fn criterion_7() {
    let codes = accepted_codes();
    assert!(codes.len() > 10);
    for code in &codes {
        let t = code.t();
        // expansion of powers
        for x in code.elements() {
            for i in 0..=2 * code.length() {
                assert_eq!(element_power(x, i), power_elem(x, i).vector);
            }
        }
        // propelinear axioms and full propelinearity
        assert!(is_propelinear(code));
        assert!(is_full_propelinear(code));
        assert_eq!(associated_group_order(code), 4 * t);
        // kernel oracle
        let vectors = code.vectors();
        if code.length() <= 16 {
            assert_eq!(kernel(&vectors).1, brute_kernel_dim(&vectors));
        }
        // bound suite, rerun outside profile()
        let p = profile(code).unwrap();
        check_bounds(t, p.rank, p.kernel_dim, Some(code.family())).unwrap();
    }
    // filter soundness
    for (family, t) in [
        (Family::FourTU2, 1),
        (Family::TwoT22U, 1),
        (Family::TwoT4U, 1),
        (Family::FourTU2, 2),
        (Family::TwoT22U, 2),
        (Family::TwoT4U, 2),
        (Family::FourTU2, 3),
        (Family::TwoT22U, 3),
        (Family::TwoT4U, 3),
        (Family::TQU, 1),
        (Family::TQU, 3),
        (Family::FourTU2, 4),
        (Family::TwoT22U, 4),
        (Family::TwoT4U, 4),
    ] {
        let filtered: BTreeSet<_> = run_search(&SearchTask::full(family, t, Mode::All, 3), &SearchOptions::default())
            .unwrap()
            .codes
            .into_iter()
            .map(|c| c.codewords)
            .collect();
        assert_eq!(filtered, brute_force_codes(family, t), "{family} t={t}");
    }
}

fn criterion_8() {
    let start = Instant::now();
    let code = sylvester_double(&bv("0110")).unwrap();
    let vectors = code.vectors();
    assert_eq!((code.length(), code.size()), (8, 16));
    assert!(is_hadamard_code(&vectors, 2));
    let z = bv("00001111");
    assert!(vectors.iter().all(|x| code.contains(&x.add(&z).unwrap())));
    assert!(kernel(&vectors).1 >= 2);
    within(start, Duration::from_secs(1), "doubling");
}

fn criterion_9() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify", "--family", "2t4u", "--t", "8", "--a", EXAMPLE_1],
        vec!["verify", "--family", "2t4u", "--t", "8", "--a", EXAMPLE_2],
        vec!["cchm", "from-code", "--a", EXAMPLE_1],
        vec!["table", "--tmax", "5", "--format", "json"],
        vec!["search", "--family", "2t22u", "--t", "4", "--all"],
        vec!["search", "--family", "2t4u", "--t", "4"],
        vec!["search", "--family", "tqu", "--t", "5", "--all"],
        vec!["search", "--family", "tqu", "--t", "7", "--all"],
    ];
    for args in runs {
        let heavy = args.contains(&"7");
        let workers: &[&str] = if heavy { &["1", "3"] } else { &["1", "2", "4", "7"] };
        let mut seen: Option<String> = None;
        for w in workers {
            let mut full = args.clone();
            if matches!(args[0], "search" | "table") {
                full.extend(["--workers", w]);
            }
            let (code, out) = cli_out(&full);
            assert_eq!(code, 0, "{full:?}");
            match &seen {
                None => seen = Some(out),
                Some(prev) => assert_eq!(prev, &out, "{full:?}"),
            }
        }
    }
}

fn report(n: u32, name: &str, f: impl FnOnce() -> Option<()>) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(Some(())) => {
            println!("criterion {n}: PASS  {name} ({secs:.2} s)");
            true
        }
        Ok(None) => {
            println!("criterion {n}: SKIP  {name} (HFP_SKIP_DEEP=1)");
            true
        }
        Err(_) => {
            println!("criterion {n}: FAIL  {name}");
            false
        }
    }
}

fn main() {
    let some = |f: fn()| move || -> Option<()> {
        f();
        Some(())
    };
    let results = [
        report(1, "example 1 gives (11,2)", some(criterion_1)),
        report(2, "example 2 gives (13,1)", some(criterion_2)),
        report(3, "printed CCHM rows and extraction", some(criterion_3)),
        report(4, "table rows t = 1..5", some(criterion_4)),
        report(5, "tQu t = 7 gives only (27,1)", some(criterion_5)),
        report(6, "2t4u t = 8 deep run", criterion_6),
        report(7, "property suites", some(criterion_7)),
        report(8, "Sylvester doubling of 0110", some(criterion_8)),
        report(9, "byte-identical output across worker counts", some(criterion_9)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
