//! Exit gate: one line per criterion, nonzero exit if any fails.
//!
//!     cargo test -p hitomezashi-core --test acceptance

use std::process::ExitCode;
use std::time::Instant;

use hitomezashi_core::excursion::ExcursionKind;
use hitomezashi_core::oracle::brute_oracle;
use hitomezashi_core::verify::{
    verify_counts, verify_excursions, verify_homology, verify_invariants, verify_length,
    verify_moves, verify_oracle_sample, verify_seifert, StringFilter, SweepSpec, TheoremReport,
};
use hitomezashi_core::{decompose, CountSummary, ToroidalPattern};

const ORACLE_SEED: u64 = 0x4849_544f;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn summary(x: &str, y: &str) -> CountSummary {
    decompose(&ToroidalPattern::parse(x, y).unwrap()).summary()
}

fn clean(reports: &[&TheoremReport]) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.violations.iter().take(3).map(|v| v.to_string()))
        .collect();
    let detail = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {} instances, {} violations",
                r.theorem,
                r.instances,
                r.violations.len()
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    if bad.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; first: {}", bad.join(" | ")))
    }
}

fn reference_patterns() -> Outcome {
    let t = Instant::now();
    let mut problems = Vec::new();

    let eight_by_eight = summary("---+++++", "---+++++");
    let classes: Vec<_> = eight_by_eight.nontrivial_classes().collect();
    if (
        eight_by_eight.total,
        eight_by_eight.nontrivial,
        eight_by_eight.trivial,
    ) != (8, 2, 6)
        || classes != vec![((1, 1), 2)]
    {
        problems.push(format!("8x8 gave {eight_by_eight:?}"));
    }
    let seven_by_seven = summary("--+++++", "---++++");
    let classes: Vec<_> = seven_by_seven.nontrivial_classes().collect();
    if seven_by_seven.nontrivial != 1 || classes != vec![((3, 1), 1)] {
        problems.push(format!("7x7 gave {seven_by_seven:?}"));
    }
    for (x, y, want) in [("++--", "++--", 4), ("++--", "+-+-", 6)] {
        let got = summary(x, y).total;
        if got != want {
            problems.push(format!("4x4 {x}/{y} gave {got}, want {want}"));
        }
    }
    // The naive tracer must agree on every reference pattern.
    for (x, y) in [
        ("---+++++", "---+++++"),
        ("--+++++", "---++++"),
        ("++--", "++--"),
        ("++--", "+-+-"),
    ] {
        let p = ToroidalPattern::parse(x, y).unwrap();
        if brute_oracle(&p).0 != decompose(&p).summary() {
            problems.push(format!("oracle disagrees on {x}/{y}"));
        }
    }
    let elapsed = t.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        problems.push(format!("took {elapsed:?}"));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("four reference patterns exact in {elapsed:?}")
        } else {
            problems.join("; ")
        },
    )
}

fn data_mod_4() -> Outcome {
    let a = summary("+-++--++", "+-++--++").total;
    let b = summary("+-++--++", "+-++-+-+").total;
    outcome(
        a.is_multiple_of(4) && b % 4 == 2,
        format!("totals {a} and {b}"),
    )
}

fn excursions() -> Outcome {
    let (general, rg) = verify_excursions(&SweepSpec::general(6, 6));
    let (symmetric, rs) = verify_excursions(&SweepSpec::symmetric(10));
    let count = |rs: &[hitomezashi_core::excursion::HarvestRecord], k: ExcursionKind| {
        rs.iter().filter(|r| r.kind == k).count()
    };
    let mut o = clean(&[&general, &symmetric]);
    let a = count(&rg, ExcursionKind::A) + count(&rs, ExcursionKind::A);
    let ab = count(&rg, ExcursionKind::AB) + count(&rs, ExcursionKind::AB);
    // Both lemmas must actually be exercised.
    if a == 0 || ab == 0 {
        o.ok = false;
    }
    o.detail = format!("{a} a-excursions, {ab} (a,b)-excursions; {}", o.detail);
    o
}

fn moves() -> Outcome {
    let r = verify_moves(&SweepSpec::linklike(8));
    let mut o = clean(&[&r]);
    let tally = |k: &str| r.tallies.get(k).copied().unwrap_or(0);
    o.detail = format!(
        "{} schedule failures, {} adjacent, {} I, {} II, {} III; {}",
        r.schedule_failures.len(),
        tally("adjacent_moves"),
        tally("alternating_config_I"),
        tally("alternating_config_II"),
        tally("alternating_config_III"),
        o.detail
    );
    if !r.schedule_failures.is_empty() {
        o.ok = false;
        o.detail
            .push_str(&format!("; first failure: {}", r.schedule_failures[0]));
    }
    o
}

fn main() -> ExitCode {
    let started = Instant::now();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("AC1 reference patterns", Box::new(reference_patterns)),
        (
            "AC2 homology table",
            Box::new(|| {
                clean(&[
                    &verify_homology(&SweepSpec::symmetric(12)),
                    &verify_homology(&SweepSpec::general(6, 6)),
                ])
            }),
        ),
        (
            "AC3 length residues",
            Box::new(|| {
                clean(&[
                    &verify_length(&SweepSpec::symmetric(12)),
                    &verify_length(&SweepSpec::general(6, 6)),
                ])
            }),
        ),
        (
            "AC4 loop counts",
            Box::new(|| {
                clean(&[
                    &verify_counts(&SweepSpec::symmetric(12)),
                    &verify_counts(&SweepSpec::general(6, 6)),
                ])
            }),
        ),
        ("AC5 totals mod 4", Box::new(data_mod_4)),
        ("AC6 excursion residues", Box::new(excursions)),
        (
            "AC7 seifert circles",
            Box::new(|| clean(&[&verify_seifert(&SweepSpec::symmetric(9))])),
        ),
        ("AC8 move rules", Box::new(moves)),
        (
            "AC9 oracle equivalence",
            Box::new(|| {
                clean(&[
                    &verify_oracle_sample(1000, ORACLE_SEED, 10),
                    &verify_invariants(&SweepSpec::general(6, 6).with_filter(StringFilter::All)),
                ])
            }),
        ),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let o = run();
        if !o.ok {
            failed += 1;
        }
        println!(
            "[{}] {name} ({:.2}s): {}",
            if o.ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
