use std::collections::BTreeSet;
use std::io::Write;

use cbr_core::axioms::{check, AxiomId};
use cbr_core::fixtures;
use cbr_core::oracle::{
    enumerate_choice_functions, enumerate_rationales, sweep, RationaleKind, SweepId, SweepOptions,
};
use cbr_core::representation::{synthesize_cbr, Evaluation, Flavor, RepresentationPair};
use cbr_core::reversals::{find_reversals, revealed_relation, RevealedMode, ReversalKind};
use cbr_core::{BinaryRelation, ChoiceFunction, Menu};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;

/// Enables the exhaustive n = 4 run of the transitive-variant equivalence.
const LONG_RUN_VAR: &str = "CBR_LONG_RUN";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_sweeps(runs: &[(usize, SweepId)], opts: &SweepOptions) -> Outcome {
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    for &(n, id) in runs {
        let report = sweep(n, id, opts).map_err(|e| format!("{id} n={n}: {e}"))?;
        let total = report.counterexample_total();
        summary.push(format!(
            "{id} n={n}: {} functions, {total} counterexamples",
            report.population
        ));
        if !report.passed() {
            let first = report
                .counterexamples
                .first()
                .map(|ce| format!("{} ({})", ce.function, ce.detail))
                .unwrap_or_default();
            failures.push(format!(
                "{id} n={n}: {total} counterexamples, first {first}"
            ));
        }
    }
    if failures.is_empty() {
        Ok(summary.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn cbr_characterization() -> Outcome {
    run_sweeps(
        &[(3, SweepId::Theorem1), (4, SweepId::Theorem1)],
        &SweepOptions::default(),
    )
}

fn tcbr_characterization() -> Outcome {
    let mut runs = vec![(3, SweepId::Theorem2)];
    let long = std::env::var_os(LONG_RUN_VAR).is_some();
    if long {
        runs.push((4, SweepId::Theorem2));
    }
    let out = run_sweeps(&runs, &SweepOptions::default())?;
    Ok(if long {
        out
    } else {
        format!("{out}; n=4 skipped (set {LONG_RUN_VAR}=1)")
    })
}

fn independence() -> Outcome {
    let cases = [
        (
            "never-chosen violation",
            fixtures::violates_never_chosen(),
            AxiomId::Nc,
        ),
        (
            "contraction violation",
            fixtures::violates_contraction(),
            AxiomId::WccStar,
        ),
        (
            "no-binary-cycles violation",
            fixtures::violates_no_binary_cycles(),
            AxiomId::NbcStar,
        ),
        (
            "reject-WARP violation",
            fixtures::violates_reject_warp(),
            AxiomId::RWarp,
        ),
    ];
    let mut failures = Vec::new();
    for (name, c, named) in cases {
        let failing: Vec<AxiomId> = AxiomId::CBR
            .iter()
            .copied()
            .filter(|&a| !check(&c, a).pass)
            .collect();
        if failing != [named] {
            let got: Vec<&str> = failing.iter().map(|a| a.id()).collect();
            failures.push(format!(
                "{name}: expected only {named} to fail, got [{}]",
                got.join(", ")
            ));
        }
    }
    if failures.is_empty() {
        Ok("each example fails exactly its named axiom".into())
    } else {
        Err(failures.join("; "))
    }
}

fn two_reversal_table() -> Outcome {
    let c = fixtures::two_reversal_table();
    let found: BTreeSet<(ReversalKind, (usize, usize), usize)> = find_reversals(&c)
        .iter()
        .map(|r| (r.kind, r.pair, r.trigger))
        .collect();
    let expected = BTreeSet::from([
        (ReversalKind::Strong, (X, Y), Z),
        (ReversalKind::Weak, (Z, X), W),
    ]);
    ensure(found == expected, || format!("reversals {found:?}"))?;
    let revealed = BinaryRelation::from_pairs(4, [(Z, X), (X, W)]);
    for mode in [RevealedMode::FullMenu, RevealedMode::SmallMenu] {
        let got = revealed_relation(&c, mode);
        ensure(got == revealed, || {
            format!("{mode:?} revealed relation {got:?}")
        })?;
    }
    let rep = synthesize_cbr(&c).map_err(|e| format!("synthesis: {e}"))?;
    let induced = rep
        .induced_choice(c.universe())
        .map_err(|e| format!("induced choice: {e}"))?;
    let rows = c.nontrivial_menus();
    ensure(rows.len() == 11, || format!("{} rows", rows.len()))?;
    for &menu in &rows {
        ensure(induced.choice(menu) == c.choice(menu), || {
            format!(
                "menu {} induced {}",
                c.universe().format_menu(menu),
                induced.choice(menu)
            )
        })?;
    }
    Ok("2 reversals, revealed {(z,x),(x,w)} in both modes, 11 rows reproduced".into())
}

fn hiring_committee() -> Outcome {
    let rep = RepresentationPair::new(
        Flavor::Cbr,
        BinaryRelation::from_pairs(4, [(Z, X), (Z, W), (X, W)]),
        BinaryRelation::linear_order(4, &[X, Y, Z, W]),
    )
    .map_err(|e| e.to_string())?;
    let menus = [
        (Menu::pair(X, Y), X),
        (Menu::pair(X, Y).with(Z), Y),
        (Menu::full(4), X),
    ];
    for (menu, want) in menus {
        let got = rep.eval(menu);
        ensure(got == Evaluation::Chosen(want), || {
            format!("menu {menu:?}: {got:?}")
        })?;
    }
    Ok("C(xy)=x, C(xyz)=y, C(xyzw)=x".into())
}

fn reversal_property_sweeps() -> Outcome {
    let ids = [
        SweepId::Smp,
        SweepId::Exclusivity,
        SweepId::Ne,
        SweepId::Dbl,
        SweepId::LemmaRev,
    ];
    run_sweeps(&ids.map(|id| (4, id)), &SweepOptions::default())
}

fn reject_warp_star() -> Outcome {
    run_sweeps(&[(4, SweepId::Rwarpstar)], &SweepOptions::default())
}

fn minimal_identification() -> Outcome {
    run_sweeps(
        &[(3, SweepId::Iden1), (4, SweepId::Iden1)],
        &SweepOptions::default(),
    )
}

fn class_membership() -> Outcome {
    let opts = SweepOptions {
        samples: 10_000,
        ..SweepOptions::default()
    };
    let out = run_sweeps(&[(3, SweepId::Iden2), (4, SweepId::Iden2)], &opts)?;
    let sampled = sweep(4, SweepId::Iden2, &opts)
        .map_err(|e| e.to_string())?
        .count("candidates");
    ensure(sampled >= 10_000, || {
        format!("only {sampled} candidates at n=4")
    })?;
    Ok(out)
}

fn shortlisting_without_weak_reversals() -> Outcome {
    run_sweeps(
        &[
            (3, SweepId::PropRsm),
            (4, SweepId::PropRsm),
            (4, SweepId::PropTsm),
        ],
        &SweepOptions::default(),
    )
}

fn counts() -> Outcome {
    let expected = [
        (RationaleKind::PartialOrder, 3, 19),
        (RationaleKind::PartialOrder, 4, 219),
        (RationaleKind::Tournament, 3, 8),
        (RationaleKind::Tournament, 4, 64),
        (RationaleKind::LinearOrder, 3, 6),
        (RationaleKind::LinearOrder, 4, 24),
    ];
    for (kind, n, want) in expected {
        let got = enumerate_rationales(n, kind)
            .map_err(|e| e.to_string())?
            .len();
        ensure(got == want, || {
            format!("{kind:?} n={n}: {got}, expected {want}")
        })?;
    }
    let rational: Vec<ChoiceFunction> = enumerate_choice_functions(3)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| check(c, AxiomId::Warp).pass)
        .collect();
    ensure(rational.len() == 6, || {
        format!("{} WARP functions at n=3", rational.len())
    })?;
    Ok("partial orders 19/219, tournaments 8/64, linear orders 6/24, WARP at n=3: 6".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        (
            "CBR characterization, exhaustive n=3,4",
            cbr_characterization,
        ),
        ("T-CBR characterization, exhaustive", tcbr_characterization),
        ("independence examples", independence),
        ("two-reversal table end to end", two_reversal_table),
        ("hiring committee double reversal", hiring_committee),
        (
            "SMP, exclusivity, NE, double reversal, reversal constraints at n=4",
            reversal_property_sweeps,
        ),
        ("R-WARP and WCC* imply R-WARP* at n=4", reject_warp_star),
        (
            "minimal first rationale identification n=3,4",
            minimal_identification,
        ),
        ("representation class membership n=3,4", class_membership),
        (
            "RSM and TSM under zero weak reversals",
            shortlisting_without_weak_reversals,
        ),
        ("enumeration counts", counts),
    ];
    let mut stdout = std::io::stdout().lock();
    // the harness prints "test acceptance ... " without a newline
    writeln!(stdout).unwrap();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = match run() {
            Ok(detail) => format!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                format!("FAIL {:>2} {name}: {detail}", i + 1)
            }
        };
        writeln!(stdout, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
