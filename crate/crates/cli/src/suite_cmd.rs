//! The `verify-suite` command: every embedded check in one run, one
//! pass/fail line each.

use serde_json::json;

use approxforms::algebra::BooleanInterpretation;
use approxforms::lefebvre::{self, EXACT_TOL};
use approxforms::{
    boolinf, check_axioms, choice, search_boolean_interpretations, suite, OperationSystem,
    Polarity, SystemTag,
};

use crate::report::{Report, Verdict};
use crate::CliError;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

pub fn run(seed: u64, instances: u64, max_arity: usize) -> Result<Report, CliError> {
    let mut checks = Vec::new();

    let rows = choice::choice_table();
    let table_ok = rows
        .iter()
        .zip(&choice::EXPECTED_TABLE)
        .all(|(r, &(es, ev, as_, av))| {
            (r.exact_state, r.exact_value, r.approx_state, r.approx_value) == (es, ev, as_, av)
        });
    checks.push(check(
        "choice-table",
        table_ok,
        "eight rows match the expected table",
    ));

    let imp = |a: bool, b: bool| !a || b;
    let approx_ok = choice::IntentTriple::all()
        .into_iter()
        .all(|t| choice::run_approx(t).chosen_value == imp(imp(t.b3, t.b2), t.b1));
    checks.push(check(
        "approx-boolean-equivalence",
        approx_ok,
        "greedy walk equals the nested implication on all eight intents",
    ));

    let argmax_ok = choice::IntentTriple::all().into_iter().all(|t| {
        let psi = choice::mix_evaluation(t);
        let best = *psi.values().iter().max().unwrap();
        psi.value(choice::run_exact(t).chosen) == best
    });
    checks.push(check(
        "exact-argmax",
        argmax_ok,
        "exact walk lands in the arg max of the mixed evaluation",
    ));

    let mut inf_ok = true;
    let mut inf_detail = Vec::new();
    for n in 0..=max_arity.min(4) {
        let summary = boolinf::exhaustive_verify(n)?;
        inf_ok &= summary.failures.is_empty();
        inf_detail.push(format!(
            "arity {n}: {}/{}",
            summary.functions_checked - summary.failures.len() as u64,
            summary.functions_checked
        ));
    }
    checks.push(check("inf-exhaustive", inf_ok, inf_detail.join(", ")));

    let plain = search_boolean_interpretations(Polarity::Primal, false);
    let shaped = search_boolean_interpretations(Polarity::Primal, true);
    let dual_shaped = search_boolean_interpretations(Polarity::Dual, true);
    let search_ok = plain == vec![BooleanInterpretation::AND_NOT, BooleanInterpretation::XOR]
        && shaped == vec![BooleanInterpretation::AND_NOT]
        && dual_shaped == vec![BooleanInterpretation::IMPLIED_BY];
    checks.push(check(
        "interpretation-search",
        search_ok,
        "a AND NOT b plus a XOR b without the shape constraint, unique with it",
    ));

    let canonical_ok = check_axioms(&OperationSystem::boolean_primal(), SystemTag::B, None)?.passed
        && check_axioms(&OperationSystem::boolean_dual(), SystemTag::BDual, None)?.passed;
    checks.push(check(
        "canonical-systems",
        canonical_ok,
        "boolean systems pass B and B*",
    ));

    let decomp = suite::decomposition_suite(instances, seed);
    checks.push(check(
        "decomposition-suite",
        decomp.passed(),
        format!(
            "{} random instances, {} failures",
            decomp.instances,
            decomp.failures.len()
        ),
    ));

    let embed = suite::embedding_suite(100, 10, seed);
    checks.push(check(
        "embedding-suite",
        embed.passed(),
        format!(
            "{} random posets, {} failures",
            embed.instances,
            embed.failures.len()
        ),
    ));

    let axioms = lefebvre::check_choice_axioms(|a, b, c| lefebvre::f_real(a, b, c).unwrap(), 0.1)?;
    let mut grid_ok = axioms.passed;
    for i in 0..=10u32 {
        for j in 0..=10u32 {
            for k in 0..=10u32 {
                let (a, b, c) = (i as f64 / 10.0, j as f64 / 10.0, k as f64 / 10.0);
                let m = lefebvre::marginals(&lefebvre::pl_characteristic(a, b, c)?);
                grid_ok &= (m.x1 - a).abs() <= EXACT_TOL
                    && (m.x2 - b).abs() <= EXACT_TOL
                    && (m.x3 - c).abs() <= EXACT_TOL
                    && (m.z - lefebvre::f_real(a, b, c)?).abs() <= EXACT_TOL;
            }
        }
    }
    checks.push(check(
        "choice-function-grid",
        grid_ok,
        "axioms L1-L4 and the product-ensemble identity on the 0.1 grid",
    ));

    let uniform = lefebvre::EnsembleCharacteristic::new([0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1])?;
    let m = lefebvre::marginals(&uniform);
    let gap_ok = (m.z - 0.5).abs() <= EXACT_TOL
        && (lefebvre::f_real(0.4, 0.4, 0.4)? - 0.544).abs() <= EXACT_TOL;
    let mut two = [0.0; 8];
    two[3] = 0.5;
    two[5] = 0.5;
    let m2 = lefebvre::marginals(&lefebvre::EnsembleCharacteristic::new(two)?);
    let f2 = lefebvre::f_real(0.5, 0.5, 1.0)?;
    let rel_ok = (f2 - m2.z) / f2 >= 0.30;
    let hold1 = lefebvre::equality_region_scan(1.0, 0.4, 0.6, 50, seed)?.holds_for_all;
    let hold2 = lefebvre::equality_region_scan(0.7, 1.0, 0.3, 50, seed)?.holds_for_all;
    let hold3 = lefebvre::equality_region_scan(0.5, 0.3, 0.0, 50, seed)?.holds_for_all;
    let broken = lefebvre::equality_region_scan(0.5, 0.0, 0.5, 50, seed)?;
    checks.push(check(
        "ensemble-anchors",
        gap_ok && rel_ok && hold1 && hold2 && hold3 && !broken.holds_for_all,
        format!(
            "averages deviate from the choice function by 0.044 and 30%; \
             equality pinned on three boundary planes, counterexample depth {}",
            broken.worst_deviation
        ),
    ));

    let root = lefebvre::golden_section_root();
    let chr = lefebvre::golden_ensemble(root)?;
    let gm = lefebvre::marginals(&chr);
    let area = lefebvre::realist_truth_area();
    let emp = lefebvre::sample_ensemble(&chr, 1_000_000, seed);
    let sigma3 = |q: f64| 3.0 * (q * (1.0 - q) / 1_000_000.0).sqrt();
    let golden_ok = (root - (5f64.sqrt() - 1.0) / 2.0).abs() <= 1e-10
        && chr.support().iter().all(|k| area.contains(k))
        && (chr.probabilities().iter().sum::<f64>() - 1.0).abs() <= EXACT_TOL
        && (gm.x3 - root).abs() <= EXACT_TOL
        && (emp.x3 - gm.x3).abs() <= sigma3(gm.x3)
        && (emp.z - gm.z).abs() <= sigma3(gm.z);
    checks.push(check(
        "golden-section",
        golden_ok,
        format!("root {root}, million-draw estimate within three sigma"),
    ));

    let all = checks.iter().all(|c| c.passed);
    let mut report = Report::new(
        "verify-suite",
        if all { Verdict::Pass } else { Verdict::Fail },
    )
    .payload(json!({
        "seed": seed,
        "instances": instances,
        "max_arity": max_arity,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    }));
    for c in &checks {
        report = report.line(format!(
            "{} {} - {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    Ok(report)
}
