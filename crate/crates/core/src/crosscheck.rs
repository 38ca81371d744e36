//! Runs every cross-module property over a seeded random corpus.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::automaton::{AlternatingAutomaton, TtHandling};
use crate::derivatives::{descendant_bound, descendants_over, in_set_closure, iterated, pderiv, rho};
use crate::factors::{lf, simp, theta_lf};
use crate::gen::CorpusSpec;
use crate::semantics::{eval_lasso, sat_search_bounded, LassoWord, Symbol};
use crate::syntax::Formula;
use crate::tableau::{build_optimized, factors_of_rewrite, is_satisfiable, rewrite_exhaust, Strategy};

/// Names of the checked properties, in report order.
pub const PROPERTIES: [&str; 10] = [
    "expansion",
    "pderiv-equals-rho",
    "closedness",
    "delta-equals-rho",
    "language",
    "language-tt-terminates",
    "confluence",
    "lf-equals-rewrite",
    "isomorphism",
    "sat-verdict",
];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub property: &'static str,
    pub formula: String,
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub seed: u64,
    pub cases: usize,
    pub tallies: BTreeMap<&'static str, Tally>,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn tally(&self, property: &str) -> Tally {
        self.tallies.get(property).cloned().unwrap_or_default()
    }

    /// Deterministic text summary; wall time is not included.
    pub fn summary(&self) -> String {
        let mut out = format!("seed {} cases {}\n", self.seed, self.cases);
        for name in PROPERTIES {
            let t = self.tally(name);
            out.push_str(&format!("{name:<24} {}/{}\n", t.passed, t.checked));
        }
        for f in &self.failures {
            out.push_str(&format!(
                "FAIL case {} {}: {} on {} expected {} got {}\n",
                f.case, f.property, f.formula, f.input, f.expected, f.actual
            ));
        }
        out.push_str(if self.ok() { "OK\n" } else { "FAILED\n" });
        out
    }
}

struct Recorder<'a> {
    report: &'a mut CrosscheckReport,
    case: usize,
    formula: String,
}

impl Recorder<'_> {
    fn check(&mut self, property: &'static str, input: impl FnOnce() -> String, expected: String, actual: String) {
        let tally = self.report.tallies.entry(property).or_default();
        tally.checked += 1;
        if expected == actual {
            tally.passed += 1;
        } else {
            self.report.failures.push(Failure {
                case: self.case,
                property,
                formula: self.formula.clone(),
                input: input(),
                expected,
                actual,
            });
        }
    }
}

/// Checks one formula against its lassos. The automata are built over the
/// corpus propositions.
pub fn check_case(
    report: &mut CrosscheckReport,
    case: usize,
    f: &Formula,
    lassos: &[LassoWord],
    spec: &CorpusSpec,
) {
    let mut rec = Recorder {
        report,
        case,
        formula: f.to_string(),
    };
    let alphabet = Symbol::alphabet(&spec.aps_set());

    let linear = theta_lf(&lf(f));
    for w in lassos {
        rec.check(
            "expansion",
            || w.to_string(),
            eval_lasso(f, w).to_string(),
            eval_lasso(&linear, w).to_string(),
        );
    }

    for x in &alphabet {
        let via_lf: std::collections::BTreeSet<_> = simp(f).iter().flat_map(|c| pderiv(c, x)).collect();
        rec.check(
            "pderiv-equals-rho",
            || x.to_string(),
            format!("{:?}", rho(f, x)),
            format!("{via_lf:?}"),
        );
    }

    let base = iterated(f);
    let desc = descendants_over(f, &alphabet);
    let outside: Vec<String> = desc
        .iter()
        .filter(|c| !in_set_closure(c, &base))
        .map(ToString::to_string)
        .collect();
    let within_bound = (desc.len() as u64) <= descendant_bound(f);
    rec.check(
        "closedness",
        || format!("{} descendants", desc.len()),
        "[] true".into(),
        format!("{outside:?} {within_bound}"),
    );

    let atoms = &spec.aps;
    match (
        AlternatingAutomaton::build(f, atoms, TtHandling::SelfLoop),
        AlternatingAutomaton::build(f, atoms, TtHandling::Terminate),
    ) {
        (Ok(aa), Ok(aa_tt)) => {
            rec.check("delta-equals-rho", String::new, "true".into(), aa.delta_matches_rho().to_string());
            for w in lassos {
                let expected = eval_lasso(f, w).to_string();
                let verdict = |a: &AlternatingAutomaton| match a.accepts_lasso(w) {
                    Ok(v) => v.accepted.to_string(),
                    Err(e) => e.to_string(),
                };
                rec.check("language", || w.to_string(), expected.clone(), verdict(&aa));
                rec.check("language-tt-terminates", || w.to_string(), expected, verdict(&aa_tt));
            }
            let tableau = build_optimized(f).canonical_structure();
            rec.check(
                "isomorphism",
                String::new,
                aa.canonical_structure().serialize(),
                tableau.serialize(),
            );
        }
        (Err(e), _) | (_, Err(e)) => {
            rec.check("delta-equals-rho", String::new, "automaton".into(), e.to_string());
        }
    }

    let start = [std::collections::BTreeSet::from([f.clone()])];
    rec.check(
        "confluence",
        String::new,
        format!("{:?}", rewrite_exhaust(&start, Strategy::FirstSmallest)),
        format!("{:?}", rewrite_exhaust(&start, Strategy::LastLargest)),
    );

    if *f != Formula::False {
        rec.check(
            "lf-equals-rewrite",
            String::new,
            format!("{:?}", lf(f)),
            format!("{:?}", factors_of_rewrite(f, Strategy::FirstSmallest)),
        );
    }

    // A bounded model forces a satisfiable verdict; a returned witness is
    // already validated inside `is_satisfiable`.
    let bounded = sat_search_bounded(f, &spec.aps_set(), 2, 2);
    let verdict = match is_satisfiable(f) {
        Ok(v) => v.satisfiable.to_string(),
        Err(e) => e.to_string(),
    };
    let expected = match &bounded {
        Some(_) => "true".to_string(),
        None if verdict == "false" => "false".to_string(),
        None => "true".to_string(),
    };
    rec.check(
        "sat-verdict",
        || bounded.as_ref().map_or("no bounded model".into(), ToString::to_string),
        expected,
        verdict,
    );
}

/// Runs every property on `spec.count` cases.
pub fn crosscheck(spec: &CorpusSpec) -> CrosscheckReport {
    let started = Instant::now();
    let mut report = CrosscheckReport {
        seed: spec.seed,
        cases: spec.count,
        tallies: PROPERTIES.iter().map(|&p| (p, Tally::default())).collect(),
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (i, (f, lassos)) in spec.cases().enumerate() {
        check_case(&mut report, i, &f, &lassos, spec);
    }
    report.elapsed = started.elapsed();
    report
}
