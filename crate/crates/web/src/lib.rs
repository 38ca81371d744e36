//! Browser bindings. Every entry point takes plain strings and returns a
//! JSON document; failures are reported as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use ltlf_core::automaton::{build_aa, AlternatingAutomaton};
use ltlf_core::derivatives::descendants;
use ltlf_core::factors::lf;
use ltlf_core::semantics::{eval_lasso, LassoWord};
use ltlf_core::syntax::{parse, to_pnf, Formula};
use ltlf_core::tableau::{build_optimized, eliminate, is_satisfiable};

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| e.to_string())
}

fn render(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|error| json!({ "error": error })).to_string()
}

/// Normal form, linear factors, descendants and the automaton in DOT.
#[wasm_bindgen]
pub fn explore(text: &str) -> String {
    render(formula(text).and_then(|f| {
        let pnf = to_pnf(&f).into_inner();
        let aa = build_aa(&pnf).map_err(|e| e.to_string())?;
        Ok(json!({
            "pnf": pnf.to_string(),
            "factors": lf(&pnf).iter().map(ToString::to_string).collect::<Vec<_>>(),
            "descendants": descendants(&pnf).iter().map(ToString::to_string).collect::<Vec<_>>(),
            "automaton": aa.export_dot(),
        }))
    }))
}

/// Tableau verdict, witness lasso and the eliminated tableau in DOT.
#[wasm_bindgen]
pub fn satisfiability(text: &str) -> String {
    render(formula(text).and_then(|f| {
        let verdict = is_satisfiable(&f).map_err(|e| e.to_string())?;
        Ok(json!({
            "satisfiable": verdict.satisfiable,
            "witness": verdict.witness.map(|w| w.to_string()),
            "tableau": eliminate(build_optimized(&f)).export_dot(),
        }))
    }))
}

/// Evaluates a formula on a lasso with the semantic evaluator and with the
/// automaton.
#[wasm_bindgen]
pub fn evaluate(text: &str, lasso: &str) -> String {
    render(formula(text).and_then(|f| {
        let w = LassoWord::parse(lasso).map_err(|e| e.to_string())?;
        let pnf = to_pnf(&f).into_inner();
        let atoms: Vec<String> = pnf.atoms().union(&w.props()).cloned().collect();
        let aa = AlternatingAutomaton::build(&pnf, &atoms, Default::default())
            .map_err(|e| e.to_string())?;
        let run = aa.accepts_lasso(&w).map_err(|e| e.to_string())?;
        Ok(json!({
            "lasso": w.to_string(),
            "semantics": eval_lasso(&f, &w),
            "automaton": run.accepted,
        }))
    }))
}
