mod common;

use std::collections::BTreeSet;

use ltlf_core::automaton::{AlternatingAutomaton, TtHandling};
use ltlf_core::factors::lf;
use ltlf_core::semantics::{eval_lasso, sat_search_bounded};
use ltlf_core::syntax::Formula;
use ltlf_core::tableau::{
    build_optimized, build_original, factors_of_rewrite, is_satisfiable, rewrite_exhaust, Strategy,
};
use proptest::prelude::*;

use common::{aps, pnf};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rewriting_is_confluent(f in pnf(5)) {
        let start = [BTreeSet::from([f])];
        prop_assert_eq!(
            rewrite_exhaust(&start, Strategy::FirstSmallest),
            rewrite_exhaust(&start, Strategy::LastLargest)
        );
    }

    #[test]
    fn rewriting_yields_linear_factors(f in pnf(5)) {
        prop_assume!(f != Formula::False);
        prop_assert_eq!(factors_of_rewrite(&f, Strategy::LastLargest), lf(&f));
    }

    #[test]
    fn verdicts_are_sound_and_complete_on_small_models(f in pnf(5)) {
        let verdict = is_satisfiable(&f).unwrap();
        prop_assert_eq!(verdict.satisfiable, verdict.witness.is_some());
        if let Some(w) = &verdict.witness {
            prop_assert!(eval_lasso(&f, w));
        }
        let aps = aps().into_iter().collect();
        if sat_search_bounded(&f, &aps, 2, 2).is_some() {
            prop_assert!(verdict.satisfiable);
        }
    }

    #[test]
    fn original_and_optimized_agree(f in pnf(4)) {
        prop_assert_eq!(build_original(&f).is_satisfiable(), is_satisfiable(&f).unwrap().satisfiable);
    }

    #[test]
    fn tableau_is_isomorphic_to_automaton(f in pnf(5)) {
        let aa = AlternatingAutomaton::build(&f, &aps(), TtHandling::SelfLoop).unwrap();
        prop_assert_eq!(
            aa.canonical_structure().serialize(),
            build_optimized(&f).canonical_structure().serialize()
        );
    }
}
