mod common;

use ltlf_core::factors::{lf, monomial_sat, simp, smart_and, theta_lf, LinearFactor, Literal, Monomial};
use ltlf_core::semantics::eval_lasso;
use ltlf_core::syntax::{FormalConjunction, Formula};
use proptest::prelude::*;

use common::{lasso, pnf, symbol, APS};

fn literal() -> impl Strategy<Value = Literal> {
    (prop::sample::select(APS.to_vec()), any::<bool>()).prop_map(|(a, negated)| Literal {
        atom: a.to_string(),
        negated,
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(literal(), 0..4).prop_map(Monomial::from_literals)
}

/// Replaces `from` by `to` among the next-components of `factors`.
fn rename(factors: impl IntoIterator<Item = LinearFactor>, from: &Formula, to: &Formula) -> Vec<LinearFactor> {
    let mut out: Vec<LinearFactor> = factors
        .into_iter()
        .map(|f| {
            let next = FormalConjunction::from_formulas(
                f.next.iter().map(|q| if q == from { to.clone() } else { q.clone() }),
            );
            LinearFactor::new(f.monomial, next)
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn smart_and_is_sound(a in monomial(), b in monomial(), x in symbol()) {
        prop_assert_eq!(
            monomial_sat(&x, &smart_and(&a, &b)),
            monomial_sat(&x, &a) && monomial_sat(&x, &b)
        );
    }

    #[test]
    fn simp_is_sound(f in pnf(5), w in lasso()) {
        let disjunction = Formula::disjunction(simp(&f).iter().map(FormalConjunction::to_formula));
        prop_assert_eq!(eval_lasso(&disjunction, &w), eval_lasso(&f, &w));
    }

    #[test]
    fn expansion_theorem(f in pnf(5), w in lasso()) {
        prop_assert_eq!(eval_lasso(&theta_lf(&lf(&f)), &w), eval_lasso(&f, &w));
    }

    #[test]
    fn factors_are_normalized(f in pnf(5)) {
        for factor in lf(&f) {
            prop_assert!(!factor.monomial.is_bottom());
            prop_assert!(factor.next.elems().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(factor.next.iter().all(|q| q.is_temporal() && *q != Formula::True));
        }
    }

    #[test]
    fn shortcuts_agree_with_until_and_release(g in pnf(4)) {
        let ev = Formula::eventually(g.clone());
        let until = Formula::until(Formula::True, g.clone());
        prop_assert_eq!(rename(lf(&ev), &ev, &until), rename(lf(&until), &until, &until));

        let al = Formula::always(g.clone());
        let release = Formula::release(Formula::False, g);
        prop_assert_eq!(rename(lf(&al), &al, &release), rename(lf(&release), &release, &release));
    }
}
