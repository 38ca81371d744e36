mod common;

use std::cmp::Ordering;

use ltlf_core::semantics::eval_lasso;
use ltlf_core::syntax::{conj, parse, to_pnf, FormalConjunction, Formula};
use proptest::prelude::*;

use common::{formula, lasso, pnf, temporal};

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Token {
    Rank(u8),
    Name(String),
}

/// Prefix encoding: constructor rank, then the children left to right.
/// Arity is fixed per rank, so encodings are prefix-free and their
/// lexicographic order is an independent reading of the formula order.
fn tokens(f: &Formula, out: &mut Vec<Token>) {
    let rank = |r| Token::Rank(r);
    match f {
        Formula::False => out.push(rank(0)),
        Formula::True => out.push(rank(1)),
        Formula::Atom(a) => {
            out.push(rank(2));
            out.push(Token::Name(a.clone()));
        }
        Formula::Not(g) | Formula::Next(g) | Formula::Eventually(g) | Formula::Always(g) => {
            out.push(rank(match f {
                Formula::Not(_) => 3,
                Formula::Next(_) => 4,
                Formula::Eventually(_) => 5,
                _ => 6,
            }));
            tokens(g, out);
        }
        Formula::Until(a, b) | Formula::Release(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            out.push(rank(match f {
                Formula::Until(..) => 7,
                Formula::Release(..) => 8,
                Formula::And(..) => 9,
                _ => 10,
            }));
            tokens(a, out);
            tokens(b, out);
        }
    }
}

fn key(f: &Formula) -> Vec<Token> {
    let mut out = Vec::new();
    tokens(f, &mut out);
    out
}

fn fc(items: Vec<Formula>) -> FormalConjunction {
    FormalConjunction::from_formulas(items)
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in formula(5)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn pnf_output_is_pnf(f in formula(5)) {
        prop_assert!(to_pnf(&f).is_pnf());
    }

    #[test]
    fn pnf_preserves_semantics(f in formula(5), w in lasso()) {
        prop_assert_eq!(eval_lasso(&f, &w), eval_lasso(&to_pnf(&f), &w));
    }

    #[test]
    fn pnf_is_identity_on_pnf(f in pnf(5)) {
        prop_assert_eq!(to_pnf(&f).into_inner(), f);
    }

    #[test]
    fn order_matches_prefix_encoding(a in formula(4), b in formula(4)) {
        prop_assert_eq!(a.cmp(&b), key(&a).cmp(&key(&b)));
        let relations = [a < b, a == b, a > b];
        prop_assert_eq!(relations.iter().filter(|&&r| r).count(), 1);
    }

    #[test]
    fn order_is_transitive(a in formula(3), b in formula(3), c in formula(3)) {
        let mut v = [a, b, c];
        v.sort();
        prop_assert!(v[0] <= v[1] && v[1] <= v[2] && v[0] <= v[2]);
        prop_assert_ne!(v[0].cmp(&v[2]), Ordering::Greater);
    }

    #[test]
    fn conjunction_laws(
        a in prop::collection::vec(temporal(2), 0..4),
        b in prop::collection::vec(temporal(2), 0..4),
        c in prop::collection::vec(temporal(2), 0..4),
    ) {
        let (a, b, c) = (fc(a), fc(b), fc(c));
        prop_assert_eq!(conj(&conj(&a, &b), &c), conj(&a, &conj(&b, &c)));
        prop_assert_eq!(conj(&a, &b), conj(&b, &a));
        prop_assert_eq!(conj(&a, &a), a.clone());
        prop_assert_eq!(conj(&a, &FormalConjunction::top()), a.clone());
        prop_assert!(a.elems().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(!a.elems().contains(&Formula::True));
    }
}
