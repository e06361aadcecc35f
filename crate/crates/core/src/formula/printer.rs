//! Precedence-minimal rendering of formulas.
//!
//! The output re-parses to a structurally equal tree. Besides the usual
//! precedence rules this needs two extra parenthesizations: a same-kind
//! child inside an n-ary `&`/`|` chain (the parser would otherwise flatten
//! it) and the associativity sides of `->` (right) and `<->` (left).

use super::Formula;

// Precedence levels, loosest first. A node prints bare in a slot that
// requires at most its own level.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::True | Formula::False | Formula::Var(_) => 6,
        Formula::Not(_) => NOT,
        Formula::And(_) => AND,
        Formula::Or(_) => OR,
        Formula::Implies(_, _) => IMP,
        Formula::Iff(_, _) => IFF,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write_at(f, IFF, out);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push('T'),
        Formula::False => out.push('F'),
        Formula::Var(a) => out.push_str(&a.name()),
        Formula::Not(c) => {
            out.push('~');
            write_at(c, NOT, out);
        }
        Formula::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                write_at(c, NOT, out);
            }
        }
        Formula::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_at(c, AND, out);
            }
        }
        Formula::Implies(l, r) => {
            write_at(l, OR, out);
            out.push_str(" -> ");
            write_at(r, IMP, out);
        }
        Formula::Iff(l, r) => {
            write_at(l, IFF, out);
            out.push_str(" <-> ");
            write_at(r, IMP, out);
        }
    }
}

pub(super) fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_at(f, IFF, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Atom, Formula};
    use proptest::prelude::*;

    fn v(name: &str) -> Formula {
        Formula::Var(Atom::new(name).unwrap())
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            Formula::And(vec![v("A"), Formula::not(v("B"))]).render(),
            "A & ~B"
        );
        assert_eq!(Formula::Or(vec![v("A"), v("B")]).render(), "A | B");
        assert_eq!(
            Formula::implies(Formula::And(vec![v("A"), v("B")]), v("C")).render(),
            "A & B -> C"
        );
    }

    #[test]
    fn associativity_is_preserved() {
        let right = Formula::implies(v("A"), Formula::implies(v("B"), v("C")));
        assert_eq!(right.render(), "A -> B -> C");
        let left = Formula::implies(Formula::implies(v("A"), v("B")), v("C"));
        assert_eq!(left.render(), "(A -> B) -> C");

        let iff_left = Formula::iff(Formula::iff(v("A"), v("B")), v("C"));
        assert_eq!(iff_left.render(), "A <-> B <-> C");
        let iff_right = Formula::iff(v("A"), Formula::iff(v("B"), v("C")));
        assert_eq!(iff_right.render(), "A <-> (B <-> C)");
    }

    #[test]
    fn nested_chains_keep_their_shape() {
        let nested = Formula::And(vec![Formula::And(vec![v("A"), v("B")]), v("C")]);
        assert_eq!(nested.render(), "(A & B) & C");
        assert_eq!(parse(&nested.render()).unwrap(), nested);
    }

    // Strategy for arbitrary formula trees over a small atom pool, including
    // shapes the parser itself never produces (nested same-kind chains).
    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            (0..6u32).prop_map(|i| v(&format!("P{i}"))),
        ];
        leaf.prop_recursive(5, 64, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_render_round_trip(f in formula_strategy()) {
            let text = f.render();
            let back = parse(&text).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
