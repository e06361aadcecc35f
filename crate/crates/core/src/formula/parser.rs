//! Recursive-descent parser for the formula language.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! formula := iff ;  iff := imp ("<->" imp)*            (left-assoc)
//! imp     := or ("->" or)*                             (right-assoc)
//! or      := and (("|" | "+") and)* ;  and := not ("&" not)* ;
//! not     := ("~" | "!") not | primary ;
//! primary := "T" | "F" | IDENT | macro | "(" formula ")" ;
//! macro   := ("EXONE"|"ATMOSTONE"|"ATLEASTONE"|"TAUT") "(" IDENT ("," IDENT)* ")" ;
//! ```
//!
//! `+` is accepted for disjunction on input only; the printer always emits
//! `|`. Unparenthesized `&`/`|` chains collect into one n-ary node.

use std::collections::BTreeMap;

use super::{Atom, Formula, FormulaError};
use crate::assumptions;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Ident(String),
    Macro(MacroKind),
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Comma,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MacroKind {
    ExactlyOne,
    AtMostOne,
    AtLeastOne,
    Tautology,
}

impl MacroKind {
    fn name(self) -> &'static str {
        match self {
            MacroKind::ExactlyOne => "EXONE",
            MacroKind::AtMostOne => "ATMOSTONE",
            MacroKind::AtLeastOne => "ATLEASTONE",
            MacroKind::Tautology => "TAUT",
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::True => "`T`".to_string(),
        Tok::False => "`F`".to_string(),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Macro(k) => format!("`{}`", k.name()),
        Tok::Not => "`~`".to_string(),
        Tok::And => "`&`".to_string(),
        Tok::Or => "`|`".to_string(),
        Tok::Arrow => "`->`".to_string(),
        Tok::DoubleArrow => "`<->`".to_string(),
        Tok::LParen => "`(`".to_string(),
        Tok::RParen => "`)`".to_string(),
        Tok::Comma => "`,`".to_string(),
        Tok::Eof => "end of input".to_string(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '~' | '!' => {
                toks.push((Tok::Not, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::And, i));
                i += 1;
            }
            '|' | '+' => {
                toks.push((Tok::Or, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(FormulaError::Parse {
                        position: i,
                        expected: "`->`".to_string(),
                        found: format!("`{}`", &text[i..(i + 1).min(text.len())]),
                    });
                }
            }
            '<' => {
                if text[i..].starts_with("<->") {
                    toks.push((Tok::DoubleArrow, i));
                    i += 3;
                } else {
                    return Err(FormulaError::Parse {
                        position: i,
                        expected: "`<->`".to_string(),
                        found: format!("`{}`", &text[i..(i + 1).min(text.len())]),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "T" => Tok::True,
                    "F" => Tok::False,
                    "EXONE" => Tok::Macro(MacroKind::ExactlyOne),
                    "ATMOSTONE" => Tok::Macro(MacroKind::AtMostOne),
                    "ATLEASTONE" => Tok::Macro(MacroKind::AtLeastOne),
                    "TAUT" => Tok::Macro(MacroKind::Tautology),
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, start));
            }
            _ => {
                return Err(FormulaError::Parse {
                    position: i,
                    expected: "an operator, identifier, or parenthesis".to_string(),
                    found: format!("`{c}`"),
                })
            }
        }
    }
    toks.push((Tok::Eof, bytes.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    defs: &'a BTreeMap<String, Formula>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> FormulaError {
        FormulaError::Parse {
            position: self.pos(),
            expected: expected.to_string(),
            found: describe(self.peek()),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), FormulaError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.imp()?;
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.imp()?;
            f = Formula::iff(f, rhs);
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let mut items = vec![self.or()?];
        while self.eat(&Tok::Arrow) {
            items.push(self.or()?);
        }
        let mut f = items.pop().unwrap();
        while let Some(lhs) = items.pop() {
            f = Formula::implies(lhs, f);
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut items = vec![self.and()?];
        while self.eat(&Tok::Or) {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut items = vec![self.not()?];
        while self.eat(&Tok::And) {
            items.push(self.not()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn not(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Not) {
            Ok(Formula::not(self.not()?))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(bound) = self.defs.get(&name) {
                    Ok(bound.clone())
                } else {
                    Ok(Formula::Var(Atom::new(&name)?))
                }
            }
            Tok::Macro(kind) => {
                let start = self.pos();
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let mut atoms = vec![self.macro_arg()?];
                while self.eat(&Tok::Comma) {
                    atoms.push(self.macro_arg()?);
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                let built = match kind {
                    MacroKind::ExactlyOne => assumptions::exactly_one(&atoms),
                    MacroKind::AtMostOne => assumptions::at_most_one(&atoms),
                    MacroKind::AtLeastOne => assumptions::at_least_one(&atoms),
                    MacroKind::Tautology => assumptions::tautology_product(&atoms),
                };
                built.map_err(|e| FormulaError::Parse {
                    position: start,
                    expected: format!("distinct arguments to {}", kind.name()),
                    found: e.to_string(),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error("`T`, `F`, an identifier, a macro, `~`, or `(`")),
        }
    }

    fn macro_arg(&mut self) -> Result<Atom, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Atom::new(&name)
            }
            _ => Err(self.error("an identifier")),
        }
    }
}

/// Parses `text` into a formula.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    parse_with_defs(text, &BTreeMap::new())
}

/// Parses `text`, substituting any identifier bound in `defs` by its bound
/// formula. Bindings shadow atoms of the same name.
pub fn parse_with_defs(
    text: &str,
    defs: &BTreeMap<String, Formula>,
) -> Result<Formula, FormulaError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, defs };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input or an operator"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn v(name: &str) -> Formula {
        Formula::Var(atom(name))
    }

    #[test]
    fn parses_literals_and_negation() {
        assert_eq!(
            parse("A1 & ~A2").unwrap(),
            Formula::And(vec![v("A1"), Formula::not(v("A2"))])
        );
        assert_eq!(parse("!A").unwrap(), Formula::not(v("A")));
        assert_eq!(parse("~~A").unwrap(), Formula::not(Formula::not(v("A"))));
    }

    #[test]
    fn parses_implication() {
        assert_eq!(parse("A -> B").unwrap(), Formula::implies(v("A"), v("B")));
        // Right-associative.
        assert_eq!(
            parse("A -> B -> C").unwrap(),
            Formula::implies(v("A"), Formula::implies(v("B"), v("C")))
        );
    }

    #[test]
    fn iff_is_left_associative() {
        assert_eq!(
            parse("A <-> B <-> C").unwrap(),
            Formula::iff(Formula::iff(v("A"), v("B")), v("C"))
        );
    }

    #[test]
    fn plus_is_disjunction_on_input() {
        assert_eq!(parse("A + B").unwrap(), parse("A | B").unwrap());
        assert_eq!(parse("A1 & ~A2 + ~A1 & A2").unwrap(), parse("A1 & ~A2 | ~A1 & A2").unwrap());
    }

    #[test]
    fn chains_collect_into_nary_nodes() {
        assert_eq!(
            parse("A & B & C").unwrap(),
            Formula::And(vec![v("A"), v("B"), v("C")])
        );
        // A parenthesized subchain stays a separate node.
        assert_eq!(
            parse("(A & B) & C").unwrap(),
            Formula::And(vec![Formula::And(vec![v("A"), v("B")]), v("C")])
        );
    }

    #[test]
    fn precedence_not_and_or_imp_iff() {
        assert_eq!(
            parse("~A & B | C -> D <-> E").unwrap(),
            Formula::iff(
                Formula::implies(
                    Formula::Or(vec![
                        Formula::And(vec![Formula::not(v("A")), v("B")]),
                        v("C")
                    ]),
                    v("D")
                ),
                v("E")
            )
        );
    }

    #[test]
    fn constants_parse() {
        assert_eq!(parse("T").unwrap(), Formula::True);
        assert_eq!(parse("F").unwrap(), Formula::False);
        assert_eq!(
            parse("T & A").unwrap(),
            Formula::And(vec![Formula::True, v("A")])
        );
    }

    #[test]
    fn macros_expand() {
        // Expansion is checked semantically against the displayed forms in
        // the semantics tests; here we only check shape-level facts.
        let i3 = parse("EXONE(A1,A2,A3)").unwrap();
        assert_eq!(
            i3.atoms(),
            [atom("A1"), atom("A2"), atom("A3")].into_iter().collect()
        );
        assert!(parse("ATLEASTONE(A1)").is_ok());
        assert!(parse("TAUT(A1,A2)").is_ok());
    }

    #[test]
    fn parse_errors_carry_position_and_expectation() {
        let err = parse("A & ").unwrap_err();
        match err {
            FormulaError::Parse {
                position,
                expected,
                found,
            } => {
                assert_eq!(position, 4);
                assert!(expected.contains("identifier"));
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse("A ) B").is_err());
        assert!(parse("(A & B").is_err());
        assert!(parse("A <- B").is_err());
        assert!(parse("A $ B").is_err());
    }

    #[test]
    fn macro_misuse_is_rejected() {
        // Macro used as a bare atom.
        assert!(parse("EXONE").is_err());
        // Reserved word in argument position.
        assert!(parse("EXONE(T, A)").is_err());
        // Duplicate arguments.
        let err = parse("EXONE(A1, A1)").unwrap_err();
        assert!(matches!(err, FormulaError::Parse { .. }));
        // Empty argument list.
        assert!(parse("EXONE()").is_err());
    }

    #[test]
    fn defs_substitute_bound_names() {
        let mut defs = BTreeMap::new();
        defs.insert("lhs".to_string(), parse("A1 & A2").unwrap());
        let f = parse_with_defs("lhs | B", &defs).unwrap();
        assert_eq!(f, parse("(A1 & A2) | B").unwrap());
    }
}
