//! Atoms, universes, and the propositional formula AST, together with the
//! structural transformations the rest of the crate is built on: relabelling,
//! negation-swap, cofactoring, and parsing/printing of the concrete syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

mod intern;
mod parser;
mod printer;

pub use parser::{parse, parse_with_defs};

/// Identifier strings that the grammar claims for itself and that therefore
/// cannot name atoms.
pub const RESERVED_WORDS: &[&str] = &["T", "F", "EXONE", "ATMOSTONE", "ATLEASTONE", "TAUT"];

/// Errors produced while building or transforming formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("parse error at byte {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("`{0}` is a reserved word and cannot name an atom")]
    ReservedName(String),
    #[error("`{0}` is not a valid atom name")]
    InvalidName(String),
    #[error("atom map is not a bijection: {0}")]
    InvalidPermutation(String),
    #[error("duplicate atom `{0}` in universe")]
    DuplicateAtom(String),
}

/// An interned proposition symbol.
///
/// Two atoms are equal iff their ids are equal; the id order is the
/// interning order, which makes `Atom` usable as an ordered map key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    /// Interns `name` and returns the atom for it. Fails on malformed or
    /// reserved names.
    pub fn new(name: &str) -> Result<Atom, FormulaError> {
        intern::intern(name).map(Atom)
    }

    pub fn name(&self) -> String {
        intern::name_of(self.0)
    }

    pub fn id(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An ordered, duplicate-free set of atoms: the working set a model count
/// ranges over. Order is declaration order and is stable; the decision
/// diagram backend uses it as its variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
}

impl Universe {
    pub fn new(atoms: Vec<Atom>) -> Result<Universe, FormulaError> {
        let mut index = BTreeMap::new();
        for (i, &a) in atoms.iter().enumerate() {
            if index.insert(a, i).is_some() {
                return Err(FormulaError::DuplicateAtom(a.name()));
            }
        }
        Ok(Universe { atoms, index })
    }

    /// The atoms of `formulas` in first-occurrence order. This is the default
    /// universe for a query; any extension with unused atoms leaves every
    /// probability unchanged.
    pub fn spanning(formulas: &[&Formula]) -> Universe {
        let mut atoms = Vec::new();
        let mut seen = BTreeSet::new();
        for f in formulas {
            f.visit_atoms(&mut |a| {
                if seen.insert(a) {
                    atoms.push(a);
                }
            });
        }
        Universe::new(atoms).expect("first-occurrence collection cannot duplicate")
    }

    /// Extends this universe with any atoms of `extra` it does not already
    /// contain, in `extra`'s order.
    pub fn extended(&self, extra: &[Atom]) -> Universe {
        let mut atoms = self.atoms.clone();
        for &a in extra {
            if !self.index.contains_key(&a) && !atoms[self.len()..].contains(&a) {
                atoms.push(a);
            }
        }
        Universe::new(atoms).expect("extension preserves distinctness")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.index.contains_key(&a)
    }

    pub fn index_of(&self, a: Atom) -> Option<usize> {
        self.index.get(&a).copied()
    }
}

/// Abstract syntax of a propositional formula.
///
/// `And`/`Or` are n-ary so that flat chains stay flat; the parser collects
/// `a & b & c` into a single `And` with three children. Structural equality
/// is derived and is independent of semantic equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(a: Atom) -> Formula {
        Formula::Var(a)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction of `items`: `T` when empty, the item itself for one.
    pub fn conj(items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::True,
            1 => items.into_iter().next().unwrap(),
            _ => Formula::And(items),
        }
    }

    /// Disjunction of `items`: `F` when empty, the item itself for one.
    pub fn disj(items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::False,
            1 => items.into_iter().next().unwrap(),
            _ => Formula::Or(items),
        }
    }

    /// A positive or negated occurrence of `a`.
    pub fn literal(a: Atom, positive: bool) -> Formula {
        if positive {
            Formula::Var(a)
        } else {
            Formula::not(Formula::Var(a))
        }
    }

    fn visit_atoms(&self, visit: &mut impl FnMut(Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(a) => visit(*a),
            Formula::Not(c) => c.visit_atoms(visit),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.visit_atoms(visit);
                }
            }
            Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit_atoms(visit);
                r.visit_atoms(visit);
            }
        }
    }

    /// The set of atoms syntactically occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut set = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            set.insert(a);
        });
        set
    }

    /// Renders the formula in the concrete syntax, with the minimal
    /// parenthesization that re-parses to a structurally equal tree.
    pub fn render(&self) -> String {
        printer::render(self)
    }

    fn map_vars(&self, map: &impl Fn(Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(a) => map(*a),
            Formula::Not(c) => Formula::Not(Box::new(c.map_vars(map))),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.map_vars(map)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.map_vars(map)).collect()),
            Formula::Implies(l, r) => {
                Formula::Implies(Box::new(l.map_vars(map)), Box::new(r.map_vars(map)))
            }
            Formula::Iff(l, r) => {
                Formula::Iff(Box::new(l.map_vars(map)), Box::new(r.map_vars(map)))
            }
        }
    }

    /// Applies an atom permutation to every variable, leaving the tree shape
    /// unchanged. `perm` must be injective with equal domain and range sets;
    /// atoms outside the map are fixed.
    pub fn relabel(&self, perm: &BTreeMap<Atom, Atom>) -> Result<Formula, FormulaError> {
        let domain: BTreeSet<Atom> = perm.keys().copied().collect();
        let range: BTreeSet<Atom> = perm.values().copied().collect();
        if range.len() != perm.len() {
            return Err(FormulaError::InvalidPermutation(
                "two atoms map to the same target".to_string(),
            ));
        }
        if domain != range {
            return Err(FormulaError::InvalidPermutation(
                "domain and range differ, so some atom has no preimage".to_string(),
            ));
        }
        Ok(self.map_vars(&|a| Formula::Var(perm.get(&a).copied().unwrap_or(a))))
    }

    /// Replaces every occurrence of an atom in `flip` by its negation.
    /// Applying the same flip set twice yields a semantically equivalent
    /// formula (double negation).
    pub fn negation_swap(&self, flip: &BTreeSet<Atom>) -> Formula {
        self.map_vars(&|a| {
            if flip.contains(&a) {
                Formula::not(Formula::Var(a))
            } else {
                Formula::Var(a)
            }
        })
    }

    /// Fixes `atom` to `value` and constant-folds: no constant survives as a
    /// proper subterm of the result.
    pub fn cofactor(&self, atom: Atom, value: bool) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(a) => {
                if *a == atom {
                    if value {
                        Formula::True
                    } else {
                        Formula::False
                    }
                } else {
                    Formula::Var(*a)
                }
            }
            Formula::Not(c) => match c.cofactor(atom, value) {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                other => Formula::not(other),
            },
            Formula::And(cs) => {
                let mut kept = Vec::new();
                for c in cs {
                    match c.cofactor(atom, value) {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        other => kept.push(other),
                    }
                }
                Formula::conj(kept)
            }
            Formula::Or(cs) => {
                let mut kept = Vec::new();
                for c in cs {
                    match c.cofactor(atom, value) {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        other => kept.push(other),
                    }
                }
                Formula::disj(kept)
            }
            Formula::Implies(l, r) => {
                match (l.cofactor(atom, value), r.cofactor(atom, value)) {
                    (Formula::False, _) => Formula::True,
                    (_, Formula::True) => Formula::True,
                    (Formula::True, r2) => r2,
                    (l2, Formula::False) => Formula::not(l2),
                    (l2, r2) => Formula::implies(l2, r2),
                }
            }
            Formula::Iff(l, r) => match (l.cofactor(atom, value), r.cofactor(atom, value)) {
                (Formula::True, r2) => r2,
                (l2, Formula::True) => l2,
                (Formula::False, r2) => match r2 {
                    Formula::False => Formula::True,
                    other => Formula::not(other),
                },
                (l2, Formula::False) => Formula::not(l2),
                (l2, r2) => Formula::iff(l2, r2),
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn v(name: &str) -> Formula {
        Formula::Var(a(name))
    }

    #[test]
    fn interning_is_stable() {
        let x = a("A1");
        let y = a("A1");
        assert_eq!(x, y);
        assert_eq!(x.name(), "A1");
        assert_ne!(a("A1"), a("A2"));
    }

    #[test]
    fn reserved_and_malformed_names_rejected() {
        for word in RESERVED_WORDS {
            assert!(matches!(
                Atom::new(word),
                Err(FormulaError::ReservedName(_))
            ));
        }
        assert!(matches!(Atom::new("1A"), Err(FormulaError::InvalidName(_))));
        assert!(matches!(Atom::new(""), Err(FormulaError::InvalidName(_))));
        assert!(matches!(
            Atom::new("a-b"),
            Err(FormulaError::InvalidName(_))
        ));
        assert!(Atom::new("_ok_2").is_ok());
    }

    #[test]
    fn universe_rejects_duplicates() {
        assert!(Universe::new(vec![a("A1"), a("A2")]).is_ok());
        assert!(matches!(
            Universe::new(vec![a("A1"), a("A1")]),
            Err(FormulaError::DuplicateAtom(_))
        ));
    }

    #[test]
    fn spanning_universe_uses_first_occurrence_order() {
        let f = parse("B & A | C").unwrap();
        let u = Universe::spanning(&[&f]);
        let names: Vec<String> = u.atoms().iter().map(Atom::name).collect();
        assert_eq!(names, vec!["B", "A", "C"]);
    }

    #[test]
    fn atoms_of_examples() {
        let f = parse("A1 & ~A2").unwrap();
        assert_eq!(f.atoms(), [a("A1"), a("A2")].into_iter().collect());
        assert!(Formula::True.atoms().is_empty());
        let g = parse("A1 | (A1 & A2)").unwrap();
        assert_eq!(g.atoms(), [a("A1"), a("A2")].into_iter().collect());
    }

    #[test]
    fn relabel_swap() {
        let f = parse("A1 & ~A2").unwrap();
        let perm: BTreeMap<Atom, Atom> =
            [(a("A1"), a("A2")), (a("A2"), a("A1"))].into_iter().collect();
        assert_eq!(f.relabel(&perm).unwrap(), parse("A2 & ~A1").unwrap());
    }

    #[test]
    fn relabel_identity_is_identity() {
        let f = parse("A1 -> (A2 <-> ~A3)").unwrap();
        assert_eq!(f.relabel(&BTreeMap::new()).unwrap(), f);
        let id: BTreeMap<Atom, Atom> = [(a("A1"), a("A1"))].into_iter().collect();
        assert_eq!(f.relabel(&id).unwrap(), f);
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let f = v("A1");
        let squash: BTreeMap<Atom, Atom> =
            [(a("A1"), a("A3")), (a("A2"), a("A3"))].into_iter().collect();
        assert!(matches!(
            f.relabel(&squash),
            Err(FormulaError::InvalidPermutation(_))
        ));
        let open: BTreeMap<Atom, Atom> = [(a("A1"), a("A2"))].into_iter().collect();
        assert!(matches!(
            f.relabel(&open),
            Err(FormulaError::InvalidPermutation(_))
        ));
    }

    #[test]
    fn relabel_composes() {
        let f = parse("A1 & (A2 | ~A3)").unwrap();
        let p: BTreeMap<Atom, Atom> =
            [(a("A1"), a("A2")), (a("A2"), a("A1"))].into_iter().collect();
        let q: BTreeMap<Atom, Atom> =
            [(a("A2"), a("A3")), (a("A3"), a("A2"))].into_iter().collect();
        let two_step = f.relabel(&p).unwrap().relabel(&q).unwrap();
        // q . p as an explicit map over the union of domains.
        let mut comp = BTreeMap::new();
        for atom in [a("A1"), a("A2"), a("A3")] {
            let mid = p.get(&atom).copied().unwrap_or(atom);
            let end = q.get(&mid).copied().unwrap_or(mid);
            comp.insert(atom, end);
        }
        assert_eq!(two_step, f.relabel(&comp).unwrap());
    }

    #[test]
    fn negation_swap_examples() {
        let f = parse("A1 & ~A2").unwrap();
        let flip: BTreeSet<Atom> = [a("A1")].into_iter().collect();
        assert_eq!(f.negation_swap(&flip), parse("~A1 & ~A2").unwrap());
        let both: BTreeSet<Atom> = [a("A1"), a("A2")].into_iter().collect();
        assert_eq!(f.negation_swap(&both), parse("~A1 & ~~A2").unwrap());
        assert_eq!(f.negation_swap(&BTreeSet::new()), f);
    }

    #[test]
    fn cofactor_examples() {
        let f = parse("A1 & A2").unwrap();
        assert_eq!(f.cofactor(a("A1"), true), v("A2"));
        assert_eq!(f.cofactor(a("A1"), false), Formula::False);
        let g = parse("A1 | A2").unwrap();
        assert_eq!(g.cofactor(a("A2"), false), v("A1"));
        assert_eq!(g.cofactor(a("A2"), true), Formula::True);
    }

    #[test]
    fn cofactor_folds_implications_and_biconditionals() {
        let f = parse("A1 -> A2").unwrap();
        assert_eq!(f.cofactor(a("A1"), false), Formula::True);
        assert_eq!(f.cofactor(a("A1"), true), v("A2"));
        assert_eq!(f.cofactor(a("A2"), false), parse("~A1").unwrap());
        let g = parse("A1 <-> A2").unwrap();
        assert_eq!(g.cofactor(a("A1"), true), v("A2"));
        assert_eq!(g.cofactor(a("A1"), false), parse("~A2").unwrap());
    }
}
