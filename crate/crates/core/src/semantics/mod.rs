//! Exact semantics of formulas over a universe: evaluation, equivalence,
//! support, canonical disjunctive normal form, and model counting via two
//! independent backends (assignment enumeration and reduced ordered decision
//! diagrams). The two backends cross-check each other; nothing in this module
//! is approximate.

use std::collections::BTreeSet;

use num::{BigUint, One, Zero};
use thiserror::Error;

use crate::formula::{Atom, Formula, Universe};

mod bdd;

pub use bdd::BddStore;

/// Number of satisfying assignments over a universe.
pub type ModelCount = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("universe has {size} atoms; enumeration is capped at {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("atom `{atom}` is not in the universe")]
    AtomOutsideUniverse { atom: String },
    #[error("decision-diagram node store exceeded its cap of {cap} nodes")]
    NodeLimitExceeded { cap: usize },
    #[error("assignment does not cover atom `{atom}`")]
    IncompleteAssignment { atom: String },
}

/// Resource limits for the counting backends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest universe the enumeration backend will walk (hard ceiling 63).
    pub max_enum_atoms: usize,
    /// Node-store cap for the decision-diagram backend.
    pub bdd_node_cap: usize,
    /// Largest support for which `dnf_summary` materializes explicit terms.
    pub explicit_dnf_atoms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum_atoms: 24,
            bdd_node_cap: 10_000_000,
            explicit_dnf_atoms: 16,
        }
    }
}

/// Backend selection. `Auto` picks enumeration for small universes and the
/// decision-diagram backend beyond that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Auto,
    Enumeration,
    Bdd,
}

/// What `Auto` resolved to for a given universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Enumeration,
    Bdd,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Enumeration => "enum",
            BackendKind::Bdd => "bdd",
        }
    }
}

const AUTO_ENUM_MAX_ATOMS: usize = 20;

/// A backend choice plus resource limits; the handle every counting-based
/// operation goes through.
#[derive(Debug, Clone, Default)]
pub struct Engine {
    pub backend: Backend,
    pub limits: Limits,
}

/// A total truth-value assignment over a universe, packed as a bit vector
/// in universe order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment<'u> {
    universe: &'u Universe,
    bits: Vec<u64>,
}

impl<'u> Assignment<'u> {
    pub fn all_false(universe: &'u Universe) -> Assignment<'u> {
        let words = universe.len().div_ceil(64).max(1);
        Assignment {
            universe,
            bits: vec![0; words],
        }
    }

    /// The assignment whose packed value is `index` (bit `i` of `index` is
    /// the truth value of the universe's `i`-th atom). Only meaningful for
    /// universes of at most 64 atoms.
    pub fn from_index(universe: &'u Universe, index: u64) -> Assignment<'u> {
        assert!(universe.len() <= 64, "index form limited to 64 atoms");
        let mut a = Assignment::all_false(universe);
        a.bits[0] = index;
        a
    }

    pub fn universe(&self) -> &Universe {
        self.universe
    }

    pub fn set(&mut self, atom: Atom, value: bool) -> Result<(), SemanticsError> {
        let i = self
            .universe
            .index_of(atom)
            .ok_or_else(|| SemanticsError::AtomOutsideUniverse { atom: atom.name() })?;
        let (word, bit) = (i / 64, i % 64);
        if value {
            self.bits[word] |= 1 << bit;
        } else {
            self.bits[word] &= !(1 << bit);
        }
        Ok(())
    }

    pub fn get(&self, atom: Atom) -> Option<bool> {
        let i = self.universe.index_of(atom)?;
        Some(self.bits[i / 64] >> (i % 64) & 1 == 1)
    }
}

/// Evaluates `f` under `assignment` by the usual connective tables.
pub fn evaluate(f: &Formula, assignment: &Assignment<'_>) -> Result<bool, SemanticsError> {
    for atom in f.atoms() {
        if !assignment.universe().contains(atom) {
            return Err(SemanticsError::IncompleteAssignment { atom: atom.name() });
        }
    }
    Ok(eval_unchecked(f, &|a| {
        assignment.get(a).expect("coverage checked above")
    }))
}

fn eval_unchecked(f: &Formula, lookup: &impl Fn(Atom) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Var(a) => lookup(*a),
        Formula::Not(c) => !eval_unchecked(c, lookup),
        Formula::And(cs) => cs.iter().all(|c| eval_unchecked(c, lookup)),
        Formula::Or(cs) => cs.iter().any(|c| eval_unchecked(c, lookup)),
        Formula::Implies(l, r) => !eval_unchecked(l, lookup) || eval_unchecked(r, lookup),
        Formula::Iff(l, r) => eval_unchecked(l, lookup) == eval_unchecked(r, lookup),
    }
}

fn check_atoms_in(f: &Formula, u: &Universe) -> Result<(), SemanticsError> {
    for atom in f.atoms() {
        if !u.contains(atom) {
            return Err(SemanticsError::AtomOutsideUniverse { atom: atom.name() });
        }
    }
    Ok(())
}

/// A formula with every `Var` compiled to its universe index, so the
/// enumeration inner loop does no map lookups.
enum Compiled {
    True,
    False,
    Var(usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

fn compile(f: &Formula, u: &Universe) -> Compiled {
    match f {
        Formula::True => Compiled::True,
        Formula::False => Compiled::False,
        Formula::Var(a) => Compiled::Var(u.index_of(*a).expect("atoms checked against universe")),
        Formula::Not(c) => Compiled::Not(Box::new(compile(c, u))),
        Formula::And(cs) => Compiled::And(cs.iter().map(|c| compile(c, u)).collect()),
        Formula::Or(cs) => Compiled::Or(cs.iter().map(|c| compile(c, u)).collect()),
        Formula::Implies(l, r) => {
            Compiled::Implies(Box::new(compile(l, u)), Box::new(compile(r, u)))
        }
        Formula::Iff(l, r) => Compiled::Iff(Box::new(compile(l, u)), Box::new(compile(r, u))),
    }
}

fn eval_compiled(c: &Compiled, word: u64) -> bool {
    match c {
        Compiled::True => true,
        Compiled::False => false,
        Compiled::Var(i) => word >> i & 1 == 1,
        Compiled::Not(inner) => !eval_compiled(inner, word),
        Compiled::And(cs) => cs.iter().all(|x| eval_compiled(x, word)),
        Compiled::Or(cs) => cs.iter().any(|x| eval_compiled(x, word)),
        Compiled::Implies(l, r) => !eval_compiled(l, word) || eval_compiled(r, word),
        Compiled::Iff(l, r) => eval_compiled(l, word) == eval_compiled(r, word),
    }
}

fn enum_cap(limits: &Limits) -> usize {
    limits.max_enum_atoms.min(63)
}

fn check_enum_size(u: &Universe, limits: &Limits) -> Result<(), SemanticsError> {
    let cap = enum_cap(limits);
    if u.len() > cap {
        return Err(SemanticsError::UniverseTooLarge {
            size: u.len(),
            cap,
        });
    }
    Ok(())
}

/// Counts the satisfying assignments of `f` over `u` by walking all
/// 2^|u| assignments. The brute-force side of the backend pair.
pub fn model_count_enum(
    f: &Formula,
    u: &Universe,
    limits: &Limits,
) -> Result<ModelCount, SemanticsError> {
    check_atoms_in(f, u)?;
    check_enum_size(u, limits)?;
    let compiled = compile(f, u);
    let mut count: u64 = 0;
    for word in 0..(1u64 << u.len()) {
        if eval_compiled(&compiled, word) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Counts the satisfying assignments of `f` over `u` on a fresh decision
/// diagram. Agrees exactly with [`model_count_enum`] wherever both are
/// defined.
pub fn model_count_bdd(
    f: &Formula,
    u: &Universe,
    limits: &Limits,
) -> Result<ModelCount, SemanticsError> {
    check_atoms_in(f, u)?;
    let mut store = BddStore::new(u.len(), limits.bdd_node_cap);
    let root = store.build(f, u)?;
    Ok(store.count_models(root))
}

/// Summary of a formula's canonical disjunctive normal form over its
/// support: `term_count` minterms over `atom_count` essential atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfSummary {
    pub term_count: ModelCount,
    pub atom_count: usize,
    /// The support, in universe order.
    pub support: Vec<Atom>,
    /// Packed minterm values over the support, ascending; only materialized
    /// when `atom_count` is within the explicit-DNF cap.
    pub terms: Option<Vec<u64>>,
}

impl DnfSummary {
    /// Renders each materialized minterm, e.g. `A1 & ~A2 & ~A3`; the empty
    /// minterm of a tautology renders as `T`.
    pub fn term_strings(&self) -> Option<Vec<String>> {
        let terms = self.terms.as_ref()?;
        Some(
            terms
                .iter()
                .map(|&value| {
                    if self.support.is_empty() {
                        return "T".to_string();
                    }
                    let literals: Vec<Formula> = self
                        .support
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| Formula::literal(a, value >> i & 1 == 1))
                        .collect();
                    Formula::conj(literals).render()
                })
                .collect(),
        )
    }
}

impl Engine {
    pub fn with_backend(backend: Backend) -> Engine {
        Engine {
            backend,
            ..Engine::default()
        }
    }

    /// The backend a query over `u` actually runs on.
    pub fn effective_backend(&self, u: &Universe) -> BackendKind {
        match self.backend {
            Backend::Enumeration => BackendKind::Enumeration,
            Backend::Bdd => BackendKind::Bdd,
            Backend::Auto => {
                if u.len() <= AUTO_ENUM_MAX_ATOMS {
                    BackendKind::Enumeration
                } else {
                    BackendKind::Bdd
                }
            }
        }
    }

    pub fn count(&self, f: &Formula, u: &Universe) -> Result<ModelCount, SemanticsError> {
        match self.effective_backend(u) {
            BackendKind::Enumeration => model_count_enum(f, u, &self.limits),
            BackendKind::Bdd => model_count_bdd(f, u, &self.limits),
        }
    }

    pub fn satisfiable(&self, f: &Formula, u: &Universe) -> Result<bool, SemanticsError> {
        check_atoms_in(f, u)?;
        match self.effective_backend(u) {
            BackendKind::Enumeration => {
                check_enum_size(u, &self.limits)?;
                let compiled = compile(f, u);
                Ok((0..(1u64 << u.len())).any(|word| eval_compiled(&compiled, word)))
            }
            BackendKind::Bdd => {
                let mut store = BddStore::new(u.len(), self.limits.bdd_node_cap);
                let root = store.build(f, u)?;
                Ok(root != bdd::FALSE_NODE)
            }
        }
    }

    /// True iff `f` and `g` agree on every assignment over `u`.
    pub fn equivalent(&self, f: &Formula, g: &Formula, u: &Universe) -> Result<bool, SemanticsError> {
        check_atoms_in(f, u)?;
        check_atoms_in(g, u)?;
        match self.effective_backend(u) {
            BackendKind::Enumeration => {
                check_enum_size(u, &self.limits)?;
                let cf = compile(f, u);
                let cg = compile(g, u);
                Ok((0..(1u64 << u.len()))
                    .all(|word| eval_compiled(&cf, word) == eval_compiled(&cg, word)))
            }
            BackendKind::Bdd => {
                let mut store = BddStore::new(u.len(), self.limits.bdd_node_cap);
                let rf = store.build(f, u)?;
                let rg = store.build(g, u)?;
                Ok(rf == rg)
            }
        }
    }

    /// The atoms `f` semantically depends on: those whose two cofactors are
    /// not equivalent. Returned in universe order.
    pub fn support(&self, f: &Formula, u: &Universe) -> Result<Vec<Atom>, SemanticsError> {
        check_atoms_in(f, u)?;
        match self.effective_backend(u) {
            BackendKind::Enumeration => {
                check_enum_size(u, &self.limits)?;
                let compiled = compile(f, u);
                let syntactic = f.atoms();
                let mut essential = BTreeSet::new();
                for &atom in &syntactic {
                    let i = u.index_of(atom).expect("checked above");
                    let mask = 1u64 << i;
                    for word in 0..(1u64 << u.len()) {
                        if word & mask != 0 {
                            continue;
                        }
                        if eval_compiled(&compiled, word) != eval_compiled(&compiled, word | mask)
                        {
                            essential.insert(atom);
                            break;
                        }
                    }
                }
                Ok(u.atoms()
                    .iter()
                    .copied()
                    .filter(|a| essential.contains(a))
                    .collect())
            }
            BackendKind::Bdd => {
                let mut store = BddStore::new(u.len(), self.limits.bdd_node_cap);
                let root = store.build(f, u)?;
                let vars = store.support_vars(root);
                Ok(vars.into_iter().map(|i| u.atoms()[i]).collect())
            }
        }
    }

    /// Canonical-DNF summary of `f`: the support, the number of minterms of
    /// `f` over it, and (within the cap) the minterms themselves. For every
    /// formula, `term_count * 2^(|u| - atom_count)` equals the model count
    /// over `u`.
    pub fn dnf_summary(&self, f: &Formula, u: &Universe) -> Result<DnfSummary, SemanticsError> {
        let support = self.support(f, u)?;
        let mut reduced = f.clone();
        for atom in f.atoms() {
            if !support.contains(&atom) {
                reduced = reduced.cofactor(atom, false);
            }
        }
        let sub = Universe::new(support.clone()).expect("support atoms are distinct");
        let term_count = self.count(&reduced, &sub)?;
        let atom_count = support.len();
        let terms = if atom_count <= self.limits.explicit_dnf_atoms.min(63) {
            let compiled = compile(&reduced, &sub);
            let values: Vec<u64> = (0..(1u64 << atom_count))
                .filter(|&word| eval_compiled(&compiled, word))
                .collect();
            debug_assert_eq!(BigUint::from(values.len()), term_count);
            Some(values)
        } else {
            None
        };
        Ok(DnfSummary {
            term_count,
            atom_count,
            support,
            terms,
        })
    }
}

/// 2^|u|, the number of assignments over `u`.
pub fn assignment_space(u: &Universe) -> ModelCount {
    BigUint::one() << u.len()
}

/// Convenience: zero model count.
pub fn zero_count() -> ModelCount {
    BigUint::zero()
}
