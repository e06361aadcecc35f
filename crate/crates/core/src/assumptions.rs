//! Constructors for the named assumption formulas — exclusivity,
//! exhaustivity, exactly-one, tautology products, and the union of
//! possibility spaces of unknown size — plus the closed-form tables built
//! from them.

use num::{BigUint, One};
use thiserror::Error;

use crate::formula::{Atom, Formula, Universe};
use crate::prior::{conditional_probability, PriorError, Probability};
use crate::semantics::Engine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssumptionError {
    #[error("assumption constructors need at least one atom")]
    EmptyAtoms,
    #[error("duplicate atom `{0}` in assumption constructor")]
    DuplicateAtoms(String),
}

/// A named assumption family applied to an ordered atom list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssumptionKind {
    ExactlyOne,
    AtMostOne,
    AtLeastOne,
    TautologyProduct,
    UnionOfSpaces,
}

/// An assumption kind plus its atoms; `build` produces the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionSpec {
    pub kind: AssumptionKind,
    pub atoms: Vec<Atom>,
}

impl AssumptionSpec {
    pub fn new(kind: AssumptionKind, atoms: Vec<Atom>) -> Result<AssumptionSpec, AssumptionError> {
        check_atoms(&atoms)?;
        Ok(AssumptionSpec { kind, atoms })
    }

    pub fn build(&self) -> Formula {
        let built = match self.kind {
            AssumptionKind::ExactlyOne => exactly_one(&self.atoms),
            AssumptionKind::AtMostOne => at_most_one(&self.atoms),
            AssumptionKind::AtLeastOne => at_least_one(&self.atoms),
            AssumptionKind::TautologyProduct => tautology_product(&self.atoms),
            AssumptionKind::UnionOfSpaces => union_of_spaces(&self.atoms),
        };
        built.expect("atoms validated at construction")
    }
}

fn check_atoms(atoms: &[Atom]) -> Result<(), AssumptionError> {
    if atoms.is_empty() {
        return Err(AssumptionError::EmptyAtoms);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &a in atoms {
        if !seen.insert(a) {
            return Err(AssumptionError::DuplicateAtoms(a.name()));
        }
    }
    Ok(())
}

// The minterm over `atoms` in which exactly the `true_index`-th atom (or
// none, for None) is true.
fn single_true_minterm(atoms: &[Atom], true_index: Option<usize>) -> Formula {
    Formula::conj(
        atoms
            .iter()
            .enumerate()
            .map(|(i, &a)| Formula::literal(a, Some(i) == true_index))
            .collect(),
    )
}

/// Exclusivity: at most one of `atoms` is true. Written as the explicit
/// sum of its n + 1 minterms, so every atom occurs syntactically and the
/// model count over the atoms themselves is n + 1.
pub fn at_most_one(atoms: &[Atom]) -> Result<Formula, AssumptionError> {
    check_atoms(atoms)?;
    let mut terms: Vec<Formula> = (0..atoms.len())
        .map(|i| single_true_minterm(atoms, Some(i)))
        .collect();
    terms.push(single_true_minterm(atoms, None));
    Ok(Formula::disj(terms))
}

/// Exhaustivity: at least one of `atoms` is true; model count 2^n - 1.
pub fn at_least_one(atoms: &[Atom]) -> Result<Formula, AssumptionError> {
    check_atoms(atoms)?;
    Ok(Formula::disj(atoms.iter().map(|&a| Formula::Var(a)).collect()))
}

/// Exactly one of `atoms` is true: the conjunction of exclusivity and
/// exhaustivity. Model count n; each atom has conditional probability 1/n
/// given this formula.
pub fn exactly_one(atoms: &[Atom]) -> Result<Formula, AssumptionError> {
    let m = at_most_one(atoms)?;
    let x = at_least_one(atoms)?;
    Ok(Formula::And(vec![m, x]))
}

/// The conjunction of (a | ~a) over `atoms`: a tautology that still
/// mentions every atom, the formal content of assuming nothing.
pub fn tautology_product(atoms: &[Atom]) -> Result<Formula, AssumptionError> {
    check_atoms(atoms)?;
    Ok(Formula::conj(
        atoms
            .iter()
            .map(|&a| Formula::Or(vec![Formula::Var(a), Formula::not(Formula::Var(a))]))
            .collect(),
    ))
}

/// The disjunction over j = 1..=n of "exactly one of the first j atoms":
/// a possibility space whose size is not assumed. Each disjunct constrains
/// only its own prefix, so no exclusivity between the spaces is implied.
/// Semantically this equals [`at_least_one`] over all n atoms.
pub fn union_of_spaces(atoms: &[Atom]) -> Result<Formula, AssumptionError> {
    check_atoms(atoms)?;
    Ok(Formula::disj(
        (1..=atoms.len())
            .map(|j| exactly_one(&atoms[..j]).expect("prefix of distinct atoms"))
            .collect(),
    ))
}

/// Closed form for the probability of one alternative given only that the
/// n alternatives are exhaustive: 2^(n-1) / (2^n - 1).
pub fn exhaustive_choice_probability(n: usize) -> Probability {
    assert!(n >= 1);
    let numer = BigUint::one() << (n - 1);
    let denom = (BigUint::one() << n) - BigUint::one();
    Probability::from_counts(numer, denom)
}

fn indexed_atoms(n: usize) -> Vec<Atom> {
    (1..=n)
        .map(|i| Atom::new(&format!("A{i}")).expect("generated name is valid"))
        .collect()
}

/// P(A_1 | union of possibility spaces of sizes 1..=n) for each n up to
/// `max_n`. The sequence is strictly decreasing and approaches 1/2 from
/// above; each entry equals [`exhaustive_choice_probability`].
pub fn marble_sequence(
    max_n: usize,
    engine: &Engine,
) -> Result<Vec<(usize, Probability)>, PriorError> {
    let atoms = indexed_atoms(max_n);
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let u = Universe::new(atoms[..n].to_vec()).expect("indexed atoms are distinct");
        let union = union_of_spaces(&atoms[..n]).expect("validated");
        let p = conditional_probability(engine, &Formula::Var(atoms[0]), &union, &u)?;
        rows.push((n, p));
    }
    Ok(rows)
}

/// For each n up to `max_n`, the probability of one alternative under
/// exactly-one (1/n) and under exhaustivity alone (2^(n-1) / (2^n - 1)).
pub fn indifference_table(
    max_n: usize,
    engine: &Engine,
) -> Result<Vec<(usize, Probability, Probability)>, PriorError> {
    let atoms = indexed_atoms(max_n);
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let u = Universe::new(atoms[..n].to_vec()).expect("indexed atoms are distinct");
        let first = Formula::Var(atoms[0]);
        let exact = exactly_one(&atoms[..n]).expect("validated");
        let exhaustive = at_least_one(&atoms[..n]).expect("validated");
        let p_exact = conditional_probability(engine, &first, &exact, &u)?;
        let p_exhaustive = conditional_probability(engine, &first, &exhaustive, &u)?;
        rows.push((n, p_exact, p_exhaustive));
    }
    Ok(rows)
}
