//! Exact probabilities of formulas given formulas.
//!
//! Every probability here is a ratio of model counts over a common
//! universe: the unconditional value of a formula is its count over the
//! assignment space, and a conditional is the count of the conjunction over
//! the count of the condition. All arithmetic is exact rational end-to-end;
//! decimal rendering is display-only and never feeds back into comparisons.

use std::fmt;

use num::bigint::{BigInt, Sign};
use num::{BigRational, BigUint, One, Signed, Zero};
use thiserror::Error;

use crate::formula::{Atom, Formula, Universe};
use crate::semantics::{assignment_space, Engine, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PriorError {
    #[error("condition `{condition}` is contradictory, so the conditional probability is undefined")]
    ConditionOnContradiction { condition: String },
    #[error("atom `{atom}` appears more than once across the conclusion and literal lists")]
    AtomCollision { atom: String },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// An exact probability: a reduced nonnegative rational at most one.
///
/// Displays as `p/q` (`1/2`, `4/7`), or as a bare integer for 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(BigRational);

impl Probability {
    /// Builds a probability from a count and a positive total, which must
    /// bound it: callers pass a satisfying-assignment count and the size of
    /// the event space it was taken from.
    pub fn from_counts(count: BigUint, total: BigUint) -> Probability {
        assert!(!total.is_zero(), "probability denominator must be positive");
        assert!(count <= total, "count exceeds the event space");
        Probability(BigRational::new(
            BigInt::from_biguint(Sign::Plus, count),
            BigInt::from_biguint(Sign::Plus, total),
        ))
    }

    /// Wraps an already-computed rational, checking 0 <= p <= 1.
    pub fn from_ratio(ratio: BigRational) -> Option<Probability> {
        if ratio.is_negative() || ratio > BigRational::one() {
            None
        } else {
            Some(Probability(ratio))
        }
    }

    pub fn zero() -> Probability {
        Probability(BigRational::zero())
    }

    pub fn one() -> Probability {
        Probability(BigRational::one())
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Decimal rendering at 17 significant digits; advisory only.
    pub fn to_decimal(&self) -> String {
        decimal_string(&self.0, 17)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rounds `r` to `sig` significant digits and formats it in plain decimal
/// notation (round half to even; trailing zeros trimmed).
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let ten = BigUint::from(10u32);

    let int_part = p / q;
    let frac_digits = if int_part.is_zero() {
        // Count leading zeros after the point before the first significant
        // digit: smallest z with p * 10^(z+1) >= q.
        let mut z = 0usize;
        let mut scaled = p * &ten;
        while scaled < *q {
            scaled *= &ten;
            z += 1;
        }
        z + sig
    } else {
        let int_digits = int_part.to_string().len();
        sig.saturating_sub(int_digits)
    };

    // Round-half-even division of p * 10^frac_digits by q.
    let scaled = p * ten.pow(frac_digits as u32);
    let mut digits = &scaled / q;
    let rem = &scaled % q;
    let twice = &rem * 2u32;
    if twice > *q || (twice == *q && (&digits % 2u32) == BigUint::one()) {
        digits += 1u32;
    }

    let s = digits.to_string();
    let text = if frac_digits == 0 {
        s
    } else if s.len() <= frac_digits {
        format!("0.{}{}", "0".repeat(frac_digits - s.len()), s)
    } else {
        let (int_str, frac_str) = s.split_at(s.len() - frac_digits);
        format!("{int_str}.{frac_str}")
    };
    let trimmed = if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    };
    format!("{sign}{trimmed}")
}

/// P(z | only tautologies) over `u`: the model count of `z` against the
/// whole assignment space. Extending `u` with unused atoms never changes
/// the value.
pub fn prior_probability(
    engine: &Engine,
    z: &Formula,
    u: &Universe,
) -> Result<Probability, PriorError> {
    let count = engine.count(z, u)?;
    Ok(Probability::from_counts(count, assignment_space(u)))
}

/// P(z | y) over `u` as the exact ratio count(z & y) / count(y).
pub fn conditional_probability(
    engine: &Engine,
    z: &Formula,
    y: &Formula,
    u: &Universe,
) -> Result<Probability, PriorError> {
    let denom = engine.count(y, u)?;
    if denom.is_zero() {
        return Err(PriorError::ConditionOnContradiction {
            condition: y.render(),
        });
    }
    let joint = Formula::And(vec![z.clone(), y.clone()]);
    let numer = engine.count(&joint, u)?;
    Ok(Probability::from_counts(numer, denom))
}

/// P(z | y) computed by the term-count route: with (M, m) the minterm and
/// support counts of `z & y` and (N, n) those of `y`, the value is
/// (M / N) * 2^(n - m). Agrees exactly with [`conditional_probability`] on
/// every defined input.
pub fn generic_formula_probability(
    engine: &Engine,
    z: &Formula,
    y: &Formula,
    u: &Universe,
) -> Result<Probability, PriorError> {
    let joint = Formula::And(vec![z.clone(), y.clone()]);
    let zy = engine.dnf_summary(&joint, u)?;
    let ys = engine.dnf_summary(y, u)?;
    if ys.term_count.is_zero() {
        return Err(PriorError::ConditionOnContradiction {
            condition: y.render(),
        });
    }
    let numer = zy.term_count << ys.atom_count;
    let denom = ys.term_count << zy.atom_count;
    Ok(Probability::from_counts(numer, denom))
}

/// The number of atoms a formula semantically depends on; the paper-level
/// simplicity parameter. A formula with support size m and M minterms has
/// unconditional probability M * 2^(-m).
pub fn simplicity_score(engine: &Engine, z: &Formula, u: &Universe) -> Result<usize, PriorError> {
    Ok(engine.support(z, u)?.len())
}

/// Result of a mixture decomposition. `rhs` and `extra` are plain rationals
/// rather than probabilities: with overlapping alternatives the sum can
/// exceed one and the discrepancy can be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixtureReport {
    pub lhs: Probability,
    pub rhs: BigRational,
    pub extra: BigRational,
}

/// Compares P(b | x) with the mixture sum over `alts`:
/// sum_i P(alts_i | x) * P(b | alts_i & x), terms with contradictory
/// `alts_i & x` contributing zero. `extra` is lhs minus the sum; it is
/// exactly zero whenever `x` entails that exactly one alternative holds.
pub fn mixture_decomposition(
    engine: &Engine,
    b: &Formula,
    alts: &[Formula],
    x: &Formula,
    u: &Universe,
) -> Result<MixtureReport, PriorError> {
    let lhs = conditional_probability(engine, b, x, u)?;
    let mut rhs = BigRational::zero();
    for alt in alts {
        let alt_and_x = Formula::And(vec![alt.clone(), x.clone()]);
        if engine.count(&alt_and_x, u)?.is_zero() {
            continue;
        }
        let weight = conditional_probability(engine, alt, x, u)?;
        let cond = conditional_probability(engine, b, &alt_and_x, u)?;
        rhs += weight.ratio() * cond.ratio();
    }
    let extra = lhs.ratio() - &rhs;
    Ok(MixtureReport { lhs, rhs, extra })
}

/// P(a | a conjunction of other positive and negated atoms) over `u`.
/// Because `a` does not occur in the condition, the value is 1/2 for every
/// pair of list lengths, including both empty.
pub fn fresh_atom_conditional(
    engine: &Engine,
    a: Atom,
    pos: &[Atom],
    neg: &[Atom],
    u: &Universe,
) -> Result<Probability, PriorError> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(a);
    for &atom in pos.iter().chain(neg) {
        if !seen.insert(atom) {
            return Err(PriorError::AtomCollision { atom: atom.name() });
        }
    }
    let literals: Vec<Formula> = pos
        .iter()
        .map(|&p| Formula::literal(p, true))
        .chain(neg.iter().map(|&n| Formula::literal(n, false)))
        .collect();
    let condition = Formula::conj(literals);
    conditional_probability(engine, &Formula::Var(a), &condition, u)
}
