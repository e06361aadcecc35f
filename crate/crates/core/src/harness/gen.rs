//! Seeded random formula generation. Identical seeds reproduce identical
//! streams, so every reported counterexample can be replayed.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assumptions;
use crate::formula::{Atom, Formula};

use super::HarnessError;

/// Per-node-kind weights steering the generator's distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindWeights {
    pub truth: u32,
    pub falsity: u32,
    pub var: u32,
    pub not: u32,
    pub and: u32,
    pub or: u32,
    pub implies: u32,
    pub iff: u32,
}

impl Default for KindWeights {
    fn default() -> Self {
        KindWeights {
            truth: 1,
            falsity: 1,
            var: 10,
            not: 4,
            and: 5,
            or: 5,
            implies: 2,
            iff: 2,
        }
    }
}

impl KindWeights {
    fn leaf_total(&self) -> u32 {
        self.truth + self.falsity + self.var
    }

    fn total(&self) -> u32 {
        self.leaf_total() + self.not + self.and + self.or + self.implies + self.iff
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_atoms: usize,
    pub max_depth: usize,
    pub weights: KindWeights,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 42,
            max_atoms: 8,
            max_depth: 6,
            weights: KindWeights::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            seed,
            ..GeneratorConfig::default()
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.max_atoms == 0 {
            return Err(HarnessError::InvalidConfig(
                "max_atoms must be at least 1".to_string(),
            ));
        }
        if self.weights.leaf_total() == 0 {
            return Err(HarnessError::InvalidConfig(
                "at least one leaf weight (T, F, or variable) must be nonzero".to_string(),
            ));
        }
        Ok(())
    }
}

/// A deterministic stream of formulas, conditions, permutations, and flip
/// sets over the atom pool `A1..A<max_atoms>`.
pub struct FormulaGen {
    cfg: GeneratorConfig,
    rng: ChaCha8Rng,
    atoms: Vec<Atom>,
}

impl FormulaGen {
    pub fn new(cfg: &GeneratorConfig) -> Result<FormulaGen, HarnessError> {
        cfg.validate()?;
        let atoms = (1..=cfg.max_atoms)
            .map(|i| Atom::new(&format!("A{i}")).expect("generated name is valid"))
            .collect();
        Ok(FormulaGen {
            cfg: cfg.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            atoms,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn next_formula(&mut self) -> Formula {
        let depth = self.cfg.max_depth;
        self.gen_node(depth)
    }

    /// Draws a condition candidate, biased toward satisfiable formulas by
    /// mixing in the assumption constructors.
    pub fn next_condition(&mut self) -> Formula {
        match self.rng.gen_range(0..10u32) {
            0..=4 => self.next_formula(),
            5 | 6 => assumptions::exactly_one(&self.random_subset_atoms()).expect("distinct"),
            7 | 8 => assumptions::at_least_one(&self.random_subset_atoms()).expect("distinct"),
            _ => assumptions::tautology_product(&self.random_subset_atoms()).expect("distinct"),
        }
    }

    fn gen_node(&mut self, depth: usize) -> Formula {
        let w = &self.cfg.weights;
        let total = if depth == 0 { w.leaf_total() } else { w.total() };
        let mut roll = self.rng.gen_range(0..total);
        let mut take = |weight: u32| {
            if roll < weight {
                true
            } else {
                roll -= weight;
                false
            }
        };
        if take(w.truth) {
            return Formula::True;
        }
        if take(w.falsity) {
            return Formula::False;
        }
        if take(w.var) {
            return Formula::Var(self.random_atom());
        }
        if take(w.not) {
            return Formula::not(self.gen_node(depth - 1));
        }
        if take(w.and) {
            let arity = self.rng.gen_range(2..=3);
            return Formula::And((0..arity).map(|_| self.gen_node(depth - 1)).collect());
        }
        if take(w.or) {
            let arity = self.rng.gen_range(2..=3);
            return Formula::Or((0..arity).map(|_| self.gen_node(depth - 1)).collect());
        }
        if take(w.implies) {
            return Formula::implies(self.gen_node(depth - 1), self.gen_node(depth - 1));
        }
        Formula::iff(self.gen_node(depth - 1), self.gen_node(depth - 1))
    }

    fn random_atom(&mut self) -> Atom {
        self.atoms[self.rng.gen_range(0..self.atoms.len())]
    }

    fn random_subset_atoms(&mut self) -> Vec<Atom> {
        let size = self.rng.gen_range(1..=self.atoms.len());
        let mut pool = self.atoms.clone();
        pool.shuffle(&mut self.rng);
        pool.truncate(size);
        pool
    }

    /// A uniformly random permutation of the whole atom pool.
    pub fn random_permutation(&mut self) -> BTreeMap<Atom, Atom> {
        let mut targets = self.atoms.clone();
        targets.shuffle(&mut self.rng);
        self.atoms.iter().copied().zip(targets).collect()
    }

    /// Each atom flipped independently with probability 1/2.
    pub fn random_flip_set(&mut self) -> BTreeSet<Atom> {
        self.atoms
            .iter()
            .copied()
            .filter(|_| self.rng.gen_bool(0.5))
            .collect()
    }
}

/// The first formula of a fresh stream for `cfg`; deterministic in the
/// seed.
pub fn random_formula(cfg: &GeneratorConfig) -> Result<Formula, HarnessError> {
    Ok(FormulaGen::new(cfg)?.next_formula())
}
