//! Randomized verification of the rules and symmetries the probability
//! engine is committed to: relabelling invariance, negation-swap
//! invariance, tautology stability, the product/sum rules, the
//! exclusivity/exhaustivity parametrisations, the term-count route
//! identity, and cross-backend agreement. All comparisons are exact
//! rational equalities; failures carry rendered, re-runnable inputs.

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::assumptions::exactly_one;
use crate::formula::{Atom, Formula, Universe};
use crate::prior::{
    conditional_probability, generic_formula_probability, PriorError, Probability,
};
use crate::semantics::{model_count_bdd, model_count_enum, Engine, SemanticsError};

mod gen;

pub use gen::{random_formula, FormulaGen, GeneratorConfig, KindWeights};

const EXCLUSIVITY_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "check `{check}` skipped {skipped} of {trials} trials; the generator configuration is degenerate"
    )]
    DegenerateGenerator {
        check: String,
        skipped: usize,
        trials: usize,
    },
    #[error(transparent)]
    Prior(#[from] PriorError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// One counterexample: the rendered inputs plus the two values that were
/// supposed to agree. Every field re-parses through the normal front end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub conclusion: String,
    pub condition: String,
    /// The transformation or case the trial exercised (a permutation, a
    /// flip set, an index pair, ...).
    pub context: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one check: `failures` empty iff the check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn new(name: &str, seed: u64, trials: usize) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            seed,
            trials,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Trials that actually ran (not skipped for a contradictory condition).
    pub fn valid_trials(&self) -> usize {
        self.trials - self.skipped
    }

    fn finish(self) -> Result<CheckReport, HarnessError> {
        if self.skipped * 2 > self.trials {
            return Err(HarnessError::DegenerateGenerator {
                check: self.name,
                skipped: self.skipped,
                trials: self.trials,
            });
        }
        Ok(self)
    }
}

fn render_permutation(perm: &BTreeMap<Atom, Atom>) -> String {
    let moved: Vec<String> = perm
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("{a}->{b}"))
        .collect();
    if moved.is_empty() {
        "identity".to_string()
    } else {
        moved.join(", ")
    }
}

fn pool_universe(gen: &FormulaGen) -> Universe {
    Universe::new(gen.atoms().to_vec()).expect("generator atoms are distinct")
}

/// P(z|y) must be unchanged by any relabelling applied to both sides.
pub fn check_relabel_invariance(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let mut report = CheckReport::new("relabel", cfg.seed, trials);
    for _ in 0..trials {
        let z = gen.next_formula();
        let y = gen.next_condition();
        let perm = gen.random_permutation();
        if engine.count(&y, &u)?.is_zero() {
            report.skipped += 1;
            continue;
        }
        let lhs = conditional_probability(engine, &z, &y, &u)?;
        let z2 = z.relabel(&perm).expect("pool shuffle is a bijection");
        let y2 = y.relabel(&perm).expect("pool shuffle is a bijection");
        let rhs = conditional_probability(engine, &z2, &y2, &u)?;
        if lhs != rhs {
            report.failures.push(Failure {
                conclusion: z.render(),
                condition: y.render(),
                context: render_permutation(&perm),
                expected: lhs.to_string(),
                actual: rhs.to_string(),
            });
        }
    }
    report.finish()
}

/// P(z|y) must be unchanged by negating any atom set in both the condition
/// and the conclusion.
pub fn check_negation_swap(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let mut report = CheckReport::new("swap", cfg.seed, trials);
    for _ in 0..trials {
        let z = gen.next_formula();
        let y = gen.next_condition();
        let flips = gen.random_flip_set();
        if engine.count(&y, &u)?.is_zero() {
            report.skipped += 1;
            continue;
        }
        let lhs = conditional_probability(engine, &z, &y, &u)?;
        let rhs =
            conditional_probability(engine, &z.negation_swap(&flips), &y.negation_swap(&flips), &u)?;
        if lhs != rhs {
            let names: Vec<String> = flips.iter().map(Atom::name).collect();
            report.failures.push(Failure {
                conclusion: z.render(),
                condition: y.render(),
                context: format!("flip {{{}}}", names.join(", ")),
                expected: lhs.to_string(),
                actual: rhs.to_string(),
            });
        }
    }
    report.finish()
}

/// P(z|y) must be unchanged both by conjoining a fresh tautology to the
/// condition and by enlarging the universe with an atom nobody mentions.
pub fn check_tautology_stability(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let fresh = Atom::new("C_stability").expect("valid name");
    let u_ext = u.extended(&[fresh]);
    let mut report = CheckReport::new("taut", cfg.seed, trials);
    for _ in 0..trials {
        let z = gen.next_formula();
        let y = gen.next_condition();
        if engine.count(&y, &u)?.is_zero() {
            report.skipped += 1;
            continue;
        }
        let lhs = conditional_probability(engine, &z, &y, &u)?;
        let tautologized = Formula::And(vec![
            y.clone(),
            Formula::Or(vec![
                Formula::Var(fresh),
                Formula::not(Formula::Var(fresh)),
            ]),
        ]);
        let with_taut = conditional_probability(engine, &z, &tautologized, &u_ext)?;
        let with_extension = conditional_probability(engine, &z, &y, &u_ext)?;
        for (label, value) in [("conjoined tautology", with_taut), ("extended universe", with_extension)] {
            if lhs != value {
                report.failures.push(Failure {
                    conclusion: z.render(),
                    condition: y.render(),
                    context: format!("{label} with fresh atom {fresh}"),
                    expected: lhs.to_string(),
                    actual: value.to_string(),
                });
            }
        }
    }
    report.finish()
}

/// The product rule, sum rule, and generalised sum rule hold exactly on
/// random triples. Trials whose conditioning events are contradictory are
/// skipped and counted.
pub fn check_rules(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let mut report = CheckReport::new("rules", cfg.seed, trials);
    for _ in 0..trials {
        let a = gen.next_formula();
        let b = gen.next_formula();
        let c = gen.next_condition();
        let a_and_c = Formula::And(vec![a.clone(), c.clone()]);
        if engine.count(&c, &u)?.is_zero() || engine.count(&a_and_c, &u)?.is_zero() {
            report.skipped += 1;
            continue;
        }

        let p_a = conditional_probability(engine, &a, &c, &u)?;
        let p_not_a = conditional_probability(engine, &Formula::not(a.clone()), &c, &u)?;
        let p_b = conditional_probability(engine, &b, &c, &u)?;
        let p_ab = conditional_probability(
            engine,
            &Formula::And(vec![a.clone(), b.clone()]),
            &c,
            &u,
        )?;
        let p_a_or_b = conditional_probability(
            engine,
            &Formula::Or(vec![a.clone(), b.clone()]),
            &c,
            &u,
        )?;
        let p_b_given_ac = conditional_probability(engine, &b, &a_and_c, &u)?;

        let mut fail = |rule: &str, expected: String, actual: String| {
            report.failures.push(Failure {
                conclusion: format!("a = {}; b = {}", a.render(), b.render()),
                condition: c.render(),
                context: rule.to_string(),
                expected,
                actual,
            });
        };

        let sum = p_a.ratio() + p_not_a.ratio();
        if !sum.is_one() {
            fail("sum rule", "1".to_string(), sum.to_string());
        }
        let product = p_a.ratio() * p_b_given_ac.ratio();
        if p_ab.ratio() != &product {
            fail("product rule", p_ab.to_string(), product.to_string());
        }
        let general = p_a.ratio() + p_b.ratio() - p_ab.ratio();
        if p_a_or_b.ratio() != &general {
            fail(
                "generalised sum rule",
                p_a_or_b.to_string(),
                general.to_string(),
            );
        }
    }
    report.finish()
}

/// P(A_i A_j | exactly-one) = P(A_i | exactly-one) delta_ij = delta_ij / n,
/// and the disjunction of the alternatives is certain, for every n up to
/// `max_n`.
pub fn check_exclusivity_parametrisation(
    engine: &Engine,
    max_n: usize,
) -> Result<CheckReport, HarnessError> {
    let mut report = CheckReport::new("exclusivity", 0, 0);
    for n in 1..=max_n {
        let atoms: Vec<Atom> = (1..=n)
            .map(|i| Atom::new(&format!("A{i}")).expect("valid name"))
            .collect();
        let u = Universe::new(atoms.clone()).expect("distinct");
        let i_n = exactly_one(&atoms).expect("distinct");
        let uniform = Probability::from_counts(1u32.into(), (n as u32).into());

        for (i, &ai) in atoms.iter().enumerate() {
            let p_i = conditional_probability(engine, &Formula::Var(ai), &i_n, &u)?;
            report.trials += 1;
            if p_i != uniform {
                report.failures.push(Failure {
                    conclusion: ai.name(),
                    condition: i_n.render(),
                    context: format!("n={n} i={}", i + 1),
                    expected: uniform.to_string(),
                    actual: p_i.to_string(),
                });
            }
            for (j, &aj) in atoms.iter().enumerate() {
                let pair = Formula::And(vec![Formula::Var(ai), Formula::Var(aj)]);
                let p_pair = conditional_probability(engine, &pair, &i_n, &u)?;
                let expected = if i == j { p_i.clone() } else { Probability::zero() };
                report.trials += 1;
                if p_pair != expected {
                    report.failures.push(Failure {
                        conclusion: pair.render(),
                        condition: i_n.render(),
                        context: format!("n={n} i={} j={}", i + 1, j + 1),
                        expected: expected.to_string(),
                        actual: p_pair.to_string(),
                    });
                }
            }
        }

        let any = Formula::disj(atoms.iter().map(|&a| Formula::Var(a)).collect());
        let p_any = conditional_probability(engine, &any, &i_n, &u)?;
        report.trials += 1;
        if p_any != Probability::one() {
            report.failures.push(Failure {
                conclusion: any.render(),
                condition: i_n.render(),
                context: format!("n={n} exhaustivity"),
                expected: "1".to_string(),
                actual: p_any.to_string(),
            });
        }
    }
    report.finish()
}

fn route_identity_with(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
    route: impl Fn(&Engine, &Formula, &Formula, &Universe) -> Result<Probability, PriorError>,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let mut report = CheckReport::new("route", cfg.seed, trials);
    for _ in 0..trials {
        let z = gen.next_formula();
        let y = gen.next_condition();
        if engine.count(&y, &u)?.is_zero() {
            report.skipped += 1;
            continue;
        }
        let by_counts = conditional_probability(engine, &z, &y, &u)?;
        let by_terms = route(engine, &z, &y, &u)?;
        if by_counts != by_terms {
            report.failures.push(Failure {
                conclusion: z.render(),
                condition: y.render(),
                context: "term-count route".to_string(),
                expected: by_counts.to_string(),
                actual: by_terms.to_string(),
            });
        }
    }
    report.finish()
}

/// The term-count route (M/N * 2^(n-m)) agrees exactly with the
/// model-count ratio on random pairs.
pub fn check_route_identity(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    route_identity_with(engine, cfg, trials, generic_formula_probability)
}

/// Enumeration and the decision-diagram backend report identical model
/// counts on random formulas.
pub fn check_backend_equivalence(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<CheckReport, HarnessError> {
    let mut gen = FormulaGen::new(cfg)?;
    let u = pool_universe(&gen);
    let mut report = CheckReport::new("backends", cfg.seed, trials);
    for _ in 0..trials {
        let f = gen.next_formula();
        let by_enum = model_count_enum(&f, &u, &engine.limits)?;
        let by_bdd = model_count_bdd(&f, &u, &engine.limits)?;
        if by_enum != by_bdd {
            report.failures.push(Failure {
                conclusion: f.render(),
                condition: "T".to_string(),
                context: "model count".to_string(),
                expected: by_enum.to_string(),
                actual: by_bdd.to_string(),
            });
        }
    }
    report.finish()
}

/// Runs every check with the same configuration. The exit status of the
/// `check` command is nonzero iff any report here carries a failure.
pub fn run_suite(
    engine: &Engine,
    cfg: &GeneratorConfig,
    trials: usize,
) -> Result<Vec<CheckReport>, HarnessError> {
    Ok(vec![
        check_rules(engine, cfg, trials)?,
        check_relabel_invariance(engine, cfg, trials)?,
        check_negation_swap(engine, cfg, trials)?,
        check_tautology_stability(engine, cfg, trials)?,
        check_exclusivity_parametrisation(engine, EXCLUSIVITY_MAX_N)?,
        check_route_identity(engine, cfg, trials)?,
        check_backend_equivalence(engine, cfg, trials)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::prior::prior_probability;

    fn eng() -> Engine {
        Engine::default()
    }

    fn cfg() -> GeneratorConfig {
        GeneratorConfig::default()
    }

    #[test]
    fn all_checks_pass_on_the_default_seed() {
        let reports = run_suite(&eng(), &cfg(), 100).unwrap();
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures.first());
            assert!(r.skipped * 2 <= r.trials, "{} skip rate", r.name);
        }
        assert_eq!(reports.len(), 7);
    }

    #[test]
    fn checks_pass_across_seeds() {
        for seed in [0u64, 1, 7, 1234, 0xdead_beef] {
            let cfg = GeneratorConfig::with_seed(seed);
            for report in [
                check_rules(&eng(), &cfg, 60).unwrap(),
                check_relabel_invariance(&eng(), &cfg, 60).unwrap(),
                check_negation_swap(&eng(), &cfg, 60).unwrap(),
                check_tautology_stability(&eng(), &cfg, 60).unwrap(),
                check_route_identity(&eng(), &cfg, 60).unwrap(),
                check_backend_equivalence(&eng(), &cfg, 60).unwrap(),
            ] {
                assert!(report.passed(), "seed {seed}, {}", report.name);
            }
        }
    }

    #[test]
    fn a_broken_route_is_caught_with_rerunnable_counterexamples() {
        // Sanity-check the harness itself: a route that ignores the
        // condition must produce failures, and the rendered inputs must
        // reproduce the discrepancy when re-run.
        let engine = eng();
        let broken = |e: &Engine, z: &Formula, _y: &Formula, u: &Universe| {
            prior_probability(e, z, u)
        };
        let report = route_identity_with(&engine, &cfg(), 100, broken).unwrap();
        assert!(!report.passed());
        let failure = &report.failures[0];
        let z = parse(&failure.conclusion).unwrap();
        let y = parse(&failure.condition).unwrap();
        let u = Universe::new(
            FormulaGen::new(&cfg()).unwrap().atoms().to_vec(),
        )
        .unwrap();
        let good = conditional_probability(&engine, &z, &y, &u).unwrap();
        let bad = prior_probability(&engine, &z, &u).unwrap();
        assert_eq!(good.to_string(), failure.expected);
        assert_eq!(bad.to_string(), failure.actual);
        assert_ne!(good, bad);
    }

    #[test]
    fn degenerate_generators_error_instead_of_passing_vacuously() {
        // All-False conclusions make every product-rule conditioning event
        // contradictory, so the skip guard must fire.
        let degenerate = GeneratorConfig {
            weights: KindWeights {
                truth: 0,
                falsity: 1,
                var: 0,
                not: 0,
                and: 0,
                or: 0,
                implies: 0,
                iff: 0,
            },
            ..GeneratorConfig::default()
        };
        let err = check_rules(&eng(), &degenerate, 40).unwrap_err();
        assert!(matches!(err, HarnessError::DegenerateGenerator { .. }));
    }

    #[test]
    fn exclusivity_scan_is_exhaustive_and_green() {
        let report = check_exclusivity_parametrisation(&eng(), 8).unwrap();
        assert!(report.passed());
        // n atoms contribute n singletons + n^2 pairs + 1 disjunction each.
        let expected: usize = (1..=8).map(|n| n + n * n + 1).sum();
        assert_eq!(report.trials, expected);
    }

    #[test]
    fn skip_rates_stay_reasonable_under_default_weights() {
        let report = check_rules(&eng(), &cfg(), 300).unwrap();
        assert!(
            report.skipped * 10 < report.trials * 4,
            "rules skipped {}/{}",
            report.skipped,
            report.trials
        );
        let report2 = check_relabel_invariance(&eng(), &cfg(), 300).unwrap();
        assert!(report2.skipped * 10 < report2.trials * 4);
    }
}
