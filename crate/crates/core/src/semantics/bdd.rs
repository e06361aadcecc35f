//! Reduced ordered binary decision diagrams over a fixed variable order
//! (the universe order, no reordering). Nodes are hash-consed through a
//! unique table, so two roots in the same store denote the same function
//! iff they are the same id.

use std::collections::HashMap;

use num::{BigUint, One, Zero};

use crate::formula::{Formula, Universe};

use super::SemanticsError;

/// Index into a store's node table. `0` and `1` are the terminals.
pub type NodeId = u32;

pub(super) const FALSE_NODE: NodeId = 0;
pub(super) const TRUE_NODE: NodeId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: NodeId,
    high: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
}

/// A node store for one variable order. Building several formulas in the
/// same store makes their roots directly comparable.
#[derive(Debug)]
pub struct BddStore {
    num_vars: usize,
    nodes: Vec<Node>, // non-terminals; id = index + 2
    unique: HashMap<Node, NodeId>,
    binary_cache: HashMap<(Op, NodeId, NodeId), NodeId>,
    not_cache: HashMap<NodeId, NodeId>,
    node_cap: usize,
}

impl BddStore {
    pub fn new(num_vars: usize, node_cap: usize) -> BddStore {
        BddStore {
            num_vars,
            nodes: Vec::new(),
            unique: HashMap::new(),
            binary_cache: HashMap::new(),
            not_cache: HashMap::new(),
            node_cap,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node(&self, id: NodeId) -> Node {
        debug_assert!(id >= 2);
        self.nodes[(id - 2) as usize]
    }

    /// Variable index of a node, with terminals ordered below every
    /// variable.
    fn var_of(&self, id: NodeId) -> u32 {
        if id <= 1 {
            self.num_vars as u32
        } else {
            self.node(id).var
        }
    }

    fn mk(&mut self, var: u32, low: NodeId, high: NodeId) -> Result<NodeId, SemanticsError> {
        if low == high {
            return Ok(low);
        }
        let node = Node { var, low, high };
        if let Some(&id) = self.unique.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.node_cap {
            return Err(SemanticsError::NodeLimitExceeded { cap: self.node_cap });
        }
        let id = 2 + u32::try_from(self.nodes.len()).expect("node table exceeds u32");
        self.nodes.push(node);
        self.unique.insert(node, id);
        Ok(id)
    }

    fn literal(&mut self, var: u32, positive: bool) -> Result<NodeId, SemanticsError> {
        if positive {
            self.mk(var, FALSE_NODE, TRUE_NODE)
        } else {
            self.mk(var, TRUE_NODE, FALSE_NODE)
        }
    }

    fn apply_not(&mut self, id: NodeId) -> Result<NodeId, SemanticsError> {
        match id {
            FALSE_NODE => return Ok(TRUE_NODE),
            TRUE_NODE => return Ok(FALSE_NODE),
            _ => {}
        }
        if let Some(&out) = self.not_cache.get(&id) {
            return Ok(out);
        }
        let n = self.node(id);
        let low = self.apply_not(n.low)?;
        let high = self.apply_not(n.high)?;
        let out = self.mk(n.var, low, high)?;
        self.not_cache.insert(id, out);
        Ok(out)
    }

    fn apply(&mut self, op: Op, a: NodeId, b: NodeId) -> Result<NodeId, SemanticsError> {
        match (op, a, b) {
            (Op::And, FALSE_NODE, _) | (Op::And, _, FALSE_NODE) => return Ok(FALSE_NODE),
            (Op::And, TRUE_NODE, x) | (Op::And, x, TRUE_NODE) => return Ok(x),
            (Op::Or, TRUE_NODE, _) | (Op::Or, _, TRUE_NODE) => return Ok(TRUE_NODE),
            (Op::Or, FALSE_NODE, x) | (Op::Or, x, FALSE_NODE) => return Ok(x),
            (Op::Xor, FALSE_NODE, x) | (Op::Xor, x, FALSE_NODE) => return Ok(x),
            (Op::Xor, TRUE_NODE, x) | (Op::Xor, x, TRUE_NODE) => return self.apply_not(x),
            _ => {}
        }
        if a == b {
            return Ok(match op {
                Op::And | Op::Or => a,
                Op::Xor => FALSE_NODE,
            });
        }
        // All three ops are commutative; canonicalize the cache key.
        let key = if a <= b { (op, a, b) } else { (op, b, a) };
        if let Some(&out) = self.binary_cache.get(&key) {
            return Ok(out);
        }
        let (va, vb) = (self.var_of(a), self.var_of(b));
        let v = va.min(vb);
        let (a_low, a_high) = if va == v {
            let n = self.node(a);
            (n.low, n.high)
        } else {
            (a, a)
        };
        let (b_low, b_high) = if vb == v {
            let n = self.node(b);
            (n.low, n.high)
        } else {
            (b, b)
        };
        let low = self.apply(op, a_low, b_low)?;
        let high = self.apply(op, a_high, b_high)?;
        let out = self.mk(v, low, high)?;
        self.binary_cache.insert(key, out);
        Ok(out)
    }

    /// Compiles a formula into this store. Every atom of `f` must be in `u`,
    /// and `u` must have this store's variable count.
    pub fn build(&mut self, f: &Formula, u: &Universe) -> Result<NodeId, SemanticsError> {
        debug_assert_eq!(u.len(), self.num_vars);
        match f {
            Formula::True => Ok(TRUE_NODE),
            Formula::False => Ok(FALSE_NODE),
            Formula::Var(a) => {
                let var = u
                    .index_of(*a)
                    .ok_or_else(|| SemanticsError::AtomOutsideUniverse { atom: a.name() })?;
                self.literal(var as u32, true)
            }
            Formula::Not(c) => {
                let inner = self.build(c, u)?;
                self.apply_not(inner)
            }
            Formula::And(cs) => {
                let mut acc = TRUE_NODE;
                for c in cs {
                    let node = self.build(c, u)?;
                    acc = self.apply(Op::And, acc, node)?;
                }
                Ok(acc)
            }
            Formula::Or(cs) => {
                let mut acc = FALSE_NODE;
                for c in cs {
                    let node = self.build(c, u)?;
                    acc = self.apply(Op::Or, acc, node)?;
                }
                Ok(acc)
            }
            Formula::Implies(l, r) => {
                let lhs = self.build(l, u)?;
                let rhs = self.build(r, u)?;
                let not_lhs = self.apply_not(lhs)?;
                self.apply(Op::Or, not_lhs, rhs)
            }
            Formula::Iff(l, r) => {
                let lhs = self.build(l, u)?;
                let rhs = self.build(r, u)?;
                let xor = self.apply(Op::Xor, lhs, rhs)?;
                self.apply_not(xor)
            }
        }
    }

    /// Number of satisfying assignments of `root` over all of the store's
    /// variables. Skipped levels contribute a factor of 2 each.
    pub fn count_models(&self, root: NodeId) -> BigUint {
        let mut memo: HashMap<NodeId, BigUint> = HashMap::new();
        let below_root = self.count_below(root, &mut memo);
        below_root << self.var_of(root) as usize
    }

    // Satisfying assignments over the variables at and below var_of(id).
    fn count_below(&self, id: NodeId, memo: &mut HashMap<NodeId, BigUint>) -> BigUint {
        match id {
            FALSE_NODE => return BigUint::zero(),
            TRUE_NODE => return BigUint::one(),
            _ => {}
        }
        if let Some(hit) = memo.get(&id) {
            return hit.clone();
        }
        let n = self.node(id);
        let low = self.count_below(n.low, memo) << (self.var_of(n.low) - n.var - 1) as usize;
        let high = self.count_below(n.high, memo) << (self.var_of(n.high) - n.var - 1) as usize;
        let total = low + high;
        memo.insert(id, total.clone());
        total
    }

    /// Variable indices tested anywhere under `root`; because the diagram is
    /// reduced, this is exactly the support of the function.
    pub fn support_vars(&self, root: NodeId) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::new();
        let mut visited = std::collections::HashSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if id <= 1 || !visited.insert(id) {
                continue;
            }
            let n = self.node(id);
            seen.insert(n.var as usize);
            stack.push(n.low);
            stack.push(n.high);
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Atom};

    fn uni(names: &[&str]) -> Universe {
        Universe::new(names.iter().map(|n| Atom::new(n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn canonicity_makes_equivalent_formulas_share_roots() {
        let u = uni(&["A", "B"]);
        let mut store = BddStore::new(2, 1000);
        let imp = store.build(&parse("A -> B").unwrap(), &u).unwrap();
        let or = store.build(&parse("~A | B").unwrap(), &u).unwrap();
        assert_eq!(imp, or);
        let iff = store.build(&parse("A <-> B").unwrap(), &u).unwrap();
        let both = store
            .build(&parse("(A & B) | (~A & ~B)").unwrap(), &u)
            .unwrap();
        assert_eq!(iff, both);
        assert_ne!(imp, iff);
    }

    #[test]
    fn tautologies_and_contradictions_hit_terminals() {
        let u = uni(&["A"]);
        let mut store = BddStore::new(1, 1000);
        assert_eq!(store.build(&parse("A | ~A").unwrap(), &u).unwrap(), TRUE_NODE);
        assert_eq!(store.build(&parse("A & ~A").unwrap(), &u).unwrap(), FALSE_NODE);
    }

    #[test]
    fn count_skips_levels_correctly() {
        // B over {A, B, C}: the diagram tests only B, so A and C are
        // skipped levels around it.
        let u = uni(&["A", "B", "C"]);
        let mut store = BddStore::new(3, 1000);
        let root = store.build(&parse("B").unwrap(), &u).unwrap();
        assert_eq!(store.count_models(root), BigUint::from(4u32));
    }

    #[test]
    fn support_vars_reports_essential_positions() {
        let u = uni(&["A", "B", "C"]);
        let mut store = BddStore::new(3, 1000);
        let root = store
            .build(&parse("A & (B | ~B)").unwrap(), &u)
            .unwrap();
        assert_eq!(store.support_vars(root), vec![0]);
    }
}
