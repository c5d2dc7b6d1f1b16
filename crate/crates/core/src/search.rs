//! Depth-first search over proof trees with pruning on partial profiles.
//!
//! The search commits OR choices in canonical pre-order. After each choice,
//! every literal that is certain to be in the tree (everything below the
//! decided part that is not under an undecided OR) is added to the running
//! profile, so a goal can bound all completions from the profile alone.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::formula::{Formula, Literal, Node, NodeId};
use crate::prooftree::ExponentProfile;
use crate::rational::BigRational;

/// What a subtree contributes before any of its own OR nodes are decided.
#[derive(Debug, Default, Clone)]
struct Expansion {
    lits: Vec<Literal>,
    zeros: u32,
    // top-level OR nodes in pre-order
    ors: Vec<NodeId>,
}

pub(crate) trait Goal {
    /// True if no completion of `profile` can be accepted.
    fn prune(&mut self, profile: &ExponentProfile) -> bool;
    fn accept(&mut self, profile: &ExponentProfile) -> bool;
}

pub(crate) struct TreeSearch<'f> {
    formula: &'f Formula,
    expansions: Vec<Expansion>,
    max_nodes: u64,
    pub(crate) nodes_explored: u64,
}

pub(crate) struct Found {
    pub(crate) choices: Vec<usize>,
    pub(crate) profile: ExponentProfile,
}

struct State {
    profile: ExponentProfile,
    zeros: u32,
    pending: Vec<NodeId>,
    choices: Vec<usize>,
    budget_left: u64,
}

impl<'f> TreeSearch<'f> {
    pub(crate) fn new(formula: &'f Formula, max_nodes: u64) -> Self {
        let mut expansions: Vec<Expansion> = Vec::with_capacity(formula.nodes().len());
        for (id, node) in formula.nodes().iter().enumerate() {
            let e = match node {
                Node::Lit(l) => Expansion {
                    lits: vec![*l],
                    ..Default::default()
                },
                Node::Const(true) => Expansion::default(),
                Node::Const(false) => Expansion {
                    zeros: 1,
                    ..Default::default()
                },
                Node::Or(_) => Expansion {
                    ors: vec![id],
                    ..Default::default()
                },
                Node::And(children) => {
                    let mut e = Expansion::default();
                    for &c in children {
                        let child = &expansions[c];
                        e.lits.extend_from_slice(&child.lits);
                        e.zeros += child.zeros;
                        e.ors.extend_from_slice(&child.ors);
                    }
                    e
                }
            };
            expansions.push(e);
        }
        TreeSearch {
            formula,
            expansions,
            max_nodes,
            nodes_explored: 0,
        }
    }

    /// Finds the lexicographically first tree (by canonical encoding) whose
    /// encoding starts with `forced` and that `goal` accepts.
    pub(crate) fn find(&mut self, goal: &mut impl Goal, forced: &[usize]) -> Result<Option<Found>> {
        let mut state = State {
            profile: ExponentProfile::empty(self.formula.var_count()),
            zeros: 0,
            pending: Vec::new(),
            choices: Vec::new(),
            budget_left: self.max_nodes,
        };
        self.apply(&mut state, self.formula.root(), 1);
        let found = if goal.prune(&state.profile) {
            false
        } else {
            self.dfs(&mut state, goal, forced)?
        };
        self.nodes_explored += self.max_nodes - state.budget_left;
        Ok(found.then_some(Found {
            choices: state.choices,
            profile: state.profile,
        }))
    }

    fn apply(&self, state: &mut State, id: NodeId, sign: i32) {
        let e = &self.expansions[id];
        for l in &e.lits {
            state.profile.add_literal(l.var(), l.is_negated(), sign);
        }
        if sign > 0 {
            state.zeros += e.zeros;
            state.pending.extend(e.ors.iter().rev());
        } else {
            state.zeros -= e.zeros;
            let keep = state.pending.len() - e.ors.len();
            state.pending.truncate(keep);
        }
        state.profile.set_zero(state.zeros > 0);
    }

    fn dfs(&self, state: &mut State, goal: &mut impl Goal, forced: &[usize]) -> Result<bool> {
        if state.budget_left == 0 {
            return Err(Error::Resource(format!(
                "proof-tree search exceeded {} nodes",
                self.max_nodes
            )));
        }
        state.budget_left -= 1;
        let Some(or) = state.pending.pop() else {
            return Ok(goal.accept(&state.profile));
        };
        let Node::Or(children) = self.formula.node(or) else {
            unreachable!("pending holds OR nodes only")
        };
        let depth = state.choices.len();
        let range = match forced.get(depth) {
            Some(&c) if c < children.len() => c..c + 1,
            Some(_) => 0..0,
            None => 0..children.len(),
        };
        for c in range {
            let child = children[c];
            self.apply(state, child, 1);
            state.choices.push(c);
            if !goal.prune(&state.profile) && self.dfs(state, goal, forced)? {
                return Ok(true);
            }
            state.choices.pop();
            self.apply(state, child, -1);
        }
        state.pending.push(or);
        Ok(false)
    }
}

/// Accepts trees whose per-tree optimum is at least `threshold`. Since adding
/// leaves never raises `max_x x^a (1−x)^b`, the optimum of a partial profile
/// bounds every completion.
pub(crate) struct AtLeast {
    numer: BigUint,
    denom: BigUint,
}

impl AtLeast {
    pub(crate) fn new(threshold: &BigRational) -> Self {
        AtLeast {
            numer: threshold.numer().to_biguint().unwrap_or_default(),
            denom: threshold.denom().to_biguint().unwrap_or_default(),
        }
    }

    fn reaches(&self, profile: &ExponentProfile) -> bool {
        let (n, d) = profile.optimum_parts();
        n * &self.denom >= &self.numer * d
    }
}

impl Goal for AtLeast {
    fn prune(&mut self, profile: &ExponentProfile) -> bool {
        !self.reaches(profile)
    }

    fn accept(&mut self, profile: &ExponentProfile) -> bool {
        self.reaches(profile)
    }
}

/// Accepts trees with no complementary pair and no 0-leaf: their literals
/// form a satisfying partial assignment.
pub(crate) struct Consistent;

impl Goal for Consistent {
    fn prune(&mut self, profile: &ExponentProfile) -> bool {
        !profile.is_consistent()
    }

    fn accept(&mut self, profile: &ExponentProfile) -> bool {
        profile.is_consistent()
    }
}

/// Accepts trees without a 0-leaf.
pub(crate) struct ZeroFree;

impl Goal for ZeroFree {
    fn prune(&mut self, profile: &ExponentProfile) -> bool {
        profile.is_zero()
    }

    fn accept(&mut self, profile: &ExponentProfile) -> bool {
        !profile.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_nnf;
    use crate::prooftree::{enumerate_trees, profile_of, tree_opt_val};
    use crate::rational::ratio;

    #[test]
    fn finds_first_tree_in_canonical_order() {
        let f = parse_nnf(b"(and (or (var 1) (var 2)) (not 1) (not 2))").unwrap();
        let mut s = TreeSearch::new(&f, 1000);
        let hit = s.find(&mut AtLeast::new(&ratio(1, 4)), &[]).unwrap().unwrap();
        assert_eq!(hit.choices, vec![0]);
        let hit = s.find(&mut AtLeast::new(&ratio(1, 4)), &[1]).unwrap().unwrap();
        assert_eq!(hit.choices, vec![1]);
        assert!(s.find(&mut AtLeast::new(&ratio(26, 100)), &[]).unwrap().is_none());
    }

    #[test]
    fn search_profile_matches_walk_profile() {
        let f = parse_nnf(
            b"(or (and (or (var 1) (not 2)) (var 3) (or (var 2) (and (not 3) (or (var 1) false)))) (not 1))",
        )
        .unwrap();
        for tree in enumerate_trees(&f) {
            let mut s = TreeSearch::new(&f, 1000);
            let hit = s.find(&mut AtLeast::new(&ratio(0, 1)), tree.choices()).unwrap().unwrap();
            assert_eq!(hit.choices, tree.choices());
            assert_eq!(hit.profile, profile_of(&tree));
            assert_eq!(tree_opt_val(&hit.profile), tree_opt_val(&profile_of(&tree)));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = parse_nnf(b"(and (or (var 1) (not 1)) (or (var 2) (not 2)) (or (var 3) (not 3)))").unwrap();
        let mut s = TreeSearch::new(&f, 2);
        assert!(matches!(
            s.find(&mut AtLeast::new(&ratio(1, 1)), &[]),
            Err(Error::Resource(_))
        ));
    }
}
