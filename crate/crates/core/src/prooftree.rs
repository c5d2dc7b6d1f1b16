//! Proof trees of a formula tree and their polynomials.
//!
//! A proof tree keeps every child of an AND node and exactly one child of
//! each OR node it reaches. Its Viterbi value under `π` is the polynomial
//! `Π x_i^{a_i} (1 − x_i)^{b_i}`, where `a_i`/`b_i` count positive/negated
//! leaves of `x_i`, and that product is maximized coordinate-wise at
//! `x_i = a_i / (a_i + b_i)`.
//!
//! Proof trees are encoded canonically as the sequence of chosen child
//! indices of the OR nodes they reach, in pre-order.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaBuilder, Node, NodeId};
use crate::rational::{from_biguints, gcd_reduce, ratio, BigRational};
use crate::semiring::Interpretation;

/// Per-variable exponents `(a_i, b_i)` of a proof-tree polynomial, plus a
/// flag for a constant-0 leaf (which forces the polynomial to 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentProfile {
    pos: Vec<u32>,
    neg: Vec<u32>,
    zero: bool,
}

impl ExponentProfile {
    pub fn empty(var_count: u32) -> Self {
        ExponentProfile {
            pos: vec![0; var_count as usize],
            neg: vec![0; var_count as usize],
            zero: false,
        }
    }

    /// From explicit exponent vectors (`pos[i]`, `neg[i]` belong to `x_{i+1}`).
    pub fn new(pos: Vec<u32>, neg: Vec<u32>, zero: bool) -> Result<Self> {
        if pos.len() != neg.len() {
            return Err(Error::Argument("exponent vectors differ in length".into()));
        }
        Ok(ExponentProfile { pos, neg, zero })
    }

    pub fn var_count(&self) -> u32 {
        self.pos.len() as u32
    }

    /// `a_i` for variable `var` (1-based).
    pub fn pos(&self, var: u32) -> u32 {
        self.pos[var as usize - 1]
    }

    /// `b_i` for variable `var` (1-based).
    pub fn neg(&self, var: u32) -> u32 {
        self.neg[var as usize - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn total_degree(&self) -> u64 {
        self.pos
            .iter()
            .chain(&self.neg)
            .map(|&e| u64::from(e))
            .sum()
    }

    /// True iff no variable occurs with both polarities and no 0-leaf
    /// occurs, i.e. the polynomial reaches 1 on a Boolean point.
    pub fn is_consistent(&self) -> bool {
        !self.zero && self.pos.iter().zip(&self.neg).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub(crate) fn add_literal(&mut self, var: u32, negated: bool, delta: i32) {
        let slot = if negated {
            &mut self.neg[var as usize - 1]
        } else {
            &mut self.pos[var as usize - 1]
        };
        *slot = slot.checked_add_signed(delta).expect("exponent underflow");
    }

    pub(crate) fn set_zero(&mut self, zero: bool) {
        self.zero = zero;
    }

    /// Numerator and denominator (not reduced) of the per-tree optimum:
    /// `Π a^a b^b` over `Π (a+b)^(a+b)`.
    pub(crate) fn optimum_parts(&self) -> (BigUint, BigUint) {
        if self.zero {
            return (BigUint::zero(), BigUint::one());
        }
        let mut numer = BigUint::one();
        let mut denom = BigUint::one();
        for (&a, &b) in self.pos.iter().zip(&self.neg) {
            if a > 0 && b > 0 {
                numer *= BigUint::from(a).pow(a) * BigUint::from(b).pow(b);
                denom *= BigUint::from(a + b).pow(a + b);
            }
        }
        (numer, denom)
    }
}

/// `optConfVal(T) = Π (a_i/(a_i+b_i))^{a_i} (b_i/(a_i+b_i))^{b_i}`, exactly.
/// Variables with `a_i = b_i = 0` contribute 1, and `0^0 = 1`.
pub fn tree_opt_val(profile: &ExponentProfile) -> BigRational {
    let (numer, denom) = profile.optimum_parts();
    let (numer, denom) = gcd_reduce(numer, denom);
    from_biguints(numer, denom)
}

/// The maximizer `π(x_i) = a_i/(a_i+b_i)`; variables the tree does not
/// mention get `1/2`.
pub fn tree_opt_interpretation(profile: &ExponentProfile) -> Result<Interpretation> {
    if profile.zero {
        return Err(Error::ZeroTree);
    }
    let values = profile
        .pos
        .iter()
        .zip(&profile.neg)
        .map(|(&a, &b)| {
            if a + b == 0 {
                ratio(1, 2)
            } else {
                ratio(i64::from(a), i64::from(a + b))
            }
        })
        .collect();
    Ok(Interpretation::real(values))
}

/// A proof tree of `formula`, identified by its canonical choice sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree<'f> {
    formula: &'f Formula,
    choices: Vec<usize>,
}

impl<'f> ProofTree<'f> {
    /// Validates a full choice sequence against the formula.
    pub fn from_choices(formula: &'f Formula, choices: Vec<usize>) -> Result<Self> {
        let mut used = 0;
        let mut bad = None;
        walk(formula, &choices, &mut |step| {
            if let WalkStep::Or { arity, chosen, defaulted, .. } = step {
                if defaulted || chosen >= arity {
                    bad.get_or_insert(used);
                }
                used += 1;
            }
        });
        if let Some(pos) = bad {
            return Err(Error::Argument(format!(
                "choice sequence invalid at OR position {pos}"
            )));
        }
        if used != choices.len() {
            return Err(Error::Argument(format!(
                "choice sequence has {} entries, tree reaches {used} OR nodes",
                choices.len()
            )));
        }
        Ok(ProofTree { formula, choices })
    }

    pub fn formula(&self) -> &'f Formula {
        self.formula
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    /// The chosen child of each reachable OR node, as `(or_node, child_index)`.
    pub fn or_choices(&self) -> Vec<(NodeId, usize)> {
        let mut out = Vec::new();
        walk(self.formula, &self.choices, &mut |step| {
            if let WalkStep::Or { node, chosen, .. } = step {
                out.push((node, chosen));
            }
        });
        out
    }

    /// Comma-separated choice list, e.g. `0,2,1`. Empty for trees without
    /// OR nodes.
    pub fn encode(&self) -> String {
        self.choices
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn decode(formula: &'f Formula, text: &str) -> Result<Self> {
        let text = text.trim();
        let choices = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(0, format!("bad tree index {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::from_choices(formula, choices)
    }

    /// The proof tree as a formula of its own (OR nodes keep one child).
    pub fn to_formula(&self) -> Formula {
        let mut b = FormulaBuilder::new();
        let mut choices = self.choices.iter().copied();
        let root = copy_tree(self.formula, self.formula.root(), &mut choices, &mut b);
        b.finish(root)
            .expect("a proof tree of a valid formula is valid")
            .with_var_count(self.formula.var_count())
            .expect("same variables")
    }

    pub fn leaf_count(&self) -> usize {
        let mut count = 0;
        walk(self.formula, &self.choices, &mut |step| {
            if let WalkStep::Leaf(Node::Lit(_)) = step {
                count += 1;
            }
        });
        count
    }
}

impl fmt::Display for ProofTree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

fn copy_tree(
    formula: &Formula,
    id: NodeId,
    choices: &mut impl Iterator<Item = usize>,
    b: &mut FormulaBuilder,
) -> NodeId {
    match formula.node(id) {
        Node::Lit(l) => b.lit(*l),
        Node::Const(c) => b.constant(*c),
        Node::And(children) => {
            let kids = children.iter().map(|&c| copy_tree(formula, c, choices, b)).collect();
            b.and(kids)
        }
        Node::Or(children) => {
            let pick = choices.next().expect("validated choices");
            let kid = copy_tree(formula, children[pick], choices, b);
            b.or(vec![kid])
        }
    }
}

pub(crate) enum WalkStep<'a> {
    Leaf(&'a Node),
    Or {
        node: NodeId,
        arity: usize,
        chosen: usize,
        defaulted: bool,
    },
}

/// Pre-order walk of the proof tree selected by `choices`; OR nodes past the
/// end of `choices` take child 0 and report `defaulted`.
pub(crate) fn walk<'a>(formula: &'a Formula, choices: &[usize], visit: &mut impl FnMut(WalkStep<'a>)) {
    let mut next = 0;
    let mut stack = vec![formula.root()];
    while let Some(id) = stack.pop() {
        match formula.node(id) {
            leaf @ (Node::Lit(_) | Node::Const(_)) => visit(WalkStep::Leaf(leaf)),
            Node::And(children) => stack.extend(children.iter().rev()),
            Node::Or(children) => {
                let (chosen, defaulted) = match choices.get(next) {
                    Some(&c) => (c, false),
                    None => (0, true),
                };
                next += 1;
                visit(WalkStep::Or {
                    node: id,
                    arity: children.len(),
                    chosen,
                    defaulted,
                });
                if let Some(&child) = children.get(chosen) {
                    stack.push(child);
                }
            }
        }
    }
}

pub fn profile_of(tree: &ProofTree<'_>) -> ExponentProfile {
    let mut profile = ExponentProfile::empty(tree.formula.var_count());
    walk(tree.formula, &tree.choices, &mut |step| match step {
        WalkStep::Leaf(Node::Lit(l)) => profile.add_literal(l.var(), l.is_negated(), 1),
        WalkStep::Leaf(Node::Const(false)) => profile.zero = true,
        _ => {}
    });
    profile
}

/// Number of proof trees (product at AND nodes, sum at OR nodes).
pub fn count_trees(formula: &Formula) -> BigUint {
    let mut counts: Vec<BigUint> = Vec::with_capacity(formula.nodes().len());
    for node in formula.nodes() {
        let c = match node {
            Node::Lit(_) | Node::Const(_) => BigUint::one(),
            Node::And(children) => children.iter().map(|&c| &counts[c]).product(),
            Node::Or(children) => children.iter().map(|&c| &counts[c]).sum(),
        };
        counts.push(c);
    }
    counts[formula.root()].clone()
}

/// Streams every proof tree exactly once, in lexicographic order of the
/// canonical encoding.
pub fn enumerate_trees(phi: &Formula) -> TreeEnumerator<'_> {
    TreeEnumerator {
        formula: phi,
        next: Some(complete(phi, &[])),
    }
}

pub struct TreeEnumerator<'f> {
    formula: &'f Formula,
    next: Option<(Vec<usize>, Vec<usize>)>,
}

impl<'f> Iterator for TreeEnumerator<'f> {
    type Item = ProofTree<'f>;

    fn next(&mut self) -> Option<Self::Item> {
        let (choices, arities) = self.next.take()?;
        if let Some(j) = (0..choices.len()).rev().find(|&j| choices[j] + 1 < arities[j]) {
            let mut prefix = choices[..j].to_vec();
            prefix.push(choices[j] + 1);
            self.next = Some(complete(self.formula, &prefix));
        }
        Some(ProofTree {
            formula: self.formula,
            choices,
        })
    }
}

/// Extends `prefix` with child 0 at every remaining OR node; returns the full
/// choices and the arity of each OR visited.
fn complete(formula: &Formula, prefix: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut choices = Vec::new();
    let mut arities = Vec::new();
    walk(formula, prefix, &mut |step| {
        if let WalkStep::Or { arity, chosen, .. } = step {
            choices.push(chosen);
            arities.push(arity);
        }
    });
    (choices, arities)
}
