//! Seeded random instance generators shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semopt_core::formula::{CnfFormula, Formula, FormulaBuilder, Literal, NodeId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random NNF tree over at most `max_vars` variables with at most
/// `max_lits` literal leaves and at most `max_ors` OR nodes. A few leaves are
/// constants when `constants` is set.
pub fn random_nnf(
    rng: &mut impl Rng,
    max_vars: u32,
    max_lits: usize,
    max_ors: usize,
    constants: bool,
) -> Formula {
    let n = rng.gen_range(1..=max_vars);
    let lits = rng.gen_range(1..=max_lits);
    let mut b = FormulaBuilder::new();
    let mut pool: Vec<NodeId> = (0..lits)
        .map(|_| {
            let var = rng.gen_range(1..=n);
            if rng.gen_bool(0.5) {
                b.var(var)
            } else {
                b.not(var)
            }
        })
        .collect();
    if constants && rng.gen_bool(0.3) {
        let value = rng.gen_bool(0.5);
        pool.push(b.constant(value));
    }
    let mut ors = 0;
    while pool.len() > 1 {
        pool.shuffle(rng);
        let take = rng.gen_range(2..=pool.len().min(3));
        let children: Vec<NodeId> = pool.drain(..take).collect();
        let node = if ors < max_ors && rng.gen_bool(0.5) {
            ors += 1;
            b.or(children)
        } else {
            b.and(children)
        };
        pool.push(node);
    }
    let root = pool[0];
    b.finish(root).expect("generated formula is well formed")
}

fn random_clause(rng: &mut impl Rng, n: u32, k: usize) -> Vec<Literal> {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    vars.truncate(k);
    vars.into_iter()
        .map(|v| if rng.gen_bool(0.5) { Literal::pos(v) } else { Literal::neg(v) })
        .collect()
}

/// A random CNF with `1 ≤ n ≤ max_vars`, `1 ≤ m ≤ max_clauses` and clause
/// widths in `1..=min(max_width, n)`.
pub fn random_cnf(rng: &mut impl Rng, max_vars: u32, max_clauses: usize, max_width: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=max_width.min(n as usize));
            random_clause(rng, n, k)
        })
        .collect();
    CnfFormula::new(n, clauses).expect("generated CNF is valid")
}

/// A random 3-CNF: every clause has exactly three distinct variables.
pub fn random_3cnf(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m).map(|_| random_clause(rng, n, 3)).collect();
    CnfFormula::new(n, clauses).expect("generated CNF is valid")
}

/// All `2^k` sign patterns on `k` variables, repeated over `blocks`
/// disjoint variable groups: exactly `1 − 2^{−k}` of the clauses are
/// simultaneously satisfiable.
pub fn sign_pattern_blocks(k: u32, blocks: u32) -> CnfFormula {
    let mut clauses = Vec::new();
    for block in 0..blocks {
        for signs in 0..1u32 << k {
            clauses.push(
                (0..k)
                    .map(|j| {
                        let var = block * k + j + 1;
                        if signs >> j & 1 == 1 { Literal::neg(var) } else { Literal::pos(var) }
                    })
                    .collect(),
            );
        }
    }
    CnfFormula::new(k * blocks, clauses).expect("valid blocks")
}
