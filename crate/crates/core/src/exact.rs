//! Exact `optConfVal` / `optConf` over the Viterbi semiring.
//!
//! The value is found by binary search on exact dyadic midpoints against a
//! threshold oracle ("is there a proof tree whose optimum is at least v?"),
//! run until the bracket is narrower than the minimum gap between members
//! of the Farey sequence that must contain the answer. The unique fraction
//! left in the bracket is then recovered by Stern–Brocot descent. A
//! witnessing proof tree is isolated afterwards by prefix search over the
//! canonical tree encoding.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::prooftree::{
    count_trees, enumerate_trees, profile_of, tree_opt_interpretation, tree_opt_val,
    ProofTree,
};
use crate::rational::{ceil_log2, format_ratio, inverse_power_of_two, ratio, BigRational};
use crate::search::{AtLeast, TreeSearch};
use crate::semiring::Interpretation;

/// Default cap on proof trees (exhaustive strategy) or search nodes per
/// oracle call (branch-and-bound).
pub const DEFAULT_MAX_TREES: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OracleStrategy {
    /// Enumerates every proof tree; refuses formulas with more than
    /// `max_trees` trees.
    Exhaustive,
    #[default]
    BranchAndBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub strategy: OracleStrategy,
    pub max_trees: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            strategy: OracleStrategy::default(),
            max_trees: DEFAULT_MAX_TREES,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub oracle_queries: u64,
    /// Proof trees (exhaustive) or search nodes (branch-and-bound) visited.
    pub trees_explored: u64,
}

/// The Farey order `N = 2^{n_log2}` that must contain `optConfVal(φ)`, with
/// `n_log2 = ⌈n·m·log2 m⌉` computed exactly as the bit length bound of
/// `m^{n·m}`. Distinct members of `F_N` differ by at least `2^{-gap_log2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyBound {
    pub n_log2: u64,
    pub gap_log2: u64,
}

impl FareyBound {
    pub fn new(var_count: u32, size: usize) -> Self {
        let n_log2 = if size < 2 || var_count == 0 {
            0
        } else {
            let exponent = u64::from(var_count) * size as u64;
            let exponent = u32::try_from(exponent).expect("formula too large for a Farey bound");
            ceil_log2(&BigUint::from(size).pow(exponent))
        };
        FareyBound {
            n_log2,
            gap_log2: 2 * n_log2,
        }
    }

    pub fn for_formula(phi: &Formula) -> Self {
        Self::new(phi.var_count(), phi.size())
    }

    pub fn order(&self) -> BigUint {
        BigUint::one() << self.n_log2
    }
}

/// Answers "does some proof tree have `tree_opt_val ≥ v`?" exactly.
///
/// Answers already implied by earlier ones (a tree found at value `w`
/// answers yes for every `v ≤ w`; a no at `v` answers no above `v`) are
/// reused without searching.
pub struct ThresholdOracle<'f> {
    formula: &'f Formula,
    config: SolverConfig,
    search: TreeSearch<'f>,
    stats: SolveStats,
    best_found: Option<BigRational>,
    lowest_rejected: Option<BigRational>,
}

impl<'f> ThresholdOracle<'f> {
    pub fn new(formula: &'f Formula, config: SolverConfig) -> Self {
        ThresholdOracle {
            formula,
            search: TreeSearch::new(formula, config.max_trees),
            config,
            stats: SolveStats::default(),
            best_found: None,
            lowest_rejected: None,
        }
    }

    pub fn stats(&self) -> SolveStats {
        let mut stats = self.stats.clone();
        stats.trees_explored += self.search.nodes_explored;
        stats
    }

    pub fn query(&mut self, v: &BigRational) -> Result<bool> {
        if v.is_negative() || *v > BigRational::one() {
            return Err(Error::Argument(format!(
                "threshold {} outside [0, 1]",
                format_ratio(v)
            )));
        }
        self.stats.oracle_queries += 1;
        if v.is_zero() || self.best_found.as_ref().is_some_and(|w| w >= v) {
            return Ok(true);
        }
        if self.lowest_rejected.as_ref().is_some_and(|u| u <= v) {
            return Ok(false);
        }
        let hit = match self.config.strategy {
            OracleStrategy::Exhaustive => self.exhaustive_at_least(v)?,
            OracleStrategy::BranchAndBound => self
                .search
                .find(&mut AtLeast::new(v), &[])?
                .map(|found| tree_opt_val(&found.profile)),
        };
        match hit {
            Some(w) => {
                if self.best_found.as_ref().is_none_or(|b| *b < w) {
                    self.best_found = Some(w);
                }
                Ok(true)
            }
            None => {
                self.lowest_rejected = Some(v.clone());
                Ok(false)
            }
        }
    }

    fn check_tree_count(&self) -> Result<()> {
        let count = count_trees(self.formula);
        if count > BigUint::from(self.config.max_trees) {
            return Err(Error::Resource(format!(
                "{count} proof trees exceed the cap of {}",
                self.config.max_trees
            )));
        }
        Ok(())
    }

    fn exhaustive_at_least(&mut self, v: &BigRational) -> Result<Option<BigRational>> {
        self.check_tree_count()?;
        for tree in enumerate_trees(self.formula) {
            self.stats.trees_explored += 1;
            let value = tree_opt_val(&profile_of(&tree));
            if value >= *v {
                return Ok(Some(value));
            }
        }
        Ok(None)
    }

    /// The lexicographically first tree reaching `v`: the search commits OR
    /// choices in canonical order, so its first hit is that tree.
    fn first_tree_reaching(&mut self, v: &BigRational) -> Result<Option<Vec<usize>>> {
        self.stats.oracle_queries += 1;
        Ok(self.search.find(&mut AtLeast::new(v), &[])?.map(|found| found.choices))
    }
}

/// The fraction of smallest denominator in `[lo, hi]`, found by Stern–Brocot
/// descent with runs of equal moves taken in one step. Fails if that
/// denominator exceeds `max_denominator`.
pub fn farey_recover(lo: &BigRational, hi: &BigRational, max_denominator: &BigUint) -> Result<BigRational> {
    let empty = || Error::EmptyInterval {
        lo: format_ratio(lo),
        hi: format_ratio(hi),
        max_denominator: max_denominator.to_string(),
    };
    if lo.is_negative() || lo > hi {
        return Err(Error::Argument(format!(
            "invalid interval [{}, {}]",
            format_ratio(lo),
            format_ratio(hi)
        )));
    }
    let found = simplest_in(lo, hi);
    let denom = found.denom().to_biguint().expect("positive denominator");
    if denom > *max_denominator {
        return Err(empty());
    }
    Ok(found)
}

fn simplest_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    use num_bigint::BigInt;
    if lo.is_zero() {
        return BigRational::zero();
    }
    let (a, b) = (lo.numer(), lo.denom());
    let (c, d) = (hi.numer(), hi.denom());
    // left = lp/lq, right = rp/rq, starting from 0/1 and 1/0
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut rp, mut rq) = (BigInt::one(), BigInt::zero());
    loop {
        let mp = &lp + &rp;
        let mq = &lq + &rq;
        if &mp * b < a * &mq {
            // mediant below lo: move left bound right by the longest run
            // k with (lp + k rp)/(lq + k rq) < lo
            let num = a * &lq - b * &lp;
            let den = b * &rp - a * &rq;
            let k = (num + &den - BigInt::one()) / &den - BigInt::one();
            lp += &k * &rp;
            lq += &k * &rq;
        } else if &mp * d > c * &mq {
            // mediant above hi: longest run k with (rp + k lp)/(rq + k lq) > hi
            let num = d * &rp - c * &rq;
            let den = c * &lq - d * &lp;
            let k = (num + &den - BigInt::one()) / &den - BigInt::one();
            rp += &k * &lp;
            rq += &k * &lq;
        } else {
            return BigRational::new(mp, mq);
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValueOutcome {
    pub value: BigRational,
    pub bound: FareyBound,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct OptConfOutcome<'f> {
    pub interpretation: Interpretation,
    pub value: BigRational,
    pub tree: ProofTree<'f>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, Default)]
pub struct Solver {
    config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// `optConfVal(φ)`, exactly.
    pub fn opt_conf_val(&self, phi: &Formula) -> Result<ValueOutcome> {
        let mut oracle = ThresholdOracle::new(phi, self.config.clone());
        let value = self.value_with(phi, &mut oracle)?;
        Ok(ValueOutcome {
            value,
            bound: FareyBound::for_formula(phi),
            stats: oracle.stats(),
        })
    }

    fn value_with(&self, phi: &Formula, oracle: &mut ThresholdOracle<'_>) -> Result<BigRational> {
        let one = BigRational::one();
        // optConfVal = 1 exactly when φ is satisfiable
        if oracle.query(&one)? {
            return Ok(one);
        }
        let bound = FareyBound::for_formula(phi);
        // invariant: lo <= opt < hi
        let mut lo = BigRational::zero();
        let mut hi = one;
        let two = ratio(2, 1);
        let width = inverse_power_of_two(bound.gap_log2);
        while &hi - &lo > width {
            let mid = (&lo + &hi) / &two;
            if oracle.query(&mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        farey_recover(&lo, &hi, &bound.order())
    }

    /// `optConf(φ)`: the optimal value, the lexicographically first proof
    /// tree attaining it, and that tree's maximizing interpretation.
    pub fn opt_conf<'f>(&self, phi: &'f Formula) -> Result<OptConfOutcome<'f>> {
        let mut oracle = ThresholdOracle::new(phi, self.config.clone());
        let value = self.value_with(phi, &mut oracle)?;
        let choices = match self.config.strategy {
            OracleStrategy::Exhaustive => first_tree_exhaustive(phi, &value, &mut oracle)?,
            OracleStrategy::BranchAndBound => first_tree_search(&value, &mut oracle)?,
        };
        let tree = ProofTree::from_choices(phi, choices)?;
        let profile = profile_of(&tree);
        debug_assert_eq!(tree_opt_val(&profile), value);
        let interpretation = if profile.is_zero() {
            Interpretation::real(vec![ratio(1, 2); phi.var_count() as usize])
        } else {
            tree_opt_interpretation(&profile)?
        };
        Ok(OptConfOutcome {
            interpretation,
            value,
            tree,
            stats: oracle.stats(),
        })
    }
}

fn first_tree_search(target: &BigRational, oracle: &mut ThresholdOracle<'_>) -> Result<Vec<usize>> {
    oracle.first_tree_reaching(target)?.ok_or_else(|| {
        Error::Argument(format!(
            "no proof tree reaches {} (solver inconsistency)",
            format_ratio(target)
        ))
    })
}

fn first_tree_exhaustive(
    phi: &Formula,
    target: &BigRational,
    oracle: &mut ThresholdOracle<'_>,
) -> Result<Vec<usize>> {
    oracle.check_tree_count()?;
    for tree in enumerate_trees(phi) {
        oracle.stats.trees_explored += 1;
        if tree_opt_val(&profile_of(&tree)) == *target {
            return Ok(tree.choices().to_vec());
        }
    }
    Err(Error::Argument(format!(
        "no proof tree reaches {} (solver inconsistency)",
        format_ratio(target)
    )))
}

pub fn oracle_query(phi: &Formula, v: &BigRational) -> Result<bool> {
    ThresholdOracle::new(phi, SolverConfig::default()).query(v)
}

pub fn opt_conf_val(phi: &Formula) -> Result<BigRational> {
    Solver::default().opt_conf_val(phi).map(|o| o.value)
}

pub fn opt_conf(phi: &Formula) -> Result<OptConfOutcome<'_>> {
    Solver::default().opt_conf(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_nnf;
    use crate::semiring::conf;

    fn nnf(text: &str) -> Formula {
        parse_nnf(text.as_bytes()).unwrap()
    }

    const EXAMPLE: &str = "(and (var 1) (var 2) (or (not 1) (not 2)))";

    #[test]
    fn oracle_examples() {
        let f = nnf(EXAMPLE);
        assert!(oracle_query(&f, &ratio(1, 4)).unwrap());
        assert!(!oracle_query(&f, &(ratio(1, 4) + ratio(1, 100))).unwrap());
        assert!(oracle_query(&nnf("(var 1)"), &ratio(1, 1)).unwrap());
        assert!(oracle_query(&f, &ratio(3, 2)).is_err());
    }

    #[test]
    fn opt_conf_val_examples() {
        assert_eq!(opt_conf_val(&nnf(EXAMPLE)).unwrap(), ratio(1, 4));
        assert_eq!(opt_conf_val(&nnf("(or (var 1) (not 1))")).unwrap(), ratio(1, 1));
        assert_eq!(opt_conf_val(&nnf("(and (var 1) (not 1))")).unwrap(), ratio(1, 4));
    }

    #[test]
    fn opt_conf_examples() {
        let f = nnf(EXAMPLE);
        let out = opt_conf(&f).unwrap();
        assert_eq!(out.value, ratio(1, 4));
        assert_eq!(out.interpretation, Interpretation::real(vec![ratio(1, 2), ratio(1, 1)]));
        assert_eq!(out.tree.encode(), "0");
        assert_eq!(conf(&f, &out.interpretation).unwrap(), ratio(1, 4));

        let g = nnf("(var 1)");
        let out = opt_conf(&g).unwrap();
        assert_eq!(out.interpretation, Interpretation::real(vec![ratio(1, 1)]));
        assert_eq!(out.value, ratio(1, 1));

        let h = nnf("(and (or (var 1) (var 2)) (not 1) (not 2))");
        let out = opt_conf(&h).unwrap();
        assert_eq!(out.value, ratio(1, 4));
        assert_eq!(out.interpretation, Interpretation::real(vec![ratio(1, 2), ratio(0, 1)]));
    }

    #[test]
    fn zero_and_constant_formulas() {
        assert_eq!(opt_conf_val(&nnf("false")).unwrap(), ratio(0, 1));
        assert_eq!(opt_conf_val(&nnf("true")).unwrap(), ratio(1, 1));
        assert_eq!(opt_conf_val(&nnf("(and (var 1) false)")).unwrap(), ratio(0, 1));
        let f = nnf("(or (and (var 1) false) (and (var 1) (not 1)))");
        assert_eq!(opt_conf_val(&f).unwrap(), ratio(1, 4));
        let out = opt_conf(&f).unwrap();
        assert_eq!(out.tree.encode(), "1");
        let z = nnf("(and (var 1) (not 1) false)");
        let out = opt_conf(&z).unwrap();
        assert_eq!(out.value, ratio(0, 1));
        assert_eq!(conf(&z, &out.interpretation).unwrap(), ratio(0, 1));
    }

    #[test]
    fn farey_examples() {
        let n = |v: u32| BigUint::from(v);
        assert_eq!(farey_recover(&ratio(3, 10), &ratio(7, 20), &n(5)).unwrap(), ratio(1, 3));
        assert_eq!(farey_recover(&ratio(1, 2), &ratio(1, 2), &n(2)).unwrap(), ratio(1, 2));
        assert_eq!(farey_recover(&ratio(24, 100), &ratio(26, 100), &n(4)).unwrap(), ratio(1, 4));
        assert!(matches!(
            farey_recover(&ratio(24, 100), &ratio(26, 100), &n(3)),
            Err(Error::EmptyInterval { .. })
        ));
        assert!(farey_recover(&ratio(1, 2), &ratio(1, 3), &n(5)).is_err());
    }

    #[test]
    fn farey_handles_long_runs() {
        // 1/2^300 sits 300 left-moves deep; runs keep this to a few steps
        let tiny = inverse_power_of_two(300);
        let lo = &tiny - inverse_power_of_two(700);
        let hi = &tiny + inverse_power_of_two(700);
        let got = farey_recover(&lo, &hi, &(BigUint::one() << 300u32)).unwrap();
        assert_eq!(got, tiny);
    }

    #[test]
    fn farey_bound_values() {
        // 2 variables, 3 clauses: 3^6 = 729 <= 2^10
        assert_eq!(FareyBound::new(2, 3), FareyBound { n_log2: 10, gap_log2: 20 });
        assert_eq!(FareyBound::new(1, 1).n_log2, 0);
        // 4^4 = 256 exactly
        assert_eq!(FareyBound::new(2, 4).n_log2, 16);
    }

    #[test]
    fn query_count_within_bound() {
        let f = nnf(EXAMPLE);
        let out = Solver::default().opt_conf_val(&f).unwrap();
        assert!(out.stats.oracle_queries <= out.bound.gap_log2 + 1);
    }

    #[test]
    fn strategies_agree() {
        let exhaustive = Solver::new(SolverConfig {
            strategy: OracleStrategy::Exhaustive,
            ..Default::default()
        });
        for text in [
            EXAMPLE,
            "(and (or (var 1) (var 2)) (or (not 1) (var 3)) (or (not 2) (not 3)) (or (var 1) (not 3)))",
            "(or (and (var 1) (not 1) (var 2)) (and (not 2) (or (var 2) (and (var 1) (not 1)))))",
        ] {
            let f = nnf(text);
            let a = opt_conf(&f).unwrap();
            let b = exhaustive.opt_conf(&f).unwrap();
            assert_eq!(a.value, b.value, "{text}");
            assert_eq!(a.tree.encode(), b.tree.encode(), "{text}");
        }
    }

    #[test]
    fn exhaustive_cap_is_an_error() {
        let f = nnf("(and (or (var 1) (not 1)) (or (var 2) (not 2)) (or (var 1) (var 2)))");
        let capped = Solver::new(SolverConfig {
            strategy: OracleStrategy::Exhaustive,
            max_trees: 4,
        });
        assert!(matches!(capped.opt_conf_val(&f), Err(Error::Resource(_))));
    }
}
