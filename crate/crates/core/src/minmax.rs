//! Idempotent (max/min) semirings: the access-control semiring `A_k`, the
//! fuzzy semiring, and the tropical semiring through the `x ↦ −ln x`
//! isomorphism with Viterbi.
//!
//! Under `(max, min)` the optimum is decided by satisfiability: a
//! satisfiable formula reaches the top element, and an unsatisfiable one
//! reaches the negation index, because every proof tree free of `false`
//! leaves contains some `x` and `¬x`. If every proof tree contains a `false`
//! leaf the optimum is 0.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{DEFAULT_MAX_TREES, Solver, SolverConfig};
use crate::formula::Formula;
use crate::rational::{format_ratio, is_unit_interval, ln_ratio, ratio, BigRational};
use crate::sat::sat_check_capped;
use crate::search::{TreeSearch, ZeroFree};
use crate::semiring::{eval_sem, AccessSemiring, Interpretation, SemiringSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NegationIndex {
    /// `max_a min(a, ℸ(a))`.
    pub index: u32,
    /// Smallest `a` attaining the index.
    pub argmax: u32,
}

pub fn negation_index(sr: &AccessSemiring) -> NegationIndex {
    let mut best = NegationIndex { index: 0, argmax: 0 };
    for a in 0..=sr.k() {
        let v = a.min(sr.negate(a));
        if v > best.index {
            best = NegationIndex { index: v, argmax: a };
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessOutcome {
    pub interpretation: Interpretation,
    pub value: u32,
    pub satisfiable: bool,
}

pub fn opt_access_val(phi: &Formula, sr: &AccessSemiring) -> Result<u32> {
    opt_access(phi, sr).map(|o| o.value)
}

pub fn opt_access(phi: &Formula, sr: &AccessSemiring) -> Result<AccessOutcome> {
    opt_access_capped(phi, sr, DEFAULT_MAX_TREES)
}

/// `max_nodes` caps the satisfiability search.
pub fn opt_access_capped(phi: &Formula, sr: &AccessSemiring, max_nodes: u64) -> Result<AccessOutcome> {
    let n = phi.var_count() as usize;
    let sat = sat_check_capped(phi, max_nodes)?;
    if let Some(model) = sat.model {
        let top = sr.k();
        let bottom = sr.negate(top);
        let levels = model.iter().map(|&b| if b { top } else { bottom }).collect();
        return Ok(AccessOutcome {
            interpretation: Interpretation::levels(levels),
            value: top,
            satisfiable: true,
        });
    }
    let idx = negation_index(sr);
    let value = if has_zero_free_tree(phi, max_nodes)? { idx.index } else { 0 };
    Ok(AccessOutcome {
        interpretation: Interpretation::levels(vec![idx.argmax; n]),
        value,
        satisfiable: false,
    })
}

fn has_zero_free_tree(phi: &Formula, max_nodes: u64) -> Result<bool> {
    if !phi.has_constants() {
        return Ok(true);
    }
    Ok(TreeSearch::new(phi, max_nodes).find(&mut ZeroFree, &[])?.is_some())
}

/// `max_π Sem(φ, π)` over all `(k+1)^n` interpretations, with the first
/// maximizer in lexicographic order (`x_1` most significant).
pub fn brute_force_access(
    phi: &Formula,
    sr: &AccessSemiring,
    max_assignments: u64,
) -> Result<(u32, Interpretation)> {
    let n = phi.var_count();
    let base = u64::from(sr.k()) + 1;
    let total = base
        .checked_pow(n)
        .filter(|&t| t <= max_assignments)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{base}^{n} interpretations exceed {max_assignments}"
            ))
        })?;
    let spec = SemiringSpec::Access(sr.clone());
    let mut levels = vec![0u32; n as usize];
    let mut best: Option<(u32, Vec<u32>)> = None;
    for _ in 0..total {
        let pi = Interpretation::levels(levels.clone());
        let v = eval_sem(phi, &pi, &spec)?.as_level().expect("access value");
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, levels.clone()));
        }
        for digit in levels.iter_mut().rev() {
            *digit += 1;
            if *digit < base as u32 {
                break;
            }
            *digit = 0;
        }
    }
    let (v, levels) = best.expect("at least one interpretation");
    Ok((v, Interpretation::levels(levels)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessRoundTrip {
    pub sat: bool,
    pub val: u32,
    /// Satisfiability read off the value (`val = k`) agrees with the SAT
    /// kernel, and the value predicted from satisfiability matches.
    pub consistent: bool,
}

/// Runs both directions of the SAT/`optAccessVal` equivalence: the value is
/// computed by exhaustive evaluation, then satisfiability is decided from
/// it; independently, a single satisfiability check predicts the value.
pub fn access_round_trip(phi: &Formula, sr: &AccessSemiring, max_assignments: u64) -> Result<AccessRoundTrip> {
    let (val, _) = brute_force_access(phi, sr, max_assignments)?;
    let sat_from_val = val == sr.k();
    let predicted = opt_access(phi, sr)?;
    Ok(AccessRoundTrip {
        sat: predicted.satisfiable,
        val,
        consistent: sat_from_val == predicted.satisfiable && predicted.value == val,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyOutcome {
    pub interpretation: Interpretation,
    pub value: BigRational,
    pub satisfiable: bool,
}

pub fn opt_fuzzy_val(phi: &Formula) -> Result<BigRational> {
    opt_fuzzy(phi).map(|o| o.value)
}

pub fn opt_fuzzy(phi: &Formula) -> Result<FuzzyOutcome> {
    opt_fuzzy_capped(phi, DEFAULT_MAX_TREES)
}

/// `1` with the model's `{0, 1}` interpretation when satisfiable; otherwise
/// `max_x min(x, 1 − x) = 1/2` with `π ≡ 1/2`.
pub fn opt_fuzzy_capped(phi: &Formula, max_nodes: u64) -> Result<FuzzyOutcome> {
    let sat = sat_check_capped(phi, max_nodes)?;
    if let Some(model) = sat.model {
        let values = model
            .iter()
            .map(|&b| if b { BigRational::one() } else { BigRational::zero() })
            .collect();
        return Ok(FuzzyOutcome {
            interpretation: Interpretation::real(values),
            value: BigRational::one(),
            satisfiable: true,
        });
    }
    let half = ratio(1, 2);
    let value = if has_zero_free_tree(phi, max_nodes)? { half.clone() } else { BigRational::zero() };
    Ok(FuzzyOutcome {
        interpretation: Interpretation::real(vec![half; phi.var_count() as usize]),
        value,
        satisfiable: false,
    })
}

/// A tropical cost `−ln v` with the Viterbi value it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalValue {
    /// `+∞` when `exact = 0`.
    pub cost: f64,
    pub exact: BigRational,
}

pub fn tropical_adapt(viterbi_val: &BigRational) -> Result<TropicalValue> {
    if !is_unit_interval(viterbi_val) {
        return Err(Error::Argument(format!(
            "{} is not a Viterbi value in [0, 1]",
            format_ratio(viterbi_val)
        )));
    }
    let cost = if viterbi_val.is_zero() {
        f64::INFINITY
    } else {
        -ln_ratio(viterbi_val)
    };
    Ok(TropicalValue {
        cost: if cost == 0.0 { 0.0 } else { cost },
        exact: viterbi_val.clone(),
    })
}

/// The minimum tropical cost of `φ`, via `optConfVal`.
pub fn opt_tropical(phi: &Formula, config: SolverConfig) -> Result<TropicalValue> {
    tropical_adapt(&Solver::new(config).opt_conf_val(phi)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_nnf;
    use crate::semiring::{NegationFn, SemiringValue};

    fn nnf(text: &str) -> Formula {
        parse_nnf(text.as_bytes()).unwrap()
    }

    fn contradiction() -> Formula {
        nnf("(and (var 1) (not 1))")
    }

    fn worked_example() -> Formula {
        nnf("(and (var 1) (var 2) (or (not 1) (not 2)))")
    }

    fn modular(k: u32) -> AccessSemiring {
        AccessSemiring::modular(k).unwrap()
    }

    #[test]
    fn negation_index_examples() {
        assert_eq!(negation_index(&modular(4)), NegationIndex { index: 2, argmax: 2 });
        assert_eq!(negation_index(&modular(5)), NegationIndex { index: 2, argmax: 2 });
        assert_eq!(negation_index(&modular(1)).index, 0);
        for k in 1..=100 {
            assert_eq!(negation_index(&modular(k)).index, k / 2);
        }
    }

    #[test]
    fn negation_index_table() {
        // ℸ swaps 0↔3 and 1↔2 on [0..3]
        let sr = AccessSemiring::new(3, NegationFn::table(vec![3, 2, 1, 0]).unwrap()).unwrap();
        assert_eq!(negation_index(&sr), NegationIndex { index: 1, argmax: 1 });
        // ℸ fixes 1 and 2 on [0..3]: index 2 at a = 2
        let sr = AccessSemiring::new(3, NegationFn::table(vec![3, 1, 2, 0]).unwrap()).unwrap();
        assert_eq!(negation_index(&sr), NegationIndex { index: 2, argmax: 2 });
    }

    #[test]
    fn access_examples() {
        assert_eq!(opt_access_val(&nnf("(or (var 1) (var 2))"), &modular(5)).unwrap(), 5);
        assert_eq!(opt_access_val(&contradiction(), &modular(5)).unwrap(), 2);
        assert_eq!(opt_access_val(&contradiction(), &modular(4)).unwrap(), 2);

        let o = opt_access(&nnf("(var 1)"), &modular(3)).unwrap();
        assert_eq!((o.interpretation, o.value), (Interpretation::levels(vec![3]), 3));
        let o = opt_access(&contradiction(), &modular(4)).unwrap();
        assert_eq!((o.interpretation, o.value), (Interpretation::levels(vec![2]), 2));
        let o = opt_access(&contradiction(), &modular(5)).unwrap();
        assert_eq!((o.interpretation, o.value), (Interpretation::levels(vec![2]), 2));
    }

    #[test]
    fn access_matches_brute_force() {
        let formulas = [
            contradiction(),
            worked_example(),
            nnf("(or (and (var 1) (not 2)) (and (not 1) (var 3)))"),
            nnf("(and (or (var 1) false) (not 1))"),
            nnf("(and false (var 1))"),
            nnf("(or (and (var 1) (not 1)) (and false (var 2)))"),
        ];
        for phi in &formulas {
            for k in 1..=6 {
                let sr = modular(k);
                let o = opt_access(phi, &sr).unwrap();
                let (brute, _) = brute_force_access(phi, &sr, 1 << 20).unwrap();
                assert_eq!(o.value, brute, "{phi} k={k}");
                let spec = SemiringSpec::Access(sr);
                assert_eq!(eval_sem(phi, &o.interpretation, &spec).unwrap(), SemiringValue::Level(o.value));
            }
        }
    }

    #[test]
    fn round_trip_examples() {
        let rt = access_round_trip(&nnf("(or (var 1) (not 2))"), &modular(3), 1 << 20).unwrap();
        assert_eq!(rt, AccessRoundTrip { sat: true, val: 3, consistent: true });
        let rt = access_round_trip(&contradiction(), &modular(6), 1 << 20).unwrap();
        assert_eq!(rt, AccessRoundTrip { sat: false, val: 3, consistent: true });
        let rt = access_round_trip(&worked_example(), &modular(2), 1 << 20).unwrap();
        assert_eq!(rt, AccessRoundTrip { sat: false, val: 1, consistent: true });
        assert!(matches!(
            access_round_trip(&worked_example(), &modular(2), 8),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn fuzzy_examples() {
        assert_eq!(opt_fuzzy_val(&nnf("(or (var 1) (var 2))")).unwrap(), ratio(1, 1));
        assert_eq!(opt_fuzzy_val(&nnf("(var 1)")).unwrap(), ratio(1, 1));
        let o = opt_fuzzy(&contradiction()).unwrap();
        assert_eq!(o.value, ratio(1, 2));
        // grid brute force of min(x, 1 − x)
        let grid_max = (0..=100)
            .map(|j| ratio(j, 100))
            .map(|x| x.clone().min(ratio(1, 1) - x))
            .max()
            .unwrap();
        assert_eq!(o.value, grid_max);
        assert_eq!(
            eval_sem(&contradiction(), &o.interpretation, &SemiringSpec::Fuzzy).unwrap(),
            SemiringValue::Real(ratio(1, 2))
        );
        assert_eq!(opt_fuzzy_val(&nnf("(and false (var 1))")).unwrap(), ratio(0, 1));
    }

    #[test]
    fn tropical_examples() {
        assert_eq!(tropical_adapt(&ratio(1, 1)).unwrap().cost, 0.0);
        assert!((tropical_adapt(&ratio(1, 4)).unwrap().cost - 4f64.ln()).abs() < 1e-15);
        assert_eq!(tropical_adapt(&ratio(0, 1)).unwrap().cost, f64::INFINITY);
        assert!(tropical_adapt(&ratio(3, 2)).is_err());
        let t = opt_tropical(&worked_example(), SolverConfig::default()).unwrap();
        assert_eq!(t.exact, ratio(1, 4));
    }
}
