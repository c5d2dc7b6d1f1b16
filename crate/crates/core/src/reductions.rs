//! The MaxSAT bridge: the `1/4^{m−r}` upper bound on `optConfVal`, the
//! reduction `φ ↦ φ′` with `optConfVal(φ′) = 1/4^{m−r}`, recovery of `r` from
//! that value, and MaxSAT-assignment extraction from an optimal
//! interpretation of `φ′`. An exhaustive MaxSAT oracle backs the checks.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Literal};
use crate::rational::{format_ratio, BigRational};
use crate::semiring::{Interpretation, SemiringValue};

/// Default cap on enumerated assignments (`2^24`, i.e. `n ≤ 24`).
pub const DEFAULT_MAX_ASSIGNMENTS: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSatResult {
    /// Maximum number of simultaneously satisfiable clauses.
    pub r: usize,
    /// Lexicographically smallest assignment satisfying `r` clauses
    /// (`x_1` most significant, false before true).
    pub assignment: Vec<bool>,
}

pub fn maxsat_exhaustive(cnf: &CnfFormula) -> Result<MaxSatResult> {
    maxsat_exhaustive_capped(cnf, DEFAULT_MAX_ASSIGNMENTS)
}

pub fn maxsat_exhaustive_capped(cnf: &CnfFormula, max_assignments: u64) -> Result<MaxSatResult> {
    let n = cnf.var_count();
    if n >= 64 || (1u64 << n) > max_assignments {
        return Err(Error::Resource(format!(
            "exhaustive MaxSAT over {n} variables exceeds {max_assignments} assignments"
        )));
    }
    // Bit (n − v) of the counter holds x_v, so counting up enumerates
    // assignments lexicographically with x_1 most significant.
    let bit = |lit: &Literal| 1u64 << (n - lit.var());
    let masks: Vec<(u64, u64)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), l| {
                if l.is_negated() {
                    (pos, neg | bit(l))
                } else {
                    (pos | bit(l), neg)
                }
            })
        })
        .collect();
    let m = masks.len();
    let mut best = (0usize, 0u64);
    let mut first = true;
    for a in 0..1u64 << n {
        let count = masks
            .iter()
            .filter(|&&(pos, neg)| a & pos != 0 || !a & neg != 0)
            .count();
        if first || count > best.0 {
            best = (count, a);
            first = false;
            if count == m {
                break;
            }
        }
    }
    Ok(MaxSatResult {
        r: best.0,
        assignment: (1..=n).map(|v| best.1 >> (n - v) & 1 == 1).collect(),
    })
}

/// `1/4^{m−r}`, the upper bound on `optConfVal` of a CNF with `m` clauses of
/// which at most `r` are simultaneously satisfiable.
pub fn conf_upper_bound(m: usize, r: usize) -> Result<BigRational> {
    if r > m {
        return Err(Error::Argument(format!(
            "satisfied clauses r = {r} exceeds clause count m = {m}"
        )));
    }
    let d = u32::try_from(m - r).map_err(|_| Error::Argument("m − r too large".into()))?;
    Ok(BigRational::new(BigUint::one().into(), BigUint::from(4u32).pow(d).into()))
}

/// `φ′ = (C_1 ∨ y_1) ∧ … ∧ (C_m ∨ y_m) ∧ ¬y_1 ∧ … ∧ ¬y_m` over `n + m`
/// variables, with `y_i = x_{y_offset + i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedInstance {
    pub phi_prime: CnfFormula,
    pub y_offset: u32,
    pub source_m: usize,
}

impl ReducedInstance {
    /// Variable index of `y_i` (1-based `i`).
    pub fn y_var(&self, i: usize) -> u32 {
        self.y_offset + i as u32
    }
}

pub fn reduce_to_optconf(cnf: &CnfFormula) -> ReducedInstance {
    let n = cnf.var_count();
    let m = cnf.clause_count();
    let y = |i: usize| n + i as u32 + 1;
    let widened = cnf.clauses().iter().enumerate().map(|(i, c)| {
        let mut clause = c.clone();
        clause.push(Literal::pos(y(i)));
        clause
    });
    let units = (0..m).map(|i| vec![Literal::neg(y(i))]);
    let phi_prime = CnfFormula::new(n + m as u32, widened.chain(units).collect())
        .expect("widened clauses stay valid");
    ReducedInstance {
        phi_prime,
        y_offset: n,
        source_m: m,
    }
}

/// Recovers `r = m − d` from `v = 4^{−d}` by exact integer matching.
pub fn maxsatval_from_confval(v: &BigRational, m: usize) -> Result<usize> {
    let malformed = || Error::MalformedReductionValue(format_ratio(v));
    if !v.numer().is_one() {
        return Err(malformed());
    }
    let mut denom = v.denom().to_biguint().ok_or_else(malformed)?;
    let four = BigUint::from(4u32);
    let mut d = 0usize;
    while !denom.is_one() {
        if (&denom % &four) != BigUint::zero() {
            return Err(malformed());
        }
        denom /= &four;
        d += 1;
    }
    m.checked_sub(d).ok_or_else(malformed)
}

/// `x_i` is false exactly when `π(x_i) = 0`.
pub fn extract_maxsat_assignment(pi: &Interpretation, inst: &ReducedInstance) -> Vec<bool> {
    (1..=inst.y_offset)
        .map(|v| match pi.get(v) {
            Some(SemiringValue::Real(x)) => !x.is_zero(),
            Some(SemiringValue::Level(a)) => *a != 0,
            None => true,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{opt_conf, opt_conf_val};
    use crate::formula::cnf_to_formula;
    use crate::rational::ratio;

    fn cnf(n: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn worked_example() -> CnfFormula {
        cnf(2, &[&[1], &[2], &[-1, -2]])
    }

    #[test]
    fn maxsat_examples() {
        let r = maxsat_exhaustive(&worked_example()).unwrap();
        assert_eq!(r.r, 2);
        // x1=F,x2=T satisfies clauses 2 and 3; it precedes x1=T,x2=F
        assert_eq!(r.assignment, vec![false, true]);
        assert_eq!(worked_example().satisfied_count(&[true, true]), 2);

        let r = maxsat_exhaustive(&cnf(1, &[&[1]])).unwrap();
        assert_eq!((r.r, r.assignment), (1, vec![true]));

        let r = maxsat_exhaustive(&cnf(2, &[&[1], &[-1], &[1, 2]])).unwrap();
        assert_eq!(r.r, 2);
        assert_eq!(r.assignment, vec![false, true]);
    }

    #[test]
    fn maxsat_matches_naive_count() {
        let f = cnf(4, &[&[1, -2], &[2, 3], &[-1, -3], &[4], &[-4, 1], &[-2, -3, -4]]);
        let r = maxsat_exhaustive(&f).unwrap();
        let mut naive = 0;
        for bits in 0..16u32 {
            let a: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            naive = naive.max(f.satisfied_count(&a));
        }
        assert_eq!(r.r, naive);
        assert_eq!(f.satisfied_count(&r.assignment), r.r);
    }

    #[test]
    fn maxsat_cap() {
        let f = cnf(3, &[&[1, 2, 3]]);
        assert!(matches!(maxsat_exhaustive_capped(&f, 4), Err(Error::Resource(_))));
        assert!(maxsat_exhaustive_capped(&f, 8).is_ok());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(conf_upper_bound(3, 2).unwrap(), ratio(1, 4));
        assert_eq!(conf_upper_bound(5, 5).unwrap(), ratio(1, 1));
        assert_eq!(conf_upper_bound(4, 1).unwrap(), ratio(1, 64));
        assert!(matches!(conf_upper_bound(2, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn reduction_shape() {
        let inst = reduce_to_optconf(&cnf(1, &[&[1], &[-1]]));
        assert_eq!(inst.y_offset, 1);
        assert_eq!(inst.source_m, 2);
        assert_eq!(
            inst.phi_prime,
            cnf(3, &[&[1, 2], &[-1, 3], &[-2], &[-3]])
        );
        assert_eq!(inst.y_var(2), 3);
    }

    #[test]
    fn reduction_values() {
        let cases = [
            (cnf(1, &[&[1], &[-1]]), ratio(1, 4)),
            (cnf(1, &[&[1]]), ratio(1, 1)),
            (worked_example(), ratio(1, 4)),
        ];
        for (source, expected) in cases {
            let inst = reduce_to_optconf(&source);
            let v = opt_conf_val(&cnf_to_formula(&inst.phi_prime)).unwrap();
            assert_eq!(v, expected);
            let r = maxsat_exhaustive(&source).unwrap().r;
            assert_eq!(maxsatval_from_confval(&v, inst.source_m).unwrap(), r);
        }
    }

    #[test]
    fn value_recovery_examples() {
        assert_eq!(maxsatval_from_confval(&ratio(1, 4), 2).unwrap(), 1);
        assert_eq!(maxsatval_from_confval(&ratio(1, 1), 7).unwrap(), 7);
        assert_eq!(maxsatval_from_confval(&ratio(1, 16), 5).unwrap(), 3);
        for bad in [ratio(1, 8), ratio(3, 16), ratio(1, 2), ratio(0, 1)] {
            assert!(matches!(
                maxsatval_from_confval(&bad, 5),
                Err(Error::MalformedReductionValue(_))
            ));
        }
        // d > m cannot come from a reduced instance
        assert!(maxsatval_from_confval(&ratio(1, 64), 2).is_err());
    }

    #[test]
    fn extraction_examples() {
        let pi = Interpretation::real(vec![ratio(1, 2), ratio(0, 1), ratio(0, 1)]);
        let inst = reduce_to_optconf(&cnf(1, &[&[1], &[-1]]));
        assert_eq!(extract_maxsat_assignment(&pi, &inst), vec![true]);

        let inst = reduce_to_optconf(&cnf(1, &[&[1]]));
        let pi = Interpretation::real(vec![ratio(1, 1), ratio(0, 1)]);
        assert_eq!(extract_maxsat_assignment(&pi, &inst), vec![true]);

        let source = worked_example();
        let inst = reduce_to_optconf(&source);
        let phi = cnf_to_formula(&inst.phi_prime);
        let witness = opt_conf(&phi).unwrap();
        let a = extract_maxsat_assignment(&witness.interpretation, &inst);
        assert_eq!(source.satisfied_count(&a), 2);
    }
}
