//! Semiring carriers, negation functions, interpretations, and bottom-up
//! evaluation `Sem(φ, π)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{Formula, Node, NodeId};
use crate::rational::{format_ratio, is_unit_interval, BigRational};

/// The negation function `ℸ` applied to negated leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NegationFn {
    /// `ℸ(x) = 1 − x` on `[0, 1]`.
    OneMinus,
    /// Additive inverse modulo `k` on `[0..k]`, with `ℸ(0) = k` and
    /// `ℸ(k) = 0` so the map stays a bijection.
    Modular { k: u32 },
    /// Explicit table on `[0..k]`; `map[a] = ℸ(a)`.
    Table { map: Vec<u32> },
}

impl NegationFn {
    pub fn modular(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("k must be positive".into()));
        }
        Ok(NegationFn::Modular { k })
    }

    /// Checks that `map` is an involution on `[0..k]` (hence a bijection)
    /// with `ℸ(0) = k`.
    pub fn table(map: Vec<u32>) -> Result<Self> {
        let k = match map.len() {
            0 | 1 => return Err(Error::Argument("negation table needs k >= 1".into())),
            len => (len - 1) as u32,
        };
        for (a, &b) in map.iter().enumerate() {
            if b > k {
                return Err(Error::Argument(format!("ℸ({a}) = {b} is outside [0..{k}]")));
            }
            if map[b as usize] as usize != a {
                return Err(Error::Argument(format!("ℸ is not an involution at {a}")));
            }
        }
        if map[0] != k {
            return Err(Error::Argument(format!("ℸ(0) must be {k}, got {}", map[0])));
        }
        Ok(NegationFn::Table { map })
    }

    /// Carrier top for level negations; `None` for [`NegationFn::OneMinus`].
    pub fn level_top(&self) -> Option<u32> {
        match self {
            NegationFn::OneMinus => None,
            NegationFn::Modular { k } => Some(*k),
            NegationFn::Table { map } => Some((map.len() - 1) as u32),
        }
    }

    pub fn apply_level(&self, a: u32) -> u32 {
        match self {
            NegationFn::OneMinus => panic!("one-minus negation has no level form"),
            NegationFn::Modular { k } => {
                if a == 0 {
                    *k
                } else {
                    k - a
                }
            }
            NegationFn::Table { map } => map[a as usize],
        }
    }

    pub fn apply_real(&self, x: &BigRational) -> BigRational {
        match self {
            NegationFn::OneMinus => BigRational::one() - x,
            _ => panic!("level negation applied to a real value"),
        }
    }
}

/// The access-control semiring `A_k = ([0..k], max, min, 0, k)` with a
/// negation function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessSemiring {
    k: u32,
    negation: NegationFn,
}

impl AccessSemiring {
    pub fn modular(k: u32) -> Result<Self> {
        Ok(AccessSemiring {
            k,
            negation: NegationFn::modular(k)?,
        })
    }

    pub fn new(k: u32, negation: NegationFn) -> Result<Self> {
        if negation.level_top() != Some(k) {
            return Err(Error::Argument(format!(
                "negation does not act on [0..{k}]"
            )));
        }
        Ok(AccessSemiring { k, negation })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn negation(&self) -> &NegationFn {
        &self.negation
    }

    pub fn negate(&self, a: u32) -> u32 {
        self.negation.apply_level(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemiringSpec {
    /// `([0,1], max, ·, 0, 1)` with `ℸ(x) = 1 − x`.
    Viterbi,
    /// `([0,1], max, min, 0, 1)` with `ℸ(x) = 1 − x`.
    Fuzzy,
    Access(AccessSemiring),
}

impl fmt::Display for SemiringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringSpec::Viterbi => f.write_str("viterbi"),
            SemiringSpec::Fuzzy => f.write_str("fuzzy"),
            SemiringSpec::Access(sr) => match sr.negation() {
                NegationFn::Table { .. } => write!(f, "access(k={}, negation=table)", sr.k()),
                _ => write!(f, "access(k={}, negation=modular)", sr.k()),
            },
        }
    }
}

/// A carrier element: a rational in `[0,1]` for Viterbi/fuzzy, or an
/// integer level for access semirings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemiringValue {
    Real(BigRational),
    Level(u32),
}

impl SemiringValue {
    pub fn as_real(&self) -> Option<&BigRational> {
        match self {
            SemiringValue::Real(r) => Some(r),
            SemiringValue::Level(_) => None,
        }
    }

    pub fn as_level(&self) -> Option<u32> {
        match self {
            SemiringValue::Level(a) => Some(*a),
            SemiringValue::Real(_) => None,
        }
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringValue::Real(r) => f.write_str(&format_ratio(r)),
            SemiringValue::Level(a) => write!(f, "{a}"),
        }
    }
}

/// A total map `π` from variables `1..=n` to carrier values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    values: Vec<SemiringValue>,
}

impl Interpretation {
    pub fn new(values: Vec<SemiringValue>) -> Self {
        Interpretation { values }
    }

    pub fn real(values: Vec<BigRational>) -> Self {
        Self::new(values.into_iter().map(SemiringValue::Real).collect())
    }

    pub fn levels(values: Vec<u32>) -> Self {
        Self::new(values.into_iter().map(SemiringValue::Level).collect())
    }

    pub fn var_count(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of variable `var` (1-based).
    pub fn get(&self, var: u32) -> Option<&SemiringValue> {
        self.values.get((var as usize).checked_sub(1)?)
    }

    pub fn real_value(&self, var: u32) -> Option<&BigRational> {
        self.get(var).and_then(SemiringValue::as_real)
    }

    pub fn values(&self) -> &[SemiringValue] {
        &self.values
    }

    /// Checks every value lies in the carrier of `semiring`.
    pub fn check_carrier(&self, semiring: &SemiringSpec) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            let ok = match (semiring, v) {
                (SemiringSpec::Viterbi | SemiringSpec::Fuzzy, SemiringValue::Real(r)) => {
                    is_unit_interval(r)
                }
                (SemiringSpec::Access(sr), SemiringValue::Level(a)) => *a <= sr.k(),
                _ => false,
            };
            if !ok {
                return Err(Error::Domain(format!(
                    "π(x{}) = {v} is outside the {semiring} carrier",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// `Sem(φ, π)` computed bottom-up: variables read `π`, negated variables read
/// `ℸ(π(x))`, OR is semiring addition, AND semiring multiplication.
/// Arithmetic is exact.
pub fn eval_sem(phi: &Formula, pi: &Interpretation, semiring: &SemiringSpec) -> Result<SemiringValue> {
    if pi.var_count() < phi.var_count() {
        return Err(Error::Domain(format!(
            "interpretation covers {} variables, formula has {}",
            pi.var_count(),
            phi.var_count()
        )));
    }
    pi.check_carrier(semiring)?;
    Ok(match semiring {
        SemiringSpec::Viterbi => SemiringValue::Real(eval_real(phi, phi.root(), pi, true)),
        SemiringSpec::Fuzzy => SemiringValue::Real(eval_real(phi, phi.root(), pi, false)),
        SemiringSpec::Access(sr) => SemiringValue::Level(eval_level(phi, phi.root(), pi, sr)),
    })
}

/// Viterbi value of a formula under a rational interpretation.
pub fn conf(phi: &Formula, pi: &Interpretation) -> Result<BigRational> {
    match eval_sem(phi, pi, &SemiringSpec::Viterbi)? {
        SemiringValue::Real(r) => Ok(r),
        SemiringValue::Level(_) => unreachable!(),
    }
}

fn eval_real(phi: &Formula, id: NodeId, pi: &Interpretation, product: bool) -> BigRational {
    match phi.node(id) {
        Node::Lit(l) => {
            let x = pi.real_value(l.var()).expect("checked carrier").clone();
            if l.is_negated() {
                NegationFn::OneMinus.apply_real(&x)
            } else {
                x
            }
        }
        Node::Const(true) => BigRational::one(),
        Node::Const(false) => BigRational::zero(),
        Node::Or(children) => children
            .iter()
            .map(|&c| eval_real(phi, c, pi, product))
            .max()
            .expect("non-empty"),
        Node::And(children) => {
            let values = children.iter().map(|&c| eval_real(phi, c, pi, product));
            if product {
                values.fold(BigRational::one(), |acc, v| acc * v)
            } else {
                values.min().expect("non-empty")
            }
        }
    }
}

fn eval_level(phi: &Formula, id: NodeId, pi: &Interpretation, sr: &AccessSemiring) -> u32 {
    match phi.node(id) {
        Node::Lit(l) => {
            let a = pi.get(l.var()).and_then(SemiringValue::as_level).expect("checked carrier");
            if l.is_negated() {
                sr.negate(a)
            } else {
                a
            }
        }
        Node::Const(true) => sr.k(),
        Node::Const(false) => 0,
        Node::Or(children) => children.iter().map(|&c| eval_level(phi, c, pi, sr)).max().expect("non-empty"),
        Node::And(children) => children.iter().map(|&c| eval_level(phi, c, pi, sr)).min().expect("non-empty"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_nnf;
    use crate::rational::ratio;

    fn example() -> Formula {
        parse_nnf(b"(and (var 1) (var 2) (or (not 1) (not 2)))").unwrap()
    }

    #[test]
    fn viterbi_worked_example() {
        let pi = Interpretation::real(vec![ratio(1, 1), ratio(1, 2)]);
        assert_eq!(conf(&example(), &pi).unwrap(), ratio(1, 4));
    }

    #[test]
    fn viterbi_identity() {
        let f = parse_nnf(b"(var 1)").unwrap();
        let pi = Interpretation::real(vec![ratio(1, 1)]);
        assert_eq!(conf(&f, &pi).unwrap(), ratio(1, 1));
    }

    #[test]
    fn access_modular_negation() {
        // brute-force the table: ℸ(a) is the unique b in [0..4] with a + b ≡ 0 (mod 4),
        // picking b = 4 for a = 0.
        let sr = AccessSemiring::modular(4).unwrap();
        for a in 0..=4u32 {
            let b = sr.negate(a);
            assert_eq!((a + b) % 4, 0);
            assert_eq!(sr.negate(b), a);
        }
        let f = parse_nnf(b"(not 1)").unwrap();
        let v = eval_sem(&f, &Interpretation::levels(vec![3]), &SemiringSpec::Access(sr)).unwrap();
        assert_eq!(v, SemiringValue::Level(1));
    }

    #[test]
    fn fuzzy_uses_min() {
        let pi = Interpretation::real(vec![ratio(1, 1), ratio(1, 3)]);
        let v = eval_sem(&example(), &pi, &SemiringSpec::Fuzzy).unwrap();
        assert_eq!(v, SemiringValue::Real(ratio(1, 3)));
    }

    #[test]
    fn constants_evaluate_to_bounds() {
        let f = parse_nnf(b"(or (and true (var 1)) false)").unwrap();
        let pi = Interpretation::real(vec![ratio(2, 3)]);
        assert_eq!(conf(&f, &pi).unwrap(), ratio(2, 3));
        let sr = AccessSemiring::modular(5).unwrap();
        let g = parse_nnf(b"(and true (or false (var 1)))").unwrap();
        let v = eval_sem(&g, &Interpretation::levels(vec![2]), &SemiringSpec::Access(sr)).unwrap();
        assert_eq!(v, SemiringValue::Level(2));
    }

    #[test]
    fn domain_errors() {
        let f = parse_nnf(b"(var 1)").unwrap();
        let bad = Interpretation::real(vec![ratio(3, 2)]);
        assert!(matches!(conf(&f, &bad), Err(Error::Domain(_))));
        let short = Interpretation::real(vec![]);
        assert!(matches!(conf(&f, &short), Err(Error::Domain(_))));
        let sr = AccessSemiring::modular(2).unwrap();
        let over = Interpretation::levels(vec![3]);
        assert!(eval_sem(&f, &over, &SemiringSpec::Access(sr.clone())).is_err());
        let wrong_kind = Interpretation::real(vec![ratio(1, 2)]);
        assert!(eval_sem(&f, &wrong_kind, &SemiringSpec::Access(sr)).is_err());
    }

    #[test]
    fn negation_table_validation() {
        assert!(NegationFn::table(vec![3, 2, 1, 0]).is_ok());
        assert!(NegationFn::table(vec![3, 1, 2, 0]).is_ok());
        // not an involution
        assert!(NegationFn::table(vec![3, 2, 0, 1]).is_err());
        // ℸ(0) must be the top element
        assert!(NegationFn::table(vec![1, 0, 3, 2]).is_err());
        assert!(NegationFn::table(vec![5, 0]).is_err());
        assert!(NegationFn::modular(0).is_err());
        assert!(AccessSemiring::new(4, NegationFn::table(vec![2, 1, 0]).unwrap()).is_err());
    }

    #[test]
    fn negation_invariants_hold() {
        for k in 1..=12 {
            let neg = NegationFn::modular(k).unwrap();
            assert_eq!(neg.apply_level(0), k);
            for a in 0..=k {
                assert_eq!(neg.apply_level(neg.apply_level(a)), a);
            }
        }
        for d in 1..=20 {
            for p in 0..=d {
                let x = ratio(p, d);
                let neg = NegationFn::OneMinus;
                assert_eq!(neg.apply_real(&neg.apply_real(&x)), x);
            }
        }
        assert_eq!(NegationFn::OneMinus.apply_real(&ratio(0, 1)), ratio(1, 1));
    }
}
