//! Approximation of `optConfVal` on CNF formulas: the interpretation seeded
//! by a Boolean assignment, the `e^{−Σ 1/k_i}` random-interpretation bound,
//! and its derandomization by conditional expectations.
//!
//! For a clause `C` under uniform independent `π` on its `k` unfixed
//! literals, with `α` the largest already-fixed literal value (0 if none),
//! `E[log max(α, U_1, …, U_k)] = −(1/k)(1 − α^k)`, and `log α` when `k = 0`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Literal};
use crate::rational::{from_biguints, to_f64, BigRational};
use crate::semiring::Interpretation;

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_REFINE_ITERS: usize = 40;
pub const DEFAULT_TOL: f64 = 1e-6;
const REFINE_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SeededInterpretation {
    pub interpretation: Interpretation,
    /// `(r/m)^r ((m−r)/m)^{m−r}`, a lower bound on `Conf(φ, π)`.
    pub guarantee: BigRational,
    pub satisfied: usize,
}

/// `π(x_i) = 1 − ε` for true variables and `ε` for false ones, where
/// `ε = (m − r)/m` and `r` counts the clauses the assignment satisfies.
pub fn interp_from_assignment(cnf: &CnfFormula, assignment: &[bool]) -> Result<SeededInterpretation> {
    let n = cnf.var_count() as usize;
    if assignment.len() != n {
        return Err(Error::Argument(format!(
            "assignment has {} values for {n} variables",
            assignment.len()
        )));
    }
    let m = cnf.clause_count();
    let r = cnf.satisfied_count(assignment);
    if r == 0 {
        return Err(Error::NoClauseSatisfied);
    }
    let eps = BigRational::new(((m - r) as i64).into(), (m as i64).into());
    let high = BigRational::one() - &eps;
    let values = assignment
        .iter()
        .map(|&b| if b { high.clone() } else { eps.clone() })
        .collect();
    let guarantee = pow(&high, r) * pow(&eps, m - r);
    Ok(SeededInterpretation {
        interpretation: Interpretation::real(values),
        guarantee,
        satisfied: r,
    })
}

fn pow(base: &BigRational, exp: usize) -> BigRational {
    // 0^0 = 1
    (0..exp).fold(BigRational::one(), |acc, _| acc * base)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomBound {
    /// `Σ_i 1/k_i`, exactly.
    pub exponent: BigRational,
    /// `e^{−Σ_i 1/k_i}`.
    pub value: f64,
}

pub fn random_bound(cnf: &CnfFormula) -> RandomBound {
    let exponent = cnf
        .clauses()
        .iter()
        .map(|c| from_biguints(BigUint::one(), BigUint::from(c.len())))
        .fold(BigRational::zero(), |acc, x| acc + x);
    let value = (-to_f64(&exponent)).exp();
    RandomBound { exponent, value }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerandomizeOutcome {
    pub interpretation: Interpretation,
    /// `π*(x_i)` as chosen, in floating point (the interpretation holds the
    /// same values exactly).
    pub values: Vec<f64>,
    /// `Conf(φ, π*)`, evaluated exactly.
    pub conf: BigRational,
    /// `E[log Conf]` before any variable is fixed, then after fixing each
    /// `x_1, …, x_n` in turn; the last entry is `log Conf(φ, π*)`.
    pub expectation_trace: Vec<f64>,
    /// `e^{−Σ 1/k_i}`.
    pub bound: f64,
    pub tol: f64,
}

impl DerandomizeOutcome {
    pub fn conf_f64(&self) -> f64 {
        to_f64(&self.conf)
    }
}

pub fn derandomize(cnf: &CnfFormula, grid: usize, refine_iters: usize) -> Result<DerandomizeOutcome> {
    if grid == 0 {
        return Err(Error::Argument("grid must be positive".into()));
    }
    let n = cnf.var_count() as usize;
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    let mut trace = vec![expectation(cnf, &fixed)];
    for var in 1..=n as u32 {
        let terms = ClauseTerms::new(cnf, &fixed, var);
        let p = terms.maximize(grid, refine_iters);
        fixed[var as usize - 1] = Some(p);
        trace.push(expectation(cnf, &fixed));
    }
    let values: Vec<f64> = fixed.into_iter().map(|p| p.unwrap_or(0.0)).collect();
    let exact: Vec<BigRational> = values
        .iter()
        .map(|&p| BigRational::from_float(p).expect("finite value in [0, 1]"))
        .collect();
    let interpretation = Interpretation::real(exact);
    let conf = exact_conf(cnf, &interpretation);
    Ok(DerandomizeOutcome {
        interpretation,
        values,
        conf,
        expectation_trace: trace,
        bound: random_bound(cnf).value,
        tol: DEFAULT_TOL,
    })
}

/// `Conf(φ, π) = Π_C max_{ℓ∈C} π(ℓ)` for a CNF and a real interpretation.
pub fn exact_conf(cnf: &CnfFormula, pi: &Interpretation) -> BigRational {
    cnf.clauses()
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| literal_value_exact(pi, *l))
                .max()
                .expect("clauses are non-empty")
        })
        .fold(BigRational::one(), |acc, v| acc * v)
}

fn literal_value_exact(pi: &Interpretation, lit: Literal) -> BigRational {
    let x = pi.real_value(lit.var()).cloned().unwrap_or_default();
    if lit.is_negated() {
        BigRational::one() - x
    } else {
        x
    }
}

fn literal_value(fixed: &[Option<f64>], lit: Literal) -> Option<f64> {
    fixed[lit.var() as usize - 1].map(|x| if lit.is_negated() { 1.0 - x } else { x })
}

/// `E[log max(α, U_1, …, U_k)]` for `k` independent uniform values.
pub fn clause_expectation(alpha: f64, unfixed: u32) -> f64 {
    if unfixed == 0 {
        alpha.ln()
    } else {
        let k = f64::from(unfixed);
        -(1.0 - alpha.powi(unfixed as i32)) / k
    }
}

/// `E[log Conf(φ, π)]` with the fixed prefix and uniform values elsewhere.
pub fn expectation(cnf: &CnfFormula, fixed: &[Option<f64>]) -> f64 {
    cnf.clauses()
        .iter()
        .map(|c| {
            let (alpha, unfixed) = clause_state(c, fixed, None);
            clause_expectation(alpha, unfixed)
        })
        .sum()
}

/// `(α, k′)` for a clause, leaving out the literal on `skip` if given.
fn clause_state(clause: &[Literal], fixed: &[Option<f64>], skip: Option<u32>) -> (f64, u32) {
    let mut alpha = 0.0f64;
    let mut unfixed = 0;
    for &lit in clause {
        if Some(lit.var()) == skip {
            continue;
        }
        match literal_value(fixed, lit) {
            Some(v) => alpha = alpha.max(v),
            None => unfixed += 1,
        }
    }
    (alpha, unfixed)
}

/// The part of `F_i(p)` that depends on `p`: clauses mentioning `x_i`.
/// Clauses avoiding `x_i` add a constant and do not move the maximizer.
struct ClauseTerms {
    // (α, k′, x_i occurs negated)
    terms: Vec<(f64, u32, bool)>,
}

impl ClauseTerms {
    fn new(cnf: &CnfFormula, fixed: &[Option<f64>], var: u32) -> Self {
        let terms = cnf
            .clauses()
            .iter()
            .filter_map(|c| {
                let lit = c.iter().find(|l| l.var() == var)?;
                let (alpha, unfixed) = clause_state(c, fixed, Some(var));
                Some((alpha, unfixed, lit.is_negated()))
            })
            .collect();
        ClauseTerms { terms }
    }

    fn eval(&self, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(alpha, k, negated)| {
                let x = if negated { 1.0 - p } else { p };
                clause_expectation(alpha.max(x), k)
            })
            .sum()
    }

    /// Best of breakpoints and grid, then golden-section refinement in the
    /// bracket around it. Ties go to the smallest `p`.
    fn maximize(&self, grid: usize, refine_iters: usize) -> f64 {
        let mut points: Vec<f64> = (0..=grid).map(|j| j as f64 / grid as f64).collect();
        for &(alpha, _, _) in &self.terms {
            points.push(alpha);
            points.push(1.0 - alpha);
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let values: Vec<f64> = points.iter().map(|&p| self.eval(p)).collect();
        let mut best = 0;
        for (i, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = i;
            }
        }
        let (p_best, v_best) = (points[best], values[best]);
        let lo = points[best.saturating_sub(1)];
        let hi = points[(best + 1).min(points.len() - 1)];
        if refine_iters > 0 && hi > lo {
            let (p, v) = self.golden_section(lo, hi, refine_iters);
            // accept only gains above rounding noise, keeping exact grid
            // and breakpoint maximizers stable
            if v > v_best + REFINE_MARGIN {
                return p;
            }
        }
        p_best
    }

    fn golden_section(&self, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (self.eval(c), self.eval(d));
        for _ in 0..iters {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.eval(d);
            }
        }
        if fc >= fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }
}

/// The assignment-seeded interpretation for the all-true assignment.
pub fn all_true_seed(cnf: &CnfFormula) -> Result<SeededInterpretation> {
    interp_from_assignment(cnf, &vec![true; cnf.var_count() as usize])
}
