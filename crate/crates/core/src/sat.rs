//! Boolean satisfiability: DPLL with unit propagation for CNF-shaped trees,
//! and a consistent-proof-tree search for general NNF.

use crate::error::{Error, Result};
use crate::exact::DEFAULT_MAX_TREES;
use crate::formula::{CnfFormula, Formula, Literal};
use crate::search::{Consistent, TreeSearch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// `model[i]` is the value of `x_{i+1}`.
    pub model: Option<Vec<bool>>,
}

impl SatResult {
    fn sat(model: Vec<bool>) -> Self {
        SatResult {
            satisfiable: true,
            model: Some(model),
        }
    }

    fn unsat() -> Self {
        SatResult {
            satisfiable: false,
            model: None,
        }
    }
}

pub fn sat_check(phi: &Formula) -> Result<SatResult> {
    sat_check_capped(phi, DEFAULT_MAX_TREES)
}

/// `max_nodes` caps DPLL decisions or proof-tree search nodes.
pub fn sat_check_capped(phi: &Formula, max_nodes: u64) -> Result<SatResult> {
    if let Some(cnf) = phi.as_cnf() {
        let mut result = dpll(&cnf, max_nodes)?;
        if let Some(model) = result.model.as_mut() {
            model.resize(phi.var_count() as usize, false);
        }
        return Ok(result);
    }
    let mut search = TreeSearch::new(phi, max_nodes);
    Ok(match search.find(&mut Consistent, &[])? {
        Some(found) => SatResult::sat(
            (1..=phi.var_count()).map(|v| found.profile.pos(v) > 0).collect(),
        ),
        None => SatResult::unsat(),
    })
}

pub fn dpll(cnf: &CnfFormula, max_decisions: u64) -> Result<SatResult> {
    let mut solver = Dpll {
        clauses: cnf.clauses(),
        assignment: vec![None; cnf.var_count() as usize],
        trail: Vec::new(),
        decisions_left: max_decisions,
        max_decisions,
    };
    Ok(if solver.solve()? {
        SatResult::sat(solver.assignment.iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        SatResult::unsat()
    })
}

struct Dpll<'a> {
    clauses: &'a [Vec<Literal>],
    assignment: Vec<Option<bool>>,
    trail: Vec<u32>,
    decisions_left: u64,
    max_decisions: u64,
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open(Literal),
}

impl Dpll<'_> {
    fn value(&self, lit: Literal) -> Option<bool> {
        self.assignment[lit.var() as usize - 1].map(|v| v != lit.is_negated())
    }

    fn assign(&mut self, lit: Literal) {
        self.assignment[lit.var() as usize - 1] = Some(!lit.is_negated());
        self.trail.push(lit.var());
    }

    fn undo_to(&mut self, len: usize) {
        for var in self.trail.drain(len..) {
            self.assignment[var as usize - 1] = None;
        }
    }

    fn clause_state(&self, clause: &[Literal]) -> ClauseState {
        let mut unassigned = None;
        let mut count = 0;
        for &lit in clause {
            match self.value(lit) {
                Some(true) => return ClauseState::Satisfied,
                Some(false) => {}
                None => {
                    count += 1;
                    unassigned.get_or_insert(lit);
                }
            }
        }
        match (count, unassigned) {
            (0, _) => ClauseState::Conflict,
            (1, Some(l)) => ClauseState::Unit(l),
            (_, Some(l)) => ClauseState::Open(l),
            _ => unreachable!(),
        }
    }

    /// Propagates units to a fixpoint; returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for clause in self.clauses {
                match self.clause_state(clause) {
                    ClauseState::Conflict => return false,
                    ClauseState::Unit(l) => {
                        self.assign(l);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&mut self) -> Result<bool> {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return Ok(false);
        }
        let branch = self.clauses.iter().find_map(|c| match self.clause_state(c) {
            ClauseState::Open(l) => Some(l),
            _ => None,
        });
        let Some(lit) = branch else {
            return Ok(true);
        };
        if self.decisions_left == 0 {
            return Err(Error::Resource(format!(
                "DPLL exceeded {} decisions",
                self.max_decisions
            )));
        }
        self.decisions_left -= 1;
        for choice in [lit, lit.negate()] {
            let inner = self.trail.len();
            self.assign(choice);
            if self.solve()? {
                return Ok(true);
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{clause_satisfied, cnf_to_formula, parse_dimacs, parse_nnf};

    #[test]
    fn worked_example_is_unsat() {
        let f = parse_nnf(b"(and (var 1) (var 2) (or (not 1) (not 2)))").unwrap();
        assert_eq!(sat_check(&f).unwrap(), SatResult::unsat());
        let cnf = parse_dimacs(b"p cnf 2 3\n1 0\n2 0\n-1 -2 0\n").unwrap();
        assert!(!sat_check(&cnf_to_formula(&cnf)).unwrap().satisfiable);
    }

    #[test]
    fn unit_is_sat() {
        let f = parse_nnf(b"(var 1)").unwrap();
        assert_eq!(sat_check(&f).unwrap(), SatResult::sat(vec![true]));
    }

    #[test]
    fn model_satisfies() {
        let f = parse_nnf(b"(and (or (var 1) (var 2)) (or (not 1) (var 2)))").unwrap();
        let r = sat_check(&f).unwrap();
        let model = r.model.unwrap();
        assert!(model[1]);
    }

    #[test]
    fn general_nnf_uses_tree_search() {
        let f = parse_nnf(b"(or (and (var 1) (not 1)) (and (or (not 2) false) (var 3)))").unwrap();
        assert!(f.as_cnf().is_none());
        assert_eq!(sat_check(&f).unwrap(), SatResult::sat(vec![false, false, true]));
        let g = parse_nnf(b"(or (and (var 1) (not 1)) (and false (var 3)))").unwrap();
        assert!(!sat_check(&g).unwrap().satisfiable);
        assert!(sat_check(&parse_nnf(b"true").unwrap()).unwrap().satisfiable);
        assert!(!sat_check(&parse_nnf(b"false").unwrap()).unwrap().satisfiable);
    }

    #[test]
    fn dpll_agrees_with_enumeration() {
        // pigeonhole-ish and random small instances, checked against all assignments
        let cases: &[&[&[i64]]] = &[
            &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]],
            &[&[1, 2, 3], &[-1, -2], &[-2, -3], &[-1, -3], &[2]],
            &[&[1], &[-1, 2], &[-2, 3], &[-3, 4], &[-4]],
            &[&[1, -3], &[2, 3], &[-1, -2]],
        ];
        for clauses in cases {
            let cnf = CnfFormula::from_dimacs_clauses(4, clauses).unwrap();
            let brute = (0..16u32).any(|bits| {
                let a: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
                cnf.clauses().iter().all(|c| clause_satisfied(c, &a))
            });
            let r = dpll(&cnf, 1000).unwrap();
            assert_eq!(r.satisfiable, brute);
            if let Some(m) = r.model {
                assert_eq!(cnf.satisfied_count(&m), cnf.clause_count());
            }
        }
    }

    #[test]
    fn decision_cap() {
        let cnf = CnfFormula::from_dimacs_clauses(3, &[&[1, 2, 3], &[-1, -2, -3]]).unwrap();
        assert!(matches!(dpll(&cnf, 0), Err(Error::Resource(_))));
    }
}
