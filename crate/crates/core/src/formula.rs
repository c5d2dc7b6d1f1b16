//! Formula trees in negation normal form, CNF formulas, and their text
//! formats (DIMACS and an s-expression NNF syntax).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A literal `x_i` or `¬x_i`. Variables are numbered from 1.
///
/// The ordering is the canonical tie-break order
/// `x_1 < ¬x_1 < x_2 < ¬x_2 < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal { var, negated: true }
    }

    /// From a DIMACS-style signed integer.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        let var = u32::try_from(value.unsigned_abs()).ok()?;
        (var >= 1).then_some(Literal {
            var,
            negated: value < 0,
        })
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    fn key(self) -> u64 {
        2 * u64::from(self.var) + u64::from(self.negated)
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Lit(Literal),
    Const(bool),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
}

/// A rooted NNF formula tree. Nodes live in an arena; children always have
/// smaller ids than their parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    nodes: Vec<Node>,
    root: NodeId,
    var_count: u32,
    literal_count: usize,
    clause_count: Option<usize>,
}

impl Formula {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of variables `n`; variable indices lie in `1..=n`.
    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    /// Total literal occurrences.
    pub fn literal_count(&self) -> usize {
        self.literal_count
    }

    /// Clause count when this tree was built from a CNF formula.
    pub fn clause_count(&self) -> Option<usize> {
        self.clause_count
    }

    /// The size `m`: clause count for CNF-derived trees, literal occurrences
    /// otherwise.
    pub fn size(&self) -> usize {
        self.clause_count.unwrap_or(self.literal_count)
    }

    pub fn or_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Or(_)))
            .count()
    }

    /// Widens the variable range to `1..=n`. Fails if a literal mentions a
    /// variable above `n`.
    pub fn with_var_count(mut self, n: u32) -> Result<Self> {
        let max = self.max_var();
        if n < max {
            return Err(Error::Argument(format!(
                "formula mentions x{max} but var_count is {n}"
            )));
        }
        self.var_count = n;
        Ok(self)
    }

    fn max_var(&self) -> u32 {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Lit(l) => Some(l.var()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn has_constants(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Const(_)))
    }

    /// The CNF view of an AND-of-ORs tree without constants, if this tree has
    /// that shape.
    pub fn as_cnf(&self) -> Option<CnfFormula> {
        let clause_of = |id: NodeId| -> Option<Vec<Literal>> {
            match &self.nodes[id] {
                Node::Lit(l) => Some(vec![*l]),
                Node::Or(children) => children
                    .iter()
                    .map(|&c| match self.nodes[c] {
                        Node::Lit(l) => Some(l),
                        _ => None,
                    })
                    .collect(),
                _ => None,
            }
        };
        let clauses = match &self.nodes[self.root] {
            Node::And(children) => children
                .iter()
                .map(|&c| clause_of(c))
                .collect::<Option<Vec<_>>>()?,
            _ => vec![clause_of(self.root)?],
        };
        CnfFormula::new(self.var_count.max(1), clauses).ok()
    }

    /// Structural equality of the trees, ignoring arena layout and size
    /// bookkeeping.
    pub fn same_tree(&self, other: &Formula) -> bool {
        fn eq(a: &Formula, x: NodeId, b: &Formula, y: NodeId) -> bool {
            match (&a.nodes[x], &b.nodes[y]) {
                (Node::Lit(l), Node::Lit(k)) => l == k,
                (Node::Const(p), Node::Const(q)) => p == q,
                (Node::And(xs), Node::And(ys)) | (Node::Or(xs), Node::Or(ys)) => {
                    xs.len() == ys.len() && xs.iter().zip(ys).all(|(&c, &d)| eq(a, c, b, d))
                }
                _ => false,
            }
        }
        eq(self, self.root, other, other.root)
    }

    /// Renders the tree in the NNF s-expression syntax accepted by
    /// [`parse_nnf`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_node(self.root, &mut out);
        out
    }

    fn render_node(&self, id: NodeId, out: &mut String) {
        match &self.nodes[id] {
            Node::Lit(l) if l.is_negated() => out.push_str(&format!("(not {})", l.var())),
            Node::Lit(l) => out.push_str(&format!("(var {})", l.var())),
            Node::Const(true) => out.push_str("true"),
            Node::Const(false) => out.push_str("false"),
            Node::And(children) | Node::Or(children) => {
                out.push_str(if matches!(self.nodes[id], Node::And(_)) {
                    "(and"
                } else {
                    "(or"
                });
                for &c in children {
                    out.push(' ');
                    self.render_node(c, out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Incremental construction of a [`Formula`]. Children must be added before
/// their parents.
#[derive(Default, Debug)]
pub struct FormulaBuilder {
    nodes: Vec<Node>,
}

impl FormulaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lit(&mut self, lit: Literal) -> NodeId {
        self.push(Node::Lit(lit))
    }

    pub fn var(&mut self, var: u32) -> NodeId {
        self.lit(Literal::pos(var))
    }

    pub fn not(&mut self, var: u32) -> NodeId {
        self.lit(Literal::neg(var))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(Node::Const(value))
    }

    pub fn and(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Node::And(children))
    }

    pub fn or(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Node::Or(children))
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Validates the tree under `root`. `var_count` defaults to the largest
    /// variable mentioned.
    pub fn finish(self, root: NodeId) -> Result<Formula> {
        if root >= self.nodes.len() {
            return Err(Error::Argument("root is not a node".into()));
        }
        let mut literal_count = 0;
        let mut max_var = 0;
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Lit(l) => {
                    if l.var() == 0 {
                        return Err(Error::Argument("variable index 0".into()));
                    }
                    max_var = max_var.max(l.var());
                    literal_count += 1;
                }
                Node::Const(_) => {}
                Node::And(children) | Node::Or(children) => {
                    if children.is_empty() {
                        return Err(Error::Argument(format!("node {id} has no children")));
                    }
                    if children.iter().any(|&c| c >= id) {
                        return Err(Error::Argument(format!(
                            "node {id} has a child that is not built before it"
                        )));
                    }
                }
            }
        }
        let mut formula = Formula {
            nodes: self.nodes,
            root,
            var_count: max_var,
            literal_count: 0,
            clause_count: None,
        };
        formula.literal_count = formula.count_reachable_literals(root);
        debug_assert!(formula.literal_count <= literal_count);
        Ok(formula)
    }
}

impl Formula {
    fn count_reachable_literals(&self, id: NodeId) -> usize {
        match &self.nodes[id] {
            Node::Lit(_) => 1,
            Node::Const(_) => 0,
            Node::And(cs) | Node::Or(cs) => cs
                .iter()
                .map(|&c| self.count_reachable_literals(c))
                .sum(),
        }
    }
}

/// A CNF formula `C_1 ∧ … ∧ C_m`. Each clause is a non-empty, duplicate-free,
/// non-tautological set of literals kept in canonical literal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    clauses: Vec<Vec<Literal>>,
    var_count: u32,
}

impl CnfFormula {
    pub fn new(var_count: u32, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Argument("CNF formula has no clauses".into()));
        }
        let clauses = clauses
            .into_iter()
            .enumerate()
            .map(|(i, clause)| {
                normalize_clause(clause, var_count)
                    .map_err(|msg| Error::Argument(format!("clause {}: {msg}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CnfFormula { clauses, var_count })
    }

    pub fn from_dimacs_clauses(var_count: u32, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| {
                        Literal::from_dimacs(v)
                            .ok_or_else(|| Error::Argument(format!("bad literal {v}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(var_count, clauses)
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses satisfied by a Boolean assignment (`assignment[i]`
    /// is the value of `x_{i+1}`; missing entries read as false).
    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| clause_satisfied(c, assignment))
            .count()
    }

    /// Serializes as DIMACS CNF.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

pub(crate) fn clause_satisfied(clause: &[Literal], assignment: &[bool]) -> bool {
    clause.iter().any(|l| {
        let value = assignment
            .get(l.var() as usize - 1)
            .copied()
            .unwrap_or(false);
        value != l.is_negated()
    })
}

fn normalize_clause(mut clause: Vec<Literal>, var_count: u32) -> Result<Vec<Literal>, String> {
    if clause.is_empty() {
        return Err("empty clause".into());
    }
    if let Some(l) = clause.iter().find(|l| l.var() == 0 || l.var() > var_count) {
        return Err(format!(
            "variable index {} out of range 1..={var_count}",
            l.var()
        ));
    }
    clause.sort();
    clause.dedup();
    if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
        return Err("tautological clause".into());
    }
    Ok(clause)
}

/// Parses standard DIMACS CNF.
pub fn parse_dimacs(text: &[u8]) -> Result<CnfFormula> {
    let text = std::str::from_utf8(text).map_err(|_| Error::parse(0, "input is not UTF-8"))?;
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse::<u32>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(
                parsed.ok_or_else(|| Error::parse(line_no, "malformed header, expected 'p cnf n m'"))?,
            );
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::parse(line_no, "clause before header"))?;
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid literal {token:?}")))?;
            if value == 0 {
                let clause = std::mem::take(&mut current);
                let clause = normalize_clause(clause, n).map_err(|msg| Error::parse(line_no, msg))?;
                clauses.push(clause);
                continue;
            }
            if value.unsigned_abs() > u64::from(n) {
                return Err(Error::parse(
                    line_no,
                    format!("variable index {} exceeds declared {n}", value.unsigned_abs()),
                ));
            }
            current.extend(Literal::from_dimacs(value));
        }
    }

    let (n, m) = header.ok_or_else(|| Error::parse(last_line, "missing 'p cnf' header"))?;
    if !current.is_empty() {
        return Err(Error::parse(last_line, "unterminated clause"));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    if clauses.is_empty() {
        return Err(Error::parse(last_line, "formula has no clauses"));
    }
    Ok(CnfFormula {
        clauses,
        var_count: n,
    })
}

/// The AND-of-ORs tree of a CNF formula. Unit clauses still get an OR node.
pub fn cnf_to_formula(cnf: &CnfFormula) -> Formula {
    let mut b = FormulaBuilder::new();
    let ors: Vec<NodeId> = cnf
        .clauses
        .iter()
        .map(|clause| {
            let lits = clause.iter().map(|&l| b.lit(l)).collect();
            b.or(lits)
        })
        .collect();
    let root = b.and(ors);
    let mut formula = b.finish(root).expect("CNF invariants give a valid tree");
    formula.var_count = cnf.var_count;
    formula.clause_count = Some(cnf.clauses.len());
    formula
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(Token, usize)> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let mut atom = String::new();
        let flush = |atom: &mut String, tokens: &mut Vec<(Token, usize)>| {
            if !atom.is_empty() {
                tokens.push((Token::Atom(std::mem::take(atom)), idx + 1));
            }
        };
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    flush(&mut atom, &mut tokens);
                    let tok = if ch == '(' { Token::Open } else { Token::Close };
                    tokens.push((tok, idx + 1));
                }
                c if c.is_whitespace() => flush(&mut atom, &mut tokens),
                c => atom.push(c),
            }
        }
        flush(&mut atom, &mut tokens);
    }
    tokens
}

struct NnfParser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    builder: FormulaBuilder,
}

impl NnfParser {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(0, |t| t.1)
    }

    fn next(&mut self) -> Result<Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .map(|t| t.0.clone())
            .ok_or_else(|| Error::parse(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect_close(&mut self) -> Result<()> {
        let line = self.line();
        match self.next()? {
            Token::Close => Ok(()),
            other => Err(Error::parse(line, format!("expected ')', found {other:?}"))),
        }
    }

    fn index(&mut self) -> Result<u32> {
        let line = self.line();
        match self.next()? {
            Token::Atom(a) => match a.parse::<u32>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Error::parse(line, format!("unbound variable index {a:?}"))),
            },
            other => Err(Error::parse(line, format!("expected variable index, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<NodeId> {
        let line = self.line();
        match self.next()? {
            Token::Atom(a) if a == "true" => Ok(self.builder.constant(true)),
            Token::Atom(a) if a == "false" => Ok(self.builder.constant(false)),
            Token::Atom(a) => Err(Error::parse(line, format!("unknown token {a:?}"))),
            Token::Close => Err(Error::parse(line, "unexpected ')'")),
            Token::Open => {
                let head = match self.next()? {
                    Token::Atom(a) => a,
                    other => {
                        return Err(Error::parse(line, format!("expected operator, found {other:?}")))
                    }
                };
                let id = match head.as_str() {
                    "var" => {
                        let v = self.index()?;
                        self.builder.var(v)
                    }
                    "not" => self.negation(line)?,
                    "and" | "or" => {
                        let mut children = Vec::new();
                        while !matches!(self.tokens.get(self.pos), Some((Token::Close, _)) | None) {
                            children.push(self.expr()?);
                        }
                        if children.is_empty() {
                            return Err(Error::parse(line, format!("'{head}' needs at least one child")));
                        }
                        if head == "and" {
                            self.builder.and(children)
                        } else {
                            self.builder.or(children)
                        }
                    }
                    other => return Err(Error::parse(line, format!("unknown token {other:?}"))),
                };
                self.expect_close()?;
                Ok(id)
            }
        }
    }

    // `(not I)` or `(not (var I))`; anything else under a negation breaks NNF.
    fn negation(&mut self, line: usize) -> Result<NodeId> {
        match self.tokens.get(self.pos).map(|t| &t.0) {
            Some(Token::Open) => {
                let is_var = matches!(
                    self.tokens.get(self.pos + 1).map(|t| &t.0),
                    Some(Token::Atom(a)) if a == "var"
                );
                if !is_var {
                    return Err(Error::parse(line, "negation applied to a non-leaf"));
                }
                self.pos += 2;
                let v = self.index()?;
                self.expect_close()?;
                Ok(self.builder.not(v))
            }
            Some(Token::Atom(a)) if a == "true" || a == "false" => {
                Err(Error::parse(line, "negation applied to a constant"))
            }
            _ => {
                let v = self.index()?;
                Ok(self.builder.not(v))
            }
        }
    }
}

/// Parses the NNF s-expression syntax: `(and …)`, `(or …)`, `(var I)`,
/// `(not I)`, `true`, `false`.
pub fn parse_nnf(text: &[u8]) -> Result<Formula> {
    let text = std::str::from_utf8(text).map_err(|_| Error::parse(0, "input is not UTF-8"))?;
    let mut parser = NnfParser {
        tokens: tokenize(text),
        pos: 0,
        builder: FormulaBuilder::new(),
    };
    if parser.tokens.is_empty() {
        return Err(Error::parse(0, "empty input"));
    }
    let root = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::parse(parser.line(), "trailing input after formula"));
    }
    parser.builder.finish(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> CnfFormula {
        parse_dimacs(b"p cnf 2 3\n1 0\n2 0\n-1 -2 0\n").unwrap()
    }

    #[test]
    fn dimacs_worked_example() {
        let cnf = example();
        assert_eq!(cnf.var_count(), 2);
        assert_eq!(
            cnf.clauses(),
            &[
                vec![Literal::pos(1)],
                vec![Literal::pos(2)],
                vec![Literal::neg(1), Literal::neg(2)]
            ]
        );
    }

    #[test]
    fn dimacs_unit() {
        let cnf = parse_dimacs(b"c comment\np cnf 1 1\n1 0\n").unwrap();
        assert_eq!(cnf.clauses(), &[vec![Literal::pos(1)]]);
    }

    #[test]
    fn dimacs_rejects_tautology_with_line() {
        let err = parse_dimacs(b"p cnf 2 1\n1 -1 0\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("tautological"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimacs_errors() {
        assert!(matches!(parse_dimacs(b"p cnf x 1\n1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dimacs(b"p cnf 1 1\n2 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dimacs(b"p cnf 1 2\n1 0\n0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_dimacs(b"p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs(b"1 0\n").is_err());
        assert!(parse_dimacs(b"p cnf 1 1\n1\n").is_err());
    }

    #[test]
    fn dimacs_dedups_and_spans_lines() {
        let cnf = parse_dimacs(b"p cnf 3 1\n3 1\n1 -2 0\n").unwrap();
        assert_eq!(
            cnf.clauses(),
            &[vec![Literal::pos(1), Literal::neg(2), Literal::pos(3)]]
        );
    }

    #[test]
    fn nnf_worked_example() {
        let f = parse_nnf(b"(and (var 1) (var 2) (or (not 1) (not 2)))").unwrap();
        match f.node(f.root()) {
            Node::And(children) => assert_eq!(children.len(), 3),
            other => panic!("unexpected root {other:?}"),
        }
        assert_eq!(f.var_count(), 2);
        assert_eq!(f.literal_count(), 4);
    }

    #[test]
    fn nnf_single_leaf() {
        let f = parse_nnf(b"(var 1)").unwrap();
        assert_eq!(f.node(f.root()), &Node::Lit(Literal::pos(1)));
    }

    #[test]
    fn nnf_rejects_negated_internal_node() {
        let err = parse_nnf(b"(not (and (var 1) (var 2)))").unwrap_err();
        assert!(err.to_string().contains("non-leaf"), "{err}");
    }

    #[test]
    fn nnf_errors() {
        assert!(parse_nnf(b"(xor (var 1))").is_err());
        assert!(parse_nnf(b"(var 0)").is_err());
        assert!(parse_nnf(b"(var x)").is_err());
        assert!(parse_nnf(b"(and)").is_err());
        assert!(parse_nnf(b"(var 1) (var 2)").is_err());
        assert!(parse_nnf(b"(and (var 1)").is_err());
        assert!(parse_nnf(b"").is_err());
        assert!(parse_nnf(b"(not true)").is_err());
    }

    #[test]
    fn nnf_accepts_constants_and_wrapped_negation() {
        let f = parse_nnf(b"(or true\n  (not (var 3)) false)").unwrap();
        assert_eq!(f.render(), "(or true (not 3) false)");
        assert_eq!(f.var_count(), 3);
        assert!(f.has_constants());
    }

    #[test]
    fn cnf_tree_matches_nnf_text() {
        let f = cnf_to_formula(&example());
        assert_eq!(f.render(), "(and (or (var 1)) (or (var 2)) (or (not 1) (not 2)))");
        assert_eq!(f.size(), 3);
        assert_eq!(f.literal_count(), 4);
        let parsed = parse_nnf(f.render().as_bytes()).unwrap();
        assert!(parsed.same_tree(&f));
        assert_eq!(parsed.as_cnf().unwrap(), example());
    }

    #[test]
    fn cnf_requires_clauses() {
        assert!(CnfFormula::new(1, vec![]).is_err());
        let single = CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        assert_eq!(cnf_to_formula(&single).render(), "(and (or (var 1)))");
    }

    #[test]
    fn literal_order_is_canonical() {
        let mut lits = vec![Literal::neg(2), Literal::pos(2), Literal::neg(1), Literal::pos(1)];
        lits.sort();
        assert_eq!(
            lits,
            vec![Literal::pos(1), Literal::neg(1), Literal::pos(2), Literal::neg(2)]
        );
    }
}
