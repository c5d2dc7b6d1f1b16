//! Loading formulas, interpretations, negation tables and seed assignments.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

use semopt_core::formula::{cnf_to_formula, parse_dimacs, parse_nnf, CnfFormula, Formula};
use semopt_core::rational::parse_ratio;
use semopt_core::semiring::{Interpretation, NegationFn, SemiringSpec, SemiringValue};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Dimacs,
    Nnf,
}

impl InputFormat {
    pub fn name(self) -> &'static str {
        match self {
            InputFormat::Dimacs => "dimacs",
            InputFormat::Nnf => "nnf",
        }
    }
}

pub struct Input {
    pub format: InputFormat,
    pub sha256: String,
    pub formula: Formula,
    /// The CNF view: the parsed DIMACS, or an NNF that is an AND of ORs.
    pub cnf: Option<CnfFormula>,
}

impl Input {
    pub fn require_cnf(&self, subcommand: &str) -> Result<&CnfFormula, CliError> {
        self.cnf.as_ref().ok_or_else(|| {
            CliError::usage(format!("{subcommand} requires a CNF input (.cnf, or an AND of ORs in .nnf)"))
        })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_formula(path: &Path) -> Result<Input, CliError> {
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("cnf") => InputFormat::Dimacs,
        Some("nnf") => InputFormat::Nnf,
        _ => {
            return Err(CliError::usage(format!(
                "{}: input must end in .cnf or .nnf",
                path.display()
            )))
        }
    };
    let bytes = read(path)?;
    let sha256 = hex(&Sha256::digest(&bytes));
    let (formula, cnf) = match format {
        InputFormat::Dimacs => {
            let cnf = parse_dimacs(&bytes)?;
            (cnf_to_formula(&cnf), Some(cnf))
        }
        InputFormat::Nnf => {
            let formula = parse_nnf(&bytes)?;
            let cnf = formula.as_cnf();
            (formula, cnf)
        }
    };
    Ok(Input {
        format,
        sha256,
        formula,
        cnf,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A JSON object mapping variable indices to values: `"p/q"` strings (or
/// integers) for real semirings, integer levels for access semirings.
pub fn load_interpretation(path: &Path, var_count: u32, semiring: &SemiringSpec) -> Result<Interpretation, CliError> {
    let bytes = read(path)?;
    let json: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = json else {
        return Err(CliError::input(format!("{}: expected a JSON object", path.display())));
    };
    let mut values: BTreeMap<u32, SemiringValue> = BTreeMap::new();
    for (key, value) in &map {
        let var: u32 = key
            .trim_start_matches('x')
            .parse()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| CliError::input(format!("{}: bad variable key {key:?}", path.display())))?;
        let text = match value {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(CliError::input(format!("{}: value of {key} must be a string or integer", path.display()))),
        };
        let parsed = match semiring {
            SemiringSpec::Access(_) => SemiringValue::Level(
                text.parse()
                    .map_err(|_| CliError::input(format!("{}: level {text:?} is not a non-negative integer", path.display())))?,
            ),
            _ => SemiringValue::Real(parse_ratio(&text)?),
        };
        values.insert(var, parsed);
    }
    let mut ordered = Vec::with_capacity(var_count as usize);
    for var in 1..=var_count {
        let v = values
            .remove(&var)
            .ok_or_else(|| CliError::usage(format!("interpretation has no value for x{var}")))?;
        ordered.push(v);
    }
    if let Some((&extra, _)) = values.iter().next() {
        return Err(CliError::usage(format!(
            "interpretation assigns x{extra}, formula has {var_count} variables"
        )));
    }
    Ok(Interpretation::new(ordered))
}

/// `k + 1` lines `a b` meaning `ℸ(a) = b`.
pub fn load_negation_table(path: &Path) -> Result<NegationFn, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let mut pairs = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::input(format!("{} line {}: expected \"a b\"", path.display(), i + 1)))?;
        let [a, b] = nums[..] else {
            return Err(CliError::input(format!("{} line {}: expected \"a b\"", path.display(), i + 1)));
        };
        if pairs.insert(a, b).is_some() {
            return Err(CliError::input(format!("{} line {}: ℸ({a}) given twice", path.display(), i + 1)));
        }
    }
    let map: Vec<u32> = pairs.values().copied().collect();
    if pairs.keys().copied().ne(0..map.len() as u32) {
        return Err(CliError::input(format!(
            "{}: table must define ℸ(a) for every a in 0..k",
            path.display()
        )));
    }
    Ok(NegationFn::table(map)?)
}

/// DIMACS-style literals (`3` true, `-3` false, optional trailing `0`);
/// variables not listed are false.
pub fn load_assignment(path: &Path, var_count: u32) -> Result<Vec<bool>, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let mut assignment = vec![false; var_count as usize];
    for token in text.split_whitespace() {
        let lit: i64 = token
            .parse()
            .map_err(|_| CliError::input(format!("{}: bad literal {token:?}", path.display())))?;
        if lit == 0 {
            break;
        }
        let var = lit.unsigned_abs();
        if var > u64::from(var_count) {
            return Err(CliError::input(format!(
                "{}: variable {var} exceeds {var_count}",
                path.display()
            )));
        }
        assignment[var as usize - 1] = lit > 0;
    }
    Ok(assignment)
}
