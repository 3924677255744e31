//! Cubic monotone one-in-three 3-SAT instances and a brute-force oracle.
//!
//! An instance is an ordered list of clauses, each a triple of distinct
//! variable indices; all literals are unnegated. In strict mode every
//! variable must occur in exactly three clauses, which forces the number of
//! variables to equal the number of clauses. A model is a variable set
//! meeting every clause in exactly one element.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Variable occurrence limit for the exhaustive oracle.
const ORACLE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<[usize; 3]>) -> Self {
        SatInstance { num_vars, clauses }
    }

    /// Validates the instance. Clauses must always hold three distinct,
    /// declared variables; strict mode additionally enforces the cubic
    /// shape (every variable in exactly three clauses, #vars = #clauses).
    pub fn validate(&self, strict: bool) -> Result<()> {
        let mut occurrences = vec![0usize; self.num_vars];
        for (ci, clause) in self.clauses.iter().enumerate() {
            if clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2] {
                return Err(Error::ClauseArity { clause: ci });
            }
            for &v in clause {
                if v >= self.num_vars {
                    return Err(Error::UnknownIdentifier(format!("X{v}")));
                }
                occurrences[v] += 1;
            }
        }
        if strict {
            if self.num_vars != self.clauses.len() {
                return Err(Error::SizeGuard(format!(
                    "cubic instances have as many variables as clauses, got {} and {}",
                    self.num_vars,
                    self.clauses.len()
                )));
            }
            for (v, &count) in occurrences.iter().enumerate() {
                if count != 3 {
                    return Err(Error::NotCubic { variable: v, count });
                }
            }
        }
        Ok(())
    }

    /// Whether `model` (a set of variable indices) meets every clause exactly
    /// once.
    pub fn is_model(&self, model: &[usize]) -> bool {
        let mut member = vec![false; self.num_vars];
        for &v in model {
            if v >= self.num_vars {
                return false;
            }
            member[v] = true;
        }
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|&&v| member[v]).count() == 1)
    }

    /// Exhaustive search for the lexicographically smallest one-in-three
    /// model (compared as sorted index sequences). Exact but exponential;
    /// guarded at 24 variables.
    pub fn oracle(&self) -> Result<Option<Vec<usize>>> {
        self.validate(false)?;
        if self.num_vars > ORACLE_MAX_VARS {
            return Err(Error::SizeGuard(format!(
                "{} variables exceed the oracle limit of {ORACLE_MAX_VARS}",
                self.num_vars
            )));
        }
        let mut best: Option<Vec<usize>> = None;
        let mut chosen: Vec<usize> = Vec::new();
        let mut counts = vec![0u8; self.clauses.len()];
        let by_var: Vec<Vec<usize>> = {
            let mut m = vec![Vec::new(); self.num_vars];
            for (ci, c) in self.clauses.iter().enumerate() {
                for &v in c {
                    m[v].push(ci);
                }
            }
            m
        };
        self.search(0, &mut chosen, &mut counts, &by_var, &mut best);
        Ok(best)
    }

    fn search(
        &self,
        var: usize,
        chosen: &mut Vec<usize>,
        counts: &mut [u8],
        by_var: &[Vec<usize>],
        best: &mut Option<Vec<usize>>,
    ) {
        if var == self.num_vars {
            if counts.iter().all(|&c| c == 1) {
                let candidate = chosen.clone();
                if best.as_ref().map_or(true, |b| candidate < *b) {
                    *best = Some(candidate);
                }
            }
            return;
        }
        // Exclude var.
        self.search(var + 1, chosen, counts, by_var, best);
        // Include var unless a clause would be met twice.
        if by_var[var].iter().all(|&ci| counts[ci] == 0) {
            for &ci in &by_var[var] {
                counts[ci] += 1;
            }
            chosen.push(var);
            self.search(var + 1, chosen, counts, by_var, best);
            chosen.pop();
            for &ci in &by_var[var] {
                counts[ci] -= 1;
            }
        }
    }

    /// Parses the `p 1in3 <m>` format with one `c <v> <v> <v>` line per
    /// clause.
    pub fn parse(text: &str) -> Result<Self> {
        let mut expected: Option<usize> = None;
        let mut num_vars = 0usize;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks = line.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let lineno = idx + 1;
            let syntax = |msg: String| Error::Syntax { line: lineno, msg };
            match head {
                "p" => {
                    let kind = toks.next().ok_or_else(|| syntax("missing kind".into()))?;
                    if kind != "1in3" {
                        return Err(syntax(format!("unsupported kind `{kind}`")));
                    }
                    let m = toks
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| syntax("missing clause count".into()))?;
                    expected = Some(m);
                }
                "c" => {
                    let mut clause = [0usize; 3];
                    for slot in clause.iter_mut() {
                        *slot = toks
                            .next()
                            .and_then(|t| t.parse::<usize>().ok())
                            .ok_or_else(|| syntax("clause needs three variable indices".into()))?;
                    }
                    if toks.next().is_some() {
                        return Err(syntax("trailing tokens after clause".into()));
                    }
                    for &v in &clause {
                        num_vars = num_vars.max(v + 1);
                    }
                    clauses.push(clause);
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let expected = expected.ok_or(Error::Syntax {
            line: 1,
            msg: "missing `p 1in3 <m>` header".to_string(),
        })?;
        if clauses.len() != expected {
            return Err(Error::Syntax {
                line: 1,
                msg: format!("header declares {expected} clauses, found {}", clauses.len()),
            });
        }
        // Cubic instances use exactly the variables X0..X{m-1}.
        num_vars = num_vars.max(expected);
        Ok(SatInstance::new(num_vars, clauses))
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p 1in3 {}", self.clauses.len()).unwrap();
        for c in &self.clauses {
            writeln!(out, "c {} {} {}", c[0], c[1], c[2]).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn validation_modes() {
        samples::cubic6().validate(true).unwrap();
        samples::cubic3().validate(true).unwrap();

        // A variable in only two clauses is rejected in strict mode but
        // accepted in lax mode.
        let lax = SatInstance::new(4, vec![[0, 1, 2], [0, 1, 3]]);
        assert!(matches!(
            lax.validate(true),
            Err(Error::SizeGuard(_)) | Err(Error::NotCubic { .. })
        ));
        lax.validate(false).unwrap();

        let lacking = SatInstance::new(3, vec![[0, 1, 2], [0, 1, 2], [0, 1, 1]]);
        assert_eq!(lacking.validate(true), Err(Error::ClauseArity { clause: 2 }));
    }

    #[test]
    fn oracle_reference_models() {
        assert_eq!(samples::cubic6().oracle().unwrap(), Some(vec![0, 4]));
        assert_eq!(samples::cubic3().oracle().unwrap(), Some(vec![0]));
        assert_eq!(samples::cubic3_rotated().oracle().unwrap(), Some(vec![0]));
        assert_eq!(samples::cubic4_unsat().oracle().unwrap(), None);
    }

    #[test]
    fn oracle_counting_argument() {
        // For cubic instances the model size is pinned to m/3, so any model
        // returned for cubic6 has two elements.
        let inst = samples::cubic6();
        let model = inst.oracle().unwrap().unwrap();
        assert_eq!(model.len(), 2);
        assert!(inst.is_model(&model));
    }

    #[test]
    fn oracle_guard() {
        let big = SatInstance::new(25, (0..25).map(|i| [i, (i + 1) % 25, (i + 2) % 25]).collect());
        assert!(matches!(big.oracle(), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn parse_round_trip() {
        let inst = samples::cubic6();
        let parsed = SatInstance::parse(&inst.serialize()).unwrap();
        assert_eq!(parsed, inst);

        assert!(SatInstance::parse("p 1in3 2\nc 0 1 2\n").is_err());
        assert!(SatInstance::parse("c 0 1 2\n").is_err());
    }
}
