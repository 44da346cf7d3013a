//! CNF formulas over positive integer variables.
//!
//! Literals use the DIMACS convention: a signed non-zero integer whose sign
//! encodes polarity. Formulas are plain clause lists; the attack loop grows
//! a formula by appending clauses, never by mutating existing ones.

use std::fmt;

use thiserror::Error;

/// Signed DIMACS-style literal. `Lit(3)` is variable 3, `Lit(-3)` its
/// negation; 0 is not a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(pub i32);

impl Lit {
    pub fn positive(var: u32) -> Lit {
        Lit(var as i32)
    }

    pub fn negative(var: u32) -> Lit {
        Lit(-(var as i32))
    }

    pub fn with_sign(var: u32, positive: bool) -> Lit {
        if positive {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum CnfError {
    #[error("literal {0} exceeds declared variable count {1}")]
    LiteralOutOfRange(i32, u32),
    #[error("DIMACS parse error at line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Self {
        Cnf::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Allocate a fresh variable and return its index (1-based).
    pub fn fresh_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    /// Ensure at least `n` variables exist.
    pub fn reserve_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    /// Append a clause. Empty clauses are permitted (they make the formula
    /// trivially unsatisfiable) but literals must reference allocated
    /// variables.
    pub fn add_clause(&mut self, lits: impl Into<Vec<Lit>>) {
        let lits = lits.into();
        for l in &lits {
            debug_assert!(
                l.var() >= 1 && l.var() <= self.num_vars,
                "literal {l} out of range (vars={})",
                self.num_vars
            );
        }
        self.clauses.push(lits);
    }

    pub fn add_unit(&mut self, lit: Lit) {
        self.add_clause(vec![lit]);
    }

    /// True iff `assignment` (indexed by variable, entry 0 unused) satisfies
    /// every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| assignment[l.var() as usize] == l.is_positive())
        })
    }

    /// Standard DIMACS serialization (`p cnf V C` header, 0-terminated
    /// clause lines).
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.0.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Cnf, CnfError> {
        let mut cnf = Cnf::new();
        let mut declared: Option<(u32, usize)> = None;
        let mut current: Vec<Lit> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(CnfError::Dimacs {
                        line: i + 1,
                        msg: "expected `p cnf <vars> <clauses>`".into(),
                    });
                }
                let vars = parts[2].parse().map_err(|_| CnfError::Dimacs {
                    line: i + 1,
                    msg: "bad variable count".into(),
                })?;
                let clauses = parts[3].parse().map_err(|_| CnfError::Dimacs {
                    line: i + 1,
                    msg: "bad clause count".into(),
                })?;
                declared = Some((vars, clauses));
                cnf.reserve_vars(vars);
                continue;
            }
            for tok in line.split_whitespace() {
                let v: i32 = tok.parse().map_err(|_| CnfError::Dimacs {
                    line: i + 1,
                    msg: format!("bad literal `{tok}`"),
                })?;
                if v == 0 {
                    cnf.clauses.push(std::mem::take(&mut current));
                } else {
                    let lit = Lit(v);
                    cnf.reserve_vars(lit.var());
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            cnf.clauses.push(current);
        }
        if let Some((vars, nclauses)) = declared {
            if cnf.num_vars > vars || cnf.clauses.len() != nclauses {
                return Err(CnfError::Dimacs {
                    line: 0,
                    msg: format!(
                        "header declares {vars} vars / {nclauses} clauses, found {} / {}",
                        cnf.num_vars,
                        cnf.clauses.len()
                    ),
                });
            }
        }
        Ok(cnf)
    }
}
