//! 0-1 integer programs.
//!
//! A [`BinaryProgram`] is a list of tagged binary variables and sparse
//! constraint rows. Rows may be inequalities as long as they carry a
//! `slack_bound`: the largest LHS/RHS gap any feasible assignment of the
//! whole program can produce. [`to_equality_form`] uses that bound to
//! rewrite every inequality as an equality over power-of-two slack or
//! surplus variables, which is the strict (equalities only) form of the
//! problem.

mod equality;
mod solve;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::num::{bigint_serde, bit_length};
use crate::size::SizeReport;

pub use equality::to_equality_form;
pub use solve::{solve_ip, IpSolution, DEFAULT_VAR_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// Names the source object a variable encodes, e.g. `x[1,2]` for the edge
/// (1,2) or `s[4,2]` for the second slack of row 4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableTag {
    pub role: String,
    pub index: Vec<u64>,
}

impl VariableTag {
    pub fn new(role: &str, index: &[u64]) -> Self {
        VariableTag {
            role: role.to_string(),
            index: index.to_vec(),
        }
    }
}

impl fmt::Display for VariableTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.role)?;
        if !self.index.is_empty() {
            let parts: Vec<String> = self.index.iter().map(u64::to_string).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for VariableTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("malformed variable tag `{s}`"));
        match s.find('[') {
            None => {
                if s.is_empty() || s.contains(']') {
                    return Err(bad());
                }
                Ok(VariableTag::new(s, &[]))
            }
            Some(open) => {
                let body = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
                let index = body
                    .split(',')
                    .map(|p| p.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if open == 0 {
                    return Err(bad());
                }
                Ok(VariableTag::new(&s[..open], &index))
            }
        }
    }
}

impl Serialize for VariableTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VariableTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub var: usize,
    #[serde(with = "bigint_serde")]
    pub coef: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintRow {
    pub terms: Vec<Term>,
    pub relation: Relation,
    #[serde(with = "bigint_serde")]
    pub rhs: BigInt,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "bigint_serde::option"
    )]
    pub slack_bound: Option<BigInt>,
}

impl ConstraintRow {
    /// Builds a row from `(variable, coefficient)` pairs, dropping zero
    /// coefficients.
    pub fn new<I, C>(terms: I, relation: Relation, rhs: impl Into<BigInt>) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let terms = terms
            .into_iter()
            .map(|(var, coef)| Term {
                var,
                coef: coef.into(),
            })
            .filter(|t| !t.coef.is_zero())
            .collect();
        ConstraintRow {
            terms,
            relation,
            rhs: rhs.into(),
            slack_bound: None,
        }
    }

    pub fn with_slack_bound(mut self, g: impl Into<BigInt>) -> Self {
        self.slack_bound = Some(g.into());
        self
    }

    pub fn lhs(&self, assignment: &[bool]) -> BigInt {
        self.terms
            .iter()
            .filter(|t| assignment[t.var])
            .map(|t| &t.coef)
            .sum()
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.relation.holds(&self.lhs(assignment), &self.rhs)
    }

    /// Largest gap the row admits when every variable is free, ignoring the
    /// rest of the program. Reductions use it where no tighter analytic bound
    /// exists; negative values are clamped to zero (such rows are infeasible
    /// and stay infeasible once made tight).
    pub fn natural_gap(&self) -> BigInt {
        let gap = match self.relation {
            Relation::Eq => BigInt::zero(),
            Relation::Le => {
                let min: BigInt = self
                    .terms
                    .iter()
                    .filter(|t| t.coef.is_negative())
                    .map(|t| &t.coef)
                    .sum();
                &self.rhs - min
            }
            Relation::Ge => {
                let max: BigInt = self
                    .terms
                    .iter()
                    .filter(|t| t.coef.is_positive())
                    .map(|t| &t.coef)
                    .sum();
                max - &self.rhs
            }
        };
        gap.max(BigInt::zero())
    }

    /// Attaches [`natural_gap`](Self::natural_gap) as the slack bound.
    pub fn with_natural_gap(self) -> Self {
        let g = self.natural_gap();
        self.with_slack_bound(g)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryProgram {
    pub variables: Vec<VariableTag>,
    pub rows: Vec<ConstraintRow>,
}

impl BinaryProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, tag: VariableTag) -> usize {
        self.variables.push(tag);
        self.variables.len() - 1
    }

    pub fn push(&mut self, row: ConstraintRow) {
        self.rows.push(row);
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.terms.len()).sum()
    }

    pub fn rhs_entries(&self) -> usize {
        self.rows.len()
    }

    pub fn is_equality_form(&self) -> bool {
        self.rows.iter().all(|r| r.relation == Relation::Eq)
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars() && self.rows.iter().all(|r| r.is_satisfied(assignment))
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for tag in &self.variables {
            if !seen.insert(tag) {
                return invalid(format!("duplicate variable tag `{tag}`"));
            }
        }
        for (r, row) in self.rows.iter().enumerate() {
            let mut vars = HashSet::new();
            for t in &row.terms {
                if t.var >= self.num_vars() {
                    return invalid(format!("row {r} references undeclared variable {}", t.var));
                }
                if t.coef.is_zero() {
                    return invalid(format!("row {r} stores a zero coefficient"));
                }
                if !vars.insert(t.var) {
                    return invalid(format!("row {r} mentions variable {} twice", t.var));
                }
            }
            if let Some(g) = &row.slack_bound {
                if g.is_negative() {
                    return invalid(format!("row {r} has a negative slack bound"));
                }
            }
        }
        Ok(())
    }

    /// Element size is the number of stored coefficients plus the number of
    /// RHS entries; bit size sums the binary lengths of all of them.
    pub fn size(&self) -> SizeReport {
        let elements = (self.nonzeros() + self.rhs_entries()) as u64;
        let bits = self
            .rows
            .iter()
            .map(|r| r.terms.iter().map(|t| bit_length(&t.coef)).sum::<u64>() + bit_length(&r.rhs))
            .sum();
        SizeReport { elements, bits }
    }

    /// Text dump, one row per line: `coef*var ... REL rhs`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for t in &row.terms {
                out.push_str(&format!("{}*{} ", t.coef, self.variables[t.var]));
            }
            if row.terms.is_empty() {
                out.push_str("0 ");
            }
            out.push_str(&format!("{} {}", row.relation.symbol(), row.rhs));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BinaryProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn ip_size(program: &BinaryProgram) -> SizeReport {
    program.size()
}
