use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BinaryProgram, ConstraintRow, Relation, Term, VariableTag};
use crate::error::{Error, Result};
use crate::num::slack_width;

/// Rewrites every inequality row as an equality.
///
/// A `<=` row with slack bound `g` gains `⌈log₂(g+1)⌉` fresh variables with
/// coefficients `1, 2, 4, …`; a `>=` row gains the same number of surplus
/// variables with negated coefficients. Fresh variables are appended after
/// all existing ones and tagged `slack[row,level]` (both 1-based), so the
/// original variables keep their indices. Equality rows pass through.
pub fn to_equality_form(program: &BinaryProgram) -> Result<BinaryProgram> {
    program.validate()?;
    let mut out = BinaryProgram {
        variables: program.variables.clone(),
        rows: Vec::with_capacity(program.rows.len()),
    };
    for (r, row) in program.rows.iter().enumerate() {
        if row.relation == Relation::Eq {
            out.rows.push(ConstraintRow {
                slack_bound: None,
                ..row.clone()
            });
            continue;
        }
        let g = row.slack_bound.as_ref().ok_or_else(|| {
            Error::Contract(format!("inequality row {} has no slack bound", r + 1))
        })?;
        if g.is_negative() {
            return Err(Error::InvalidInstance(format!(
                "row {} has a negative slack bound",
                r + 1
            )));
        }
        let sign = if row.relation == Relation::Le {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let mut terms = row.terms.clone();
        let mut weight = BigInt::one();
        for level in 1..=slack_width(g) {
            let var = out.add_var(VariableTag::new("slack", &[r as u64 + 1, level]));
            terms.push(Term {
                var,
                coef: &sign * &weight,
            });
            weight <<= 1;
        }
        out.rows.push(ConstraintRow {
            terms,
            relation: Relation::Eq,
            rhs: row.rhs.clone(),
            slack_bound: None,
        });
    }
    debug_assert!(out.rows.iter().all(|r| r.terms.iter().all(|t| !t.coef.is_zero())));
    Ok(out)
}
