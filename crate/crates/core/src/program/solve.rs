use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{BinaryProgram, Relation};
use crate::error::{Error, Result};

pub const DEFAULT_VAR_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSolution {
    /// Lexicographically first feasible assignment (variable 0 most
    /// significant, `false < true`), or `None` when infeasible.
    pub assignment: Option<Vec<bool>>,
    /// Number of search nodes visited.
    pub explored: u64,
}

impl IpSolution {
    pub fn is_feasible(&self) -> bool {
        self.assignment.is_some()
    }
}

/// Exhaustive feasibility search over all `2^v` assignments.
///
/// Branches fix variables in index order with `false` tried first, and a
/// branch is cut only when some row can no longer be satisfied by any
/// completion, so the first assignment found is the lexicographic minimum.
pub fn solve_ip(program: &BinaryProgram, var_cap: usize) -> Result<IpSolution> {
    program.validate()?;
    if program.num_vars() > var_cap {
        return Err(Error::VarCapExceeded {
            vars: program.num_vars(),
            cap: var_cap,
        });
    }
    if fits_i128(program) {
        Ok(Search::<i128>::new(program).run())
    } else {
        Ok(Search::<BigInt>::new(program).run())
    }
}

fn fits_i128(program: &BinaryProgram) -> bool {
    let limit = BigInt::from(1u128 << 120);
    program.rows.iter().all(|r| {
        let total: BigInt = r.terms.iter().map(|t| t.coef.abs()).sum::<BigInt>() + r.rhs.abs();
        total < limit
    })
}

trait Value: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {
    fn from_big(v: &BigInt) -> Self;
}

impl Value for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("checked by fits_i128")
    }
}

impl Value for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
}

struct RowState<T> {
    relation: Relation,
    rhs: T,
    partial: T,
    // sums of negative / positive coefficients at term positions >= p
    neg_from: Vec<T>,
    pos_from: Vec<T>,
}

impl<T: Value> RowState<T> {
    fn open(&self, partial: &T, from: usize) -> bool {
        let lo = partial.clone() + self.neg_from[from].clone();
        let hi = partial.clone() + self.pos_from[from].clone();
        match self.relation {
            Relation::Eq => lo <= self.rhs && self.rhs <= hi,
            Relation::Le => lo <= self.rhs,
            Relation::Ge => hi >= self.rhs,
        }
    }
}

struct Search<T> {
    rows: Vec<RowState<T>>,
    // per variable: (row, coefficient, position of the term inside the row)
    incidence: Vec<Vec<(usize, T, usize)>>,
    assignment: Vec<bool>,
    explored: u64,
}

impl<T: Value> Search<T> {
    fn new(program: &BinaryProgram) -> Self {
        let mut incidence = vec![Vec::new(); program.num_vars()];
        let mut rows = Vec::with_capacity(program.rows.len());
        for (r, row) in program.rows.iter().enumerate() {
            let mut terms: Vec<(usize, T)> = row
                .terms
                .iter()
                .map(|t| (t.var, T::from_big(&t.coef)))
                .collect();
            terms.sort_by_key(|(v, _)| *v);
            let n = terms.len();
            let mut neg_from = vec![T::zero(); n + 1];
            let mut pos_from = vec![T::zero(); n + 1];
            for p in (0..n).rev() {
                let c = terms[p].1.clone();
                if c < T::zero() {
                    neg_from[p] = neg_from[p + 1].clone() + c;
                    pos_from[p] = pos_from[p + 1].clone();
                } else {
                    neg_from[p] = neg_from[p + 1].clone();
                    pos_from[p] = pos_from[p + 1].clone() + c;
                }
            }
            for (p, (v, c)) in terms.into_iter().enumerate() {
                incidence[v].push((r, c, p));
            }
            rows.push(RowState {
                relation: row.relation,
                rhs: T::from_big(&row.rhs),
                partial: T::zero(),
                neg_from,
                pos_from,
            });
        }
        Search {
            rows,
            incidence,
            assignment: vec![false; program.num_vars()],
            explored: 0,
        }
    }

    fn run(mut self) -> IpSolution {
        self.explored = 1;
        let root_ok = self.rows.iter().all(|r| r.open(&r.partial, 0));
        let found = root_ok && self.descend(0);
        IpSolution {
            assignment: found.then_some(self.assignment),
            explored: self.explored,
        }
    }

    fn descend(&mut self, var: usize) -> bool {
        if var == self.assignment.len() {
            return true;
        }
        for value in [false, true] {
            self.explored += 1;
            self.assignment[var] = value;
            let mut ok = true;
            for (r, c, p) in &self.incidence[var] {
                let row = &self.rows[*r];
                let partial = if value {
                    row.partial.clone() + c.clone()
                } else {
                    row.partial.clone()
                };
                if !row.open(&partial, p + 1) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            if value {
                self.shift(var, true);
            }
            if self.descend(var + 1) {
                return true;
            }
            if value {
                self.shift(var, false);
            }
        }
        self.assignment[var] = false;
        false
    }

    fn shift(&mut self, var: usize, add: bool) {
        for (r, c, _) in &self.incidence[var] {
            let row = &mut self.rows[*r];
            row.partial = if add {
                row.partial.clone() + c.clone()
            } else {
                row.partial.clone() - c.clone()
            };
        }
    }
}
