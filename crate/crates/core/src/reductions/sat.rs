use std::collections::BTreeMap;

use crate::error::Result;
use crate::instances::{Certificate, CnfFormula, Problem, ProblemKind};
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

use super::{leading_bits, mismatch, FormulaCheck};

/// Splits every clause longer than three into a chain of 3-clauses.
///
/// A clause `σ1 ∨ … ∨ σk` with `k > 3` becomes `{σ1, σ2, y1}`,
/// `{¬y(j−1), σ(j+1), yj}` for `j = 2..k−3`, and `{¬y(k−3), σ(k−1), σk}`.
/// Fresh variables are numbered after the source variables in clause order.
pub fn reduce_sat_to_3sat(f: &CnfFormula) -> CnfFormula {
    let mut next = f.num_literals as i64;
    let mut clauses = Vec::with_capacity(f.clauses.len());
    for c in &f.clauses {
        let k = c.len();
        if k <= 3 {
            clauses.push(c.clone());
            continue;
        }
        let first = next + 1;
        next += (k - 3) as i64;
        let y = |j: usize| first + j as i64 - 1;
        clauses.push(vec![c[0], c[1], y(1)]);
        for (j, &lit) in c.iter().enumerate().take(k - 2).skip(2) {
            clauses.push(vec![-y(j - 1), lit, y(j)]);
        }
        clauses.push(vec![-y(k - 3), c[k - 2], c[k - 1]]);
    }
    CnfFormula::new(next as usize, clauses)
}

/// One `≥` row per clause: `Σ w_j x_j ≥ 1 − d`, where `w_j` is the net sign
/// of variable `j` in the clause and `d` counts complemented literals.
pub fn reduce_3sat_to_ip(f: &CnfFormula) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    for j in 1..=f.num_literals {
        p.add_var(VariableTag::new("x", &[j as u64]));
    }
    for c in &f.clauses {
        let mut w: BTreeMap<usize, i64> = BTreeMap::new();
        for &l in c {
            *w.entry(l.unsigned_abs() as usize - 1).or_default() += l.signum();
        }
        let d = c.iter().filter(|&&l| l < 0).count() as i64;
        p.push(ConstraintRow::new(w, Relation::Ge, 1 - d).with_natural_gap());
    }
    p
}

pub(super) mod sat_to_3sat {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::Sat(f) = p else { unreachable!() };
        Ok(Problem::ThreeSat(reduce_sat_to_3sat(f)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::Sat(f) = source else { unreachable!() };
        let Certificate::Assignment(a) = cert else {
            return Err(mismatch(ProblemKind::ThreeSat, cert));
        };
        if a.len() < f.num_literals {
            return Err(crate::Error::InvalidCertificate(format!(
                "assignment has {} values, expected at least {}",
                a.len(),
                f.num_literals
            )));
        }
        Ok(Certificate::Assignment(a[..f.num_literals].to_vec()))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::Sat(f), Problem::ThreeSat(g)) = (source, target) else {
            return Vec::new();
        };
        let clauses: usize = f.clauses.iter().map(|c| if c.len() > 3 { c.len() - 2 } else { 1 }).sum();
        let fresh: usize = f.clauses.iter().map(|c| c.len().saturating_sub(3)).sum();
        vec![
            FormulaCheck::new("clauses = Σ max(|C|−2, 1)", clauses, g.clauses.len()),
            FormulaCheck::new("fresh variables = Σ max(|C|−3, 0)", fresh, g.num_literals - f.num_literals),
        ]
    }
}

pub(super) mod three_sat_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::ThreeSat(f) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_3sat_to_ip(f)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::ThreeSat(f) = source else { unreachable!() };
        let bits = leading_bits(ProblemKind::Ip01, cert, f.num_literals)?;
        Ok(Certificate::Assignment(bits))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::ThreeSat(f), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        let mut checks = vec![FormulaCheck::new("rhs entries = n", f.clauses.len(), p.rhs_entries())];
        let distinct_triples = f.clauses.iter().all(|c| {
            c.len() == 3 && {
                let mut v: Vec<u64> = c.iter().map(|l| l.unsigned_abs()).collect();
                v.sort_unstable();
                v.dedup();
                v.len() == 3
            }
        });
        if distinct_triples {
            checks.push(FormulaCheck::new("nonzeros = 3n", 3 * f.clauses.len(), p.nonzeros()));
        }
        checks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn satisfiable(f: &CnfFormula) -> bool {
        (0u64..1 << f.num_literals).any(|m| {
            let a: Vec<bool> = (0..f.num_literals).map(|i| m >> i & 1 == 1).collect();
            f.is_satisfied(&a)
        })
    }

    #[test]
    fn four_clause_splits_into_two() {
        let f = CnfFormula::new(4, vec![vec![1, 2, 3, 4]]);
        let g = reduce_sat_to_3sat(&f);
        assert_eq!(g.num_literals, 5);
        assert_eq!(g.clauses, vec![vec![1, 2, 5], vec![-5, 3, 4]]);
    }

    #[test]
    fn three_cnf_is_copied() {
        let f = CnfFormula::new(3, vec![vec![1, -2, 3], vec![-1], vec![2, 3]]);
        assert_eq!(reduce_sat_to_3sat(&f), f);
    }

    #[test]
    fn long_negative_clause_is_equisatisfiable() {
        let f = CnfFormula::new(5, vec![vec![-1, -2, -3, -4, -5]]);
        let g = reduce_sat_to_3sat(&f);
        assert_eq!(g.clauses.len(), 3);
        assert_eq!(g.num_literals, 7);
        // with all source variables TRUE no choice of the y's helps
        let ys_fail = (0u8..4).all(|m| {
            let mut a = vec![true; 5];
            a.extend([m & 1 == 1, m & 2 == 2]);
            !g.is_satisfied(&a)
        });
        assert!(ys_fail);
        assert_eq!(satisfiable(&f), satisfiable(&g));
        // each satisfying source assignment extends to the target
        for m in 0u64..32 {
            let a: Vec<bool> = (0..5).map(|i| m >> i & 1 == 1).collect();
            if f.is_satisfied(&a) {
                let ext = (0u8..4).any(|y| {
                    let mut b = a.clone();
                    b.extend([y & 1 == 1, y & 2 == 2]);
                    g.is_satisfied(&b)
                });
                assert!(ext);
            }
        }
    }

    #[test]
    fn long_clauses_chain_with_fresh_variables() {
        let f = CnfFormula::new(7, vec![vec![1, 2, 3, 4, 5, 6, 7], vec![-1, 2]]);
        let g = reduce_sat_to_3sat(&f);
        assert_eq!(g.clauses.len(), 6);
        assert_eq!(g.num_literals, 11);
        assert_eq!(
            g.clauses[..5],
            [
                vec![1, 2, 8],
                vec![-8, 3, 9],
                vec![-9, 4, 10],
                vec![-10, 5, 11],
                vec![-11, 6, 7]
            ]
        );
        assert_eq!(satisfiable(&f), satisfiable(&g));
    }

    #[test]
    fn clause_rows() {
        let f = CnfFormula::new(3, vec![vec![1, -2, 3], vec![1, 2, 3]]);
        let p = reduce_3sat_to_ip(&f);
        assert_eq!(p.to_text(), "1*x[1] -1*x[2] 1*x[3] >= 0\n1*x[1] 1*x[2] 1*x[3] >= 1\n");
        assert_eq!(p.nonzeros(), 6);
        assert_eq!(p.rhs_entries(), 2);
        for row in &p.rows {
            assert_eq!(row.slack_bound, Some(BigInt::from(2)));
        }
    }

    #[test]
    fn rows_agree_with_clauses_on_every_assignment() {
        let f = CnfFormula::new(3, vec![vec![1, -1, 2], vec![-2, -2, -3], vec![3], vec![-1, -3]]);
        let p = reduce_3sat_to_ip(&f);
        for m in 0u8..8 {
            let a: Vec<bool> = (0..3).map(|i| m >> i & 1 == 1).collect();
            for (c, row) in f.clauses.iter().zip(&p.rows) {
                let sat = CnfFormula::new(3, vec![c.clone()]).is_satisfied(&a);
                assert_eq!(sat, row.is_satisfied(&a), "{c:?} {a:?}");
            }
        }
    }
}
