use crate::error::Result;
use crate::instances::{Certificate, Knapsack, Partition, Problem, ProblemKind};
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

use super::{chosen, leading_bits, mismatch, FormulaCheck};

/// The single row `Σ a_i x_i = b`.
pub fn reduce_knapsack_to_ip(ks: &Knapsack) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    for i in 1..=ks.values.len() {
        p.add_var(VariableTag::new("x", &[i as u64]));
    }
    p.push(ConstraintRow::new(
        ks.values.iter().enumerate().map(|(i, &a)| (i, a)),
        Relation::Eq,
        ks.target,
    ));
    p
}

/// Target is half the total. An odd total has no partition, so the target
/// becomes the total plus one, which no subset of positive values reaches.
pub fn reduce_partition_to_knapsack(p: &Partition) -> Knapsack {
    let total = p.total();
    let target = if total.is_multiple_of(2) { total / 2 } else { total + 1 };
    Knapsack {
        values: p.values.clone(),
        target,
    }
}

pub(super) mod knapsack_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::Knapsack(ks) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_knapsack_to_ip(ks)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::Knapsack(ks) = source else { unreachable!() };
        let r = ks.values.len();
        let bits = leading_bits(ProblemKind::Ip01, cert, r)?;
        Ok(Certificate::ItemSet(chosen(&bits, 0, r)))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::Knapsack(ks), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = r", ks.values.len(), p.nonzeros()),
            FormulaCheck::new("rhs entries = 1", 1, p.rhs_entries()),
        ]
    }
}

pub(super) mod partition_to_knapsack {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::Partition(part) = p else { unreachable!() };
        Ok(Problem::Knapsack(reduce_partition_to_knapsack(part)))
    }

    pub fn lift(_source: &Problem, cert: &Certificate) -> Result<Certificate> {
        match cert {
            Certificate::ItemSet(ix) => Ok(Certificate::ItemSet(ix.clone())),
            _ => Err(mismatch(ProblemKind::Knapsack, cert)),
        }
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::Partition(part), Problem::Knapsack(ks)) = (source, target) else {
            return Vec::new();
        };
        vec![FormulaCheck::new("values = s", part.values.len(), ks.values.len())]
    }
}
