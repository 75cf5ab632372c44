use crate::error::Result;
use crate::instances::{Certificate, Problem, ProblemKind, SetFamily, TripleFamily};
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

use super::{chosen, leading_bits, FormulaCheck};

fn set_vars(p: &mut BinaryProgram, s: usize) {
    for i in 1..=s {
        p.add_var(VariableTag::new("x", &[i as u64]));
    }
}

/// Per element of the support, a row over the sets containing it.
fn element_rows(fam: &SetFamily) -> impl Iterator<Item = (usize, Vec<(usize, i64)>)> + '_ {
    let occ = fam.occurrences();
    fam.support()
        .into_iter()
        .map(move |j| (occ[j].len(), occ[j].iter().map(|&i| (i - 1, 1)).collect()))
}

/// `Σ_{i ∋ j} x_i ≤ 1` for every covered element `j`, then `Σ x_i = l`.
pub fn reduce_set_packing_to_ip(fam: &SetFamily, l: usize) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    set_vars(&mut p, fam.sets.len());
    for (_, terms) in element_rows(fam) {
        p.push(ConstraintRow::new(terms, Relation::Le, 1).with_slack_bound(1));
    }
    p.push(ConstraintRow::new((0..fam.sets.len()).map(|i| (i, 1)), Relation::Eq, l));
    p
}

/// `Σ_{i ∋ j} x_i ≥ 1` for every covered element `j`, with slack bound one
/// less than the number of sets holding `j`, then `Σ x_i = min(k, s)`.
pub fn reduce_set_covering_to_ip(fam: &SetFamily, k: usize) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    let s = fam.sets.len();
    set_vars(&mut p, s);
    for (count, terms) in element_rows(fam) {
        p.push(ConstraintRow::new(terms, Relation::Ge, 1).with_slack_bound(count - 1));
    }
    p.push(ConstraintRow::new((0..s).map(|i| (i, 1)), Relation::Eq, k.min(s)));
    p
}

/// `Σ_{i ∋ j} x_i = 1` for every covered element `j`.
pub fn reduce_exact_cover_to_ip(fam: &SetFamily) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    set_vars(&mut p, fam.sets.len());
    for (_, terms) in element_rows(fam) {
        p.push(ConstraintRow::new(terms, Relation::Eq, 1));
    }
    p
}

/// Variables `x[j]` per universe element; `Σ_{j ∈ S_i} x_j = 1` per set.
pub fn reduce_hitting_set_to_ip(fam: &SetFamily) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    for j in 1..=fam.universe_size {
        p.add_var(VariableTag::new("x", &[j as u64]));
    }
    for set in &fam.sets {
        p.push(ConstraintRow::new(set.iter().map(|&j| (j - 1, 1)), Relation::Eq, 1));
    }
    p
}

/// Variables `x[i]` per triple; for every element `j` and coordinate `c`,
/// the triples with `j` in coordinate `c` sum to one.
pub fn reduce_3dm_to_ip(tf: &TripleFamily) -> BinaryProgram {
    let mut p = BinaryProgram::new();
    set_vars(&mut p, tf.triples.len());
    let mut by = vec![[Vec::new(), Vec::new(), Vec::new()]; tf.t_size + 1];
    for (i, &(a, b, c)) in tf.triples.iter().enumerate() {
        by[a][0].push((i, 1));
        by[b][1].push((i, 1));
        by[c][2].push((i, 1));
    }
    for coords in by.into_iter().skip(1) {
        for terms in coords {
            p.push(ConstraintRow::new(terms, Relation::Eq, 1));
        }
    }
    p
}

fn family_lift(s: usize, cert: &Certificate) -> Result<Certificate> {
    let bits = leading_bits(ProblemKind::Ip01, cert, s)?;
    Ok(Certificate::SetIndices(chosen(&bits, 0, s)))
}

pub(super) mod set_packing_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::SetPacking { family, l } = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_set_packing_to_ip(family, *l)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::SetPacking { family, .. } = source else { unreachable!() };
        family_lift(family.sets.len(), cert)
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::SetPacking { family, .. }, Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = Σ|S_i| + s", family.total_entries() + family.sets.len(), p.nonzeros()),
            FormulaCheck::new("rhs entries = |U| + 1", family.support().len() + 1, p.rhs_entries()),
        ]
    }
}

pub(super) mod set_covering_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::SetCovering { family, k } = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_set_covering_to_ip(family, *k)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::SetCovering { family, .. } = source else { unreachable!() };
        family_lift(family.sets.len(), cert)
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::SetCovering { family, .. }, Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = Σ|S_i| + s", family.total_entries() + family.sets.len(), p.nonzeros()),
            FormulaCheck::new("rhs entries = |U| + 1", family.support().len() + 1, p.rhs_entries()),
        ]
    }
}

pub(super) mod exact_cover_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::ExactCover(family) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_exact_cover_to_ip(family)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::ExactCover(family) = source else { unreachable!() };
        family_lift(family.sets.len(), cert)
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::ExactCover(family), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = Σ|S_i|", family.total_entries(), p.nonzeros()),
            FormulaCheck::new("rhs entries = |U|", family.support().len(), p.rhs_entries()),
        ]
    }
}

pub(super) mod hitting_set_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::HittingSet(family) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_hitting_set_to_ip(family)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::HittingSet(family) = source else { unreachable!() };
        let u = family.universe_size;
        let bits = leading_bits(ProblemKind::Ip01, cert, u)?;
        Ok(Certificate::ElementSet(chosen(&bits, 0, u)))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::HittingSet(family), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = Σ|S_i|", family.total_entries(), p.nonzeros()),
            FormulaCheck::new("rhs entries = s", family.sets.len(), p.rhs_entries()),
        ]
    }
}

pub(super) mod three_dm_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::ThreeDimMatching(tf) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_3dm_to_ip(tf)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::ThreeDimMatching(tf) = source else { unreachable!() };
        let u = tf.triples.len();
        let bits = leading_bits(ProblemKind::Ip01, cert, u)?;
        Ok(Certificate::TripleSet(chosen(&bits, 0, u)))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::ThreeDimMatching(tf), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("nonzeros = 3|U|", 3 * tf.triples.len(), p.nonzeros()),
            FormulaCheck::new("rhs entries = 3|T|", 3 * tf.t_size, p.rhs_entries()),
        ]
    }
}
