use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::instances::{Certificate, Problem, ProblemKind, SteinerInstance};
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

use super::{leading_bits, FormulaCheck};

/// Oriented edge variables `x[i,j]` and `x[j,i]` per edge (in edge order),
/// then membership `y[j]` and root `z[j]` per vertex. Rows:
///
/// 1. `Σ z = 1`
/// 2. `y_j + z_j = 1` for terminals
/// 3. `y_j + z_j ≤ 1` for the other vertices
/// 4. `y_j − Σ_i x_ij = 0` for every vertex
/// 5. `x_ij − y_i − z_i ≤ 0` for every oriented edge
/// 6. `x_ij + z_j ≤ 1` for every oriented edge
/// 7. `Σ w_ij x_ij ≤ k`, omitted when `k` covers the total weight
///
/// Rows 4 to 6 give every non-root member exactly one entering edge from a
/// member or the root, but nothing rules out a directed cycle of non-root
/// members, so a feasible program need not describe a tree.
pub fn reduce_steiner_tree_to_ip(st: &SteinerInstance) -> BinaryProgram {
    let g = &st.graph;
    let n = g.num_vertices;
    let mut arcs = Vec::with_capacity(2 * g.edges.len());
    for (e, &(i, j)) in g.edges.iter().enumerate() {
        arcs.push((i, j, e));
        arcs.push((j, i, e));
    }
    let mut p = BinaryProgram::new();
    for &(i, j, _) in &arcs {
        p.add_var(VariableTag::new("x", &[i as u64, j as u64]));
    }
    for j in 1..=n {
        p.add_var(VariableTag::new("y", &[j as u64]));
    }
    for j in 1..=n {
        p.add_var(VariableTag::new("z", &[j as u64]));
    }
    let a = arcs.len();
    let y = |j: usize| a + j - 1;
    let z = |j: usize| a + n + j - 1;
    let mut terminal = vec![false; n + 1];
    for &r in &st.terminals {
        terminal[r] = true;
    }

    p.push(ConstraintRow::new((1..=n).map(|j| (z(j), 1)), Relation::Eq, 1));
    for j in (1..=n).filter(|&j| terminal[j]) {
        p.push(ConstraintRow::new([(y(j), 1), (z(j), 1)], Relation::Eq, 1));
    }
    for j in (1..=n).filter(|&j| !terminal[j]) {
        p.push(ConstraintRow::new([(y(j), 1), (z(j), 1)], Relation::Le, 1).with_slack_bound(1));
    }
    let mut entering = vec![Vec::new(); n + 1];
    for (x, &(_, j, _)) in arcs.iter().enumerate() {
        entering[j].push((x, -1));
    }
    for (j, into) in entering.into_iter().enumerate().skip(1) {
        let terms = std::iter::once((y(j), 1)).chain(into);
        p.push(ConstraintRow::new(terms, Relation::Eq, 0));
    }
    for (x, &(i, _, _)) in arcs.iter().enumerate() {
        p.push(ConstraintRow::new([(x, 1), (y(i), -1), (z(i), -1)], Relation::Le, 0).with_slack_bound(1));
    }
    for (x, &(_, j, _)) in arcs.iter().enumerate() {
        p.push(ConstraintRow::new([(x, 1), (z(j), 1)], Relation::Le, 1).with_slack_bound(1));
    }
    if (st.budget as u128) < g.total_weight() {
        let terms = arcs.iter().enumerate().map(|(x, &(_, _, e))| (x, g.weight(e)));
        p.push(ConstraintRow::new(terms, Relation::Le, st.budget).with_slack_bound(BigInt::from(st.budget)));
    }
    p
}

pub(super) mod steiner_tree_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::SteinerTree(st) = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_steiner_tree_to_ip(st)))
    }

    /// Edges with either orientation selected, rooted at the `z` vertex.
    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::SteinerTree(st) = source else { unreachable!() };
        let e = st.graph.edges.len();
        let n = st.graph.num_vertices;
        let bits = leading_bits(ProblemKind::Ip01, cert, 2 * e + 2 * n)?;
        let edges = (0..e).filter(|&x| bits[2 * x] || bits[2 * x + 1]).map(|x| x + 1).collect();
        let root = (1..=n)
            .find(|&j| bits[2 * e + n + j - 1])
            .ok_or_else(|| Error::InvalidCertificate("no root variable is set".into()))?;
        Ok(Certificate::SteinerTree { edges, root })
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::SteinerTree(st), Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        let g = &st.graph;
        let (n, a) = (g.num_vertices, 2 * g.edges.len());
        let budget_row = (st.budget as u128) < g.total_weight();
        let positive = (0..g.edges.len()).all(|x| g.weight(x) > 0);
        let mut checks = vec![FormulaCheck::new(
            "rhs entries = 2N + 2a + 1 (+1 with budget row)",
            2 * n + 2 * a + 1 + budget_row as usize,
            p.rhs_entries(),
        )];
        if budget_row && positive {
            checks.push(FormulaCheck::new("nonzeros = 4N + 7a", 4 * n + 7 * a, p.nonzeros()));
        } else if !budget_row {
            checks.push(FormulaCheck::new("nonzeros = 4N + 6a", 4 * n + 6 * a, p.nonzeros()));
        }
        checks
    }
}
