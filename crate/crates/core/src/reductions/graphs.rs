use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::instances::{Certificate, DiGraph, Problem, ProblemKind, SetFamily, UGraph};
use crate::num::binomial2;
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

use super::{chosen, leading_bits, mismatch, FormulaCheck};

/// Variables `x[i,j]` per edge then `v[i]` per vertex. Rows: for every edge
/// `x − v_i − v_j ≥ −1`, then `x − v_i ≤ 0`, then `x − v_j ≤ 0`, followed by
/// `Σ v = k` and `Σ x = C(k,2)`.
pub fn reduce_clique_to_ip(g: &UGraph, k: usize) -> BinaryProgram {
    let e = g.edges.len();
    let mut p = BinaryProgram::new();
    for &(i, j) in &g.edges {
        p.add_var(VariableTag::new("x", &[i as u64, j as u64]));
    }
    for i in 1..=g.num_vertices {
        p.add_var(VariableTag::new("v", &[i as u64]));
    }
    let v = |i: usize| e + i - 1;
    for (x, &(i, j)) in g.edges.iter().enumerate() {
        p.push(ConstraintRow::new([(x, 1), (v(i), -1), (v(j), -1)], Relation::Ge, -1).with_slack_bound(1));
    }
    for (x, &(i, _)) in g.edges.iter().enumerate() {
        p.push(ConstraintRow::new([(x, 1), (v(i), -1)], Relation::Le, 0).with_slack_bound(1));
    }
    for (x, &(_, j)) in g.edges.iter().enumerate() {
        p.push(ConstraintRow::new([(x, 1), (v(j), -1)], Relation::Le, 0).with_slack_bound(1));
    }
    p.push(ConstraintRow::new((1..=g.num_vertices).map(|i| (v(i), 1)), Relation::Eq, k));
    p.push(ConstraintRow::new((0..e).map(|x| (x, 1)), Relation::Eq, binomial2(k as u64)));
    p
}

/// Universe is the edge list; set `j` holds the edges incident with vertex
/// `j`, in edge order.
pub fn reduce_node_cover_to_set_covering(g: &UGraph, l: usize) -> (SetFamily, usize) {
    let mut sets = vec![Vec::new(); g.num_vertices];
    for (e, &(i, j)) in g.edges.iter().enumerate() {
        sets[i - 1].push(e + 1);
        sets[j - 1].push(e + 1);
    }
    (SetFamily::new(g.edges.len(), sets), l)
}

/// Directed line graph: node `a` per arc, and an arc `a → b` whenever the
/// head of `a` is the tail of `b`. Nodes inherit the arc numbering, so a
/// feedback node set is literally a feedback arc set of the source.
pub fn reduce_fas_to_fns(g: &DiGraph, k: usize) -> (DiGraph, usize) {
    let mut out = vec![Vec::new(); g.num_vertices + 1];
    for (a, &(u, _)) in g.arcs.iter().enumerate() {
        out[u].push(a + 1);
    }
    let mut arcs = Vec::new();
    for (a, &(_, v)) in g.arcs.iter().enumerate() {
        for &b in &out[v] {
            arcs.push((a + 1, b));
        }
    }
    (DiGraph::new(g.arcs.len(), arcs), k)
}

/// Vertex `i` becomes the path `3i−2, 3i−1, 3i`; arc `(i, j)` becomes the
/// edge `{3i, 3j−2}`. Gadget edges come first, in vertex order.
pub fn reduce_dhcp_to_hcp(g: &DiGraph) -> UGraph {
    let mut edges = Vec::with_capacity(2 * g.num_vertices + g.arcs.len());
    for i in 1..=g.num_vertices {
        edges.push((3 * i - 2, 3 * i - 1));
        edges.push((3 * i - 1, 3 * i));
    }
    for &(i, j) in &g.arcs {
        edges.push((3 * i, 3 * j - 2));
    }
    UGraph::new(3 * g.num_vertices, edges)
}

/// Variables `x[i]` per vertex (0 on the chosen side) and `y[i,j]` per edge
/// (0 when the edge is cut). Four rows per edge force `y = 1` exactly when
/// the edge is not cut; the last row is `Σ w·y ≤ TW − W`.
pub fn reduce_max_cut_to_ip(g: &UGraph, threshold: u64) -> BinaryProgram {
    let n = g.num_vertices;
    let mut p = BinaryProgram::new();
    for i in 1..=n {
        p.add_var(VariableTag::new("x", &[i as u64]));
    }
    for &(i, j) in &g.edges {
        p.add_var(VariableTag::new("y", &[i as u64, j as u64]));
    }
    let x = |i: usize| i - 1;
    let y = |e: usize| n + e;
    let rows: [(i64, i64, Relation, i64); 4] = [
        (-1, 1, Relation::Le, 1),
        (1, -1, Relation::Le, 1),
        (1, 1, Relation::Ge, 1),
        (-1, -1, Relation::Ge, -1),
    ];
    for (ci, cj, rel, rhs) in rows {
        for (e, &(i, j)) in g.edges.iter().enumerate() {
            p.push(ConstraintRow::new([(y(e), 1), (x(i), ci), (x(j), cj)], rel, rhs).with_slack_bound(2));
        }
    }
    let rhs = BigInt::from(g.total_weight()) - BigInt::from(threshold);
    let bound = rhs.clone().max(BigInt::from(0));
    p.push(
        ConstraintRow::new(
            g.edges.iter().enumerate().map(|(e, _)| (y(e), g.weight(e))),
            Relation::Le,
            rhs,
        )
        .with_slack_bound(bound),
    );
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChromaticMode {
    /// Materialize every edge of the complement.
    Dense,
    /// Keep the source graph and flag it as complemented.
    Compressed,
}

pub fn reduce_chromatic_to_clique_cover(g: &UGraph, k: usize, mode: ChromaticMode) -> Problem {
    match mode {
        ChromaticMode::Dense => Problem::CliqueCover {
            graph: g.complement(),
            l: k,
            complemented: false,
        },
        ChromaticMode::Compressed => Problem::CliqueCover {
            graph: UGraph::new(g.num_vertices, g.edges.clone()),
            l: k,
            complemented: true,
        },
    }
}

pub(super) mod clique_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::Clique { graph, k } = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_clique_to_ip(graph, *k)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::Clique { graph, .. } = source else { unreachable!() };
        let (e, n) = (graph.edges.len(), graph.num_vertices);
        let bits = leading_bits(ProblemKind::Ip01, cert, e + n)?;
        Ok(Certificate::VertexSet(chosen(&bits, e, n)))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::Clique { graph, .. }, Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        let (n, e) = (graph.num_vertices, graph.edges.len());
        vec![
            FormulaCheck::new("nonzeros = N + 8e", n + 8 * e, p.nonzeros()),
            FormulaCheck::new("rhs entries = 3e + 2", 3 * e + 2, p.rhs_entries()),
        ]
    }
}

pub(super) mod node_cover_to_set_covering {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::NodeCover { graph, l } = p else { unreachable!() };
        let (family, k) = reduce_node_cover_to_set_covering(graph, *l);
        Ok(Problem::SetCovering { family, k })
    }

    pub fn lift(_source: &Problem, cert: &Certificate) -> Result<Certificate> {
        match cert {
            Certificate::SetIndices(ix) => Ok(Certificate::VertexSet(ix.clone())),
            _ => Err(mismatch(ProblemKind::SetCovering, cert)),
        }
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::NodeCover { graph, .. }, Problem::SetCovering { family, .. }) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("total set entries = 2e", 2 * graph.edges.len(), family.total_entries()),
            FormulaCheck::new("sets = N", graph.num_vertices, family.sets.len()),
        ]
    }
}

pub(super) mod fas_to_fns {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::FeedbackArcSet { graph, k } = p else { unreachable!() };
        let (graph, k) = reduce_fas_to_fns(graph, *k);
        Ok(Problem::FeedbackNodeSet { graph, k })
    }

    pub fn lift(_source: &Problem, cert: &Certificate) -> Result<Certificate> {
        match cert {
            Certificate::VertexSet(nodes) => Ok(Certificate::ArcSet(nodes.clone())),
            _ => Err(mismatch(ProblemKind::FeedbackNodeSet, cert)),
        }
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::FeedbackArcSet { graph, .. }, Problem::FeedbackNodeSet { graph: line, .. }) = (source, target)
        else {
            return Vec::new();
        };
        let n = graph.num_vertices;
        let (mut indeg, mut outdeg) = (vec![0usize; n + 1], vec![0usize; n + 1]);
        for &(u, v) in &graph.arcs {
            outdeg[u] += 1;
            indeg[v] += 1;
        }
        let pairs: usize = (1..=n).map(|v| indeg[v] * outdeg[v]).sum();
        vec![
            FormulaCheck::new("nodes = e", graph.arcs.len(), line.num_vertices),
            FormulaCheck::new("arcs = Σ c_v·d_v", pairs, line.arcs.len()),
        ]
    }
}

pub(super) mod dhcp_to_hcp {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::Dhcp(g) = p else { unreachable!() };
        Ok(Problem::Hcp(reduce_dhcp_to_hcp(g)))
    }

    /// Orients the undirected cycle so that gadget 1 is walked `1 → 2 → 3`,
    /// then reads the gadgets in visiting order.
    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::Dhcp(g) = source else { unreachable!() };
        let Certificate::CycleOrder(order) = cert else {
            return Err(mismatch(ProblemKind::Hcp, cert));
        };
        let n = g.num_vertices;
        let len = order.len();
        let broken = || Error::InvalidCertificate("cycle does not traverse the vertex gadgets in order".into());
        if len != 3 * n || n == 0 {
            return Err(broken());
        }
        let start = order.iter().position(|&v| v == 1).ok_or_else(broken)?;
        let forward = order[(start + 1) % len] == 2;
        let at = |t: usize| {
            if forward {
                order[(start + t) % len]
            } else {
                order[(start + len - t) % len]
            }
        };
        let mut cycle = Vec::with_capacity(n);
        for block in 0..n {
            let first = at(3 * block);
            if first % 3 != 1 || at(3 * block + 1) != first + 1 || at(3 * block + 2) != first + 2 {
                return Err(broken());
            }
            cycle.push(first / 3 + 1);
        }
        Ok(Certificate::CycleOrder(cycle))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::Dhcp(g), Problem::Hcp(h)) = (source, target) else {
            return Vec::new();
        };
        vec![
            FormulaCheck::new("edges = e + 2N", g.arcs.len() + 2 * g.num_vertices, h.edges.len()),
            FormulaCheck::new("vertices = 3N", 3 * g.num_vertices, h.num_vertices),
        ]
    }
}

pub(super) mod max_cut_to_ip {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::MaxCut { graph, threshold } = p else { unreachable!() };
        Ok(Problem::Ip01(reduce_max_cut_to_ip(graph, *threshold)))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::MaxCut { graph, .. } = source else { unreachable!() };
        let n = graph.num_vertices;
        let bits = leading_bits(ProblemKind::Ip01, cert, n + graph.edges.len())?;
        Ok(Certificate::VertexSet((1..=n).filter(|&i| !bits[i - 1]).collect()))
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        let (Problem::MaxCut { graph, .. }, Problem::Ip01(p)) = (source, target) else {
            return Vec::new();
        };
        let e = graph.edges.len();
        let mut checks = vec![FormulaCheck::new("rhs entries = 4e + 1", 4 * e + 1, p.rhs_entries())];
        if (0..e).all(|x| graph.weight(x) > 0) {
            checks.push(FormulaCheck::new("nonzeros = 13e", 13 * e, p.nonzeros()));
        }
        checks
    }
}

fn coloring_from_partition(n: usize, cert: &Certificate) -> Result<Certificate> {
    let Certificate::CliquePartition(parts) = cert else {
        return Err(mismatch(ProblemKind::CliqueCover, cert));
    };
    let mut colors = vec![0usize; n];
    for (c, part) in parts.iter().filter(|p| !p.is_empty()).enumerate() {
        for &v in part {
            if v == 0 || v > n || colors[v - 1] != 0 {
                return Err(Error::InvalidCertificate(format!("vertex {v} is out of range or repeated")));
            }
            colors[v - 1] = c + 1;
        }
    }
    if let Some(v) = colors.iter().position(|&c| c == 0) {
        return Err(Error::InvalidCertificate(format!("vertex {} is in no clique", v + 1)));
    }
    Ok(Certificate::Coloring(colors))
}

fn chromatic_formulas(source: &Problem, target: &Problem, dense: bool) -> Vec<FormulaCheck> {
    let (Problem::ChromaticNumber { graph, .. }, Problem::CliqueCover { graph: h, .. }) = (source, target) else {
        return Vec::new();
    };
    let n = graph.num_vertices as u64;
    if dense {
        let expected = (binomial2(n) - graph.edges.len() as u64) as usize;
        vec![FormulaCheck::new("edges = C(N,2) − e", expected, h.edges.len())]
    } else {
        vec![FormulaCheck::new("stored edges = e", graph.edges.len(), h.edges.len())]
    }
}

pub(super) mod chromatic_dense {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::ChromaticNumber { graph, k } = p else { unreachable!() };
        Ok(reduce_chromatic_to_clique_cover(graph, *k, ChromaticMode::Dense))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::ChromaticNumber { graph, .. } = source else { unreachable!() };
        coloring_from_partition(graph.num_vertices, cert)
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        chromatic_formulas(source, target, true)
    }
}

pub(super) mod chromatic_compressed {
    use super::*;

    pub fn transform(p: &Problem) -> Result<Problem> {
        let Problem::ChromaticNumber { graph, k } = p else { unreachable!() };
        Ok(reduce_chromatic_to_clique_cover(graph, *k, ChromaticMode::Compressed))
    }

    pub fn lift(source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let Problem::ChromaticNumber { graph, .. } = source else { unreachable!() };
        coloring_from_partition(graph.num_vertices, cert)
    }

    pub fn formulas(source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        chromatic_formulas(source, target, false)
    }
}
