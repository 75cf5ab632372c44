//! Exhaustive decision procedures for small instances.
//!
//! Each kind is decided by enumerating its natural witness space in a fixed
//! order and returning the first candidate the verifier accepts. Subset
//! spaces are walked by increasing size and lexicographically within a
//! size, assignments and colourings with the first position most
//! significant, and cycles as vertex orders starting at vertex 1. Before
//! searching, the size of the whole candidate space is compared against the
//! budget and the call is refused when it does not fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{verify_certificate, Certificate, Problem, ProblemKind, UGraph};
use crate::program::solve_ip;

pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Candidates (or search nodes, for the pruned searches) examined.
    pub explored: u64,
}

impl OracleVerdict {
    fn found(cert: Option<Certificate>, explored: u64) -> Self {
        OracleVerdict {
            answer: if cert.is_some() { Answer::Yes } else { Answer::No },
            certificate: cert,
            explored,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn subsets_up_to(n: usize, max: usize) -> u128 {
    (0..=max.min(n)).fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)))
}

fn pow(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

fn factorial(n: usize) -> u128 {
    (1..=n).fold(1u128, |acc, i| acc.saturating_mul(i as u128))
}

/// Number of partitions of `n` items into at most `blocks` blocks.
fn partitions_up_to(n: usize, blocks: usize) -> u128 {
    // Stirling numbers of the second kind, row by row
    let mut row = vec![0u128; blocks + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=blocks).rev() {
            row[j] = row[j - 1].saturating_add((j as u128).saturating_mul(row[j]));
        }
        row[0] = 0;
    }
    row.iter().fold(0u128, |acc, &x| acc.saturating_add(x))
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Walks the subsets of `1..=n` of size `lo..=hi`, by size and then
/// lexicographically, until `accept` holds.
fn first_subset(n: usize, lo: usize, hi: usize, explored: &mut u64, mut accept: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    for size in lo..=hi.min(n) {
        let mut c: Vec<usize> = (1..=size).collect();
        loop {
            *explored += 1;
            if accept(&c) {
                return Some(c);
            }
            // position p holds at most n − size + p + 1
            let mut i = size;
            while i > 0 && c[i - 1] == n - size + i {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            c[i - 1] += 1;
            for j in i..size {
                c[j] = c[j - 1] + 1;
            }
        }
    }
    None
}

/// Decides `problem` by exhaustive search over at most `budget` candidates.
pub fn solve(problem: &Problem, budget: u128) -> Result<OracleVerdict> {
    use Problem as P;
    problem.validate()?;
    let mut explored = 0u64;
    let verify = |c: &Certificate| verify_certificate(problem, c).unwrap_or(false);
    let cert = match problem {
        P::Sat(f) | P::ThreeSat(f) => {
            let m = f.num_literals;
            check_budget(pow(2, m), budget)?;
            let mut a = vec![false; m];
            let mut hit = None;
            for mask in 0u64..1 << m {
                explored += 1;
                for (i, v) in a.iter_mut().enumerate() {
                    *v = mask >> (m - 1 - i) & 1 == 1;
                }
                if f.is_satisfied(&a) {
                    hit = Some(Certificate::Assignment(a.clone()));
                    break;
                }
            }
            hit
        }
        P::Ip01(p) => {
            let v = p.num_vars();
            check_budget(pow(2, v), budget)?;
            let s = solve_ip(p, v)?;
            explored = s.explored;
            s.assignment.map(|a| Certificate::from_bits(&a))
        }
        P::Clique { graph, k } => {
            check_budget(binomial(graph.num_vertices, *k), budget)?;
            first_subset(graph.num_vertices, *k, *k, &mut explored, |s| {
                verify(&Certificate::VertexSet(s.to_vec()))
            })
            .map(Certificate::VertexSet)
        }
        P::NodeCover { graph, l } => vertex_sets(graph.num_vertices, *l, budget, &mut explored, &verify)?,
        P::FeedbackNodeSet { graph, k } => vertex_sets(graph.num_vertices, *k, budget, &mut explored, &verify)?,
        P::MaxCut { graph, .. } => {
            let n = graph.num_vertices;
            vertex_sets(n, n, budget, &mut explored, &verify)?
        }
        P::FeedbackArcSet { graph, k } => {
            let e = graph.arcs.len();
            check_budget(subsets_up_to(e, *k), budget)?;
            first_subset(e, 0, *k, &mut explored, |s| verify(&Certificate::ArcSet(s.to_vec())))
                .map(Certificate::ArcSet)
        }
        P::SetPacking { family, l } => {
            let s = family.sets.len();
            check_budget(binomial(s, *l), budget)?;
            first_subset(s, *l, *l, &mut explored, |ix| verify(&Certificate::SetIndices(ix.to_vec())))
                .map(Certificate::SetIndices)
        }
        P::SetCovering { family, k } => {
            let s = family.sets.len();
            check_budget(subsets_up_to(s, *k), budget)?;
            first_subset(s, 0, *k, &mut explored, |ix| verify(&Certificate::SetIndices(ix.to_vec())))
                .map(Certificate::SetIndices)
        }
        P::ExactCover(family) => {
            let s = family.sets.len();
            check_budget(pow(2, s), budget)?;
            first_subset(s, 0, s, &mut explored, |ix| verify(&Certificate::SetIndices(ix.to_vec())))
                .map(Certificate::SetIndices)
        }
        P::HittingSet(family) => {
            let u = family.universe_size;
            check_budget(pow(2, u), budget)?;
            first_subset(u, 0, u, &mut explored, |w| verify(&Certificate::ElementSet(w.to_vec())))
                .map(Certificate::ElementSet)
        }
        P::ThreeDimMatching(tf) => {
            let u = tf.triples.len();
            check_budget(binomial(u, tf.t_size), budget)?;
            first_subset(u, tf.t_size, tf.t_size, &mut explored, |ix| {
                verify(&Certificate::TripleSet(ix.to_vec()))
            })
            .map(Certificate::TripleSet)
        }
        P::Knapsack(ks) => item_sets(ks.values.len(), budget, &mut explored, &verify)?,
        P::Partition(p) => item_sets(p.values.len(), budget, &mut explored, &verify)?,
        P::SteinerTree(st) => {
            let e = st.graph.edges.len();
            check_budget(pow(2, e), budget)?;
            let root = st.terminals[0];
            first_subset(e, 0, e, &mut explored, |ix| {
                verify(&Certificate::SteinerTree {
                    edges: ix.to_vec(),
                    root,
                })
            })
            .map(|edges| Certificate::SteinerTree { edges, root })
        }
        P::Hcp(g) => {
            let n = g.num_vertices;
            if n < 3 {
                None
            } else {
                check_budget(factorial(n - 1), budget)?;
                let adj = g.adjacency();
                hamiltonian(n, &|u, v| adj[u - 1][v - 1], &mut explored)
            }
        }
        P::Dhcp(g) => {
            let n = g.num_vertices;
            if n < 2 {
                None
            } else {
                check_budget(factorial(n - 1), budget)?;
                let mut adj = vec![vec![false; n]; n];
                for &(u, v) in &g.arcs {
                    adj[u - 1][v - 1] = true;
                }
                hamiltonian(n, &|u, v| adj[u - 1][v - 1], &mut explored)
            }
        }
        P::ChromaticNumber { graph, k } => {
            check_budget(pow(*k, graph.num_vertices), budget)?;
            let adj = graph.adjacency();
            colouring(graph.num_vertices, *k, &adj, &mut explored).map(Certificate::Coloring)
        }
        P::CliqueCover { graph, l, complemented } => {
            check_budget(partitions_up_to(graph.num_vertices, *l), budget)?;
            clique_partition(graph, *l, *complemented, &mut explored).map(Certificate::CliquePartition)
        }
        P::JobSequencing => return Err(Error::UnsupportedKind(ProblemKind::JobSequencing)),
    };
    Ok(OracleVerdict::found(cert, explored))
}

fn vertex_sets(
    n: usize,
    max: usize,
    budget: u128,
    explored: &mut u64,
    verify: &dyn Fn(&Certificate) -> bool,
) -> Result<Option<Certificate>> {
    check_budget(subsets_up_to(n, max), budget)?;
    Ok(first_subset(n, 0, max, explored, |s| verify(&Certificate::VertexSet(s.to_vec()))).map(Certificate::VertexSet))
}

fn item_sets(
    r: usize,
    budget: u128,
    explored: &mut u64,
    verify: &dyn Fn(&Certificate) -> bool,
) -> Result<Option<Certificate>> {
    check_budget(pow(2, r), budget)?;
    Ok(first_subset(r, 0, r, explored, |s| verify(&Certificate::ItemSet(s.to_vec()))).map(Certificate::ItemSet))
}

/// Vertex orders starting at 1; a partial order is abandoned as soon as its
/// last step has no edge.
fn hamiltonian(n: usize, adjacent: &dyn Fn(usize, usize) -> bool, explored: &mut u64) -> Option<Certificate> {
    fn extend(
        path: &mut Vec<usize>,
        used: &mut [bool],
        n: usize,
        adjacent: &dyn Fn(usize, usize) -> bool,
        explored: &mut u64,
    ) -> bool {
        *explored += 1;
        let last = *path.last().expect("path starts at 1");
        if path.len() == n {
            return adjacent(last, path[0]);
        }
        for v in 2..=n {
            if !used[v] && adjacent(last, v) {
                used[v] = true;
                path.push(v);
                if extend(path, used, n, adjacent, explored) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    let mut path = vec![1];
    let mut used = vec![false; n + 1];
    used[1] = true;
    extend(&mut path, &mut used, n, adjacent, explored).then_some(Certificate::CycleOrder(path))
}

/// Colour maps in lexicographic order, vertex 1 most significant; a partial
/// map is abandoned once two adjacent vertices share a colour.
fn colouring(n: usize, k: usize, adj: &[Vec<bool>], explored: &mut u64) -> Option<Vec<usize>> {
    fn extend(c: &mut Vec<usize>, n: usize, k: usize, adj: &[Vec<bool>], explored: &mut u64) -> bool {
        *explored += 1;
        let v = c.len();
        if v == n {
            return true;
        }
        for colour in 1..=k {
            if (0..v).all(|u| !adj[u][v] || c[u] != colour) {
                c.push(colour);
                if extend(c, n, k, adj, explored) {
                    return true;
                }
                c.pop();
            }
        }
        false
    }
    let mut c = Vec::with_capacity(n);
    extend(&mut c, n, k, adj, explored).then_some(c)
}

/// Set partitions as restricted growth strings in lexicographic order, at
/// most `l` blocks, every block a clique of the (possibly complemented)
/// graph.
fn clique_partition(g: &UGraph, l: usize, complemented: bool, explored: &mut u64) -> Option<Vec<Vec<usize>>> {
    let n = g.num_vertices;
    let adj = g.adjacency();
    let linked = |u: usize, v: usize| adj[u][v] != complemented;
    fn extend(
        block: &mut Vec<usize>,
        blocks: usize,
        n: usize,
        l: usize,
        linked: &dyn Fn(usize, usize) -> bool,
        explored: &mut u64,
    ) -> bool {
        *explored += 1;
        let v = block.len();
        if v == n {
            return true;
        }
        for b in 0..(blocks + 1).min(l) {
            if (0..v).all(|u| block[u] != b || linked(u, v)) {
                block.push(b);
                if extend(block, blocks.max(b + 1), n, l, linked, explored) {
                    return true;
                }
                block.pop();
            }
        }
        false
    }
    let mut block = Vec::with_capacity(n);
    if !extend(&mut block, 0, n, l, &linked, explored) {
        return None;
    }
    let used = block.iter().map(|&b| b + 1).max().unwrap_or(0);
    let mut parts = vec![Vec::new(); used];
    for (v, &b) in block.iter().enumerate() {
        parts[b].push(v + 1);
    }
    Some(parts)
}
