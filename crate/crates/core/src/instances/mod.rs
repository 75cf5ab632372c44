//! Problem instances for Karp's 21 problems.
//!
//! Every vertex, literal, set element, item and triple index that appears in
//! an instance or a certificate is 1-based. [`Problem`] serializes as the
//! JSON envelope `{"kind": <tag>, "payload": {...}}`.

mod certificate;
mod verify;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::program::BinaryProgram;

pub use certificate::Certificate;
pub use verify::verify_certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Sat,
    #[serde(rename = "threesat")]
    ThreeSat,
    #[serde(rename = "ip01")]
    Ip01,
    Clique,
    SetPacking,
    NodeCover,
    SetCovering,
    FeedbackNodeSet,
    FeedbackArcSet,
    Dhcp,
    Hcp,
    ChromaticNumber,
    CliqueCover,
    ExactCover,
    HittingSet,
    SteinerTree,
    ThreeDimMatching,
    Knapsack,
    JobSequencing,
    Partition,
    MaxCut,
}

impl ProblemKind {
    /// All 21 kinds in the order of Karp's list.
    pub const ALL: [ProblemKind; 21] = [
        ProblemKind::Sat,
        ProblemKind::Ip01,
        ProblemKind::Clique,
        ProblemKind::SetPacking,
        ProblemKind::NodeCover,
        ProblemKind::SetCovering,
        ProblemKind::FeedbackNodeSet,
        ProblemKind::FeedbackArcSet,
        ProblemKind::Dhcp,
        ProblemKind::Hcp,
        ProblemKind::ThreeSat,
        ProblemKind::ChromaticNumber,
        ProblemKind::CliqueCover,
        ProblemKind::ExactCover,
        ProblemKind::HittingSet,
        ProblemKind::SteinerTree,
        ProblemKind::ThreeDimMatching,
        ProblemKind::Knapsack,
        ProblemKind::JobSequencing,
        ProblemKind::Partition,
        ProblemKind::MaxCut,
    ];

    pub fn tag(self) -> &'static str {
        use ProblemKind::*;
        match self {
            Sat => "sat",
            ThreeSat => "threesat",
            Ip01 => "ip01",
            Clique => "clique",
            SetPacking => "set_packing",
            NodeCover => "node_cover",
            SetCovering => "set_covering",
            FeedbackNodeSet => "feedback_node_set",
            FeedbackArcSet => "feedback_arc_set",
            Dhcp => "dhcp",
            Hcp => "hcp",
            ChromaticNumber => "chromatic_number",
            CliqueCover => "clique_cover",
            ExactCover => "exact_cover",
            HittingSet => "hitting_set",
            SteinerTree => "steiner_tree",
            ThreeDimMatching => "three_dim_matching",
            Knapsack => "knapsack",
            JobSequencing => "job_sequencing",
            Partition => "partition",
            MaxCut => "max_cut",
        }
    }

    /// Position in Karp's numbered list (1..=21).
    pub fn karp_number(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).unwrap() + 1
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// CNF formula over variables `1..=num_literals`; a clause holds signed,
/// non-zero variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_literals: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_literals: usize, clauses: Vec<Vec<i64>>) -> Self {
        CnfFormula {
            num_literals,
            clauses,
        }
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    fn validate(&self, max_clause: Option<usize>) -> Result<()> {
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() {
                return invalid(format!("clause {} is empty", i + 1));
            }
            if let Some(cap) = max_clause {
                if clause.len() > cap {
                    return invalid(format!("clause {} has {} literals, more than {cap}", i + 1, clause.len()));
                }
            }
            for &l in clause {
                if l == 0 || l.unsigned_abs() as usize > self.num_literals {
                    return invalid(format!("literal {l} in clause {} is out of range", i + 1));
                }
            }
        }
        Ok(())
    }
}

/// Simple undirected graph on vertices `1..=num_vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
}

impl UGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        UGraph {
            num_vertices,
            edges,
            weights: None,
        }
    }

    pub fn weighted(num_vertices: usize, edges: Vec<(usize, usize)>, weights: Vec<u64>) -> Self {
        UGraph {
            num_vertices,
            edges,
            weights: Some(weights),
        }
    }

    pub fn weight(&self, edge: usize) -> u64 {
        self.weights.as_ref().map_or(1, |w| w[edge])
    }

    pub fn total_weight(&self) -> u128 {
        (0..self.edges.len()).map(|e| self.weight(e) as u128).sum()
    }

    /// 0-based adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.num_vertices;
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in &self.edges {
            adj[i - 1][j - 1] = true;
            adj[j - 1][i - 1] = true;
        }
        adj
    }

    /// Edges of the complement graph, in lexicographic order.
    pub fn complement(&self) -> UGraph {
        let adj = self.adjacency();
        let n = self.num_vertices;
        let edges = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| !adj[i - 1][j - 1])
            .collect();
        UGraph::new(n, edges)
    }

    fn validate(&self, weighted: bool) -> Result<()> {
        let mut seen = HashSet::new();
        for &(i, j) in &self.edges {
            if i == 0 || j == 0 || i > self.num_vertices || j > self.num_vertices {
                return invalid(format!("edge ({i},{j}) is out of range"));
            }
            if i == j {
                return invalid(format!("self-loop at vertex {i}"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return invalid(format!("duplicate edge ({i},{j})"));
            }
        }
        match (&self.weights, weighted) {
            (Some(w), true) if w.len() != self.edges.len() => {
                invalid(format!("{} weights for {} edges", w.len(), self.edges.len()))
            }
            (None, true) => invalid("edge weights are required"),
            (Some(_), false) => invalid("edge weights are not allowed for this kind"),
            _ => Ok(()),
        }
    }
}

/// Directed graph on vertices `1..=num_vertices` without duplicate arcs or
/// self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiGraph {
    pub num_vertices: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl DiGraph {
    pub fn new(num_vertices: usize, arcs: Vec<(usize, usize)>) -> Self {
        DiGraph { num_vertices, arcs }
    }

    /// Whether the graph restricted to kept vertices and kept arcs is acyclic
    /// (Kahn's algorithm). Both masks are 0-based.
    pub fn is_acyclic_with(&self, keep_vertex: &[bool], keep_arc: &[bool]) -> bool {
        let n = self.num_vertices;
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for (a, &(u, v)) in self.arcs.iter().enumerate() {
            if keep_arc[a] && keep_vertex[u - 1] && keep_vertex[v - 1] {
                out[u - 1].push(v - 1);
                indeg[v - 1] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| keep_vertex[v] && indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(u) = stack.pop() {
            removed += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        removed == keep_vertex.iter().filter(|&&k| k).count()
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_with(&vec![true; self.num_vertices], &vec![true; self.arcs.len()])
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for &(i, j) in &self.arcs {
            if i == 0 || j == 0 || i > self.num_vertices || j > self.num_vertices {
                return invalid(format!("arc ({i},{j}) is out of range"));
            }
            if i == j {
                return invalid(format!("self-loop at vertex {i}"));
            }
            if !seen.insert((i, j)) {
                return invalid(format!("duplicate arc ({i},{j})"));
            }
        }
        Ok(())
    }
}

/// Family of sets over the universe `1..=universe_size`. Duplicate sets are
/// allowed and count with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Self {
        SetFamily {
            universe_size,
            sets,
        }
    }

    pub fn total_entries(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Elements that occur in at least one set, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.universe_size + 1];
        for &x in self.sets.iter().flatten() {
            seen[x] = true;
        }
        (1..=self.universe_size).filter(|&x| seen[x]).collect()
    }

    /// For every element, the 1-based indices of the sets containing it.
    pub fn occurrences(&self) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); self.universe_size + 1];
        for (i, set) in self.sets.iter().enumerate() {
            for &x in set {
                occ[x].push(i + 1);
            }
        }
        occ
    }

    fn validate(&self) -> Result<()> {
        for (i, set) in self.sets.iter().enumerate() {
            let mut seen = HashSet::new();
            for &x in set {
                if x == 0 || x > self.universe_size {
                    return invalid(format!("element {x} of set {} is out of range", i + 1));
                }
                if !seen.insert(x) {
                    return invalid(format!("set {} repeats element {x}", i + 1));
                }
            }
        }
        Ok(())
    }
}

/// Triples over `T × T × T` with `T = 1..=t_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleFamily {
    pub t_size: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl TripleFamily {
    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for &(a, b, c) in &self.triples {
            if [a, b, c].iter().any(|&x| x == 0 || x > self.t_size) {
                return invalid(format!("triple ({a},{b},{c}) is out of range"));
            }
            if !seen.insert((a, b, c)) {
                return invalid(format!("duplicate triple ({a},{b},{c})"));
            }
        }
        Ok(())
    }
}

fn check_values(values: &[u64]) -> Result<u64> {
    if let Some(pos) = values.iter().position(|&v| v == 0) {
        return invalid(format!("value {} is zero; values must be positive", pos + 1));
    }
    values
        .iter()
        .try_fold(0u64, |acc, &v| acc.checked_add(v))
        .filter(|&s| s < u64::MAX)
        .ok_or_else(|| Error::InvalidInstance("sum of values overflows 64 bits".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Knapsack {
    pub values: Vec<u64>,
    pub target: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub values: Vec<u64>,
}

impl Partition {
    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerInstance {
    pub graph: UGraph,
    pub terminals: Vec<usize>,
    pub budget: u64,
}

/// A problem instance, tagged by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Problem {
    Sat(CnfFormula),
    /// CNF with at most three literals per clause.
    #[serde(rename = "threesat")]
    ThreeSat(CnfFormula),
    #[serde(rename = "ip01")]
    Ip01(BinaryProgram),
    Clique { graph: UGraph, k: usize },
    SetPacking { family: SetFamily, l: usize },
    NodeCover { graph: UGraph, l: usize },
    SetCovering { family: SetFamily, k: usize },
    FeedbackNodeSet { graph: DiGraph, k: usize },
    FeedbackArcSet { graph: DiGraph, k: usize },
    Dhcp(DiGraph),
    Hcp(UGraph),
    ChromaticNumber { graph: UGraph, k: usize },
    /// When `complemented` is set the instance's graph is the complement of
    /// the stored one.
    CliqueCover {
        graph: UGraph,
        l: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        complemented: bool,
    },
    ExactCover(SetFamily),
    HittingSet(SetFamily),
    SteinerTree(SteinerInstance),
    ThreeDimMatching(TripleFamily),
    Knapsack(Knapsack),
    JobSequencing,
    Partition(Partition),
    MaxCut { graph: UGraph, threshold: u64 },
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        use Problem::*;
        match self {
            Sat(_) => ProblemKind::Sat,
            ThreeSat(_) => ProblemKind::ThreeSat,
            Ip01(_) => ProblemKind::Ip01,
            Clique { .. } => ProblemKind::Clique,
            SetPacking { .. } => ProblemKind::SetPacking,
            NodeCover { .. } => ProblemKind::NodeCover,
            SetCovering { .. } => ProblemKind::SetCovering,
            FeedbackNodeSet { .. } => ProblemKind::FeedbackNodeSet,
            FeedbackArcSet { .. } => ProblemKind::FeedbackArcSet,
            Dhcp(_) => ProblemKind::Dhcp,
            Hcp(_) => ProblemKind::Hcp,
            ChromaticNumber { .. } => ProblemKind::ChromaticNumber,
            CliqueCover { .. } => ProblemKind::CliqueCover,
            ExactCover(_) => ProblemKind::ExactCover,
            HittingSet(_) => ProblemKind::HittingSet,
            SteinerTree(_) => ProblemKind::SteinerTree,
            ThreeDimMatching(_) => ProblemKind::ThreeDimMatching,
            Knapsack(_) => ProblemKind::Knapsack,
            JobSequencing => ProblemKind::JobSequencing,
            Partition(_) => ProblemKind::Partition,
            MaxCut { .. } => ProblemKind::MaxCut,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use Problem::*;
        match self {
            Sat(f) => f.validate(None),
            ThreeSat(f) => f.validate(Some(3)),
            Ip01(p) => p.validate(),
            Clique { graph, k } => {
                graph.validate(false)?;
                if *k == 0 || *k > graph.num_vertices {
                    return invalid(format!("clique size {k} must lie in 1..={}", graph.num_vertices));
                }
                Ok(())
            }
            NodeCover { graph, l } => {
                graph.validate(false)?;
                bounded(*l, graph.num_vertices, "cover size")
            }
            ChromaticNumber { graph, k } => {
                graph.validate(false)?;
                bounded(*k, graph.num_vertices.max(1), "colour count")
            }
            CliqueCover { graph, l, .. } => {
                graph.validate(false)?;
                bounded(*l, graph.num_vertices.max(1), "clique count")
            }
            SetPacking { family, .. } | SetCovering { family, .. } => family.validate(),
            FeedbackNodeSet { graph, .. } | FeedbackArcSet { graph, .. } | Dhcp(graph) => {
                graph.validate()
            }
            Hcp(graph) => graph.validate(false),
            ExactCover(family) | HittingSet(family) => family.validate(),
            SteinerTree(st) => {
                st.graph.validate(true)?;
                if st.terminals.is_empty() {
                    return invalid("terminal set is empty");
                }
                let mut seen = HashSet::new();
                for &r in &st.terminals {
                    if r == 0 || r > st.graph.num_vertices {
                        return invalid(format!("terminal {r} is out of range"));
                    }
                    if !seen.insert(r) {
                        return invalid(format!("terminal {r} listed twice"));
                    }
                }
                Ok(())
            }
            ThreeDimMatching(tf) => tf.validate(),
            Knapsack(ks) => check_values(&ks.values).map(drop),
            Partition(p) => check_values(&p.values).map(drop),
            MaxCut { graph, .. } => {
                graph.validate(true)?;
                if graph.total_weight() >= u64::MAX as u128 {
                    return invalid("total edge weight overflows 64 bits");
                }
                Ok(())
            }
            JobSequencing => Err(Error::UnsupportedKind(ProblemKind::JobSequencing)),
        }
    }
}

fn bounded(v: usize, max: usize, what: &str) -> Result<()> {
    if v > max {
        return invalid(format!("{what} {v} exceeds {max}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::size::{measure_input_size, SizeMode};

    fn k3() -> UGraph {
        UGraph::new(3, vec![(1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn kind_tags_round_trip() {
        for kind in ProblemKind::ALL {
            assert_eq!(kind.tag().parse::<ProblemKind>().unwrap(), kind);
            assert_eq!(serde_json::to_value(kind).unwrap(), kind.tag());
        }
        assert_eq!(ProblemKind::ThreeSat.karp_number(), 11);
        assert_eq!(ProblemKind::JobSequencing.karp_number(), 19);
        assert!("vertex_cover".parse::<ProblemKind>().is_err());
    }

    #[test]
    fn envelope_shape() {
        let p = Problem::Clique { graph: k3(), k: 2 };
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["kind"], "clique");
        assert_eq!(v["payload"]["k"], 2);
        assert_eq!(v["payload"]["graph"]["edges"][0], serde_json::json!([1, 2]));
        let js: Problem = serde_json::from_str(r#"{"kind":"job_sequencing"}"#).unwrap();
        assert_eq!(js, Problem::JobSequencing);
        let f: Problem =
            serde_json::from_str(r#"{"kind":"sat","payload":{"num_literals":2,"clauses":[[1,-2]]}}"#).unwrap();
        assert_eq!(f.kind(), ProblemKind::Sat);
    }

    #[test]
    fn element_sizes_from_worked_examples() {
        let sat = Problem::Sat(CnfFormula::new(4, vec![vec![1, 2, 3], vec![-1, 2, 3, 4]]));
        assert_eq!(measure_input_size(&sat, SizeMode::Element).unwrap(), 7);
        let hcp = Problem::Hcp(UGraph::new(4, vec![]));
        assert_eq!(measure_input_size(&hcp, SizeMode::Element).unwrap(), 0);
        let st = Problem::SteinerTree(SteinerInstance {
            graph: UGraph::weighted(4, vec![(1, 2), (2, 3), (3, 4), (1, 4)], vec![1, 1, 1, 1]),
            terminals: vec![1, 3],
            budget: 2,
        });
        assert_eq!(measure_input_size(&st, SizeMode::Element).unwrap(), 11);
        assert!(matches!(
            measure_input_size(&Problem::JobSequencing, SizeMode::Element),
            Err(Error::UnsupportedKind(ProblemKind::JobSequencing))
        ));
    }

    #[test]
    fn validation_catches_shape_errors() {
        let bad = [
            Problem::Sat(CnfFormula::new(2, vec![vec![]])),
            Problem::Sat(CnfFormula::new(2, vec![vec![3]])),
            Problem::ThreeSat(CnfFormula::new(4, vec![vec![1, 2, 3, 4]])),
            Problem::Clique { graph: k3(), k: 4 },
            Problem::Clique { graph: k3(), k: 0 },
            Problem::Hcp(UGraph::new(2, vec![(1, 1)])),
            Problem::Hcp(UGraph::new(2, vec![(1, 2), (2, 1)])),
            Problem::Hcp(UGraph::weighted(2, vec![(1, 2)], vec![3])),
            Problem::Dhcp(DiGraph::new(2, vec![(1, 2), (1, 2)])),
            Problem::ExactCover(SetFamily::new(2, vec![vec![1, 1]])),
            Problem::ExactCover(SetFamily::new(2, vec![vec![3]])),
            Problem::Partition(Partition { values: vec![1, 0] }),
            Problem::MaxCut { graph: k3(), threshold: 1 },
            Problem::SteinerTree(SteinerInstance {
                graph: UGraph::weighted(2, vec![(1, 2)], vec![1]),
                terminals: vec![],
                budget: 0,
            }),
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
        assert!(Problem::Dhcp(DiGraph::new(2, vec![(1, 2), (2, 1)])).validate().is_ok());
    }

    #[test]
    fn complement_is_an_involution() {
        let g = UGraph::new(5, vec![(1, 2), (2, 3), (4, 5), (1, 5)]);
        let mut back = g.complement().complement();
        back.edges.sort();
        let mut edges = g.edges.clone();
        edges.sort();
        assert_eq!(back.edges, edges);
        assert!(k3().complement().edges.is_empty());
    }

    #[test]
    fn acyclicity_check() {
        let g = DiGraph::new(3, vec![(1, 2), (2, 3), (3, 1)]);
        assert!(!g.is_acyclic());
        assert!(g.is_acyclic_with(&[true; 3], &[true, false, true]));
        assert!(g.is_acyclic_with(&[true, false, true], &[true; 3]));
    }
}
