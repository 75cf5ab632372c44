//! Seeded instance generators.
//!
//! Every random number is a pure function of `(seed, stream, key…)`:
//!
//! ```text
//! mix(z)   = SplitMix64 finalizer:
//!            z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//!            z ^= z >> 27; z *= 0x94d049bb133111eb;
//!            z ^= z >> 31
//! draw(seed, stream, [k1, …, kn]) =
//!            z = mix(seed + 0x9e3779b97f4a7c15 · (stream + 1))
//!            for each k: z = mix(z ^ mix(k + 0x9e3779b97f4a7c15))
//! ```
//!
//! with wrapping 64-bit arithmetic. A draw in `0..n` is
//! `(draw · n) >> 64`; a unit draw is `(draw >> 11) · 2⁻⁵³`. Because draws
//! are keyed by the object they decide (a vertex pair, a clause index) rather
//! than by position in a sequence, growing the scale parameter only adds
//! objects and never changes the ones already present.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{
    CnfFormula, DiGraph, Knapsack, Partition, Problem, ProblemKind, SetFamily, SteinerInstance, TripleFamily, UGraph,
};
use crate::program::{BinaryProgram, ConstraintRow, Relation, VariableTag};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn draw(seed: u64, stream: u64, key: &[u64]) -> u64 {
    let mut z = mix(seed.wrapping_add(GOLDEN.wrapping_mul(stream.wrapping_add(1))));
    for &k in key {
        z = mix(z ^ mix(k.wrapping_add(GOLDEN)));
    }
    z
}

/// Draws for one purpose under one seed.
#[derive(Clone, Copy, Debug)]
struct Stream {
    seed: u64,
    id: u64,
}

impl Stream {
    fn raw(&self, key: &[u64]) -> u64 {
        draw(self.seed, self.id, key)
    }

    fn below(&self, n: u64, key: &[u64]) -> u64 {
        ((self.raw(key) as u128 * n as u128) >> 64) as u64
    }

    fn unit(&self, key: &[u64]) -> f64 {
        (self.raw(key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn chance(&self, p: f64, key: &[u64]) -> bool {
        self.unit(key) < p
    }
}

// stream ids
const EDGE: u64 = 1;
const TREE: u64 = 2;
const WEIGHT: u64 = 3;
const LEN: u64 = 4;
const PICK: u64 = 5;
const SIGN: u64 = 6;
const VALUE: u64 = 7;
const TERMINAL: u64 = 8;
const COEF: u64 = 9;
const RELATION: u64 = 10;

/// What to generate. `size` is the main scale: vertices for graph kinds,
/// clauses for CNF kinds, sets for set kinds, triples for matching, items
/// for number kinds and variables for programs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: ProblemKind,
    pub seed: u64,
    pub size: usize,
    /// Edge or arc probability; selects the dense graph model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Expected extra degree in the sparse graph model, or the largest
    /// out-degree in the bounded digraph model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<f64>,
    /// Largest clause or set length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    /// Variables for CNF kinds, universe size for set kinds, `|T|` for
    /// matching.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<usize>,
    /// Largest value or edge weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_value: Option<u64>,
    /// The scalar parameter of the kind (k, l, W, budget or target).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<u64>,
}

impl GeneratorSpec {
    pub fn new(kind: ProblemKind, seed: u64, size: usize) -> Self {
        GeneratorSpec {
            kind,
            seed,
            size,
            density: None,
            degree: None,
            max_len: None,
            universe: None,
            max_value: None,
            param: None,
        }
    }

    pub fn with_size(&self, size: usize) -> Self {
        GeneratorSpec { size, ..self.clone() }
    }

    pub fn density(mut self, p: f64) -> Self {
        self.density = Some(p);
        self
    }

    pub fn degree(mut self, d: f64) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn max_len(mut self, l: usize) -> Self {
        self.max_len = Some(l);
        self
    }

    pub fn universe(mut self, u: usize) -> Self {
        self.universe = Some(u);
        self
    }

    pub fn max_value(mut self, v: u64) -> Self {
        self.max_value = Some(v);
        self
    }

    pub fn param(mut self, p: u64) -> Self {
        self.param = Some(p);
        self
    }

    fn stream(&self, id: u64) -> Stream {
        Stream { seed: self.seed, id }
    }
}

fn inconsistent<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInstance(format!("inconsistent generator parameters: {}", msg.into())))
}

fn pair_key(i: usize, j: usize) -> [u64; 2] {
    [i as u64, j as u64]
}

/// Dense model: edge `{i, j}` present when its unit draw is below the
/// density. Sparse model: a random recursive tree (vertex `j` attaches to a
/// uniform earlier vertex) plus each other backward pair with probability
/// `degree / (j − 1)`. Edges are listed by their larger endpoint, then the
/// smaller.
fn graph(spec: &GeneratorSpec) -> Result<Vec<(usize, usize)>> {
    let n = spec.size;
    let edge = spec.stream(EDGE);
    let mut edges = Vec::new();
    if let Some(p) = spec.density {
        if !(0.0..=1.0).contains(&p) {
            return inconsistent(format!("density {p} is outside [0, 1]"));
        }
        for j in 2..=n {
            for i in 1..j {
                if edge.chance(p, &pair_key(i, j)) {
                    edges.push((i, j));
                }
            }
        }
        return Ok(edges);
    }
    let c = spec.degree.unwrap_or(1.0);
    if c < 0.0 {
        return inconsistent("negative degree");
    }
    let tree = spec.stream(TREE);
    for j in 2..=n {
        let parent = 1 + tree.below(j as u64 - 1, &[j as u64]) as usize;
        let p = (c / (j - 1) as f64).min(1.0);
        for i in 1..j {
            if i == parent || edge.chance(p, &pair_key(i, j)) {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}

fn weights(spec: &GeneratorSpec, edges: &[(usize, usize)]) -> Result<Vec<u64>> {
    let max = spec.max_value.unwrap_or(10);
    if max == 0 {
        return inconsistent("max_value must be positive");
    }
    let w = spec.stream(WEIGHT);
    Ok(edges.iter().map(|&(i, j)| 1 + w.below(max, &pair_key(i, j))).collect())
}

/// Dense model as for graphs, over ordered pairs. Bounded model: vertex `v`
/// gets `1 + below(degree)` distinct arcs to `v + o (mod N)` for offsets
/// `o` drawn from `1..=window`, window `min(N − 1, 2·degree)`.
fn digraph(spec: &GeneratorSpec) -> Result<Vec<(usize, usize)>> {
    let n = spec.size;
    let edge = spec.stream(EDGE);
    let mut arcs = Vec::new();
    if let Some(p) = spec.density {
        if !(0.0..=1.0).contains(&p) {
            return inconsistent(format!("density {p} is outside [0, 1]"));
        }
        for u in 1..=n {
            for v in (1..=n).filter(|&v| v != u) {
                if edge.chance(p, &pair_key(u, v)) {
                    arcs.push((u, v));
                }
            }
        }
        return Ok(arcs);
    }
    if n < 2 {
        return Ok(arcs);
    }
    let d = spec.degree.unwrap_or(2.0).max(1.0) as u64;
    let window = (n as u64 - 1).min(2 * d).max(1);
    let len = spec.stream(LEN);
    let pick = spec.stream(PICK);
    for u in 1..=n {
        let out = (1 + len.below(d, &[u as u64])).min(window);
        let mut offsets: Vec<u64> = Vec::new();
        let mut t = 0u64;
        while (offsets.len() as u64) < out {
            let o = 1 + pick.below(window, &[u as u64, t]);
            t += 1;
            if !offsets.contains(&o) {
                offsets.push(o);
            }
        }
        for o in offsets {
            let v = (u - 1 + o as usize) % n + 1;
            arcs.push((u, v));
        }
    }
    Ok(arcs)
}

/// `count` distinct values from `1..=range`, keyed by `owner`.
fn distinct(stream: Stream, owner: u64, count: usize, range: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut t = 0u64;
    while out.len() < count {
        let x = 1 + stream.below(range as u64, &[owner, t]) as usize;
        t += 1;
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn cnf(spec: &GeneratorSpec, exact_three: bool) -> Result<CnfFormula> {
    let n = spec.size;
    let max_len = if exact_three { 3 } else { spec.max_len.unwrap_or(5) };
    let m = spec.universe.unwrap_or((n / 2).max(max_len));
    if max_len == 0 || m == 0 {
        return inconsistent("clauses need at least one literal and one variable");
    }
    if (exact_three && m < 3) || (!exact_three && max_len > m) {
        return inconsistent(format!("clauses of length {max_len} need at least that many variables, got {m}"));
    }
    let len = spec.stream(LEN);
    let sign = spec.stream(SIGN);
    let clauses = (0..n)
        .map(|i| {
            let k = if exact_three {
                3
            } else {
                1 + len.below(max_len as u64, &[i as u64]) as usize
            };
            distinct(spec.stream(PICK), i as u64, k, m)
                .into_iter()
                .map(|v| {
                    if sign.chance(0.5, &pair_key(i, v)) {
                        -(v as i64)
                    } else {
                        v as i64
                    }
                })
                .collect()
        })
        .collect();
    Ok(CnfFormula::new(m, clauses))
}

fn family(spec: &GeneratorSpec) -> Result<SetFamily> {
    let s = spec.size;
    let u = spec.universe.unwrap_or(s.max(1));
    let max_len = spec.max_len.unwrap_or(4).min(u);
    if max_len == 0 {
        return inconsistent("sets need a positive length and universe");
    }
    let len = spec.stream(LEN);
    let sets = (0..s)
        .map(|i| {
            let k = 1 + len.below(max_len as u64, &[i as u64]) as usize;
            let mut set = distinct(spec.stream(PICK), i as u64, k, u);
            set.sort_unstable();
            set
        })
        .collect();
    Ok(SetFamily::new(u, sets))
}

fn values(spec: &GeneratorSpec) -> Result<Vec<u64>> {
    let max = spec.max_value.unwrap_or(20);
    if max == 0 {
        return inconsistent("max_value must be positive");
    }
    let v = spec.stream(VALUE);
    Ok((0..spec.size).map(|i| 1 + v.below(max, &[i as u64])).collect())
}

fn param_or(spec: &GeneratorSpec, default: usize) -> usize {
    spec.param.map_or(default, |p| p as usize)
}

fn program(spec: &GeneratorSpec) -> BinaryProgram {
    let n = spec.size;
    let mut p = BinaryProgram::new();
    for j in 1..=n {
        p.add_var(VariableTag::new("x", &[j as u64]));
    }
    if n == 0 {
        return p;
    }
    let len = spec.stream(LEN);
    let coef = spec.stream(COEF);
    let rel = spec.stream(RELATION);
    for r in 0..n / 2 + 1 {
        let k = 1 + len.below(n.min(4) as u64, &[r as u64]) as usize;
        let vars = distinct(spec.stream(PICK), r as u64, k, n);
        let terms: Vec<(usize, i64)> = vars
            .iter()
            .map(|&v| {
                let c = 1 + coef.below(3, &pair_key(r, v)) as i64;
                (v - 1, if coef.chance(0.3, &[r as u64, v as u64, 1]) { -c } else { c })
            })
            .collect();
        let relation = [Relation::Eq, Relation::Le, Relation::Ge][rel.below(3, &[r as u64]) as usize];
        let rhs = rel.below(4, &[r as u64, 1]) as i64 - 1;
        let row = ConstraintRow::new(terms, relation, rhs);
        p.push(if relation == Relation::Eq { row } else { row.with_natural_gap() });
    }
    p
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Problem> {
    use ProblemKind as K;
    let n = spec.size;
    let problem = match spec.kind {
        K::Sat => Problem::Sat(cnf(spec, false)?),
        K::ThreeSat => Problem::ThreeSat(cnf(spec, true)?),
        K::Ip01 => Problem::Ip01(program(spec)),
        K::Clique => {
            let k = param_or(spec, n.min(3));
            if k == 0 || k > n {
                return inconsistent(format!("clique size {k} must lie in 1..={n}"));
            }
            Problem::Clique { graph: UGraph::new(n, graph(spec)?), k }
        }
        K::NodeCover => {
            let l = param_or(spec, n / 2);
            if l > n {
                return inconsistent(format!("cover size {l} exceeds {n} vertices"));
            }
            Problem::NodeCover { graph: UGraph::new(n, graph(spec)?), l }
        }
        K::ChromaticNumber => {
            let k = param_or(spec, n.min(3));
            if k > n.max(1) {
                return inconsistent(format!("colour count {k} exceeds {n} vertices"));
            }
            Problem::ChromaticNumber { graph: UGraph::new(n, graph(spec)?), k }
        }
        K::CliqueCover => {
            let l = param_or(spec, n.min(3));
            if l > n.max(1) {
                return inconsistent(format!("clique count {l} exceeds {n} vertices"));
            }
            Problem::CliqueCover {
                graph: UGraph::new(n, graph(spec)?),
                l,
                complemented: false,
            }
        }
        K::Hcp => Problem::Hcp(UGraph::new(n, graph(spec)?)),
        K::MaxCut => {
            let edges = graph(spec)?;
            let w = weights(spec, &edges)?;
            let total: u64 = w.iter().sum();
            let threshold = spec.param.unwrap_or(total / 2);
            Problem::MaxCut {
                graph: UGraph::weighted(n, edges, w),
                threshold,
            }
        }
        K::SteinerTree => {
            if n == 0 {
                return inconsistent("a Steiner instance needs a vertex");
            }
            let edges = graph(spec)?;
            let w = weights(spec, &edges)?;
            let total: u64 = w.iter().sum();
            let t = spec.stream(TERMINAL);
            let terminals: Vec<usize> = (1..=n).filter(|&v| v == 1 || t.chance(1.0 / 3.0, &[v as u64])).collect();
            let budget = spec.param.unwrap_or(total / 2);
            Problem::SteinerTree(SteinerInstance {
                graph: UGraph::weighted(n, edges, w),
                terminals,
                budget,
            })
        }
        K::Dhcp => Problem::Dhcp(DiGraph::new(n, digraph(spec)?)),
        K::FeedbackArcSet => {
            let arcs = digraph(spec)?;
            let k = param_or(spec, arcs.len() / 4);
            Problem::FeedbackArcSet {
                graph: DiGraph::new(n, arcs),
                k,
            }
        }
        K::FeedbackNodeSet => {
            let k = param_or(spec, n / 4);
            Problem::FeedbackNodeSet {
                graph: DiGraph::new(n, digraph(spec)?),
                k,
            }
        }
        K::SetPacking => {
            let l = param_or(spec, (n / 3).max(1));
            Problem::SetPacking { family: family(spec)?, l }
        }
        K::SetCovering => {
            let k = param_or(spec, (n / 2).max(1));
            Problem::SetCovering { family: family(spec)?, k }
        }
        K::ExactCover => Problem::ExactCover(family(spec)?),
        K::HittingSet => Problem::HittingSet(family(spec)?),
        K::ThreeDimMatching => {
            let t = spec
                .universe
                .unwrap_or_else(|| (1..).find(|&t| t * t * t >= n).unwrap_or(1).max(n / 2));
            if t == 0 || n > t * t * t {
                return inconsistent(format!("{n} distinct triples do not fit in T = 1..={t}"));
            }
            let pick = spec.stream(PICK);
            let mut triples = Vec::with_capacity(n);
            let mut attempt = 0u64;
            for i in 0..n {
                loop {
                    let key = |c: u64| [i as u64, attempt, c];
                    let tr = (
                        1 + pick.below(t as u64, &key(0)) as usize,
                        1 + pick.below(t as u64, &key(1)) as usize,
                        1 + pick.below(t as u64, &key(2)) as usize,
                    );
                    attempt += 1;
                    if !triples.contains(&tr) {
                        triples.push(tr);
                        break;
                    }
                }
                attempt = 0;
            }
            Problem::ThreeDimMatching(TripleFamily { t_size: t, triples })
        }
        K::Knapsack => {
            let values = values(spec)?;
            let total: u64 = values.iter().sum();
            let target = spec.param.unwrap_or(total / 2);
            Problem::Knapsack(Knapsack { values, target })
        }
        K::Partition => Problem::Partition(Partition { values: values(spec)? }),
        K::JobSequencing => return Err(Error::UnsupportedKind(K::JobSequencing)),
    };
    problem.validate()?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{solve, DEFAULT_BUDGET};
    use crate::reductions::by_id;
    use crate::size::measure;

    #[test]
    fn reference_values() {
        // first outputs of the plain sequential SplitMix64 seeded with 0
        let mut state = 0u64;
        let mut next = || {
            state = state.wrapping_add(GOLDEN);
            mix(state)
        };
        assert_eq!(next(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(next(), 0x6e78_9e6a_a1b9_65f4);
        // keyed draws are pure
        assert_eq!(draw(7, 1, &[3, 4]), draw(7, 1, &[3, 4]));
        assert_ne!(draw(7, 1, &[3, 4]), draw(7, 1, &[4, 3]));
        assert_ne!(draw(7, 1, &[3]), draw(7, 2, &[3]));
    }

    #[test]
    fn full_density_is_complete() {
        let p = generate(&GeneratorSpec::new(ProblemKind::Hcp, 99, 6).density(1.0)).unwrap();
        let Problem::Hcp(g) = p else { panic!() };
        assert_eq!(g.edges.len(), 15);
    }

    #[test]
    fn same_spec_same_instance() {
        let spec = GeneratorSpec::new(ProblemKind::Sat, 7, 4).max_len(5);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        let Problem::Sat(f) = &a else { panic!() };
        assert_eq!(f.clauses.len(), 4);
        assert!(f.clauses.iter().all(|c| (1..=5).contains(&c.len())));
        assert_ne!(a, generate(&GeneratorSpec::new(ProblemKind::Sat, 8, 4).max_len(5)).unwrap());
    }

    #[test]
    fn partition_answer_survives_reduction() {
        let spec = GeneratorSpec::new(ProblemKind::Partition, 11, 8).max_value(50);
        let src = generate(&spec).unwrap();
        let tgt = by_id("partition_to_knapsack").unwrap().apply(&src).unwrap();
        assert_eq!(
            solve(&src, DEFAULT_BUDGET).unwrap().answer,
            solve(&tgt, DEFAULT_BUDGET).unwrap().answer
        );
    }

    #[test]
    fn sizes_grow_with_scale() {
        for kind in ProblemKind::ALL {
            if kind == ProblemKind::JobSequencing {
                continue;
            }
            let mut last = 0;
            for size in [4, 8, 16, 32] {
                let spec = GeneratorSpec::new(kind, 5, size);
                let spec = if kind == ProblemKind::ThreeDimMatching { spec.universe(4) } else { spec };
                let p = generate(&spec).unwrap();
                let s = measure(&p).unwrap().elements;
                assert!(s >= last, "{kind} at {size}: {s} < {last}");
                last = s;
            }
        }
    }

    #[test]
    fn bounded_digraphs_have_out_arcs() {
        let p = generate(&GeneratorSpec::new(ProblemKind::Dhcp, 3, 20).degree(3.0)).unwrap();
        let Problem::Dhcp(g) = p else { panic!() };
        let mut out = [0; 21];
        for &(u, _) in &g.arcs {
            out[u] += 1;
        }
        assert!(out[1..].iter().all(|&d| (1..=3).contains(&d)));
    }

    #[test]
    fn inconsistent_parameters_are_refused() {
        assert!(generate(&GeneratorSpec::new(ProblemKind::Clique, 1, 3).param(5)).is_err());
        assert!(generate(&GeneratorSpec::new(ProblemKind::Hcp, 1, 3).density(1.5)).is_err());
        assert!(generate(&GeneratorSpec::new(ProblemKind::ThreeSat, 1, 3).universe(2)).is_err());
        assert!(generate(&GeneratorSpec::new(ProblemKind::ThreeDimMatching, 1, 9).universe(2)).is_err());
        assert!(generate(&GeneratorSpec::new(ProblemKind::JobSequencing, 1, 3)).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = GeneratorSpec::new(ProblemKind::MaxCut, 3, 10).density(0.5).max_value(7);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"kind":"max_cut","seed":3,"size":10,"density":0.5,"max_value":7}"#);
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&text).unwrap(), spec);
    }
}
