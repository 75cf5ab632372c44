//! Input-size accounting.
//!
//! Element mode counts data items exactly as each problem's input-size
//! definition does (e.g. `Σ|C_i|` for CNF formulas, `e + 1` for a graph
//! with one scalar parameter). Bit mode charges every number in the payload
//! its binary length instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{Problem, UGraph};
use crate::num::bit_length_u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMode {
    Element,
    Bits,
}

impl std::str::FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "element" | "elements" => Ok(SizeMode::Element),
            "bits" | "bit" => Ok(SizeMode::Bits),
            other => Err(Error::Contract(format!("unknown size mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeReport {
    pub elements: u64,
    pub bits: u64,
}

impl SizeReport {
    pub fn get(&self, mode: SizeMode) -> u64 {
        match mode {
            SizeMode::Element => self.elements,
            SizeMode::Bits => self.bits,
        }
    }
}

fn b(v: usize) -> u64 {
    bit_length_u64(v as u64)
}

fn graph_bits(g: &UGraph) -> u64 {
    let ends: u64 = g.edges.iter().map(|&(i, j)| b(i) + b(j)).sum();
    let weights: u64 = g.weights.iter().flatten().map(|&w| bit_length_u64(w)).sum();
    ends + weights
}

fn arcs_bits(arcs: &[(usize, usize)]) -> u64 {
    arcs.iter().map(|&(i, j)| b(i) + b(j)).sum()
}

fn sets_bits(sets: &[Vec<usize>]) -> u64 {
    sets.iter().flatten().map(|&x| b(x)).sum()
}

/// Both size measures of a problem instance.
pub fn measure(problem: &Problem) -> Result<SizeReport> {
    use Problem::*;
    let report = match problem {
        Sat(f) => SizeReport {
            elements: f.clauses.iter().map(Vec::len).sum::<usize>() as u64,
            bits: f.clauses.iter().flatten().map(|l| bit_length_u64(l.unsigned_abs())).sum(),
        },
        ThreeSat(f) => SizeReport {
            elements: 3 * f.clauses.len() as u64,
            bits: f.clauses.iter().flatten().map(|l| bit_length_u64(l.unsigned_abs())).sum(),
        },
        Ip01(p) => p.size(),
        Clique { graph, k }
        | NodeCover { graph, l: k }
        | ChromaticNumber { graph, k }
        | CliqueCover { graph, l: k, .. } => SizeReport {
            elements: graph.edges.len() as u64 + 1,
            bits: graph_bits(graph) + b(*k),
        },
        FeedbackArcSet { graph, k } | FeedbackNodeSet { graph, k } => SizeReport {
            elements: graph.arcs.len() as u64 + 1,
            bits: arcs_bits(&graph.arcs) + b(*k),
        },
        SetPacking { family, l: k } | SetCovering { family, k } => SizeReport {
            elements: 1 + family.total_entries() as u64,
            bits: sets_bits(&family.sets) + b(*k),
        },
        Dhcp(g) => SizeReport {
            elements: g.arcs.len() as u64,
            bits: arcs_bits(&g.arcs),
        },
        Hcp(g) => SizeReport {
            elements: g.edges.len() as u64,
            bits: graph_bits(g),
        },
        ExactCover(family) | HittingSet(family) => SizeReport {
            elements: family.total_entries() as u64,
            bits: sets_bits(&family.sets),
        },
        SteinerTree(st) => SizeReport {
            elements: 2 * st.graph.edges.len() as u64 + st.terminals.len() as u64 + 1,
            bits: graph_bits(&st.graph)
                + st.terminals.iter().map(|&r| b(r)).sum::<u64>()
                + bit_length_u64(st.budget),
        },
        ThreeDimMatching(tf) => SizeReport {
            elements: 3 * tf.triples.len() as u64 + 1,
            bits: tf.triples.iter().map(|&(x, y, z)| b(x) + b(y) + b(z)).sum::<u64>()
                + b(tf.t_size),
        },
        Knapsack(ks) => SizeReport {
            elements: ks.values.len() as u64 + 1,
            bits: ks.values.iter().map(|&v| bit_length_u64(v)).sum::<u64>()
                + bit_length_u64(ks.target),
        },
        Partition(p) => SizeReport {
            elements: p.values.len() as u64,
            bits: p.values.iter().map(|&v| bit_length_u64(v)).sum(),
        },
        MaxCut { graph, threshold } => SizeReport {
            elements: 2 * graph.edges.len() as u64 + 1,
            bits: graph_bits(graph) + bit_length_u64(*threshold),
        },
        JobSequencing => return Err(Error::UnsupportedKind(problem.kind())),
    };
    Ok(report)
}

pub fn measure_input_size(problem: &Problem, mode: SizeMode) -> Result<u64> {
    problem.validate()?;
    Ok(measure(problem)?.get(mode))
}
