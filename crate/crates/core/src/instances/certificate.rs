use serde::{Deserialize, Serialize};

/// Witness for a YES answer. Indices are 1-based and refer to the instance
/// the certificate claims to witness: vertices, arcs and edges by their
/// position in the instance's lists, set indices by position in the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "witness", rename_all = "snake_case")]
pub enum Certificate {
    /// Truth value per variable, `1..=num_literals`.
    Assignment(Vec<bool>),
    /// 0-1 value per program variable; trailing slack variables beyond the
    /// source program are tolerated by lifts.
    BinaryVector(Vec<u8>),
    VertexSet(Vec<usize>),
    SetIndices(Vec<usize>),
    ElementSet(Vec<usize>),
    ArcSet(Vec<usize>),
    CycleOrder(Vec<usize>),
    SteinerTree { edges: Vec<usize>, root: usize },
    TripleSet(Vec<usize>),
    ItemSet(Vec<usize>),
    /// Colour per vertex, each in `1..=k`.
    Coloring(Vec<usize>),
    CliquePartition(Vec<Vec<usize>>),
}

impl Certificate {
    pub fn type_name(&self) -> &'static str {
        match self {
            Certificate::Assignment(_) => "assignment",
            Certificate::BinaryVector(_) => "binary_vector",
            Certificate::VertexSet(_) => "vertex_set",
            Certificate::SetIndices(_) => "set_indices",
            Certificate::ElementSet(_) => "element_set",
            Certificate::ArcSet(_) => "arc_set",
            Certificate::CycleOrder(_) => "cycle_order",
            Certificate::SteinerTree { .. } => "steiner_tree",
            Certificate::TripleSet(_) => "triple_set",
            Certificate::ItemSet(_) => "item_set",
            Certificate::Coloring(_) => "coloring",
            Certificate::CliquePartition(_) => "clique_partition",
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Certificate::BinaryVector(bits.iter().map(|&b| b as u8).collect())
    }
}
