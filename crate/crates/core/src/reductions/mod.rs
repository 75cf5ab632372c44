//! The linearly-growing reductions, as transform and lift pairs.
//!
//! Each [`Reduction`] maps an instance of its source kind to an instance of
//! its target kind with the same answer, and lifts a target certificate back
//! to a source certificate. It also declares an affine bound on element-mode
//! size growth and, where one is known, exact counts for the output.

mod chain;
mod graphs;
mod numbers;
mod sat;
mod sets;
mod steiner;

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::instances::{Certificate, Problem, ProblemKind};

pub use chain::{compose, route_to_kernel, Chain, Trace, KERNEL};
pub use graphs::{
    reduce_chromatic_to_clique_cover, reduce_clique_to_ip, reduce_dhcp_to_hcp, reduce_fas_to_fns,
    reduce_max_cut_to_ip, reduce_node_cover_to_set_covering, ChromaticMode,
};
pub use numbers::{reduce_knapsack_to_ip, reduce_partition_to_knapsack};
pub use sat::{reduce_3sat_to_ip, reduce_sat_to_3sat};
pub use sets::{
    reduce_3dm_to_ip, reduce_exact_cover_to_ip, reduce_hitting_set_to_ip, reduce_set_covering_to_ip,
    reduce_set_packing_to_ip,
};
pub use steiner::reduce_steiner_tree_to_ip;

/// Affine map `x ↦ α·x + β` with non-negative rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub alpha: Ratio<u64>,
    pub beta: Ratio<u64>,
}

impl Affine {
    pub const IDENTITY: Affine = Affine::new(1, 1, 0);

    pub const fn new(alpha_num: u64, alpha_den: u64, beta: u64) -> Self {
        Affine {
            alpha: Ratio::new_raw(alpha_num, alpha_den),
            beta: Ratio::new_raw(beta, 1),
        }
    }

    fn wide(r: Ratio<u64>) -> Ratio<u128> {
        Ratio::new(*r.numer() as u128, *r.denom() as u128)
    }

    /// Whether `output ≤ α·input + β`, evaluated exactly.
    pub fn admits(&self, input: u64, output: u64) -> bool {
        let bound = Self::wide(self.alpha) * Ratio::from_integer(input as u128) + Self::wide(self.beta);
        Ratio::from_integer(output as u128) <= bound
    }

    /// The map `self` followed by `next`.
    pub fn then(&self, next: &Affine) -> Affine {
        let alpha = next.alpha * self.alpha;
        let beta = next.alpha * self.beta + next.beta;
        Affine { alpha, beta }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x + {}", self.alpha, self.beta)
    }
}

/// One exact count identity checked on a concrete source/target pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaCheck {
    pub name: &'static str,
    pub expected: u64,
    pub actual: u64,
}

impl FormulaCheck {
    pub fn new(name: &'static str, expected: usize, actual: usize) -> Self {
        FormulaCheck {
            name,
            expected: expected as u64,
            actual: actual as u64,
        }
    }

    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

type Transform = fn(&Problem) -> Result<Problem>;
type Lift = fn(&Problem, &Certificate) -> Result<Certificate>;
type Formulas = fn(&Problem, &Problem) -> Vec<FormulaCheck>;

pub struct Reduction {
    pub id: &'static str,
    pub source: ProblemKind,
    pub target: ProblemKind,
    /// Claimed bound on target element size in terms of source element size.
    pub growth: Affine,
    transform: Transform,
    lift: Lift,
    formulas: Formulas,
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} -> {})", self.id, self.source, self.target)
    }
}

impl Reduction {
    fn expect_source(&self, problem: &Problem) -> Result<()> {
        if problem.kind() != self.source {
            return Err(Error::KindMismatch {
                expected: self.source,
                found: problem.kind(),
            });
        }
        Ok(())
    }

    /// Validates `source` and builds the target instance.
    pub fn apply(&self, source: &Problem) -> Result<Problem> {
        self.expect_source(source)?;
        source.validate()?;
        (self.transform)(source)
    }

    /// Maps a certificate for `apply(source)` to one for `source`.
    pub fn lift(&self, source: &Problem, cert: &Certificate) -> Result<Certificate> {
        self.expect_source(source)?;
        (self.lift)(source, cert)
    }

    /// Exact count identities for a source and its image.
    pub fn check_formulas(&self, source: &Problem, target: &Problem) -> Vec<FormulaCheck> {
        (self.formulas)(source, target)
    }
}

macro_rules! reduction {
    ($id:literal, $src:ident => $dst:ident, $growth:expr, $module:ident :: $name:ident) => {
        Reduction {
            id: $id,
            source: ProblemKind::$src,
            target: ProblemKind::$dst,
            growth: $growth,
            transform: $module::$name::transform,
            lift: $module::$name::lift,
            formulas: $module::$name::formulas,
        }
    };
}

/// Every reduction, in Karp's order of the source problem.
pub static REDUCTIONS: [Reduction; 17] = [
    reduction!("sat_to_3sat", Sat => ThreeSat, Affine::new(3, 1, 0), sat::sat_to_3sat),
    reduction!("clique_to_ip", Clique => Ip01, Affine::new(13, 1, 0), graphs::clique_to_ip),
    reduction!("set_packing_to_ip", SetPacking => Ip01, Affine::new(3, 1, 0), sets::set_packing_to_ip),
    reduction!(
        "node_cover_to_set_covering",
        NodeCover => SetCovering,
        Affine::new(2, 1, 0),
        graphs::node_cover_to_set_covering
    ),
    reduction!("set_covering_to_ip", SetCovering => Ip01, Affine::new(3, 1, 0), sets::set_covering_to_ip),
    reduction!("fas_to_fns", FeedbackArcSet => FeedbackNodeSet, Affine::new(3, 1, 0), graphs::fas_to_fns),
    reduction!("dhcp_to_hcp", Dhcp => Hcp, Affine::new(3, 1, 0), graphs::dhcp_to_hcp),
    reduction!("3sat_to_ip", ThreeSat => Ip01, Affine::new(4, 3, 0), sat::three_sat_to_ip),
    reduction!("exact_cover_to_ip", ExactCover => Ip01, Affine::new(2, 1, 0), sets::exact_cover_to_ip),
    reduction!("hitting_set_to_ip", HittingSet => Ip01, Affine::new(2, 1, 0), sets::hitting_set_to_ip),
    reduction!("steiner_tree_to_ip", SteinerTree => Ip01, Affine::new(15, 1, 0), steiner::steiner_tree_to_ip),
    reduction!("3dm_to_ip", ThreeDimMatching => Ip01, Affine::new(2, 1, 0), sets::three_dm_to_ip),
    reduction!("knapsack_to_ip", Knapsack => Ip01, Affine::new(1, 1, 0), numbers::knapsack_to_ip),
    reduction!(
        "partition_to_knapsack",
        Partition => Knapsack,
        Affine::new(1, 1, 1),
        numbers::partition_to_knapsack
    ),
    reduction!("max_cut_to_ip", MaxCut => Ip01, Affine::new(9, 1, 0), graphs::max_cut_to_ip),
    reduction!(
        "chromatic_to_clique_cover",
        ChromaticNumber => CliqueCover,
        Affine::new(1, 1, 0),
        graphs::chromatic_dense
    ),
    reduction!(
        "chromatic_to_clique_cover_compressed",
        ChromaticNumber => CliqueCover,
        Affine::new(1, 1, 0),
        graphs::chromatic_compressed
    ),
];

pub fn all() -> &'static [Reduction] {
    &REDUCTIONS
}

pub fn by_id(id: &str) -> Result<&'static Reduction> {
    REDUCTIONS
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownReduction(id.to_string()))
}

/// Reads the first `needed` entries of a binary vector certificate. Extra
/// trailing entries (slack variables of an equality form) are ignored.
pub(crate) fn leading_bits(target: ProblemKind, cert: &Certificate, needed: usize) -> Result<Vec<bool>> {
    let Certificate::BinaryVector(v) = cert else {
        return Err(Error::CertificateMismatch {
            kind: target,
            found: cert.type_name(),
        });
    };
    if v.len() < needed {
        return Err(Error::InvalidCertificate(format!(
            "vector has {} entries, expected at least {needed}",
            v.len()
        )));
    }
    if v.iter().any(|&b| b > 1) {
        return Err(Error::InvalidCertificate("binary vector holds a value other than 0 or 1".into()));
    }
    Ok(v[..needed].iter().map(|&b| b == 1).collect())
}

/// 1-based positions of the set bits in `bits[offset..offset + len]`.
pub(crate) fn chosen(bits: &[bool], offset: usize, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| bits[offset + i]).map(|i| i + 1).collect()
}

pub(crate) fn mismatch(target: ProblemKind, cert: &Certificate) -> Error {
    Error::CertificateMismatch {
        kind: target,
        found: cert.type_name(),
    }
}
