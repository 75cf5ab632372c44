use crate::error::{Error, Result};
use crate::instances::{Certificate, Problem, ProblemKind};

use super::{by_id, Affine, Reduction};

/// Problems every other kind reaches through [`route_to_kernel`].
pub const KERNEL: [ProblemKind; 6] = [
    ProblemKind::Ip01,
    ProblemKind::FeedbackNodeSet,
    ProblemKind::Hcp,
    ProblemKind::ChromaticNumber,
    ProblemKind::CliqueCover,
    ProblemKind::JobSequencing,
];

/// Reductions applied left to right, each link's target feeding the next
/// link's source.
#[derive(Clone, Debug, Default)]
pub struct Chain {
    links: Vec<&'static Reduction>,
}

/// Every instance produced while applying a chain, source first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub instances: Vec<Problem>,
}

impl Trace {
    pub fn output(&self) -> &Problem {
        self.instances.last().expect("a trace holds at least its source")
    }
}

impl Chain {
    pub fn new(links: Vec<&'static Reduction>) -> Result<Chain> {
        for (index, pair) in links.windows(2).enumerate() {
            if pair[0].target != pair[1].source {
                return Err(Error::BrokenChain {
                    index: index + 1,
                    reduction: pair[1].id.to_string(),
                    expected: pair[1].source,
                    found: pair[0].target,
                });
            }
        }
        Ok(Chain { links })
    }

    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Chain> {
        let links = ids.iter().map(|id| by_id(id.as_ref())).collect::<Result<Vec<_>>>()?;
        Chain::new(links)
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.links.iter().map(|r| r.id).collect()
    }

    pub fn links(&self) -> &[&'static Reduction] {
        &self.links
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    /// Target kind for an input of kind `from`.
    pub fn target(&self, from: ProblemKind) -> ProblemKind {
        self.links.last().map_or(from, |r| r.target)
    }

    /// Composite growth bound.
    pub fn growth(&self) -> Affine {
        self.links.iter().fold(Affine::IDENTITY, |acc, r| acc.then(&r.growth))
    }

    pub fn apply(&self, instance: &Problem) -> Result<Trace> {
        let mut instances = vec![instance.clone()];
        if self.links.is_empty() {
            instance.validate()?;
        }
        for (index, r) in self.links.iter().enumerate() {
            let current = instances.last().expect("non-empty");
            if current.kind() != r.source {
                return Err(Error::BrokenChain {
                    index,
                    reduction: r.id.to_string(),
                    expected: r.source,
                    found: current.kind(),
                });
            }
            let next = r.apply(current)?;
            instances.push(next);
        }
        Ok(Trace { instances })
    }

    /// Lifts a certificate for the chain's output back to `source`,
    /// rebuilding the intermediate instances first.
    pub fn lift(&self, source: &Problem, cert: &Certificate) -> Result<Certificate> {
        let trace = self.apply(source)?;
        self.lift_trace(&trace, cert)
    }

    pub fn lift_trace(&self, trace: &Trace, cert: &Certificate) -> Result<Certificate> {
        let mut cert = cert.clone();
        for (r, inst) in self.links.iter().zip(&trace.instances).rev() {
            cert = r.lift(inst, &cert)?;
        }
        Ok(cert)
    }
}

/// Applies `chain` to `instance` and returns the final instance.
pub fn compose(chain: &Chain, instance: &Problem) -> Result<Problem> {
    Ok(chain.apply(instance)?.output().clone())
}

/// The chain taking `kind` into the kernel; kernel members get the empty
/// chain.
pub fn route_to_kernel(kind: ProblemKind) -> Chain {
    use ProblemKind::*;
    let ids: &[&str] = match kind {
        Sat => &["sat_to_3sat", "3sat_to_ip"],
        ThreeSat => &["3sat_to_ip"],
        Clique => &["clique_to_ip"],
        SetPacking => &["set_packing_to_ip"],
        NodeCover => &["node_cover_to_set_covering", "set_covering_to_ip"],
        SetCovering => &["set_covering_to_ip"],
        FeedbackArcSet => &["fas_to_fns"],
        Dhcp => &["dhcp_to_hcp"],
        ExactCover => &["exact_cover_to_ip"],
        HittingSet => &["hitting_set_to_ip"],
        SteinerTree => &["steiner_tree_to_ip"],
        ThreeDimMatching => &["3dm_to_ip"],
        Knapsack => &["knapsack_to_ip"],
        Partition => &["partition_to_knapsack", "knapsack_to_ip"],
        MaxCut => &["max_cut_to_ip"],
        Ip01 | FeedbackNodeSet | Hcp | ChromaticNumber | CliqueCover | JobSequencing => &[],
    };
    Chain::from_ids(ids).expect("routing table is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{CnfFormula, Partition};

    #[test]
    fn every_kind_reaches_the_kernel() {
        for kind in ProblemKind::ALL {
            let chain = route_to_kernel(kind);
            assert!(KERNEL.contains(&chain.target(kind)), "{kind}");
            if let Some(first) = chain.links().first() {
                assert_eq!(first.source, kind);
            } else {
                assert!(KERNEL.contains(&kind));
            }
        }
    }

    #[test]
    fn partition_route_and_composition() {
        let chain = route_to_kernel(ProblemKind::Partition);
        assert_eq!(chain.ids(), ["partition_to_knapsack", "knapsack_to_ip"]);
        let src = Problem::Partition(Partition { values: vec![1, 2, 3] });
        let Problem::Ip01(p) = compose(&chain, &src).unwrap() else { panic!() };
        assert_eq!(p.to_text(), "1*x[1] 2*x[2] 3*x[3] = 3\n");
        assert_eq!(chain.growth(), Affine::new(1, 1, 1));
        assert_eq!(route_to_kernel(ProblemKind::FeedbackArcSet).ids(), ["fas_to_fns"]);
        assert!(route_to_kernel(ProblemKind::Ip01).is_empty());
    }

    #[test]
    fn sat_through_three_sat() {
        let chain = route_to_kernel(ProblemKind::Sat);
        let src = Problem::Sat(CnfFormula::new(4, vec![vec![1, 2, 3, 4]]));
        let Problem::Ip01(p) = compose(&chain, &src).unwrap() else { panic!() };
        assert_eq!((p.rhs_entries(), p.nonzeros()), (2, 6));
        assert_eq!(chain.growth(), Affine::new(4, 1, 0));
    }

    #[test]
    fn empty_chain_is_identity() {
        let src = Problem::Partition(Partition { values: vec![4] });
        assert_eq!(compose(&Chain::default(), &src).unwrap(), src);
        let cert = Certificate::ItemSet(vec![]);
        assert_eq!(Chain::default().lift(&src, &cert).unwrap(), cert);
    }

    #[test]
    fn mismatched_links_are_rejected() {
        assert!(matches!(
            Chain::from_ids(&["knapsack_to_ip", "partition_to_knapsack"]),
            Err(Error::BrokenChain { index: 1, .. })
        ));
        let chain = Chain::from_ids(&["knapsack_to_ip"]).unwrap();
        let src = Problem::Partition(Partition { values: vec![4] });
        assert!(matches!(chain.apply(&src), Err(Error::BrokenChain { index: 0, .. })));
    }
}
