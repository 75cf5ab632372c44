use super::{Certificate, Problem, ProblemKind, UGraph};
use crate::error::{bad_cert, Error, Result};

/// Turns a list of 1-based indices into a 0-based membership mask,
/// rejecting out-of-range and repeated entries.
fn mask(indices: &[usize], n: usize, what: &str) -> Result<Vec<bool>> {
    let mut m = vec![false; n];
    for &i in indices {
        if i == 0 || i > n {
            return bad_cert(format!("{what} {i} is out of range 1..={n}"));
        }
        if m[i - 1] {
            return bad_cert(format!("{what} {i} is listed twice"));
        }
        m[i - 1] = true;
    }
    Ok(m)
}

fn is_cycle(order: &[usize], n: usize, min_len: usize, adjacent: impl Fn(usize, usize) -> bool) -> Result<bool> {
    mask(order, n, "vertex")?;
    if order.len() != n || n < min_len {
        return Ok(false);
    }
    Ok((0..n).all(|t| adjacent(order[t], order[(t + 1) % n])))
}

fn cut_weight(graph: &UGraph, side: &[bool]) -> u128 {
    graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| side[i - 1] != side[j - 1])
        .map(|(e, _)| graph.weight(e) as u128)
        .sum()
}

/// Whether `cert` witnesses a YES answer for `problem`.
///
/// `Ok(false)` means the certificate is well formed but does not witness
/// YES; malformed certificates (out-of-range or repeated indices, wrong
/// lengths) are errors.
pub fn verify_certificate(problem: &Problem, cert: &Certificate) -> Result<bool> {
    use Certificate as C;
    use Problem as P;
    let mismatch = || Error::CertificateMismatch {
        kind: problem.kind(),
        found: cert.type_name(),
    };
    match (problem, cert) {
        (P::Sat(f) | P::ThreeSat(f), C::Assignment(a)) => {
            if a.len() != f.num_literals {
                return bad_cert(format!("assignment has {} values for {} variables", a.len(), f.num_literals));
            }
            Ok(f.is_satisfied(a))
        }
        (P::Ip01(p), C::BinaryVector(v)) => {
            if v.len() != p.num_vars() {
                return bad_cert(format!("vector has {} entries for {} variables", v.len(), p.num_vars()));
            }
            if v.iter().any(|&b| b > 1) {
                return bad_cert("binary vector holds a value other than 0 or 1");
            }
            let bits: Vec<bool> = v.iter().map(|&b| b == 1).collect();
            Ok(p.is_satisfied(&bits))
        }
        (P::Clique { graph, k }, C::VertexSet(s)) => {
            mask(s, graph.num_vertices, "vertex")?;
            let adj = graph.adjacency();
            let pairwise = s
                .iter()
                .enumerate()
                .all(|(a, &u)| s[a + 1..].iter().all(|&v| adj[u - 1][v - 1]));
            Ok(s.len() >= *k && pairwise)
        }
        (P::NodeCover { graph, l }, C::VertexSet(s)) => {
            let m = mask(s, graph.num_vertices, "vertex")?;
            Ok(s.len() <= *l && graph.edges.iter().all(|&(i, j)| m[i - 1] || m[j - 1]))
        }
        (P::FeedbackNodeSet { graph, k }, C::VertexSet(s)) => {
            let m = mask(s, graph.num_vertices, "vertex")?;
            let keep: Vec<bool> = m.iter().map(|&x| !x).collect();
            Ok(s.len() <= *k && graph.is_acyclic_with(&keep, &vec![true; graph.arcs.len()]))
        }
        (P::FeedbackArcSet { graph, k }, C::ArcSet(a)) => {
            let m = mask(a, graph.arcs.len(), "arc")?;
            let keep: Vec<bool> = m.iter().map(|&x| !x).collect();
            Ok(a.len() <= *k && graph.is_acyclic_with(&vec![true; graph.num_vertices], &keep))
        }
        (P::MaxCut { graph, threshold }, C::VertexSet(s)) => {
            let m = mask(s, graph.num_vertices, "vertex")?;
            Ok(cut_weight(graph, &m) >= *threshold as u128)
        }
        (P::SetPacking { family, l }, C::SetIndices(ix)) => {
            mask(ix, family.sets.len(), "set")?;
            let mut used = vec![false; family.universe_size + 1];
            for &i in ix {
                for &x in &family.sets[i - 1] {
                    if used[x] {
                        return Ok(false);
                    }
                    used[x] = true;
                }
            }
            Ok(ix.len() >= *l)
        }
        (P::SetCovering { family, k }, C::SetIndices(ix)) => {
            mask(ix, family.sets.len(), "set")?;
            let mut covered = vec![false; family.universe_size + 1];
            for &i in ix {
                for &x in &family.sets[i - 1] {
                    covered[x] = true;
                }
            }
            Ok(ix.len() <= *k && family.support().iter().all(|&x| covered[x]))
        }
        (P::ExactCover(family), C::SetIndices(ix)) => {
            mask(ix, family.sets.len(), "set")?;
            let mut covered = vec![false; family.universe_size + 1];
            for &i in ix {
                for &x in &family.sets[i - 1] {
                    if covered[x] {
                        return Ok(false);
                    }
                    covered[x] = true;
                }
            }
            Ok(family.support().iter().all(|&x| covered[x]))
        }
        (P::HittingSet(family), C::ElementSet(w)) => {
            let m = mask(w, family.universe_size, "element")?;
            Ok(family
                .sets
                .iter()
                .all(|s| s.iter().filter(|&&x| m[x - 1]).count() == 1))
        }
        (P::Dhcp(g), C::CycleOrder(order)) => {
            let mut adj = vec![vec![false; g.num_vertices]; g.num_vertices];
            for &(u, v) in &g.arcs {
                adj[u - 1][v - 1] = true;
            }
            is_cycle(order, g.num_vertices, 2, |u, v| adj[u - 1][v - 1])
        }
        (P::Hcp(g), C::CycleOrder(order)) => {
            let adj = g.adjacency();
            is_cycle(order, g.num_vertices, 3, |u, v| adj[u - 1][v - 1])
        }
        (P::ChromaticNumber { graph, k }, C::Coloring(colors)) => {
            if colors.len() != graph.num_vertices {
                return bad_cert(format!("{} colours for {} vertices", colors.len(), graph.num_vertices));
            }
            if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > *k) {
                return bad_cert(format!("colour {c} is out of range 1..={k}"));
            }
            Ok(graph.edges.iter().all(|&(i, j)| colors[i - 1] != colors[j - 1]))
        }
        (P::CliqueCover { graph, l, complemented }, C::CliquePartition(parts)) => {
            let flat: Vec<usize> = parts.iter().flatten().copied().collect();
            let m = mask(&flat, graph.num_vertices, "vertex")?;
            let adj = graph.adjacency();
            let linked = |u: usize, v: usize| adj[u - 1][v - 1] != *complemented;
            let cliques = parts.iter().all(|p| {
                p.iter()
                    .enumerate()
                    .all(|(a, &u)| p[a + 1..].iter().all(|&v| linked(u, v)))
            });
            let used = parts.iter().filter(|p| !p.is_empty()).count();
            Ok(m.iter().all(|&x| x) && used <= *l && cliques)
        }
        (P::SteinerTree(st), C::SteinerTree { edges, root }) => {
            let g = &st.graph;
            mask(edges, g.edges.len(), "edge")?;
            if *root == 0 || *root > g.num_vertices {
                return bad_cert(format!("root {root} is out of range"));
            }
            let mut parent: Vec<usize> = (0..=g.num_vertices).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                let mut y = x;
                while p[y] != r {
                    let next = p[y];
                    p[y] = r;
                    y = next;
                }
                r
            }
            let mut in_tree = vec![false; g.num_vertices + 1];
            in_tree[*root] = true;
            let mut weight = 0u128;
            for &e in edges {
                let (u, v) = g.edges[e - 1];
                in_tree[u] = true;
                in_tree[v] = true;
                weight += g.weight(e - 1) as u128;
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return Ok(false);
                }
                parent[a] = b;
            }
            let root_class = find(&mut parent, *root);
            let connected = (1..=g.num_vertices)
                .filter(|&v| in_tree[v])
                .all(|v| find(&mut parent, v) == root_class);
            let spans = st.terminals.iter().all(|&r| in_tree[r]);
            Ok(connected && spans && weight <= st.budget as u128)
        }
        (P::ThreeDimMatching(tf), C::TripleSet(ix)) => {
            mask(ix, tf.triples.len(), "triple")?;
            let mut used = vec![[false; 3]; tf.t_size + 1];
            for &i in ix {
                let (a, b, c) = tf.triples[i - 1];
                for (coord, x) in [a, b, c].into_iter().enumerate() {
                    if used[x][coord] {
                        return Ok(false);
                    }
                    used[x][coord] = true;
                }
            }
            Ok(ix.len() == tf.t_size)
        }
        (P::Knapsack(ks), C::ItemSet(ix)) => {
            mask(ix, ks.values.len(), "item")?;
            let sum: u128 = ix.iter().map(|&i| ks.values[i - 1] as u128).sum();
            Ok(sum == ks.target as u128)
        }
        (P::Partition(p), C::ItemSet(ix)) => {
            mask(ix, p.values.len(), "item")?;
            let sum: u128 = ix.iter().map(|&i| p.values[i - 1] as u128).sum();
            Ok(2 * sum == p.total() as u128)
        }
        (P::JobSequencing, _) => Err(Error::UnsupportedKind(ProblemKind::JobSequencing)),
        _ => Err(mismatch()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::*;

    fn k3() -> UGraph {
        UGraph::new(3, vec![(1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn triangle_is_its_own_clique() {
        let p = Problem::Clique { graph: k3(), k: 3 };
        assert!(verify_certificate(&p, &Certificate::VertexSet(vec![1, 2, 3])).unwrap());
        assert!(!verify_certificate(&p, &Certificate::VertexSet(vec![1, 2])).unwrap());
    }

    #[test]
    fn partition_half_sum() {
        let p = Problem::Partition(Partition { values: vec![1, 2, 3] });
        // 3 == (1 + 2 + 3) / 2
        assert!(verify_certificate(&p, &Certificate::ItemSet(vec![3])).unwrap());
        assert!(!verify_certificate(&p, &Certificate::ItemSet(vec![1])).unwrap());
    }

    #[test]
    fn all_false_fails_positive_clause() {
        let p = Problem::ThreeSat(CnfFormula::new(3, vec![vec![1, 2, 3]]));
        assert!(!verify_certificate(&p, &Certificate::Assignment(vec![false; 3])).unwrap());
        assert!(verify_certificate(&p, &Certificate::Assignment(vec![false, false, true])).unwrap());
    }

    #[test]
    fn malformed_witnesses_are_errors() {
        let p = Problem::Clique { graph: k3(), k: 2 };
        assert!(matches!(
            verify_certificate(&p, &Certificate::VertexSet(vec![1, 4])),
            Err(Error::InvalidCertificate(_))
        ));
        assert!(matches!(
            verify_certificate(&p, &Certificate::VertexSet(vec![1, 1])),
            Err(Error::InvalidCertificate(_))
        ));
        assert!(matches!(
            verify_certificate(&p, &Certificate::ItemSet(vec![1])),
            Err(Error::CertificateMismatch { .. })
        ));
        let sat = Problem::Sat(CnfFormula::new(2, vec![vec![1]]));
        assert!(verify_certificate(&sat, &Certificate::Assignment(vec![true])).is_err());
        let ip = Problem::Ip01(crate::program::BinaryProgram::new());
        assert!(verify_certificate(&ip, &Certificate::BinaryVector(vec![2])).is_err());
    }

    #[test]
    fn cycles_need_enough_vertices() {
        let two = Problem::Dhcp(DiGraph::new(2, vec![(1, 2), (2, 1)]));
        assert!(verify_certificate(&two, &Certificate::CycleOrder(vec![2, 1])).unwrap());
        let k2 = Problem::Hcp(UGraph::new(2, vec![(1, 2)]));
        assert!(!verify_certificate(&k2, &Certificate::CycleOrder(vec![1, 2])).unwrap());
        let tri = Problem::Hcp(k3());
        assert!(verify_certificate(&tri, &Certificate::CycleOrder(vec![3, 1, 2])).unwrap());
        assert!(!verify_certificate(&tri, &Certificate::CycleOrder(vec![1, 2])).unwrap());
    }

    #[test]
    fn steiner_trees_must_connect_terminals() {
        let st = Problem::SteinerTree(SteinerInstance {
            graph: UGraph::weighted(4, vec![(1, 2), (2, 3), (3, 4)], vec![1, 2, 3]),
            terminals: vec![1, 3],
            budget: 3,
        });
        let tree = |edges: Vec<usize>, root| Certificate::SteinerTree { edges, root };
        assert!(verify_certificate(&st, &tree(vec![1, 2], 1)).unwrap());
        assert!(!verify_certificate(&st, &tree(vec![1, 3], 1)).unwrap());
        assert!(!verify_certificate(&st, &tree(vec![1, 2, 3], 1)).unwrap());
        assert!(!verify_certificate(&st, &tree(vec![], 1)).unwrap());
        let single = Problem::SteinerTree(SteinerInstance {
            graph: UGraph::weighted(2, vec![(1, 2)], vec![5]),
            terminals: vec![2],
            budget: 0,
        });
        assert!(verify_certificate(&single, &tree(vec![], 2)).unwrap());
    }

    #[test]
    fn clique_cover_on_complemented_storage() {
        let stored = k3();
        let p = Problem::CliqueCover { graph: stored, l: 3, complemented: true };
        let singletons = Certificate::CliquePartition(vec![vec![1], vec![2], vec![3]]);
        assert!(verify_certificate(&p, &singletons).unwrap());
        let pair = Certificate::CliquePartition(vec![vec![1, 2], vec![3]]);
        assert!(!verify_certificate(&p, &pair).unwrap());
        let missing = Certificate::CliquePartition(vec![vec![1], vec![2]]);
        assert!(!verify_certificate(&p, &missing).unwrap());
    }

    #[test]
    fn hitting_set_needs_exactly_one_per_set() {
        let p = Problem::HittingSet(SetFamily::new(3, vec![vec![1, 2], vec![2, 3]]));
        assert!(verify_certificate(&p, &Certificate::ElementSet(vec![2])).unwrap());
        assert!(verify_certificate(&p, &Certificate::ElementSet(vec![1, 3])).unwrap());
        assert!(!verify_certificate(&p, &Certificate::ElementSet(vec![1, 2])).unwrap());
    }

    #[test]
    fn job_sequencing_is_unsupported() {
        assert!(matches!(
            verify_certificate(&Problem::JobSequencing, &Certificate::ItemSet(vec![])),
            Err(Error::UnsupportedKind(_))
        ));
    }
}
