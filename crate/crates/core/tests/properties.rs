use num_bigint::BigInt;
use proptest::prelude::*;

use karp_core::genlab::{generate, GeneratorSpec};
use karp_core::instances::verify_certificate;
use karp_core::num::{bit_length_u64, slack_width};
use karp_core::oracles::{solve, DEFAULT_BUDGET};
use karp_core::program::{to_equality_form, BinaryProgram, ConstraintRow, Relation, VariableTag};
use karp_core::reductions::{all, by_id, route_to_kernel, Affine, Chain};
use karp_core::{measure, Problem, ProblemKind};

fn program_strategy(max_vars: usize) -> impl Strategy<Value = BinaryProgram> {
    (1..=max_vars).prop_flat_map(|n| {
        let row = (
            proptest::collection::vec((0..n, -5i64..=5), 1..=n.min(4)),
            0..3u8,
            -4i64..=8,
        );
        proptest::collection::vec(row, 1..=4).prop_map(move |rows| {
            let mut p = BinaryProgram::new();
            for j in 1..=n {
                p.add_var(VariableTag::new("x", &[j as u64]));
            }
            for (mut terms, rel, rhs) in rows {
                terms.sort_by_key(|t| t.0);
                terms.dedup_by_key(|t| t.0);
                terms.retain(|t| t.1 != 0);
                if terms.is_empty() {
                    terms.push((0, 1));
                }
                let relation = [Relation::Eq, Relation::Le, Relation::Ge][rel as usize];
                let row = ConstraintRow::new(terms, relation, rhs);
                p.push(if relation == Relation::Eq { row } else { row.with_natural_gap() });
            }
            p
        })
    })
}

fn row_value(row: &ConstraintRow, x: &[bool]) -> BigInt {
    row.terms.iter().filter(|t| x[t.var]).map(|t| t.coef.clone()).sum()
}

fn holds(rel: Relation, lhs: &BigInt, rhs: &BigInt) -> bool {
    match rel {
        Relation::Eq => lhs == rhs,
        Relation::Le => lhs <= rhs,
        Relation::Ge => lhs >= rhs,
    }
}

/// Whether some completion of the slack variables of `row` in `eq`
/// satisfies it, given the original assignment `x`. Slack variables of
/// distinct rows are disjoint, so rows are completed independently.
fn completable(eq: &BinaryProgram, n: usize, x: &[bool]) -> bool {
    eq.rows.iter().all(|row| {
        let slack: Vec<usize> = row.terms.iter().map(|t| t.var).filter(|&v| v >= n).collect();
        (0u32..1 << slack.len()).any(|m| {
            let mut full = vec![false; eq.variables.len()];
            full[..n].copy_from_slice(x);
            for (b, &v) in slack.iter().enumerate() {
                full[v] = m >> b & 1 == 1;
            }
            row_value(row, &full) == row.rhs
        })
    })
}

fn smallest_width(g: u64) -> u64 {
    (0..=64).find(|&w| (1u128 << w) > g as u128).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equality_form_preserves_satisfiability(p in program_strategy(12)) {
        let eq = to_equality_form(&p).unwrap();
        let n = p.variables.len();
        prop_assert!(eq.rows.iter().all(|r| r.relation == Relation::Eq));
        prop_assert_eq!(&eq.variables[..n], &p.variables[..]);
        for m in 0u32..1 << n {
            let x: Vec<bool> = (0..n).map(|j| m >> j & 1 == 1).collect();
            let original = p.rows.iter().all(|r| holds(r.relation, &row_value(r, &x), &r.rhs));
            prop_assert_eq!(original, completable(&eq, n, &x), "assignment {:?}", x);
        }
    }

    #[test]
    fn slack_count_is_the_bit_width(g in 0u64..5000, rel in prop::bool::ANY) {
        let relation = if rel { Relation::Le } else { Relation::Ge };
        let mut p = BinaryProgram::new();
        p.add_var(VariableTag::new("x", &[1]));
        p.push(ConstraintRow::new([(0usize, 1i64)], relation, 0).with_slack_bound(g));
        let eq = to_equality_form(&p).unwrap();
        prop_assert_eq!((eq.variables.len() - 1) as u64, smallest_width(g));
        prop_assert_eq!(slack_width(&BigInt::from(g)), smallest_width(g));
    }

    #[test]
    fn bit_length_matches_log(v in 1u64..) {
        prop_assert_eq!(bit_length_u64(v), smallest_width(v));
    }

    #[test]
    fn affine_composition_bounds_the_composite(
        a in (1u64..20, 1u64..4, 0u64..5),
        b in (1u64..20, 1u64..4, 0u64..5),
        x in 0u64..10_000,
    ) {
        let (f, g) = (Affine::new(a.0, a.1, a.2), Affine::new(b.0, b.1, b.2));
        let fg = f.then(&g);
        // the largest integers each bound admits
        let y = (0..).take_while(|&y| f.admits(x, y)).last().unwrap_or(0);
        let z = (0..).take_while(|&z| g.admits(y, z)).last().unwrap_or(0);
        prop_assert!(fg.admits(x, z));
    }

    #[test]
    fn generated_instances_are_valid_and_reproducible(kind_ix in 0usize..21, seed in any::<u64>(), size in 1usize..24) {
        let kind = ProblemKind::ALL[kind_ix];
        prop_assume!(kind != ProblemKind::JobSequencing);
        let spec = GeneratorSpec::new(kind, seed, size);
        let spec = if kind == ProblemKind::ThreeDimMatching { spec.universe(size.max(3)) } else { spec };
        let p = generate(&spec).unwrap();
        prop_assert_eq!(p.kind(), kind);
        p.validate().unwrap();
        prop_assert_eq!(&p, &generate(&spec).unwrap());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Problem>(&json).unwrap(), p);
    }

    #[test]
    fn reductions_respect_their_growth_claims(r_ix in 0usize..17, seed in any::<u64>(), size in 1usize..40) {
        let r = &all()[r_ix];
        let spec = GeneratorSpec::new(r.source, seed, size);
        let spec = match r.id {
            "chromatic_to_clique_cover" => spec.density(0.75),
            _ => spec,
        };
        let src = generate(&spec).unwrap();
        let tgt = r.apply(&src).unwrap();
        let (i, o) = (measure(&src).unwrap().elements, measure(&tgt).unwrap().elements);
        // the gadget adds 2N edges, which only arcs can pay for once every
        // vertex has an out-arc; below that the instance is trivially NO
        if let Problem::Dhcp(g) = &src {
            if g.arcs.len() < g.num_vertices {
                prop_assert_eq!(o, i + 2 * g.num_vertices as u64);
                return Ok(());
            }
        }
        prop_assert!(r.growth.admits(i, o), "{}: {} -> {}", r.id, i, o);
    }

    #[test]
    fn partition_route_preserves_answers_and_lifts(seed in any::<u64>(), size in 1usize..12) {
        let src = generate(&GeneratorSpec::new(ProblemKind::Partition, seed, size).max_value(30)).unwrap();
        let chain = route_to_kernel(ProblemKind::Partition);
        let trace = chain.apply(&src).unwrap();
        let before = solve(&src, DEFAULT_BUDGET).unwrap();
        let after = solve(trace.output(), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(before.answer, after.answer);
        if let Some(cert) = after.certificate {
            let lifted = chain.lift_trace(&trace, &cert).unwrap();
            prop_assert!(verify_certificate(&src, &lifted).unwrap());
        }
    }

    #[test]
    fn chain_lift_is_linkwise_lift(seed in any::<u64>(), size in 1usize..6) {
        let src = generate(&GeneratorSpec::new(ProblemKind::Sat, seed, size).universe(4).max_len(4)).unwrap();
        let chain = Chain::from_ids(&["sat_to_3sat", "3sat_to_ip"]).unwrap();
        let trace = chain.apply(&src).unwrap();
        if let Some(cert) = solve(trace.output(), DEFAULT_BUDGET).unwrap().certificate {
            let mid = by_id("3sat_to_ip").unwrap().lift(&trace.instances[1], &cert).unwrap();
            let manual = by_id("sat_to_3sat").unwrap().lift(&src, &mid).unwrap();
            prop_assert_eq!(chain.lift(&src, &cert).unwrap(), manual);
        }
    }
}
