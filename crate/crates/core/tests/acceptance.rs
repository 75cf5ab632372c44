//! Acceptance suite. Prints one PASS/FAIL line per criterion with details
//! underneath, then exits non-zero if any criterion fails outside the
//! `KNOWN_GAPS` list.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;

use karp_core::genlab::{generate, GeneratorSpec};
use karp_core::growth::{audit, GrowthReport};
use karp_core::instances::{verify_certificate, CnfFormula, DiGraph};
use karp_core::num::slack_width;
use karp_core::oracles::solve;
use karp_core::program::{to_equality_form, BinaryProgram, ConstraintRow, Relation, VariableTag};
use karp_core::reductions::{all, by_id, reduce_sat_to_3sat, route_to_kernel, Reduction, KERNEL};
use karp_core::{measure, Problem, ProblemKind};

/// Seeded instances per reduction for answer preservation.
const INSTANCES_PER_REDUCTION: u64 = 200;
/// Required agreement between source and target oracle answers.
const REQUIRED_AGREEMENT: f64 = 1.0;
/// Required fraction of YES target certificates that lift to valid source
/// certificates.
const REQUIRED_LIFT_RATE: f64 = 1.0;
/// Oracle budget for the suite. The searches prune, so this bounds the
/// declared candidate space rather than the work actually done.
const BUDGET: u128 = 1 << 48;
/// Growth audit scale points; the span must be at least `MIN_SPAN`.
const SCALES: [usize; 5] = [8, 16, 32, 64, 128];
const MIN_SPAN: usize = 16;
const AUDIT_SEEDS: u64 = 5;
/// SAT→3-SAT element-mode bound.
const SAT_ALPHA: u64 = 3;
/// Largest program for the exhaustive slack rewriter check.
const MAX_REWRITER_VARS: usize = 12;
const REWRITER_PROGRAMS: u64 = 400;
/// Density of the dense family in the Chromatic→CliqueCover dichotomy.
const DENSE_P: f64 = 0.75;

/// Criteria expected to fail, with the component responsible. The Steiner
/// rows admit directed cycles of non-root vertices, so a feasible program
/// need not encode a tree.
const KNOWN_GAPS: [(u8, &str); 2] = [(1, "steiner_tree_to_ip"), (2, "steiner_tree_to_ip")];

/// The reduction whose growth is superlinear on sparse inputs by design.
const DENSE_CHROMATIC: &str = "chromatic_to_clique_cover";

struct Criterion {
    number: u8,
    title: &'static str,
    failing: Vec<String>,
    details: Vec<String>,
}

impl Criterion {
    fn new(number: u8, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            failing: Vec::new(),
            details: Vec::new(),
        }
    }

    fn fail(&mut self, component: &str, detail: String) {
        if !self.failing.iter().any(|c| c == component) {
            self.failing.push(component.to_string());
        }
        self.details.push(format!("FAIL {component}: {detail}"));
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }

    fn unexpected(&self) -> Vec<&String> {
        self.failing
            .iter()
            .filter(|c| !KNOWN_GAPS.contains(&(self.number, c.as_str())))
            .collect()
    }

    fn render(&self, out: &mut String) {
        let status = if self.failing.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} [{}] {}", self.number, self.title);
        if !self.failing.is_empty() {
            let unexpected = self.unexpected();
            if unexpected.is_empty() {
                line.push_str(&format!(" (known gap: {})", self.failing.join(", ")));
            } else {
                line.push_str(&format!(" (failing: {})", self.failing.join(", ")));
            }
        }
        let _ = writeln!(out, "{line}");
        for d in &self.details {
            let _ = writeln!(out, "    {d}");
        }
    }
}

/// Small instances within oracle reach for criterion 1. Every target
/// program stays within 24 variables.
fn family(r: &Reduction, seed: u64) -> GeneratorSpec {
    use ProblemKind as K;
    let s = GeneratorSpec::new(r.source, seed, 0);
    let pick = |n: u64| seed % n;
    let param = |n: u64| (seed / 7) % n;
    match r.source {
        K::Sat => s.with_size(2 + pick(5) as usize).universe(5).max_len(5),
        K::ThreeSat => s.with_size(8 + pick(20) as usize).universe(4 + pick(2) as usize),
        K::Clique => s
            .with_size(4 + pick(4) as usize)
            .degree(1.0 + pick(3) as f64 * 0.5)
            .param(2 + param(3)),
        K::SetPacking => s.with_size(4 + pick(5) as usize).universe(6).param(1 + param(4)),
        K::NodeCover => s.with_size(4 + pick(5) as usize).degree(1.5).param(1 + param(4)),
        K::SetCovering => s.with_size(4 + pick(5) as usize).universe(6).param(1 + param(4)),
        K::FeedbackArcSet => s.with_size(3 + pick(4) as usize).degree(2.0).param(param(4)),
        K::Dhcp => s.with_size(2 + pick(4) as usize).degree(2.0),
        K::ExactCover => s.with_size(4 + pick(5) as usize).universe(6).max_len(3),
        K::HittingSet => s.with_size(3 + pick(6) as usize).universe(6 + pick(3) as usize).max_len(3),
        K::SteinerTree => s
            .with_size(3 + pick(3) as usize)
            .degree(0.3)
            .max_value(4)
            .param(1 + param(8)),
        K::ThreeDimMatching => s.with_size(3 + pick(6) as usize).universe(2 + pick(2) as usize),
        K::Knapsack => s.with_size(3 + pick(8) as usize).max_value(12).param(param(40)),
        K::Partition => s.with_size(3 + pick(8) as usize).max_value(9),
        K::MaxCut => s.with_size(3 + pick(4) as usize).max_value(3).param(1 + param(12)),
        K::ChromaticNumber => s
            .with_size(3 + pick(5) as usize)
            .degree(1.5)
            .param(1 + param(3)),
        other => panic!("no family for {other}"),
    }
}

/// Audit family for criterion 6.
fn audit_family(r: &Reduction, seed: u64) -> GeneratorSpec {
    let s = GeneratorSpec::new(r.source, seed, 0);
    match r.source {
        ProblemKind::Sat => s.max_len(8),
        _ => s,
    }
}

struct Transcript {
    instances: String,
    reports: String,
}

fn check_formulas(c3: &mut Criterion, tally: &mut BTreeMap<&'static str, (usize, usize)>, r: &Reduction, src: &Problem, tgt: &Problem) {
    let entry = tally.entry(r.id).or_default();
    for f in r.check_formulas(src, tgt) {
        entry.0 += 1;
        if !f.holds() {
            entry.1 += 1;
            if entry.1 <= 3 {
                c3.fail(r.id, format!("{} expected {}, got {}", f.name, f.expected, f.actual));
            }
        }
    }
}

fn answers_and_lifts(c1: &mut Criterion, c2: &mut Criterion, c3: &mut Criterion, tally: &mut BTreeMap<&'static str, (usize, usize)>, t: &mut Transcript) {
    for r in all() {
        let (mut agree, mut yes, mut lifted_ok, mut lift_total) = (0u64, 0u64, 0u64, 0u64);
        let mut first_disagreement = None;
        let mut first_bad_lift = None;
        for seed in 0..INSTANCES_PER_REDUCTION {
            let spec = family(r, seed);
            let src = generate(&spec).expect("family generates");
            let tgt = r.apply(&src).expect("reduction applies");
            let before = solve(&src, BUDGET).expect("source within budget");
            let after = solve(&tgt, BUDGET).expect("target within budget");
            let _ = writeln!(t.instances, "{} {}", r.id, serde_json::to_string(&src).unwrap());
            let _ = writeln!(t.instances, "{} {}", r.id, serde_json::to_string(&tgt).unwrap());
            let _ = writeln!(t.instances, "{} {}", serde_json::to_string(&before).unwrap(), serde_json::to_string(&after).unwrap());
            check_formulas(c3, tally, r, &src, &tgt);
            if before.answer == after.answer {
                agree += 1;
            } else if first_disagreement.is_none() {
                first_disagreement = Some(format!("seed {seed}: source {} target {}", before.answer, after.answer));
            }
            if let Some(cert) = &after.certificate {
                yes += 1;
                lift_total += 1;
                let ok = matches!(r.lift(&src, cert).and_then(|c| verify_certificate(&src, &c)), Ok(true));
                if ok {
                    lifted_ok += 1;
                } else if first_bad_lift.is_none() {
                    first_bad_lift = Some(format!("seed {seed}"));
                }
            }
        }
        let rate = agree as f64 / INSTANCES_PER_REDUCTION as f64;
        let summary = format!("{agree}/{INSTANCES_PER_REDUCTION} agree, {yes} yes / {} no", INSTANCES_PER_REDUCTION - yes);
        if rate < REQUIRED_AGREEMENT {
            c1.fail(r.id, format!("{summary}; first {}", first_disagreement.unwrap_or_default()));
        } else {
            c1.note(format!("{}: {summary}", r.id));
        }
        let lift_rate = if lift_total == 0 { 1.0 } else { lifted_ok as f64 / lift_total as f64 };
        if lift_total == 0 {
            c2.fail(r.id, "no YES targets to lift".into());
        } else if lift_rate < REQUIRED_LIFT_RATE {
            c2.fail(r.id, format!("{lifted_ok}/{lift_total} lifts verify; first failure {}", first_bad_lift.unwrap_or_default()));
        } else {
            c2.note(format!("{}: {lifted_ok}/{lift_total} lifts verify", r.id));
        }
    }
}

fn sat_bound(c4: &mut Criterion) {
    let r = by_id("sat_to_3sat").unwrap();
    let mut worst = 0.0f64;
    for seed in 0..AUDIT_SEEDS {
        let rep = audit(r.id, &audit_family(r, seed), &SCALES).unwrap();
        for p in &rep.points {
            if p.output.elements > SAT_ALPHA * p.input.elements {
                c4.fail(r.id, format!("seed {seed} scale {}: {} > {SAT_ALPHA}·{}", p.scale, p.output.elements, p.input.elements));
            }
        }
        worst = worst.max(rep.element.max_ratio);
    }
    c4.note(format!("max element ratio {worst:.3} over {AUDIT_SEEDS} families with clauses up to 8 literals"));
    for k in 4..=12i64 {
        let f = CnfFormula::new(k as usize, vec![(1..=k).collect()]);
        let out = reduce_sat_to_3sat(&f);
        let fresh = out.num_literals - k as usize;
        if out.clauses.len() != k as usize - 2 || fresh != k as usize - 3 {
            c4.fail(r.id, format!("k={k}: {} clauses, {fresh} fresh", out.clauses.len()));
        }
    }
    c4.note("single clauses of size 4..=12 give k−2 clauses and k−3 fresh variables".into());
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

/// Exhaustive over original assignments; slack variables of distinct rows
/// are disjoint, so each row's slack is completed on its own.
fn projected_agreement(p: &BinaryProgram, eq: &BinaryProgram) -> bool {
    let n = p.num_vars();
    (0u32..1 << n).all(|m| {
        let x: Vec<bool> = (0..n).map(|j| m >> j & 1 == 1).collect();
        let original = p.rows.iter().all(|r| holds(r.relation, &row_value(r, &x), &r.rhs));
        let rewritten = eq.rows.iter().all(|row| {
            let slack: Vec<usize> = row.terms.iter().map(|t| t.var).filter(|&v| v >= n).collect();
            (0u32..1 << slack.len()).any(|s| {
                let mut full = vec![false; eq.num_vars()];
                full[..n].copy_from_slice(&x);
                for (b, &v) in slack.iter().enumerate() {
                    full[v] = s >> b & 1 == 1;
                }
                row_value(row, &full) == row.rhs
            })
        });
        original == rewritten
    })
}

fn ceil_log2_plus_one(g: u64) -> u64 {
    (0..=64u32).find(|&w| (1u128 << w) > g as u128).unwrap() as u64
}

fn slack_rewriter(c5: &mut Criterion) {
    let mut checked = 0;
    let mut feasible = 0;
    for seed in 0..REWRITER_PROGRAMS {
        let n = 1 + (seed as usize % MAX_REWRITER_VARS);
        let Problem::Ip01(p) = generate(&GeneratorSpec::new(ProblemKind::Ip01, seed, n)).unwrap() else {
            unreachable!()
        };
        let eq = to_equality_form(&p).unwrap();
        if !projected_agreement(&p, &eq) {
            c5.fail("to_equality_form", format!("projection differs for program seed {seed}"));
        }
        if solve(&Problem::Ip01(p.clone()), BUDGET).unwrap().is_yes() {
            feasible += 1;
        }
        checked += 1;
    }
    c5.note(format!("{checked} programs of 1..={MAX_REWRITER_VARS} variables, {feasible} feasible, checked per assignment"));
    for g in 0..=5000u64 {
        let mut p = BinaryProgram::new();
        p.add_var(VariableTag::new("x", &[1]));
        p.push(ConstraintRow::new([(0usize, 1i64)], Relation::Le, 0).with_slack_bound(g));
        let added = to_equality_form(&p).unwrap().num_vars() as u64 - 1;
        if added != ceil_log2_plus_one(g) || slack_width(&BigInt::from(g)) != added {
            c5.fail("to_equality_form", format!("g={g}: {added} slack variables"));
        }
    }
    c5.note("slack count equals ⌈log₂(g+1)⌉ for g in 0..=5000".into());
}

fn growth(c6: &mut Criterion, c3: &mut Criterion, tally: &mut BTreeMap<&'static str, (usize, usize)>, t: &mut Transcript) {
    let span = SCALES.iter().max().unwrap() / SCALES.iter().min().unwrap();
    if span < MIN_SPAN {
        c6.fail("scales", format!("span {span}× below {MIN_SPAN}×"));
    }
    let record = |t: &mut Transcript, rep: &GrowthReport| {
        let _ = writeln!(t.reports, "{}", serde_json::to_string(rep).unwrap());
    };
    for r in all().iter().filter(|r| r.id != DENSE_CHROMATIC) {
        let mut worst = 0.0f64;
        for seed in 0..AUDIT_SEEDS {
            let family = audit_family(r, seed);
            let rep = audit(r.id, &family, &SCALES).unwrap();
            record(t, &rep);
            for scale in SCALES {
                let src = generate(&family.with_size(scale)).unwrap();
                let tgt = r.apply(&src).unwrap();
                check_formulas(c3, tally, r, &src, &tgt);
            }
            if !rep.passed {
                c6.fail(r.id, format!("seed {seed}: {}", rep.violations.first().cloned().unwrap_or_default()));
            }
            worst = worst.max(rep.element.max_ratio);
        }
        c6.note(format!("{}: max ratio {worst:.3} within {}·x + {}", r.id, r.growth.alpha, r.growth.beta));
    }
    for seed in 0..AUDIT_SEEDS {
        let sparse = GeneratorSpec::new(ProblemKind::ChromaticNumber, seed, 0);
        let dense = sparse.clone().density(DENSE_P);
        let (s, d) = (
            audit(DENSE_CHROMATIC, &sparse, &SCALES).unwrap(),
            audit(DENSE_CHROMATIC, &dense, &SCALES).unwrap(),
        );
        record(t, &s);
        record(t, &d);
        if s.passed {
            c6.fail(DENSE_CHROMATIC, format!("seed {seed}: sparse family stayed within the bound"));
        }
        if !d.passed {
            c6.fail(DENSE_CHROMATIC, format!("seed {seed}: dense family exceeded the bound"));
        }
        if seed == 0 {
            c6.note(format!(
                "{DENSE_CHROMATIC}: sparse max ratio {:.3} (fails as expected), dense p={DENSE_P} max ratio {:.3}",
                s.element.max_ratio, d.element.max_ratio
            ));
        }
    }
    // diagnostic only: out-degree is unbounded on a two-way star
    let fas = by_id("fas_to_fns").unwrap();
    let star = |n: usize| {
        let arcs = (2..=n).flat_map(|v| [(1, v), (v, 1)]).collect();
        Problem::FeedbackArcSet {
            graph: DiGraph::new(n, arcs),
            k: 1,
        }
    };
    let ratios: Vec<String> = [8, 32, 128]
        .iter()
        .map(|&n| {
            let src = star(n);
            let tgt = fas.apply(&src).unwrap();
            let (i, o) = (measure(&src).unwrap().elements, measure(&tgt).unwrap().elements);
            format!("n={n} ratio {:.1}", o as f64 / i as f64)
        })
        .collect();
    c6.note(format!("info fas_to_fns on two-way stars (unbounded degree): {}", ratios.join(", ")));
}

fn routing(c7: &mut Criterion) {
    let expected = [
        ProblemKind::Ip01,
        ProblemKind::FeedbackNodeSet,
        ProblemKind::Hcp,
        ProblemKind::ChromaticNumber,
        ProblemKind::CliqueCover,
        ProblemKind::JobSequencing,
    ];
    let mut kernel = KERNEL.to_vec();
    kernel.sort();
    let mut want = expected.to_vec();
    want.sort();
    if kernel != want {
        c7.fail("kernel", format!("{kernel:?}"));
    }
    for kind in ProblemKind::ALL {
        let chain = route_to_kernel(kind);
        let end = chain.target(kind);
        if !want.contains(&end) {
            c7.fail(kind.tag(), format!("ends at {end}"));
        }
        if let Some(first) = chain.links().first() {
            if first.source != kind {
                c7.fail(kind.tag(), format!("chain starts at {}", first.source));
            }
        }
    }
    c7.note(format!("{} kinds routed; kernel size {}", ProblemKind::ALL.len(), kernel.len()));
}

fn run_suite() -> (String, Transcript, bool) {
    let mut t = Transcript {
        instances: String::new(),
        reports: String::new(),
    };
    let mut c1 = Criterion::new(1, "answer preservation");
    let mut c2 = Criterion::new(2, "lift soundness");
    let mut c3 = Criterion::new(3, "exact size formulas");
    let mut c4 = Criterion::new(4, "SAT→3-SAT bound");
    let mut c5 = Criterion::new(5, "slack rewriter");
    let mut c6 = Criterion::new(6, "growth audits");
    let mut c7 = Criterion::new(7, "kernel routing");
    let mut tally = BTreeMap::new();

    answers_and_lifts(&mut c1, &mut c2, &mut c3, &mut tally, &mut t);
    sat_bound(&mut c4);
    slack_rewriter(&mut c5);
    growth(&mut c6, &mut c3, &mut tally, &mut t);
    routing(&mut c7);
    for (id, (checks, bad)) in &tally {
        if *bad == 0 {
            c3.note(format!("{id}: {checks} formula checks hold"));
        } else {
            c3.note(format!("{id}: {bad} of {checks} formula checks fail"));
        }
    }

    let mut out = String::new();
    let mut ok = true;
    for c in [&c1, &c2, &c3, &c4, &c5, &c6, &c7] {
        c.render(&mut out);
        ok &= c.unexpected().is_empty();
    }
    (out, t, ok)
}

fn main() {
    let start = Instant::now();
    let (report, first, ok) = run_suite();
    let (again, second, _) = run_suite();

    let dir = tempfile::tempdir().expect("temp dir");
    let mut identical = report == again;
    for (name, a, b) in [
        ("instances.jsonl", &first.instances, &second.instances),
        ("reports.jsonl", &first.reports, &second.reports),
    ] {
        let (pa, pb) = (dir.path().join(format!("a-{name}")), dir.path().join(format!("b-{name}")));
        std::fs::write(&pa, a).unwrap();
        std::fs::write(&pb, b).unwrap();
        identical &= std::fs::read(&pa).unwrap() == std::fs::read(&pb).unwrap();
    }
    let mut c8 = Criterion::new(8, "determinism");
    if identical {
        c8.note(format!(
            "two runs: {} instance bytes and {} report bytes identical",
            first.instances.len(),
            first.reports.len()
        ));
    } else {
        c8.fail("suite", "second run differs".into());
    }
    let mut out = report;
    c8.render(&mut out);
    print!("{out}");
    println!("acceptance suite finished in {:.1}s", start.elapsed().as_secs_f64());

    if !ok || !identical {
        println!("unexpected acceptance failures");
        std::process::exit(1);
    }
}
