//! Reading and writing instances: the JSON envelope, DIMACS CNF and plain
//! edge lists. A path of `-` means stdin or stdout.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{CnfFormula, DiGraph, Problem, ProblemKind, SteinerInstance, UGraph};

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

/// Pretty JSON with a trailing newline, so repeated runs are byte-identical.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}

/// Reads an envelope and checks it.
pub fn read_problem(path: &Path) -> Result<Problem> {
    let p: Problem = read_json(path)?;
    p.validate()?;
    Ok(p)
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>` header,
/// then literals with each clause terminated by `0`. Clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            // SATLIB files end with a `%` trailer
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return parse_err(lineno, "second problem line");
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().or_else(|_| parse_err(lineno, "bad variable count"))?;
                    let c = c.parse().or_else(|_| parse_err(lineno, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return parse_err(lineno, "expected `p cnf <vars> <clauses>`"),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return parse_err(lineno, "clause before the problem line");
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .or_else(|_| parse_err(lineno, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                if current.is_empty() {
                    return parse_err(lineno, "empty clause");
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return parse_err(lineno, format!("literal {lit} exceeds {vars} variables"));
                }
                current.push(lit);
            }
        }
    }
    let Some((vars, count)) = header else {
        return parse_err(last_line, "missing problem line");
    };
    if !current.is_empty() {
        // tolerate a final clause without its terminating 0
        clauses.push(current);
    }
    if clauses.len() != count {
        return parse_err(
            last_line,
            format!("header announces {count} clauses, found {}", clauses.len()),
        );
    }
    Ok(CnfFormula::new(vars, clauses))
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_literals, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            out.push_str(&l.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Present when every edge line carries a third column.
    pub weights: Option<Vec<u64>>,
}

/// Parses a whitespace edge list, one `u v [w]` per line with 1-based
/// vertices. Lines starting with `#` or `%` are comments. The vertex count is
/// the largest index seen unless a `# vertices N` comment raises it.
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut declared = 0usize;
    let mut max_vertex = 0usize;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut weighted: Option<bool> = None;
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#').or_else(|| line.strip_prefix('%')) {
            let fields: Vec<&str> = comment.split_whitespace().collect();
            if let ["vertices", v] = fields.as_slice() {
                declared = v.parse().or_else(|_| parse_err(lineno, "bad vertex count"))?;
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let has_weight = match fields.len() {
            2 => false,
            3 => true,
            _ => return parse_err(lineno, "expected `u v` or `u v w`"),
        };
        if *weighted.get_or_insert(has_weight) != has_weight {
            return parse_err(lineno, "weight column present on some lines only");
        }
        let mut endpoint = |tok: &str| -> Result<usize> {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => {
                    max_vertex = max_vertex.max(v);
                    Ok(v)
                }
                _ => parse_err(lineno, format!("bad vertex `{tok}`")),
            }
        };
        let u = endpoint(fields[0])?;
        let v = endpoint(fields[1])?;
        edges.push((u, v));
        if has_weight {
            let w = fields[2]
                .parse()
                .or_else(|_| parse_err(lineno, format!("bad weight `{}`", fields[2])))?;
            weights.push(w);
        }
    }
    Ok(EdgeList {
        num_vertices: declared.max(max_vertex),
        edges,
        weights: (weighted == Some(true)).then_some(weights),
    })
}

pub fn write_edge_list(num_vertices: usize, edges: &[(usize, usize)], weights: Option<&[u64]>) -> String {
    let mut out = format!("# vertices {num_vertices}\n");
    for (e, &(u, v)) in edges.iter().enumerate() {
        match weights {
            Some(w) => out.push_str(&format!("{u} {v} {}\n", w[e])),
            None => out.push_str(&format!("{u} {v}\n")),
        }
    }
    out
}

/// Builds a graph instance of `kind` from an edge list. `param` is the
/// scalar of the kind (k, l, threshold or budget); Steiner instances also
/// take their terminals.
pub fn problem_from_edge_list(kind: ProblemKind, list: EdgeList, param: Option<u64>, terminals: &[usize]) -> Result<Problem> {
    use ProblemKind as K;
    let n = list.num_vertices;
    let needs_param = !matches!(kind, K::Hcp | K::Dhcp);
    let param = match (param, needs_param) {
        (Some(p), true) => p,
        (None, true) => return Err(Error::InvalidInstance(format!("`{kind}` from an edge list needs a parameter"))),
        (_, false) => 0,
    };
    let k = usize::try_from(param).map_err(|_| Error::InvalidInstance("parameter out of range".into()))?;
    let undirected = |list: EdgeList| match list.weights {
        Some(w) => UGraph::weighted(n, list.edges, w),
        None => UGraph::new(n, list.edges),
    };
    let problem = match kind {
        K::Clique => Problem::Clique { graph: undirected(list), k },
        K::NodeCover => Problem::NodeCover { graph: undirected(list), l: k },
        K::Hcp => Problem::Hcp(undirected(list)),
        K::ChromaticNumber => Problem::ChromaticNumber { graph: undirected(list), k },
        K::CliqueCover => Problem::CliqueCover {
            graph: undirected(list),
            l: k,
            complemented: false,
        },
        K::MaxCut => Problem::MaxCut {
            graph: undirected(list),
            threshold: param,
        },
        K::SteinerTree => Problem::SteinerTree(SteinerInstance {
            graph: undirected(list),
            terminals: terminals.to_vec(),
            budget: param,
        }),
        K::Dhcp => Problem::Dhcp(DiGraph::new(n, list.edges)),
        K::FeedbackNodeSet => Problem::FeedbackNodeSet {
            graph: DiGraph::new(n, list.edges),
            k,
        },
        K::FeedbackArcSet => Problem::FeedbackArcSet {
            graph: DiGraph::new(n, list.edges),
            k,
        },
        other => return Err(Error::InvalidInstance(format!("`{other}` is not a graph kind"))),
    };
    problem.validate()?;
    Ok(problem)
}

/// The edge list of a graph instance, or `None` for other kinds.
pub fn problem_to_edge_list(problem: &Problem) -> Option<String> {
    let undirected = |g: &UGraph| write_edge_list(g.num_vertices, &g.edges, g.weights.as_deref());
    match problem {
        Problem::Clique { graph, .. }
        | Problem::NodeCover { graph, .. }
        | Problem::Hcp(graph)
        | Problem::ChromaticNumber { graph, .. }
        | Problem::CliqueCover { graph, .. }
        | Problem::MaxCut { graph, .. } => Some(undirected(graph)),
        Problem::SteinerTree(st) => Some(undirected(&st.graph)),
        Problem::Dhcp(g) | Problem::FeedbackNodeSet { graph: g, .. } | Problem::FeedbackArcSet { graph: g, .. } => {
            Some(write_edge_list(g.num_vertices, &g.arcs, None))
        }
        _ => None,
    }
}
