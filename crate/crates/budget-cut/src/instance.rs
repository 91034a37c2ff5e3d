//! Instance text formats, random generation, budget computation, the
//! knapsack-to-cut reduction, and solution records.
//!
//! Native instance format (one instance per file, `#` starts a comment,
//! blank lines ignored):
//!
//! ```text
//! n m            # header: vertex count, edge count
//! u v w c        # exactly m edge lines: endpoints (1-based), weight, cost
//! st s t         # optional: terminals for s-t constrained solves
//! ```
//!
//! A DIMACS-like importer is also provided: `c` comments, a `p <tag> n m`
//! problem line, `e u v w [c]` edge lines (cost defaults to 1), and optional
//! `n <id> s` / `n <id> t` terminal designations.
//!
//! Parsers reject disconnected graphs, self-loops, and out-of-range values;
//! all failures are errors, never panics, so the entry points are safe to
//! fuzz with arbitrary bytes.

use std::collections::BTreeSet;
use std::path::Path;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnb::Sense;
use crate::bounds::Rational;
use crate::error::{Error, Result};
use crate::graph::{Cut, VertexId, WeightedGraph};
use crate::mincut::{self, CutAttribute};
use crate::oracle::KnapsackItem;

/// Hard caps applied by the parsers; they keep hostile inputs from
/// requesting absurd allocations.
pub const MAX_VERTICES: u64 = 1_000_000;
pub const MAX_EDGES: u64 = 1_000_000;
pub const MAX_ATTRIBUTE: u64 = 1_000_000;

/// A named, connected problem instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub graph: WeightedGraph,
    pub terminals: Option<(VertexId, VertexId)>,
}

impl Instance {
    pub fn with_name(mut self, name: impl Into<String>) -> Instance {
        self.name = name.into();
        self
    }
}

/// Resolved budget, with the cut measures it was derived from when given
/// relative to the instance (`T = m_w + ⌊p · m_c⌋`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetSpec {
    pub t: u64,
    /// Weight of the weight-minimal cut (relative mode only).
    pub m_w: Option<u64>,
    /// Cost of the cost-minimal cut (relative mode only).
    pub m_c: Option<u64>,
    pub p: Option<Rational>,
}

impl BudgetSpec {
    pub fn absolute(t: u64) -> BudgetSpec {
        BudgetSpec {
            t,
            m_w: None,
            m_c: None,
            p: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn parse_int(tok: &str, line: usize, what: &str, max: u64) -> Result<u64> {
    let v: i128 = tok.parse().map_err(|_| Error::Syntax {
        line,
        msg: format!("expected an integer for {what}, got `{tok}`"),
    })?;
    if v < 0 {
        return Err(Error::ValueRange {
            line,
            msg: format!("{what} must be non-negative, got {v}"),
        });
    }
    if v > max as i128 {
        return Err(Error::ValueRange {
            line,
            msg: format!("{what} {v} exceeds the maximum {max}"),
        });
    }
    Ok(v as u64)
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn check_vertex(v: u64, n: u64, line: usize) -> Result<u32> {
    if v == 0 || v > n {
        return Err(Error::ValueRange {
            line,
            msg: format!("vertex {v} outside 1..={n}"),
        });
    }
    Ok(v as u32)
}

fn finish_instance(
    n: u32,
    edges: Vec<(u32, u32, u64, u64)>,
    terminals: Option<(u32, u32)>,
) -> Result<Instance> {
    let graph = WeightedGraph::from_edges(n, edges)?;
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let terminals = terminals.map(|(s, t)| (VertexId(s), VertexId(t)));
    Ok(Instance {
        name: "instance".into(),
        graph,
        terminals,
    })
}

/// Parses the native instance format.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = significant_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Syntax {
        line: 1,
        msg: "missing header line `n m`".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Syntax {
            line: hline,
            msg: format!("header must be `n m`, got `{header}`"),
        });
    }
    let n = parse_int(toks[0], hline, "vertex count", MAX_VERTICES)?;
    if n == 0 {
        return Err(Error::ValueRange {
            line: hline,
            msg: "vertex count must be positive".into(),
        });
    }
    let m = parse_int(toks[1], hline, "edge count", MAX_EDGES)?;

    let mut edges = Vec::with_capacity(m as usize);
    let mut terminals: Option<(u32, u32)> = None;
    for (lno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "st" {
            if terminals.is_some() {
                return Err(Error::Syntax {
                    line: lno,
                    msg: "duplicate terminals line".into(),
                });
            }
            if toks.len() != 3 {
                return Err(Error::Syntax {
                    line: lno,
                    msg: "terminals line must be `st s t`".into(),
                });
            }
            let s = check_vertex(parse_int(toks[1], lno, "terminal s", MAX_VERTICES)?, n, lno)?;
            let t = check_vertex(parse_int(toks[2], lno, "terminal t", MAX_VERTICES)?, n, lno)?;
            if s == t {
                return Err(Error::ValueRange {
                    line: lno,
                    msg: "terminals must be distinct".into(),
                });
            }
            terminals = Some((s, t));
            continue;
        }
        if edges.len() as u64 == m {
            return Err(Error::Syntax {
                line: lno,
                msg: format!("more than {m} edge lines"),
            });
        }
        if toks.len() != 4 {
            return Err(Error::Syntax {
                line: lno,
                msg: format!("edge line must be `u v w c`, got `{line}`"),
            });
        }
        let u = check_vertex(parse_int(toks[0], lno, "endpoint", MAX_VERTICES)?, n, lno)?;
        let v = check_vertex(parse_int(toks[1], lno, "endpoint", MAX_VERTICES)?, n, lno)?;
        if u == v {
            return Err(Error::Syntax {
                line: lno,
                msg: format!("self-loop at vertex {u}"),
            });
        }
        let w = parse_int(toks[2], lno, "weight", MAX_ATTRIBUTE)?;
        let c = parse_int(toks[3], lno, "cost", MAX_ATTRIBUTE)?;
        edges.push((u, v, w, c));
    }
    if (edges.len() as u64) < m {
        return Err(Error::Syntax {
            line: text.lines().count(),
            msg: format!("expected {m} edge lines, found {}", edges.len()),
        });
    }
    finish_instance(n as u32, edges, terminals)
}

/// Serializes to the canonical native format: header, merged edges in
/// ascending endpoint order, then the terminals line if present.
pub fn serialize_instance(instance: &Instance) -> String {
    let g = &instance.graph;
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for rec in g.edge_records() {
        out.push_str(&format!("{} {} {} {}\n", rec.u, rec.v, rec.weight, rec.cost));
    }
    if let Some((s, t)) = instance.terminals {
        out.push_str(&format!("st {s} {t}\n"));
    }
    out
}

/// Parses the DIMACS-like format.
pub fn parse_dimacs(text: &str) -> Result<Instance> {
    let mut n: Option<u64> = None;
    let mut m: Option<u64> = None;
    let mut edges: Vec<(u32, u32, u64, u64)> = Vec::new();
    let mut term_s: Option<u32> = None;
    let mut term_t: Option<u32> = None;

    for (lno, line) in text.lines().enumerate() {
        let lno = lno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if n.is_some() {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: "duplicate problem line".into(),
                    });
                }
                if toks.len() != 4 {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: "problem line must be `p <tag> n m`".into(),
                    });
                }
                let nv = parse_int(toks[2], lno, "vertex count", MAX_VERTICES)?;
                if nv == 0 {
                    return Err(Error::ValueRange {
                        line: lno,
                        msg: "vertex count must be positive".into(),
                    });
                }
                n = Some(nv);
                m = Some(parse_int(toks[3], lno, "edge count", MAX_EDGES)?);
            }
            "e" => {
                let n = n.ok_or(Error::Syntax {
                    line: lno,
                    msg: "edge before problem line".into(),
                })?;
                if !(toks.len() == 4 || toks.len() == 5) {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: "edge line must be `e u v w [c]`".into(),
                    });
                }
                if edges.len() as u64 == m.unwrap() {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: "more edge lines than declared".into(),
                    });
                }
                let u = check_vertex(parse_int(toks[1], lno, "endpoint", MAX_VERTICES)?, n, lno)?;
                let v = check_vertex(parse_int(toks[2], lno, "endpoint", MAX_VERTICES)?, n, lno)?;
                if u == v {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: format!("self-loop at vertex {u}"),
                    });
                }
                let w = parse_int(toks[3], lno, "weight", MAX_ATTRIBUTE)?;
                let c = if toks.len() == 5 {
                    parse_int(toks[4], lno, "cost", MAX_ATTRIBUTE)?
                } else {
                    1
                };
                edges.push((u, v, w, c));
            }
            "n" => {
                let n = n.ok_or(Error::Syntax {
                    line: lno,
                    msg: "node descriptor before problem line".into(),
                })?;
                if toks.len() != 3 {
                    return Err(Error::Syntax {
                        line: lno,
                        msg: "node line must be `n <id> s|t`".into(),
                    });
                }
                let id = check_vertex(parse_int(toks[1], lno, "terminal", MAX_VERTICES)?, n, lno)?;
                match toks[2] {
                    "s" => term_s = Some(id),
                    "t" => term_t = Some(id),
                    other => {
                        return Err(Error::Syntax {
                            line: lno,
                            msg: format!("unknown node tag `{other}`"),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Syntax {
                    line: lno,
                    msg: format!("unknown line tag `{other}`"),
                })
            }
        }
    }

    let n = n.ok_or(Error::Syntax {
        line: 1,
        msg: "missing problem line".into(),
    })?;
    let m = m.unwrap();
    if (edges.len() as u64) != m {
        return Err(Error::Syntax {
            line: text.lines().count(),
            msg: format!("expected {m} edge lines, found {}", edges.len()),
        });
    }
    let terminals = match (term_s, term_t) {
        (Some(s), Some(t)) if s != t => Some((s, t)),
        (None, None) => None,
        _ => {
            return Err(Error::Syntax {
                line: text.lines().count(),
                msg: "terminals must name two distinct vertices (or neither)".into(),
            })
        }
    };
    finish_instance(n as u32, edges, terminals)
}

/// Parses a knapsack items file: one `profit weight` pair per line, `#`
/// comments and blank lines ignored.
pub fn parse_items(text: &str) -> Result<Vec<KnapsackItem>> {
    let mut items = Vec::new();
    for (lno, line) in significant_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Syntax {
                line: lno,
                msg: format!("item line must be `profit weight`, got `{line}`"),
            });
        }
        if items.len() as u64 == MAX_EDGES {
            return Err(Error::TooLarge("too many knapsack items".into()));
        }
        items.push(KnapsackItem {
            profit: parse_int(toks[0], lno, "profit", MAX_ATTRIBUTE)?,
            weight: parse_int(toks[1], lno, "weight", MAX_ATTRIBUTE)?,
        });
    }
    Ok(items)
}

/// Reads an instance file (native format), naming it after the file stem.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    Ok(parse_instance(&text)?.with_name(name))
}

/// Parses a rational from `a/b`, a decimal like `0.25`, or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("cannot parse `{s}` as a rational"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let whole_v: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_v: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64.pow(frac.len() as u32);
        let sign = if whole.trim_start().starts_with('-') { -1 } else { 1 };
        return Ok(Ratio::from_integer(whole_v) + Ratio::new(sign * frac_v, scale));
    }
    let v: i64 = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(v))
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Deterministic random connected instance: a random spanning tree plus
/// distinct random extra edges, weights and costs uniform in `1..=10`.
pub fn generate_random(n: u32, m: u64, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("vertex count must be positive".into()));
    }
    let possible = n as u64 * (n as u64 - 1) / 2;
    if m + 1 < n as u64 || m > possible {
        return Err(Error::InvalidArgument(format!(
            "edge count {m} outside [{}..{}] for {n} vertices",
            n as u64 - 1,
            possible
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (1..=n).collect();
    perm.shuffle(&mut rng);

    let mut present: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut edges: Vec<(u32, u32, u64, u64)> = Vec::new();
    let push = |edges: &mut Vec<(u32, u32, u64, u64)>, rng: &mut ChaCha8Rng, u: u32, v: u32| {
        let w = rng.gen_range(1..=10);
        let c = rng.gen_range(1..=10);
        edges.push((u, v, w, c));
    };

    for i in 1..n as usize {
        let j = rng.gen_range(0..i);
        let (u, v) = (perm[i], perm[j]);
        present.insert((u.min(v), u.max(v)));
        push(&mut edges, &mut rng, u, v);
    }

    let mut attempts = 0u64;
    while (edges.len() as u64) < m {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        attempts += 1;
        if u != v && present.insert((u.min(v), u.max(v))) {
            push(&mut edges, &mut rng, u, v);
        } else if attempts > 64 * (m + 16) {
            // Dense request: sample the remaining non-edges directly.
            let mut missing: Vec<(u32, u32)> = Vec::new();
            for a in 1..=n {
                for b in (a + 1)..=n {
                    if !present.contains(&(a, b)) {
                        missing.push((a, b));
                    }
                }
            }
            missing.shuffle(&mut rng);
            while (edges.len() as u64) < m {
                let (a, b) = missing.pop().expect("enough non-edges remain");
                present.insert((a, b));
                push(&mut edges, &mut rng, a, b);
            }
            break;
        }
    }

    let graph = WeightedGraph::from_edges(n, edges)?;
    debug_assert!(graph.is_connected());
    Ok(Instance {
        name: format!("rnd_{n}_{m}"),
        graph,
        terminals: None,
    })
}

/// Resolves a relative budget: `m_w` is the weight of the weight-minimal
/// cut, `m_c` the cost of the cost-minimal cut, `T = m_w + ⌊p·m_c⌋`.
pub fn compute_budget(g: &WeightedGraph, p: Rational) -> Result<BudgetSpec> {
    if p < Ratio::from_integer(0) {
        return Err(Error::InvalidArgument("budget fraction must be >= 0".into()));
    }
    let m_w = mincut::minimum_cut(g, CutAttribute::Weight)?.weight;
    let m_c = mincut::minimum_cut(g, CutAttribute::Cost)?.cost;
    let extra = (p * Ratio::from_integer(m_c as i64)).floor().to_integer();
    let t = m_w + extra as u64;
    Ok(BudgetSpec {
        t,
        m_w: Some(m_w),
        m_c: Some(m_c),
        p: Some(p),
    })
}

/// Builds the cut instance a binary knapsack reduces to: item gadgets
/// strung between terminals `s` and `t` with `M = max item weight`, plus
/// the budget `ρ = n·M − Σ weights + T_k`. The s-t constrained minimum cut
/// of the result weighs exactly `Σ profits − knapsack_optimum`.
pub fn knapsack_to_cut(items: &[KnapsackItem], t_k: u64) -> Result<(Instance, u64)> {
    if items.is_empty() {
        return Err(Error::InvalidArgument("no knapsack items".into()));
    }
    if items.len() as u64 > MAX_VERTICES - 2 {
        return Err(Error::TooLarge("too many knapsack items".into()));
    }
    let n = items.len() as u32;
    let m_big = items.iter().map(|i| i.weight).max().unwrap();
    let s = n + 1;
    let t = n + 2;
    let mut edges = Vec::with_capacity(2 * items.len());
    for (idx, item) in items.iter().enumerate() {
        let v = idx as u32 + 1;
        edges.push((s, v, 0, m_big));
        edges.push((v, t, item.profit, m_big - item.weight));
    }
    let total_weight: u64 = items.iter().map(|i| i.weight).sum();
    let rho = n as u64 * m_big - total_weight + t_k;
    let graph = WeightedGraph::from_edges(n + 2, edges)?;
    Ok((
        Instance {
            name: "reduction".into(),
            graph,
            terminals: Some((VertexId(s), VertexId(t))),
        },
        rho,
    ))
}

// ---------------------------------------------------------------------------
// Solution records
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven optimal (or proven infeasible — see `status` field semantics).
    Optimal,
    /// A feasible result without an optimality certificate (heuristics).
    Feasible,
    Infeasible,
    /// A node or time limit stopped the search.
    Limit,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Feasible => write!(f, "feasible"),
            SolveStatus::Infeasible => write!(f, "infeasible"),
            SolveStatus::Limit => write!(f, "limit"),
        }
    }
}

/// One solve, flattened for output. Field names are stable.
#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub status: SolveStatus,
    pub sense: Sense,
    pub budget: u64,
    pub value: Option<u64>,
    pub cost: Option<u64>,
    /// Cut edges as endpoint pairs, ascending.
    pub cut: Vec<(u32, u32)>,
    /// Side letter per vertex, ascending vertex id; empty when no cut.
    pub partition: String,
    pub nodes: u64,
    pub calls: u64,
    pub millis: u128,
    pub proven: bool,
}

impl SolutionRecord {
    pub fn new(status: SolveStatus, sense: Sense, budget: u64) -> SolutionRecord {
        SolutionRecord {
            status,
            sense,
            budget,
            value: None,
            cost: None,
            cut: Vec::new(),
            partition: String::new(),
            nodes: 0,
            calls: 0,
            millis: 0,
            proven: false,
        }
    }

    pub fn set_cut(&mut self, g: &WeightedGraph, cut: &Cut) {
        self.value = Some(cut.weight);
        self.cost = Some(cut.cost);
        self.cut = cut
            .edges
            .iter()
            .map(|e| {
                let rec = &g.edge_records()[e.0];
                (rec.u.0, rec.v.0)
            })
            .collect();
        self.partition = cut
            .partition
            .values()
            .map(|s| match s {
                crate::graph::Side::A => 'A',
                crate::graph::Side::B => 'B',
            })
            .collect();
    }
}

/// Line-oriented `key=value` record with a fixed key order.
pub fn serialize_solution(record: &SolutionRecord) -> String {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let cut = record
        .cut
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "status={}\nsense={}\nbudget={}\nvalue={}\ncost={}\ncut={}\npartition={}\nnodes={}\ncalls={}\nmillis={}\nproven={}\n",
        record.status,
        record.sense,
        record.budget,
        opt(record.value),
        opt(record.cost),
        cut,
        record.partition,
        record.nodes,
        record.calls,
        record.millis,
        record.proven,
    )
}

// ---------------------------------------------------------------------------
// Benchmark CSV
// ---------------------------------------------------------------------------

pub const BENCH_CSV_HEADER: &str = "instance,n,m,p,T,sense,method,value,cost,proven,millis";

/// One row of the benchmark table.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// The budget fraction exactly as requested (e.g. `0.5`).
    pub p: String,
    pub t: u64,
    pub sense: Sense,
    pub method: String,
    pub value: Option<u64>,
    pub cost: Option<u64>,
    pub proven: bool,
    pub millis: u128,
}

impl BenchRow {
    /// Resume key: one row per (instance, p, sense, method).
    pub fn key(&self) -> String {
        format!("{}|{}|{}|{}", self.instance, self.p, self.sense, self.method)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.m,
            self.p,
            self.t,
            self.sense,
            self.method,
            opt(self.value),
            opt(self.cost),
            self.proven,
            self.millis
        )
    }
}

/// Keys of rows already present in a benchmark CSV, for resuming.
pub fn existing_bench_keys(csv_text: &str) -> BTreeSet<String> {
    let mut keys = BTreeSet::new();
    for line in csv_text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() >= 7 {
            keys.insert(format!("{}|{}|{}|{}", cols[0], cols[3], cols[5], cols[6]));
        }
    }
    keys
}
