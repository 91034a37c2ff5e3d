//! Exact branch-and-bound enumeration of budget-feasible cuts.
//!
//! The search alternates a forward phase — ask the budget-aware Stoer-Wagner
//! routine for a cut of the residual graph within the remaining budget, then
//! apply it edge by edge — and a backward phase that reverses the deepest
//! cut edge by *shrinking* it (contracting its endpoints), which bans that
//! edge from every cut explored below. Each tree-path entry therefore records
//! one original edge in state `cut` or `shrunken`, and backtracking restores
//! the working graph exactly through the contraction undo tokens.
//!
//! A combined edge set discovered by the search is only a candidate solution
//! if a consistent two-sided labelling exists ([`WeightedGraph::validate_cut`]);
//! cuts found on residual graphs can be incompatible with edges cut earlier.
//!
//! In the max sense the search keeps extending past states whose combined
//! set is not (yet) a valid cut: a valid optimum may only arise as a superset
//! of an invalid intermediate (cutting all four edges of a square is a valid
//! cut although every three-edge subset is inconsistent), so stopping at
//! invalid states would lose exactness. In the min sense extensions are
//! never needed: supersets cannot weigh less, and every minimal valid cut is
//! reached by the ban-and-branch tree itself.
//!
//! Pruning uses the residual unconstrained min-cut (min sense) or the
//! fractional knapsack bound (max sense); both can be switched off, which
//! changes the node count but never the returned value.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::bounds::{self, Rational};
use crate::error::{Error, Result};
use crate::graph::{ContractUndo, Cut, EdgeId, VertexId, WeightedGraph};
use crate::mincut::{self, CutAttribute};

/// Optimization sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

impl std::fmt::Display for Sense {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sense::Min => write!(f, "min"),
            Sense::Max => write!(f, "max"),
        }
    }
}

/// State of one edge on the tree path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeDecision {
    /// The edge is cut: removed from the working graph, its cost spent.
    Cut,
    /// The edge is banned: its endpoints are contracted together.
    Shrunken,
}

/// One entry of the tree path.
#[derive(Debug)]
pub struct EdgeState {
    pub edge: EdgeId,
    pub state: EdgeDecision,
    /// Contraction undo token while the entry is shrunken.
    undo: Option<ContractUndo>,
}

/// Depth-first search state: the working graph plus the path of edge
/// decisions that produced it. The budget ledger `remaining + current_cost
/// == budget` holds at every node.
#[derive(Debug)]
pub struct SearchState {
    graph: WeightedGraph,
    path: Vec<EdgeState>,
    budget: u64,
    remaining: u64,
    current_weight: u64,
    current_cost: u64,
}

impl SearchState {
    pub fn new(g: &WeightedGraph, budget: u64) -> SearchState {
        SearchState {
            graph: g.clone(),
            path: Vec::new(),
            budget,
            remaining: budget,
            current_weight: 0,
            current_cost: 0,
        }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn path(&self) -> &[EdgeState] {
        &self.path
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn remaining_budget(&self) -> u64 {
        self.remaining
    }

    pub fn current_weight(&self) -> u64 {
        self.current_weight
    }

    pub fn current_cost(&self) -> u64 {
        self.current_cost
    }

    /// Original edges currently in state `cut`, ascending.
    pub fn cut_edge_ids(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self
            .path
            .iter()
            .filter(|es| es.state == EdgeDecision::Cut)
            .map(|es| es.edge)
            .collect();
        ids.sort_unstable();
        ids
    }

    fn assert_ledger(&self) {
        debug_assert_eq!(
            self.remaining + self.current_cost,
            self.budget,
            "budget ledger violated"
        );
    }

    /// Applies a cut: removes each edge from the working graph, pushes it on
    /// the path in state `cut`, and spends its cost.
    ///
    /// The cut must be live in the working graph and fit the remaining
    /// budget; both hold for anything returned by `budgeted_cut`.
    pub fn forward(&mut self, x: &Cut) {
        for &e in &x.edges {
            let rec = self.graph.edge(e).expect("cut references a known edge").clone();
            self.graph
                .remove_edge(e)
                .expect("cut edges must be live in the working graph");
            assert!(
                rec.cost <= self.remaining,
                "internal invariant: cut exceeds the remaining budget"
            );
            self.remaining -= rec.cost;
            self.current_weight += rec.weight;
            self.current_cost += rec.cost;
            self.path.push(EdgeState {
                edge: e,
                state: EdgeDecision::Cut,
                undo: None,
            });
        }
        self.assert_ledger();
    }

    /// Backtracks one step: pops trailing shrunken entries (undoing their
    /// contractions), then converts the deepest cut entry to shrunken —
    /// restoring the edge, refunding its cost, and contracting its
    /// endpoints. Returns `false` once the tree is empty.
    pub fn backward(&mut self) -> bool {
        while matches!(
            self.path.last(),
            Some(EdgeState {
                state: EdgeDecision::Shrunken,
                ..
            })
        ) {
            let es = self.path.pop().unwrap();
            self.graph
                .restore(es.undo.expect("shrunken entry holds its undo token"));
        }
        let Some(top) = self.path.last_mut() else {
            return false;
        };
        let e = top.edge;
        self.graph.restore_edge(e);
        let rec = self.graph.edge(e).unwrap().clone();
        self.remaining += rec.cost;
        self.current_weight -= rec.weight;
        self.current_cost -= rec.cost;
        let undo = self
            .graph
            .contract(e)
            .expect("restored edge is live and contractible");
        top.state = EdgeDecision::Shrunken;
        top.undo = Some(undo);
        self.assert_ledger();
        true
    }
}

/// Solver limits and switches.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Stop after exploring this many tree nodes.
    pub node_limit: Option<u64>,
    /// Stop after this much wall-clock time.
    pub time_limit: Option<Duration>,
    /// Prune with bounds. Turning this off never changes the returned
    /// value, only the number of nodes explored.
    pub use_bounds: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_limit: None,
            time_limit: None,
            use_bounds: true,
        }
    }
}

/// Outcome of an exact solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Best cut found; `None` means no budget-feasible cut exists (when
    /// `proven`) or none was found before a limit hit.
    pub optimal: Option<Cut>,
    pub nodes_explored: u64,
    pub budgeted_cut_calls: u64,
    pub elapsed: Duration,
    /// True when the search exhausted the tree rather than hitting a limit.
    pub proven: bool,
}

fn improves(sense: Sense, weight: u64, incumbent: &Option<Cut>) -> bool {
    match incumbent {
        None => true,
        Some(c) => match sense {
            Sense::Min => weight < c.weight,
            Sense::Max => weight > c.weight,
        },
    }
}

/// Exact budget-constrained cut in either sense, optionally restricted to
/// cuts separating two terminals.
pub fn constrained_cut(
    g: &WeightedGraph,
    rho: u64,
    sense: Sense,
    terminals: Option<(VertexId, VertexId)>,
    options: &SolveOptions,
) -> Result<SolveReport> {
    let start_time = Instant::now();
    if g.live_vertex_count() < 2 {
        return Err(Error::InvalidArgument(
            "constrained cut requires at least 2 vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some((s, t)) = terminals {
        if s == t || !g.contains_vertex(s) || !g.contains_vertex(t) {
            return Err(Error::InvalidArgument(format!(
                "terminals ({s},{t}) must be two distinct graph vertices"
            )));
        }
    }

    let mut incumbent: Option<Cut> = None;
    // The unconstrained minimum-weight cut seeds the min search when it
    // already fits the budget (and separates the terminals, if any).
    if sense == Sense::Min {
        let seed = mincut::minimum_cut(g, CutAttribute::Weight)?;
        let separates = terminals
            .map(|(s, t)| seed.partition[&s] != seed.partition[&t])
            .unwrap_or(true);
        if seed.cost <= rho && separates {
            incumbent = Some(seed);
        }
    }

    let mut state = SearchState::new(g, rho);
    let mut nodes: u64 = 0;
    let mut calls: u64 = 0;
    let limit_hit = |nodes: u64, start: Instant| -> bool {
        if let Some(nl) = options.node_limit {
            if nodes > nl {
                return true;
            }
        }
        if let Some(tl) = options.time_limit {
            if start.elapsed() > tl {
                return true;
            }
        }
        false
    };

    loop {
        if limit_hit(nodes, start_time) {
            return Ok(SolveReport {
                optimal: incumbent,
                nodes_explored: nodes,
                budgeted_cut_calls: calls,
                elapsed: start_time.elapsed(),
                proven: false,
            });
        }

        let expand = if options.use_bounds {
            bound_beats_incumbent(&state, sense, &incumbent)
        } else {
            true
        };

        let mut x = if expand {
            calls += 1;
            mincut::budgeted_cut(&state.graph, state.remaining)
        } else {
            None
        };

        while let Some(cut) = x {
            // Evaluate the combined cut at discovery time.
            let mut combined = state.cut_edge_ids();
            combined.extend_from_slice(&cut.edges);
            combined.sort_unstable();
            let weight = state.current_weight + cut.weight;
            let cost = state.current_cost + cut.cost;
            debug_assert!(cost <= rho);
            if let Some(partition) = state.graph.validate_cut(&combined, terminals) {
                if improves(sense, weight, &incumbent) {
                    incumbent = Some(Cut {
                        edges: combined,
                        weight,
                        cost,
                        partition,
                    });
                }
            }

            nodes += cut.edges.len() as u64;
            state.forward(&cut);

            x = match sense {
                Sense::Min => None,
                Sense::Max => {
                    if limit_hit(nodes, start_time) {
                        None
                    } else {
                        calls += 1;
                        mincut::budgeted_cut(&state.graph, state.remaining)
                    }
                }
            };
        }

        if !state.backward() {
            break;
        }
        nodes += 1; // a cut entry turned shrunken: a fresh tree node
    }

    Ok(SolveReport {
        optimal: incumbent,
        nodes_explored: nodes,
        budgeted_cut_calls: calls,
        elapsed: start_time.elapsed(),
        proven: true,
    })
}

fn bound_beats_incumbent(state: &SearchState, sense: Sense, incumbent: &Option<Cut>) -> bool {
    match sense {
        Sense::Min => match mincut::min_cut_value_components(&state.graph) {
            // No component can still be cut: the branch is exhausted.
            None => false,
            Some(residual_min) => match incumbent {
                None => true,
                Some(c) => state.current_weight + residual_min < c.weight,
            },
        },
        Sense::Max => {
            let edges = bounds::ranked_edges(&state.graph);
            if edges.is_empty() {
                return false;
            }
            match incumbent {
                None => true,
                Some(c) => {
                    let bound = Rational::from_integer(state.current_weight as i64)
                        + bounds::fractional_max_bound(&edges, state.remaining);
                    bound > Ratio::from_integer(c.weight as i64)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Structural fast paths
// ---------------------------------------------------------------------------

/// Budget-constrained cut of a tree.
///
/// Min sense: the single cheapest-weight edge whose cost fits — any
/// multi-edge tree cut weighs at least as much as its cheapest member, which
/// is feasible on its own. Max sense: every nonempty subset of tree edges is
/// a consistent cut, so the optimum is a 0/1 knapsack over the edges (a
/// single edge is only optimal when the budget affords nothing more).
pub fn solve_tree(g: &WeightedGraph, rho: u64, sense: Sense) -> Result<Option<Cut>> {
    let n = g.live_vertex_count();
    if n < 2 || g.edge_count() != n - 1 || !g.is_connected() {
        return Err(Error::InvalidArgument("not a tree".into()));
    }
    let records = g.edge_records();
    match sense {
        Sense::Min => {
            let mut best: Option<EdgeId> = None;
            for (i, rec) in records.iter().enumerate() {
                if rec.cost > rho {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => rec.weight < records[b.0].weight,
                };
                if better {
                    best = Some(EdgeId(i));
                }
            }
            Ok(best.map(|e| single_block_cut(g, vec![e])))
        }
        Sense::Max => {
            let total_cost: u64 = records.iter().map(|r| r.cost).sum();
            let cap = rho.min(total_cost);
            if cap > 50_000_000 {
                return Err(Error::TooLarge(format!(
                    "tree knapsack capacity {cap} exceeds the supported range"
                )));
            }
            let cap = cap as usize;
            let m = records.len();
            let mut dp = vec![0u64; cap + 1];
            let mut take = vec![false; m * (cap + 1)];
            for (i, rec) in records.iter().enumerate() {
                let w = rec.cost as usize;
                if rec.cost > cap as u64 {
                    continue;
                }
                for j in (w..=cap).rev() {
                    let candidate = dp[j - w] + rec.weight;
                    if candidate > dp[j] {
                        dp[j] = candidate;
                        take[i * (cap + 1) + j] = true;
                    }
                }
            }
            let mut selected = Vec::new();
            let mut j = cap;
            for i in (0..m).rev() {
                if take[i * (cap + 1) + j] {
                    selected.push(EdgeId(i));
                    j -= records[i].cost as usize;
                }
            }
            if selected.is_empty() {
                // All-zero optimum: any affordable edge realizes it.
                match records.iter().position(|r| r.cost <= rho) {
                    None => return Ok(None),
                    Some(i) => selected.push(EdgeId(i)),
                }
            }
            selected.sort_unstable();
            Ok(Some(single_block_cut(g, selected)))
        }
    }
}

fn single_block_cut(g: &WeightedGraph, edges: Vec<EdgeId>) -> Cut {
    let partition = g
        .validate_cut(&edges, None)
        .expect("tree edge subsets always label consistently");
    let (weight, cost) = edges.iter().fold((0, 0), |(w, c), e| {
        let rec = &g.edge_records()[e.0];
        (w + rec.weight, c + rec.cost)
    });
    Cut {
        edges,
        weight,
        cost,
        partition,
    }
}

/// Budget-constrained cut of a connected graph through its block
/// decomposition.
///
/// Min sense: the optimum lives inside a single block (a cut restricted to
/// one of the blocks it crosses is feasible and no heavier), so each block
/// is solved independently and the best lifts to the whole graph. Max
/// sense: distinct blocks can be cut simultaneously — their patterns always
/// compose along the block tree — so the blocks' budget profiles combine
/// through a knapsack over the shared budget.
pub fn solve_by_blocks(g: &WeightedGraph, rho: u64, sense: Sense) -> Result<Option<Cut>> {
    let blocks = g.blocks()?;
    if blocks.is_empty() {
        return Ok(None);
    }
    let options = SolveOptions::default();
    match sense {
        Sense::Min => {
            let mut best: Option<Cut> = None;
            for block in &blocks {
                let report = constrained_cut(block, rho, Sense::Min, None, &options)?;
                if let Some(cut) = report.optimal {
                    if improves(Sense::Min, cut.weight, &best) {
                        best = Some(lift_block_cut(g, block, &cut));
                    }
                }
            }
            Ok(best)
        }
        Sense::Max => {
            // Budget profile per block: optimal value at every useful budget,
            // found by re-solving at each frontier step down.
            let mut profiles: Vec<Vec<(u64, u64, Vec<EdgeId>)>> = Vec::new();
            for block in &blocks {
                let mut points = Vec::new();
                let mut t = rho;
                loop {
                    let report = constrained_cut(block, t, Sense::Max, None, &options)?;
                    let Some(cut) = report.optimal else { break };
                    let lifted_edges = map_block_edges(g, block, &cut.edges);
                    let cost = cut.cost;
                    points.push((cost, cut.weight, lifted_edges));
                    if cost == 0 {
                        break;
                    }
                    t = cost - 1;
                }
                profiles.push(points);
            }

            // Sparse knapsack over blocks: (cost, weight, edges, any_cut),
            // Pareto-pruned separately for combos with and without a cut.
            let mut frontier: Vec<(u64, u64, Vec<EdgeId>, bool)> =
                vec![(0, 0, Vec::new(), false)];
            for points in &profiles {
                let mut next = frontier.clone(); // leaving this block uncut
                for &(pc, pw, ref pe) in points {
                    for &(c, w, ref e, _) in &frontier {
                        if c + pc <= rho {
                            let mut edges = e.clone();
                            edges.extend_from_slice(pe);
                            next.push((c + pc, w + pw, edges, true));
                        }
                    }
                }
                frontier = pareto_prune(next);
            }

            let best = frontier
                .into_iter()
                .filter(|(_, _, _, any)| *any)
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
            Ok(best.map(|(cost, weight, mut edges, _)| {
                edges.sort_unstable();
                let partition = g
                    .validate_cut(&edges, None)
                    .expect("block cuts compose along the block tree");
                Cut {
                    edges,
                    weight,
                    cost,
                    partition,
                }
            }))
        }
    }
}

fn pareto_prune(
    mut combos: Vec<(u64, u64, Vec<EdgeId>, bool)>,
) -> Vec<(u64, u64, Vec<EdgeId>, bool)> {
    combos.sort_by(|a, b| {
        a.3.cmp(&b.3)
            .then(a.0.cmp(&b.0))
            .then(b.1.cmp(&a.1))
    });
    let mut out: Vec<(u64, u64, Vec<EdgeId>, bool)> = Vec::new();
    let mut best_weight: Option<u64> = None;
    let mut current_class: Option<bool> = None;
    for combo in combos {
        if current_class != Some(combo.3) {
            current_class = Some(combo.3);
            best_weight = None;
        }
        if best_weight.map_or(true, |bw| combo.1 > bw) {
            best_weight = Some(combo.1);
            out.push(combo);
        }
    }
    out
}

/// Maps a block cut's edge ids onto the parent graph via endpoint pairs
/// (unique after parallel-edge merging).
fn map_block_edges(parent: &WeightedGraph, block: &WeightedGraph, edges: &[EdgeId]) -> Vec<EdgeId> {
    edges
        .iter()
        .map(|e| {
            let rec = &block.edge_records()[e.0];
            parent
                .edge_between(rec.u, rec.v)
                .expect("block edges exist in the parent graph")
        })
        .collect()
}

fn lift_block_cut(parent: &WeightedGraph, block: &WeightedGraph, cut: &Cut) -> Cut {
    let mut edges = map_block_edges(parent, block, &cut.edges);
    edges.sort_unstable();
    let partition = parent
        .validate_cut(&edges, None)
        .expect("a block cut separates the whole graph");
    let (weight, cost) = edges.iter().fold((0, 0), |(w, c), e| {
        let rec = &parent.edge_records()[e.0];
        (w + rec.weight, c + rec.cost)
    });
    Cut {
        edges,
        weight,
        cost,
        partition,
    }
}

/// Live original edges as a set; test helper for replay checks.
pub fn live_edge_set(g: &WeightedGraph) -> BTreeSet<EdgeId> {
    g.live_edges().collect()
}
