//! Stoer-Wagner global minimum cut and its budget-aware adaptation.
//!
//! `minimum_cut` is the classic algorithm: grow a set by maximum adjacency,
//! record the cut-of-the-phase (the star of the last vertex added), merge the
//! last two vertices, repeat. The budget-aware variant `budgeted_cut` keys
//! the maximum-adjacency order on *cost* and checks the running cut cost
//! after every step, returning the first cut whose cost fits the budget.
//!
//! Keying the budgeted sweep on cost makes the procedure a complete decision
//! oracle: some phase's cut-of-the-phase is a globally cost-minimal cut, and
//! every cut-of-the-phase is inspected by the stopping test, so `budgeted_cut`
//! returns a cut exactly when one within budget exists. (Keying on weight
//! loses that guarantee: a 4-cycle with anti-correlated weights and costs
//! hides its only cheap cut from every weight-ordered sweep; see the tests.)
//!
//! All merging during a run happens in a scratch structure; the input graph
//! is never mutated.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{Cut, EdgeRecord, VertexId, WeightedGraph};

/// Which edge attribute a cut is measured by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutAttribute {
    Weight,
    Cost,
}

impl CutAttribute {
    pub fn of(self, e: &EdgeRecord) -> u64 {
        match self {
            CutAttribute::Weight => e.weight,
            CutAttribute::Cost => e.cost,
        }
    }

    /// The attribute total of an already-evaluated cut.
    pub fn of_cut(self, c: &Cut) -> u64 {
        match self {
            CutAttribute::Weight => c.weight,
            CutAttribute::Cost => c.cost,
        }
    }
}

/// Numeric type a sweep can be keyed on: exact, ordered, additive.
pub(crate) trait Measure:
    Copy + Ord + Add<Output = Self> + AddAssign + Sub<Output = Self>
{
    fn zero() -> Self;
}

impl Measure for u64 {
    fn zero() -> Self {
        0
    }
}

impl Measure for Ratio<i64> {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
}

/// Result of a completed (no early exit) `budgeted_cut_phase`.
#[derive(Clone, Debug)]
pub struct PhaseResult {
    /// The last two super-vertices added; merging them prepares the next phase.
    pub last_two: (VertexId, VertexId),
    /// The star of the last vertex in the current contracted graph, in
    /// original edge ids.
    pub cut_of_phase: Cut,
}

/// Outcome of one budget-aware maximum-adjacency phase.
#[derive(Clone, Debug)]
pub enum PhaseOutcome {
    /// A cut within budget appeared before the phase finished.
    Feasible(Cut),
    /// The phase ran to completion; no inspected cut met the budget.
    Completed(PhaseResult),
}

// ---------------------------------------------------------------------------
// Scratch machine: locals with member sets and a merged measure matrix.
// ---------------------------------------------------------------------------

struct SwMachine<M> {
    /// Original vertices merged into each local.
    members: Vec<Vec<u32>>,
    /// Lowest original vertex id per local; drives every tie-break.
    min_vertex: Vec<u32>,
    mat: Vec<Vec<M>>,
    active: Vec<bool>,
    active_count: usize,
}

enum PhaseRun<M> {
    Early { side: Vec<u32> },
    Done { s: usize, t: usize, cut_value: M },
}

impl<M: Measure> SwMachine<M> {
    /// Builds a machine over the given live super-vertices of `g` (usually
    /// one connected component).
    fn new(g: &WeightedGraph, reps: &[VertexId], measure: impl Fn(&EdgeRecord) -> M) -> Self {
        let mut index: BTreeMap<u32, usize> = BTreeMap::new();
        let mut members = Vec::with_capacity(reps.len());
        let mut min_vertex = Vec::with_capacity(reps.len());
        for (i, r) in reps.iter().enumerate() {
            index.insert(r.0, i);
            let m = g.members_of(*r).expect("rep must be live").to_vec();
            min_vertex.push(m.iter().copied().min().unwrap());
            members.push(m);
        }
        let k = reps.len();
        let mut mat = vec![vec![M::zero(); k]; k];
        for e in g.live_edges() {
            let rec = &g.edge_records()[e.0];
            let ru = g.rep_of(rec.u).0;
            let rv = g.rep_of(rec.v).0;
            let (Some(&a), Some(&b)) = (index.get(&ru), index.get(&rv)) else {
                continue; // edge leaves the component
            };
            let m = measure(rec);
            mat[a][b] += m;
            mat[b][a] += m;
        }
        SwMachine {
            members,
            min_vertex,
            mat,
            active: vec![true; k],
            active_count: k,
        }
    }

    fn lowest_active(&self) -> usize {
        (0..self.mat.len())
            .filter(|&i| self.active[i])
            .min_by_key(|&i| self.min_vertex[i])
            .expect("machine has an active local")
    }

    fn local_of(&self, v: u32) -> Option<usize> {
        (0..self.mat.len()).find(|&i| self.active[i] && self.members[i].contains(&v))
    }

    /// One maximum-adjacency phase from `start`. With `stop = Some(t)`, the
    /// running cut value is tested before every addition and the phase exits
    /// early as soon as `cut(A) <= t` while `A != V`.
    fn phase(&self, start: usize, stop: Option<M>) -> PhaseRun<M> {
        let k = self.active_count;
        debug_assert!(k >= 2);
        let n = self.mat.len();

        let mut in_a = vec![false; n];
        let mut conn = vec![M::zero(); n]; // connectivity to A
        let mut deg = vec![M::zero(); n]; // total connectivity among actives
        for i in 0..n {
            if !self.active[i] {
                continue;
            }
            for j in 0..n {
                if self.active[j] && j != i {
                    deg[i] += self.mat[i][j];
                }
            }
        }

        in_a[start] = true;
        let mut cut_val = deg[start];
        for j in 0..n {
            if self.active[j] && j != start {
                conn[j] += self.mat[start][j];
            }
        }
        let mut order = vec![start];
        let mut prev = start;
        let mut last = start;
        // Connectivity of the most recent addition at its insertion; for the
        // final vertex this is the cut-of-the-phase.
        let mut last_conn = M::zero();

        loop {
            if order.len() == k {
                break;
            }
            if let Some(threshold) = stop {
                if cut_val <= threshold {
                    let mut side: Vec<u32> = order
                        .iter()
                        .flat_map(|&i| self.members[i].iter().copied())
                        .collect();
                    side.sort_unstable();
                    return PhaseRun::Early { side };
                }
            }
            // Most tightly connected vertex; ties to the lowest vertex id.
            let mut best: Option<usize> = None;
            for i in 0..n {
                if !self.active[i] || in_a[i] {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) => {
                        let better = conn[i] > conn[b]
                            || (conn[i] == conn[b] && self.min_vertex[i] < self.min_vertex[b]);
                        Some(if better { i } else { b })
                    }
                };
            }
            let v = best.expect("phase has an unvisited vertex");
            last_conn = conn[v];
            // cut(A + v) = cut(A) + deg(v) - 2 conn(v)
            cut_val = (cut_val + deg[v]) - (conn[v] + conn[v]);
            in_a[v] = true;
            prev = last;
            last = v;
            order.push(v);
            for j in 0..n {
                if self.active[j] && !in_a[j] {
                    conn[j] += self.mat[v][j];
                }
            }
        }

        PhaseRun::Done {
            s: prev,
            t: last,
            cut_value: last_conn,
        }
    }

    /// Merges local `t` into local `s`.
    fn merge(&mut self, s: usize, t: usize) {
        debug_assert!(self.active[s] && self.active[t] && s != t);
        let n = self.mat.len();
        for i in 0..n {
            if i != s && i != t && self.active[i] {
                let add = self.mat[t][i];
                self.mat[s][i] += add;
                self.mat[i][s] = self.mat[s][i];
            }
        }
        self.mat[s][t] = M::zero();
        self.mat[t][s] = M::zero();
        let moved = std::mem::take(&mut self.members[t]);
        self.members[s].extend(moved);
        self.min_vertex[s] = self.min_vertex[s].min(self.min_vertex[t]);
        self.active[t] = false;
        self.active_count -= 1;
    }

    fn side_of(&self, local: usize) -> std::collections::BTreeSet<u32> {
        self.members[local].iter().copied().collect()
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Globally minimum cut of a connected working graph with respect to the
/// chosen attribute. Ties break toward the first phase attaining the
/// minimum.
pub fn minimum_cut(g: &WeightedGraph, attribute: CutAttribute) -> Result<Cut> {
    minimum_cut_with_visitor(g, attribute, |_| {})
}

/// Like [`minimum_cut`], reporting each phase's cut-of-the-phase to the
/// visitor before merging. The Lagrangian heuristic harvests these.
pub fn minimum_cut_with_visitor(
    g: &WeightedGraph,
    attribute: CutAttribute,
    visitor: impl FnMut(&Cut),
) -> Result<Cut> {
    minimum_cut_by(g, |e| attribute.of(e), visitor)
}

/// Generic-measure global minimum cut; the measure must be additive and
/// exactly ordered. Used with rational derived attributes by the Lagrangian
/// relaxation.
pub(crate) fn minimum_cut_by<M: Measure>(
    g: &WeightedGraph,
    measure: impl Fn(&EdgeRecord) -> M,
    mut visitor: impl FnMut(&Cut),
) -> Result<Cut> {
    let live = g.live_vertices();
    if live.len() < 2 {
        return Err(Error::InvalidArgument(
            "minimum cut requires at least 2 vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }

    let mut machine = SwMachine::new(g, &live, measure);
    let mut best: Option<(M, Cut)> = None;
    while machine.active_count > 1 {
        let start = machine.lowest_active();
        match machine.phase(start, None) {
            PhaseRun::Done { s, t, cut_value } => {
                let cut = g.cut_from_side(&machine.side_of(t));
                visitor(&cut);
                let improves = match &best {
                    None => true,
                    Some((v, _)) => cut_value < *v,
                };
                if improves {
                    best = Some((cut_value, cut));
                }
                machine.merge(s, t);
            }
            PhaseRun::Early { .. } => unreachable!("no stop threshold given"),
        }
    }
    Ok(best.expect("connected graph with >= 2 vertices has a cut").1)
}

/// Minimum cut value (by weight) over every multi-vertex component of the
/// working graph. `None` when no component can still be cut. This is the
/// residual lower bound used by the branch-and-bound in the min sense.
pub(crate) fn min_cut_value_components(g: &WeightedGraph) -> Option<u64> {
    let mut best: Option<u64> = None;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let mut machine = SwMachine::new(g, &comp, |e| e.weight);
        while machine.active_count > 1 {
            let start = machine.lowest_active();
            match machine.phase(start, None) {
                PhaseRun::Done { s, t, cut_value } => {
                    if best.map_or(true, |b| cut_value < b) {
                        best = Some(cut_value);
                    }
                    machine.merge(s, t);
                }
                PhaseRun::Early { .. } => unreachable!(),
            }
        }
    }
    best
}

/// One budget-aware phase from start vertex `a`: grows the set by maximum
/// cost-adjacency, checking the running cut cost before every addition.
pub fn budgeted_cut_phase(g: &WeightedGraph, a: VertexId, rho: u64) -> Result<PhaseOutcome> {
    if !g.contains_vertex(a) {
        return Err(Error::InvalidArgument(format!(
            "vertex {a} is not in the graph"
        )));
    }
    let rep = g.rep_of(a);
    let comp = g
        .components()
        .into_iter()
        .find(|c| c.contains(&rep))
        .expect("live vertex belongs to a component");
    if comp.len() < 2 {
        return Err(Error::InvalidArgument(
            "phase requires a component with at least 2 vertices".into(),
        ));
    }
    let machine = SwMachine::new(g, &comp, |e| e.cost);
    let start = machine
        .local_of(rep.0)
        .expect("start vertex is in its component");
    match machine.phase(start, Some(rho)) {
        PhaseRun::Early { side } => {
            let cut = g.cut_from_side(&side.into_iter().collect());
            debug_assert!(cut.cost <= rho);
            Ok(PhaseOutcome::Feasible(cut))
        }
        PhaseRun::Done { s, t, .. } => {
            let cut_of_phase = g.cut_from_side(&machine.side_of(t));
            Ok(PhaseOutcome::Completed(PhaseResult {
                last_two: (
                    VertexId(machine.min_vertex[s]),
                    VertexId(machine.min_vertex[t]),
                ),
                cut_of_phase,
            }))
        }
    }
}

/// Adapted Stoer-Wagner: repeatedly runs budget-aware phases, merging the
/// last two vertices after each completed phase, until some inspected cut
/// fits the budget or a single vertex remains per component. Returns the
/// feasible cut in original-edge terms, or `None` when no cut of the graph
/// has cost within `rho`.
///
/// Disconnected working graphs are handled per component (components are
/// tried in order of their lowest vertex id), so the branch-and-bound can
/// call this on residual graphs directly.
pub fn budgeted_cut(g: &WeightedGraph, rho: u64) -> Option<Cut> {
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let mut machine = SwMachine::new(g, &comp, |e| e.cost);
        while machine.active_count > 1 {
            let start = machine.lowest_active();
            match machine.phase(start, Some(rho)) {
                PhaseRun::Early { side } => {
                    let cut = g.cut_from_side(&side.into_iter().collect());
                    debug_assert!(cut.cost <= rho);
                    debug_assert!(!cut.edges.is_empty());
                    return Some(cut);
                }
                PhaseRun::Done { s, t, .. } => machine.merge(s, t),
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Side, WeightedGraph};
    use std::collections::BTreeMap;

    fn f4() -> WeightedGraph {
        WeightedGraph::from_edges(
            4,
            vec![
                (1, 2, 1, 1),
                (1, 3, 2, 1),
                (2, 3, 3, 2),
                (3, 4, 4, 1),
                (2, 4, 1, 3),
            ],
        )
        .unwrap()
    }

    /// 8-vertex fixture reproducing the budget walk-through: starting at
    /// vertex 8 with budget 3, the running cut cost evolves 6, 5, 3 and the
    /// sweep stops with A = {8, 4, 7}. Weights are irrelevant to the sweep
    /// and set to 1.
    fn budget_walkthrough() -> WeightedGraph {
        WeightedGraph::from_edges(
            8,
            vec![
                (8, 4, 1, 3),
                (8, 7, 1, 2),
                (8, 5, 1, 1),
                (4, 7, 1, 1),
                (4, 1, 1, 1),
                (7, 2, 1, 1),
                (1, 2, 1, 2),
                (2, 3, 1, 3),
                (3, 5, 1, 2),
                (5, 6, 1, 4),
                (6, 1, 1, 2),
            ],
        )
        .unwrap()
    }

    fn side_b_ids(cut: &Cut) -> Vec<u32> {
        cut.side_b().iter().map(|v| v.0).collect()
    }

    #[test]
    fn f4_minimum_cut_by_weight() {
        let cut = minimum_cut(&f4(), CutAttribute::Weight).unwrap();
        assert_eq!(cut.weight, 3);
        assert_eq!(cut.cost, 2);
        assert_eq!(side_b_ids(&cut), vec![2, 3, 4]);
    }

    #[test]
    fn f4_minimum_cut_by_cost() {
        let cut = minimum_cut(&f4(), CutAttribute::Cost).unwrap();
        assert_eq!(cut.cost, 2);
        assert_eq!(cut.weight, 3);
    }

    #[test]
    fn path_minimum_cut_is_min_edge() {
        let g = WeightedGraph::from_edges(3, vec![(1, 2, 5, 1), (2, 3, 7, 1)]).unwrap();
        let cut = minimum_cut(&g, CutAttribute::Weight).unwrap();
        assert_eq!(cut.weight, 5);
    }

    #[test]
    fn minimum_cut_preconditions() {
        let one = WeightedGraph::from_edges(1, Vec::new()).unwrap();
        assert!(minimum_cut(&one, CutAttribute::Weight).is_err());
        let disconnected = WeightedGraph::from_edges(3, vec![(1, 2, 1, 1)]).unwrap();
        assert!(matches!(
            minimum_cut(&disconnected, CutAttribute::Weight),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn visitor_sees_one_cut_per_phase() {
        let g = f4();
        let mut seen = Vec::new();
        minimum_cut_with_visitor(&g, CutAttribute::Weight, |c| seen.push(c.clone())).unwrap();
        assert_eq!(seen.len(), g.vertex_count() - 1);
        for cut in &seen {
            assert!(g.validate_cut(&cut.edges, None).is_some());
        }
    }

    #[test]
    fn walkthrough_phase_stops_at_cost_three() {
        let g = budget_walkthrough();
        // Independent check of the cost evolution via partition evaluation.
        let eval = |side: &[u32]| {
            let labels: BTreeMap<_, _> = g
                .vertices()
                .map(|v| {
                    let s = if side.contains(&v.0) { Side::B } else { Side::A };
                    (v, s)
                })
                .collect();
            g.evaluate_partition(&labels).unwrap().cost
        };
        assert_eq!(eval(&[8]), 6);
        assert_eq!(eval(&[8, 4]), 5);
        assert_eq!(eval(&[8, 4, 7]), 3);

        match budgeted_cut_phase(&g, VertexId(8), 3).unwrap() {
            PhaseOutcome::Feasible(cut) => {
                assert_eq!(cut.cost, 3);
                let mut a_side: Vec<u32> = cut
                    .partition
                    .iter()
                    .filter(|(v, _)| [4, 7, 8].contains(&v.0))
                    .map(|(v, _)| v.0)
                    .collect();
                a_side.sort_unstable();
                assert_eq!(a_side, vec![4, 7, 8]);
                // All three sit on the same side, apart from the rest.
                let s = cut.partition[&VertexId(8)];
                assert_eq!(cut.partition[&VertexId(4)], s);
                assert_eq!(cut.partition[&VertexId(7)], s);
                assert_ne!(cut.partition[&VertexId(1)], s);
            }
            PhaseOutcome::Completed(_) => panic!("expected an early exit at cost 3"),
        }
    }

    #[test]
    fn phase_stops_immediately_when_star_fits() {
        let g = f4();
        // Star of vertex 1 costs 2.
        match budgeted_cut_phase(&g, VertexId(1), 10).unwrap() {
            PhaseOutcome::Feasible(cut) => {
                assert_eq!(cut.cost, 2);
                assert_eq!(cut.edges.len(), 2);
            }
            PhaseOutcome::Completed(_) => panic!("star of the start vertex fits the budget"),
        }
    }

    #[test]
    fn phase_with_zero_budget_runs_to_completion() {
        let g = f4();
        match budgeted_cut_phase(&g, VertexId(1), 0).unwrap() {
            PhaseOutcome::Completed(res) => {
                assert_eq!(res.last_two, (VertexId(3), VertexId(4)));
                // Star of vertex 4: edges (3,4) and (2,4).
                assert_eq!(res.cut_of_phase.weight, 5);
                assert_eq!(res.cut_of_phase.cost, 4);
            }
            PhaseOutcome::Feasible(_) => panic!("no cut of the fixture costs 0"),
        }
    }

    #[test]
    fn phase_rejects_unknown_start() {
        let g = f4();
        assert!(budgeted_cut_phase(&g, VertexId(9), 3).is_err());
    }

    #[test]
    fn f4_budgeted_cut_finds_the_cheap_pair() {
        let cut = budgeted_cut(&f4(), 5).unwrap();
        assert_eq!((cut.weight, cut.cost), (3, 2));
        assert_eq!(side_b_ids(&cut), vec![2, 3, 4]);
    }

    #[test]
    fn f4_budgeted_cut_infeasible_budget() {
        assert!(budgeted_cut(&f4(), 1).is_none());
    }

    #[test]
    fn two_vertex_budgeted_cut() {
        let g = WeightedGraph::from_edges(2, vec![(1, 2, 7, 4)]).unwrap();
        let cut = budgeted_cut(&g, 4).unwrap();
        assert_eq!((cut.weight, cut.cost), (7, 4));
        assert!(budgeted_cut(&g, 3).is_none());
    }

    #[test]
    fn huge_budget_returns_star_of_lowest_vertex() {
        let g = f4();
        let cut = budgeted_cut(&g, u64::MAX).unwrap();
        // First phase, first step: cut({1}).
        assert_eq!(cut.edges.len(), 2);
        assert_eq!(cut.cost, 2);
    }

    #[test]
    fn cost_keyed_sweep_finds_hidden_cheap_cut() {
        // 4-cycle with anti-correlated weights and costs: the only cut of
        // cost 2 is {1,2}|{3,4}, which never appears as a prefix of any
        // weight-ordered sweep.
        let g = WeightedGraph::from_edges(
            4,
            vec![(1, 2, 1, 10), (3, 4, 1, 10), (1, 3, 10, 1), (2, 4, 10, 1)],
        )
        .unwrap();
        let cut = budgeted_cut(&g, 2).unwrap();
        assert_eq!(cut.cost, 2);
        assert_eq!(side_b_ids(&cut), vec![3, 4]);
        assert!(budgeted_cut(&g, 1).is_none());
    }

    #[test]
    fn budgeted_cut_handles_disconnected_working_graphs() {
        // Two components; only the second has a cut within budget.
        let g = WeightedGraph::from_edges(
            5,
            vec![(1, 2, 1, 9), (3, 4, 1, 2), (4, 5, 1, 3), (3, 5, 1, 4)],
        )
        .unwrap();
        let cut = budgeted_cut(&g, 5).unwrap();
        assert!(cut.cost <= 5);
        assert!(!cut.edges.is_empty());
        // Both endpoints of every cut edge are in the second component.
        for e in &cut.edges {
            let rec = &g.edge_records()[e.0];
            assert!(rec.u.0 >= 3 && rec.v.0 >= 3);
        }
    }

    #[test]
    fn budgeted_cut_agrees_with_cost_minimum() {
        // budgeted_cut returns a cut iff the cost-minimal cut fits.
        let g = f4();
        let min_cost = minimum_cut(&g, CutAttribute::Cost).unwrap().cost;
        for rho in 0..8 {
            let got = budgeted_cut(&g, rho);
            assert_eq!(got.is_some(), min_cost <= rho, "rho = {rho}");
            if let Some(c) = got {
                assert!(c.cost <= rho);
            }
        }
    }

    #[test]
    fn residual_component_bound_matches_per_component_minima() {
        let mut g = f4();
        // Cut (1,2) and (1,3): vertex 1 isolates, the rest keeps a cut.
        g.remove_edge(EdgeId(0)).unwrap();
        g.remove_edge(EdgeId(1)).unwrap();
        let bound = min_cut_value_components(&g).unwrap();
        // Remaining component {2,3,4}: min weight cut is {2}: (2,3)+(2,4) = 4.
        assert_eq!(bound, 4);
    }
}
