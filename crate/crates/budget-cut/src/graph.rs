//! Undirected multigraph with per-edge weight and cost, supporting edge
//! contraction with exact undo.
//!
//! The graph keeps an immutable table of *original* edges plus a mutable
//! working state: per-edge alive flags (an edge leaves the working graph when
//! it is cut) and a vertex-merge map (contraction). Parallel edges are merged
//! eagerly, both at construction and implicitly under contraction: the
//! [`WeightedGraph::stored_edges`] view exposes at most one edge per live
//! vertex pair, with weights and costs summed and origins unioned.
//!
//! All solver backtracking is built on the pair [`WeightedGraph::contract`] /
//! [`WeightedGraph::restore`]: a contraction returns an undo token and
//! restoring it yields a graph structurally identical to the one before.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// 1-based vertex identifier, matching the instance numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of an original edge in its graph's edge table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Side label of a two-way partition. The side containing the lowest vertex
/// id is canonically labelled `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// An original edge. Endpoints are stored with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
    pub cost: u64,
}

impl EdgeRecord {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A merged edge of the working graph: the union of all live original edges
/// joining two super-vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
    pub cost: u64,
    /// Original edge ids folded into this stored edge, ascending.
    pub origins: Vec<EdgeId>,
}

/// A two-sided cut: the set of original edges crossing the partition, with
/// exact weight and cost totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// Original edge ids, ascending.
    pub edges: Vec<EdgeId>,
    pub weight: u64,
    pub cost: u64,
    /// Side label per original vertex; the side of the lowest vertex is `A`.
    pub partition: BTreeMap<VertexId, Side>,
}

impl Cut {
    /// Vertices on side `B`, ascending.
    pub fn side_b(&self) -> Vec<VertexId> {
        self.partition
            .iter()
            .filter(|(_, s)| **s == Side::B)
            .map(|(v, _)| *v)
            .collect()
    }
}

/// Token returned by [`WeightedGraph::contract`]; feed it back to
/// [`WeightedGraph::restore`] in LIFO order.
#[derive(Debug)]
pub struct ContractUndo {
    kept: u32,
    absorbed: u32,
    moved: usize,
}

/// Undirected weighted/costed multigraph. See the module documentation.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    /// Sorted original vertex ids.
    vertex_ids: Vec<u32>,
    /// Canonical original edges, sorted by endpoint pair.
    edges: Vec<EdgeRecord>,
    /// Per-edge liveness; false once the edge has been cut out.
    alive: Vec<bool>,
    /// Representative super-vertex per original vertex id (index = id).
    rep: Vec<u32>,
    /// Live super-vertex -> merged original vertices, in merge order.
    members: BTreeMap<u32, Vec<u32>>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids
            && self.edges == other.edges
            && self.alive == other.alive
            && self.rep == other.rep
            && self.members == other.members
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    /// Builds a graph over vertices `1..=n`. Parallel edges are merged
    /// (weights and costs summed); self-loops are rejected.
    pub fn from_edges<I>(n: u32, edges: I) -> Result<WeightedGraph>
    where
        I: IntoIterator<Item = (u32, u32, u64, u64)>,
    {
        if n == 0 {
            return Err(Error::InvalidArgument("vertex count must be positive".into()));
        }
        Self::from_vertex_set((1..=n).collect(), edges)
    }

    /// Builds a graph over an explicit vertex set (used for block
    /// subgraphs, where ids need not be contiguous).
    pub fn from_vertex_set<I>(mut vertex_ids: Vec<u32>, edges: I) -> Result<WeightedGraph>
    where
        I: IntoIterator<Item = (u32, u32, u64, u64)>,
    {
        vertex_ids.sort_unstable();
        vertex_ids.dedup();
        if vertex_ids.is_empty() {
            return Err(Error::InvalidArgument("empty vertex set".into()));
        }
        if vertex_ids[0] == 0 {
            return Err(Error::InvalidArgument("vertex ids are 1-based".into()));
        }
        let max_id = *vertex_ids.last().unwrap();
        let mut present = vec![false; max_id as usize + 1];
        for &v in &vertex_ids {
            present[v as usize] = true;
        }

        // Merge parallel edges keyed on the unordered endpoint pair.
        let mut merged: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
        for (a, b, w, c) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > max_id || b > max_id || !present[a as usize] || !present[b as usize]
            {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a},{b}) references a vertex outside the graph"
                )));
            }
            let key = (a.min(b), a.max(b));
            let entry = merged.entry(key).or_insert((0, 0));
            entry.0 += w;
            entry.1 += c;
        }

        let edges: Vec<EdgeRecord> = merged
            .into_iter()
            .map(|((u, v), (weight, cost))| EdgeRecord {
                u: VertexId(u),
                v: VertexId(v),
                weight,
                cost,
            })
            .collect();

        let mut rep = vec![0u32; max_id as usize + 1];
        let mut members = BTreeMap::new();
        for &v in &vertex_ids {
            rep[v as usize] = v;
            members.insert(v, vec![v]);
        }
        let alive = vec![true; edges.len()];

        Ok(WeightedGraph {
            vertex_ids,
            edges,
            alive,
            rep,
            members,
        })
    }

    /// Number of original vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    /// Sorted original vertex ids.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_ids.iter().map(|&v| VertexId(v))
    }

    /// The immutable original edge table.
    pub fn edge_records(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(e.0)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Looks up the original edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = (u.min(v), u.max(v));
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(a, b)))
            .ok()
            .map(EdgeId)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn total_cost(&self) -> u64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    // ----- working-state queries -------------------------------------------

    /// Whether `v` is an original vertex of this graph.
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        (v.0 as usize) < self.rep.len() && self.rep[v.0 as usize] != 0
    }

    /// Representative super-vertex currently holding `v`.
    pub fn rep_of(&self, v: VertexId) -> VertexId {
        VertexId(self.rep[v.0 as usize])
    }

    /// Original vertices merged into the live super-vertex `r`.
    pub fn members_of(&self, r: VertexId) -> Option<&[u32]> {
        self.members.get(&r.0).map(|m| m.as_slice())
    }

    /// Live super-vertices, ascending.
    pub fn live_vertices(&self) -> Vec<VertexId> {
        self.members.keys().map(|&v| VertexId(v)).collect()
    }

    pub fn live_vertex_count(&self) -> usize {
        self.members.len()
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive.get(e.0).copied().unwrap_or(false)
    }

    /// An edge is live when it has not been cut and its endpoints are still
    /// in distinct super-vertices.
    pub fn is_live_edge(&self, e: EdgeId) -> bool {
        match self.edges.get(e.0) {
            Some(rec) => self.alive[e.0] && self.rep_of(rec.u) != self.rep_of(rec.v),
            None => false,
        }
    }

    /// Live original edges (alive and not contracted into a loop).
    pub fn live_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId).filter(|&e| self.is_live_edge(e))
    }

    /// Merged view of the working graph: one stored edge per live
    /// super-vertex pair, endpoints ascending, origins ascending.
    pub fn stored_edges(&self) -> Vec<StoredEdge> {
        let mut map: BTreeMap<(u32, u32), (u64, u64, Vec<EdgeId>)> = BTreeMap::new();
        for (i, rec) in self.edges.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            let ru = self.rep[rec.u.0 as usize];
            let rv = self.rep[rec.v.0 as usize];
            if ru == rv {
                continue;
            }
            let key = (ru.min(rv), ru.max(rv));
            let entry = map.entry(key).or_insert((0, 0, Vec::new()));
            entry.0 += rec.weight;
            entry.1 += rec.cost;
            entry.2.push(EdgeId(i));
        }
        map.into_iter()
            .map(|((u, v), (weight, cost, origins))| StoredEdge {
                u: VertexId(u),
                v: VertexId(v),
                weight,
                cost,
                origins,
            })
            .collect()
    }

    /// Sum of weights (resp. costs) over the stored view.
    pub fn stored_totals(&self) -> (u64, u64) {
        self.stored_edges()
            .iter()
            .fold((0, 0), |(w, c), e| (w + e.weight, c + e.cost))
    }

    // ----- mutation with exact undo ----------------------------------------

    /// Removes a live edge from the working graph (a cut). Undo with
    /// [`WeightedGraph::restore_edge`].
    pub fn remove_edge(&mut self, e: EdgeId) -> Result<()> {
        if !self.is_live_edge(e) {
            return Err(Error::InvalidArgument(format!(
                "edge {:?} is not live in the working graph",
                e
            )));
        }
        self.alive[e.0] = false;
        Ok(())
    }

    pub fn restore_edge(&mut self, e: EdgeId) {
        debug_assert!(!self.alive[e.0]);
        self.alive[e.0] = true;
    }

    /// Contracts a live edge: merges its two super-vertices into the one with
    /// the lower id. The edge itself (and any parallel original edge) becomes
    /// a loop and disappears from the stored view.
    pub fn contract(&mut self, e: EdgeId) -> Result<ContractUndo> {
        let rec = self
            .edges
            .get(e.0)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown edge reference {:?}", e)))?;
        if !self.alive[e.0] {
            return Err(Error::InvalidArgument(format!(
                "edge {:?} has been removed from the working graph",
                e
            )));
        }
        let ru = self.rep[rec.u.0 as usize];
        let rv = self.rep[rec.v.0 as usize];
        self.contract_reps(ru, rv)
    }

    /// Contracts the super-vertices of an edge's endpoints regardless of the
    /// edge's alive flag. Backtracking uses this to convert a previously cut
    /// edge into a shrunken one.
    pub fn contract_endpoints(&mut self, e: EdgeId) -> Result<ContractUndo> {
        let rec = self
            .edges
            .get(e.0)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown edge reference {:?}", e)))?;
        let ru = self.rep[rec.u.0 as usize];
        let rv = self.rep[rec.v.0 as usize];
        self.contract_reps(ru, rv)
    }

    fn contract_reps(&mut self, ru: u32, rv: u32) -> Result<ContractUndo> {
        if ru == rv {
            return Err(Error::InvalidArgument(
                "cannot contract a loop: endpoints already merged".into(),
            ));
        }
        let kept = ru.min(rv);
        let absorbed = ru.max(rv);
        let moved = self
            .members
            .remove(&absorbed)
            .expect("absorbed super-vertex must be live");
        for &x in &moved {
            self.rep[x as usize] = kept;
        }
        let moved_len = moved.len();
        self.members
            .get_mut(&kept)
            .expect("kept super-vertex must be live")
            .extend(moved);
        Ok(ContractUndo {
            kept,
            absorbed,
            moved: moved_len,
        })
    }

    /// Exact inverse of [`WeightedGraph::contract`]. Undo tokens must be
    /// applied in reverse order of the contractions that produced them.
    pub fn restore(&mut self, undo: ContractUndo) {
        let kept_members = self
            .members
            .get_mut(&undo.kept)
            .expect("kept super-vertex must be live");
        let split_at = kept_members.len() - undo.moved;
        let moved = kept_members.split_off(split_at);
        for &x in &moved {
            self.rep[x as usize] = undo.absorbed;
        }
        self.members.insert(undo.absorbed, moved);
    }

    /// Convenience value-semantics contraction: returns a contracted copy,
    /// leaving `self` untouched.
    pub fn contracted(&self, e: EdgeId) -> Result<WeightedGraph> {
        let mut g = self.clone();
        g.contract(e)?;
        Ok(g)
    }

    // ----- cuts and partitions ---------------------------------------------

    /// Builds the cut induced by putting `side` on one side and everything
    /// else on the other, over the *live* edges of the working graph.
    /// `side` is a set of original vertex ids.
    pub(crate) fn cut_from_side(&self, side: &BTreeSet<u32>) -> Cut {
        let mut edges = Vec::new();
        let mut weight = 0;
        let mut cost = 0;
        for (i, rec) in self.edges.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            if side.contains(&rec.u.0) != side.contains(&rec.v.0) {
                edges.push(EdgeId(i));
                weight += rec.weight;
                cost += rec.cost;
            }
        }
        let lowest = self.vertex_ids[0];
        let in_side_label = if side.contains(&lowest) { Side::A } else { Side::B };
        let partition = self
            .vertex_ids
            .iter()
            .map(|&v| {
                let s = if side.contains(&v) {
                    in_side_label
                } else {
                    in_side_label.flip()
                };
                (VertexId(v), s)
            })
            .collect();
        Cut {
            edges,
            weight,
            cost,
            partition,
        }
    }

    /// Evaluates a full vertex labelling into a [`Cut`] over the original
    /// edge table. Both labels must be used.
    pub fn evaluate_partition(&self, side_of_vertex: &BTreeMap<VertexId, Side>) -> Result<Cut> {
        let mut seen_a = false;
        let mut seen_b = false;
        for &v in &self.vertex_ids {
            match side_of_vertex.get(&VertexId(v)) {
                Some(Side::A) => seen_a = true,
                Some(Side::B) => seen_b = true,
                None => {
                    return Err(Error::DegeneratePartition(format!(
                        "vertex {v} has no side label"
                    )))
                }
            }
        }
        if !(seen_a && seen_b) {
            return Err(Error::DegeneratePartition(
                "both sides of the partition must be non-empty".into(),
            ));
        }
        // Canonical orientation: lowest vertex on side A.
        let lowest = VertexId(self.vertex_ids[0]);
        let flip = side_of_vertex[&lowest] == Side::B;
        let partition: BTreeMap<VertexId, Side> = self
            .vertex_ids
            .iter()
            .map(|&v| {
                let s = side_of_vertex[&VertexId(v)];
                (VertexId(v), if flip { s.flip() } else { s })
            })
            .collect();
        let mut edges = Vec::new();
        let mut weight = 0;
        let mut cost = 0;
        for (i, rec) in self.edges.iter().enumerate() {
            if partition[&rec.u] != partition[&rec.v] {
                edges.push(EdgeId(i));
                weight += rec.weight;
                cost += rec.cost;
            }
        }
        Ok(Cut {
            edges,
            weight,
            cost,
            partition,
        })
    }

    /// Checks whether an edge set is a realizable two-way cut of the original
    /// graph: labels vertices by traversal, treating uncut edges as same-side
    /// constraints and cut edges as opposite-side constraints.
    ///
    /// Returns the induced partition when the labelling is consistent, both
    /// sides are non-empty, and (if given) the terminals end up on opposite
    /// sides. Returns `None` otherwise; inconsistency is a normal negative
    /// result, not an error.
    pub fn validate_cut(
        &self,
        cut_edges: &[EdgeId],
        terminals: Option<(VertexId, VertexId)>,
    ) -> Option<BTreeMap<VertexId, Side>> {
        let in_cut: BTreeSet<usize> = cut_edges.iter().map(|e| e.0).collect();
        if in_cut.iter().any(|&i| i >= self.edges.len()) {
            return None;
        }

        // Adjacency over all original edges, annotated with the constraint.
        let max_id = *self.vertex_ids.last().unwrap() as usize;
        let mut adj: Vec<Vec<(u32, bool)>> = vec![Vec::new(); max_id + 1];
        for (i, rec) in self.edges.iter().enumerate() {
            let cross = in_cut.contains(&i);
            adj[rec.u.0 as usize].push((rec.v.0, cross));
            adj[rec.v.0 as usize].push((rec.u.0, cross));
        }

        let mut label: Vec<Option<Side>> = vec![None; max_id + 1];
        for &start in &self.vertex_ids {
            if label[start as usize].is_some() {
                continue;
            }
            label[start as usize] = Some(Side::A);
            let mut queue = VecDeque::new();
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let side = label[v as usize].unwrap();
                for &(w, cross) in &adj[v as usize] {
                    let expect = if cross { side.flip() } else { side };
                    match label[w as usize] {
                        None => {
                            label[w as usize] = Some(expect);
                            queue.push_back(w);
                        }
                        Some(s) if s != expect => return None,
                        Some(_) => {}
                    }
                }
            }
        }

        let partition: BTreeMap<VertexId, Side> = self
            .vertex_ids
            .iter()
            .map(|&v| (VertexId(v), label[v as usize].unwrap()))
            .collect();
        let mut seen_b = false;
        for s in partition.values() {
            if *s == Side::B {
                seen_b = true;
            }
        }
        if !seen_b {
            return None;
        }
        if let Some((s, t)) = terminals {
            match (partition.get(&s), partition.get(&t)) {
                (Some(a), Some(b)) if a != b => {}
                _ => return None,
            }
        }
        // The traversal started every component on side A, so the partition
        // boundary is exactly `cut_edges` whenever labelling succeeded.
        Some(partition)
    }

    // ----- connectivity and blocks -----------------------------------------

    /// Original-vertex components of the working graph (live edges only).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let live: Vec<VertexId> = self.live_vertices();
        let mut index: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, v) in live.iter().enumerate() {
            index.insert(v.0, i);
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); live.len()];
        for e in self.live_edges() {
            let rec = &self.edges[e.0];
            let a = index[&self.rep[rec.u.0 as usize]];
            let b = index[&self.rep[rec.v.0 as usize]];
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; live.len()];
        let mut out = Vec::new();
        for s in 0..live.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![live[s]];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(live[w]);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Biconnected components of the working graph. Every stored edge lands
    /// in exactly one block; a bridge forms a single-edge block. Each block
    /// is returned as a standalone graph over the original vertex ids.
    pub fn blocks(&self) -> Result<Vec<WeightedGraph>> {
        if self.live_vertex_count() == 0 {
            return Err(Error::InvalidArgument("empty graph".into()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let stored = self.stored_edges();
        if stored.is_empty() {
            return Ok(Vec::new());
        }

        let live = self.live_vertices();
        let mut index: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, v) in live.iter().enumerate() {
            index.insert(v.0, i);
        }
        let n = live.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, stored idx)
        for (ei, e) in stored.iter().enumerate() {
            let a = index[&e.u.0];
            let b = index[&e.v.0];
            adj[a].push((b, ei));
            adj[b].push((a, ei));
        }

        // Iterative Hopcroft-Tarjan with an explicit edge stack.
        let mut depth = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut block_edge_sets: Vec<Vec<usize>> = Vec::new();

        struct Frame {
            v: usize,
            parent_edge: Option<usize>,
            next: usize,
        }

        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            low[root] = 0;
            let mut stack = vec![Frame {
                v: root,
                parent_edge: None,
                next: 0,
            }];
            while let Some(frame) = stack.last_mut() {
                let v = frame.v;
                if frame.next < adj[v].len() {
                    let (w, ei) = adj[v][frame.next];
                    frame.next += 1;
                    if Some(ei) == frame.parent_edge {
                        continue;
                    }
                    if depth[w] == usize::MAX {
                        edge_stack.push(ei);
                        depth[w] = depth[v] + 1;
                        low[w] = depth[w];
                        stack.push(Frame {
                            v: w,
                            parent_edge: Some(ei),
                            next: 0,
                        });
                    } else if depth[w] < depth[v] {
                        // back edge
                        edge_stack.push(ei);
                        low[v] = low[v].min(depth[w]);
                    }
                } else {
                    let parent_edge = frame.parent_edge;
                    stack.pop();
                    if let Some(pframe) = stack.last() {
                        let p = pframe.v;
                        low[p] = low[p].min(low[v]);
                        if low[v] >= depth[p] {
                            // p is a cut vertex (or the root): pop one block.
                            let pe = parent_edge.expect("non-root frame has a parent edge");
                            let mut block = Vec::new();
                            while let Some(&top) = edge_stack.last() {
                                edge_stack.pop();
                                block.push(top);
                                if top == pe {
                                    break;
                                }
                            }
                            block_edge_sets.push(block);
                        }
                    }
                }
            }
        }

        let mut out = Vec::new();
        for set in block_edge_sets {
            let mut verts: Vec<u32> = Vec::new();
            let mut edges: Vec<(u32, u32, u64, u64)> = Vec::new();
            for ei in set {
                let e = &stored[ei];
                verts.push(e.u.0);
                verts.push(e.v.0);
                edges.push((e.u.0, e.v.0, e.weight, e.cost));
            }
            out.push(WeightedGraph::from_vertex_set(verts, edges)?);
        }
        // Deterministic order: by lowest vertex, then by edge count.
        out.sort_by_key(|b| (b.vertex_ids[0], b.edges.len()));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 4-vertex, 5-edge worked-example fixture used throughout the test
    /// suite: edges (1,2) w=1 c=1; (1,3) w=2 c=1; (2,3) w=3 c=2;
    /// (3,4) w=4 c=1; (2,4) w=1 c=3.
    pub(crate) fn f4() -> WeightedGraph {
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

    fn labels(pairs: &[(u32, Side)]) -> BTreeMap<VertexId, Side> {
        pairs.iter().map(|&(v, s)| (VertexId(v), s)).collect()
    }

    #[test]
    fn contract_merges_parallel_edges() {
        let mut g = f4();
        let e12 = g.edge_between(VertexId(1), VertexId(2)).unwrap();
        let undo = g.contract(e12).unwrap();

        assert_eq!(g.live_vertex_count(), 3);
        assert_eq!(g.rep_of(VertexId(2)), VertexId(1));
        let stored = g.stored_edges();
        // Edges (1,3) and (2,3) merge into one stored edge to vertex 3.
        let to3 = stored
            .iter()
            .find(|e| (e.u, e.v) == (VertexId(1), VertexId(3)))
            .unwrap();
        assert_eq!(to3.weight, 5);
        assert_eq!(to3.cost, 3);
        assert_eq!(to3.origins.len(), 2);

        g.restore(undo);
        assert_eq!(g, f4());
    }

    #[test]
    fn contract_two_vertex_graph() {
        let mut g = WeightedGraph::from_edges(2, vec![(1, 2, 5, 3)]).unwrap();
        let undo = g.contract(EdgeId(0)).unwrap();
        assert_eq!(g.live_vertex_count(), 1);
        assert!(g.stored_edges().is_empty());
        g.restore(undo);
        assert_eq!(g.live_vertex_count(), 2);
    }

    #[test]
    fn contract_triangle_merges_by_symmetry() {
        let mut g =
            WeightedGraph::from_edges(3, vec![(1, 2, 1, 1), (1, 3, 1, 1), (2, 3, 1, 1)]).unwrap();
        g.contract(EdgeId(0)).unwrap();
        let stored = g.stored_edges();
        assert_eq!(stored.len(), 1);
        assert_eq!(stored[0].weight, 2);
        assert_eq!(stored[0].cost, 2);
    }

    #[test]
    fn contract_unknown_edge_is_an_error() {
        let mut g = f4();
        assert!(g.contract(EdgeId(99)).is_err());
        g.remove_edge(EdgeId(0)).unwrap();
        assert!(g.contract(EdgeId(0)).is_err());
    }

    #[test]
    fn contraction_conserves_totals() {
        let mut g = f4();
        let (w0, c0) = g.stored_totals();
        let e = g.edge_between(VertexId(2), VertexId(3)).unwrap();
        let rec = g.edge(e).unwrap().clone();
        g.contract(e).unwrap();
        let (w1, c1) = g.stored_totals();
        // Only the contracted edge loops here (no parallel originals).
        assert_eq!(w1, w0 - rec.weight);
        assert_eq!(c1, c0 - rec.cost);
    }

    #[test]
    fn nested_contract_restore_round_trip() {
        let mut g = f4();
        let snapshot = g.clone();
        let u1 = g.contract(EdgeId(0)).unwrap();
        let next_live = g.live_edges().next().unwrap();
        let u2 = g.contract(next_live).unwrap();
        g.restore(u2);
        g.restore(u1);
        assert_eq!(g, snapshot);
    }

    #[test]
    fn evaluate_partition_f4_examples() {
        let g = f4();
        // {1} | {2,3,4}
        let cut = g
            .evaluate_partition(&labels(&[(1, Side::A), (2, Side::B), (3, Side::B), (4, Side::B)]))
            .unwrap();
        assert_eq!((cut.weight, cut.cost), (3, 2));
        // {3} | {1,2,4}
        let cut = g
            .evaluate_partition(&labels(&[(1, Side::A), (2, Side::A), (3, Side::B), (4, Side::A)]))
            .unwrap();
        assert_eq!((cut.weight, cut.cost), (9, 4));
    }

    #[test]
    fn evaluate_partition_rejects_one_sided_labelling() {
        let g = f4();
        let all_a = labels(&[(1, Side::A), (2, Side::A), (3, Side::A), (4, Side::A)]);
        assert!(matches!(
            g.evaluate_partition(&all_a),
            Err(Error::DegeneratePartition(_))
        ));
        let missing = labels(&[(1, Side::A), (2, Side::B)]);
        assert!(g.evaluate_partition(&missing).is_err());
    }

    #[test]
    fn evaluate_partition_isolates_a_star() {
        let g = f4();
        let cut = g
            .evaluate_partition(&labels(&[(1, Side::A), (2, Side::A), (3, Side::A), (4, Side::B)]))
            .unwrap();
        // Star of vertex 4: edges (3,4) and (2,4).
        assert_eq!(cut.weight, 5);
        assert_eq!(cut.cost, 4);
        assert_eq!(cut.edges.len(), 2);
    }

    #[test]
    fn validate_cut_accepts_the_feasible_pair() {
        let g = f4();
        let e12 = g.edge_between(VertexId(1), VertexId(2)).unwrap();
        let e13 = g.edge_between(VertexId(1), VertexId(3)).unwrap();
        let p = g.validate_cut(&[e12, e13], None).unwrap();
        assert_eq!(p[&VertexId(1)], Side::A);
        assert_eq!(p[&VertexId(2)], Side::B);
        assert_eq!(p[&VertexId(3)], Side::B);
        assert_eq!(p[&VertexId(4)], Side::B);
    }

    #[test]
    fn validate_cut_rejects_inconsistent_sets() {
        let g = f4();
        let ids: Vec<EdgeId> = [(1, 2), (1, 3), (2, 3), (3, 4)]
            .iter()
            .map(|&(u, v)| g.edge_between(VertexId(u), VertexId(v)).unwrap())
            .collect();
        assert!(g.validate_cut(&ids, None).is_none());
        // Empty set: no separation.
        assert!(g.validate_cut(&[], None).is_none());
    }

    #[test]
    fn validate_cut_honours_terminals() {
        let g = f4();
        let e12 = g.edge_between(VertexId(1), VertexId(2)).unwrap();
        let e13 = g.edge_between(VertexId(1), VertexId(3)).unwrap();
        let cut = [e12, e13];
        assert!(g.validate_cut(&cut, Some((VertexId(1), VertexId(4)))).is_some());
        assert!(g.validate_cut(&cut, Some((VertexId(2), VertexId(4)))).is_none());
    }

    #[test]
    fn validate_round_trips_evaluate() {
        let g = f4();
        let cut = g
            .evaluate_partition(&labels(&[(1, Side::A), (2, Side::B), (3, Side::A), (4, Side::B)]))
            .unwrap();
        let p = g.validate_cut(&cut.edges, None).unwrap();
        let back = g.evaluate_partition(&p).unwrap();
        assert_eq!(back, cut);
    }

    #[test]
    fn blocks_of_two_glued_triangles() {
        let g = WeightedGraph::from_edges(
            5,
            vec![
                (1, 2, 1, 1),
                (2, 3, 1, 1),
                (1, 3, 1, 1),
                (3, 4, 1, 1),
                (4, 5, 1, 1),
                (3, 5, 1, 1),
            ],
        )
        .unwrap();
        let blocks = g.blocks().unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.edge_count() == 3));
        let total: usize = blocks.iter().map(|b| b.edge_count()).sum();
        assert_eq!(total, g.edge_count());
    }

    #[test]
    fn blocks_of_a_path_are_bridges() {
        let g =
            WeightedGraph::from_edges(4, vec![(1, 2, 1, 1), (2, 3, 1, 1), (3, 4, 1, 1)]).unwrap();
        let blocks = g.blocks().unwrap();
        assert_eq!(blocks.len(), 3);
        assert!(blocks.iter().all(|b| b.edge_count() == 1));
    }

    #[test]
    fn f4_is_a_single_block() {
        let blocks = f4().blocks().unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].edge_count(), 5);
    }

    #[test]
    fn blocks_reject_disconnected_graphs() {
        let g = WeightedGraph::from_edges(3, vec![(1, 2, 1, 1)]).unwrap();
        assert!(matches!(g.blocks(), Err(Error::Disconnected)));
    }

    #[test]
    fn parallel_edges_merge_at_construction() {
        let g = WeightedGraph::from_edges(2, vec![(1, 2, 2, 3), (2, 1, 4, 5)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        let rec = g.edge(EdgeId(0)).unwrap();
        assert_eq!((rec.weight, rec.cost), (6, 8));
    }

    #[test]
    fn self_loops_are_rejected() {
        assert!(WeightedGraph::from_edges(2, vec![(1, 1, 1, 1)]).is_err());
    }
}
