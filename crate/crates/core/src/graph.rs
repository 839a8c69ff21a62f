//! Depth-two task graphs and their bipartite layer views.
//!
//! A depth-two instance partitions its vertices into three levels: sources
//! (`a_level`), middle vertices (`b_level`) and sinks (`c_level`). Edges run
//! only from A to B and from B to C, so every precedence chain has at most
//! three vertices. The scheduling machinery works on one layer at a time
//! through [`BipartiteView`], which exposes the source/sink adjacency of a
//! single layer without copying the underlying graph.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense index of a vertex within one instance (`0..n` in insertion order:
/// all of `a_level`, then `b_level`, then `c_level`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Level a vertex belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Level {
    A,
    B,
    C,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::A => write!(f, "A"),
            Level::B => write!(f, "B"),
            Level::C => write!(f, "C"),
        }
    }
}

/// Which layer of a depth-two graph a [`BipartiteView`] looks at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Layer {
    /// Sources = `a_level`, sinks = `b_level`.
    Ab,
    /// Sources = `b_level`, sinks = `c_level`.
    Bc,
}

/// Validation and construction errors for depth-two graphs.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("edge ({from:?}, {to:?}) references unknown vertex {unknown:?}")]
    UnknownEndpoint {
        from: String,
        to: String,
        unknown: String,
    },
    #[error("edge ({from:?}, {to:?}) connects two vertices of level {level}")]
    IntraLevelEdge {
        from: String,
        to: String,
        level: Level,
    },
    #[error("edge ({from:?}, {to:?}) skips the middle level")]
    SkipLevelEdge { from: String, to: String },
    #[error("edge ({from:?}, {to:?}) points against the level order")]
    BackwardEdge { from: String, to: String },
    #[error("sink {0:?} has no predecessor in the middle level")]
    OrphanSink(String),
    #[error("middle vertex {0:?} has neither a source predecessor nor a sink successor")]
    OrphanMiddle(String),
    #[error("longest path has {path_len} vertices, more than the 3 a depth-two graph allows")]
    DepthExceeded { path_len: usize },
    #[error("edge set contains a cycle")]
    CycleDetected,
}

/// An immutable, validated depth-two task graph.
#[derive(Clone, Debug)]
pub struct DepthTwoDag {
    names: Vec<String>,
    levels: Vec<Level>,
    a: Vec<VertexId>,
    b: Vec<VertexId>,
    c: Vec<VertexId>,
    /// Successors of `v`, sorted by id, in
    /// `succ_buf[succ_off[v]..succ_off[v + 1]]`; predecessors likewise.
    /// Flat buffers keep adjacency scans sequential on large instances.
    succ_off: Vec<u32>,
    succ_buf: Vec<VertexId>,
    pred_off: Vec<u32>,
    pred_buf: Vec<VertexId>,
    edge_count: usize,
}

/// Flattens per-vertex lists into an offsets-plus-buffer pair.
fn flatten_adjacency(lists: Vec<Vec<VertexId>>) -> (Vec<u32>, Vec<VertexId>) {
    let mut off = Vec::with_capacity(lists.len() + 1);
    off.push(0u32);
    let mut buf = Vec::with_capacity(lists.iter().map(Vec::len).sum());
    for list in &lists {
        buf.extend_from_slice(list);
        off.push(buf.len() as u32);
    }
    (off, buf)
}

impl DepthTwoDag {
    /// Validates levels and edges and builds the graph.
    ///
    /// Vertex ids are assigned in insertion order (`a_level`, then `b_level`,
    /// then `c_level`); every ordered scan in the crate relies on that order.
    /// Duplicate edges are collapsed. `a_level` and `c_level` may be empty
    /// (degenerate bipartite or single-level instances); a middle vertex must
    /// touch at least one edge unless `a_level` is empty, and every sink
    /// needs a middle predecessor.
    pub fn build(
        a_level: &[String],
        b_level: &[String],
        c_level: &[String],
        edges: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let n = a_level.len() + b_level.len() + c_level.len();
        let mut names = Vec::with_capacity(n);
        let mut levels = Vec::with_capacity(n);
        let mut by_name: HashMap<String, VertexId> = HashMap::with_capacity(n);
        let mut intern = |level: Level, src: &[String]| -> Result<Vec<VertexId>, GraphError> {
            let mut ids = Vec::with_capacity(src.len());
            for name in src {
                let id = VertexId(names.len() as u32);
                if by_name.insert(name.clone(), id).is_some() {
                    return Err(GraphError::DuplicateName(name.clone()));
                }
                names.push(name.clone());
                levels.push(level);
                ids.push(id);
            }
            Ok(ids)
        };
        let a = intern(Level::A, a_level)?;
        let b = intern(Level::B, b_level)?;
        let c = intern(Level::C, c_level)?;

        let mut succs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        let mut preds: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for (from, to) in edges {
            let &u = by_name.get(from.as_str()).ok_or_else(|| GraphError::UnknownEndpoint {
                from: from.clone(),
                to: to.clone(),
                unknown: from.clone(),
            })?;
            let &v = by_name.get(to.as_str()).ok_or_else(|| GraphError::UnknownEndpoint {
                from: from.clone(),
                to: to.clone(),
                unknown: to.clone(),
            })?;
            match (levels[u.index()], levels[v.index()]) {
                (Level::A, Level::B) | (Level::B, Level::C) => {}
                (x, y) if x == y => {
                    return Err(GraphError::IntraLevelEdge {
                        from: from.clone(),
                        to: to.clone(),
                        level: x,
                    })
                }
                (Level::A, Level::C) => {
                    return Err(GraphError::SkipLevelEdge {
                        from: from.clone(),
                        to: to.clone(),
                    })
                }
                _ => {
                    return Err(GraphError::BackwardEdge {
                        from: from.clone(),
                        to: to.clone(),
                    })
                }
            }
            succs[u.index()].push(v);
            preds[v.index()].push(u);
        }
        let mut edge_count = 0;
        for list in succs.iter_mut().chain(preds.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        for list in &succs {
            edge_count += list.len();
        }

        for &v in &c {
            if preds[v.index()].is_empty() {
                return Err(GraphError::OrphanSink(names[v.index()].clone()));
            }
        }
        // A middle vertex with no edges at all cannot justify its level when
        // sources exist; with an empty a_level it is a legal filler vertex.
        // Requiring "some predecessor or some successor" (instead of strictly
        // "some predecessor") keeps the class closed under time reversal.
        if !a.is_empty() {
            for &v in &b {
                if preds[v.index()].is_empty() && succs[v.index()].is_empty() {
                    return Err(GraphError::OrphanMiddle(names[v.index()].clone()));
                }
            }
        }

        let (succ_off, succ_buf) = flatten_adjacency(succs);
        let (pred_off, pred_buf) = flatten_adjacency(preds);
        Ok(DepthTwoDag {
            names,
            levels,
            a,
            b,
            c,
            succ_off,
            succ_buf,
            pred_off,
            pred_buf,
            edge_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn a_level(&self) -> &[VertexId] {
        &self.a
    }

    pub fn b_level(&self) -> &[VertexId] {
        &self.b
    }

    pub fn c_level(&self) -> &[VertexId] {
        &self.c
    }

    pub fn level(&self, v: VertexId) -> Level {
        self.levels[v.index()]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ_buf[self.succ_off[v.index()] as usize..self.succ_off[v.index() + 1] as usize]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred_buf[self.pred_off[v.index()] as usize..self.pred_off[v.index() + 1] as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.successors(u).binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.successors(u).iter().map(move |&v| (u, v)))
    }

    /// Stable short digest of the instance, for deduplication and reports.
    ///
    /// Hashes the canonical text form (levels and edges in insertion order),
    /// so two instances get the same digest exactly when they are the same
    /// instance including vertex order.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for (ids, tag) in [(&self.a, "a"), (&self.b, "b"), (&self.c, "c")] {
            hasher.update(tag.as_bytes());
            for &v in ids.iter() {
                hasher.update(self.name(v).as_bytes());
                hasher.update([0u8]);
            }
            hasher.update([1u8]);
        }
        for (u, v) in self.edges() {
            hasher.update(self.name(u).as_bytes());
            hasher.update([2u8]);
            hasher.update(self.name(v).as_bytes());
            hasher.update([3u8]);
        }
        let out = hasher.finalize();
        let mut s = String::with_capacity(16);
        for byte in out.iter().take(8) {
            use std::fmt::Write;
            let _ = write!(s, "{byte:02x}");
        }
        s
    }

    /// The time-reversed instance: levels swap (A becomes C), every edge
    /// flips. Isolated vertices are re-homed to the new `a_level`, keeping
    /// the result valid; the vertex and edge multisets are preserved, which
    /// makes reversal an involution up to level re-homing of isolated
    /// vertices.
    pub fn reverse(&self) -> DepthTwoDag {
        let mut a_level = Vec::new();
        let mut b_level = Vec::new();
        let mut c_level = Vec::new();
        let mut isolated = Vec::new();
        for v in self.vertices() {
            let iso = self.successors(v).is_empty() && self.predecessors(v).is_empty();
            if iso {
                isolated.push(v);
                continue;
            }
            match self.levels[v.index()] {
                Level::C => a_level.push(v),
                Level::B => b_level.push(v),
                Level::A => c_level.push(v),
            }
        }
        a_level.extend(isolated);
        let to_names = |ids: &[VertexId]| -> Vec<String> {
            ids.iter().map(|&v| self.name(v).to_owned()).collect()
        };
        let edges: Vec<(String, String)> = self
            .edges()
            .map(|(u, v)| (self.name(v).to_owned(), self.name(u).to_owned()))
            .collect();
        DepthTwoDag::build(&to_names(&a_level), &to_names(&b_level), &to_names(&c_level), &edges)
            .expect("reversal of a valid depth-two graph is valid")
    }
}

/// Assigns levels to an unlabeled vertex/edge list so the result can be fed
/// to [`DepthTwoDag::build`].
///
/// Levels come from longest-path depth: depth-0 vertices (plus isolated
/// ones) go to A, depth-1 to B, depth-2 to C. Fails with
/// [`GraphError::CycleDetected`] on cyclic input and
/// [`GraphError::DepthExceeded`] when some path has more than three
/// vertices. The output is validated through `build` before returning, so a
/// successful call always yields levels that `build` accepts.
pub fn infer_levels(
    vertices: &[String],
    edges: &[(String, String)],
) -> Result<DepthTwoDag, GraphError> {
    let mut by_name: HashMap<&str, usize> = HashMap::with_capacity(vertices.len());
    for (i, name) in vertices.iter().enumerate() {
        if by_name.insert(name.as_str(), i).is_some() {
            return Err(GraphError::DuplicateName(name.clone()));
        }
    }
    let n = vertices.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (from, to) in edges {
        let &u = by_name
            .get(from.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint {
                from: from.clone(),
                to: to.clone(),
                unknown: from.clone(),
            })?;
        let &v = by_name
            .get(to.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint {
                from: from.clone(),
                to: to.clone(),
                unknown: to.clone(),
            })?;
        succ[u].push(v);
        indeg[v] += 1;
    }

    // Longest-path depths via a topological sweep.
    let mut depth = vec![0usize; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0usize;
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        seen += 1;
        for &v in &succ[u] {
            if depth[u] + 1 > depth[v] {
                depth[v] = depth[u] + 1;
                if depth[v] > 2 {
                    return Err(GraphError::DepthExceeded { path_len: depth[v] + 1 });
                }
            }
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push(v);
            }
        }
    }
    if seen != n {
        return Err(GraphError::CycleDetected);
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for (i, name) in vertices.iter().enumerate() {
        match depth[i] {
            0 => a.push(name.clone()),
            1 => b.push(name.clone()),
            _ => c.push(name.clone()),
        }
    }
    DepthTwoDag::build(&a, &b, &c, edges)
}

/// Read-only adjacency of one layer: sources on the left, sinks on the
/// right. Indices inside the view are local (`0..sources.len()` and
/// `0..sinks.len()`), in the insertion order of the underlying levels.
#[derive(Clone, Debug)]
pub struct BipartiteView {
    source_ids: Vec<VertexId>,
    sink_ids: Vec<VertexId>,
    /// Predecessors of sink `w`, as sorted local source indices, live in
    /// `pred_buf[pred_off[w]..pred_off[w + 1]]`; likewise for successors.
    /// Flat buffers keep million-sink views off the allocator.
    pred_off: Vec<u32>,
    pred_buf: Vec<u32>,
    succ_off: Vec<u32>,
    succ_buf: Vec<u32>,
}

impl BipartiteView {
    /// The view of `layer` in `g`.
    pub fn of_layer(g: &DepthTwoDag, layer: Layer) -> BipartiteView {
        let (sources, sinks) = match layer {
            Layer::Ab => (g.a_level(), g.b_level()),
            Layer::Bc => (g.b_level(), g.c_level()),
        };
        BipartiteView::of_subset(g, sources, sinks)
    }

    /// A view over an explicit source/sink subset of `g` (used by the
    /// scheduler for second-stage working sets).
    pub fn of_subset(
        g: &DepthTwoDag,
        sources: &[VertexId],
        sinks: &[VertexId],
    ) -> BipartiteView {
        // Dense id space, so a sentinel table beats hashing per edge. One
        // pass counts degrees, the next scatters into place.
        let mut sink_local = vec![u32::MAX; g.vertex_count()];
        for (i, &v) in sinks.iter().enumerate() {
            sink_local[v.index()] = i as u32;
        }
        let mut succ_off = vec![0u32; sources.len() + 1];
        let mut pred_off = vec![0u32; sinks.len() + 1];
        for (si, &s) in sources.iter().enumerate() {
            for &t in g.successors(s) {
                let wi = sink_local[t.index()];
                if wi != u32::MAX {
                    succ_off[si + 1] += 1;
                    pred_off[wi as usize + 1] += 1;
                }
            }
        }
        for i in 1..succ_off.len() {
            succ_off[i] += succ_off[i - 1];
        }
        for i in 1..pred_off.len() {
            pred_off[i] += pred_off[i - 1];
        }
        let mut succ_buf = vec![0u32; *succ_off.last().unwrap() as usize];
        let mut pred_buf = vec![0u32; *pred_off.last().unwrap() as usize];
        let mut succ_cur = succ_off.clone();
        let mut pred_cur = pred_off.clone();
        for (si, &s) in sources.iter().enumerate() {
            for &t in g.successors(s) {
                let wi = sink_local[t.index()];
                if wi != u32::MAX {
                    succ_buf[succ_cur[si] as usize] = wi;
                    succ_cur[si] += 1;
                    pred_buf[pred_cur[wi as usize] as usize] = si as u32;
                    pred_cur[wi as usize] += 1;
                }
            }
        }
        let mut view = BipartiteView {
            source_ids: sources.to_vec(),
            sink_ids: sinks.to_vec(),
            pred_off,
            pred_buf,
            succ_off,
            succ_buf,
        };
        view.sort_adjacency();
        view
    }

    /// A standalone view from raw local adjacency, mainly for tests and
    /// exhaustive sweeps. Edge pairs are `(source_index, sink_index)`.
    pub fn from_edges(n_sources: u32, n_sinks: u32, edges: &[(u32, u32)]) -> BipartiteView {
        let source_ids = (0..n_sources).map(VertexId).collect();
        let sink_ids = (n_sources..n_sources + n_sinks).map(VertexId).collect();
        let mut sink_preds = vec![Vec::new(); n_sinks as usize];
        let mut source_succs = vec![Vec::new(); n_sources as usize];
        for &(s, w) in edges {
            source_succs[s as usize].push(w);
            sink_preds[w as usize].push(s);
        }
        for list in sink_preds.iter_mut().chain(source_succs.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let mut pred_off = vec![0u32];
        let mut pred_buf = Vec::new();
        for list in &sink_preds {
            pred_buf.extend_from_slice(list);
            pred_off.push(pred_buf.len() as u32);
        }
        let mut succ_off = vec![0u32];
        let mut succ_buf = Vec::new();
        for list in &source_succs {
            succ_buf.extend_from_slice(list);
            succ_off.push(succ_buf.len() as u32);
        }
        BipartiteView {
            source_ids,
            sink_ids,
            pred_off,
            pred_buf,
            succ_off,
            succ_buf,
        }
    }

    fn sort_adjacency(&mut self) {
        for w in 0..self.sink_ids.len() {
            let (lo, hi) = (self.pred_off[w] as usize, self.pred_off[w + 1] as usize);
            self.pred_buf[lo..hi].sort_unstable();
        }
        for s in 0..self.source_ids.len() {
            let (lo, hi) = (self.succ_off[s] as usize, self.succ_off[s + 1] as usize);
            self.succ_buf[lo..hi].sort_unstable();
        }
    }

    pub fn source_count(&self) -> usize {
        self.source_ids.len()
    }

    pub fn sink_count(&self) -> usize {
        self.sink_ids.len()
    }

    pub fn source_id(&self, local: u32) -> VertexId {
        self.source_ids[local as usize]
    }

    pub fn sink_id(&self, local: u32) -> VertexId {
        self.sink_ids[local as usize]
    }

    pub fn source_ids(&self) -> &[VertexId] {
        &self.source_ids
    }

    pub fn sink_ids(&self) -> &[VertexId] {
        &self.sink_ids
    }

    pub fn in_degree(&self, sink: u32) -> usize {
        self.sink_pred_locals(sink).len()
    }

    pub fn out_degree(&self, source: u32) -> usize {
        let s = source as usize;
        (self.succ_off[s + 1] - self.succ_off[s]) as usize
    }

    pub fn sink_pred_locals(&self, sink: u32) -> &[u32] {
        let w = sink as usize;
        &self.pred_buf[self.pred_off[w] as usize..self.pred_off[w + 1] as usize]
    }

    pub fn has_edge(&self, source: u32, sink: u32) -> bool {
        self.sink_pred_locals(sink).binary_search(&source).is_ok()
    }

    /// Sources not adjacent to `sink`, lazily, in ascending local order.
    ///
    /// The complement of a predecessor list can be quadratic in total size,
    /// so callers must consume only as much as they need; the iterator costs
    /// O(1) amortized per yielded source.
    pub fn sink_non_neighbors(&self, sink: u32) -> NonNeighbors<'_> {
        NonNeighbors {
            preds: self.sink_pred_locals(sink),
            pred_pos: 0,
            next: 0,
            count: self.source_ids.len() as u32,
        }
    }

    /// The number of sources not adjacent to `sink`.
    pub fn non_neighbor_count(&self, sink: u32) -> usize {
        self.source_ids.len() - self.in_degree(sink)
    }
}

/// Lazy complement iterator over the sources missing from one sink's
/// predecessor list.
pub struct NonNeighbors<'a> {
    preds: &'a [u32],
    pred_pos: usize,
    next: u32,
    count: u32,
}

impl Iterator for NonNeighbors<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.next < self.count {
            let candidate = self.next;
            self.next += 1;
            if self.pred_pos < self.preds.len() && self.preds[self.pred_pos] == candidate {
                self.pred_pos += 1;
                continue;
            }
            return Some(candidate);
        }
        None
    }
}
