//! Half-edge graphs and the constructions used by the series machinery.
//!
//! A graph is a list of half-edges, each with a source vertex and a
//! partner under the reversal involution. The involution may fix a
//! half-edge ("self-inverse" edge); loops and multiple edges are
//! ordinary. Infinite graphs appear only as finite truncations carrying
//! a faithful horizon: walk counts up to that length agree with the
//! infinite object.

use std::collections::{BTreeMap, VecDeque};

use num_traits::One;
use serde_json::Value;
use thiserror::Error;

use crate::series::{rat_parse, Rational};

pub type VertexId = usize;
pub type HalfEdgeId = usize;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("involution is not self-inverse at half-edge {0}")]
    BadInvolution(HalfEdgeId),
    #[error("half-edge {0} has out-of-range source vertex {1}")]
    DanglingVertex(HalfEdgeId, usize),
    #[error("duplicate half-edge id {0}")]
    DuplicateId(u64),
    #[error("unknown half-edge id {0}")]
    UnknownId(u64),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("graph must be connected")]
    Disconnected,
    #[error("vertex triple {0:?} does not span a triangle")]
    NotTriangle([VertexId; 3]),
    #[error("vertex {0} has no loop; the second direct product needs one at every vertex")]
    MissingLoop(VertexId),
    #[error("malformed graph JSON: {0}")]
    BadJson(String),
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    source: Vec<VertexId>,
    partner: Vec<HalfEdgeId>,
    /// Marks half-edges introduced by truncation (ball boundary wrap).
    wrapped: Vec<bool>,
    weights: Option<Vec<Rational>>,
    /// Walk counts of length <= horizon agree with the infinite graph
    /// this one truncates; None for a genuinely finite graph.
    horizon: Option<usize>,
}

impl Graph {
    pub fn new(vertex_count: usize, source: Vec<VertexId>, partner: Vec<HalfEdgeId>) -> Result<Graph, GraphError> {
        let n = source.len();
        let wrapped = vec![false; n];
        let g = Graph { vertex_count, source, partner, wrapped, weights: None, horizon: None };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.source.len();
        if self.partner.len() != n || self.wrapped.len() != n {
            return Err(GraphError::BadJson("half-edge arrays disagree in length".into()));
        }
        for e in 0..n {
            if self.source[e] >= self.vertex_count {
                return Err(GraphError::DanglingVertex(e, self.source[e]));
            }
            let p = self.partner[e];
            if p >= n || self.partner[p] != e {
                return Err(GraphError::BadInvolution(e));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn half_edge_count(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, e: HalfEdgeId) -> VertexId {
        self.source[e]
    }

    pub fn partner(&self, e: HalfEdgeId) -> HalfEdgeId {
        self.partner[e]
    }

    pub fn target(&self, e: HalfEdgeId) -> VertexId {
        self.source[self.partner[e]]
    }

    pub fn is_self_inverse(&self, e: HalfEdgeId) -> bool {
        self.partner[e] == e
    }

    pub fn is_wrapped(&self, e: HalfEdgeId) -> bool {
        self.wrapped[e]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.source.iter().filter(|&&s| s == x).count()
    }

    pub fn weight(&self, e: HalfEdgeId) -> Rational {
        match &self.weights {
            Some(w) => w[e].clone(),
            None => Rational::one(),
        }
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Graph, GraphError> {
        if weights.len() != self.half_edge_count() {
            return Err(GraphError::BadParameter("one weight per half-edge required".into()));
        }
        let mut g = self.clone();
        g.weights = Some(weights);
        Ok(g)
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    /// Forget the truncation provenance, treating the graph as an object
    /// of interest in itself. Comparisons of two algorithms on the same
    /// finite graph go through this.
    pub fn as_finite(&self) -> Graph {
        let mut g = self.clone();
        g.horizon = None;
        g
    }

    /// Half-edges with the given source, in id order.
    pub fn out_edges(&self, x: VertexId) -> Vec<HalfEdgeId> {
        (0..self.half_edge_count()).filter(|&e| self.source[e] == x).collect()
    }

    /// Unweighted adjacency counts: entry (x,y) = number of half-edges x -> y.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.vertex_count]; self.vertex_count];
        for e in 0..self.half_edge_count() {
            a[self.source(e)][self.target(e)] += 1;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for e in self.out_edges(x) {
                let y = self.target(e);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// BFS distances from x; usize::MAX for unreachable vertices.
    pub fn distances(&self, x: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for e in self.out_edges(v) {
                let w = self.target(e);
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// A graph with a start (birth) and end (death) vertex for path counting.
#[derive(Clone, Debug)]
pub struct MarkedGraph {
    pub graph: Graph,
    pub birth: VertexId,
    pub death: VertexId,
}

impl MarkedGraph {
    pub fn new(graph: Graph, birth: VertexId, death: VertexId) -> Result<Self, GraphError> {
        if birth >= graph.vertex_count() {
            return Err(GraphError::UnknownVertex(birth));
        }
        if death >= graph.vertex_count() {
            return Err(GraphError::UnknownVertex(death));
        }
        Ok(MarkedGraph { graph, birth, death })
    }

    /// Circuit marking at a single vertex.
    pub fn circuit(graph: Graph, base: VertexId) -> Result<Self, GraphError> {
        MarkedGraph::new(graph, base, base)
    }

    pub fn as_finite(&self) -> MarkedGraph {
        MarkedGraph { graph: self.graph.as_finite(), birth: self.birth, death: self.death }
    }
}

// ---------------------------------------------------------------------------
// Incremental construction
// ---------------------------------------------------------------------------

/// Builder used by the family constructors and product operations.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertex_count: usize,
    source: Vec<VertexId>,
    partner: Vec<HalfEdgeId>,
    wrapped: Vec<bool>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        GraphBuilder { vertex_count, ..Default::default() }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Add a geometric edge x -> y plus its reversal; returns the forward id.
    pub fn add_edge(&mut self, x: VertexId, y: VertexId) -> HalfEdgeId {
        let e = self.source.len();
        self.source.push(x);
        self.source.push(y);
        self.partner.push(e + 1);
        self.partner.push(e);
        self.wrapped.push(false);
        self.wrapped.push(false);
        e
    }

    /// Add a single self-inverse half-edge at x.
    pub fn add_self_inverse(&mut self, x: VertexId, wrapped: bool) -> HalfEdgeId {
        let e = self.source.len();
        self.source.push(x);
        self.partner.push(e);
        self.wrapped.push(wrapped);
        e
    }

    pub fn build(self, horizon: Option<usize>) -> Graph {
        let g = Graph {
            vertex_count: self.vertex_count,
            source: self.source,
            partner: self.partner,
            wrapped: self.wrapped,
            weights: None,
            horizon,
        };
        g.validate().expect("builder produced an invalid graph");
        g
    }
}

// ---------------------------------------------------------------------------
// Named families
// ---------------------------------------------------------------------------

/// Complete graph on v vertices (one edge pair between every two vertices).
pub fn complete(v: usize) -> Result<Graph, GraphError> {
    if v < 2 {
        return Err(GraphError::BadParameter(format!("complete graph needs v >= 2, got {v}")));
    }
    let mut b = GraphBuilder::new(v);
    for i in 0..v {
        for j in (i + 1)..v {
            b.add_edge(i, j);
        }
    }
    Ok(b.build(None))
}

/// Cycle on k vertices; k = 1 is a single vertex with a loop edge pair.
pub fn cycle(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter("cycle needs k >= 1".into()));
    }
    let mut b = GraphBuilder::new(k);
    for i in 0..k {
        b.add_edge(i, (i + 1) % k);
    }
    Ok(b.build(None))
}

/// Ball of radius r in the d-regular tree, boundary edges wrapped so the
/// result stays d-regular. Faithful for walks of length <= 2r based
/// anywhere within distance 0 of the root.
pub fn tree_ball(d: usize, r: usize) -> Result<Graph, GraphError> {
    if d < 1 {
        return Err(GraphError::BadParameter("tree ball needs d >= 1".into()));
    }
    Ok(loop_tree_ball_impl(d, 0, r))
}

/// The d-regular tree with e of the root's edges replaced by e self-inverse
/// loops, truncated to radius r with wrapping.
pub fn loop_tree(d: usize, e: usize, r: usize) -> Result<Graph, GraphError> {
    if d < 2 || e < 1 || e > d {
        return Err(GraphError::BadParameter(format!("loop tree needs d >= 2, 1 <= e <= d, got d={d} e={e}")));
    }
    Ok(loop_tree_ball_impl(d, e, r))
}

fn loop_tree_ball_impl(d: usize, loops: usize, r: usize) -> Graph {
    let mut b = GraphBuilder::new(1);
    let root = 0;
    for _ in 0..loops {
        b.add_self_inverse(root, false);
    }
    // frontier holds vertices still owed `children` more edges
    let mut frontier = vec![(root, d - loops)];
    for depth in 0..r {
        let mut next = Vec::new();
        for (v, children) in frontier {
            for _ in 0..children {
                let w = b.add_vertex();
                b.add_edge(v, w);
                next.push((w, d - 1));
            }
            let _ = depth;
        }
        frontier = next;
    }
    // leaves at depth r wrap their missing children
    for (v, children) in frontier {
        for _ in 0..children {
            b.add_self_inverse(v, true);
        }
    }
    b.build(Some(2 * r))
}

/// Segment of the two-poled ladder: columns -len..len, two rails and rungs,
/// rail ends wrapped. Vertex of column i on pole p is 2(i+len)+p; the base
/// column is 0 (vertex 2*len).
pub fn ladder(len: usize) -> Result<Graph, GraphError> {
    if len < 1 {
        return Err(GraphError::BadParameter("ladder needs len >= 1".into()));
    }
    let cols = 2 * len + 1;
    let v = |i: usize, p: usize| 2 * i + p;
    let mut b = GraphBuilder::new(2 * cols);
    for i in 0..cols {
        b.add_edge(v(i, 0), v(i, 1));
        if i + 1 < cols {
            b.add_edge(v(i, 0), v(i + 1, 0));
            b.add_edge(v(i, 1), v(i + 1, 1));
        }
    }
    for p in 0..2 {
        b.add_self_inverse(v(0, p), true);
        b.add_self_inverse(v(cols - 1, p), true);
    }
    Ok(b.build(Some(2 * len)))
}

/// Base vertex of [`ladder`].
pub fn ladder_base(len: usize) -> VertexId {
    2 * len
}

/// Segment of the integers with steps {±1, ±2}: vertices -len..len, edges
/// whose target falls outside wrapped. Steps move by up to 2, so counts
/// are faithful only to length len - 2.
pub fn z12(len: usize) -> Result<Graph, GraphError> {
    if len < 2 {
        return Err(GraphError::BadParameter("z12 needs len >= 2".into()));
    }
    let n = 2 * len + 1;
    let idx = |i: i64| (i + len as i64) as usize;
    let mut b = GraphBuilder::new(n);
    for i in -(len as i64)..=(len as i64) {
        for step in [1i64, 2] {
            if i + step <= len as i64 {
                b.add_edge(idx(i), idx(i + step));
            } else {
                b.add_self_inverse(idx(i), true);
            }
        }
        for step in [-1i64, -2] {
            if i + step < -(len as i64) {
                b.add_self_inverse(idx(i), true);
            }
        }
    }
    Ok(b.build(Some(len.saturating_sub(2))))
}

/// Base vertex (the integer 0) of [`z12`].
pub fn z12_base(len: usize) -> VertexId {
    len
}

/// Segment of the integers with steps ±1: the 2-regular tree ball.
pub fn z_segment(len: usize) -> Result<Graph, GraphError> {
    tree_ball(2, len)
}

/// Schreier coset graph. `action[v][s]` is the vertex reached from v by
/// generator s; `inverse[s]` names the inverse generator. Every vertex
/// gets one half-edge per generator; the partner of (v, s) is
/// (action[v][s], inverse[s]). Generators with inverse[s] = s acting with
/// a fixed point produce self-inverse loops.
pub fn schreier(action: &[Vec<usize>], inverse: &[usize]) -> Result<Graph, GraphError> {
    let n = action.len();
    let k = inverse.len();
    if n == 0 || k == 0 {
        return Err(GraphError::BadParameter("empty action table".into()));
    }
    for (s, &t) in inverse.iter().enumerate() {
        if t >= k || inverse[t] != s {
            return Err(GraphError::BadParameter(format!("generator pairing not an involution at {s}")));
        }
    }
    for (v, row) in action.iter().enumerate() {
        if row.len() != k {
            return Err(GraphError::BadParameter(format!("action row {v} has wrong length")));
        }
        for (s, &w) in row.iter().enumerate() {
            if w >= n {
                return Err(GraphError::BadParameter(format!("action[{v}][{s}] out of range")));
            }
            if action[w][inverse[s]] != v {
                return Err(GraphError::BadParameter(format!(
                    "action is not compatible with the pairing at vertex {v}, generator {s}"
                )));
            }
        }
    }
    // half-edge id of (v, s) is v*k + s; partner is (v·s, s^{ -1 }), which
    // coincides with (v, s) exactly when s is an involution fixing v.
    let mut source = Vec::with_capacity(n * k);
    let mut partner = Vec::with_capacity(n * k);
    for v in 0..n {
        for s in 0..k {
            source.push(v);
            partner.push(action[v][s] * k + inverse[s]);
        }
    }
    Graph::new(n, source, partner)
}

// ---------------------------------------------------------------------------
// Ball truncation
// ---------------------------------------------------------------------------

/// Subgraph on vertices within distance n of x; half-edges leaving the
/// ball become wrapped self-inverse edges, so all degrees are preserved.
pub fn ball(g: &Graph, x: VertexId, n: usize) -> Result<Graph, GraphError> {
    if x >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(x));
    }
    let dist = g.distances(x);
    let keep: Vec<bool> = dist.iter().map(|&d| d <= n).collect();
    let mut vmap = vec![usize::MAX; g.vertex_count()];
    let mut count = 0;
    for v in 0..g.vertex_count() {
        if keep[v] {
            vmap[v] = count;
            count += 1;
        }
    }
    let mut emap = vec![usize::MAX; g.half_edge_count()];
    let mut source = Vec::new();
    let mut partner = Vec::new();
    let mut wrapped = Vec::new();
    let mut weights = Vec::new();
    for e in 0..g.half_edge_count() {
        if !keep[g.source(e)] {
            continue;
        }
        let id = source.len();
        emap[e] = id;
        source.push(vmap[g.source(e)]);
        weights.push(g.weight(e));
        if keep[g.target(e)] {
            partner.push(usize::MAX); // fixed up below
            wrapped.push(g.is_wrapped(e));
        } else {
            partner.push(id);
            wrapped.push(true);
        }
    }
    for e in 0..g.half_edge_count() {
        if emap[e] == usize::MAX || partner[emap[e]] != usize::MAX {
            continue;
        }
        partner[emap[e]] = emap[g.partner(e)];
    }
    let horizon = match g.horizon() {
        Some(h) => h.min(2 * n),
        None => 2 * n,
    };
    let out = Graph {
        vertex_count: count,
        source,
        partner,
        wrapped,
        weights: if g.weights.is_some() { Some(weights) } else { None },
        horizon: Some(horizon),
    };
    out.validate().expect("ball produced an invalid graph");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Free product truncation
// ---------------------------------------------------------------------------

/// Free product of two pointed graphs, built breadth-first: glue a copy of
/// the other factor at every vertex, for `depth` rounds. Walks of length
/// <= 2·depth at the base point agree with the full free product.
pub fn free_product_truncate(e: &MarkedGraph, f: &MarkedGraph, depth: usize) -> Result<MarkedGraph, GraphError> {
    if !e.graph.is_connected() || !f.graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let mut b = GraphBuilder::new(1);
    let base = 0;
    // (vertex, factor to glue there): 0 = first factor, 1 = second
    let mut pending: Vec<(VertexId, u8)> = vec![(base, 0), (base, 1)];
    for _ in 0..depth {
        let round = std::mem::take(&mut pending);
        for (at, which) in round {
            let (factor, factor_base) = if which == 0 { (&e.graph, e.birth) } else { (&f.graph, f.birth) };
            let mut vmap = vec![usize::MAX; factor.vertex_count()];
            vmap[factor_base] = at;
            for v in 0..factor.vertex_count() {
                if v != factor_base {
                    vmap[v] = b.add_vertex();
                    pending.push((vmap[v], 1 - which));
                }
            }
            let mut emap = vec![usize::MAX; factor.half_edge_count()];
            for he in 0..factor.half_edge_count() {
                if emap[he] != usize::MAX {
                    continue;
                }
                let p = factor.partner(he);
                if p == he {
                    emap[he] = b.add_self_inverse(vmap[factor.source(he)], factor.is_wrapped(he));
                } else {
                    let fwd = b.add_edge(vmap[factor.source(he)], vmap[factor.source(p)]);
                    emap[he] = fwd;
                    emap[p] = fwd + 1;
                }
            }
        }
    }
    let g = b.build(Some(2 * depth));
    MarkedGraph::circuit(g, base)
}

// ---------------------------------------------------------------------------
// Triangle contraction
// ---------------------------------------------------------------------------

/// Quotient by a partition of the vertices into triangles: each 3-set is
/// identified to one vertex, the triangle edges are deleted, everything
/// else is projected.
pub fn triangle_contract(g: &Graph, triples: &[[VertexId; 3]]) -> Result<Graph, GraphError> {
    let mut owner = vec![usize::MAX; g.vertex_count()];
    for (i, t) in triples.iter().enumerate() {
        for &v in t {
            if v >= g.vertex_count() || owner[v] != usize::MAX {
                return Err(GraphError::BadParameter(format!("vertex {v} missing or repeated in partition")));
            }
            owner[v] = i;
        }
    }
    if owner.iter().any(|&o| o == usize::MAX) {
        return Err(GraphError::BadParameter("partition does not cover all vertices".into()));
    }
    let adj = g.adjacency();
    for t in triples {
        for a in 0..3 {
            for bb in (a + 1)..3 {
                if adj[t[a]][t[bb]] == 0 {
                    return Err(GraphError::NotTriangle(*t));
                }
            }
        }
    }
    let mut source = Vec::new();
    let mut partner_old = Vec::new();
    let mut emap = vec![usize::MAX; g.half_edge_count()];
    for e in 0..g.half_edge_count() {
        let (s, t) = (g.source(e), g.target(e));
        if s != t && owner[s] == owner[t] {
            continue; // a contracted triangle edge
        }
        emap[e] = source.len();
        source.push(owner[s]);
        partner_old.push(g.partner(e));
    }
    let partner: Vec<usize> = partner_old.iter().map(|&p| emap[p]).collect();
    Graph::new(triples.len(), source, partner)
}

// ---------------------------------------------------------------------------
// Loops and direct products
// ---------------------------------------------------------------------------

/// Add one self-inverse loop at every vertex (adjacency gains +1 on the
/// diagonal).
pub fn add_loops(g: &Graph) -> Graph {
    let mut source = g.source.clone();
    let mut partner = g.partner.clone();
    let mut wrapped = g.wrapped.clone();
    for v in 0..g.vertex_count() {
        let e = source.len();
        source.push(v);
        partner.push(e);
        wrapped.push(false);
    }
    let out = Graph {
        vertex_count: g.vertex_count(),
        source,
        partner,
        wrapped,
        weights: None,
        horizon: g.horizon(),
    };
    out.validate().expect("add_loops produced an invalid graph");
    out
}

fn pair_vertex(_e: &Graph, f: &Graph, x: VertexId, y: VertexId) -> VertexId {
    x * f.vertex_count() + y
}

/// First direct product: vertex set is the pairs, and each step moves in
/// exactly one factor. Adjacency is E⊗I + I⊗F.
pub fn direct_first(e: &Graph, f: &Graph) -> Graph {
    let mut b = GraphBuilder::new(e.vertex_count() * f.vertex_count());
    let mut source = Vec::new();
    let mut partner = Vec::new();
    let mut wrapped = Vec::new();
    // half-edges of E crossed with vertices of F, then the mirror image;
    // partners stay within each block.
    let fe = f.vertex_count();
    for he in 0..e.half_edge_count() {
        for y in 0..fe {
            source.push(pair_vertex(e, f, e.source(he), y));
            partner.push(e.partner(he) * fe + y);
            wrapped.push(e.is_wrapped(he));
        }
    }
    let off = source.len();
    for x in 0..e.vertex_count() {
        for hf in 0..f.half_edge_count() {
            source.push(pair_vertex(e, f, x, f.source(hf)));
            partner.push(off + x * f.half_edge_count() + f.partner(hf));
            wrapped.push(f.is_wrapped(hf));
        }
    }
    b.vertex_count = e.vertex_count() * f.vertex_count();
    b.source = source;
    b.partner = partner;
    b.wrapped = wrapped;
    b.build(min_horizon(e, f))
}

/// Second direct product: each step moves in both factors at once.
/// Adjacency is E⊗F; requires a loop at every vertex of both factors so
/// that single-factor moves remain expressible.
pub fn direct_second(e: &Graph, f: &Graph) -> Result<Graph, GraphError> {
    for g in [e, f] {
        for v in 0..g.vertex_count() {
            if !g.out_edges(v).iter().any(|&he| g.target(he) == v) {
                return Err(GraphError::MissingLoop(v));
            }
        }
    }
    let mut source = Vec::new();
    let mut partner = Vec::new();
    let mut wrapped = Vec::new();
    let hf_count = f.half_edge_count();
    for he in 0..e.half_edge_count() {
        for hf in 0..hf_count {
            source.push(pair_vertex(e, f, e.source(he), f.source(hf)));
            partner.push(e.partner(he) * hf_count + f.partner(hf));
            wrapped.push(e.is_wrapped(he) || f.is_wrapped(hf));
        }
    }
    let out = Graph {
        vertex_count: e.vertex_count() * f.vertex_count(),
        source,
        partner,
        wrapped,
        weights: None,
        horizon: min_horizon(e, f),
    };
    out.validate().expect("direct_second produced an invalid graph");
    Ok(out)
}

fn min_horizon(e: &Graph, f: &Graph) -> Option<usize> {
    match (e.horizon(), f.horizon()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, b) => b,
    }
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------

/// Parse either an explicit half-edge listing
/// `{"vertices": n, "half_edges": [{"id","source","partner","weight"?}], "marks": {"birth","death"}?}`
/// or a family shorthand `{"family": name, "params": {...}}`.
pub fn graph_from_json(v: &Value) -> Result<MarkedGraph, GraphError> {
    if v.get("family").is_some() {
        return family_from_json(v);
    }
    let nv = v
        .get("vertices")
        .and_then(Value::as_u64)
        .ok_or_else(|| GraphError::BadJson("missing vertices".into()))? as usize;
    let hes = v
        .get("half_edges")
        .and_then(Value::as_array)
        .ok_or_else(|| GraphError::BadJson("missing half_edges".into()))?;
    let mut by_id: BTreeMap<u64, (usize, u64, Option<Rational>)> = BTreeMap::new();
    let mut order = Vec::new();
    for he in hes {
        let id = he.get("id").and_then(Value::as_u64).ok_or_else(|| GraphError::BadJson("half-edge missing id".into()))?;
        let src = he
            .get("source")
            .and_then(Value::as_u64)
            .ok_or_else(|| GraphError::BadJson("half-edge missing source".into()))? as usize;
        let p = he
            .get("partner")
            .and_then(Value::as_u64)
            .ok_or_else(|| GraphError::BadJson("half-edge missing partner".into()))?;
        let w = match he.get("weight") {
            None => None,
            Some(Value::String(s)) => {
                Some(rat_parse(s).ok_or_else(|| GraphError::BadJson(format!("bad weight {s:?}")))?)
            }
            Some(_) => return Err(GraphError::BadJson("weight must be a \"p/q\" string".into())),
        };
        if by_id.insert(id, (src, p, w)).is_some() {
            return Err(GraphError::DuplicateId(id));
        }
        order.push(id);
    }
    let index: BTreeMap<u64, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut source = Vec::new();
    let mut partner = Vec::new();
    let mut weights = Vec::new();
    let mut any_weight = false;
    for id in &order {
        let (src, p, w) = &by_id[id];
        source.push(*src);
        partner.push(index.get(p).copied().ok_or(GraphError::UnknownId(*p))?);
        any_weight |= w.is_some();
        weights.push(w.clone().unwrap_or_else(Rational::one));
    }
    let mut g = Graph::new(nv, source, partner)?;
    if any_weight {
        g = g.with_weights(weights)?;
    }
    let (birth, death) = match v.get("marks") {
        None => (0, 0),
        Some(m) => {
            let b = m.get("birth").and_then(Value::as_u64).ok_or_else(|| GraphError::BadJson("marks missing birth".into()))? as usize;
            let d = m.get("death").and_then(Value::as_u64).ok_or_else(|| GraphError::BadJson("marks missing death".into()))? as usize;
            (b, d)
        }
    };
    MarkedGraph::new(g, birth, death)
}

fn family_from_json(v: &Value) -> Result<MarkedGraph, GraphError> {
    let name = v.get("family").and_then(Value::as_str).ok_or_else(|| GraphError::BadJson("family must be a string".into()))?;
    let params = v.get("params").cloned().unwrap_or_else(|| Value::Object(Default::default()));
    let p = |key: &str| -> Result<usize, GraphError> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| GraphError::BadJson(format!("family {name} needs integer param {key:?}")))
    };
    let (g, base) = match name {
        "complete" => (complete(p("v")?)?, 0),
        "cycle" => (cycle(p("k")?)?, 0),
        "tree_ball" => (tree_ball(p("d")?, p("r")?)?, 0),
        "loop_tree" => (loop_tree(p("d")?, p("e")?, p("r")?)?, 0),
        "ladder" => {
            let len = p("len")?;
            (ladder(len)?, ladder_base(len))
        }
        "z12" => {
            let len = p("len")?;
            (z12(len)?, z12_base(len))
        }
        _ => return Err(GraphError::BadJson(format!("unknown family {name:?}"))),
    };
    let (birth, death) = match v.get("marks") {
        None => (base, base),
        Some(m) => {
            let b = m.get("birth").and_then(Value::as_u64).ok_or_else(|| GraphError::BadJson("marks missing birth".into()))? as usize;
            let d = m.get("death").and_then(Value::as_u64).ok_or_else(|| GraphError::BadJson("marks missing death".into()))? as usize;
            (b, d)
        }
    };
    MarkedGraph::new(g, birth, death)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn degrees(g: &Graph) -> Vec<usize> {
        (0..g.vertex_count()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn involution_and_degree_sum() {
        for g in [complete(4).unwrap(), cycle(5).unwrap(), tree_ball(3, 2).unwrap(), loop_tree(4, 2, 2).unwrap()] {
            for e in 0..g.half_edge_count() {
                assert_eq!(g.partner(g.partner(e)), e);
            }
            assert_eq!(degrees(&g).iter().sum::<usize>(), g.half_edge_count());
        }
    }

    #[test]
    fn complete_triangle_shape() {
        let g = complete(3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.half_edge_count(), 6);
        assert_eq!(degrees(&g), vec![2, 2, 2]);
    }

    #[test]
    fn degenerate_cycle_is_a_loop_pair() {
        let g = cycle(1).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.half_edge_count(), 2);
        assert_eq!(g.partner(0), 1);
        assert_eq!(g.target(0), 0);
    }

    #[test]
    fn tree_ball_counts_and_regularity() {
        let g = tree_ball(3, 2).unwrap();
        assert_eq!(g.vertex_count(), 10); // 1 + 3 + 6
        for d in 2..=5 {
            for r in 0..=4usize {
                let g = tree_ball(d, r).unwrap();
                assert!(degrees(&g).iter().all(|&x| x == d), "tree_ball({d},{r}) not regular");
                assert_eq!(g.horizon(), Some(2 * r));
            }
        }
    }

    #[test]
    fn loop_tree_root_loops() {
        let g = loop_tree(4, 2, 3).unwrap();
        assert!(degrees(&g).iter().all(|&x| x == 4));
        let self_loops_at_root = g.out_edges(0).iter().filter(|&&e| g.is_self_inverse(e) && !g.is_wrapped(e)).count();
        assert_eq!(self_loops_at_root, 2);
    }

    #[test]
    fn ladder_is_three_regular() {
        let g = ladder(3).unwrap();
        assert_eq!(g.vertex_count(), 14);
        assert!(degrees(&g).iter().all(|&x| x == 3));
        assert_eq!(g.horizon(), Some(6));
    }

    #[test]
    fn z12_is_four_regular() {
        let g = z12(5).unwrap();
        assert_eq!(g.vertex_count(), 11);
        assert!(degrees(&g).iter().all(|&x| x == 4));
        assert_eq!(g.horizon(), Some(3));
    }

    #[test]
    fn ball_saturates_and_wraps() {
        let tri = complete(3).unwrap();
        let b = ball(&tri, 0, 5).unwrap();
        assert_eq!(b.vertex_count(), 3);
        assert_eq!(b.half_edge_count(), 6);

        let b0 = ball(&tri, 1, 0).unwrap();
        assert_eq!(b0.vertex_count(), 1);
        assert_eq!(b0.half_edge_count(), 2);
        assert!((0..2).all(|e| b0.is_self_inverse(e) && b0.is_wrapped(e)));

        // radius-1 ball in the 3-regular tree: degrees preserved
        let t = tree_ball(3, 4).unwrap();
        let b1 = ball(&t, 0, 1).unwrap();
        assert_eq!(b1.vertex_count(), 4);
        assert!(degrees(&b1).iter().all(|&x| x == 3));
        let wrapped = (0..b1.half_edge_count()).filter(|&e| b1.is_wrapped(e)).count();
        assert_eq!(wrapped, 6); // 2 per depth-1 vertex
    }

    #[test]
    fn schreier_round_trip() {
        // Z/3 with generators +1, -1
        let action = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
        let g = schreier(&action, &[1, 0]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(degrees(&g).iter().all(|&x| x == 2));
        for e in 0..g.half_edge_count() {
            assert_eq!(g.partner(g.partner(e)), e);
        }
        // involution generator with a fixed point makes a self-inverse loop
        let action = vec![vec![0]];
        let g = schreier(&action, &[0]).unwrap();
        assert_eq!(g.half_edge_count(), 1);
        assert!(g.is_self_inverse(0));
    }

    #[test]
    fn schreier_rejects_bad_pairing() {
        let action = vec![vec![0, 0, 0]];
        assert!(schreier(&action, &[1, 2, 0]).is_err());
    }

    #[test]
    fn free_product_unit_and_z() {
        let edge = MarkedGraph::circuit(tree_ball(1, 1).unwrap().as_finite(), 0).unwrap();
        let point = MarkedGraph::circuit(GraphBuilder::new(1).build(None), 0).unwrap();
        let same = free_product_truncate(&edge, &point, 4).unwrap();
        assert_eq!(same.graph.vertex_count(), 2);
        // edge * edge approximates the integer line
        let z = free_product_truncate(&edge, &edge, 3).unwrap();
        assert_eq!(degrees(&z.graph).iter().filter(|&&d| d == 2).count(), z.graph.vertex_count() - 2);
    }

    #[test]
    fn triangle_contract_single_triangle() {
        let tri = complete(3).unwrap();
        let q = triangle_contract(&tri, &[[0, 1, 2]]).unwrap();
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.half_edge_count(), 0);
        assert!(triangle_contract(&cycle(4).unwrap(), &[[0, 1, 2]]).is_err());
    }

    #[test]
    fn direct_product_adjacency_identities() {
        let e = z_segment(2).unwrap().as_finite();
        let f = cycle(3).unwrap();
        let p = direct_first(&e, &f);
        let (ae, af, ap) = (e.adjacency(), f.adjacency(), p.adjacency());
        let nf = f.vertex_count();
        for x1 in 0..e.vertex_count() {
            for y1 in 0..nf {
                for x2 in 0..e.vertex_count() {
                    for y2 in 0..nf {
                        let expect = ae[x1][x2] * u64::from(y1 == y2) + u64::from(x1 == x2) * af[y1][y2];
                        assert_eq!(ap[x1 * nf + y1][x2 * nf + y2], expect);
                    }
                }
            }
        }

        let el = add_loops(&e);
        let fl = add_loops(&f);
        let p2 = direct_second(&el, &fl).unwrap();
        let (ae, af, ap) = (el.adjacency(), fl.adjacency(), p2.adjacency());
        for x1 in 0..el.vertex_count() {
            for y1 in 0..nf {
                for x2 in 0..el.vertex_count() {
                    for y2 in 0..nf {
                        assert_eq!(ap[x1 * nf + y1][x2 * nf + y2], ae[x1][x2] * af[y1][y2]);
                    }
                }
            }
        }
        assert!(direct_second(&e, &f).is_err());
    }

    #[test]
    fn json_explicit_and_family() {
        let doc = json!({
            "vertices": 2,
            "half_edges": [
                {"id": 10, "source": 0, "partner": 20},
                {"id": 20, "source": 1, "partner": 10, "weight": "1/2"}
            ],
            "marks": {"birth": 0, "death": 1}
        });
        let m = graph_from_json(&doc).unwrap();
        assert_eq!(m.graph.vertex_count(), 2);
        assert_eq!(m.birth, 0);
        assert_eq!(m.death, 1);
        assert_eq!(m.graph.weight(1), crate::series::rat(1, 2));

        let fam = json!({"family": "tree_ball", "params": {"d": 3, "r": 2}});
        let m = graph_from_json(&fam).unwrap();
        assert_eq!(m.graph.vertex_count(), 10);

        let bad = json!({
            "vertices": 2,
            "half_edges": [
                {"id": 0, "source": 0, "partner": 1},
                {"id": 1, "source": 1, "partner": 0},
                {"id": 2, "source": 0, "partner": 2},
            ]
        });
        assert!(graph_from_json(&bad).is_ok()); // id 2 is a valid self-inverse edge
        let bad = json!({
            "vertices": 2,
            "half_edges": [
                {"id": 0, "source": 0, "partner": 1},
                {"id": 1, "source": 1, "partner": 2},
                {"id": 2, "source": 0, "partner": 0},
            ]
        });
        assert!(graph_from_json(&bad).is_err());
    }
}
