//! Brute-force enumeration oracle.
//!
//! Exhaustively lists paths between two marked vertices, circuits, and
//! primitive cycles on small graphs. Every fast algorithm in this crate
//! is cross-checked against the counts produced here.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, HalfEdgeId, MarkedGraph};
use crate::series::{BivariateSeries, Rational, UPoly};

#[derive(Debug, Error, PartialEq)]
pub enum EnumError {
    #[error("enumeration would visit about {estimate:.1e} nodes, over the budget {budget:.1e}")]
    Budget { estimate: f64, budget: f64 },
    #[error("half-edge {0} does not continue the path (not composable)")]
    NotAPath(HalfEdgeId),
    #[error("not enough data: {0}")]
    Insufficient(String),
}

pub const DEFAULT_BUDGET: f64 = 1e8;

fn check_budget(g: &Graph, max_len: usize, budget: f64) -> Result<(), EnumError> {
    let d = (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0);
    let estimate = (d.max(1) as f64).powi(max_len as i32);
    if estimate > budget {
        return Err(EnumError::Budget { estimate, budget });
    }
    Ok(())
}

/// Table f_{m,n}: number of paths of length n with m bumps from the birth
/// to the death vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCensus {
    pub max_len: usize,
    /// counts[n][m], with m ranging over 0..=n.
    pub counts: Vec<Vec<u64>>,
}

impl PathCensus {
    pub fn count(&self, n: usize, m: usize) -> u64 {
        self.counts.get(n).and_then(|row| row.get(m)).copied().unwrap_or(0)
    }

    /// The enriched series sum f_{m,n} u^m t^n.
    pub fn series(&self) -> BivariateSeries {
        BivariateSeries::new(
            self.counts
                .iter()
                .map(|row| UPoly::new(row.iter().map(|&c| Rational::from_integer(c.into())).collect()))
                .collect(),
        )
    }

    /// Row sums: path counts by length alone (the u = 1 specialization).
    pub fn length_counts(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    /// The m = 0 row: proper (bump-free) path counts by length.
    pub fn proper_counts(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.first().copied().unwrap_or(0)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,count\n");
        for (n, row) in self.counts.iter().enumerate() {
            for (m, &c) in row.iter().enumerate() {
                if c != 0 {
                    out.push_str(&format!("{n},{m},{c}\n"));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_len": self.max_len,
            "counts": self.counts,
        })
    }
}

/// Exhaustive path census by depth-first search over half-edge sequences.
pub fn path_census(g: &MarkedGraph, max_len: usize, budget: Option<f64>) -> Result<PathCensus, EnumError> {
    check_budget(&g.graph, max_len, budget.unwrap_or(DEFAULT_BUDGET))?;
    let out: Vec<Vec<HalfEdgeId>> = (0..g.graph.vertex_count()).map(|v| g.graph.out_edges(v)).collect();
    let mut counts: Vec<Vec<u64>> = (0..=max_len).map(|n| vec![0; n + 1]).collect();

    struct Dfs<'a> {
        g: &'a Graph,
        out: &'a [Vec<HalfEdgeId>],
        death: usize,
        max_len: usize,
        counts: &'a mut Vec<Vec<u64>>,
    }
    fn go(d: &mut Dfs, v: usize, prev: Option<HalfEdgeId>, len: usize, bumps: usize) {
        if v == d.death {
            d.counts[len][bumps] += 1;
        }
        if len == d.max_len {
            return;
        }
        for &e in &d.out[v] {
            let bump = prev.map_or(false, |p| d.g.partner(p) == e);
            go(d, d.g.target(e), Some(e), len + 1, bumps + usize::from(bump));
        }
    }
    let mut dfs = Dfs { g: &g.graph, out: &out, death: g.death, max_len, counts: &mut counts };
    go(&mut dfs, g.birth, None, 0, 0);
    Ok(PathCensus { max_len, counts })
}

/// Weighted census: each path contributes the product of its half-edge
/// weights, summed into the coefficient of u^bumps t^len.
pub fn weighted_path_series(g: &MarkedGraph, max_len: usize, budget: Option<f64>) -> Result<BivariateSeries, EnumError> {
    check_budget(&g.graph, max_len, budget.unwrap_or(DEFAULT_BUDGET))?;
    let out: Vec<Vec<HalfEdgeId>> = (0..g.graph.vertex_count()).map(|v| g.graph.out_edges(v)).collect();
    let mut table: Vec<Vec<Rational>> = (0..=max_len).map(|n| vec![Rational::zero(); n + 1]).collect();

    fn go(
        g: &Graph,
        out: &[Vec<HalfEdgeId>],
        death: usize,
        max_len: usize,
        table: &mut Vec<Vec<Rational>>,
        v: usize,
        prev: Option<HalfEdgeId>,
        len: usize,
        bumps: usize,
        weight: Rational,
    ) {
        if v == death {
            table[len][bumps] += weight.clone();
        }
        if len == max_len {
            return;
        }
        for &e in &out[v] {
            let bump = prev.map_or(false, |p| g.partner(p) == e);
            let w = &weight * g.weight(e);
            go(g, out, death, max_len, table, g.target(e), Some(e), len + 1, bumps + usize::from(bump), w);
        }
    }
    go(&g.graph, &out, g.death, max_len, &mut table, g.birth, None, 0, 0, Rational::one());
    Ok(BivariateSeries::new(table.into_iter().map(UPoly::new).collect()))
}

/// Census of paths from a base vertex to anywhere, by length, bump count,
/// and graph distance of the endpoint from the base.
pub fn distance_census(g: &Graph, base: usize, max_len: usize, budget: Option<f64>) -> Result<Vec<Vec<Vec<u64>>>, EnumError> {
    check_budget(g, max_len, budget.unwrap_or(DEFAULT_BUDGET))?;
    let out: Vec<Vec<HalfEdgeId>> = (0..g.vertex_count()).map(|v| g.out_edges(v)).collect();
    let dist = g.distances(base);
    let maxd = max_len + 1;
    let mut counts: Vec<Vec<Vec<u64>>> = (0..=max_len).map(|n| vec![vec![0; maxd]; n + 1]).collect();

    fn go(
        g: &Graph,
        out: &[Vec<HalfEdgeId>],
        dist: &[usize],
        max_len: usize,
        counts: &mut Vec<Vec<Vec<u64>>>,
        v: usize,
        prev: Option<HalfEdgeId>,
        len: usize,
        bumps: usize,
    ) {
        counts[len][bumps][dist[v]] += 1;
        if len == max_len {
            return;
        }
        for &e in &out[v] {
            let bump = prev.map_or(false, |p| g.partner(p) == e);
            go(g, out, dist, max_len, counts, g.target(e), Some(e), len + 1, bumps + usize::from(bump));
        }
    }
    go(g, &out, &dist, max_len, &mut counts, base, None, 0, 0);
    Ok(counts)
}

// ---------------------------------------------------------------------------
// Cycles
// ---------------------------------------------------------------------------

/// A primitive cycle class: lexicographically minimal rotation of its
/// half-edge sequence, with its cyclic bump count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub edges: Vec<HalfEdgeId>,
    pub cyclic_bumps: usize,
}

#[derive(Clone, Debug)]
pub struct CycleCensus {
    pub max_len: usize,
    pub classes: Vec<CycleClass>,
}

impl CycleCensus {
    pub fn of_length(&self, n: usize) -> Vec<&CycleClass> {
        self.classes.iter().filter(|c| c.edges.len() == n).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_len": self.max_len,
            "classes": self
                .classes
                .iter()
                .map(|c| json!({"edges": c.edges, "cyclic_bumps": c.cyclic_bumps}))
                .collect::<Vec<_>>(),
        })
    }
}

fn minimal_rotation(seq: &[HalfEdgeId]) -> Vec<HalfEdgeId> {
    let n = seq.len();
    let mut best = seq.to_vec();
    for r in 1..n {
        let rot: Vec<HalfEdgeId> = (0..n).map(|i| seq[(i + r) % n]).collect();
        if rot < best {
            best = rot;
        }
    }
    best
}

fn is_proper_power(seq: &[HalfEdgeId]) -> bool {
    let n = seq.len();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| seq[i] == seq[i % d]) {
            return true;
        }
    }
    false
}

fn cyclic_bump_count(g: &Graph, seq: &[HalfEdgeId]) -> usize {
    let n = seq.len();
    (0..n).filter(|&i| g.partner(seq[i]) == seq[(i + 1) % n]).count()
}

/// One representative per primitive cycle class of length <= max_len.
pub fn cycle_census(g: &Graph, max_len: usize, budget: Option<f64>) -> Result<CycleCensus, EnumError> {
    check_budget(g, max_len, budget.unwrap_or(DEFAULT_BUDGET))?;
    let out: Vec<Vec<HalfEdgeId>> = (0..g.vertex_count()).map(|v| g.out_edges(v)).collect();
    let mut classes = Vec::new();

    // enumerate all circuits; keep those equal to their minimal rotation
    // (primitive classes have trivial rotation stabilizer, so exactly one
    // representative per class survives)
    fn go(
        g: &Graph,
        out: &[Vec<HalfEdgeId>],
        max_len: usize,
        classes: &mut Vec<CycleClass>,
        seq: &mut Vec<HalfEdgeId>,
        start: usize,
        v: usize,
    ) {
        if !seq.is_empty() && v == start {
            if !is_proper_power(seq) && *seq == minimal_rotation(seq) {
                classes.push(CycleClass { edges: seq.clone(), cyclic_bumps: cyclic_bump_count(g, seq) });
            }
        }
        if seq.len() == max_len {
            return;
        }
        for &e in &out[v] {
            seq.push(e);
            go(g, out, max_len, classes, seq, start, g.target(e));
            seq.pop();
        }
    }
    for start in 0..g.vertex_count() {
        let mut seq = Vec::new();
        go(g, &out, max_len, &mut classes, &mut seq, start, start);
    }
    classes.sort_by(|a, b| (a.edges.len(), &a.edges).cmp(&(b.edges.len(), &b.edges)));
    classes.dedup();
    Ok(CycleCensus { max_len, classes })
}

// ---------------------------------------------------------------------------
// Periods
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Periods {
    /// gcd of lengths of proper cycles; None when there are none (gcd of
    /// the empty set, conventionally infinite).
    pub p: Option<usize>,
    /// gcd of circuit lengths.
    pub q: Option<usize>,
}

fn bool_mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    c[i][j] |= b[k][j];
                }
            }
        }
    }
    c
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Proper period p (gcd of proper-cycle lengths) and period q (gcd of
/// circuit lengths), scanning lengths up to `bound`.
///
/// Wrapped half-edges are truncation artifacts: they are excluded from
/// the proper-cycle search, and a circuit may traverse one only as an
/// immediately doubled step (out and straight back), which is the only
/// kind of excursion past the boundary the truncation can represent
/// faithfully. Concretely the doubled-step rule is realized by replacing
/// each wrapped half-edge with a pendant edge pair before the scan.
pub fn periods(g: &Graph, bound: usize) -> Periods {
    // p: via the non-backtracking (edge-to-edge) boolean matrix over
    // non-wrapped half-edges. Diagonal of its n-th power certifies a
    // cyclically proper closed walk of length n.
    let edges: Vec<HalfEdgeId> = (0..g.half_edge_count()).filter(|&e| !g.is_wrapped(e)).collect();
    let ne = edges.len();
    let mut nb = vec![vec![false; ne]; ne];
    for (i, &e) in edges.iter().enumerate() {
        for (j, &f) in edges.iter().enumerate() {
            nb[i][j] = g.target(e) == g.source(f) && g.partner(e) != f;
        }
    }
    let mut p = None;
    let mut pw = nb.clone();
    for n in 1..=bound {
        if ne > 0 && (0..ne).any(|i| pw[i][i]) {
            p = Some(p.map_or(n, |x| gcd(x, n)));
        }
        if n < bound && ne > 0 {
            pw = bool_mat_mul(&pw, &nb);
        }
    }

    // q: vertex adjacency of the graph with wrapped edges replaced by
    // pendant edge pairs.
    let wrapped: Vec<HalfEdgeId> = (0..g.half_edge_count()).filter(|&e| g.is_wrapped(e)).collect();
    let nv = g.vertex_count() + wrapped.len();
    let mut adj = vec![vec![false; nv]; nv];
    for e in 0..g.half_edge_count() {
        if !g.is_wrapped(e) {
            adj[g.source(e)][g.target(e)] = true;
        }
    }
    for (k, &e) in wrapped.iter().enumerate() {
        let x = g.source(e);
        let pend = g.vertex_count() + k;
        adj[x][pend] = true;
        adj[pend][x] = true;
    }
    let mut q = None;
    let mut qw = adj.clone();
    for n in 1..=bound {
        if nv > 0 && (0..nv).any(|i| qw[i][i]) {
            q = Some(q.map_or(n, |x| gcd(x, n)));
        }
        if n < bound && nv > 0 {
            qw = bool_mat_mul(&qw, &adj);
        }
    }
    Periods { p, q }
}

// ---------------------------------------------------------------------------
// Bump schemes
// ---------------------------------------------------------------------------

/// Sum of (u-1)^{|B|} over all squiggle decompositions (rho, B) that
/// reassemble to the given path. Equals u^{bumps} — the combinatorial
/// heart of the enriched-series identity, checked exhaustively in tests.
pub fn bump_scheme_sum(g: &Graph, path: &[HalfEdgeId]) -> Result<UPoly, EnumError> {
    for w in path.windows(2) {
        if g.target(w[0]) != g.source(w[1]) {
            return Err(EnumError::NotAPath(w[1]));
        }
    }
    for &e in path {
        if e >= g.half_edge_count() {
            return Err(EnumError::NotAPath(e));
        }
    }
    // weights[w] = number of decompositions with |B| = w
    let mut weights: BTreeMap<usize, u64> = BTreeMap::new();

    // A decomposition is parsed left to right. At position i either:
    //  - i = n: done, possibly after everything was consumed;
    //  - the next edge of rho appears at i+2k after k >= 0 doubled copies
    //    of itself (a squiggle along that edge), adding 2k to |B|;
    //  - a squiggle at the current vertex along some edge e fills
    //    pi[i..i+2k] = (e, e-bar)^k with k >= 1, adding 2k-1 to |B|
    //    (the squiggle contributes its edges minus the one matched as a
    //    return step of rho's vertex visit).
    fn go(
        g: &Graph,
        path: &[HalfEdgeId],
        i: usize,
        acc: usize,
        weights: &mut BTreeMap<usize, u64>,
    ) {
        let n = path.len();
        if i == n {
            *weights.entry(acc).or_insert(0) += 1;
            return;
        }
        // squiggle at the vertex: pi[i..i+2k] = (e, e-bar)^k, k >= 1
        let e = path[i];
        let mut k = 0;
        while i + 2 * (k + 1) <= n && path[i + 2 * k] == e && path[i + 2 * k + 1] == g.partner(e) {
            k += 1;
            go(g, path, i + 2 * k, acc + 2 * k - 1, weights);
        }
        // k doubled copies then the rho-edge itself: pi[i+2k] = e
        let mut k = 0;
        loop {
            if i + 2 * k < n && path[i + 2 * k] == e {
                go(g, path, i + 2 * k + 1, acc + 2 * k, weights);
            } else {
                break;
            }
            if i + 2 * k + 1 < n && path[i + 2 * k + 1] == g.partner(e) {
                k += 1;
            } else {
                break;
            }
        }
    }
    go(g, path, 0, 0, &mut weights);

    // assemble sum_w count_w (u-1)^w
    let u_minus_1 = UPoly::from_i64(&[-1, 1]);
    let mut total = UPoly::zero();
    for (w, count) in weights {
        let term = u_minus_1.pow(w).scale(&Rational::from_integer(count.into()));
        total = total.add(&term);
    }
    Ok(total)
}

/// Number of bumps in a path (positions where the next edge reverses the
/// previous one).
pub fn bump_count(g: &Graph, path: &[HalfEdgeId]) -> usize {
    path.windows(2).filter(|w| g.partner(w[0]) == w[1]).count()
}

/// All paths (as half-edge sequences) from a vertex, up to a length.
pub fn all_paths_from(g: &Graph, start: usize, max_len: usize) -> Vec<Vec<HalfEdgeId>> {
    let out: Vec<Vec<HalfEdgeId>> = (0..g.vertex_count()).map(|v| g.out_edges(v)).collect();
    let mut acc = Vec::new();
    fn go(g: &Graph, out: &[Vec<HalfEdgeId>], max_len: usize, acc: &mut Vec<Vec<HalfEdgeId>>, seq: &mut Vec<HalfEdgeId>, v: usize) {
        acc.push(seq.clone());
        if seq.len() == max_len {
            return;
        }
        for &e in &out[v] {
            seq.push(e);
            go(g, out, max_len, acc, seq, g.target(e));
            seq.pop();
        }
    }
    let mut seq = Vec::new();
    go(g, &out, max_len, &mut acc, &mut seq, start);
    acc
}

/// Serialize a weighted bivariate census row set as CSV with exact
/// rationals split into numerator and denominator columns.
pub fn bivariate_to_csv(f: &BivariateSeries) -> String {
    let mut out = String::from("n,m,numerator,denominator\n");
    for n in 0..=f.order() {
        let poly = f.coeff(n);
        for (m, c) in poly.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push_str(&format!("{n},{m},{},{}\n", c.numer(), c.denom()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, tree_ball, MarkedGraph};
    use crate::series::rat_int;

    fn edge_graph() -> Graph {
        tree_ball(1, 1).unwrap().as_finite()
    }

    #[test]
    fn triangle_circuit_counts() {
        let m = MarkedGraph::circuit(complete(3).unwrap(), 0).unwrap();
        let c = path_census(&m, 5, None).unwrap();
        assert_eq!(c.length_counts(), vec![1, 0, 2, 2, 6, 10]);
    }

    #[test]
    fn triangle_path_counts() {
        let m = MarkedGraph::new(complete(3).unwrap(), 0, 1).unwrap();
        let c = path_census(&m, 5, None).unwrap();
        assert_eq!(c.length_counts(), vec![0, 1, 1, 3, 5, 11]);
    }

    #[test]
    fn integer_line_bump_profile() {
        // circuits of length 4 at the origin: 6 total, by bumps 2u+2u^2+2u^3
        let m = MarkedGraph::circuit(tree_ball(2, 3).unwrap().as_finite(), 0).unwrap();
        let c = path_census(&m, 4, None).unwrap();
        assert_eq!(c.count(4, 0), 0);
        assert_eq!(c.count(4, 1), 2);
        assert_eq!(c.count(4, 2), 2);
        assert_eq!(c.count(4, 3), 2);
        assert_eq!(c.length_counts()[4], 6);
    }

    #[test]
    fn empty_path_cases() {
        let m = MarkedGraph::new(complete(3).unwrap(), 0, 1).unwrap();
        let c = path_census(&m, 0, None).unwrap();
        assert_eq!(c.count(0, 0), 0);
        let m = MarkedGraph::circuit(complete(3).unwrap(), 0).unwrap();
        let c = path_census(&m, 0, None).unwrap();
        assert_eq!(c.count(0, 0), 1);
    }

    #[test]
    fn census_invariants() {
        let m = MarkedGraph::circuit(complete(4).unwrap(), 0).unwrap();
        let c = path_census(&m, 8, None).unwrap();
        for n in 1..=8 {
            for mm in n..=n {
                assert_eq!(c.count(n, mm), 0, "f_{{{mm},{n}}} should vanish");
            }
        }
    }

    #[test]
    fn reversal_symmetry() {
        let g = complete(4).unwrap();
        let a = path_census(&MarkedGraph::new(g.clone(), 0, 2).unwrap(), 7, None).unwrap();
        let b = path_census(&MarkedGraph::new(g, 2, 0).unwrap(), 7, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_census_with_unit_weights() {
        let m = MarkedGraph::circuit(complete(3).unwrap(), 0).unwrap();
        let unweighted = path_census(&m, 6, None).unwrap().series();
        let weighted = weighted_path_series(&m, 6, None).unwrap();
        assert_eq!(unweighted, weighted);
    }

    #[test]
    fn budget_guard_trips() {
        let m = MarkedGraph::circuit(complete(4).unwrap(), 0).unwrap();
        assert!(matches!(path_census(&m, 30, Some(1e6)), Err(EnumError::Budget { .. })));
    }

    #[test]
    fn triangle_primitive_cycles() {
        let c = cycle_census(&complete(3).unwrap(), 3, None).unwrap();
        let proper: Vec<_> = c.of_length(3).into_iter().filter(|cl| cl.cyclic_bumps == 0).collect();
        assert_eq!(proper.len(), 2); // the two orientations
    }

    #[test]
    fn single_edge_primitive_cycle() {
        let c = cycle_census(&edge_graph(), 4, None).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].edges.len(), 2);
        assert_eq!(c.classes[0].cyclic_bumps, 2);
    }

    #[test]
    fn quadrilateral_primitive_cycles() {
        let c = cycle_census(&cycle(4).unwrap(), 4, None).unwrap();
        let proper: Vec<_> = c.of_length(4).into_iter().filter(|cl| cl.cyclic_bumps == 0).collect();
        assert_eq!(proper.len(), 2);
    }

    #[test]
    fn periods_examples() {
        assert_eq!(periods(&cycle(5).unwrap(), 10), Periods { p: Some(5), q: Some(1) });
        assert_eq!(periods(&tree_ball(3, 2).unwrap(), 10), Periods { p: None, q: Some(2) });
        assert_eq!(periods(&complete(4).unwrap(), 10), Periods { p: Some(1), q: Some(1) });
        // degenerate cycle: loop pair, proper circuits of every length
        assert_eq!(periods(&cycle(1).unwrap(), 8).p, Some(1));
    }

    #[test]
    fn bump_scheme_single_bump() {
        let g = edge_graph();
        let e = 0;
        let s = bump_scheme_sum(&g, &[e, g.partner(e)]).unwrap();
        assert_eq!(s, UPoly::u());
    }

    #[test]
    fn bump_scheme_proper_path_is_one() {
        let g = complete(3).unwrap();
        // walk around the triangle, no bumps
        let path = proper_walk(&g, 0, 4);
        assert_eq!(bump_count(&g, &path), 0);
        assert_eq!(bump_scheme_sum(&g, &path).unwrap(), UPoly::one());
    }

    fn proper_walk(g: &Graph, start: usize, len: usize) -> Vec<HalfEdgeId> {
        let mut path = Vec::new();
        let mut v = start;
        for _ in 0..len {
            let e = *g
                .out_edges(v)
                .iter()
                .find(|&&e| path.last().map_or(true, |&p| g.partner(p) != e))
                .unwrap();
            path.push(e);
            v = g.target(e);
        }
        path
    }

    #[test]
    fn bump_scheme_exhaustive_small() {
        for g in [complete(3).unwrap(), cycle(4).unwrap()] {
            for path in all_paths_from(&g, 0, 5) {
                let want_exp = bump_count(&g, &path);
                let got = bump_scheme_sum(&g, &path).unwrap();
                let mut want = vec![rat_int(0); want_exp + 1];
                want[want_exp] = rat_int(1);
                assert_eq!(got, UPoly::new(want), "path {path:?}");
            }
        }
    }

    #[test]
    fn bump_scheme_rejects_non_path() {
        let g = complete(3).unwrap();
        // two half-edges that do not compose
        let e = g.out_edges(0)[0];
        let other = (0..g.vertex_count()).find(|&v| v != g.target(e)).unwrap();
        let f = g.out_edges(other)[0];
        assert!(bump_scheme_sum(&g, &[e, f]).is_err());
    }

    #[test]
    fn distance_census_tree() {
        let g = tree_ball(3, 3).unwrap().as_finite();
        let c = distance_census(&g, 0, 2, None).unwrap();
        // length-2 walks: 3 return to the root, 6 end at distance 2
        assert_eq!(c[2].iter().map(|row| row[0]).sum::<u64>(), 3);
        assert_eq!(c[2].iter().map(|row| row[2]).sum::<u64>(), 6);
    }
}
