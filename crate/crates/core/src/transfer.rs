//! Series computation by transfer-matrix iteration, and the transforms
//! between the plain path series G(t) and the bump-enriched F(u,t).
//!
//! G is computed by repeated sparse matrix-vector products, extracting
//! one coefficient per step; F comes from the labelled transform: every
//! half-edge label is replaced by a series that pre-sums all possible
//! back-and-forth excursions over that edge, after which a plain path
//! count over the new labels yields the bump-enriched count.

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, MarkedGraph};
use crate::series::{rat_string, BivariateSeries, PowerSeries, Rational, SeriesError, UPoly};

#[derive(Debug, Error, PartialEq)]
pub enum TransferError {
    #[error("order {requested} exceeds the faithful horizon {horizon} of this truncation")]
    HorizonExceeded { requested: usize, horizon: usize },
    #[error("labels must assign a weight to every half-edge")]
    BadLabels,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Weights c_e per half-edge; the effective edge label is c_e·t.
#[derive(Clone, Debug)]
pub struct LabelAssignment {
    pub weights: Vec<Rational>,
}

impl LabelAssignment {
    pub fn unit(g: &Graph) -> Self {
        LabelAssignment { weights: vec![Rational::one(); g.half_edge_count()] }
    }

    pub fn from_graph(g: &Graph) -> Self {
        match g.weights() {
            Some(w) => LabelAssignment { weights: w.to_vec() },
            None => LabelAssignment::unit(g),
        }
    }
}

fn check_horizon(g: &Graph, n: usize) -> Result<(), TransferError> {
    if let Some(h) = g.horizon() {
        if n > h {
            return Err(TransferError::HorizonExceeded { requested: n, horizon: h });
        }
    }
    Ok(())
}

fn effective_labels(g: &Graph, labels: Option<&LabelAssignment>) -> Result<Vec<Rational>, TransferError> {
    let w = match labels {
        Some(l) => l.weights.clone(),
        None => LabelAssignment::from_graph(g).weights,
    };
    if w.len() != g.half_edge_count() {
        return Err(TransferError::BadLabels);
    }
    Ok(w)
}

/// Path series: coefficient n is the weighted count of length-n paths
/// from birth to death. Iterated sparse matrix-vector products.
pub fn green_series(g: &MarkedGraph, n: usize, labels: Option<&LabelAssignment>) -> Result<PowerSeries, TransferError> {
    check_horizon(&g.graph, n)?;
    let w = effective_labels(&g.graph, labels)?;
    let gr = &g.graph;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut r = vec![Rational::zero(); gr.vertex_count()];
    r[g.birth] = Rational::one();
    coeffs.push(r[g.death].clone());
    for _ in 1..=n {
        let mut next = vec![Rational::zero(); gr.vertex_count()];
        for e in 0..gr.half_edge_count() {
            let src = gr.source(e);
            if !r[src].is_zero() {
                next[gr.target(e)] += &r[src] * &w[e];
            }
        }
        r = next;
        coeffs.push(r[g.death].clone());
    }
    Ok(PowerSeries::new(coeffs))
}

/// The per-vertex correction factors K_x and the transformed half-edge
/// labels of the enriched-series computation.
#[derive(Clone, Debug)]
pub struct TransformedLabels {
    /// K_x per vertex; constant term 1.
    pub k: Vec<BivariateSeries>,
    /// Transformed label per half-edge; zero constant term.
    pub labels: Vec<BivariateSeries>,
}

/// Build K_x and the transformed labels for the given weights:
///   K_x = (1 - sum_{e from x} (u-1) W_e / (1 - (u-1)^2 W_e))^{-1}
///   label'_e = c_e t / (1 - (u-1)^2 W_e) · K_{target(e)}
/// with W_e = c_e c_{partner(e)} t^2.
pub fn transformed_labels(g: &Graph, weights: &[Rational], n: usize) -> Result<TransformedLabels, TransferError> {
    let u_minus_1 = UPoly::from_i64(&[-1, 1]);
    let um1_sq = u_minus_1.mul(&u_minus_1);
    // per half-edge: W_e at t^2, and 1/(1-(u-1)^2 W_e)
    let mut excursion = Vec::with_capacity(g.half_edge_count());
    for e in 0..g.half_edge_count() {
        let w_e = &weights[e] * &weights[g.partner(e)];
        let denom = BivariateSeries::one(n).sub(&BivariateSeries::monomial(um1_sq.scale(&w_e), 2, n));
        excursion.push(denom.reciprocal()?);
    }
    let mut k = Vec::with_capacity(g.vertex_count());
    for x in 0..g.vertex_count() {
        let mut sum = BivariateSeries::zero(n);
        for e in g.out_edges(x) {
            let w_e = &weights[e] * &weights[g.partner(e)];
            let num = BivariateSeries::monomial(u_minus_1.scale(&w_e), 2, n);
            sum = sum.add(&num.mul(&excursion[e]));
        }
        k.push(BivariateSeries::one(n).sub(&sum).reciprocal()?);
    }
    let mut labels = Vec::with_capacity(g.half_edge_count());
    for e in 0..g.half_edge_count() {
        let lead = BivariateSeries::monomial(UPoly::constant(weights[e].clone()), 1, n);
        labels.push(lead.mul(&excursion[e]).mul(&k[g.target(e)]));
    }
    Ok(TransformedLabels { k, labels })
}

fn series_matvec_sum(g: &MarkedGraph, labels: &[BivariateSeries], n: usize) -> BivariateSeries {
    let gr = &g.graph;
    let mut total = BivariateSeries::zero(n);
    let mut r: Vec<BivariateSeries> = vec![BivariateSeries::zero(n); gr.vertex_count()];
    r[g.birth] = BivariateSeries::one(n);
    total = total.add(&r[g.death]);
    // every label has zero constant term, so n steps exhaust order n
    for _ in 1..=n {
        let mut next = vec![BivariateSeries::zero(n); gr.vertex_count()];
        for e in 0..gr.half_edge_count() {
            let src = gr.source(e);
            if r[src].coeffs().iter().all(|c| c.is_zero()) {
                continue;
            }
            let t = gr.target(e);
            next[t] = next[t].add(&r[src].mul(&labels[e]));
        }
        r = next;
        total = total.add(&r[g.death]);
    }
    total
}

/// Enriched series F(u,t): paths counted by length and bump count,
/// computed through the transformed-label system rather than by
/// enumeration.
pub fn enriched_series(g: &MarkedGraph, n: usize, labels: Option<&LabelAssignment>) -> Result<BivariateSeries, TransferError> {
    check_horizon(&g.graph, n)?;
    let w = effective_labels(&g.graph, labels)?;
    let t = transformed_labels(&g.graph, &w, n)?;
    let green = series_matvec_sum(g, &t.labels, n);
    Ok(t.k[g.birth].mul(&green).into_strict())
}

/// Both sides of the labelled transform, computed independently: lhs by
/// weighted brute-force enumeration, rhs through K_birth · G(transformed
/// labels).
#[derive(Clone, Debug)]
pub struct LabelledTransformReport {
    pub transformed: TransformedLabels,
    pub lhs: BivariateSeries,
    pub rhs: BivariateSeries,
}

impl LabelledTransformReport {
    pub fn agree(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "agree": self.agree(),
        })
    }
}

pub fn labelled_transform(g: &MarkedGraph, labels: &LabelAssignment, n: usize) -> Result<LabelledTransformReport, TransferError> {
    check_horizon(&g.graph, n)?;
    let weighted = g.graph.with_weights(labels.weights.clone()).map_err(|_| TransferError::BadLabels)?;
    let marked = MarkedGraph::new(weighted, g.birth, g.death).map_err(|_| TransferError::BadLabels)?;
    let lhs = crate::enumerate::weighted_path_series(&marked, n, None)
        .map_err(|_| TransferError::BadLabels)?;
    let t = transformed_labels(&g.graph, &labels.weights, n)?;
    let green = series_matvec_sum(g, &t.labels, n);
    let rhs = t.k[g.birth].mul(&green);
    Ok(LabelledTransformReport { transformed: t, lhs, rhs })
}

/// Recover F(u,t) of a d-regular graph from its G(t):
///   F(1-u,t)/(1-u^2 t^2) = G(t/(1+u(d-u)t^2))/(1+u(d-u)t^2),
/// assembled as stated, then the substitution u -> 1-u is undone.
pub fn f_from_g(g_series: &PowerSeries, d: usize, n: usize) -> Result<BivariateSeries, TransferError> {
    let g_series = g_series.truncate(n);
    // w = 1 + u(d-u) t^2
    let du = UPoly::new(vec![Rational::zero(), Rational::from_integer((d as i64).into()), -Rational::one()]);
    let w = BivariateSeries::one(n).add(&BivariateSeries::monomial(du, 2, n));
    let w_inv = w.reciprocal()?;
    let subst = w_inv.shift_up(1); // t / (1 + u(d-u) t^2)
    let rhs = BivariateSeries::from_univariate(&g_series).compose(&subst)?.mul(&w_inv);
    // multiply by 1 - u^2 t^2 and flip u -> 1-u
    let u_sq = UPoly::new(vec![Rational::zero(), Rational::zero(), Rational::one()]);
    let factor = BivariateSeries::one(n).sub(&BivariateSeries::monomial(u_sq, 2, n));
    Ok(rhs.mul(&factor).flip_u().into_strict())
}

/// Recover G(z) of a d-regular graph from F(u,t) at a fixed rational u.
/// With c = (1-u)(d-1+u), s = sqrt(1-4cz^2) and phi = (1-s)/(2cz):
///   G(z) = (1 + c phi^2) / (1 - (1-u)^2 phi^2) · F(u, phi),
/// which inverts the main identity's substitution z = t/(1+ct^2). At
/// u = 1 the substitution degenerates and G = F(1,·) is returned
/// directly.
pub fn g_from_f(f: &BivariateSeries, d: usize, u0: &Rational, n: usize) -> Result<PowerSeries, TransferError> {
    if u0.is_one() {
        return Ok(f.eval_u(u0).truncate(n));
    }
    let dd = Rational::from_integer((d as i64).into());
    let c = (Rational::one() - u0) * (&dd - Rational::one() + u0);
    if c.is_zero() {
        return Err(TransferError::Series(SeriesError::SingularSubstitution));
    }
    // s = sqrt(1 - 4c z^2), computed one order higher so the division
    // by z below keeps full precision
    let m = n + 1;
    let mut inner = PowerSeries::one(m);
    inner = inner.sub(&PowerSeries::t(m).mul(&PowerSeries::t(m)).scale(&(Rational::from_integer(4.into()) * &c)));
    let s = inner.sqrt()?;
    // phi = (1 - s) / (2c z): even numerator over z gives an odd series
    let phi = PowerSeries::one(m)
        .sub(&s)
        .shift_down(1)
        .scale(&(Rational::one() / (Rational::from_integer(2.into()) * &c)));
    let f_u = f.eval_u(u0).truncate(n.min(f.order()));
    let phi = phi.truncate(n);
    let composed = f_u.compose(&phi)?;
    // prefactor (1 + c phi^2) / (1 - (1-u)^2 phi^2)
    let phi_sq = phi.mul(&phi);
    let one_minus_u_sq = (Rational::one() - u0) * (Rational::one() - u0);
    let num = PowerSeries::one(n).add(&phi_sq.scale(&c));
    let den = PowerSeries::one(n).sub(&phi_sq.scale(&one_minus_u_sq));
    let pre = num.mul(&den.reciprocal()?);
    Ok(pre.mul(&composed))
}

// ---------------------------------------------------------------------------
// Rationality check
// ---------------------------------------------------------------------------

/// Fraction-free Bareiss determinant over polynomials (exact division at
/// every step keeps entries polynomial).
fn bareiss_det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut sign = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division must be exact");
            }
            m[i][k] = UPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// det(I - A t) for the weighted adjacency matrix, as a polynomial in t.
pub fn characteristic_denominator(g: &Graph, labels: Option<&LabelAssignment>) -> Result<UPoly, TransferError> {
    let w = effective_labels(g, labels)?;
    let nv = g.vertex_count();
    // entries are polynomials in t of degree <= 1
    let mut m = vec![vec![UPoly::zero(); nv]; nv];
    for x in 0..nv {
        m[x][x] = UPoly::one();
    }
    for e in 0..g.half_edge_count() {
        let (x, y) = (g.source(e), g.target(e));
        m[x][y] = m[x][y].sub(&UPoly::new(vec![Rational::zero(), w[e].clone()]));
    }
    Ok(bareiss_det(m))
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    /// det(I - A t), coefficients indexed by t-degree.
    pub denominator: UPoly,
    /// G(t) · det(I - A t) truncated at the checked order.
    pub numerator_series: PowerSeries,
    /// First coefficient index >= |V| where the product fails to vanish.
    pub first_failure: Option<usize>,
}

impl RecurrenceReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "denominator": self.denominator.coeffs().iter().map(rat_string).collect::<Vec<_>>(),
            "ok": self.ok(),
            "first_failure": self.first_failure,
        })
    }
}

/// Check that the path series satisfies the linear recurrence with
/// characteristic polynomial det(I - A t): their product must be a
/// polynomial of degree below the vertex count.
pub fn linear_recurrence_check(g: &MarkedGraph, n: usize) -> Result<RecurrenceReport, TransferError> {
    let denominator = characteristic_denominator(&g.graph, None)?;
    let green = green_series(g, n, None)?;
    let den_series = PowerSeries::new(
        (0..=n).map(|i| denominator.coeff(i)).collect(),
    );
    let product = green.mul(&den_series);
    let first_failure = (g.graph.vertex_count()..=n).find(|&i| !product.coeff(i).is_zero());
    Ok(RecurrenceReport { denominator, numerator_series: product, first_failure })
}
