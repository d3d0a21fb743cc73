//! The generalized Ihara-Selberg zeta function of a finite graph,
//! computed three independent ways: as an edge-matrix determinant, as a
//! factored vertex-matrix determinant, and as the product over primitive
//! cycles. Their agreement is the content of the generalized Bass
//! theorem and is checked exactly.

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::enumerate::{cycle_census, EnumError};
use crate::graph::Graph;
use crate::series::{rat_string, BivariateSeries, Rational, SeriesError, UPoly};

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

// ---------------------------------------------------------------------------
// Bivariate polynomials: dense in t, with u-polynomial coefficients
// ---------------------------------------------------------------------------

/// Polynomial in u and t; coeffs[j] is the u-polynomial at t^j.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: Vec<UPoly>,
}

impl std::fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({c:?})t^{j}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<UPoly>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        BiPoly::new(vec![UPoly::one()])
    }

    /// p(u) · t^j
    pub fn monomial(p: UPoly, j: usize) -> Self {
        let mut c = vec![UPoly::zero(); j + 1];
        c[j] = p;
        BiPoly::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// t-degree; -1 for zero.
    pub fn t_degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, j: usize) -> UPoly {
        self.coeffs.get(j).cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        BiPoly::new((0..n).map(|j| self.coeff(j).add(&other.coeff(j))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        BiPoly::new((0..n).map(|j| self.coeff(j).sub(&other.coeff(j))).collect())
    }

    pub fn neg(&self) -> Self {
        BiPoly { coeffs: self.coeffs.iter().map(UPoly::neg).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![UPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division (long division in t over the rational-function
    /// field in u, with exactness checked); None when not divisible.
    pub fn div_exact(&self, other: &Self) -> Option<BiPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if self.t_degree() < other.t_degree() {
            return None;
        }
        let d = other.coeffs.len() - 1;
        let lead = &other.coeffs[d];
        let mut rem = self.coeffs.clone();
        let mut q = vec![UPoly::zero(); rem.len() - d];
        for k in (0..q.len()).rev() {
            if rem[k + d].is_zero() {
                continue;
            }
            let c = rem[k + d].div_exact(lead)?;
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&b.mul(&c));
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(BiPoly::new(q))
    }

    /// Substitute a rational for u, leaving a polynomial in t (as UPoly
    /// whose variable is read as t).
    pub fn eval_u(&self, u: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c.eval(u)).collect())
    }

    /// Truncate into a bivariate series of the given order.
    pub fn to_series(&self, order: usize) -> BivariateSeries {
        BivariateSeries::new_relaxed((0..=order).map(|j| self.coeff(j)).collect())
    }

    /// JSON list of monomials [{"u":i,"t":j,"coeff":"p/q"}] sorted by (j,i).
    pub fn to_json(&self) -> Value {
        let mut monomials = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, r) in c.coeffs().iter().enumerate() {
                if !r.is_zero() {
                    monomials.push(json!({"u": i, "t": j, "coeff": rat_string(r)}));
                }
            }
        }
        Value::Array(monomials)
    }
}

/// Fraction-free Bareiss determinant; every division is exact inside the
/// polynomial ring.
pub fn bareiss_det(mut m: Vec<Vec<BiPoly>>) -> Result<BiPoly, ZetaError> {
    let n = m.len();
    if n == 0 {
        return Ok(BiPoly::one());
    }
    let mut sign = false;
    let mut prev = BiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(BiPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| ZetaError::Inconsistent("Bareiss division not exact".into()))?;
            }
            m[i][k] = BiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

// ---------------------------------------------------------------------------
// Edge matrices
// ---------------------------------------------------------------------------

/// The edge-adjacency matrix B, the involution matrix J, the vertex
/// adjacency A and degree matrix D, plus the counts of self-inverse
/// half-edges (n) and 2-element involution orbits (m).
#[derive(Clone, Debug)]
pub struct EdgeMatrices {
    pub b: Vec<Vec<u64>>,
    pub j: Vec<Vec<u64>>,
    pub a: Vec<Vec<u64>>,
    pub d: Vec<Vec<u64>>,
    pub n_selfinv: usize,
    pub m_pairs: usize,
}

pub fn edge_matrices(g: &Graph) -> EdgeMatrices {
    let ne = g.half_edge_count();
    let nv = g.vertex_count();
    let mut b = vec![vec![0u64; ne]; ne];
    let mut j = vec![vec![0u64; ne]; ne];
    for e in 0..ne {
        j[e][g.partner(e)] = 1;
        for f in 0..ne {
            if g.target(e) == g.source(f) {
                b[e][f] = 1;
            }
        }
    }
    let a = g.adjacency();
    let mut d = vec![vec![0u64; nv]; nv];
    for x in 0..nv {
        d[x][x] = g.degree(x) as u64;
    }
    let n_selfinv = (0..ne).filter(|&e| g.is_self_inverse(e)).count();
    EdgeMatrices { b, j, a, d, n_selfinv, m_pairs: (ne - n_selfinv) / 2 }
}

// ---------------------------------------------------------------------------
// The three zeta computations
// ---------------------------------------------------------------------------

/// 1/zeta as det(I - (B - (1-u)J) t) over half-edge indices.
pub fn zeta_inverse_det(g: &Graph) -> Result<BiPoly, ZetaError> {
    let em = edge_matrices(g);
    let ne = g.half_edge_count();
    let one_minus_u = UPoly::from_i64(&[1, -1]);
    let mut m = vec![vec![BiPoly::zero(); ne]; ne];
    for e in 0..ne {
        for f in 0..ne {
            let mut entry = UPoly::zero();
            if em.b[e][f] == 1 {
                entry = entry.sub(&UPoly::one());
            }
            if em.j[e][f] == 1 {
                entry = entry.add(&one_minus_u);
            }
            m[e][f] = BiPoly::monomial(entry, 1);
            if e == f {
                m[e][f] = m[e][f].add(&BiPoly::one());
            }
        }
    }
    bareiss_det(m)
}

/// 1/zeta in factored form:
///   (1+(1-u)t)^n (1-(1-u)^2 t^2)^(m-|V|) det(I - At + (1-u)(D-(1-u)I)t^2),
/// expanded to a polynomial. When m < |V| the negative power is handled
/// by exact division, whose failure would contradict the theorem and is
/// reported loudly.
pub fn zeta_inverse_factored(g: &Graph) -> Result<BiPoly, ZetaError> {
    let em = edge_matrices(g);
    let nv = g.vertex_count();
    let one_minus_u = UPoly::from_i64(&[1, -1]);
    let mut m = vec![vec![BiPoly::zero(); nv]; nv];
    for x in 0..nv {
        for y in 0..nv {
            let mut p = BiPoly::zero();
            if x == y {
                p = p.add(&BiPoly::one());
            }
            if em.a[x][y] != 0 {
                p = p.sub(&BiPoly::monomial(UPoly::constant(Rational::from_integer((em.a[x][y] as i64).into())), 1));
            }
            if x == y {
                // (1-u)(deg(x) - (1-u)) t^2
                let q = one_minus_u.mul(&UPoly::constant(Rational::from_integer((em.d[x][x] as i64).into())).sub(&one_minus_u));
                p = p.add(&BiPoly::monomial(q, 2));
            }
            m[x][y] = p;
        }
    }
    let det_p = bareiss_det(m)?;
    let loop_factor = BiPoly::one().add(&BiPoly::monomial(one_minus_u.clone(), 1)).pow(em.n_selfinv);
    let pair_poly = BiPoly::one().sub(&BiPoly::monomial(one_minus_u.mul(&one_minus_u), 2));
    let with_loops = det_p.mul(&loop_factor);
    if em.m_pairs >= nv {
        Ok(with_loops.mul(&pair_poly.pow(em.m_pairs - nv)))
    } else {
        with_loops.div_exact(&pair_poly.pow(nv - em.m_pairs)).ok_or_else(|| {
            ZetaError::Inconsistent(
                "factored zeta: division by (1-(1-u)^2 t^2)^(|V|-m) is not exact".into(),
            )
        })
    }
}

/// Truncated expansion of the product over primitive cycles of
/// 1/(1 - u^cbc t^len), by direct enumeration.
pub fn zeta_from_cycles(g: &Graph, order: usize, budget: Option<f64>) -> Result<BivariateSeries, ZetaError> {
    let census = cycle_census(g, order, budget)?;
    let mut acc = BivariateSeries::one(order);
    for class in &census.classes {
        let len = class.edges.len();
        let mut up = vec![Rational::zero(); class.cyclic_bumps + 1];
        up[class.cyclic_bumps] = Rational::one();
        let factor = BivariateSeries::one(order).sub(&BivariateSeries::monomial(UPoly::new(up), len, order));
        acc = acc.mul(&factor.reciprocal()?);
    }
    Ok(acc)
}

/// Expand the reciprocal of a zeta-inverse polynomial as a series.
pub fn zeta_series_from_poly(p: &BiPoly, order: usize) -> Result<BivariateSeries, ZetaError> {
    Ok(p.to_series(order).reciprocal()?)
}
