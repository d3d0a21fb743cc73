//! Exact truncated formal power series over the rationals.
//!
//! Everything downstream (transfer matrices, zeta functions, product
//! constructions) is built on the arithmetic in this module, so all
//! coefficients are exact `BigRational`s. Floating point only appears in
//! [`PowerSeries::estimate_radius`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

/// Exact coefficient type: arbitrary-precision reduced rationals.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "p/q" or "p" into a rational.
pub fn rat_parse(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.trim().parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// Render a rational as "p/q" (denominator always printed).
pub fn rat_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("substituted series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("square root requires constant term 1")]
    SqrtConstantNotOne,
    #[error("compositional inverse requires f(0)=0 and f'(0)!=0")]
    InversePrecondition,
    #[error("radius estimation needs at least 8 nonzero coefficients, found {0}")]
    TooFewNonzero(usize),
    #[error("radius estimation requires nonnegative coefficients")]
    NegativeCoefficient,
    #[error("substitution parameter makes the series singular")]
    SingularSubstitution,
    #[error("malformed series JSON: {0}")]
    BadJson(String),
}

// ---------------------------------------------------------------------------
// Univariate series
// ---------------------------------------------------------------------------

/// Truncated power series in `t` with exact rational coefficients.
///
/// `coeffs` always has exactly `order + 1` entries. Binary operations on
/// series of different orders re-truncate to the smaller order and set
/// the `retruncated` diagnostic on the result.
#[derive(Clone)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    retruncated: bool,
}

impl PartialEq for PowerSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for PowerSeries {}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "PowerSeries[{}]", terms.join(", "))
    }
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the t^0 coefficient");
        PowerSeries { coeffs, retruncated: false }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::new(vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut v = vec![Rational::zero(); order + 1];
        v[0] = c;
        PowerSeries::new(v)
    }

    /// The series `t`, truncated at `order`.
    pub fn t(order: usize) -> Self {
        let mut v = vec![Rational::zero(); order + 1];
        if order >= 1 {
            v[1] = Rational::one();
        }
        PowerSeries::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        PowerSeries::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when a binary operation silently dropped higher-order terms.
    pub fn was_retruncated(&self) -> bool {
        self.retruncated
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.truncate(order + 1);
        while v.len() < order + 1 {
            v.push(Rational::zero());
        }
        PowerSeries { coeffs: v, retruncated: self.retruncated || order < self.order() }
    }

    fn common_order(&self, other: &Self) -> (usize, bool) {
        let n = self.order().min(other.order());
        (n, self.order() != other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (n, cut) = self.common_order(other);
        let coeffs = (0..=n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        PowerSeries { coeffs, retruncated: cut || self.retruncated || other.retruncated }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (n, cut) = self.common_order(other);
        let coeffs = (0..=n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        PowerSeries { coeffs, retruncated: cut || self.retruncated || other.retruncated }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), retruncated: self.retruncated }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect(), retruncated: self.retruncated }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, cut) = self.common_order(other);
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                let p = self.coeff(i) * other.coeff(j);
                coeffs[i + j] += p;
            }
        }
        PowerSeries { coeffs, retruncated: cut || self.retruncated || other.retruncated }
    }

    /// Multiply by `t^k`, discarding what overflows the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                coeffs[i + k] = self.coeff(i);
            }
        }
        PowerSeries { coeffs, retruncated: self.retruncated }
    }

    /// Divide by `t^k`; the dropped low coefficients must be zero.
    /// The order shrinks by `k`.
    /// Multiply by t^k, growing the order by k so no terms fall off.
    pub fn shift_up_extend(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs, retruncated: self.retruncated }
    }

    pub fn shift_down(&self, k: usize) -> Self {
        assert!(self.coeffs[..k].iter().all(|c| c.is_zero()), "shift_down drops nonzero terms");
        PowerSeries { coeffs: self.coeffs[k..].to_vec(), retruncated: self.retruncated }
    }

    /// Composition f(g(t)); `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeff(0).is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let (n, cut) = self.common_order(g);
        let g = g.truncate(n);
        // Horner from the top coefficient down.
        let mut acc = PowerSeries::constant(self.coeff(n), n);
        for i in (0..n).rev() {
            acc = acc.mul(&g).add(&PowerSeries::constant(self.coeff(i), n));
        }
        acc.retruncated = cut || self.retruncated || g.retruncated;
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        if self.coeff(0).is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let inv0 = Rational::one() / self.coeff(0);
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += self.coeff(j) * out[k - j].clone();
            }
            out[k] = -s * inv0.clone();
        }
        Ok(PowerSeries { coeffs: out, retruncated: self.retruncated })
    }

    /// Principal square root (constant term 1), by Newton iteration.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if self.coeff(0) != Rational::one() {
            return Err(SeriesError::SqrtConstantNotOne);
        }
        let n = self.order();
        let half = rat(1, 2);
        let mut y = PowerSeries::one(n);
        let mut correct = 0usize;
        while correct < n {
            // y <- (y + f/y) / 2 doubles the number of correct terms.
            let next = y.add(&self.mul(&y.reciprocal()?)).scale(&half);
            y = next;
            correct = correct * 2 + 1;
        }
        y.retruncated = self.retruncated;
        Ok(y)
    }

    /// Compositional inverse: the series g with f(g(t)) = g(f(t)) = t.
    pub fn comp_inverse(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(SeriesError::InversePrecondition);
        }
        let n = self.order();
        let f1_inv = Rational::one() / self.coeff(1);
        // tail = f - f1 t; iterate g <- (t - tail(g)) / f1, gaining one
        // order of agreement per pass.
        let mut tail = self.clone();
        tail.coeffs[1] = Rational::zero();
        let t = PowerSeries::t(n);
        let mut g = t.scale(&f1_inv);
        for _ in 0..n {
            g = t.sub(&tail.compose(&g)?).scale(&f1_inv);
        }
        g.retruncated = self.retruncated;
        Ok(g)
    }

    /// Borel transform: divide coefficient n by n!.
    pub fn borel(&self) -> Self {
        let mut fact = BigInt::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i > 0 {
                    fact *= BigInt::from(i);
                }
                c / Rational::from_integer(fact.clone())
            })
            .collect();
        PowerSeries { coeffs, retruncated: self.retruncated }
    }

    /// Laplace transform: multiply coefficient n by n!.
    pub fn laplace(&self) -> Self {
        let mut fact = BigInt::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i > 0 {
                    fact *= BigInt::from(i);
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect();
        PowerSeries { coeffs, retruncated: self.retruncated }
    }

    /// Binomial (exponential) convolution: c_n = sum_k C(n,k) a_k b_{n-k}.
    pub fn binomial_product(&self, other: &Self) -> Self {
        let (n, cut) = self.common_order(other);
        let mut coeffs = vec![Rational::zero(); n + 1];
        for m in 0..=n {
            let mut binom = BigInt::one();
            let mut s = Rational::zero();
            for k in 0..=m {
                if k > 0 {
                    binom = &binom * BigInt::from(m - k + 1) / BigInt::from(k);
                }
                s += self.coeff(k) * other.coeff(m - k) * Rational::from_integer(binom.clone());
            }
            coeffs[m] = s;
        }
        PowerSeries { coeffs, retruncated: cut || self.retruncated || other.retruncated }
    }

    /// Hadamard (coefficient-wise) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        let (n, cut) = self.common_order(other);
        let coeffs = (0..=n).map(|i| self.coeff(i) * other.coeff(i)).collect();
        PowerSeries { coeffs, retruncated: cut || self.retruncated || other.retruncated }
    }

    /// Keep even coefficients, zero the odd ones: (f(t)+f(-t))/2.
    pub fn even_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { Rational::zero() })
            .collect();
        PowerSeries { coeffs, retruncated: self.retruncated }
    }

    /// Numeric estimate of the radius of convergence 1/limsup c_n^{1/n}.
    pub fn estimate_radius(&self, method: RadiusMethod) -> Result<RadiusEstimate, SeriesError> {
        if self.coeffs.iter().any(|c| c.is_negative()) {
            return Err(SeriesError::NegativeCoefficient);
        }
        let nonzero = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        if nonzero < 8 {
            return Err(SeriesError::TooFewNonzero(nonzero));
        }
        let vals: Vec<f64> = self.coeffs.iter().map(rational_to_f64).collect();
        let even = subsequence_growth(&vals, 0, method);
        let odd = subsequence_growth(&vals, 1, method);
        // Bipartite graphs have all odd coefficients zero; use whichever
        // parity carries data, the larger growth when both do.
        let growth = match (even, odd) {
            (Some(e), Some(o)) => e.max(o),
            (Some(e), None) => e,
            (None, Some(o)) => o,
            (None, None) => return Err(SeriesError::TooFewNonzero(nonzero)),
        };
        Ok(RadiusEstimate {
            radius: 1.0 / growth,
            growth,
            even_growth: even,
            odd_growth: odd,
            method,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(rat_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| SeriesError::BadJson("missing order".into()))? as usize;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| SeriesError::BadJson("missing coeffs".into()))?;
        if arr.len() != order + 1 {
            return Err(SeriesError::BadJson("coeffs length disagrees with order".into()));
        }
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let s = c.as_str().ok_or_else(|| SeriesError::BadJson("coefficient not a string".into()))?;
            coeffs.push(rat_parse(s).ok_or_else(|| SeriesError::BadJson(format!("bad rational {s:?}")))?);
        }
        Ok(PowerSeries::new(coeffs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusMethod {
    /// Ratios c_{n}/c_{n-step} with one step of Richardson extrapolation.
    Ratio,
    /// Plain root test c_n^{1/n} at the top of the series.
    Root,
}

#[derive(Clone, Copy, Debug)]
pub struct RadiusEstimate {
    pub radius: f64,
    pub growth: f64,
    pub even_growth: Option<f64>,
    pub odd_growth: Option<f64>,
    pub method: RadiusMethod,
}

fn rational_to_f64(r: &Rational) -> f64 {
    // Scale down by a common power of two so huge numerators stay finite.
    let bits = r.numer().bits().max(r.denom().bits());
    if bits <= 900 {
        let n = big_to_f64(r.numer());
        let d = big_to_f64(r.denom());
        n / d
    } else {
        let shift = bits - 512;
        let n = big_to_f64(&(r.numer() >> shift));
        let d = big_to_f64(&(r.denom() >> shift));
        n / d
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
}

/// Growth estimate along coefficients with index congruent to `parity` mod 2.
fn subsequence_growth(vals: &[f64], parity: usize, method: RadiusMethod) -> Option<f64> {
    let idx: Vec<usize> = (0..vals.len()).filter(|i| i % 2 == parity && vals[*i] > 0.0).collect();
    if idx.len() < 4 {
        return None;
    }
    match method {
        RadiusMethod::Root => {
            let i = *idx.last().unwrap();
            Some(vals[i].powf(1.0 / i as f64))
        }
        RadiusMethod::Ratio => {
            // Per-index growth: (c_{i}/c_{j})^(1/(i-j)) along the subsequence,
            // then Richardson-extrapolate the O(1/n) bias away.
            let mut ratios = Vec::new();
            for w in idx.windows(2) {
                let (j, i) = (w[0], w[1]);
                ratios.push((vals[i] / vals[j]).powf(1.0 / (i - j) as f64));
            }
            if ratios.len() < 3 {
                return Some(*ratios.last()?);
            }
            let k = ratios.len() - 1;
            let extrapolated = k as f64 * ratios[k] - (k as f64 - 1.0) * ratios[k - 1];
            Some(extrapolated)
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials in u
// ---------------------------------------------------------------------------

/// Polynomial in `u` with rational coefficients; trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*u"),
                _ => format!("{c}*u^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// The polynomial `u`.
    pub fn u() -> Self {
        UPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = UPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute another polynomial for `u`.
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// The map u -> 1-u.
    pub fn flip(&self) -> UPoly {
        self.compose(&UPoly::from_i64(&[1, -1]))
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<UPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        if self.degree() < other.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let d = other.coeffs.len() - 1;
        let lead = other.coeffs[d].clone();
        let mut q = vec![Rational::zero(); rem.len() - d];
        for k in (0..q.len()).rev() {
            let c = rem[k + d].clone() / lead.clone();
            q[k] = c.clone();
            for (j, b) in other.coeffs.iter().enumerate() {
                let sub = b * &c;
                rem[k + j] -= sub;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UPoly::new(q))
    }
}

// ---------------------------------------------------------------------------
// Bivariate series: polynomials in u per t-degree
// ---------------------------------------------------------------------------

/// Truncated series in `t` whose coefficients are polynomials in `u`.
///
/// The structural invariant deg_u(coeffs[n]) <= n holds for every series
/// describing bump-counted paths (a path cannot have more bumps than
/// edges). A handful of auxiliary series (such as the tree series `F'`,
/// whose empty circuit is counted as `u` by convention) legitimately
/// violate it; those are built with [`BivariateSeries::new_relaxed`] and
/// carry a `relaxed` flag that propagates through arithmetic.
#[derive(Clone)]
pub struct BivariateSeries {
    coeffs: Vec<UPoly>,
    relaxed: bool,
    retruncated: bool,
}

impl PartialEq for BivariateSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for BivariateSeries {}

impl fmt::Debug for BivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| format!("({c:?})")).collect();
        write!(f, "BivariateSeries[{}]", terms.join(", "))
    }
}

impl BivariateSeries {
    pub fn new(coeffs: Vec<UPoly>) -> Self {
        assert!(!coeffs.is_empty());
        let s = BivariateSeries { coeffs, relaxed: false, retruncated: false };
        s.assert_bump_bound();
        s
    }

    /// Construct without the deg_u <= t-degree check.
    pub fn new_relaxed(coeffs: Vec<UPoly>) -> Self {
        assert!(!coeffs.is_empty());
        BivariateSeries { coeffs, relaxed: true, retruncated: false }
    }

    /// Panics if deg_u exceeds the t-degree anywhere.
    pub fn assert_bump_bound(&self) {
        if self.relaxed {
            return;
        }
        for (n, c) in self.coeffs.iter().enumerate() {
            assert!(
                c.degree() <= n as i64,
                "u-degree {} exceeds t-degree {n}",
                c.degree()
            );
        }
    }

    pub fn satisfies_bump_bound(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(n, c)| c.degree() <= n as i64)
    }

    pub fn zero(order: usize) -> Self {
        BivariateSeries { coeffs: vec![UPoly::zero(); order + 1], relaxed: false, retruncated: false }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(UPoly::one(), order)
    }

    pub fn constant(c: UPoly, order: usize) -> Self {
        let relaxed = c.degree() > 0;
        let mut v = vec![UPoly::zero(); order + 1];
        v[0] = c;
        BivariateSeries { coeffs: v, relaxed, retruncated: false }
    }

    /// The single term p(u)·t^n.
    pub fn monomial(p: UPoly, n: usize, order: usize) -> Self {
        let relaxed = p.degree() > n as i64;
        let mut v = vec![UPoly::zero(); order + 1];
        if n <= order {
            v[n] = p;
        }
        BivariateSeries { coeffs: v, relaxed, retruncated: false }
    }

    /// Re-assert the bump bound after relaxed intermediates: panics if
    /// deg_u exceeds the t-degree anywhere, otherwise returns the series
    /// with strict checking re-enabled.
    pub fn into_strict(mut self) -> Self {
        self.relaxed = false;
        self.assert_bump_bound();
        self
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut v = vec![UPoly::zero(); order + 1];
        if order >= 1 {
            v[1] = UPoly::one();
        }
        BivariateSeries { coeffs: v, relaxed: false, retruncated: false }
    }

    /// Lift a univariate series (no u-dependence).
    pub fn from_univariate(f: &PowerSeries) -> Self {
        BivariateSeries {
            coeffs: f.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect(),
            relaxed: false,
            retruncated: f.was_retruncated(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn was_retruncated(&self) -> bool {
        self.retruncated
    }

    pub fn coeff(&self, n: usize) -> UPoly {
        self.coeffs.get(n).cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    /// The coefficient of u^m t^n.
    pub fn coeff_um_tn(&self, m: usize, n: usize) -> Rational {
        self.coeff(n).coeff(m)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.truncate(order + 1);
        while v.len() < order + 1 {
            v.push(UPoly::zero());
        }
        BivariateSeries { coeffs: v, relaxed: self.relaxed, retruncated: self.retruncated || order < self.order() }
    }

    fn merge_flags(&self, other: &Self, cut: bool) -> (bool, bool) {
        (self.relaxed || other.relaxed, cut || self.retruncated || other.retruncated)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let (relaxed, retruncated) = self.merge_flags(other, self.order() != other.order());
        let coeffs = (0..=n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        BivariateSeries { coeffs, relaxed, retruncated }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let (relaxed, retruncated) = self.merge_flags(other, self.order() != other.order());
        let coeffs = (0..=n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        BivariateSeries { coeffs, relaxed, retruncated }
    }

    pub fn neg(&self) -> Self {
        BivariateSeries {
            coeffs: self.coeffs.iter().map(UPoly::neg).collect(),
            relaxed: self.relaxed,
            retruncated: self.retruncated,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let (relaxed, retruncated) = self.merge_flags(other, self.order() != other.order());
        let mut coeffs = vec![UPoly::zero(); n + 1];
        for i in 0..=n {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(&other.coeff(j)));
            }
        }
        BivariateSeries { coeffs, relaxed, retruncated }
    }

    pub fn scale_upoly(&self, c: &UPoly) -> Self {
        BivariateSeries {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            relaxed: self.relaxed || c.degree() > 0,
            retruncated: self.retruncated,
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![UPoly::zero(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                coeffs[i + k] = self.coeff(i);
            }
        }
        BivariateSeries { coeffs, relaxed: self.relaxed, retruncated: self.retruncated }
    }

    /// Substitute a bivariate series with zero t-constant term for `t`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeff(0).is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = BivariateSeries::constant(self.coeff(n), n);
        for i in (0..n).rev() {
            acc = acc.mul(&g).add(&BivariateSeries::constant(self.coeff(i), n));
        }
        let (relaxed, retruncated) = self.merge_flags(&g, false);
        acc.relaxed = relaxed || acc.relaxed;
        acc.retruncated = retruncated || acc.retruncated;
        Ok(acc)
    }

    /// Multiplicative inverse; requires a nonzero constant rational term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeff(0);
        if !c0.is_constant() || c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = UPoly::constant(Rational::one() / c0.coeff(0));
        let n = self.order();
        let mut out = vec![UPoly::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = UPoly::zero();
            for j in 1..=k {
                s = s.add(&self.coeff(j).mul(&out[k - j]));
            }
            out[k] = s.neg().mul(&inv0);
        }
        Ok(BivariateSeries { coeffs: out, relaxed: self.relaxed, retruncated: self.retruncated })
    }

    /// Principal square root (constant term 1), by Newton iteration.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if self.coeff(0) != UPoly::one() {
            return Err(SeriesError::SqrtConstantNotOne);
        }
        let n = self.order();
        let half = UPoly::constant(rat(1, 2));
        let mut y = BivariateSeries::one(n);
        y.relaxed = self.relaxed;
        let mut correct = 0usize;
        while correct < n {
            y = y.add(&self.mul(&y.reciprocal()?)).scale_upoly(&half);
            correct = correct * 2 + 1;
        }
        Ok(y)
    }

    /// Substitute a rational for u, leaving a univariate series.
    pub fn eval_u(&self, u: &Rational) -> PowerSeries {
        let mut out = PowerSeries::new(self.coeffs.iter().map(|c| c.eval(u)).collect());
        out.retruncated = self.retruncated;
        out
    }

    /// The substitution u -> 1-u, applied to every coefficient.
    pub fn flip_u(&self) -> Self {
        BivariateSeries {
            coeffs: self.coeffs.iter().map(UPoly::flip).collect(),
            relaxed: self.relaxed,
            retruncated: self.retruncated,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(rat_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| SeriesError::BadJson("missing order".into()))? as usize;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| SeriesError::BadJson("missing coeffs".into()))?;
        if arr.len() != order + 1 {
            return Err(SeriesError::BadJson("coeffs length disagrees with order".into()));
        }
        let mut coeffs = Vec::with_capacity(arr.len());
        for p in arr {
            let inner = p.as_array().ok_or_else(|| SeriesError::BadJson("coefficient not an array".into()))?;
            let mut c = Vec::with_capacity(inner.len());
            for s in inner {
                let s = s.as_str().ok_or_else(|| SeriesError::BadJson("coefficient not a string".into()))?;
                c.push(rat_parse(s).ok_or_else(|| SeriesError::BadJson(format!("bad rational {s:?}")))?);
            }
            coeffs.push(UPoly::new(c));
        }
        Ok(BivariateSeries::new_relaxed(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geometric(order: usize) -> PowerSeries {
        PowerSeries::new(vec![Rational::one(); order + 1])
    }

    #[test]
    fn compose_geometric_with_t_squared() {
        let f = geometric(8);
        let g = PowerSeries::t(8).mul(&PowerSeries::t(8));
        let h = f.compose(&g).unwrap();
        let expect = PowerSeries::from_i64(&[1, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(h, expect);
    }

    #[test]
    fn compose_with_identity() {
        let f = PowerSeries::from_i64(&[3, 1, 4, 1, 5]);
        assert_eq!(f.compose(&PowerSeries::t(4)).unwrap(), f);
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let f = geometric(4);
        assert_eq!(f.compose(&f), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn reciprocal_of_one_minus_t() {
        let f = PowerSeries::from_i64(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(f.reciprocal().unwrap(), geometric(5));
    }

    #[test]
    fn reciprocal_linear_recurrence() {
        // 1/(1-t-2t^2): c_n = c_{n-1} + 2 c_{n-2}
        let f = PowerSeries::from_i64(&[1, -1, -2, 0, 0]);
        assert_eq!(f.reciprocal().unwrap(), PowerSeries::from_i64(&[1, 1, 3, 5, 11]));
    }

    #[test]
    fn reciprocal_rejects_zero_constant() {
        assert_eq!(PowerSeries::t(4).reciprocal(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn sqrt_of_one_minus_4t2() {
        let f = PowerSeries::from_i64(&[1, 0, -4, 0, 0, 0, 0]);
        let s = f.sqrt().unwrap();
        assert_eq!(s, PowerSeries::from_i64(&[1, 0, -2, 0, -2, 0, -4]));
        assert_eq!(s.mul(&s), f);
    }

    #[test]
    fn sqrt_requires_unit_constant() {
        let f = PowerSeries::from_i64(&[4, 0, 1]);
        assert_eq!(f.sqrt(), Err(SeriesError::SqrtConstantNotOne));
    }

    #[test]
    fn comp_inverse_mobius() {
        // t/(1-t) inverts to t/(1+t).
        let n = 10;
        let f = PowerSeries::t(n).mul(&PowerSeries::from_i64(&[1, -1]).truncate(n).reciprocal().unwrap());
        let g = f.comp_inverse().unwrap();
        let expect = PowerSeries::t(n).mul(&PowerSeries::from_i64(&[1, 1]).truncate(n).reciprocal().unwrap());
        assert_eq!(g, expect);
        assert_eq!(f.compose(&g).unwrap(), PowerSeries::t(n));
        assert_eq!(g.compose(&f).unwrap(), PowerSeries::t(n));
    }

    #[test]
    fn comp_inverse_round_trip_on_t_g2() {
        // t * 1/sqrt(1-4t^2) round-trips to order 16.
        let n = 16;
        let g2 = PowerSeries::from_i64(&[1, 0, -4]).truncate(n).sqrt().unwrap().reciprocal().unwrap();
        let f = PowerSeries::t(n).mul(&g2);
        let inv = f.comp_inverse().unwrap();
        assert_eq!(f.compose(&inv).unwrap(), PowerSeries::t(n));
        assert_eq!(inv.compose(&f).unwrap(), PowerSeries::t(n));
    }

    #[test]
    fn borel_laplace_round_trip() {
        let f = PowerSeries::from_i64(&[1, 3, -2, 7, 0, 5]);
        assert_eq!(f.borel().laplace(), f);
        let b = geometric(6).borel();
        // coefficients 1/n!
        assert_eq!(b.coeff(3), rat(1, 6));
        assert_eq!(b.coeff(5), rat(1, 120));
    }

    #[test]
    fn binomial_product_matches_borel_route() {
        let f = PowerSeries::from_i64(&[1, 2, 0, 4, 1, 0, 3]);
        let g = PowerSeries::from_i64(&[2, 0, 1, 1, 0, 5, 0]);
        let direct = f.binomial_product(&g);
        let via_borel = f.borel().mul(&g.borel()).laplace();
        assert_eq!(direct, via_borel);
    }

    #[test]
    fn binomial_product_units() {
        let one = PowerSeries::one(6);
        let f = PowerSeries::from_i64(&[1, 5, 2, 0, 0, 1, 9]);
        assert_eq!(one.binomial_product(&one), one);
        assert_eq!(f.binomial_product(&one), f);
    }

    #[test]
    fn hadamard_geometric() {
        // 1/(1-2t) had 1/(1-3t) = 1/(1-6t)
        let f = PowerSeries::from_i64(&[1, -2]).truncate(6).reciprocal().unwrap();
        let g = PowerSeries::from_i64(&[1, -3]).truncate(6).reciprocal().unwrap();
        let expect = PowerSeries::from_i64(&[1, -6]).truncate(6).reciprocal().unwrap();
        assert_eq!(f.hadamard(&g), expect);
        // all-ones series is the unit
        assert_eq!(f.hadamard(&geometric(6)), f);
    }

    #[test]
    fn even_part_examples() {
        let f = geometric(6);
        assert_eq!(f.even_part(), PowerSeries::from_i64(&[1, 0, 1, 0, 1, 0, 1]));
        assert_eq!(f.even_part().even_part(), f.even_part());
        // even(1/sqrt(1-2t-3t^2)) = central trinomial even part 1,3,19,141
        let g = PowerSeries::from_i64(&[1, -2, -3]).truncate(7).sqrt().unwrap().reciprocal().unwrap();
        let e = g.even_part();
        assert_eq!(e.coeff(0), rat_int(1));
        assert_eq!(e.coeff(2), rat_int(3));
        assert_eq!(e.coeff(4), rat_int(19));
        assert_eq!(e.coeff(6), rat_int(141));
    }

    #[test]
    fn radius_of_geometric() {
        let f = PowerSeries::from_i64(&[1, -3]).truncate(20).reciprocal().unwrap();
        let est = f.estimate_radius(RadiusMethod::Ratio).unwrap();
        assert!((est.radius - 1.0 / 3.0).abs() < 1e-9, "got {}", est.radius);
    }

    #[test]
    fn radius_of_central_binomials() {
        // sum C(2n,n) t^{2n} has radius 1/2; odd coefficients vanish.
        let f = PowerSeries::from_i64(&[1, 0, -4]).truncate(60).sqrt().unwrap().reciprocal().unwrap();
        let est = f.estimate_radius(RadiusMethod::Ratio).unwrap();
        assert!(est.odd_growth.is_none());
        assert!((est.radius - 0.5).abs() < 0.01, "got {}", est.radius);
    }

    #[test]
    fn radius_needs_enough_coefficients() {
        let f = PowerSeries::from_i64(&[1, 1, 1, 0, 0, 0, 0, 0, 0]);
        assert!(matches!(f.estimate_radius(RadiusMethod::Root), Err(SeriesError::TooFewNonzero(3))));
    }

    #[test]
    fn upoly_basics() {
        assert_eq!(UPoly::zero().degree(), -1);
        let p = UPoly::from_i64(&[1, 0, 3]);
        let q = UPoly::from_i64(&[0, 2]);
        assert_eq!(p.mul(&q), UPoly::from_i64(&[0, 2, 0, 6]));
        assert_eq!(p.flip().flip(), p);
        assert_eq!(p.eval(&rat_int(2)), rat_int(13));
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&q), Some(p.clone()));
        assert_eq!(UPoly::from_i64(&[1, 1]).div_exact(&q), None);
    }

    #[test]
    fn bivariate_mul_and_reciprocal() {
        // 1/(1 - u t) = sum u^n t^n
        let n = 6;
        let mut c = vec![UPoly::one(), UPoly::u().neg()];
        c.resize(n + 1, UPoly::zero());
        let f = BivariateSeries::new(c);
        let r = f.reciprocal().unwrap();
        for k in 0..=n {
            let mut expect = vec![Rational::zero(); k + 1];
            expect[k] = Rational::one();
            assert_eq!(r.coeff(k), UPoly::new(expect));
        }
        assert_eq!(f.mul(&r), BivariateSeries::one(n));
        r.assert_bump_bound();
    }

    #[test]
    fn bivariate_sqrt_squares_back() {
        // (1 + u(3-u)t^2)^2 - 8t^2 at d=3, with formal u
        let n = 10;
        let inner = {
            let mut c = vec![UPoly::zero(); n + 1];
            c[0] = UPoly::one();
            c[2] = UPoly::from_i64(&[0, 3, -1]);
            BivariateSeries::new(c)
        };
        let mut eight_t2 = BivariateSeries::zero(n);
        eight_t2.coeffs[2] = UPoly::from_i64(&[8]);
        let f = inner.mul(&inner).sub(&eight_t2);
        let s = f.sqrt().unwrap();
        assert_eq!(s.mul(&s), f);
    }

    #[test]
    fn bivariate_compose_and_flip() {
        let n = 8;
        // f = 1/(1-t), g = u t^2
        let f = BivariateSeries::from_univariate(&geometric(n));
        let mut gc = vec![UPoly::zero(); n + 1];
        gc[2] = UPoly::u();
        let g = BivariateSeries::new(gc);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.coeff_um_tn(2, 4), rat_int(1));
        assert_eq!(h.coeff_um_tn(1, 4), rat_int(0));
        let flipped = h.flip_u().flip_u();
        assert_eq!(flipped, h);
    }

    #[test]
    fn json_round_trip() {
        let f = PowerSeries::new(vec![rat(1, 2), rat_int(3), rat(-7, 5)]);
        let back = PowerSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(f, back);
        let mut c = vec![UPoly::from_i64(&[2]), UPoly::from_i64(&[0, 1])];
        c.push(UPoly::from_i64(&[1, 0, 5]));
        let b = BivariateSeries::new(c);
        let back = BivariateSeries::from_json(&b.to_json()).unwrap();
        assert_eq!(b, back);
    }

    #[test]
    fn retruncation_flag() {
        let f = geometric(10);
        let g = geometric(6);
        let h = f.add(&g);
        assert_eq!(h.order(), 6);
        assert!(h.was_retruncated());
        assert!(!f.add(&f).was_retruncated());
    }

    fn arb_series(order: usize) -> impl Strategy<Value = PowerSeries> {
        proptest::collection::vec(-20i64..20, order + 1)
            .prop_map(|v| PowerSeries::from_i64(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_distributivity(f in arb_series(12), g in arb_series(12), h in arb_series(12)) {
            prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        }

        #[test]
        fn compose_associativity(f in arb_series(9), g in arb_series(9), h in arb_series(9)) {
            let mut g = g; let mut h = h;
            g.coeffs[0] = Rational::zero();
            h.coeffs[0] = Rational::zero();
            let lhs = f.compose(&g.compose(&h).unwrap()).unwrap();
            let rhs = f.compose(&g).unwrap().compose(&h).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reciprocal_is_inverse(f in arb_series(10)) {
            let mut f = f;
            if f.coeffs[0].is_zero() { f.coeffs[0] = Rational::one(); }
            let r = f.reciprocal().unwrap();
            prop_assert_eq!(f.mul(&r), PowerSeries::one(10));
        }

        #[test]
        fn sqrt_squares_back(f in arb_series(10)) {
            let mut f = f;
            f.coeffs[0] = Rational::one();
            let s = f.sqrt().unwrap();
            prop_assert_eq!(s.mul(&s), f);
        }

        #[test]
        fn comp_inverse_round_trip(f in arb_series(8)) {
            let mut f = f;
            f.coeffs[0] = Rational::zero();
            if f.coeffs[1].is_zero() { f.coeffs[1] = Rational::one(); }
            let g = f.comp_inverse().unwrap();
            prop_assert_eq!(f.compose(&g).unwrap(), PowerSeries::t(8));
            prop_assert_eq!(g.compose(&f).unwrap(), PowerSeries::t(8));
        }

        #[test]
        fn binomial_product_equals_borel_route(f in arb_series(10), g in arb_series(10)) {
            prop_assert_eq!(f.binomial_product(&g), f.borel().mul(&g.borel()).laplace());
        }
    }
}
