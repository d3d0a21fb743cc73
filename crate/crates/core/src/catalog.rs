//! Closed-form circuit series for specific graph families: complete
//! graphs, cycles, regular trees (with a distance-marked refinement),
//! trees with loops at the root, the two-poled ladder, the integers
//! with steps {1,2}, and the PSL2(Z) Cayley graph. These serve as
//! independent oracles for the generic transfer machinery.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{rat_int, BivariateSeries, PowerSeries, Rational, SeriesError, UPoly};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn binom(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rat_int((n - i) as i64) / rat_int((i + 1) as i64);
    }
    acc
}

/// Enriched circuit series of the complete graph on v vertices:
/// F(u,t) = ((1+(1-u)t)/(1-(v-2+u)t))
///        * ((1-(v-2)t+(1-u)(v-2+u)t^2)/(1+t+(1-u)(v-2+u)t^2)).
pub fn complete_series(v: usize, order: usize) -> Result<BivariateSeries, CatalogError> {
    if v < 3 {
        return Err(CatalogError::BadParameter(format!("complete_series needs v >= 3, got {v}")));
    }
    let n = order;
    let vi = v as i64;
    let a = UPoly::from_i64(&[1, -1]); // 1-u
    let b = UPoly::from_i64(&[vi - 2, 1]); // v-2+u
    let c = a.mul(&b);
    let one = BivariateSeries::one(n);
    let n1 = one.add(&BivariateSeries::monomial(a, 1, n));
    let d1 = one.sub(&BivariateSeries::monomial(b, 1, n));
    let n2 = one
        .sub(&BivariateSeries::monomial(UPoly::from_i64(&[vi - 2]), 1, n))
        .add(&BivariateSeries::monomial(c.clone(), 2, n));
    let d2 = one.add(&BivariateSeries::t(n)).add(&BivariateSeries::monomial(c, 2, n));
    Ok(n1.mul(&d1.reciprocal()?).mul(&n2).mul(&d2.reciprocal()?).into_strict())
}

#[derive(Clone, Debug)]
pub struct CycleSeries {
    /// All circuits at a vertex of the k-cycle.
    pub g: PowerSeries,
    /// Proper (backtrack-free) circuits: (1+t^k)/(1-t^k).
    pub f0: PowerSeries,
}

/// Circuit series of the cycle with k vertices, via the unreduced
/// rational form
/// ((2t)^k + sum_m binom(k,2m)(1-4t^2)^m) / (sum_m binom(k,2m-1)(1-4t^2)^m).
pub fn cycle_series(k: usize, order: usize) -> Result<CycleSeries, CatalogError> {
    if k < 1 {
        return Err(CatalogError::BadParameter("cycle_series needs k >= 1".into()));
    }
    let n = order;
    let mut f0 = vec![Rational::zero(); n + 1];
    f0[0] = Rational::one();
    let mut i = k;
    while i <= n {
        f0[i] = rat_int(2);
        i += k;
    }
    let f0 = PowerSeries::new(f0);

    let base = PowerSeries::one(n).sub(&PowerSeries::t(n).mul(&PowerSeries::t(n)).scale(&rat_int(4)));
    let mut num = PowerSeries::zero(n);
    if k <= n {
        let mut two_t_k = vec![Rational::zero(); n + 1];
        two_t_k[k] = rat_int(2).pow(k as i32);
        num = num.add(&PowerSeries::new(two_t_k));
    }
    let mut den = PowerSeries::zero(n);
    let mut pw = PowerSeries::one(n);
    for m in 0.. {
        if 2 * m > k + 1 {
            break;
        }
        num = num.add(&pw.scale(&binom(k, 2 * m)));
        if 2 * m + 1 <= k {
            den = den.add(&pw.mul(&base).scale(&binom(k, 2 * m + 1)));
        }
        pw = pw.mul(&base);
    }
    Ok(CycleSeries { g: num.mul(&den.reciprocal()?), f0 })
}

/// Number of length-n circuits on the k-cycle by the explicit binomial
/// sum over displacements that are multiples of k.
pub fn cycle_g_coeff(k: usize, n: usize) -> Rational {
    let mut acc = Rational::zero();
    let (ni, ki) = (n as i64, k as i64);
    let mut i = -ni;
    while i <= ni {
        if i.rem_euclid(ki) == 0 && (i - ni) % 2 == 0 {
            acc = acc + binom(n, ((ni + i) / 2) as usize);
        }
        i += 1;
    }
    acc
}

/// Circuit series of the d-regular tree:
/// G = 2(d-1)/(d-2+d sqrt(1-4(d-1)t^2)), with the degenerate d=1 case
/// (a single edge) given by its limit 1/(1-t^2).
pub fn tree_g(d: usize, order: usize) -> Result<PowerSeries, CatalogError> {
    if d < 1 {
        return Err(CatalogError::BadParameter("tree_g needs d >= 1".into()));
    }
    let n = order;
    if d == 1 {
        let t2 = PowerSeries::t(n).mul(&PowerSeries::t(n));
        return Ok(PowerSeries::one(n).sub(&t2).reciprocal()?);
    }
    let di = d as i64;
    let inner = PowerSeries::one(n)
        .sub(&PowerSeries::t(n).mul(&PowerSeries::t(n)).scale(&rat_int(4 * (di - 1))));
    let denom = PowerSeries::constant(rat_int(di - 2), n).add(&inner.sqrt()?.scale(&rat_int(di)));
    Ok(denom.reciprocal()?.scale(&rat_int(2 * (di - 1))))
}

#[derive(Clone, Debug)]
pub struct TreeSeries {
    /// F(1-u,t): the enriched circuit series with the bump variable
    /// flipped; apply flip_u to read off F(u,t).
    pub f_flip: BivariateSeries,
    /// G(t) = F(1,t).
    pub g: PowerSeries,
    /// F'(1-u,t) for the rooted branch (one edge at the root removed);
    /// its empty circuit is counted as 1-u, so the series is not
    /// bump-bounded.
    pub fprime_flip: BivariateSeries,
}

/// Closed forms for the d-regular tree, d >= 2:
/// F(1-u,t)  = 2(d-1)(1-u^2t^2) / ((d-2)w + d s),
/// F'(1-u,t) = 2(1-u) / (1 - u(d-u)t^2 + s),
/// with w = 1+u(d-u)t^2 and s = sqrt(w^2 - 4(d-1)t^2).
pub fn tree_series(d: usize, order: usize) -> Result<TreeSeries, CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadParameter("tree_series needs d >= 2; see tree_g for d=1".into()));
    }
    let n = order;
    let di = d as i64;
    let q = UPoly::from_i64(&[0, di, -1]); // u(d-u)
    let one = BivariateSeries::one(n);
    let w = one.add(&BivariateSeries::monomial(q.clone(), 2, n));
    let s = w
        .mul(&w)
        .sub(&BivariateSeries::monomial(UPoly::from_i64(&[4 * (di - 1)]), 2, n))
        .sqrt()?;
    let f_num = one
        .sub(&BivariateSeries::monomial(UPoly::from_i64(&[0, 0, 1]), 2, n))
        .scale_upoly(&UPoly::from_i64(&[2 * (di - 1)]));
    let f_den = w.scale_upoly(&UPoly::from_i64(&[di - 2])).add(&s.scale_upoly(&UPoly::from_i64(&[di])));
    let f_flip = f_num.mul(&f_den.reciprocal()?).into_strict();

    let fp_den = one.sub(&BivariateSeries::monomial(q, 2, n)).add(&s);
    let fp_num = BivariateSeries::constant(UPoly::from_i64(&[2, -2]), n);
    let fprime_flip = fp_num.mul(&fp_den.reciprocal()?);

    Ok(TreeSeries { f_flip, g: tree_g(d, n)?, fprime_flip })
}

#[derive(Clone, Debug)]
pub struct LoopTreeSeries {
    pub g: PowerSeries,
    /// min{ 1/(2 sqrt(d-1)), (e-1)/(d+e^2-2e) }; the second entry is
    /// the pole of G, degenerate for e=1.
    pub radius: f64,
}

/// Circuit series at the root of a d-regular tree whose root had e of
/// its subtrees replaced by e loops:
/// G = 2(d-1) / (d+e-2 - 2e(d-1)t + (d-e) sqrt(1-4(d-1)t^2)).
pub fn loop_tree_series(d: usize, e: usize, order: usize) -> Result<LoopTreeSeries, CatalogError> {
    if d < 2 || e < 1 || e > d {
        return Err(CatalogError::BadParameter(format!(
            "loop_tree_series needs d >= 2 and 1 <= e <= d, got d={d} e={e}"
        )));
    }
    let n = order;
    let (di, ei) = (d as i64, e as i64);
    let inner = PowerSeries::one(n)
        .sub(&PowerSeries::t(n).mul(&PowerSeries::t(n)).scale(&rat_int(4 * (di - 1))));
    let denom = PowerSeries::constant(rat_int(di + ei - 2), n)
        .sub(&PowerSeries::t(n).scale(&rat_int(2 * ei * (di - 1))))
        .add(&inner.sqrt()?.scale(&rat_int(di - ei)));
    let g = denom.reciprocal()?.scale(&rat_int(2 * (di - 1)));
    let branch = 1.0 / (2.0 * ((d - 1) as f64).sqrt());
    let pole = (ei - 1) as f64 / (di + ei * ei - 2 * ei) as f64;
    Ok(LoopTreeSeries { g, radius: branch.min(pole) })
}

/// Circuit series of the doubly-infinite two-poled ladder:
/// G(t) = even( G_line(t/(1-t)) / (1-t) ), where G_line is the circuit
/// series of the integer line. A circuit on the ladder is a circuit on
/// one pole with arbitrary rung switches spliced in; the even part
/// enforces return to the starting pole.
pub fn ladder_series(order: usize) -> Result<PowerSeries, CatalogError> {
    let n = order;
    let geom = PowerSeries::new(vec![Rational::one(); n + 1]);
    let sub = geom.shift_up_extend(1).truncate(n);
    Ok(tree_g(2, n)?.compose(&sub)?.mul(&geom).even_part())
}

/// Circuit series of the integers with generating steps {1,2} (and
/// their inverses), solved by fixed-point iteration on the system for
/// the half-line auxiliaries f (0 to 0 on N), g (0 to 1 on N),
/// h (1 to 1 on N) and then the full-line series G, e.
pub fn z12_series(order: usize) -> Result<PowerSeries, CatalogError> {
    let n = order;
    let t = PowerSeries::t(n);
    let t2 = t.mul(&t);
    let mut f = PowerSeries::one(n);
    let mut g = PowerSeries::zero(n);
    let mut h = PowerSeries::one(n);
    // every right-hand term carries a factor t, so each pass fixes at
    // least one more coefficient
    for _ in 0..=n {
        let g2 = t.mul(&f).mul(&f.add(&g));
        let h2 = f.add(&t.mul(&g).mul(&f.add(&g)));
        let f2 = PowerSeries::one(n).add(&t2.mul(&f.add(&g.scale(&rat_int(2))).add(&h)).mul(&f));
        f = f2;
        g = g2;
        h = h2;
    }
    let fgh = f.add(&g.scale(&rat_int(2))).add(&h);
    let fg = f.add(&g);
    // On the full line, split a 0 -> 1 walk at the last time it sits at
    // a nonpositive position; that position is 0 (continue up by 1 or
    // by 2) or -1 (jump over 0 with a +2 step):
    //   e = t(Gf + Gg + ef),
    // while circuits decompose by their first excursion, mirrored on
    // the down side:
    //   G = 1 + 2t^2((f+2g+h)G + (f+g)e).
    let mut big_g = PowerSeries::one(n);
    let mut e = PowerSeries::zero(n);
    for _ in 0..=n {
        let e2 = t.mul(&big_g.mul(&fg).add(&e.mul(&f)));
        let g2 = PowerSeries::one(n)
            .add(&t2.mul(&fgh.mul(&big_g).add(&fg.mul(&e))).scale(&rat_int(2)));
        big_g = g2;
        e = e2;
    }
    Ok(big_g)
}

/// Auxiliary series for checking z12_series against its quartic: the
/// algebraic element delta with
/// 1 - (2t+1)d + t(2+3t)d^2 - t^2(1+2t)d^3 + t^4 d^4 = 0, d(0)=1,
/// and the closed form
/// G = (4+3t-6t^2-10t(1+2t)d+2t^2(3+8t)d^2-6t^4(1+t)d^3)/(4-7t-36t^2).
pub fn z12_closed_form(order: usize) -> Result<PowerSeries, CatalogError> {
    let n = order;
    let poly = |cs: &[i64]| PowerSeries::from_i64(cs).truncate(n);
    let mut d = PowerSeries::one(n);
    for _ in 0..=n {
        // d = (1 + t(2+3t)d^2 - t^2(1+2t)d^3 + t^4 d^4) / (1+2t)
        let d2 = d.mul(&d);
        let d3 = d2.mul(&d);
        let d4 = d2.mul(&d2);
        let num = PowerSeries::one(n)
            .add(&poly(&[0, 2, 3]).mul(&d2))
            .sub(&poly(&[0, 0, 1, 2]).mul(&d3))
            .add(&poly(&[0, 0, 0, 0, 1]).mul(&d4));
        d = num.mul(&poly(&[1, 2]).reciprocal()?);
    }
    let num = poly(&[4, 3, -6])
        .sub(&poly(&[0, 10, 20]).mul(&d))
        .add(&poly(&[0, 0, 6, 16]).mul(&d.mul(&d)))
        .sub(&poly(&[0, 0, 0, 0, 6, 6]).mul(&d.mul(&d).mul(&d)));
    Ok(num.mul(&poly(&[4, -7, -36]).reciprocal()?))
}

/// Circuit series of the Cayley graph of PSL2(Z) = Z/2 * Z/3 with
/// generators {a, b, b^-1}:
/// ((2-t) sqrt(1-2t-5t^2+6t^3+t^4) - t + t^2 + t^3) / (2(1-2t-5t^2+6t^3)).
pub fn psl2_series(order: usize) -> Result<PowerSeries, CatalogError> {
    let n = order;
    let poly = |cs: &[i64]| PowerSeries::from_i64(cs).truncate(n);
    let root = poly(&[1, -2, -5, 6, 1]).sqrt()?;
    let num = poly(&[2, -1]).mul(&root).add(&poly(&[0, -1, 1, 1]));
    Ok(num.mul(&poly(&[2, -4, -10, 12]).reciprocal()?))
}

/// The distance-marked walk series of the d-regular tree at u=1:
/// coefficient of t^n is a polynomial in v recording the endpoint
/// distance of every length-n walk from the root. Checked against its
/// closed form and three specializations.
#[derive(Clone, Debug)]
pub struct TreeDistanceChecks {
    /// Census series: sum over walks of v^dist(end) t^len.
    pub h: BivariateSeries,
    /// Closed form ((1+F'(1,t)tv)/(1-(d-1)F'(1,t)tv)) F(1,t).
    pub h_closed: BivariateSeries,
    pub closed_form_ok: bool,
    /// Proper walks at v=1 against (1+t)/(1-(d-1)t).
    pub growth_ok: bool,
    /// All walks at v=1 against 1/(1-dt).
    pub all_walks_ok: bool,
    /// Bump-marked walks ending at the root against F(u,t).
    pub enriched_ok: bool,
}

pub fn tree_distance_series(d: usize, order: usize) -> Result<TreeDistanceChecks, CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadParameter("tree_distance_series needs d >= 2".into()));
    }
    let n = order;
    let di = d as i64;
    let ball = crate::graph::tree_ball(d, n.max(1))
        .map_err(|e| CatalogError::BadParameter(e.to_string()))?
        .as_finite();
    let counts = crate::enumerate::distance_census(&ball, 0, n, None)
        .map_err(|e| CatalogError::BadParameter(e.to_string()))?;

    // h: v-polynomial per length, summed over bump counts
    let h = BivariateSeries::new(
        counts
            .iter()
            .map(|row| {
                let maxd = row.iter().map(|ms| ms.len()).max().unwrap_or(0);
                UPoly::new(
                    (0..maxd)
                        .map(|dist| {
                            rat_int(row.iter().map(|ms| *ms.get(dist).unwrap_or(&0)).sum::<u64>() as i64)
                        })
                        .collect(),
                )
            })
            .collect(),
    );

    let ts = tree_series(d, n)?;
    let f1 = ts.f_flip.eval_u(&rat_int(0)); // F(1,t)
    let fp1 = ts.fprime_flip.eval_u(&rat_int(0)); // F'(1,t)
    let a = BivariateSeries::from_univariate(&fp1.shift_up_extend(1).truncate(n))
        .scale_upoly(&UPoly::u());
    let h_closed = BivariateSeries::one(n)
        .add(&a)
        .mul(
            &BivariateSeries::one(n)
                .sub(&a.scale_upoly(&UPoly::from_i64(&[di - 1])))
                .reciprocal()?,
        )
        .mul(&BivariateSeries::from_univariate(&f1))
        .into_strict();
    let closed_form_ok = h == h_closed;

    // proper walks: bump count 0, any endpoint, v=1
    let growth = PowerSeries::new(
        counts
            .iter()
            .map(|row| rat_int(row.first().map(|ms| ms.iter().sum::<u64>()).unwrap_or(0) as i64))
            .collect(),
    );
    let growth_expect = PowerSeries::one(n)
        .add(&PowerSeries::t(n))
        .mul(&PowerSeries::one(n).sub(&PowerSeries::t(n).scale(&rat_int(di - 1))).reciprocal()?);
    let growth_ok = growth == growth_expect;

    let all_walks = h.eval_u(&rat_int(1));
    let all_expect =
        PowerSeries::one(n).sub(&PowerSeries::t(n).scale(&rat_int(di))).reciprocal()?;
    let all_walks_ok = all_walks == all_expect;

    // endpoint at the root, marked by bump count: F(u,t)
    let enriched = BivariateSeries::new(
        counts
            .iter()
            .map(|row| {
                UPoly::new(
                    row.iter()
                        .map(|ms| rat_int(*ms.first().unwrap_or(&0) as i64))
                        .collect(),
                )
            })
            .collect(),
    );
    let enriched_ok = enriched == ts.f_flip.flip_u();

    Ok(TreeDistanceChecks { h, h_closed, closed_form_ok, growth_ok, all_walks_ok, enriched_ok })
}
