//! Numeric relations between the cogrowth rate alpha (growth of proper
//! circuits) and the spectral radius nu of the simple random walk on a
//! d-regular graph, plus the analogous maps for quotients of PSL2(Z).
//! Everything here is floating point; the exact-series machinery lives
//! in the other modules.

use serde_json::{json, Value};
use thiserror::Error;

use crate::enumerate::PathCensus;
use crate::series::{PowerSeries, SeriesError};

#[derive(Debug, Error)]
pub enum CogrowthError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("alpha = {alpha} outside the validity range [{lo}, {hi}]")]
    OutOfDomain { alpha: f64, lo: f64, hi: f64 },
    #[error("need proper-circuit counts to length at least {needed}, have {found}")]
    Insufficient { needed: usize, found: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// alpha > sqrt(d-1): nu grows with alpha.
    Supercritical,
    /// alpha <= sqrt(d-1): nu sits at its minimum 2 sqrt(d-1)/d.
    Subcritical,
}

#[derive(Clone, Copy, Debug)]
pub struct CogrowthReport {
    pub alpha: f64,
    pub nu: f64,
    pub d: usize,
    pub branch: Branch,
    /// alpha within 1e-9 of the branch point sqrt(d-1), where the two
    /// formulas agree and the branch label is a tie-break.
    pub near_branch_point: bool,
}

impl CogrowthReport {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "nu": self.nu,
            "d": self.d,
            "branch": match self.branch {
                Branch::Supercritical => "supercritical",
                Branch::Subcritical => "subcritical",
            },
            "near_branch_point": self.near_branch_point,
        })
    }
}

/// The two-branch formula for the spectral radius of the simple random
/// walk on a d-regular graph with cogrowth alpha:
/// nu = (sqrt(d-1)/d)(alpha/sqrt(d-1) + sqrt(d-1)/alpha) above the
/// branch point alpha = sqrt(d-1), and the constant 2 sqrt(d-1)/d at
/// or below it.
pub fn grigorchuk_nu(alpha: f64, d: usize) -> Result<CogrowthReport, CogrowthError> {
    if d < 2 {
        return Err(CogrowthError::BadParameter(format!("need d >= 2, got {d}")));
    }
    if !(0.0..=(d as f64 - 1.0)).contains(&alpha) {
        return Err(CogrowthError::BadParameter(format!(
            "alpha must lie in [0, d-1] = [0, {}], got {alpha}",
            d as f64 - 1.0
        )));
    }
    let crit = ((d - 1) as f64).sqrt();
    let branch = if alpha <= crit { Branch::Subcritical } else { Branch::Supercritical };
    let nu = match branch {
        Branch::Subcritical => 2.0 * crit / d as f64,
        Branch::Supercritical => (crit / d as f64) * (alpha / crit + crit / alpha),
    };
    Ok(CogrowthReport { alpha, nu, d, branch, near_branch_point: (alpha - crit).abs() <= 1e-9 })
}

/// phi(t) = t/(1+(d-1)t^2), the map with 1/(d nu) = phi(1/alpha) on
/// the supercritical branch.
pub fn phi(t: f64, d: usize) -> f64 {
    t / (1.0 + (d as f64 - 1.0) * t * t)
}

/// Location and value of the maximum of phi: (1/sqrt(d-1), 1/(2 sqrt(d-1))).
pub fn phi_max(d: usize) -> (f64, f64) {
    let s = ((d - 1) as f64).sqrt();
    (1.0 / s, 1.0 / (2.0 * s))
}

/// Word series over a quasi-free presentation extended by tcount
/// trivial generators: recovers F (the series of subgroup elements by
/// minimal word length, here specialized to proper words) from the
/// circuit series G of the extended Schreier graph via
/// F(t)/(1-t^2) = G(t/w)/w, with w = 1 + tcount*t + (s-1)t^2.
pub fn quasi_free_extended(
    g: &PowerSeries,
    s: usize,
    tcount: usize,
    order: usize,
) -> Result<PowerSeries, CogrowthError> {
    let n = order;
    let w = PowerSeries::from_i64(&[1, tcount as i64, s as i64 - 1]).truncate(n);
    let sub = w.reciprocal()?.shift_up_extend(1).truncate(n);
    let t2 = PowerSeries::t(n).mul(&PowerSeries::t(n));
    Ok(PowerSeries::one(n)
        .sub(&t2)
        .mul(&g.truncate(n).compose(&sub)?)
        .mul(&w.reciprocal()?))
}

/// Circuit series after appending tcount trivial generators (loops at
/// every vertex of the Schreier graph): G(t) = G'(t/(1-kt))/(1-kt).
pub fn loops_generator_series(
    gprime: &PowerSeries,
    tcount: usize,
    order: usize,
) -> Result<PowerSeries, CogrowthError> {
    let n = order;
    let w = PowerSeries::from_i64(&[1, -(tcount as i64)]).truncate(n);
    let winv = w.reciprocal()?;
    let sub = winv.shift_up_extend(1).truncate(n);
    Ok(gprime.truncate(n).compose(&sub)?.mul(&winv))
}

/// The PSL2(Z) analogue of phi:
/// phi(t) = (t sqrt(4+13t^2+8t^4) - t^2) / (2(1+t^2)(1+2t^2)).
pub fn psl2_phi(t: f64) -> f64 {
    let t2 = t * t;
    (t * (4.0 + 13.0 * t2 + 8.0 * t2 * t2).sqrt() - t2) / (2.0 * (1.0 + t2) * (1.0 + 2.0 * t2))
}

/// Validity range for psl2_nu: [sqrt(rho), rho] with rho = sqrt(2),
/// the word growth of PSL2(Z).
pub fn psl2_alpha_range() -> (f64, f64) {
    (2f64.powf(0.25), 2f64.sqrt())
}

/// Spectral radius of the simple random walk on a quotient of PSL2(Z)
/// with cogrowth alpha: nu = (1/2) sqrt(8/alpha^2 + 13 + 4 alpha^2) + 1/2,
/// valid for alpha in [2^(1/4), sqrt(2)].
pub fn psl2_nu(alpha: f64) -> Result<f64, CogrowthError> {
    let (lo, hi) = psl2_alpha_range();
    if !(lo..=hi).contains(&alpha) {
        return Err(CogrowthError::OutOfDomain { alpha, lo, hi });
    }
    let a2 = alpha * alpha;
    Ok(0.5 * (8.0 / a2 + 13.0 + 4.0 * a2).sqrt() + 0.5)
}

/// Root-test estimate of the cogrowth alpha = limsup f_n^(1/n) from
/// the proper-circuit row of a census, taking the larger of the even
/// and odd index subsequences (bipartite graphs only populate one).
pub fn estimate_cogrowth(census: &PathCensus) -> Result<f64, CogrowthError> {
    let counts = census.proper_counts();
    let max_len = counts.len().saturating_sub(1);
    if max_len < 12 {
        return Err(CogrowthError::Insufficient { needed: 12, found: max_len });
    }
    let mut best = 0.0f64;
    for parity in 0..2 {
        if let Some(i) = (1..counts.len()).filter(|i| i % 2 == parity && counts[*i] > 0).max() {
            best = best.max((counts[i] as f64).powf(1.0 / i as f64));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tree_g;
    use crate::enumerate::path_census;
    use crate::graph::{add_loops, complete, tree_ball, z_segment, MarkedGraph};
    use crate::series::rat_int;
    use crate::transfer::f_from_g;

    #[test]
    fn grigorchuk_branches() {
        // full cogrowth: nu = 1
        for d in [2, 3, 4, 7] {
            let r = grigorchuk_nu(d as f64 - 1.0, d).unwrap();
            assert!((r.nu - 1.0).abs() < 1e-12, "d={d} nu={}", r.nu);
        }
        // subcritical plateau at d=4
        let r = grigorchuk_nu(1.0, 4).unwrap();
        assert_eq!(r.branch, Branch::Subcritical);
        assert!((r.nu - 2.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
        // continuity at the branch point
        for d in [3, 4, 5] {
            let crit = ((d - 1) as f64).sqrt();
            let below = grigorchuk_nu(crit - 1e-13, d).unwrap().nu;
            let above = grigorchuk_nu(crit + 1e-13, d).unwrap().nu;
            assert!((below - above).abs() < 1e-12, "d={d}");
            assert!(grigorchuk_nu(crit, d).unwrap().near_branch_point);
        }
        // monotone above the branch point
        let mut prev = 0.0;
        for i in 0..=20 {
            let crit = 3f64.sqrt();
            let alpha = crit + (3.0 - crit) * i as f64 / 20.0;
            let nu = grigorchuk_nu(alpha, 4).unwrap().nu;
            assert!(nu >= prev - 1e-15);
            prev = nu;
        }
        assert!(grigorchuk_nu(-0.5, 4).is_err());
        assert!(grigorchuk_nu(3.5, 4).is_err());
        assert!(grigorchuk_nu(1.0, 1).is_err());
    }

    #[test]
    fn phi_basics() {
        assert_eq!(phi(0.0, 4), 0.0);
        for d in [2, 3, 4, 5] {
            let (at, val) = phi_max(d);
            assert!((phi(at, d) - val).abs() < 1e-15);
            // nearby points are below the max
            assert!(phi(at * 0.9, d) < val);
            assert!(phi(at * 1.1, d) < val);
        }
        // d=4: phi(1/3) = 1/4 = 1/(d nu) at alpha = 3
        assert!((phi(1.0 / 3.0, 4) - 0.25).abs() < 1e-15);
        let r = grigorchuk_nu(3.0, 4).unwrap();
        assert!((1.0 / (4.0 * r.nu) - phi(1.0 / 3.0, 4)).abs() < 1e-12);
    }

    #[test]
    fn quasi_free_without_extra_generators_is_the_proper_word_series() {
        let n = 12;
        for d in [3usize, 4] {
            let g = tree_g(d, n).unwrap();
            let f = quasi_free_extended(&g, d, 0, n).unwrap();
            let via_transfer = f_from_g(&g, d, n).unwrap().eval_u(&rat_int(0));
            assert_eq!(f, via_transfer);
        }
    }

    #[test]
    fn loop_generators_match_enumeration() {
        let n = 10;
        let seg = z_segment(6).unwrap().as_finite();
        let once = add_loops(&seg);
        let twice = add_loops(&once);
        let oracle = |g: &crate::graph::Graph| {
            let mg = MarkedGraph::circuit(g.clone(), 0).unwrap();
            path_census(&mg, n, None).unwrap().series().eval_u(&rat_int(1))
        };
        let z = tree_g(2, n).unwrap();
        assert_eq!(loops_generator_series(&z, 1, n).unwrap(), oracle(&once));
        assert_eq!(loops_generator_series(&z, 2, n).unwrap(), oracle(&twice));
    }

    #[test]
    fn extended_line_schreier_graph_has_trivial_word_series() {
        // Z presented on {a, a^-1} plus one trivial generator: the
        // extended Schreier graph is the loop-added line, and the
        // subgroup series collapses to 1.
        let n = 10;
        let g = loops_generator_series(&tree_g(2, n).unwrap(), 1, n).unwrap();
        let f = quasi_free_extended(&g, 2, 1, n).unwrap();
        assert_eq!(f, PowerSeries::one(n));
    }

    #[test]
    fn psl2_values_and_domain() {
        let nu = psl2_nu(2f64.sqrt()).unwrap();
        assert!((nu - 3.0).abs() < 1e-12);
        let (lo, hi) = psl2_alpha_range();
        for i in 0..=100 {
            let alpha = lo + (hi - lo) * i as f64 / 100.0;
            let nu = psl2_nu(alpha).unwrap();
            assert!((nu * psl2_phi(1.0 / alpha) - 1.0).abs() < 1e-12, "alpha={alpha}");
        }
        assert!(matches!(psl2_nu(lo - 1e-6), Err(CogrowthError::OutOfDomain { .. })));
        assert!(matches!(psl2_nu(hi + 1e-6), Err(CogrowthError::OutOfDomain { .. })));
    }

    #[test]
    fn cogrowth_estimates() {
        let tri = MarkedGraph::circuit(complete(3).unwrap(), 0).unwrap();
        let census = path_census(&tri, 24, None).unwrap();
        let alpha = estimate_cogrowth(&census).unwrap();
        assert!((alpha - 1.0).abs() < 0.1, "alpha={alpha}");

        let ball = MarkedGraph::circuit(tree_ball(3, 7).unwrap().as_finite(), 0).unwrap();
        let census = path_census(&ball, 14, None).unwrap();
        assert_eq!(estimate_cogrowth(&census).unwrap(), 0.0);

        let k4 = MarkedGraph::circuit(complete(4).unwrap(), 0).unwrap();
        let census = path_census(&k4, 14, None).unwrap();
        let alpha = estimate_cogrowth(&census).unwrap();
        assert!((alpha - 2.0).abs() / 2.0 < 0.1, "alpha={alpha}");

        let short = path_census(&tri, 8, None).unwrap();
        assert!(matches!(estimate_cogrowth(&short), Err(CogrowthError::Insufficient { .. })));
    }

    #[test]
    fn report_json_shape() {
        let r = grigorchuk_nu(1.9, 4).unwrap();
        let v = r.to_json();
        assert_eq!(v["branch"], "supercritical");
        assert_eq!(v["d"], 4);
    }
}
