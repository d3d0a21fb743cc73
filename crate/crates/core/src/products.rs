//! Circuit series of graph products, computed at the series level: the
//! free product via compositional inversion, the two direct products
//! via binomial and Hadamard coefficient transforms, and the loop-added
//! graph via substitution.

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::series::{PowerSeries, RadiusMethod, Rational, SeriesError};

#[derive(Debug, Error)]
pub enum ProductError {
    #[error("circuit series must have constant term 1")]
    NotCircuitSeries,
    #[error("need at least {needed} nonzero even coefficients, found {found}")]
    Insufficient { needed: usize, found: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Circuit series of the free product of two pointed graphs, glued at
/// their base points, from the circuit series of the factors.
///
/// Writing V = (tG)^<-1> for the compositional inverse, the three
/// series satisfy 1/V = 1/V_E + 1/V_F - 1/t; this combines the factor
/// inverses and inverts back.
pub fn free_product_series(
    g_e: &PowerSeries,
    g_f: &PowerSeries,
    order: usize,
) -> Result<PowerSeries, ProductError> {
    if !g_e.coeff(0).is_one() || !g_f.coeff(0).is_one() {
        return Err(ProductError::NotCircuitSeries);
    }
    // Work one order higher so the final division by t lands on `order`.
    let m = order + 1;
    // For each factor: S = V/t where V = (tG)^<-1>, then R = 1/S, so
    // that 1/V = R/t. The identity becomes R = R_E + R_F - 1.
    let factor_r = |g: &PowerSeries| -> Result<PowerSeries, ProductError> {
        let w = g.truncate(m - 1).shift_up_extend(1);
        let v = w.comp_inverse()?;
        Ok(v.shift_down(1).reciprocal()?)
    };
    let r_e = factor_r(g_e)?;
    let r_f = factor_r(g_f)?;
    let r = r_e.add(&r_f).sub(&PowerSeries::one(m - 1));
    let s = r.reciprocal()?;
    let v = s.shift_up_extend(1);
    let w = v.comp_inverse()?;
    Ok(w.shift_down(1))
}

/// First direct product: binomial convolution of coefficients
/// (ordinary generating series to exponential, multiply, back).
pub fn direct_first_series(g_e: &PowerSeries, g_f: &PowerSeries, order: usize) -> PowerSeries {
    g_e.truncate(order).binomial_product(&g_f.truncate(order))
}

/// Second direct product: coefficient-wise (Hadamard) product.
pub fn direct_second_series(g_e: &PowerSeries, g_f: &PowerSeries, order: usize) -> PowerSeries {
    g_e.truncate(order).hadamard(&g_f.truncate(order))
}

/// Circuit series after adding a loop at every vertex:
/// e(t) = g(t/(1-t)) / (1-t).
pub fn loops_series(g_series: &PowerSeries, order: usize) -> Result<PowerSeries, ProductError> {
    if !g_series.coeff(0).is_one() {
        return Err(ProductError::NotCircuitSeries);
    }
    // t/(1-t) = t + t^2 + ... and 1/(1-t) = 1 + t + ...
    let geom = PowerSeries::new(vec![Rational::one(); order + 1]);
    let sub = geom.shift_up_extend(1).truncate(order);
    Ok(g_series.truncate(order).compose(&sub)?.mul(&geom))
}

/// Numeric check of radius additivity under the free product:
/// 1/rho(E*F) = 1/rho(E) + 1/rho(F) holds for rho-recurrent factors
/// and can fail otherwise. Estimates only, never a proof.
#[derive(Clone, Debug)]
pub struct RadiusAdditivityReport {
    pub inv_rho_left: f64,
    pub inv_rho_right: f64,
    pub inv_rho_product: f64,
    pub tolerance: f64,
    pub additive: bool,
    /// Not additive, with the product growing strictly slower than the
    /// sum predicts: the signature of a non-recurrent factor pair.
    pub non_recurrent_pattern: bool,
    pub product_series: PowerSeries,
}

impl RadiusAdditivityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "inv_rho_left": self.inv_rho_left,
            "inv_rho_right": self.inv_rho_right,
            "inv_rho_product": self.inv_rho_product,
            "tolerance": self.tolerance,
            "additive": self.additive,
            "non_recurrent_pattern": self.non_recurrent_pattern,
            "product_series": self.product_series.to_json(),
        })
    }
}

pub fn radius_additivity_report(
    g_e: &PowerSeries,
    g_f: &PowerSeries,
    order: usize,
) -> Result<RadiusAdditivityReport, ProductError> {
    for g in [g_e, g_f] {
        let found = g.coeffs().iter().step_by(2).filter(|c| !c.is_zero()).count();
        if found < 12 {
            return Err(ProductError::Insufficient { needed: 12, found });
        }
    }
    let product = free_product_series(g_e, g_f, order)?;
    let inv = |g: &PowerSeries| -> Result<f64, ProductError> {
        Ok(g.estimate_radius(RadiusMethod::Ratio)?.growth)
    };
    let (le, ri, pr) = (inv(g_e)?, inv(g_f)?, inv(&product)?);
    let tolerance = 0.05;
    let additive = ((le + ri) - pr).abs() <= tolerance * pr;
    Ok(RadiusAdditivityReport {
        inv_rho_left: le,
        inv_rho_right: ri,
        inv_rho_product: pr,
        tolerance,
        additive,
        non_recurrent_pattern: !additive && pr < le + ri,
        product_series: product,
    })
}
