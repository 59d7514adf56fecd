use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{delta24, e4, f_series, QSeries};
use crate::error::{Error, Result};
use crate::ring::Modulus;

/// Theta = sum a_s E4^(j-3s) Delta^s + remainder, remainder = O(q^(2(mu+1))).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub coefficients: Vec<BigInt>,
    pub remainder: QSeries,
}

/// mu = floor(n/24).
pub fn mu_of(n: usize) -> usize {
    n / 24
}

/// Default precision (an integer exponent) for defect computations.
pub fn default_precision(n: usize) -> u64 {
    2 * mu_of(n) as u64 + 4
}

/// E4^(j-3s) Delta^s, exact through q^precision.
pub fn basis_form(j: i64, s: u32, precision: u64) -> Result<QSeries> {
    let e = e4(precision).powi(j - 3 * s as i64)?;
    Ok(e.mul(&delta24(precision).pow(s))
        .truncated(precision as usize))
}

fn integer_series(theta: &QSeries) -> Result<QSeries> {
    let s = theta.simplified();
    if s.denominator() != 1 {
        return Err(Error::Domain("series has non-integral exponents".into()));
    }
    Ok(s)
}

/// Triangular solve for a_0..a_mu; Delta^s starts at q^(2s) with coefficient 1,
/// so every a_s is an integer when the input coefficients are.
pub fn decompose_e4_delta(theta: &QSeries, j: usize, mu: usize) -> Result<DecompositionResult> {
    let t = integer_series(theta)?;
    let need = 2 * (mu + 1);
    if t.exact_through() < need - 1 {
        return Err(Error::resource(format!(
            "decomposition with mu = {mu} needs the series exact through q^{}, have q^{}",
            need - 1,
            t.exact_through()
        )));
    }
    let p = t.exact_through() as u64;
    let mut remainder = t;
    let mut coefficients = Vec::with_capacity(mu + 1);
    for s in 0..=mu {
        if !remainder.coeff_num(2 * s + 1).is_none_or(Zero::is_zero) && 2 * s + 1 < need {
            return Err(Error::Domain(format!(
                "odd exponent {} in an even-lattice series",
                2 * s + 1
            )));
        }
        let a = remainder.coeff_num(2 * s).cloned().unwrap_or_default();
        if !a.is_zero() {
            let b = basis_form(j as i64, s as u32, p)?;
            remainder = remainder.sub(&b.scale(&a));
        }
        coefficients.push(a);
    }
    if let Some(v) = remainder.valuation() {
        debug_assert!(v >= need, "remainder starts at q^{v}");
    }
    Ok(DecompositionResult {
        coefficients,
        remainder,
    })
}

/// -b_(2(mu+1)) for theta_0 = f_0^n of sqrt(m) Z^n with m = 2k; positive
/// values certify the extremal bound at (n, k).
pub fn extremal_defect(n: usize, k: u32, precision: Option<u64>) -> Result<BigInt> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::Domain(format!(
            "length {n} is not a positive multiple of 8"
        )));
    }
    let modulus = Modulus::from_k(k)?;
    let mu = mu_of(n);
    let p = precision.unwrap_or_else(|| default_precision(n));
    let f0 = f_series(0, modulus, p)?;
    let theta0 = f0.pow(n as u32);
    let d = decompose_e4_delta(&theta0, n / 8, mu + 1)?;
    Ok(-d.coefficients[mu + 1].clone())
}

/// The element of span{E4^(j-3s) Delta^s : s <= mu} equal to 1 + O(q^(2mu+2)).
pub fn extremal_theta(n: usize, precision: u64) -> Result<QSeries> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::Domain(format!(
            "length {n} is not a positive multiple of 8"
        )));
    }
    let mu = mu_of(n);
    let j = (n / 8) as i64;
    let p = precision.max(2 * mu as u64 + 1);
    let one = QSeries::one(1, p as usize);
    let d = decompose_e4_delta(&one, n / 8, mu)?;
    let mut out = QSeries::zero(1, p as usize);
    for (s, a) in d.coefficients.iter().enumerate() {
        if !a.is_zero() {
            out = out.add(&basis_form(j, s as u32, p)?.scale(a));
        }
    }
    debug_assert!(out.coeff_num(0).is_some_and(One::is_one));
    Ok(out.truncated(precision as usize))
}
