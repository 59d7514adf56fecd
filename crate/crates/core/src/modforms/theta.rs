use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;

use super::QSeries;
use crate::code::SWEPolynomial;
use crate::error::{Error, Result};
use crate::lattice::ShellTable;
use crate::ring::Modulus;

/// f_j = sum of q^(x^2/m) over x = j (mod m), exact through q^precision.
pub fn f_series(j: u32, modulus: Modulus, precision: u64) -> Result<QSeries> {
    if j > modulus.half() {
        return Err(Error::Input(format!(
            "residue class {j} is out of range 0..={}",
            modulus.half()
        )));
    }
    let m = modulus.order() as i64;
    let t = (precision * m as u64) as usize;
    let bound = (t as f64).sqrt() as i64 + m;
    // x = j + m z for every integer z with x^2 <= t
    let terms = (-bound..=bound)
        .filter(|x| x.rem_euclid(m) == j as i64 && (x * x) as usize <= t)
        .map(|x| ((x * x) as usize, BigInt::from(1)));
    let s = QSeries::from_terms(modulus.order(), t, terms);
    Ok(s)
}

/// The theta series of A_m(C) from swe(C), by x_j <- f_j.
pub fn theta_from_swe(w: &SWEPolynomial, precision: u64) -> Result<QSeries> {
    let modulus = w.modulus();
    let m = modulus.order() as u64;
    let classes = modulus.half() as usize + 1;
    let t = (precision * m) as usize;
    let fs: Vec<QSeries> = (0..classes)
        .map(|j| f_series(j as u32, modulus, precision))
        .collect::<Result<_>>()?;
    // powers are reused across monomials
    let mut powers: Vec<Vec<QSeries>> = fs
        .iter()
        .map(|f| vec![QSeries::one(modulus.order(), t), f.clone()])
        .collect();
    let mut total = QSeries::zero(modulus.order(), t);
    for (exps, &count) in w.terms() {
        if count == 0 {
            continue;
        }
        // lowest exponent of f_j is j^2/m
        let lowest: u64 = exps
            .iter()
            .enumerate()
            .map(|(j, &e)| (j * j) as u64 * e as u64)
            .sum();
        if lowest > t as u64 {
            continue;
        }
        let mut term = QSeries::one(modulus.order(), t);
        for (j, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as usize;
            while powers[j].len() <= e {
                let next = powers[j].last().unwrap().mul(&fs[j]).truncated(t);
                powers[j].push(next);
            }
            term = term.mul(&powers[j][e]).truncated(t);
        }
        total = total.add(&term.scale(&BigInt::from(count)));
    }
    Ok(total.truncated(t))
}

fn sigma3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(3);
        }
    }
    s
}

/// E4 = 1 + 240 sum sigma_3(m) q^(2m), exact through q^precision.
pub fn e4(precision: u64) -> QSeries {
    let t = precision as usize;
    let terms = (1..=t / 2).map(|m| (2 * m, sigma3(m as u64) * 240));
    QSeries::one(1, t).add(&QSeries::from_terms(1, t, terms))
}

/// Delta_24 = q^2 prod (1 - q^(2m))^24, exact through q^precision.
pub fn delta24(precision: u64) -> QSeries {
    let t = precision as usize;
    let mut prod = QSeries::one(1, t);
    for m in 1..=t / 2 {
        let factor = QSeries::from_terms(1, t, [(0, BigInt::from(1)), (2 * m, BigInt::from(-1))]);
        prod = prod.mul(&factor.pow(24)).truncated(t);
    }
    QSeries::from_terms(1, t, [(2, BigInt::from(1))])
        .mul(&prod)
        .truncated(t)
}

/// Shell counts as a series over denominator `den`.
pub fn series_from_shells(shells: &ShellTable, den: u32) -> Result<QSeries> {
    let d = Rational64::from_integer(den as i64);
    let top = shells.max_norm * d;
    let t = top.floor().to_integer() as usize;
    let mut terms = Vec::new();
    for (norm, &count) in &shells.counts {
        let e = *norm * d;
        if !e.is_integer() {
            return Err(Error::Input(format!(
                "norm {norm} is not a multiple of 1/{den}"
            )));
        }
        terms.push((e.to_integer() as usize, BigInt::from(count)));
    }
    Ok(QSeries::from_terms(den, t, terms))
}
