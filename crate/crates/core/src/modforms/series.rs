use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PAR_THRESHOLD: usize = 256;

/// Truncated power series in q^(1/D) with big-integer coefficients.
///
/// `coeffs[i]` is the coefficient of q^(i/D); every coefficient with index
/// up to `exact_through` is exact and nothing beyond it is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    den: u32,
    coeffs: Vec<BigInt>,
    exact_through: usize,
}

impl QSeries {
    /// All-zero series exact through q^(exact_through / den).
    pub fn zero(den: u32, exact_through: usize) -> Self {
        assert!(den > 0);
        QSeries {
            den,
            coeffs: vec![BigInt::zero(); exact_through + 1],
            exact_through,
        }
    }

    pub fn one(den: u32, exact_through: usize) -> Self {
        let mut s = Self::zero(den, exact_through);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds from (numerator, coefficient) pairs; terms past the bound are dropped.
    pub fn from_terms(
        den: u32,
        exact_through: usize,
        terms: impl IntoIterator<Item = (usize, BigInt)>,
    ) -> Self {
        let mut s = Self::zero(den, exact_through);
        for (i, c) in terms {
            if i <= exact_through {
                s.coeffs[i] += c;
            }
        }
        s
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    /// Numerator of the last exact exponent.
    pub fn exact_through(&self) -> usize {
        self.exact_through
    }

    /// Last exact exponent as a rational.
    pub fn precision(&self) -> Rational64 {
        Rational64::new(self.exact_through as i64, self.den as i64)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of q^(num/den); `None` past the exact range.
    pub fn coeff_num(&self, num: usize) -> Option<&BigInt> {
        self.coeffs.get(num)
    }

    /// Coefficient of q^e for a rational exponent e.
    pub fn coeff(&self, e: Rational64) -> Option<BigInt> {
        let scaled = e * Rational64::from_integer(self.den as i64);
        if e < Rational64::zero() {
            return Some(BigInt::zero());
        }
        if !scaled.is_integer() {
            return (e <= self.precision()).then(BigInt::zero);
        }
        self.coeffs.get(scaled.to_integer() as usize).cloned()
    }

    /// Coefficient of q^e for an integer exponent.
    pub fn coeff_int(&self, e: u64) -> Option<BigInt> {
        self.coeff(Rational64::from_integer(e as i64))
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Same series over a denominator that is a multiple of the current one.
    pub fn with_denominator(&self, den: u32) -> Result<QSeries> {
        if !den.is_multiple_of(self.den) {
            return Err(Error::Input(format!(
                "denominator {den} is not a multiple of {}",
                self.den
            )));
        }
        let f = (den / self.den) as usize;
        let mut out = Self::zero(den, self.exact_through * f + (f - 1));
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i * f] = c.clone();
        }
        Ok(out)
    }

    /// Rewrites over the smallest denominator that keeps all exponents exact.
    pub fn simplified(&self) -> QSeries {
        let mut g = self.den as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&i);
            }
        }
        if g <= 1 {
            return self.clone();
        }
        let den = self.den / g as u32;
        let mut out = Self::zero(den, self.exact_through / g);
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c = self.coeffs[i * g].clone();
        }
        out
    }

    fn aligned(&self, other: &QSeries) -> (QSeries, QSeries) {
        let den = self.den.lcm(&other.den);
        (
            self.with_denominator(den).expect("lcm is a multiple"),
            other.with_denominator(den).expect("lcm is a multiple"),
        )
    }

    /// Drops coefficients past a new, smaller bound.
    pub fn truncated(&self, exact_through: usize) -> QSeries {
        let t = exact_through.min(self.exact_through);
        QSeries {
            den: self.den,
            coeffs: self.coeffs[..=t].to_vec(),
            exact_through: t,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let (a, b) = self.aligned(other);
        let t = a.exact_through.min(b.exact_through);
        QSeries {
            den: a.den,
            coeffs: (0..=t).map(|i| &a.coeffs[i] + &b.coeffs[i]).collect(),
            exact_through: t,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        QSeries {
            den: self.den,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            exact_through: self.exact_through,
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (a, b) = self.aligned(other);
        // a valuation shift lets the product stay exact slightly further
        let va = a.valuation().unwrap_or(a.exact_through + 1);
        let vb = b.valuation().unwrap_or(b.exact_through + 1);
        let t = (a.exact_through + vb).min(b.exact_through + va);
        let coef = |i: usize| -> BigInt {
            let mut s = BigInt::zero();
            let lo = i.saturating_sub(b.exact_through);
            for j in lo..=i.min(a.exact_through) {
                if !a.coeffs[j].is_zero() && !b.coeffs[i - j].is_zero() {
                    s += &a.coeffs[j] * &b.coeffs[i - j];
                }
            }
            s
        };
        let coeffs: Vec<BigInt> = if t >= PAR_THRESHOLD {
            (0..=t).into_par_iter().map(coef).collect()
        } else {
            (0..=t).map(coef).collect()
        };
        QSeries {
            den: a.den,
            coeffs,
            exact_through: t,
        }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut result = QSeries::one(self.den, self.exact_through);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse; the constant term must be +1 or -1.
    pub fn reciprocal(&self) -> Result<QSeries> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::Domain(
                "series reciprocal needs a unit constant term".into(),
            ));
        }
        let t = self.exact_through;
        let mut inv = vec![BigInt::zero(); t + 1];
        inv[0] = c0.clone();
        for i in 1..=t {
            let mut s = BigInt::zero();
            for j in 1..=i {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &inv[i - j];
                }
            }
            inv[i] = -(s * c0);
        }
        Ok(QSeries {
            den: self.den,
            coeffs: inv,
            exact_through: t,
        })
    }

    /// Signed integer power, through the reciprocal for negative exponents.
    pub fn powi(&self, e: i64) -> Result<QSeries> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.reciprocal()?.pow((-e) as u32))
        }
    }

    /// Exact equality on the common exact range.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let (a, b) = self.aligned(other);
        let t = a.exact_through.min(b.exact_through);
        a.coeffs[..=t] == b.coeffs[..=t]
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            denominator: self.den,
            exact_through: self.exact_through,
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.to_string()))
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<QSeries> {
        if j.denominator == 0 {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        let mut s = Self::zero(j.denominator, j.exact_through);
        for (i, c) in &j.terms {
            let v: BigInt = c
                .parse()
                .map_err(|e| Error::Parse(format!("coefficient {c}: {e}")))?;
            if *i > j.exact_through {
                return Err(Error::Parse(format!("term {i} lies past the exact range")));
            }
            s.coeffs[*i] = v;
        }
        Ok(s)
    }
}

/// Machine format of a series.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesJson {
    pub denominator: u32,
    pub exact_through: usize,
    pub terms: Vec<(usize, String)>,
}

fn exponent_text(num: usize, den: u32) -> String {
    let r = Rational64::new(num as i64, den as i64);
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QSeries {
    /// `c · q^e` terms in ascending order, closed by the truncation term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a} · q^{}", exponent_text(i, self.den))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(
            f,
            " + O(q^{})",
            exponent_text(self.exact_through + 1, self.den)
        )
    }
}
