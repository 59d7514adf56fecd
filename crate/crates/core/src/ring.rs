//! Arithmetic over Z_m (m = 2k in every case the theory cares about), the
//! signed representative map, and Euclidean weights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring Z_m. Built from `k` for the even rings Z_2k; odd orders are
/// admitted so that codes over prime fields (F_5) can share the machinery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(u32);

impl Modulus {
    /// Z_2k.
    pub fn from_k(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("k must be at least 1".into()));
        }
        k.checked_mul(2)
            .map(Modulus)
            .ok_or_else(|| Error::Input(format!("k = {k} is too large")))
    }

    /// Z_m for any m >= 2.
    pub fn new(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Input(format!(
                "ring order {order} must be at least 2"
            )));
        }
        if order > (1 << 30) {
            return Err(Error::Input(format!("ring order {order} is too large")));
        }
        Ok(Modulus(order))
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.0
    }

    /// `k` with order = 2k, or `None` for an odd ring.
    pub fn k(self) -> Option<u32> {
        self.0.is_multiple_of(2).then_some(self.0 / 2)
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Largest absolute value produced by `rho`; equals k for Z_2k.
    #[inline]
    pub fn half(self) -> u32 {
        self.0 / 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    pub fn check(self, x: i64) -> Result<u32> {
        if (0..self.0 as i64).contains(&x) {
            Ok(x as u32)
        } else {
            Err(Error::ResidueOutOfRange {
                value: x,
                modulus: self.0,
            })
        }
    }

    pub(crate) fn same(self, other: Modulus) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.0)
    }
}

/// Signed representative of a residue: 0..=k stay put, k+1..2k-1 map to
/// 1-k..-1. For an odd order m the range is symmetric, [-(m-1)/2, (m-1)/2].
pub fn rho(x: i64, m: Modulus) -> Result<i64> {
    let x = m.check(x)?;
    Ok(rho_unchecked(x, m))
}

#[inline]
pub(crate) fn rho_unchecked(x: u32, m: Modulus) -> i64 {
    if x <= m.half() {
        x as i64
    } else {
        x as i64 - m.order() as i64
    }
}

/// Euclidean weight of a single residue, min{x^2, (m - x)^2}.
#[inline]
pub fn residue_weight(x: u32, m: Modulus) -> u64 {
    let r = rho_unchecked(x, m);
    (r * r) as u64
}

/// A length-n vector over Z_m, entries stored canonically in [0, m).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector {
    modulus: Modulus,
    entries: Vec<u32>,
}

impl ResidueVector {
    pub fn new(modulus: Modulus, entries: &[i64]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|&x| modulus.check(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidueVector { modulus, entries })
    }

    /// Reduces arbitrary integers into [0, m).
    pub fn from_integers(modulus: Modulus, values: &[i64]) -> Self {
        ResidueVector {
            modulus,
            entries: values.iter().map(|&x| modulus.reduce(x)).collect(),
        }
    }

    pub(crate) fn from_raw(modulus: Modulus, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus.order()));
        ResidueVector { modulus, entries }
    }

    pub fn zero(modulus: Modulus, len: usize) -> Self {
        ResidueVector {
            modulus,
            entries: vec![0; len],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Image under `rho`, coordinate-wise.
    pub fn lift(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|&x| rho_unchecked(x, self.modulus))
            .collect()
    }

    pub fn euclidean_weight(&self) -> u64 {
        self.entries
            .iter()
            .map(|&x| residue_weight(x, self.modulus))
            .sum()
    }

    pub fn inner_product(&self, other: &ResidueVector) -> Result<u32> {
        self.compatible(other)?;
        let m = self.modulus.order() as u64;
        let s = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m);
        Ok(s as u32)
    }

    pub fn add(&self, other: &ResidueVector) -> Result<ResidueVector> {
        self.compatible(other)?;
        let m = self.modulus.order();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % m)
            .collect();
        Ok(ResidueVector::from_raw(self.modulus, entries))
    }

    pub fn scale(&self, c: i64) -> ResidueVector {
        let m = self.modulus.order() as i64;
        let c = c.rem_euclid(m);
        let entries = self
            .entries
            .iter()
            .map(|&a| ((a as i64 * c) % m) as u32)
            .collect();
        ResidueVector::from_raw(self.modulus, entries)
    }

    /// Number of coordinates in each class 0, ±1, ..., ±(half-1), half
    /// (the last class is ±half for odd orders).
    pub fn composition(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.modulus.half() as usize + 1];
        for &x in &self.entries {
            counts[rho_unchecked(x, self.modulus).unsigned_abs() as usize] += 1;
        }
        counts
    }

    fn compatible(&self, other: &ResidueVector) -> Result<()> {
        self.modulus.same(other.modulus)?;
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn euclidean_weight(v: &ResidueVector) -> u64 {
    v.euclidean_weight()
}

pub fn inner_product(u: &ResidueVector, v: &ResidueVector) -> Result<u32> {
    u.inner_product(v)
}
