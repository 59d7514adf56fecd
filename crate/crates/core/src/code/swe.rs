use std::collections::BTreeMap;

use crate::error::Result;
use crate::ring::Modulus;

use super::LinearCode;

/// Symmetrized weight enumerator: for each composition (n_0, ..., n_k),
/// where n_j counts coordinates equal to ±j, the number of codewords with
/// that composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWEPolynomial {
    modulus: Modulus,
    length: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl SWEPolynomial {
    pub fn of_code(code: &LinearCode, cap: u64) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for c in code.codewords(cap)? {
            *terms.entry(c.composition()).or_insert(0u64) += 1;
        }
        Ok(SWEPolynomial {
            modulus: code.modulus(),
            length: code.length(),
            terms,
        })
    }

    /// Builds an enumerator from explicit terms; every exponent tuple must
    /// have `half + 1` entries summing to `length`.
    pub fn from_terms(
        modulus: Modulus,
        length: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, u64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != modulus.half() as usize + 1
                || exp.iter().map(|&e| e as usize).sum::<usize>() != length
            {
                return Err(crate::Error::Input(format!(
                    "exponent tuple {exp:?} does not describe a length-{length} word over {modulus}"
                )));
            }
            if c != 0 {
                *map.entry(exp).or_insert(0) += c;
            }
        }
        Ok(SWEPolynomial {
            modulus,
            length,
            terms: map,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.terms
    }

    pub fn coefficient(&self, exponents: &[u32]) -> u64 {
        self.terms.get(exponents).copied().unwrap_or(0)
    }

    /// Sum of all coefficients, i.e. |C|.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }
}
