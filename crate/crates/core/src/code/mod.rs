//! Linear codes over Z_m: canonical forms, duals, self-duality, the Type II
//! test, weight enumeration and the extremal bound.

mod enumerate;
pub(crate) mod howell;
mod swe;

use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Modulus, ResidueVector};

pub use enumerate::Codewords;
pub use howell::HowellForm;
pub use swe::SWEPolynomial;

/// Refuse brute-force enumeration of codes larger than this by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// A submodule of Z_m^n given by generators.
#[derive(Clone, Debug)]
pub struct LinearCode {
    modulus: Modulus,
    length: usize,
    generators: Vec<ResidueVector>,
    canonical: OnceLock<HowellForm>,
}

/// Minimum Euclidean weight, either pinned down or bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum MinWeight {
    Exact(u64),
    LowerBound(u64),
}

impl MinWeight {
    pub fn value(self) -> u64 {
        match self {
            MinWeight::Exact(v) | MinWeight::LowerBound(v) => v,
        }
    }
}

impl LinearCode {
    pub fn new(modulus: Modulus, length: usize, generators: Vec<ResidueVector>) -> Result<Self> {
        for g in &generators {
            modulus.same(g.modulus())?;
            if g.len() != length {
                return Err(Error::LengthMismatch {
                    left: g.len(),
                    right: length,
                });
            }
        }
        Ok(LinearCode {
            modulus,
            length,
            generators,
            canonical: OnceLock::new(),
        })
    }

    /// Convenience constructor from integer rows (reduced mod m).
    pub fn from_rows(modulus: Modulus, length: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let gens = rows
            .iter()
            .map(|r| {
                if r.len() != length {
                    return Err(Error::LengthMismatch {
                        left: r.len(),
                        right: length,
                    });
                }
                Ok(ResidueVector::from_integers(modulus, r))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearCode::new(modulus, length, gens)
    }

    pub fn zero(modulus: Modulus, length: usize) -> Self {
        LinearCode {
            modulus,
            length,
            generators: Vec::new(),
            canonical: OnceLock::new(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn generators(&self) -> &[ResidueVector] {
        &self.generators
    }

    pub fn howell_form(&self) -> &HowellForm {
        self.canonical.get_or_init(|| {
            let rows: Vec<Vec<u32>> = self
                .generators
                .iter()
                .map(|g| g.entries().to_vec())
                .collect();
            HowellForm::compute(&rows, self.length, self.modulus.order())
        })
    }

    /// Canonical rows as residue vectors.
    pub fn canonical_rows(&self) -> Vec<ResidueVector> {
        self.howell_form()
            .rows()
            .iter()
            .map(|r| ResidueVector::from_raw(self.modulus, r.clone()))
            .collect()
    }

    pub fn contains(&self, v: &ResidueVector) -> Result<bool> {
        self.modulus.same(v.modulus())?;
        if v.len() != self.length {
            return Err(Error::LengthMismatch {
                left: v.len(),
                right: self.length,
            });
        }
        Ok(self.howell_form().contains(v.entries()))
    }

    pub fn cardinality(&self) -> BigUint {
        self.howell_form()
            .cardinality_factors()
            .fold(BigUint::from(1u32), |acc, f| acc * f)
    }

    /// |C| if it fits in a u64.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.howell_form()
            .cardinality_factors()
            .try_fold(1u64, |acc, f| acc.checked_mul(f as u64))
    }

    pub fn dual(&self) -> LinearCode {
        let rows = self.howell_form().rows().to_vec();
        let ker = howell::kernel(&rows, self.length, self.modulus.order());
        let gens = ker
            .into_iter()
            .map(|r| ResidueVector::from_raw(self.modulus, r))
            .collect();
        LinearCode {
            modulus: self.modulus,
            length: self.length,
            generators: gens,
            canonical: OnceLock::new(),
        }
    }

    /// True iff the two codes are the same submodule.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.modulus == other.modulus
            && self.length == other.length
            && self.howell_form().rows == other.howell_form().rows
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i..g.len()).all(|j| g[i].inner_product(&g[j]).unwrap() == 0))
    }

    /// Pairwise-orthogonal generators and |C|^2 = m^n.
    pub fn is_self_dual(&self) -> bool {
        let card = self.cardinality();
        card.clone() * card == BigUint::from(self.modulus.order()).pow(self.length as u32)
            && self.is_self_orthogonal()
    }

    /// Type II: self-dual over Z_2k with every Euclidean weight divisible by 4k.
    ///
    /// Enumerable codes are checked word by word; larger ones by the generator
    /// rows. The two agree on self-orthogonal codes because, for integer
    /// lifts, wt(x + y) = wt(x) + wt(y) + 2<x, y> and wt(a x) = a^2 wt(x)
    /// modulo 4k, and 2<x, y> vanishes mod 4k when <x, y> vanishes mod 2k.
    pub fn is_type_ii(&self) -> bool {
        self.is_type_ii_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn is_type_ii_with_cap(&self, cap: u64) -> bool {
        if !self.modulus.is_even() || !self.is_self_dual() {
            return false;
        }
        match self.type_ii_all_codewords(cap) {
            Ok(direct) => {
                debug_assert_eq!(direct, self.type_ii_generator_rows());
                direct
            }
            Err(_) => self.type_ii_generator_rows(),
        }
    }

    /// Every generator row has Euclidean weight divisible by 4k.
    pub fn type_ii_generator_rows(&self) -> bool {
        let four_k = 2 * self.modulus.order() as u64;
        self.generators
            .iter()
            .all(|g| g.euclidean_weight() % four_k == 0)
    }

    /// Every codeword has Euclidean weight divisible by 4k (by enumeration).
    pub fn type_ii_all_codewords(&self, cap: u64) -> Result<bool> {
        let four_k = 2 * self.modulus.order() as u64;
        Ok(self
            .codewords(cap)?
            .all(|c| c.euclidean_weight() % four_k == 0))
    }

    /// Streams every codeword exactly once, refusing codes larger than `cap`.
    pub fn codewords(&self, cap: u64) -> Result<Codewords<'_>> {
        match self.cardinality_u64() {
            Some(c) if c <= cap => Ok(Codewords::new(self)),
            _ => Err(Error::Resource {
                what: format!(
                    "code has {} codewords, enumeration cap is {cap}",
                    self.cardinality()
                ),
                certified_floor: None,
            }),
        }
    }

    pub fn swe(&self, cap: u64) -> Result<SWEPolynomial> {
        SWEPolynomial::of_code(self, cap)
    }

    pub fn min_euclidean_weight_bruteforce(&self, cap: u64) -> Result<u64> {
        self.codewords(cap)?
            .filter(|c| !c.is_zero())
            .map(|c| c.euclidean_weight())
            .min()
            .ok_or_else(|| Error::Domain("the zero code has no minimum weight".into()))
    }

    /// Decides extremality from a minimum-weight value. `None` means a lower
    /// bound that does not reach the bound, so the question stays open.
    pub fn is_extremal(&self, d_e: MinWeight) -> Result<Option<bool>> {
        let k = self.modulus.k().ok_or_else(|| {
            Error::Domain(format!(
                "extremality is defined over Z_2k only, not {}",
                self.modulus
            ))
        })?;
        if k > 6 {
            return Err(Error::Domain(format!(
                "the extremal bound is proved only for k <= 6 (got k = {k})"
            )));
        }
        let bound = extremal_bound(self.length, k);
        Ok(match d_e {
            MinWeight::Exact(d) => Some(d == bound),
            MinWeight::LowerBound(b) if b >= bound => Some(true),
            MinWeight::LowerBound(_) => None,
        })
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.same_code(other)
    }
}

impl Eq for LinearCode {}

/// Upper bound 4k floor(n/24) + 4k on d_E for Type II codes over Z_2k, k <= 6.
pub fn extremal_bound(n: usize, k: u32) -> u64 {
    4 * k as u64 * (n as u64 / 24) + 4 * k as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(k: u32) -> Modulus {
        Modulus::from_k(k).unwrap()
    }

    fn code(k: u32, n: usize, rows: &[&[i64]]) -> LinearCode {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        LinearCode::from_rows(z(k), n, &rows).unwrap()
    }

    fn all_vectors(m: u32, n: usize) -> Vec<Vec<u32>> {
        let total = (m as u64).pow(n as u32);
        (0..total)
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let c = (x % m as u64) as u32;
                        x /= m as u64;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(code(2, 2, &[&[1, 1]]).cardinality(), BigUint::from(4u32));
        assert_eq!(
            code(2, 2, &[&[2, 0], &[0, 2]]).cardinality(),
            BigUint::from(4u32)
        );
        assert_eq!(LinearCode::zero(z(3), 5).cardinality(), BigUint::from(1u32));
    }

    #[test]
    fn dual_examples() {
        let full = code(2, 2, &[&[1, 0], &[0, 1]]);
        assert!(full.dual().same_code(&LinearCode::zero(z(2), 2)));

        let two = code(2, 1, &[&[2]]);
        assert!(two.dual().same_code(&two));

        // brute force: x with x . (1,1) = 0 over Z_4
        let c = code(2, 2, &[&[1, 1]]);
        let d = c.dual();
        let expected: Vec<Vec<u32>> = all_vectors(4, 2)
            .into_iter()
            .filter(|v| (v[0] + v[1]) % 4 == 0)
            .collect();
        assert_eq!(expected.len(), 4);
        for v in all_vectors(4, 2) {
            let rv = ResidueVector::from_raw(z(2), v.clone());
            assert_eq!(d.contains(&rv).unwrap(), expected.contains(&v));
        }
        assert!(d.same_code(&code(2, 2, &[&[1, 3]])));
    }

    #[test]
    fn self_dual_and_type_ii_examples() {
        let two = code(2, 1, &[&[2]]);
        assert!(two.is_self_dual());
        assert!(two.dual().same_code(&two));
        assert!(!two.is_type_ii());
        assert!(!code(2, 2, &[&[1, 1]]).is_self_dual());

        // (2,0),(0,2) over Z_4 is self-dual of length 2 but 4 is not divisible by 8
        let c = code(2, 2, &[&[2, 0], &[0, 2]]);
        assert!(c.is_self_dual());
        assert!(!c.is_type_ii());

        // self-dual Z_4 code of length 4: 2 * identity
        let c4 = code(
            2,
            4,
            &[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]],
        );
        assert!(c4.is_self_dual());
        assert!(!c4.is_type_ii());
    }

    #[test]
    fn type_ii_octacode_style_example() {
        // [I | M] over Z_4 with M the 4x4 matrix of the length-8 seed search.
        let c = code(
            2,
            8,
            &[
                &[1, 0, 0, 0, 2, 1, 1, 1],
                &[0, 1, 0, 0, 3, 2, 3, 1],
                &[0, 0, 1, 0, 3, 1, 2, 3],
                &[0, 0, 0, 1, 3, 3, 1, 2],
            ],
        );
        if c.is_self_dual() {
            assert_eq!(
                c.type_ii_generator_rows(),
                c.type_ii_all_codewords(1 << 20).unwrap()
            );
        }
    }

    #[test]
    fn enumeration_examples() {
        let c = code(2, 2, &[&[1, 1]]);
        let mut words: Vec<Vec<u32>> = c
            .codewords(100)
            .unwrap()
            .map(|w| w.entries().to_vec())
            .collect();
        words.sort();
        assert_eq!(words, vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
        let zero = LinearCode::zero(z(2), 3);
        assert_eq!(zero.codewords(1).unwrap().count(), 1);
        assert_eq!(
            code(2, 2, &[&[2, 0], &[0, 2]])
                .codewords(10)
                .unwrap()
                .count(),
            4
        );
        assert!(matches!(c.codewords(3), Err(Error::Resource { .. })));
    }

    #[test]
    fn min_weight_examples() {
        assert_eq!(
            code(2, 2, &[&[1, 1]])
                .min_euclidean_weight_bruteforce(100)
                .unwrap(),
            2
        );
        assert_eq!(
            code(2, 1, &[&[2]])
                .min_euclidean_weight_bruteforce(100)
                .unwrap(),
            4
        );
        assert!(matches!(
            LinearCode::zero(z(2), 4).min_euclidean_weight_bruteforce(100),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(extremal_bound(24, 1), 8);
        assert_eq!(extremal_bound(56, 4), 48);
        assert_eq!(extremal_bound(72, 6), 96);
        assert_eq!(extremal_bound(8, 3), 12);
    }

    #[test]
    fn is_extremal_rules() {
        let c = code(2, 2, &[&[2, 0], &[0, 2]]);
        assert_eq!(c.is_extremal(MinWeight::Exact(8)).unwrap(), Some(true));
        assert_eq!(c.is_extremal(MinWeight::Exact(4)).unwrap(), Some(false));
        assert_eq!(c.is_extremal(MinWeight::LowerBound(4)).unwrap(), None);
        let big = LinearCode::zero(z(7), 8);
        assert!(matches!(
            big.is_extremal(MinWeight::Exact(28)),
            Err(Error::Domain(_))
        ));
        let odd = LinearCode::zero(Modulus::new(5).unwrap(), 8);
        assert!(odd.is_extremal(MinWeight::Exact(4)).is_err());
    }

    fn arb_code() -> impl Strategy<Value = LinearCode> {
        (1u32..4, 1usize..5).prop_flat_map(|(k, n)| {
            let m = 2 * k as i64;
            proptest::collection::vec(proptest::collection::vec(0..m, n), 0..4)
                .prop_map(move |rows| LinearCode::from_rows(z(k), n, &rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn double_dual_is_identity(c in arb_code()) {
            prop_assert!(c.dual().dual().same_code(&c));
        }

        #[test]
        fn dual_cardinality_product(c in arb_code()) {
            let total = BigUint::from(c.modulus().order()).pow(c.length() as u32);
            prop_assert_eq!(c.cardinality() * c.dual().cardinality(), total);
        }

        #[test]
        fn swe_sums_to_cardinality(c in arb_code()) {
            let w = c.swe(1 << 16).unwrap();
            prop_assert_eq!(BigUint::from(w.total()), c.cardinality());
        }
    }

    #[test]
    fn weights_divisible_by_4k_form_a_submodule_in_self_dual_codes() {
        // In a self-dual code, words of weight 0 mod 4k are closed under + and scaling.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..4000 {
            let k = rng.gen_range(1..4u32);
            let n = 2 * rng.gen_range(1..4usize);
            let rows: Vec<Vec<i64>> = (0..n / 2 + 1)
                .map(|_| (0..n).map(|_| rng.gen_range(0..2 * k as i64)).collect())
                .collect();
            let c = LinearCode::from_rows(z(k), n, &rows).unwrap().dual();
            let c = if c.is_self_dual() { c } else { continue };
            checked += 1;
            let four_k = 4 * k as u64;
            let good: Vec<ResidueVector> = c
                .codewords(1 << 16)
                .unwrap()
                .filter(|w| w.euclidean_weight() % four_k == 0)
                .collect();
            for x in &good {
                for a in 0..2 * k as i64 {
                    assert_eq!(x.scale(a).euclidean_weight() % four_k, 0);
                }
                for y in &good {
                    assert_eq!(x.add(y).unwrap().euclidean_weight() % four_k, 0);
                }
            }
            assert_eq!(
                c.type_ii_generator_rows(),
                c.type_ii_all_codewords(1 << 16).unwrap()
            );
        }
        assert!(checked > 0);
    }
}
