//! Codes from four negacirculant blocks, the bundled code catalog, and a
//! seeded random search for new negacirculant pairs.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::ring::{Modulus, ResidueVector};

/// Environment variable that overrides the catalog path.
pub const CATALOG_ENV: &str = "ZKLAT_CATALOG";

const BUNDLED_CATALOG: &str = include_str!("../data/catalog-v1.json");

/// Square matrix whose rows are successive right shifts of `first_row`,
/// negating each entry that wraps around.
pub fn negacirculant(first_row: &ResidueVector) -> Vec<Vec<u32>> {
    let n = first_row.len();
    let m = first_row.modulus().order();
    let r = first_row.entries();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j >= i {
                        r[j - i]
                    } else {
                        (m - r[j + n - i]) % m
                    }
                })
                .collect()
        })
        .collect()
}

/// First rows of the two negacirculant blocks A and B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegacirculantSpec {
    first_row_a: ResidueVector,
    first_row_b: ResidueVector,
}

impl NegacirculantSpec {
    pub fn new(first_row_a: ResidueVector, first_row_b: ResidueVector) -> Result<Self> {
        first_row_a.modulus().same(first_row_b.modulus())?;
        if first_row_a.len() != first_row_b.len() {
            return Err(Error::LengthMismatch {
                left: first_row_a.len(),
                right: first_row_b.len(),
            });
        }
        if first_row_a.is_empty() {
            return Err(Error::Input("negacirculant rows must be nonempty".into()));
        }
        Ok(NegacirculantSpec {
            first_row_a,
            first_row_b,
        })
    }

    pub fn from_rows(modulus: Modulus, a: &[i64], b: &[i64]) -> Result<Self> {
        NegacirculantSpec::new(
            ResidueVector::new(modulus, a)?,
            ResidueVector::new(modulus, b)?,
        )
    }

    pub fn modulus(&self) -> Modulus {
        self.first_row_a.modulus()
    }

    pub fn block_size(&self) -> usize {
        self.first_row_a.len()
    }

    /// Length of the resulting code, four times the block size.
    pub fn code_length(&self) -> usize {
        4 * self.block_size()
    }

    pub fn first_row_a(&self) -> &ResidueVector {
        &self.first_row_a
    }

    pub fn first_row_b(&self) -> &ResidueVector {
        &self.first_row_b
    }

    /// Entries of A A^T + B B^T + I that are nonzero mod m, as (row, col, value).
    pub fn gram_defects(&self) -> Vec<(usize, usize, u32)> {
        let m = self.modulus().order() as u64;
        let a = negacirculant(&self.first_row_a);
        let b = negacirculant(&self.first_row_b);
        let n = self.block_size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut s = (i == j) as u64;
                for t in 0..n {
                    s += a[i][t] as u64 * a[j][t] as u64 + b[i][t] as u64 * b[j][t] as u64;
                }
                let s = (s % m) as u32;
                if s != 0 {
                    out.push((i, j, s));
                }
            }
        }
        out
    }

    /// Generator rows [ I | A B ; -B^T A^T ].
    pub fn generator_rows(&self) -> Vec<Vec<u32>> {
        let m = self.modulus().order();
        let n = self.block_size();
        let a = negacirculant(&self.first_row_a);
        let b = negacirculant(&self.first_row_b);
        let neg = |x: u32| (m - x) % m;
        (0..2 * n)
            .map(|i| {
                let mut row = vec![0u32; 4 * n];
                row[i] = 1;
                for j in 0..n {
                    let (left, right) = if i < n {
                        (a[i][j], b[i][j])
                    } else {
                        let r = i - n;
                        (neg(b[j][r]), a[j][r])
                    };
                    row[2 * n + j] = left;
                    row[3 * n + j] = right;
                }
                row
            })
            .collect()
    }
}

/// The code generated by the four-negacirculant matrix, provided
/// A A^T + B B^T = -I.
pub fn four_negacirculant_code(spec: &NegacirculantSpec) -> Result<LinearCode> {
    if let Some(&(i, j, v)) = spec.gram_defects().first() {
        return Err(Error::Construction(format!(
            "A A^T + B B^T + I has entry {v} at ({i}, {j}) over {}; expected 0",
            spec.modulus()
        )));
    }
    let m = spec.modulus();
    let gens = spec
        .generator_rows()
        .into_iter()
        .map(|r| ResidueVector::from_raw(m, r))
        .collect();
    LinearCode::new(m, spec.code_length(), gens)
}

/// Properties a catalog entry asserts about its code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub self_dual: bool,
    pub type_ii: bool,
    /// `None` where extremality is undefined (odd rings) or not asserted.
    pub extremal: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CatalogRecord {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u32>,
    rows_a: Vec<i64>,
    rows_b: Vec<i64>,
    claims: Claims,
    source: String,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: NegacirculantSpec,
    pub claims: Claims,
    pub source: String,
}

impl CatalogEntry {
    pub fn modulus(&self) -> Modulus {
        self.spec.modulus()
    }

    pub fn length(&self) -> usize {
        self.spec.code_length()
    }

    pub fn code(&self) -> Result<LinearCode> {
        four_negacirculant_code(&self.spec)
    }

    /// Parses one catalog record, the format of an inline code file.
    pub fn from_json(text: &str) -> Result<Self> {
        CatalogEntry::from_record(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    fn from_record(rec: CatalogRecord) -> Result<Self> {
        let modulus = match (rec.k, rec.modulus) {
            (Some(k), None) => Modulus::from_k(k)?,
            (None, Some(m)) => Modulus::new(m)?,
            (Some(k), Some(m)) if 2 * k == m => Modulus::new(m)?,
            _ => {
                return Err(Error::Parse(format!(
                    "catalog entry {}: give k, or modulus, or a consistent pair",
                    rec.name
                )))
            }
        };
        Ok(CatalogEntry {
            spec: NegacirculantSpec::from_rows(modulus, &rec.rows_a, &rec.rows_b)?,
            name: rec.name,
            claims: rec.claims,
            source: rec.source,
        })
    }

    fn to_record(&self) -> CatalogRecord {
        let m = self.modulus();
        let to_i64 = |v: &ResidueVector| v.entries().iter().map(|&x| x as i64).collect();
        CatalogRecord {
            name: self.name.clone(),
            k: m.k(),
            modulus: if m.is_even() { None } else { Some(m.order()) },
            rows_a: to_i64(self.spec.first_row_a()),
            rows_b: to_i64(self.spec.first_row_b()),
            claims: self.claims,
            source: self.source.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<CatalogRecord> = serde_json::from_str(text)?;
        let entries = records
            .into_iter()
            .map(CatalogEntry::from_record)
            .collect::<Result<Vec<_>>>()?;
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|f| f.name == e.name) {
                return Err(Error::Parse(format!("duplicate catalog name {}", e.name)));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn bundled() -> Self {
        Catalog::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Catalog::from_json(&std::fs::read_to_string(path)?)
    }

    /// The catalog named by `ZKLAT_CATALOG`, or the bundled one.
    pub fn load_default() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) => Catalog::from_path(p),
            None => Ok(Catalog::bundled()),
        }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::NotFound(format!("no catalog entry named {name}")))
    }

    /// Frozen length-8 Type II seed over Z_2k.
    pub fn seed(&self, k: u32) -> Result<&CatalogEntry> {
        self.get(&format!("S_{{{},8}}", 2 * k))
    }

    pub fn to_json(&self) -> String {
        let records: Vec<CatalogRecord> =
            self.entries.iter().map(CatalogEntry::to_record).collect();
        serde_json::to_string_pretty(&records).expect("catalog serializes")
    }
}

/// The bundled catalog.
pub fn catalog() -> Catalog {
    Catalog::bundled()
}

const SEARCH_BATCH: u64 = 4096;

/// Random search for negacirculant pairs with A A^T + B B^T = -I.
///
/// `budget` counts candidate pairs. Candidates come in fixed-size batches,
/// each drawn from its own ChaCha stream keyed by (seed, batch index), and
/// results are concatenated in batch order, so the output depends only on
/// the arguments. When 8 divides the length only Type II codes are kept.
pub fn search_negacirculant(
    modulus: Modulus,
    target_length: usize,
    budget: u64,
    seed: u64,
) -> Result<Vec<NegacirculantSpec>> {
    if target_length == 0 || !target_length.is_multiple_of(4) {
        return Err(Error::Input(format!(
            "target length {target_length} is not a positive multiple of 4"
        )));
    }
    let block = target_length / 4;
    let m = modulus.order();
    let want_type_ii = target_length.is_multiple_of(8) && modulus.is_even();
    let batches = budget.div_ceil(SEARCH_BATCH);
    let found: Vec<Vec<NegacirculantSpec>> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let count = SEARCH_BATCH.min(budget - batch * SEARCH_BATCH);
            let mut out = Vec::new();
            let mut a = vec![0u32; block];
            let mut b = vec![0u32; block];
            for _ in 0..count {
                a.iter_mut().for_each(|x| *x = rng.gen_range(0..m));
                b.iter_mut().for_each(|x| *x = rng.gen_range(0..m));
                let diag: u64 = a.iter().chain(&b).map(|&x| x as u64 * x as u64).sum();
                if !(diag + 1).is_multiple_of(m as u64) {
                    continue;
                }
                let spec = NegacirculantSpec {
                    first_row_a: ResidueVector::from_raw(modulus, a.clone()),
                    first_row_b: ResidueVector::from_raw(modulus, b.clone()),
                };
                if !spec.gram_defects().is_empty() {
                    continue;
                }
                if want_type_ii {
                    let code = four_negacirculant_code(&spec).expect("checked above");
                    if !code.type_ii_generator_rows() {
                        continue;
                    }
                }
                out.push(spec);
            }
            out
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u32) -> Modulus {
        Modulus::from_k(k).unwrap()
    }

    #[test]
    fn negacirculant_shapes() {
        let m = z(6);
        let r = ResidueVector::new(m, &[3, 5]).unwrap();
        assert_eq!(negacirculant(&r), vec![vec![3, 5], vec![7, 3]]);
        let r = ResidueVector::new(m, &[4]).unwrap();
        assert_eq!(negacirculant(&r), vec![vec![4]]);
        let r = ResidueVector::new(m, &[1, 2, 3]).unwrap();
        assert_eq!(
            negacirculant(&r),
            vec![vec![1, 2, 3], vec![9, 1, 2], vec![10, 9, 1]]
        );
    }

    #[test]
    fn negacirculant_is_linear_and_nnt_symmetric() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let k = rng.gen_range(1..7);
            let m = z(k);
            let n = rng.gen_range(1..7);
            let u: Vec<i64> = (0..n).map(|_| rng.gen_range(0..2 * k as i64)).collect();
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..2 * k as i64)).collect();
            let c = rng.gen_range(0..2 * k as i64);
            let u = ResidueVector::new(m, &u).unwrap();
            let v = ResidueVector::new(m, &v).unwrap();
            let lhs = negacirculant(&u.scale(c).add(&v).unwrap());
            let nu = negacirculant(&u);
            let nv = negacirculant(&v);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(lhs[i][j], ((c as u32 * nu[i][j] + nv[i][j]) % (2 * k)));
                }
            }
            let ord = 2 * k as u64;
            for i in 0..n {
                for j in 0..n {
                    let s = |a: usize, b: usize| -> u64 {
                        (0..n)
                            .map(|t| nu[a][t] as u64 * nu[b][t] as u64)
                            .sum::<u64>()
                            % ord
                    };
                    assert_eq!(s(i, j), s(j, i));
                }
            }
        }
    }

    #[test]
    fn all_zero_rows_fail_the_condition() {
        let spec = NegacirculantSpec::from_rows(z(2), &[0, 0], &[0, 0]).unwrap();
        let err = four_negacirculant_code(&spec).unwrap_err();
        assert!(matches!(err, Error::Construction(ref s) if s.contains("(0, 0)")));
    }

    #[test]
    fn table_codes_are_self_dual() {
        let cat = catalog();
        for name in ["C_{12,32}", "C_{8,56}"] {
            let e = cat.get(name).unwrap();
            let c = e.code().unwrap();
            assert_eq!(c.length(), e.length());
            assert!(c.is_self_dual(), "{name}");
            assert!(c.is_type_ii(), "{name}");
            assert_eq!(
                c.cardinality(),
                num_bigint::BigUint::from(c.modulus().order()).pow(c.length() as u32 / 2)
            );
        }
    }

    #[test]
    fn catalog_lookup() {
        let cat = catalog();
        let e = cat.get("C_{10,64}").unwrap();
        assert_eq!(e.modulus().order(), 10);
        assert_eq!(e.length(), 64);
        assert_eq!(
            e.spec.first_row_a().entries(),
            &[0, 0, 4, 3, 2, 0, 0, 1, 9, 0, 0, 0, 9, 1, 2, 0]
        );
        let f = cat.get("C_{5,48}").unwrap();
        assert_eq!(f.modulus().order(), 5);
        assert!(f.claims.self_dual && !f.claims.type_ii);
        assert!(matches!(cat.get("C_{7,7}"), Err(Error::NotFound(_))));
        assert_eq!(cat.entries().len(), 8 + 6);
    }

    #[test]
    fn catalog_json_round_trip() {
        let cat = catalog();
        let again = Catalog::from_json(&cat.to_json()).unwrap();
        assert_eq!(again.entries().len(), cat.entries().len());
        for (a, b) in cat.entries().iter().zip(again.entries()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.spec, b.spec);
            assert_eq!(a.claims, b.claims);
        }
        assert!(Catalog::from_json(
            r#"[{"name":"x","rows_a":[1],"rows_b":[0],
            "claims":{"self_dual":true,"type_ii":false,"extremal":null},"source":"t"}]"#
        )
        .is_err());
    }

    #[test]
    fn search_finds_type_ii_seeds() {
        for k in [2, 6] {
            let found = search_negacirculant(z(k), 8, 50_000, 1).unwrap();
            assert!(!found.is_empty(), "k = {k}");
            for spec in &found[..found.len().min(5)] {
                let c = four_negacirculant_code(spec).unwrap();
                assert!(c.is_self_dual());
                assert!(c.is_type_ii());
            }
        }
    }

    #[test]
    fn search_at_length_four_is_self_dual_but_not_type_ii() {
        let found = search_negacirculant(z(1), 4, 1000, 5).unwrap();
        assert!(!found.is_empty());
        for spec in &found {
            let c = four_negacirculant_code(spec).unwrap();
            assert!(c.is_self_dual());
            assert!(!c.is_type_ii());
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = search_negacirculant(z(3), 8, 20_000, 42).unwrap();
        let b = search_negacirculant(z(3), 8, 20_000, 42).unwrap();
        assert_eq!(a, b);
        assert!(search_negacirculant(z(3), 6, 10, 0).is_err());
    }
}
