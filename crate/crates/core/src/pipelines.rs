//! End-to-end checks that chain codes, lattices and q-series, each
//! returning a serializable report.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use crate::code::{extremal_bound, LinearCode, MinWeight, DEFAULT_ENUMERATION_CAP};
use crate::constructions::{Catalog, CatalogEntry, Claims};
use crate::error::{Error, Result};
use crate::lattice::{
    code_from_frame, construction_a, double_frame, even_neighbors, even_sublattice,
    frame_coordinates, standard_frame, EnumOptions, Frame, LatticeBasis,
};
use crate::modforms::{e4, extremal_defect, series_from_shells, theta_from_swe};

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub stage: String,
    pub ok: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub pipeline: String,
    pub ok: bool,
    /// A stage stopped on an exhausted enumeration budget.
    pub resource_exhausted: bool,
    pub stages: Vec<Stage>,
}

impl PipelineReport {
    fn new(name: &str) -> Self {
        PipelineReport {
            pipeline: name.to_string(),
            ok: true,
            resource_exhausted: false,
            stages: Vec::new(),
        }
    }

    fn push(&mut self, stage: &str, ok: bool, detail: Value) -> bool {
        self.ok &= ok;
        self.stages.push(Stage {
            stage: stage.to_string(),
            ok,
            detail,
        });
        ok
    }

    /// Records a failed stage from an error; budget exhaustion is flagged.
    fn fail(&mut self, stage: &str, err: &Error) {
        if matches!(err, Error::Resource { .. }) {
            self.resource_exhausted = true;
        }
        let mut detail = json!({ "error": err.to_string() });
        if let Error::Resource {
            certified_floor: Some(f),
            ..
        } = err
        {
            detail["certified_floor"] = json!(f.to_string());
        }
        self.push(stage, false, detail);
    }

    /// Name of the first failing stage.
    pub fn failed_stage(&self) -> Option<&str> {
        self.stages.iter().find(|s| !s.ok).map(|s| s.stage.as_str())
    }
}

fn big(c: Option<BigInt>) -> String {
    c.map(|c| c.to_string()).unwrap_or_else(|| "?".into())
}

/// Three-way agreement of E4 from sigma_3, from the seed's swe and from
/// the shells of its Construction A lattice.
pub fn e4_identity(
    catalog: &Catalog,
    k: u32,
    precision: u64,
    opts: &EnumOptions,
) -> PipelineReport {
    let mut r = PipelineReport::new("e4-identity");
    let entry = match catalog.seed(k) {
        Ok(e) => e,
        Err(e) => {
            r.fail("seed", &e);
            return r;
        }
    };
    let code = match entry.code() {
        Ok(c) => c,
        Err(e) => {
            r.fail("seed", &e);
            return r;
        }
    };
    r.push(
        "seed",
        code.is_type_ii(),
        json!({ "name": entry.name, "modulus": code.modulus().order(), "length": code.length() }),
    );
    let sigma = e4(precision);
    let swe_theta = match code
        .swe(DEFAULT_ENUMERATION_CAP)
        .and_then(|w| theta_from_swe(&w, precision))
    {
        Ok(t) => t,
        Err(e) => {
            r.fail("swe substitution", &e);
            return r;
        }
    };
    let shells = match construction_a(&code)
        .and_then(|l| l.shell_sizes(Rational64::from_integer(precision as i64), opts))
        .and_then(|s| series_from_shells(&s, 1))
    {
        Ok(s) => s,
        Err(e) => {
            r.fail("lattice shells", &e);
            return r;
        }
    };
    let table: Vec<Value> = (0..=precision)
        .step_by(2)
        .map(|e| {
            json!({
                "exponent": e,
                "sigma3": big(sigma.coeff_int(e)),
                "swe": big(swe_theta.coeff_int(e)),
                "shells": big(shells.coeff_int(e)),
            })
        })
        .collect();
    let agree = swe_theta.agrees_with(&sigma)
        && shells.agrees_with(&sigma)
        && swe_theta.precision() >= sigma.precision()
        && shells.precision() >= sigma.precision();
    r.push(
        "three-way agreement",
        agree,
        json!({ "coefficients": table }),
    );
    r
}

/// Extremal defects for n = 8..72 and k = 1..6; every value must be positive.
pub fn defect_table(precision: Option<u64>) -> PipelineReport {
    let mut r = PipelineReport::new("thm1-table");
    let mut rows = Vec::new();
    let mut all_positive = true;
    for m in 1..=9usize {
        let n = 8 * m;
        let mut row = BTreeMap::new();
        for k in 1..=6u32 {
            match extremal_defect(n, k, precision) {
                Ok(d) => {
                    all_positive &= d.is_positive();
                    row.insert(format!("k={k}"), d.to_string());
                }
                Err(e) => {
                    r.fail(&format!("defect n={n} k={k}"), &e);
                    return r;
                }
            }
        }
        rows.push(json!({ "n": n, "defects": row }));
    }
    r.push(
        "all defects positive",
        all_positive,
        json!({ "table": rows }),
    );
    r
}

/// Length-8 Z_6 seed -> A_6 -> doubled 6-frame -> Type II code over Z_12.
pub fn doubling_small(catalog: &Catalog) -> PipelineReport {
    let mut r = PipelineReport::new("prop4.3-small");
    let run = |r: &mut PipelineReport| -> Result<()> {
        let entry = catalog.seed(3)?;
        let code = entry.code()?;
        r.push(
            "seed",
            code.is_self_dual() && code.is_type_ii(),
            json!({ "name": entry.name, "modulus": 6, "length": code.length() }),
        );
        let lattice = construction_a(&code)?;
        let inv = lattice.invariants();
        r.push(
            "construction A",
            inv.even && inv.unimodular,
            json!({ "even": inv.even, "unimodular": inv.unimodular }),
        );
        let frame = standard_frame(&code)?;
        let doubled = double_frame(&frame)?;
        r.push(
            "double frame",
            doubled.norm() == Rational64::from_integer(12),
            json!({ "norm": doubled.norm().to_string(), "vectors": doubled.len() }),
        );
        let new_code = code_from_frame(&lattice, &doubled)?;
        let self_dual = new_code.is_self_dual();
        let type_ii = new_code.is_type_ii();
        r.push(
            "code from frame",
            new_code.modulus().order() == 12 && self_dual && type_ii,
            json!({
                "modulus": new_code.modulus().order(),
                "length": new_code.length(),
                "self_dual": self_dual,
                "type_ii": type_ii,
                "generators": new_code.canonical_rows().iter().map(|v| v.entries().to_vec()).collect::<Vec<_>>(),
            }),
        );
        let rebuilt = construction_a(&new_code)?;
        let same_gram = gram_matches_via_frame(&lattice, &rebuilt, &doubled)?;
        r.push(
            "gram certificate",
            same_gram,
            json!({ "scale_in": 6, "scale_out": 12 }),
        );
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.fail("pipeline", &e);
    }
    r
}

/// Checks that the frame-coordinate map sends the basis of `lattice` into
/// `rebuilt` while scaling the Gram matrix by the frame norm.
fn gram_matches_via_frame(
    lattice: &LatticeBasis,
    rebuilt: &LatticeBasis,
    frame: &Frame,
) -> Result<bool> {
    let coords = frame_coordinates(&frame.rehost(lattice)?)?;
    let l = frame.norm().to_integer();
    let s = lattice.scale() as i64;
    if rebuilt.scale() as i64 != l || !coords.iter().all(|c| rebuilt.contains(c)) {
        return Ok(false);
    }
    for (i, ci) in coords.iter().enumerate() {
        for (j, cj) in coords.iter().enumerate() {
            let d: i64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            if d * s != lattice.gram_scaled()[i][j] * l {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every vector of `small` lies in `big`.
fn sublattice_of(small: &LatticeBasis, big: &LatticeBasis) -> bool {
    let l = small.scale().lcm(&big.scale());
    match (small.rescaled(l), big.rescaled(l)) {
        (Ok(a), Ok(b)) => a.rows().iter().all(|r| b.contains(r)),
        _ => false,
    }
}

/// C_{5,48}: odd unimodular lattice, shells, even neighbors and the doubled
/// 5-frame. With `full`, shells run to norm 5 and the neighbor minimum is
/// certified; otherwise shells stop at norm 3.
pub fn odd_lattice_pipeline(catalog: &Catalog, full: bool, opts: &EnumOptions) -> PipelineReport {
    let mut r = PipelineReport::new("prop4.2");
    let run = |r: &mut PipelineReport| -> Result<()> {
        let entry = catalog.get("C_{5,48}")?;
        let code = entry.code()?;
        r.push(
            "code",
            code.is_self_dual() && code.modulus().order() == 5,
            json!({ "self_dual": code.is_self_dual(), "modulus": 5, "length": code.length() }),
        );
        let lattice = construction_a(&code)?;
        let inv = lattice.invariants();
        r.push(
            "construction A",
            inv.unimodular && inv.odd,
            json!({ "unimodular": inv.unimodular, "odd": inv.odd }),
        );
        let top = if full { 5 } else { 3 };
        match lattice.shell_sizes(Rational64::from_integer(top), opts) {
            Ok(shells) => {
                let mut ok = (1..top.min(5)).all(|m| shells.count_int(m) == 0);
                if full {
                    ok &= shells.count_int(4) == 0 && shells.count_int(5) == 393216;
                }
                let counts: BTreeMap<String, u64> = shells
                    .counts
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect();
                r.push(
                    "shells",
                    ok,
                    json!({
                        "through_norm": top,
                        "counts": counts,
                        "certified": if full { "full" } else { "partial: no vectors of norm 1..3" },
                    }),
                );
            }
            Err(e) => r.fail("shells", &e),
        }
        let l0 = even_sublattice(&lattice)?.lattice;
        let neighbors = even_neighbors(&lattice)?;
        let all_contain = neighbors.iter().all(|nb| sublattice_of(&l0, nb));
        r.push(
            "even neighbors",
            !neighbors.is_empty() && all_contain,
            json!({
                "count": neighbors.len(),
                "even_unimodular": neighbors.iter().map(|nb| { let i = nb.invariants(); i.even && i.unimodular }).collect::<Vec<_>>(),
                "contain_even_sublattice": all_contain,
            }),
        );
        let five = standard_frame(&code)?;
        let ten = double_frame(&five)?;
        r.push(
            "10-frame",
            ten.norm() == Rational64::from_integer(10),
            json!({ "norm": ten.norm().to_string(), "vectors": ten.len() }),
        );
        let mut hosts = Vec::new();
        for (i, nb) in neighbors.iter().enumerate() {
            let rehosted = ten.rehost(nb);
            let contained = rehosted.is_ok();
            let mut detail = json!({ "neighbor": i, "contains_frame": contained });
            if let Ok(f) = rehosted {
                let z10 = code_from_frame(nb, &f)?;
                detail["code_modulus"] = json!(z10.modulus().order());
                detail["code_self_dual"] = json!(z10.is_self_dual());
                detail["code_type_ii"] = json!(z10.is_type_ii());
                if full {
                    match nb.min_norm(opts) {
                        Ok(mu) => detail["min_norm"] = json!(mu.to_string()),
                        Err(e) => {
                            if let Error::Resource {
                                certified_floor, ..
                            } = &e
                            {
                                detail["min_norm_floor"] =
                                    json!(certified_floor.map(|f| f.to_string()));
                                r.resource_exhausted = true;
                            }
                        }
                    }
                }
                hosts.push(detail.clone());
            }
            r.push(&format!("frame containment, neighbor {i}"), true, detail);
        }
        let ok = hosts.iter().any(|d| d["code_type_ii"] == json!(true));
        r.push(
            "type II code over Z_10",
            ok,
            json!({ "hosts": hosts.len() }),
        );
        if full {
            let extremal = hosts.iter().any(|d| d["min_norm"] == json!("6"));
            r.push("extremal neighbor", extremal, json!({}));
        }
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.fail("pipeline", &e);
    }
    r
}

/// How a minimum Euclidean weight was obtained.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum WeightStatus {
    Exact,
    LowerBound,
    NotComputed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub self_dual: bool,
    pub type_ii: bool,
    pub bound_value: Option<u64>,
    pub d_e: Option<u64>,
    pub d_e_status: WeightStatus,
    /// "true", "false", "unresolved", or "undefined" for codes that are not
    /// Type II over Z_2k with k <= 6.
    pub extremal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub modulus: u32,
    pub length: usize,
    pub source: String,
    pub checks: Checks,
    pub claims: Claims,
    pub mismatches: Vec<String>,
    pub resource_exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub certify_min_weight: bool,
    pub enumeration: EnumOptions,
    /// Largest code size enumerated codeword by codeword.
    pub cap: u64,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            certify_min_weight: false,
            enumeration: EnumOptions::default(),
            cap: DEFAULT_ENUMERATION_CAP,
            timings: false,
        }
    }
}

fn weight_via_lattice(code: &LinearCode, opts: &EnumOptions) -> Result<(MinWeight, bool)> {
    let lattice = construction_a(code)?;
    let m = code.modulus().order() as i64;
    let mr = Rational64::from_integer(m);
    match lattice.min_norm(opts) {
        Ok(mu) if mu < mr => Ok((MinWeight::Exact((mu * mr).to_integer() as u64), false)),
        Ok(_) => Ok((MinWeight::LowerBound((m * m) as u64), false)),
        Err(Error::Resource {
            certified_floor, ..
        }) => {
            let f = certified_floor.unwrap_or_default().min(mr);
            Ok((
                MinWeight::LowerBound((f * mr).ceil().to_integer() as u64),
                true,
            ))
        }
        Err(e) => Err(e),
    }
}

/// Recomputes every property of a catalog entry and compares with its claims.
pub fn verify_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut timings = BTreeMap::new();
    let t = Instant::now();
    let code = entry.code()?;
    let self_dual = code.is_self_dual();
    let type_ii = self_dual && code.is_type_ii_with_cap(opts.cap);
    timings.insert(
        "self_dual_type_ii".to_string(),
        t.elapsed().as_millis() as u64,
    );

    let t = Instant::now();
    let mut exhausted = false;
    let d_e = if opts.certify_min_weight && self_dual {
        let (w, ex) = weight_via_lattice(&code, &opts.enumeration)?;
        exhausted = ex;
        Some(w)
    } else if code.cardinality_u64().is_some_and(|c| c <= opts.cap) {
        Some(MinWeight::Exact(
            code.min_euclidean_weight_bruteforce(opts.cap)?,
        ))
    } else {
        None
    };
    timings.insert("min_weight".to_string(), t.elapsed().as_millis() as u64);

    let k = code.modulus().k().filter(|&k| k <= 6);
    let bound_value = k.map(|k| extremal_bound(code.length(), k));
    let extremal = match (k, type_ii, d_e) {
        (Some(_), true, Some(w)) => match code.is_extremal(w)? {
            Some(true) => "true",
            Some(false) => "false",
            None => "unresolved",
        },
        (Some(_), true, None) => "unresolved",
        _ => "undefined",
    }
    .to_string();

    let mut mismatches = Vec::new();
    if self_dual != entry.claims.self_dual {
        mismatches.push(format!(
            "self_dual: claimed {}, found {self_dual}",
            entry.claims.self_dual
        ));
    }
    if type_ii != entry.claims.type_ii {
        mismatches.push(format!(
            "type_ii: claimed {}, found {type_ii}",
            entry.claims.type_ii
        ));
    }
    if let Some(claim) = entry.claims.extremal {
        if (extremal == "true" && !claim) || (extremal == "false" && claim) {
            mismatches.push(format!("extremal: claimed {claim}, found {extremal}"));
        }
    }
    let (d_value, status) = match d_e {
        Some(MinWeight::Exact(d)) => (Some(d), WeightStatus::Exact),
        Some(MinWeight::LowerBound(d)) => (Some(d), WeightStatus::LowerBound),
        None => (None, WeightStatus::NotComputed),
    };
    Ok(VerificationReport {
        name: entry.name.clone(),
        modulus: code.modulus().order(),
        length: code.length(),
        source: entry.source.clone(),
        checks: Checks {
            self_dual,
            type_ii,
            bound_value,
            d_e: d_value,
            d_e_status: status,
            extremal,
        },
        claims: entry.claims,
        mismatches,
        resource_exhausted: exhausted,
        timings_ms: opts.timings.then_some(timings),
    })
}

/// Entries of the catalog whose d_E the brute-force oracle can reach.
pub fn small_entries(catalog: &Catalog, cap: u64) -> Vec<&CatalogEntry> {
    catalog
        .entries()
        .iter()
        .filter(|e| {
            e.code()
                .ok()
                .and_then(|c| c.cardinality_u64())
                .is_some_and(|c| c <= cap)
        })
        .collect()
}
