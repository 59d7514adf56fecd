//! The `zklat` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::code::{LinearCode, DEFAULT_ENUMERATION_CAP};
use crate::constructions::{
    four_negacirculant_code, search_negacirculant, Catalog, CatalogEntry, CATALOG_ENV,
};
use crate::error::{Error, Result};
use crate::lattice::{construction_a, EnumOptions};
use crate::modforms::{extremal_defect, extremal_theta, series_from_shells, theta_from_swe};
use crate::pipelines::{self, PipelineReport, VerifyOptions};
use crate::ring::Modulus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Default node budget for lattice enumerations started from the CLI.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "zklat",
    version,
    about = "Type II codes over Z_2k, Construction A lattices and theta series"
)]
struct Cli {
    /// Catalog file (default: $ZKLAT_CATALOG, else the bundled catalog).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute self-duality, Type II and extremality and compare with the claims.
    Verify {
        /// `catalog:<name>`, a catalog name, or a JSON code file.
        code: String,
        /// Certify d_E through the minimum norm of the Construction A lattice.
        #[arg(long)]
        certify_min_weight: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Run a staged reproduction pipeline.
    Reproduce {
        /// prop4.2, prop4.3-small, thm1-table or e4-identity.
        id: String,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long)]
        precision: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// prop4.2 only: enumerate shells through norm 5 and certify the neighbor minimum.
        #[arg(long)]
        full: bool,
    },
    /// Extremal defect at length n over Z_2k.
    Defect {
        n: usize,
        k: u32,
        #[arg(long)]
        precision: Option<u64>,
    },
    /// The extremal theta series in dimension n.
    ExtremalTheta {
        n: usize,
        #[arg(long, default_value_t = 8)]
        precision: u64,
    },
    /// Theta series of the Construction A lattice of a code.
    Theta {
        code: String,
        #[arg(long, default_value_t = 4)]
        precision: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Random search for four-negacirculant self-dual codes.
    Search {
        /// Ring order m of Z_m.
        #[arg(long)]
        modulus: u32,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1 << 16)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report at most this many hits.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Write the Construction A basis of a code in the text lattice format.
    ExportLattice {
        code: String,
        /// LLL-reduce the basis first.
        #[arg(long)]
        lll: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// What a command produced: a report and the exit code it implies.
struct Outcome {
    report: Value,
    code: i32,
    /// Raw text written instead of a report (lattice export).
    raw: Option<String>,
}

impl Outcome {
    fn ok(report: impl Serialize) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("report serializes"),
            code: EXIT_OK,
            raw: None,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Construction(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Parses `args`, runs the command, prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match execute(&cli) {
        Ok(out) => {
            let text = if let Some(raw) = out.raw {
                raw
            } else if cli.json {
                serde_json::to_string_pretty(&out.report).expect("json") + "\n"
            } else {
                render(&out.report)
            };
            // a closed pipe is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            out.code
        }
        Err(e) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "error": e.to_string(), "exit_code": exit_code(&e) })
                );
            }
            eprintln!("zklat: {e}");
            exit_code(&e)
        }
    }
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog> {
    match path {
        Some(p) => Catalog::from_path(p),
        None => Catalog::load_default(),
    }
}

/// `catalog:<name>` or a bare catalog name, else a JSON file holding one record.
fn resolve(catalog: &Catalog, reference: &str) -> Result<CatalogEntry> {
    if let Some(name) = reference.strip_prefix("catalog:") {
        return catalog.get(name).cloned();
    }
    if let Ok(e) = catalog.get(reference) {
        return Ok(e.clone());
    }
    let path = std::path::Path::new(reference);
    if path.is_file() {
        return CatalogEntry::from_json(&std::fs::read_to_string(path)?);
    }
    Err(Error::NotFound(format!(
        "{reference} is neither a catalog entry nor a code file ({CATALOG_ENV} selects the catalog)"
    )))
}

fn enum_options(budget: u64) -> EnumOptions {
    EnumOptions {
        budget: Some(budget),
        progress: true,
    }
}

fn pipeline_outcome(r: PipelineReport) -> Outcome {
    let code = if r.resource_exhausted {
        EXIT_RESOURCE
    } else if r.ok {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    if let Some(stage) = r.failed_stage() {
        eprintln!("zklat: {} failed at stage: {stage}", r.pipeline);
    }
    Outcome {
        report: serde_json::to_value(&r).expect("report serializes"),
        code,
        raw: None,
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify {
            code,
            certify_min_weight,
            budget,
            timings,
        } => {
            let catalog = load_catalog(&cli.catalog)?;
            let entry = resolve(&catalog, code)?;
            let opts = VerifyOptions {
                certify_min_weight: *certify_min_weight,
                enumeration: enum_options(*budget),
                cap: DEFAULT_ENUMERATION_CAP,
                timings: *timings,
            };
            let report = pipelines::verify_entry(&entry, &opts)?;
            let code = if !report.mismatches.is_empty() {
                EXIT_MISMATCH
            } else if report.resource_exhausted {
                EXIT_RESOURCE
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                code,
                ..Outcome::ok(report)
            })
        }
        Command::Reproduce {
            id,
            k,
            precision,
            budget,
            full,
        } => {
            let catalog = load_catalog(&cli.catalog)?;
            let opts = enum_options(*budget);
            let report = match id.as_str() {
                "prop4.2" => pipelines::odd_lattice_pipeline(&catalog, *full, &opts),
                "prop4.3-small" => pipelines::doubling_small(&catalog),
                "thm1-table" => pipelines::defect_table(*precision),
                "e4-identity" => pipelines::e4_identity(&catalog, *k, precision.unwrap_or(10), &opts),
                other => {
                    return Err(Error::NotFound(format!(
                        "unknown pipeline {other}; expected prop4.2, prop4.3-small, thm1-table or e4-identity"
                    )))
                }
            };
            Ok(pipeline_outcome(report))
        }
        Command::Defect { n, k, precision } => {
            let d = extremal_defect(*n, *k, *precision)?;
            Ok(Outcome::ok(json!({
                "n": n,
                "k": k,
                "defect": d.to_string(),
                "positive": d > num_bigint::BigInt::from(0),
            })))
        }
        Command::ExtremalTheta { n, precision } => {
            let t = extremal_theta(*n, *precision)?;
            Ok(Outcome::ok(
                json!({ "n": n, "series": t.to_string(), "json": t.to_json() }),
            ))
        }
        Command::Theta {
            code,
            precision,
            budget,
        } => {
            let catalog = load_catalog(&cli.catalog)?;
            let entry = resolve(&catalog, code)?;
            let c = entry.code()?;
            let (series, method) = theta_of(&c, *precision, *budget)?;
            Ok(Outcome::ok(json!({
                "name": entry.name,
                "method": method,
                "series": series.to_string(),
                "json": series.to_json(),
            })))
        }
        Command::Search {
            modulus,
            length,
            budget,
            seed,
            limit,
        } => {
            let m = Modulus::new(*modulus)?;
            let hits = search_negacirculant(m, *length, *budget, *seed)?;
            let shown: Vec<Value> = hits
                .iter()
                .take(*limit)
                .map(|s| {
                    let code = four_negacirculant_code(s)?;
                    Ok(json!({
                        "rows_a": s.first_row_a().entries(),
                        "rows_b": s.first_row_b().entries(),
                        "self_dual": code.is_self_dual(),
                        "type_ii": code.is_type_ii(),
                    }))
                })
                .collect::<Result<_>>()?;
            Ok(Outcome::ok(json!({
                "modulus": modulus,
                "length": length,
                "budget": budget,
                "seed": seed,
                "hits": hits.len(),
                "codes": shown,
            })))
        }
        Command::ExportLattice { code, lll, output } => {
            let catalog = load_catalog(&cli.catalog)?;
            let entry = resolve(&catalog, code)?;
            let mut lattice = construction_a(&entry.code()?)?;
            if *lll {
                lattice = lattice.lll_reduce().0;
            }
            let text = lattice.to_text();
            match output {
                Some(p) => {
                    std::fs::File::create(p)?.write_all(text.as_bytes())?;
                    Ok(Outcome::ok(
                        json!({ "name": entry.name, "written": p, "dimension": lattice.dim() }),
                    ))
                }
                None => Ok(Outcome {
                    raw: Some(text),
                    ..Outcome::ok(Value::Null)
                }),
            }
        }
    }
}

/// Through the swe when the code is small enough to list, else by shells.
fn theta_of(
    code: &LinearCode,
    precision: u64,
    budget: u64,
) -> Result<(crate::modforms::QSeries, &'static str)> {
    if code
        .cardinality_u64()
        .is_some_and(|c| c <= DEFAULT_ENUMERATION_CAP)
    {
        let w = code.swe(DEFAULT_ENUMERATION_CAP)?;
        return Ok((theta_from_swe(&w, precision)?.simplified(), "swe"));
    }
    let lattice = construction_a(code)?;
    let shells = lattice.shell_sizes(
        Rational64::from_integer(precision as i64),
        &enum_options(budget),
    )?;
    let den = if lattice.invariants().integral {
        1
    } else {
        code.modulus().order()
    };
    Ok((series_from_shells(&shells, den)?.simplified(), "shells"))
}

/// Human rendering of a report: nested keys indented, scalars inline.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_into(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_nests_objects() {
        let v = json!({ "a": 1, "b": { "c": true, "d": [1, 2] }, "e": [{ "f": "x" }] });
        let s = render(&v);
        assert_eq!(s, "a: 1\nb:\n  c: yes\n  d: [1, 2]\ne:\n  [0]\n    f: x\n");
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::NotFound("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::resource("x")), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Construction("x".into())), EXIT_MISMATCH);
    }

    #[test]
    fn references_resolve() {
        let c = Catalog::bundled();
        assert_eq!(resolve(&c, "catalog:C_{12,32}").unwrap().name, "C_{12,32}");
        assert_eq!(resolve(&c, "S_{6,8}").unwrap().length(), 8);
        assert!(matches!(
            resolve(&c, "catalog:NoSuchCode"),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["zklat", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["zklat", "reproduce", "prop9.9"]), EXIT_USAGE);
        assert_eq!(run(["zklat", "defect", "12", "2"]), EXIT_USAGE);
    }
}
