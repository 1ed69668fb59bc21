//! Command-line entry point: argument parsing, dispatch, report emission in
//! JSON/CSV/text, and a content-addressed result cache.
//!
//! Every command is deterministic given (spec, parameters, field-modulus
//! convention); repeated runs emit byte-identical reports, which is what the
//! cache relies on. Exit status is 0 exactly when every embedded assertion
//! passed.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::central::{centralizer_slice, slice_report};
use crate::error::{Error, Result};
use crate::pbw::Engine;
use crate::reduced::{OrbitTag, PCharacter};
use crate::repmod::{baby_verma, endo_type, is_irreducible, Borel, Weight};
use crate::scalar::{Field, FieldElement};
use crate::superalg::{builtin_by_name, SpecJson, SuperAlgebraSpec};
use crate::zassenhaus::{anticenter_check, center_generation_check, point_generators};

pub const SCHEMA_VERSION: &str = "1";
pub const CACHE_ENV: &str = "SUPERKERN_CACHE";
pub const CACHE_DEFAULT: &str = ".superkern-cache";

#[derive(Parser, Debug)]
#[command(name = "superkern")]
#[command(about = "Exact-arithmetic laboratory for enveloping algebras of restricted Lie superalgebras")]
#[command(version)]
struct Cli {
    /// Output format for the report
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cache policy (directory from SUPERKERN_CACHE, default .superkern-cache)
    #[arg(long, global = true, value_enum, default_value_t = CachePolicy::Use)]
    cache: CachePolicy,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CachePolicy {
    /// reuse cached payloads when present
    Use,
    /// ignore the cache entirely
    Off,
    /// recompute and overwrite
    Refresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChiTag {
    Zero,
    Nilpotent,
    Semisimple,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a builtin or user-supplied algebra spec
    Validate {
        #[arg(long, default_value = "osp12")]
        algebra: String,
        #[arg(long)]
        spec_file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Degree-truncated center slice
    Center {
        #[arg(long, default_value = "osp12")]
        algebra: String,
        #[arg(long)]
        spec_file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Degree-truncated anticenter slice (twisted adjoint invariants)
    Anticenter {
        #[arg(long, default_value = "osp12")]
        algebra: String,
        #[arg(long)]
        spec_file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Irreducible-module census for osp(1|2) at one p-character
    Census {
        #[arg(long, default_value = "osp12")]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum)]
        chi: ChiTag,
    },
    /// Construct and examine one baby Verma module
    Verma {
        #[arg(long, default_value = "osp12")]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum)]
        chi: ChiTag,
        /// weight value on h, e.g. "2" or "1+2t" over the extension
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "standard")]
        borel: String,
    },
    /// Harish-Chandra verification suite
    Harish {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Smooth/singular tabulation of the census points
    Locus {
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// allow the slower p = 5 pipeline
        #[arg(long)]
        big: bool,
    },
    /// Skew group ring checks
    Skew {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Minimal hypersurface relation among (xi_e, xi_h, xi_f, S^2)
    Relations {
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// allow the slower p = 5 search
        #[arg(long)]
        big: bool,
    },
    /// Recompute one random cached entry and compare byte-exactly
    CacheVerify,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The report envelope. Payload bytes are deterministic; metadata lives in
/// the cache entry, never in the payload.
#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub artifact_version: String,
    pub command: Value,
    pub field: Value,
    pub payload: Value,
    pub assertions: Vec<Assertion>,
    pub status: String,
}

struct Outcome {
    payload: Value,
    assertions: Vec<Assertion>,
    field: Value,
    /// tabular projection for csv/text
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

fn field_desc(field: &Field) -> Value {
    json!({
        "p": field.p(),
        "k": field.degree(),
        "modulus": field.modulus(),
    })
}

fn load_spec(algebra: &str, spec_file: &Option<PathBuf>, p: u32) -> Result<SuperAlgebraSpec> {
    if let Some(path) = spec_file {
        let text = std::fs::read_to_string(path)?;
        let parsed: SpecJson = serde_json::from_str(&text).map_err(|e| {
            Error::Cli(format!("spec file {}: {e}", path.display()))
        })?;
        return parsed.to_spec();
    }
    builtin_by_name(algebra, p)
}

fn parse_field_element(field: &Field, text: &str) -> Result<FieldElement> {
    let mut acc = field.zero();
    for part in text.split('+') {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::Cli(format!("cannot parse field element {text:?}")));
        }
        let (coeff_str, deg) = if let Some(stripped) = part.strip_suffix("t") {
            (stripped, 1usize)
        } else {
            (part, 0usize)
        };
        let coeff: i64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Cli(format!("cannot parse field element {text:?}")))?
        };
        let mut term = field.from_int(coeff);
        if deg == 1 {
            term = field.mul(&term, &field.gen());
        }
        acc = field.add(&acc, &term);
    }
    Ok(acc)
}

fn chi_for(spec: &Arc<SuperAlgebraSpec>, tag: ChiTag, p: u32) -> Result<(PCharacter, Field)> {
    match tag {
        ChiTag::Zero => {
            let f = Field::prime(p)?;
            Ok((PCharacter::zero(spec, &f), f))
        }
        ChiTag::Nilpotent => {
            let f = Field::prime(p)?;
            Ok((PCharacter::osp12_nilpotent(spec, &f)?, f))
        }
        ChiTag::Semisimple => {
            let f = Field::extension(p, 2)?;
            Ok((PCharacter::osp12_semisimple(spec, &f)?, f))
        }
    }
}

fn run_command(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { algebra, spec_file, p } => {
            let spec = load_spec(algebra, spec_file, *p)?;
            let report = spec.validate();
            let assertions: Vec<Assertion> = report
                .checks
                .iter()
                .map(|c| Assertion {
                    name: c.name.clone(),
                    passed: c.passed,
                    detail: c.witness.clone().unwrap_or_default(),
                })
                .collect();
            let table = Some((
                vec!["check".into(), "passed".into(), "witness".into()],
                report
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            c.passed.to_string(),
                            c.witness.clone().unwrap_or_default(),
                        ]
                    })
                    .collect(),
            ));
            Ok(Outcome {
                payload: json!({
                    "algebra": algebra,
                    "dim_even": spec.dim_even(),
                    "dim_odd": spec.dim_odd(),
                    "checks": report.checks,
                }),
                assertions,
                field: field_desc(&spec.field()),
                table,
            })
        }
        Command::Center { algebra, spec_file, p, degree }
        | Command::Anticenter { algebra, spec_file, p, degree } => {
            let twisted = matches!(cmd, Command::Anticenter { .. });
            let spec = Arc::new(load_spec(algebra, spec_file, *p)?);
            let engine = Engine::standard(spec.clone())?;
            let slice = centralizer_slice(&engine, *degree, twisted)?;
            let report = slice_report(&engine, &slice, twisted);
            let mut assertions = vec![Assertion {
                name: "every slice element has zero odd component".into(),
                passed: report.all_even,
                detail: String::new(),
            }];
            let mut extra = json!(null);
            if spec.index_of("e").is_some() && spec.dim_even() == 3 && spec.dim_odd() == 2 {
                if twisted {
                    let v = anticenter_check(&engine, *degree)?;
                    assertions.push(Assertion {
                        name: "anticenter slice = S * (center slice two degrees lower)".into(),
                        passed: v.equal,
                        detail: v.witness.clone().unwrap_or_default(),
                    });
                    extra = serde_json::to_value(&v)?;
                } else {
                    let v = center_generation_check(&engine, *degree)?;
                    assertions.push(Assertion {
                        name: "center slice = <1, xi_e, xi_h, xi_f, S^2> slice".into(),
                        passed: v.equal,
                        detail: v.witness.clone().unwrap_or_default(),
                    });
                    extra = serde_json::to_value(&v)?;
                }
            }
            let table = Some((
                vec!["#".into(), "element".into()],
                report
                    .basis_rendered
                    .iter()
                    .enumerate()
                    .map(|(i, s)| vec![i.to_string(), s.clone()])
                    .collect(),
            ));
            Ok(Outcome {
                payload: json!({
                    "slice": report,
                    "order": engine.order_names(),
                    "structure_check": extra,
                }),
                assertions,
                field: field_desc(&engine.field),
                table,
            })
        }
        Command::Census { algebra, p, chi } => {
            if algebra != "osp12" {
                return Err(Error::Cli("census supports only osp12".into()));
            }
            let tag = match chi {
                ChiTag::Zero => OrbitTag::Zero,
                ChiTag::Nilpotent => OrbitTag::NilpotentRegular,
                ChiTag::Semisimple => OrbitTag::SemisimpleRegular,
            };
            let census = crate::zassenhaus::osp12_census(*p, tag)?;
            let assertions: Vec<Assertion> = census
                .checks
                .iter()
                .map(|(name, ok)| Assertion {
                    name: name.clone(),
                    passed: *ok,
                    detail: String::new(),
                })
                .collect();
            let header = vec![
                "module".into(),
                "dim".into(),
                "type".into(),
                "point (xi_e, xi_h, xi_f, S^2)".into(),
            ];
            let rows: Vec<Vec<String>> = census
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.module_name.clone(),
                        r.dim.to_string(),
                        r.endo.to_string(),
                        format!(
                            "({})",
                            r.point
                                .iter()
                                .map(|c| census.ext.render(c))
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    ]
                })
                .collect();
            let payload_rows: Vec<Value> = census
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "chi": r.chi_tag.to_string(),
                        "lambda": r.lambda_label,
                        "module": r.module_name,
                        "dim": r.dim,
                        "endo_type": r.endo.to_string(),
                        "point": r.point.iter().map(|c| census.ext.coeffs_vec(c)).collect::<Vec<_>>(),
                        "max_dim": r.max_dim,
                    })
                })
                .collect();
            Ok(Outcome {
                payload: json!({ "classes": payload_rows }),
                assertions,
                field: field_desc(&census.ext),
                table: Some((header, rows)),
            })
        }
        Command::Verma { algebra, p, chi, lambda, borel } => {
            if algebra != "osp12" {
                return Err(Error::Cli("verma supports only osp12".into()));
            }
            let spec = Arc::new(builtin_by_name("osp12", *p)?);
            let (chi_val, field) = chi_for(&spec, *chi, *p)?;
            let lam = Weight {
                values: vec![parse_field_element(&field, lambda)?],
            };
            let borel = match borel.as_str() {
                "standard" => Borel::Standard,
                "reflected" => Borel::Reflected,
                other => return Err(Error::Cli(format!("unknown borel {other:?}"))),
            };
            let admissible = crate::repmod::lambda_set(&spec, &field, &chi_val)?;
            if admissible.is_empty() {
                return Err(Error::Cli(format!(
                    "Lambda(chi) is empty over F_{{{}^{}}}; extend the working field \
                     (the semisimple character needs the quadratic extension)",
                    field.p(),
                    field.degree()
                )));
            }
            let rep = baby_verma(&spec, &field, &chi_val, &lam, borel)?;
            rep.validate(&spec)?;
            let irr = is_irreducible(&spec, &rep);
            let et = if irr.is_irreducible() {
                Some(endo_type(&spec, &rep)?)
            } else {
                None
            };
            let ext_engine = Engine::new(spec.clone(), field.clone(), crate::pbw::OrderKind::Standard)?;
            let gens = point_generators(&ext_engine)?;
            let point: Option<Vec<Vec<u32>>> = if irr.is_irreducible() {
                Some(
                    crate::repmod::central_character_point(&ext_engine, &rep, &gens)?
                        .iter()
                        .map(|c| field.coeffs_vec(c))
                        .collect(),
                )
            } else {
                None
            };
            let assertions = vec![
                Assertion {
                    name: format!("dim Z = 2p = {}", 2 * p),
                    passed: rep.dim == 2 * *p as usize,
                    detail: rep.dim.to_string(),
                },
                Assertion {
                    name: "module invariants (bracket, parity, reduced) hold".into(),
                    passed: true,
                    detail: String::new(),
                },
            ];
            // action matrices serialize as coefficient arrays, one matrix
            // per basis element of g, row-major
            let matrices: Vec<Value> = rep
                .action
                .iter()
                .enumerate()
                .map(|(g, m)| {
                    json!({
                        "generator": spec.name(g),
                        "rows": m.rows,
                        "entries": m.data.iter().map(|c| field.coeffs_vec(c)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Outcome {
                payload: json!({
                    "label": rep.label,
                    "dim": rep.dim,
                    "parity": rep.parity,
                    "irreducible": irr.is_irreducible(),
                    "endo_type": et.map(|t| t.to_string()),
                    "point": point,
                    "action": matrices,
                }),
                assertions,
                field: field_desc(&field),
                table: None,
            })
        }
        Command::Harish { p, degree } => {
            let d = degree.unwrap_or(if *p == 3 { 6 } else { *p as usize + 2 });
            let report = crate::harish::verify_hc(*p, d)?;
            let assertions: Vec<Assertion> = report
                .checks
                .iter()
                .map(|c| Assertion {
                    name: c.name.clone(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect();
            let table = Some((
                vec!["check".into(), "passed".into(), "detail".into()],
                report
                    .checks
                    .iter()
                    .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                    .collect(),
            ));
            Ok(Outcome {
                payload: serde_json::to_value(&report)?,
                assertions,
                field: field_desc(&Field::prime(*p)?),
                table,
            })
        }
        Command::Locus { p, big } => {
            if *p != 3 && !*big {
                return Err(Error::Cli(
                    "locus at p != 3 is slower; pass --big to allow".into(),
                ));
            }
            let report = crate::zassenhaus::locus_report(*p)?;
            let assertions = vec![
                Assertion {
                    name: "smooth set = max-dim points over regular chi, plus L((p-1)/2)".into(),
                    passed: report.smooth_set_identity,
                    detail: String::new(),
                },
                Assertion {
                    name: "singular set = points of L(lambda), lambda != (p-1)/2".into(),
                    passed: report.singular_set_identity,
                    detail: String::new(),
                },
                Assertion {
                    name: "rows with equal points have equal smooth flags".into(),
                    passed: report.equal_points_equal_flags,
                    detail: String::new(),
                },
                Assertion {
                    name: "relation vanishes at every census point".into(),
                    passed: report.relation_vanishes_on_all_points,
                    detail: String::new(),
                },
                Assertion {
                    name: "relation minimal (none of lower S^2-degree) and principal at bound".into(),
                    passed: report.relation_minimal && report.relation_principal_at_bound,
                    detail: report.relation.clone(),
                },
            ];
            let header = vec![
                "chi".into(),
                "lambda".into(),
                "module".into(),
                "dim".into(),
                "type".into(),
                "max-dim".into(),
                "smooth".into(),
            ];
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.chi.clone(),
                        r.lambda.clone(),
                        r.module.clone(),
                        r.dim.to_string(),
                        r.endo_type.clone(),
                        r.max_dim.to_string(),
                        r.smooth.to_string(),
                    ]
                })
                .collect();
            Ok(Outcome {
                payload: serde_json::to_value(&report)?,
                assertions,
                field: field_desc(&Field::extension(*p, 2)?),
                table: Some((header, rows)),
            })
        }
        Command::Skew { p, degree } => {
            let d = degree.unwrap_or(2 * *p as usize);
            let report = crate::zassenhaus::skew_ring_ops(*p, d)?;
            let assertions: Vec<Assertion> = report
                .checks
                .iter()
                .map(|(name, ok, detail)| Assertion {
                    name: name.clone(),
                    passed: *ok,
                    detail: detail.clone(),
                })
                .collect();
            Ok(Outcome {
                payload: serde_json::to_value(&report)?,
                assertions,
                field: field_desc(&Field::prime(*p)?),
                table: None,
            })
        }
        Command::Relations { p, big } => {
            if *p != 3 && !*big {
                return Err(Error::Cli(
                    "relations at p != 3 is slower; pass --big to allow".into(),
                ));
            }
            let spec = Arc::new(builtin_by_name("osp12", *p)?);
            let engine = Engine::standard(spec)?;
            let hyper = crate::zassenhaus::hypersurface_and_smoothness(&engine)?;
            let assertions = vec![
                Assertion {
                    name: format!("unique minimal relation of S^2-degree {p} found"),
                    passed: hyper.relation.degree_in(3) == *p as u16 && hyper.principal_at_bound,
                    detail: hyper.relation.render(&engine.field),
                },
                Assertion {
                    name: format!("no relation of S^2-degree <= {}", p - 1),
                    passed: hyper.minimal,
                    detail: String::new(),
                },
            ];
            Ok(Outcome {
                payload: json!({
                    "relation": hyper.relation.render(&engine.field),
                    "terms": hyper
                        .relation
                        .terms
                        .iter()
                        .map(|(e, c)| json!({"exponents": e, "coeff": engine.field.coeffs_vec(c)}))
                        .collect::<Vec<_>>(),
                    "minimal": hyper.minimal,
                    "principal_at_bound": hyper.principal_at_bound,
                }),
                assertions,
                field: field_desc(&engine.field),
                table: None,
            })
        }
        Command::CacheVerify => unreachable!("handled in run()"),
    }
}

fn command_json(cmd: &Command) -> Value {
    match cmd {
        Command::Validate { algebra, spec_file, p } => json!({
            "verb": "validate", "algebra": algebra,
            "spec_file": spec_file.as_ref().map(|p| p.display().to_string()),
            "p": p,
        }),
        Command::Center { algebra, spec_file, p, degree } => json!({
            "verb": "center", "algebra": algebra,
            "spec_file": spec_file.as_ref().map(|p| p.display().to_string()),
            "p": p, "degree": degree,
        }),
        Command::Anticenter { algebra, spec_file, p, degree } => json!({
            "verb": "anticenter", "algebra": algebra,
            "spec_file": spec_file.as_ref().map(|p| p.display().to_string()),
            "p": p, "degree": degree,
        }),
        Command::Census { algebra, p, chi } => json!({
            "verb": "census", "algebra": algebra, "p": p, "chi": format!("{chi:?}"),
        }),
        Command::Verma { algebra, p, chi, lambda, borel } => json!({
            "verb": "verma", "algebra": algebra, "p": p, "chi": format!("{chi:?}"),
            "lambda": lambda, "borel": borel,
        }),
        Command::Harish { p, degree } => json!({ "verb": "harish", "p": p, "degree": degree }),
        Command::Locus { p, big } => json!({ "verb": "locus", "p": p, "big": big }),
        Command::Skew { p, degree } => json!({ "verb": "skew", "p": p, "degree": degree }),
        Command::Relations { p, big } => json!({ "verb": "relations", "p": p, "big": big }),
        Command::CacheVerify => json!({ "verb": "cache-verify" }),
    }
}

fn cache_root() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(CACHE_DEFAULT))
}

fn cache_key(cmd_json: &Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(crate::ARTIFACT_VERSION.as_bytes());
    hasher.update(serde_json::to_string(cmd_json).expect("serializable").as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    command: Value,
    /// serialized Report, byte-compared on verify
    payload: String,
    created_unix: u64,
    runtime_ms: u128,
}

fn cache_load(root: &Path, key: &str) -> Option<CacheEntry> {
    let path = root.join(format!("{key}.json"));
    let text = std::fs::read_to_string(&path).ok()?;
    match serde_json::from_str::<CacheEntry>(&text) {
        Ok(entry) if entry.key == key => Some(entry),
        _ => {
            // corruption: evict and recompute
            eprintln!(
                "warning: evicting corrupt cache entry {}",
                path.display()
            );
            let _ = std::fs::remove_file(&path);
            None
        }
    }
}

fn cache_store(root: &Path, entry: &CacheEntry) -> Result<()> {
    std::fs::create_dir_all(root)?;
    let path = root.join(format!("{}.json", entry.key));
    let tmp = root.join(format!(".{}.tmp", entry.key));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(serde_json::to_string(entry)?.as_bytes())?;
    f.sync_all()?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

fn render_text(report: &Report, table: &Option<(Vec<String>, Vec<Vec<String>>)>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "command: {}\n",
        serde_json::to_string(&report.command).unwrap()
    ));
    if let Some((header, rows)) = table {
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let fmt_row = |cells: &[String]| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                .collect::<Vec<_>>()
                .join("  ")
        };
        out.push_str(&fmt_row(header));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in rows {
            out.push_str(&fmt_row(row));
            out.push('\n');
        }
    }
    out.push('\n');
    for a in &report.assertions {
        out.push_str(&format!(
            "[{}] {}{}\n",
            if a.passed { "pass" } else { "FAIL" },
            a.name,
            if a.detail.is_empty() {
                String::new()
            } else {
                format!(" -- {}", a.detail)
            }
        ));
    }
    out.push_str(&format!("status: {}\n", report.status));
    out
}

fn render_csv(table: &Option<(Vec<String>, Vec<Vec<String>>)>, report: &Report) -> String {
    let quote = |s: &str| {
        if s.contains(',') || s.contains('"') || s.contains('\n') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut out = String::new();
    if let Some((header, rows)) = table {
        out.push_str(&header.iter().map(|h| quote(h)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in rows {
            out.push_str(&row.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
    } else {
        out.push_str("assertion,passed,detail\n");
        for a in &report.assertions {
            out.push_str(&format!(
                "{},{},{}\n",
                quote(&a.name),
                a.passed,
                quote(&a.detail)
            ));
        }
    }
    out
}

/// Execute a parsed command, with caching; returns the rendered output and
/// whether all assertions passed.
fn execute(cli: &Cli) -> Result<(String, bool)> {
    if matches!(cli.command, Command::CacheVerify) {
        return cache_verify();
    }
    let cmd_json = command_json(&cli.command);
    let root = cache_root();
    let key = cache_key(&cmd_json);
    let cached = if cli.cache == CachePolicy::Use {
        cache_load(&root, &key)
    } else {
        None
    };
    let (report_str, table) = if let Some(entry) = cached {
        (entry.payload, None)
    } else {
        let started = std::time::Instant::now();
        let outcome = run_command(&cli.command)?;
        let all_passed = outcome.assertions.iter().all(|a| a.passed);
        let report = Report {
            schema_version: SCHEMA_VERSION.to_string(),
            artifact_version: crate::ARTIFACT_VERSION.to_string(),
            command: cmd_json.clone(),
            field: outcome.field,
            payload: outcome.payload,
            assertions: outcome.assertions,
            status: if all_passed { "ok".into() } else { "failed".into() },
        };
        let report_str = serde_json::to_string(&report)?;
        if cli.cache != CachePolicy::Off {
            let entry = CacheEntry {
                key: key.clone(),
                command: cmd_json.clone(),
                payload: report_str.clone(),
                created_unix: std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                runtime_ms: started.elapsed().as_millis(),
            };
            cache_store(&root, &entry)?;
        }
        (report_str, outcome.table)
    };
    let report: Report = serde_json::from_str(&report_str)?;
    let ok = report.status == "ok";
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Csv => render_csv(&table, &report),
        Format::Text => render_text(&report, &table),
    };
    Ok((rendered, ok))
}

/// Recompute one random cached entry and compare payload bytes.
fn cache_verify() -> Result<(String, bool)> {
    let root = cache_root();
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(&root) {
        Ok(rd) => rd
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect(),
        Err(_) => Vec::new(),
    };
    entries.sort();
    if entries.is_empty() {
        return Ok(("cache-verify: cache is empty\n".into(), true));
    }
    use rand::Rng;
    let pick = rand::thread_rng().gen_range(0..entries.len());
    let text = std::fs::read_to_string(&entries[pick])?;
    let entry: CacheEntry = match serde_json::from_str(&text) {
        Ok(e) => e,
        Err(_) => {
            let _ = std::fs::remove_file(&entries[pick]);
            return Ok((
                format!(
                    "cache-verify: entry {} was corrupt; evicted\n",
                    entries[pick].display()
                ),
                false,
            ));
        }
    };
    // rebuild the command from its canonical JSON and recompute
    let cmd = command_from_json(&entry.command)?;
    let outcome = run_command(&cmd)?;
    let all_passed = outcome.assertions.iter().all(|a| a.passed);
    let report = Report {
        schema_version: SCHEMA_VERSION.to_string(),
        artifact_version: crate::ARTIFACT_VERSION.to_string(),
        command: entry.command.clone(),
        field: outcome.field,
        payload: outcome.payload,
        assertions: outcome.assertions,
        status: if all_passed { "ok".into() } else { "failed".into() },
    };
    let recomputed = serde_json::to_string(&report)?;
    let identical = recomputed == entry.payload;
    if !identical {
        let _ = std::fs::remove_file(&entries[pick]);
    }
    Ok((
        format!(
            "cache-verify: entry {} {}\n",
            entry.key,
            if identical {
                "matches recomputation byte-exactly"
            } else {
                "MISMATCH; evicted"
            }
        ),
        identical,
    ))
}

fn command_from_json(v: &Value) -> Result<Command> {
    let verb = v["verb"].as_str().unwrap_or_default();
    let p = v["p"].as_u64().unwrap_or(3) as u32;
    let algebra = v["algebra"].as_str().unwrap_or("osp12").to_string();
    let spec_file = v["spec_file"].as_str().map(PathBuf::from);
    let chi = |s: &str| match s {
        "Zero" => Ok(ChiTag::Zero),
        "Nilpotent" => Ok(ChiTag::Nilpotent),
        "Semisimple" => Ok(ChiTag::Semisimple),
        other => Err(Error::Cli(format!("bad chi tag {other:?} in cache"))),
    };
    Ok(match verb {
        "validate" => Command::Validate { algebra, spec_file, p },
        "center" => Command::Center {
            algebra,
            spec_file,
            p,
            degree: v["degree"].as_u64().unwrap_or(4) as usize,
        },
        "anticenter" => Command::Anticenter {
            algebra,
            spec_file,
            p,
            degree: v["degree"].as_u64().unwrap_or(4) as usize,
        },
        "census" => Command::Census {
            algebra,
            p,
            chi: chi(v["chi"].as_str().unwrap_or_default())?,
        },
        "verma" => Command::Verma {
            algebra,
            p,
            chi: chi(v["chi"].as_str().unwrap_or_default())?,
            lambda: v["lambda"].as_str().unwrap_or("0").to_string(),
            borel: v["borel"].as_str().unwrap_or("standard").to_string(),
        },
        "harish" => Command::Harish {
            p,
            degree: v["degree"].as_u64().map(|d| d as usize),
        },
        "locus" => Command::Locus {
            p,
            big: v["big"].as_bool().unwrap_or(false),
        },
        "skew" => Command::Skew {
            p,
            degree: v["degree"].as_u64().map(|d| d as usize),
        },
        "relations" => Command::Relations {
            p,
            big: v["big"].as_bool().unwrap_or(false),
        },
        other => return Err(Error::Cli(format!("unknown cached verb {other:?}"))),
    })
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((rendered, ok)) => {
            print!("{rendered}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_element_parser() {
        let f9 = Field::extension(3, 2).unwrap();
        assert_eq!(parse_field_element(&f9, "2").unwrap(), f9.from_int(2));
        assert_eq!(parse_field_element(&f9, "t").unwrap(), f9.gen());
        let two_t_plus_1 = f9.add(&f9.mul(&f9.from_int(2), &f9.gen()), &f9.one());
        assert_eq!(parse_field_element(&f9, "1+2t").unwrap(), two_t_plus_1);
        assert_eq!(parse_field_element(&f9, "2t+1").unwrap(), two_t_plus_1);
        assert!(parse_field_element(&f9, "x").is_err());
    }

    #[test]
    fn cache_round_trip_and_verify() {
        let dir = tempfile::tempdir().unwrap();
        let cmd_json = json!({"verb": "center", "algebra": "osp12", "p": 3, "degree": 2, "spec_file": null});
        let key = cache_key(&cmd_json);
        let entry = CacheEntry {
            key: key.clone(),
            command: cmd_json,
            payload: "{\"x\":1}".into(),
            created_unix: 0,
            runtime_ms: 1,
        };
        cache_store(dir.path(), &entry).unwrap();
        let loaded = cache_load(dir.path(), &key).unwrap();
        assert_eq!(loaded.payload, entry.payload);
        // stale artifact-version key is a miss: a different command hashes
        // elsewhere
        let other = cache_key(&json!({"verb": "center", "p": 5}));
        assert!(cache_load(dir.path(), &other).is_none());
        // corruption is evicted
        std::fs::write(dir.path().join(format!("{key}.json")), "{broken").unwrap();
        assert!(cache_load(dir.path(), &key).is_none());
        assert!(!dir.path().join(format!("{key}.json")).exists());
    }

    #[test]
    fn center_command_is_deterministic() {
        let cmd = Command::Center {
            algebra: "osp12".into(),
            spec_file: None,
            p: 3,
            degree: 3,
        };
        let a = run_command(&cmd).unwrap();
        let b = run_command(&cmd).unwrap();
        assert_eq!(
            serde_json::to_string(&a.payload).unwrap(),
            serde_json::to_string(&b.payload).unwrap()
        );
        assert!(a.assertions.iter().all(|x| x.passed));
    }

    #[test]
    fn validate_command_on_builtins() {
        for algebra in ["osp12", "gl11", "sl21"] {
            let cmd = Command::Validate {
                algebra: algebra.into(),
                spec_file: None,
                p: 3,
            };
            let out = run_command(&cmd).unwrap();
            assert!(out.assertions.iter().all(|a| a.passed), "{algebra}");
        }
    }

    #[test]
    fn census_command_counts() {
        let cmd = Command::Census {
            algebra: "osp12".into(),
            p: 3,
            chi: ChiTag::Nilpotent,
        };
        let out = run_command(&cmd).unwrap();
        assert!(out.assertions.iter().all(|a| a.passed));
        let classes = out.payload["classes"].as_array().unwrap();
        assert_eq!(classes.len(), 2); // (p+1)/2
    }

    #[test]
    fn verma_command_semisimple_extension_weight() {
        let cmd = Command::Verma {
            algebra: "osp12".into(),
            p: 3,
            chi: ChiTag::Semisimple,
            lambda: "2t".into(),
            borel: "standard".into(),
        };
        let out = run_command(&cmd).unwrap();
        assert!(out.assertions.iter().all(|a| a.passed));
        assert_eq!(out.payload["dim"], json!(6));
        assert_eq!(out.payload["irreducible"], json!(true));
    }
}
