//! Command-line driver: argument parsing, dispatch and report emission.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{
    basic_construct, classify, fixed_det_fiber, genus2_uniqueness, injectivity_census, summarize, variant_construct,
};
use crate::curve::{parse_curve, CurveModel};
use crate::error::{Error, Result};
use crate::frobenius::{extension_splitting, frob_pull, frob_push_line, is_surjective_onto_line, raynaud_b};
use crate::picard::{canonical_class, enumerate_pic, h0, Divisor, DivisorClass, DivisorLiteral};
use crate::sheaves::{det_and_deg, hom_dim, line_bundle, BundleLiteral, LatticePair};
use crate::stability::{hn, stability_json, StabilityJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "ffd", about = "Frobenius-destabilized rank-2 bundles on curves in characteristic 2")]
pub struct RunConfig {
    /// Curve config: {"m": int, "h": [bits], "f": [bits]}
    #[arg(long, global = true, default_value = "curve.json")]
    pub curve: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report path (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curve checks
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Theta characteristic B = det F_*O
    Raynaud,
    /// F_*L and the destabilization of F*F_*L
    Push {
        #[arg(long = "L")]
        l: String,
    },
    Stability {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// The co-length l datum with quotient class L and the given index
    Construct {
        #[arg(long)]
        l: usize,
        #[arg(long = "L")]
        l_cls: Option<String>,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    Classify {
        #[arg(long)]
        bundle: PathBuf,
    },
    #[command(subcommand)]
    Census(CensusCmd),
    Variant {
        #[arg(long = "M")]
        m: String,
        #[arg(long = "D")]
        d: String,
    },
    Unique {
        #[arg(long)]
        xi: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    Validate,
}

#[derive(Debug, Subcommand)]
pub enum CensusCmd {
    Injectivity {
        #[arg(long)]
        d: i64,
    },
    Fiber {
        #[arg(long)]
        l: usize,
        /// Determinant class (default 2 inf)
        #[arg(long)]
        xi: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    All,
}

/// Parses `[["d1.0",1],["inf",-1]]` or the short form `d1.0:1,inf:-1`.
pub fn parse_divisor(c: &CurveModel, s: &str) -> Result<Divisor> {
    let s = s.trim();
    let lit: DivisorLiteral = if s.starts_with('[') {
        serde_json::from_str(s)?
    } else if s.is_empty() || s == "0" {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| match t.trim().split_once(':') {
                Some((id, k)) => k
                    .trim()
                    .parse::<i64>()
                    .map(|k| (id.trim().to_string(), k))
                    .map_err(|e| Error::Parse(format!("multiplicity in {t:?}: {e}"))),
                None => Ok((t.trim().to_string(), 1)),
            })
            .collect::<Result<_>>()?
    };
    Divisor::from_literal(c, &lit)
}

pub fn parse_class_arg(c: &CurveModel, s: &str) -> Result<DivisorClass> {
    Ok(DivisorClass::of_divisor(c, &parse_divisor(c, s)?))
}

fn read_bundle(c: &CurveModel, path: &PathBuf) -> Result<LatticePair> {
    let lit: BundleLiteral = serde_json::from_str(&fs::read_to_string(path)?)?;
    LatticePair::from_literal(c, &lit)
}

/// A command report: `ok` is false exactly when a verification failed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub curve: Value,
    pub seed: u64,
    pub ok: bool,
    pub result: Value,
}

fn stab(c: &CurveModel, v: &LatticePair) -> Result<StabilityJson> {
    let (p, r, j) = hn(c, v)?;
    Ok(stability_json(&p, &r, j))
}

fn curve_validate(c: &CurveModel) -> Result<(bool, Value)> {
    let rational: Vec<String> = c.rational_places().iter().map(|p| p.id()).collect();
    let deg2 = c.places_of_degree(2)?.len();
    let pic0 = enumerate_pic(c, 0).len();
    let k = canonical_class(c);
    let ok = k.degree() == 2 * c.g() - 2;
    Ok((
        ok,
        json!({
            "genus": c.genus(),
            "m": c.m(),
            "rational_places": rational,
            "places_of_degree_2": deg2,
            "pic0_order": pic0,
            "canonical": k.literal(c),
        }),
    ))
}

fn raynaud(c: &CurveModel) -> Result<(bool, Value)> {
    let b = raynaud_b(c)?;
    let two_b = b.mul(c, 2);
    let h = h0(c, &two_b.representative(c)?)?;
    let check = b.degree() == c.g() - 1 && two_b == canonical_class(c) && h == c.genus();
    Ok((check, json!({ "B": b.literal(c), "degree": b.degree(), "h0_2B": h, "theta_check": check })))
}

#[derive(Serialize)]
struct PushResult {
    #[serde(rename = "L")]
    l: DivisorLiteral,
    degree: i64,
    det: DivisorLiteral,
    det_is_l_plus_b: bool,
    counit_surjective: bool,
    stability: StabilityJson,
    frob_stability: StabilityJson,
    bundle: BundleLiteral,
}

fn push(c: &CurveModel, l_cls: &DivisorClass) -> Result<(bool, PushResult)> {
    let b = raynaud_b(c)?;
    let (v, counit) = frob_push_line(c, l_cls)?;
    let (det, degree) = det_and_deg(c, &v)?;
    let det_ok = det == l_cls.add(c, &b) && degree == l_cls.degree() + c.g() - 1;
    let surj = is_surjective_onto_line(c, &counit)?;
    let st = stab(c, &v)?;
    let fs = stab(c, &frob_pull(c, &v)?)?;
    let ok = det_ok && surj && fs.s == -(2 * c.g() - 2);
    Ok((
        ok,
        PushResult {
            l: l_cls.literal(c),
            degree,
            det: det.literal(c),
            det_is_l_plus_b: det_ok,
            counit_surjective: surj,
            stability: st,
            frob_stability: fs,
            bundle: v.to_literal(),
        },
    ))
}

#[derive(Serialize)]
struct VariantResult {
    #[serde(rename = "M")]
    m: DivisorLiteral,
    #[serde(rename = "D")]
    d: DivisorLiteral,
    degree: i64,
    det: DivisorLiteral,
    m_is_subbundle: bool,
    stability: StabilityJson,
    frob_stability: StabilityJson,
    bundle: BundleLiteral,
}

fn variant(c: &CurveModel, m_cls: &DivisorClass, d: &Divisor) -> Result<(bool, VariantResult)> {
    let v = variant_construct(c, m_cls, d)?;
    let (det, degree) = det_and_deg(c, &v)?;
    let m_sub = hom_dim(c, &line_bundle(c, m_cls), &v)? > 0 && 2 * m_cls.degree() == degree;
    let fs = stab(c, &frob_pull(c, &v)?)?;
    let ok = m_sub && !fs.flags.stable;
    Ok((
        ok,
        VariantResult {
            m: m_cls.literal(c),
            d: d.literal(),
            degree,
            det: det.literal(c),
            m_is_subbundle: m_sub,
            stability: stab(c, &v)?,
            frob_stability: fs,
            bundle: v.to_literal(),
        },
    ))
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct PushEntry {
    #[serde(rename = "L")]
    l: DivisorLiteral,
    s: i64,
    s_frob: i64,
    destabilizing_sub: DivisorLiteral,
}

/// Theta check, push-forward identities for deg L in 0..=3 and the
/// splitting criterion, on the loaded curve.
fn verify_all(c: &CurveModel) -> Result<(bool, Value)> {
    let mut checks = Vec::new();
    let (ok, detail) = raynaud(c)?;
    checks.push(Check { name: "theta_characteristic".into(), passed: ok, detail });

    let b = raynaud_b(c)?;
    let g = c.g();
    let mut entries = Vec::new();
    let mut push_ok = true;
    for e in 0..=3 {
        for l in enumerate_pic(c, e) {
            let (ok, r) = push(c, &l)?;
            // deg F_*L = e + g - 1
            let parity = if (e - 1).rem_euclid(2) == 0 { g } else { g - 1 };
            let sub_ok = parse_lit(c, &r.frob_stability.max_sub)? == l.add(c, &b.mul(c, 2));
            push_ok &= ok && sub_ok && r.stability.s == parity;
            entries.push(PushEntry {
                l: r.l,
                s: r.stability.s,
                s_frob: r.frob_stability.s,
                destabilizing_sub: r.frob_stability.max_sub,
            });
        }
    }
    checks.push(Check { name: "push_forward".into(), passed: push_ok, detail: serde_json::to_value(&entries)? });

    let mut split_ok = true;
    let mut cases = Vec::new();
    for k in -1..=2 {
        for xi in enumerate_pic(c, b.degree() + k) {
            let s = extension_splitting(c, &xi)?;
            let even = k % 2 == 0;
            split_ok &= s.splits == even && (even || s.hom_dim as i64 == g);
            cases.push(json!({ "xi": xi.literal(c), "splits": s.splits, "hom_dim": s.hom_dim }));
        }
    }
    checks.push(Check { name: "splitting_criterion".into(), passed: split_ok, detail: Value::Array(cases) });

    let ok = checks.iter().all(|c| c.passed);
    Ok((ok, json!({ "checks": checks })))
}

fn parse_lit(c: &CurveModel, lit: &DivisorLiteral) -> Result<DivisorClass> {
    Ok(DivisorClass::of_divisor(c, &Divisor::from_literal(c, lit)?))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Curve(_) => "curve validate",
        Command::Raynaud => "raynaud",
        Command::Push { .. } => "push",
        Command::Stability { .. } => "stability",
        Command::Construct { .. } => "construct",
        Command::Classify { .. } => "classify",
        Command::Census(CensusCmd::Injectivity { .. }) => "census injectivity",
        Command::Census(CensusCmd::Fiber { .. }) => "census fiber",
        Command::Variant { .. } => "variant",
        Command::Unique { .. } => "unique",
        Command::Verify(_) => "verify all",
    }
}

fn run(cfg: &RunConfig, c: &CurveModel) -> Result<(bool, Value)> {
    Ok(match &cfg.command {
        Command::Curve(CurveCmd::Validate) => curve_validate(c)?,
        Command::Raynaud => raynaud(c)?,
        Command::Push { l } => {
            let (ok, r) = push(c, &parse_class_arg(c, l)?)?;
            (ok, serde_json::to_value(r)?)
        }
        Command::Stability { bundle } => {
            let v = read_bundle(c, bundle)?;
            let (det, d) = det_and_deg(c, &v)?;
            (true, json!({ "degree": d, "det": det.literal(c), "stability": stab(c, &v)? }))
        }
        Command::Construct { l, l_cls, index } => {
            if *l as i64 > c.g() - 2 {
                return Err(Error::ColengthTooLarge { l: *l, max: c.g() - 2 });
            }
            let l_cls = match l_cls {
                Some(s) => parse_class_arg(c, s)?,
                None => return Err(Error::Parse("--L is required".into())),
            };
            let dt = basic_construct(c, &l_cls, *l, *index)?;
            let sm = summarize(c, &dt)?;
            let ok = sm.s > 0 && sm.s_frob < 0;
            (ok, json!({ "summary": sm, "bundle": dt.result.to_literal() }))
        }
        Command::Classify { bundle } => {
            let v = read_bundle(c, bundle)?;
            let dt = classify(c, &v)?;
            (true, json!({ "summary": summarize(c, &dt)? }))
        }
        Command::Census(CensusCmd::Injectivity { d }) => {
            let r = injectivity_census(c, *d)?;
            let ok = r.collisions.is_empty() && r.data.iter().all(|s| s.s > 0);
            (ok, serde_json::to_value(r)?)
        }
        Command::Census(CensusCmd::Fiber { l, xi }) => {
            let xi = match xi {
                Some(s) => parse_class_arg(c, s)?,
                None => DivisorClass::of_infinity(c, 2),
            };
            let r = fixed_det_fiber(c, &xi, *l)?;
            let q = c.q().pow(*l as u32) as usize;
            let ok = r.all_det_ok && r.pairs.iter().all(|p| !is_mult_free(c, &p.divisor) || p.qstar_points == q);
            (ok, serde_json::to_value(r)?)
        }
        Command::Variant { m, d } => {
            let (ok, r) = variant(c, &parse_class_arg(c, m)?, &parse_divisor(c, d)?)?;
            (ok, serde_json::to_value(r)?)
        }
        Command::Unique { xi, samples } => {
            let r = genus2_uniqueness(c, &parse_class_arg(c, xi)?, *samples, cfg.seed)?;
            (r.counterexamples.is_empty(), serde_json::to_value(r)?)
        }
        Command::Verify(VerifyCmd::All) => verify_all(c)?,
    })
}

fn is_mult_free(c: &CurveModel, lit: &DivisorLiteral) -> bool {
    Divisor::from_literal(c, lit).map(|d| d.is_multiplicity_free()).unwrap_or(false)
}

/// Runs one command and returns the report, or the error for usage failures.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let c = parse_curve(&fs::read_to_string(&cfg.curve)?)?;
    let (ok, result) = run(cfg, &c)?;
    let mut curve = serde_json::to_value(c.config())?;
    curve["g"] = json!(c.genus());
    Ok(Report { command: command_name(&cfg.command).into(), curve, seed: cfg.seed, ok, result })
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Scalars as `key<TAB>value` lines; the first array of objects as a table.
pub fn to_tsv(r: &Report) -> String {
    let mut out = format!("command\t{}\nok\t{}\n", r.command, r.ok);
    let Value::Object(map) = &r.result else {
        out.push_str(&format!("result\t{}\n", tsv_cell(&r.result)));
        return out;
    };
    let mut table = None;
    for (k, v) in map {
        match v {
            Value::Array(rows) if table.is_none() && rows.first().is_some_and(Value::is_object) => table = Some(rows),
            _ => out.push_str(&format!("{k}\t{}\n", tsv_cell(v))),
        }
    }
    if let Some(rows) = table {
        let cols: Vec<&String> = rows[0].as_object().map(|o| o.keys().collect()).unwrap_or_default();
        out.push('\n');
        out.push_str(&cols.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\t"));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = cols.iter().map(|k| tsv_cell(&row[k.as_str()])).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    }
    out
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Tsv => to_tsv(r),
    }
}

/// Exit code for a command that failed before producing a report.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ThetaCheckFailed | Error::InternalInconsistency(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

/// Parses, runs and writes the report; returns the process exit code.
pub fn dispatch(cfg: &RunConfig) -> i32 {
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&report, cfg.format);
    let written = match &cfg.out {
        Some(p) => fs::write(p, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// Applies `FFD_THREADS` to the global thread pool.
pub fn init_threads() {
    if let Some(n) = std::env::var("FFD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
