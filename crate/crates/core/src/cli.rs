//! Command-line front end. Every verb writes one JSON document (or a short
//! text summary) to stdout; diagnostics go to stderr.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::diagram::{comp_key, DiagramJson, Prediagram, SeparatrixDiagram};
use crate::enumerator::{enumerate_matchings, ClassificationResult, Kind, SearchSpec};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, QuadraticNumber};
use crate::presets::{list_presets, load_preset, PresetEntry, GOLDEN};
use crate::prym::{find_prym_involutions, involution_from, involution_report, PrymInvolution};
use crate::surface::{homology_report, is_connected_surface, stratum_signature, Surface};
use crate::twistspace::{has_property_p, Locus, TwistModel, Vector};

pub const SCHEMA: &str = "flatkern/1";

#[derive(Parser, Debug)]
#[command(name = "flatkern", version, about = "Separatrix diagrams, Prym involutions and twist spaces in exact arithmetic")]
pub struct Cli {
    /// Print a short text summary instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub summary: bool,
    /// Print JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Preset id or path to a diagram JSON file.
    pub input: String,
    /// Metric id of the preset, or path to a diagram JSON file.
    #[arg(long)]
    pub metric: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    First,
    Second,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a prediagram or diagram and report its stratum.
    Check(Target),
    /// Enumerate matchings of a base prediagram that carry a Prym involution.
    Enumerate {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 2)]
        fixed_cylinders: usize,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Ignore the base's prescribed involution and search all of them.
        #[arg(long)]
        any_involution: bool,
    },
    /// List the combinatorial Prym involutions of a diagram.
    PrymScan(Target),
    /// Decide Property P for a surface and locus.
    PropertyP {
        #[command(flatten)]
        target: Target,
        /// full, prym, or explicit:<path>
        #[arg(long)]
        locus: Option<String>,
    },
    /// Chain complex and homology of the cylinder decomposition.
    Homology(Target),
    /// List bundled presets.
    Presets,
}

enum Source {
    Preset(Box<PresetEntry>),
    File(DiagramJson),
}

fn read_json_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn resolve(input: &str) -> Result<Source> {
    let path = Path::new(input);
    if path.is_file() {
        let v = read_json_file(path)?;
        if v.get("id").is_some() && v.get("kappa").is_some() {
            return Ok(Source::Preset(Box::new(serde_json::from_value(v)?)));
        }
        return Ok(Source::File(serde_json::from_value(v)?));
    }
    Ok(Source::Preset(Box::new(load_preset(input)?)))
}

impl Source {
    fn prediagram(&self) -> Result<Prediagram> {
        match self {
            Source::Preset(p) => p.prediagram(),
            Source::File(j) => j.prediagram(),
        }
    }

    fn metric_json(&self, metric: Option<&str>) -> Result<Option<DiagramJson>> {
        if let Some(m) = metric {
            if let Source::Preset(p) = self {
                if let Some(j) = p.metrics.get(m) {
                    return Ok(Some(j.clone()));
                }
            }
            let path = Path::new(m);
            if path.is_file() {
                return Ok(Some(serde_json::from_value(read_json_file(path)?)?));
            }
            return Err(Error::UnknownPreset(format!("metric '{m}'")));
        }
        Ok(match self {
            Source::Preset(p) => p.metrics.get(GOLDEN).or_else(|| p.metrics.values().next()).cloned(),
            Source::File(j) => j.has_matching().then(|| j.clone()),
        })
    }

    fn surface(&self, metric: Option<&str>) -> Result<Surface> {
        let j = self.metric_json(metric)?.ok_or_else(|| Error::InvalidDiagram("input has no metric".into()))?;
        Surface::from_json(&j)
    }

    fn involution(&self, d: &SeparatrixDiagram) -> Result<Option<PrymInvolution>> {
        match self {
            Source::Preset(p) => match &p.involution {
                Some(rho) => {
                    let inv = involution_from(&d.prediagram, &d.matching, rho)?;
                    if (0..rho.len()).any(|e| d.end_length(e) != d.end_length(rho[e])) {
                        return Err(Error::MalformedInvolution("involution does not preserve the metric".into()));
                    }
                    Ok(Some(inv))
                }
                None => Ok(None),
            },
            Source::File(_) => Ok(find_prym_involutions(d).into_iter().next()),
        }
    }
}

fn qn_value(x: &QuadraticNumber) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn vec_value(v: &[QuadraticNumber]) -> Value {
    Value::Array(v.iter().map(qn_value).collect())
}

fn kind_str(k: Option<Kind>) -> Value {
    match k {
        Some(Kind::First) => json!("first"),
        Some(Kind::Second) => json!("second"),
        None => Value::Null,
    }
}

fn with_schema(mut v: Value) -> Value {
    v.as_object_mut().expect("object").insert("schema".into(), json!(SCHEMA));
    v
}

struct Outcome {
    value: Value,
    summary: String,
    code: i32,
}

fn ok(value: Value, summary: String) -> Outcome {
    Outcome { value: with_schema(value), summary, code: 0 }
}

fn cmd_check(t: &Target) -> Result<Outcome> {
    let src = resolve(&t.input)?;
    let p = src.prediagram()?;
    let report = p.validate();
    if !report.is_valid() {
        let v = json!({"valid": false, "violations": report.violations});
        let s = format!("invalid: {} violation(s)", report.violations.len());
        return Ok(Outcome { value: with_schema(v), summary: s, code: 1 });
    }
    let sig = stratum_signature(&p);
    let mut v = json!({
        "valid": true,
        "n_ends": p.n_ends(),
        "stable": p.is_stable(),
        "alternating": p.is_alternating(),
        "connected_prediagram": p.is_connected(),
        "components": p.cylinder_components().iter().map(|c| json!({
            "id": comp_key(c.id), "positive": c.positive, "edges": c.edges
        })).collect::<Vec<_>>(),
    });
    let obj = v.as_object_mut().expect("object");
    let mut code = 0;
    let mut summary = format!("valid prediagram, {} ends", p.n_ends());
    match &sig {
        Ok(s) => {
            obj.insert("kappa".into(), json!(s.kappa));
            obj.insert("genus".into(), json!(s.genus));
            obj.insert("n_saddle_connections".into(), json!(s.n_saddle_connections));
            summary = format!("{summary}, kappa {:?}, genus {}", s.kappa, s.genus);
        }
        Err(e) => {
            obj.insert("stratum_error".into(), json!(e.to_string()));
            code = 1;
        }
    }
    if let Some(j) = src.metric_json(t.metric.as_deref())? {
        let d = j.diagram();
        match d {
            Ok(d) => {
                let connected = is_connected_surface(&d.prediagram, &d.matching);
                obj.insert("surface_connected".into(), json!(connected));
                obj.insert("n_cylinders".into(), json!(d.cylinders().len()));
                obj.insert("circumferences".into(), vec_value(&d.circumferences()));
                obj.insert("diagram_valid".into(), json!(true));
                summary = format!("{summary}, {} cylinders", d.cylinders().len());
                if !connected {
                    code = 1;
                }
            }
            Err(e) => {
                obj.insert("diagram_valid".into(), json!(false));
                obj.insert("diagram_error".into(), json!(e.to_string()));
                code = 1;
            }
        }
    }
    Ok(Outcome { value: with_schema(v), summary, code })
}

pub fn classification_json(res: &ClassificationResult) -> Value {
    let survivors: Vec<Value> = res
        .survivors
        .iter()
        .map(|s| {
            json!({
                "matching": s.name,
                "kind": kind_str(s.kind),
                "class": s.class,
                "metric": s.metric.iter().map(format_rational).collect::<Vec<_>>(),
                "involution": s.involution.rho,
                "fixed_counts": [s.involution.fixed_counts.0, s.involution.fixed_counts.1, s.involution.fixed_counts.2],
                "fixed_cylinders": s.involution.fixed_cylinders().iter().map(|i| i + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    let rejected: Vec<Value> = res
        .rejected
        .iter()
        .map(|r| {
            let mut v = json!({"matching": r.name, "reason": r.reason.as_str()});
            if let Some(d) = &r.duplicate_of {
                v.as_object_mut().expect("object").insert("duplicate_of".into(), json!(d));
            }
            v
        })
        .collect();
    json!({
        "candidates": res.candidates,
        "counts": {
            "survivors": res.survivors.len(),
            "rejected": res.rejected.len(),
            "by_reason": res.reason_counts(),
        },
        "survivors": survivors,
        "rejected": rejected,
    })
}

fn cmd_enumerate(base: &str, fixed: usize, kind: Option<KindArg>, any: bool) -> Result<Outcome> {
    let (p, inv, labels) = match resolve(base)? {
        Source::Preset(e) => (e.prediagram()?, e.involution.clone(), e.label_scheme()?),
        Source::File(j) => (j.prediagram()?, None, None),
    };
    let mut spec = SearchSpec::new(p, fixed);
    spec.involution = if any { None } else { inv };
    spec.labels = labels;
    spec.kind_filter = kind.map(|k| match k {
        KindArg::First => Kind::First,
        KindArg::Second => Kind::Second,
    });
    let res = enumerate_matchings(&spec)?;
    let summary = res
        .survivors
        .iter()
        .map(|s| format!("{} {}", s.name, kind_str(s.kind).as_str().unwrap_or("-")))
        .collect::<Vec<_>>()
        .join("\n");
    let summary = format!("{} candidates, {} survivors\n{summary}", res.candidates, res.survivors.len());
    Ok(ok(classification_json(&res), summary))
}

fn cmd_prym_scan(t: &Target) -> Result<Outcome> {
    let src = resolve(&t.input)?;
    let s = src.surface(t.metric.as_deref())?;
    let d = &s.diagram;
    let genus = stratum_signature(&d.prediagram)?.genus;
    let all = find_prym_involutions(d);
    let reports: Vec<_> = all.iter().map(|i| involution_report(i, genus)).collect();
    let parity = all.iter().all(|i| i.fixed_counts.2 == 0 || i.fixed_counts.2 == 2);
    let summary = reports
        .iter()
        .enumerate()
        .map(|(k, r)| format!("#{k}: pi {} fixed {:?} counts {:?}", r.pi, r.fixed_cylinders, r.fixed_counts))
        .collect::<Vec<_>>()
        .join("\n");
    let summary = format!("{} involution(s)\n{summary}", reports.len());
    Ok(ok(json!({"genus": genus, "involutions": reports, "fixed_cylinder_parity": parity}), summary))
}

fn parse_explicit(path: &str, m: usize, d: u64) -> Result<Vec<Vector>> {
    let v = read_json_file(Path::new(path))?;
    let rows = v.get("basis").cloned().unwrap_or(v);
    let basis: Vec<Vector> = serde_json::from_value(rows)?;
    for b in &basis {
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!("basis vector of length {} for {m} cylinders", b.len())));
        }
        if let Some(x) = b.iter().find(|x| x.d != d) {
            return Err(Error::ContextMismatch(d, x.d));
        }
    }
    Ok(basis)
}

fn cmd_property_p(t: &Target, locus: Option<&str>) -> Result<Outcome> {
    let src = resolve(&t.input)?;
    let s = src.surface(t.metric.as_deref())?;
    let d = &s.diagram;
    let default = match &src {
        Source::Preset(p) => p.default_locus.clone(),
        Source::File(_) => "full".into(),
    };
    let locus_name = locus.unwrap_or(&default);
    let locus = if locus_name == "full" {
        Locus::FullStratum
    } else if locus_name == "prym" {
        let inv = src.involution(d)?.ok_or_else(|| Error::MalformedInvolution("no Prym involution available".into()))?;
        Locus::Prym(inv.pi)
    } else if let Some(path) = locus_name.strip_prefix("explicit:") {
        Locus::Explicit(parse_explicit(path, d.cylinders().len(), d.d)?)
    } else {
        return Err(Error::Parse(format!("unknown locus '{locus_name}'")));
    };
    let model = TwistModel::new(&s, locus)?;
    let verdict = has_property_p(&model);
    let summary = format!(
        "property P {} ({}), dim K = {}, max degree {}",
        if verdict.holds { "holds" } else { "fails" },
        verdict.reason,
        model.k.len(),
        verdict.max_degree.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
    );
    let v = json!({
        "locus": model.locus.name(),
        "circumferences": vec_value(&model.circumferences),
        "dim_k_full": model.k_full.len(),
        "dim_k": model.k.len(),
        "k_basis": model.k.iter().map(|u| vec_value(u)).collect::<Vec<_>>(),
        "verdict": verdict,
    });
    Ok(ok(v, summary))
}

fn cmd_homology(t: &Target) -> Result<Outcome> {
    let src = resolve(&t.input)?;
    let s = src.surface(t.metric.as_deref())?;
    let h = homology_report(&s.diagram)?;
    let summary = format!("b0 {} b1 {} genus {}", h.betti0, h.betti1, h.genus);
    let code = if h.boundary_relation_holds && h.betti1 == 2 * h.genus { 0 } else { 1 };
    let mut o = ok(serde_json::to_value(&h)?, summary);
    o.code = code;
    Ok(o)
}

fn cmd_presets() -> Result<Outcome> {
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for id in list_presets() {
        let p = load_preset(&id)?;
        lines.push(format!("{id}: kappa {:?}, genus {}", p.kappa, p.genus));
        entries.push(json!({
            "id": p.id,
            "kappa": p.kappa,
            "genus": p.genus,
            "description": p.description,
            "metrics": p.metric_ids(),
            "default_locus": p.default_locus,
        }));
    }
    Ok(ok(json!({"presets": entries}), lines.join("\n")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::UnknownPreset(_) => 2,
        _ => 1,
    }
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(t) => cmd_check(t),
        Command::Enumerate { base, fixed_cylinders, kind, any_involution } => {
            cmd_enumerate(base, *fixed_cylinders, *kind, *any_involution)
        }
        Command::PrymScan(t) => cmd_prym_scan(t),
        Command::PropertyP { target, locus } => cmd_property_p(target, locus.as_deref()),
        Command::Homology(t) => cmd_homology(t),
        Command::Presets => cmd_presets(),
    };
    match result {
        Ok(o) => {
            if cli.summary {
                let _ = writeln!(out, "{}", o.summary);
            } else {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.value).expect("serializable"));
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "flatkern: {e}");
            exit_code(&e)
        }
    }
}
