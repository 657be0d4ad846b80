use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use tiltkit::algebra::{
    cartan_matrix, center_dimension, corner_dims, detect_triangular, FDAlgebra, TriangularPresentation,
};
use tiltkit::ar::{apr_equivalent_algebra, build_apr_tilting, is_projective};
use tiltkit::certificate::{invariants_compare, EquivalenceCertificate};
use tiltkit::derived::Complex;
use tiltkit::format::{
    algebra_from_json, certificate_to_json, complex_from_json, module_from_json, parse_document,
    presentation_from_json, presentation_to_json, to_canonical_string, verdict_word,
};
use tiltkit::glue::{complex_tilting_condition, glue, GlueMode, GluedTiltingSpec};
use tiltkit::module::{
    decompose, min_projective_resolution, tilting_module_check, ExtDim, Module, PdValue, TiltingVerdict,
};
use tiltkit::recollement::{
    prop33_check, torsion_canonical_sequence, verify_recollement_axioms, Corpus, IdempotentRecollement,
};

use crate::workspace::{content_key, Workspace};

/// A command's JSON result; `valid` decides the exit status.
pub struct Outcome {
    pub output: Value,
    pub valid: bool,
}

impl Outcome {
    fn from_report(output: Value) -> Self {
        let valid = output["verdict"] == "VALID";
        Outcome { output, valid }
    }
}

pub struct Ctx {
    pub workspace: Workspace,
    pub bound: usize,
}

pub fn read_document(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

impl Ctx {
    fn load_algebra(&self, arg: &str) -> Result<(Arc<FDAlgebra>, Value)> {
        let path = self.workspace.resolve_algebra(arg).ok_or_else(|| anyhow!("no algebra file or artifact {arg:?}"))?;
        let doc = read_document(&path)?;
        let a = algebra_from_json(&doc).with_context(|| format!("building the algebra of {}", path.display()))?;
        Ok((Arc::new(a), doc))
    }

    /// Looks up a cached output for the key, or computes and stores it.
    fn memoized(&self, key: &str, compute: impl FnOnce() -> Result<Value>) -> Result<Outcome> {
        if let Some(hit) = self.workspace.get("reports", key) {
            if let Ok(v) = parse_document(&hit) {
                return Ok(Outcome::from_report(v));
            }
        }
        let v = compute()?;
        self.workspace.put("reports", key, &to_canonical_string(&v))?;
        Ok(Outcome::from_report(v))
    }

    fn key(&self, command: &str, docs: &[&Value], flags: &str) -> String {
        let texts: Vec<String> = docs.iter().map(|d| to_canonical_string(d)).collect();
        let bound = self.bound.to_string();
        let mut parts: Vec<&[u8]> = vec![command.as_bytes(), flags.as_bytes(), bound.as_bytes()];
        parts.extend(texts.iter().map(|t| t.as_bytes()));
        content_key(&parts)
    }
}

fn split_vertices(a: &FDAlgebra, spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = match a.vertex_index(part) {
            Ok(v) => v,
            Err(_) => part
                .parse::<usize>()
                .ok()
                .filter(|&i| i < a.num_vertices())
                .ok_or_else(|| anyhow!("unknown vertex {part:?}; vertices are {}", a.vertices().join(", ")))?,
        };
        out.push(v);
    }
    if out.is_empty() {
        bail!("--e names no vertices");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn triangular(a: &Arc<FDAlgebra>, e: &str) -> Result<TriangularPresentation> {
    let verts = split_vertices(a, e)?;
    detect_triangular(a, &verts).ok_or_else(|| {
        anyhow!("e = {e} does not split the algebra as a triangular matrix algebra (e A (1-e) is nonzero)")
    })
}

fn algebra_summary(a: &FDAlgebra) -> Result<Value> {
    let cartan = cartan_matrix(a)?;
    Ok(json!({
        "dimension": a.dim(),
        "vertices": a.vertices(),
        "corner_dims": corner_dims(a),
        "cartan": {"matrix": cartan.entries, "determinant": cartan.determinant.to_string()},
        "center_dimension": center_dimension(a),
        "truncation_active": a.provenance().is_some_and(|p| p.truncation_active),
    }))
}

pub fn algebra_build(ctx: &Ctx, input: &Path, out: Option<&Path>) -> Result<Outcome> {
    let doc = read_document(input)?;
    let p = presentation_from_json(&doc)?;
    let canonical = to_canonical_string(&presentation_to_json(&p));
    let a = algebra_from_json(&doc)?;
    let key = content_key(&[canonical.as_bytes()]);
    ctx.workspace.put("algebras", &key, &canonical)?;
    if let Some(out) = out {
        crate::workspace::write_atomic(out, &canonical)?;
    }
    let mut summary = algebra_summary(&a)?;
    summary["artifact"] = json!(key);
    summary["verdict"] = json!("VALID");
    Ok(Outcome::from_report(summary))
}

pub fn algebra_info(ctx: &Ctx, algebra: &str) -> Result<Outcome> {
    let (a, _) = ctx.load_algebra(algebra)?;
    let mut summary = algebra_summary(&a)?;
    summary["labels"] = json!(a.labels());
    summary["verdict"] = json!("VALID");
    Ok(Outcome::from_report(summary))
}

fn pd_json(pd: PdValue) -> Value {
    match pd {
        PdValue::Known(p) => json!(p),
        PdValue::AtLeast(b) => json!(format!(">={b}")),
    }
}

fn ext_json(e: &ExtDim) -> Value {
    match e {
        ExtDim::Known(n) => json!(n),
        ExtDim::Unknown { bound } => json!(format!("unknown beyond {bound}")),
    }
}

pub fn module_check(ctx: &Ctx, algebra: &str, module: &Path) -> Result<Outcome> {
    let (a, _) = ctx.load_algebra(algebra)?;
    let doc = read_document(module)?;
    let m = match module_from_json(&doc, &a) {
        Ok(m) => m,
        Err(e) => return Ok(Outcome::from_report(json!({"error": e.to_string(), "verdict": "INVALID"}))),
    };
    let summands = if m.is_zero() { 0 } else { decompose(&m)?.summands.len() };
    let report = tilting_module_check(&m, ctx.bound)?;
    let pd = match min_projective_resolution(&m, ctx.bound)?.pd {
        Some(p) => PdValue::Known(p),
        None => PdValue::AtLeast(ctx.bound + 1),
    };
    Ok(Outcome::from_report(json!({
        "dims": m.dims(),
        "total_dimension": m.total_dim(),
        "projective": is_projective(&m)?,
        "indecomposable_summands": summands,
        "projective_dimension": pd_json(pd),
        "tilting": verdict_str(report.verdict),
        "verdict": "VALID",
    })))
}

fn verdict_str(v: TiltingVerdict) -> &'static str {
    match v {
        TiltingVerdict::Tilting => "tilting",
        TiltingVerdict::NotTilting => "not tilting",
        TiltingVerdict::Undetermined => "undetermined",
    }
}

pub fn apr(ctx: &Ctx, algebra: &str, e: &str) -> Result<Outcome> {
    let (a, doc) = ctx.load_algebra(algebra)?;
    let key = ctx.key("apr", &[&doc], e);
    ctx.memoized(&key, || {
        let t = triangular(&a, e)?;
        let d = build_apr_tilting(&t, false, ctx.bound)?;
        let cert = apr_equivalent_algebra(&d)?;
        Ok(certificate_to_json(&cert)?)
    })
}

/// A document is a complex when it has `degrees`, otherwise a module in degree 0.
fn load_object(doc: &Value, a: &Arc<FDAlgebra>) -> Result<Complex> {
    if doc.get("degrees").is_some() {
        Ok(complex_from_json(doc, a)?)
    } else {
        Ok(Complex::stalk(&module_from_json(doc, a)?, 0))
    }
}

fn object_doc(arg: &str) -> Result<Value> {
    if arg == "regular" {
        Ok(json!("regular"))
    } else {
        read_document(Path::new(arg))
    }
}

fn object_over(doc: &Value, a: &Arc<FDAlgebra>) -> Result<Complex> {
    if doc == "regular" {
        Ok(Complex::stalk(&Module::regular(a), 0))
    } else {
        load_object(doc, a)
    }
}

pub fn tilting_check(ctx: &Ctx, algebra: &str, object: &Path) -> Result<Outcome> {
    let (a, adoc) = ctx.load_algebra(algebra)?;
    let doc = read_document(object)?;
    let key = ctx.key("tilting-check", &[&adoc, &doc], "");
    ctx.memoized(&key, || {
        let x = load_object(&doc, &a)?;
        let mut cert = EquivalenceCertificate::new("tilting_check", "input", &a);
        cert.push(complex_tilting_condition("tilting", "X", &x, ctx.bound)?);
        let valid = cert.conditions.iter().all(|c| c.status == tiltkit::certificate::Status::Pass);
        let mut v = certificate_to_json(&cert)?;
        v["verdict"] = json!(verdict_word(valid));
        let x = x.trimmed();
        if x.terms().len() == 1 {
            let r = tilting_module_check(&x.term(x.lo()), ctx.bound)?;
            v["module"] = json!({
                "projective_dimension": pd_json(r.pd),
                "ext": r.ext_table.iter().map(|(i, e)| json!([i, ext_json(e)])).collect::<Vec<_>>(),
                "summand_classes": r.summand_classes,
                "simples": r.num_simples,
                "generation": r.generation_method,
            });
        }
        Ok(v)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Jshriek,
    Jstar,
    Stalk,
}

pub struct GlueArgs<'a> {
    pub algebra: &'a str,
    pub e: &'a str,
    pub mode: Mode,
    pub y: &'a str,
    pub z: Option<&'a str>,
    pub shift: usize,
}

pub fn glue_cmd(ctx: &Ctx, args: &GlueArgs) -> Result<Outcome> {
    let (a, adoc) = ctx.load_algebra(args.algebra)?;
    let ydoc = object_doc(args.y)?;
    let zdoc = match (args.mode, args.z) {
        (Mode::Stalk, _) => json!(null),
        (_, Some(z)) => object_doc(z)?,
        (_, None) => bail!("--z is required for mode {:?}", args.mode),
    };
    let flags = format!("{}|{:?}|{}", args.e, args.mode, args.shift);
    let key = ctx.key("glue", &[&adoc, &ydoc, &zdoc], &flags);
    ctx.memoized(&key, || {
        let t = triangular(&a, args.e)?;
        let y = object_over(&ydoc, &t.c).context("reading Y over C")?;
        let z =
            if zdoc.is_null() { Complex::zero(&t.b) } else { object_over(&zdoc, &t.b).context("reading Z over B")? };
        let mode = match args.mode {
            Mode::Jshriek => GlueMode::JShriek,
            Mode::Jstar => GlueMode::JStar,
            Mode::Stalk => GlueMode::Stalk(args.shift),
        };
        let cert = glue(&GluedTiltingSpec { presentation: t, y, z, mode }, ctx.bound)?;
        Ok(certificate_to_json(&cert)?)
    })
}

pub fn recollement_verify(ctx: &Ctx, algebra: &str, e: &str, corpus: Option<&Path>) -> Result<Outcome> {
    let (a, _) = ctx.load_algebra(algebra)?;
    let verts = split_vertices(&a, e)?;
    let r = IdempotentRecollement::new(&a, &verts)?;
    let mut c = Corpus::standard(&r);
    let mut files = Vec::new();
    let mut load_errors = Vec::new();
    if let Some(dir) = corpus {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("reading corpus {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let name = p.file_name().unwrap().to_string_lossy().to_string();
            match read_document(&p)
                .map_err(|e| e.to_string())
                .and_then(|d| module_from_json(&d, &a).map_err(|e| e.to_string()))
            {
                Ok(m) => {
                    c.ambient.push(m);
                    files.push(name);
                }
                Err(e) => load_errors.push(json!({"check": "module_valid", "witness": format!("{name}: {e}")})),
            }
        }
    }
    let rep = verify_recollement_axioms(&r, &c)?;
    let p33 = prop33_check(&a, &verts)?;
    let mut failures: Vec<Value> = load_errors;
    failures.extend(rep.failures.iter().map(|f| json!({"check": f.check, "witness": f.witness})));
    let mut torsion = Vec::new();
    if let Some(t) = detect_triangular(&a, &verts) {
        for (i, m) in c.ambient.iter().enumerate() {
            let w = torsion_canonical_sequence(&t, m)?;
            if !w.verified() {
                failures.push(json!({"check": "torsion_sequence", "witness": format!("ambient module {i}")}));
            }
            torsion.push(w.verified());
        }
    }
    let valid = failures.is_empty() && p33.consistent();
    Ok(Outcome::from_report(json!({
        "checks": rep.checks,
        "corpus_files": files,
        "failures": failures,
        "prop33": {
            "i_upper_preserves_projectives": p33.i_upper_preserves_projectives,
            "i_shriek_exact": p33.i_shriek_exact,
            "iota_upper_exact": p33.iota_upper_exact,
            "tau_shriek_inclusion": p33.tau_shriek_inclusion,
            "corner_ef_dim": p33.corner_ef_dim,
            "all": p33.all(),
            "consistent": p33.consistent(),
        },
        "torsion_sequences_verified": torsion,
        "verdict": verdict_word(valid),
    })))
}

pub fn invariants_cmd(ctx: &Ctx, first: &str, second: &str) -> Result<Outcome> {
    let (a, _) = ctx.load_algebra(first)?;
    let (e, _) = ctx.load_algebra(second)?;
    let i = invariants_compare(&a, &e);
    let (d0, d1) = &i.cartan_determinant;
    let det = [d0, d1].map(|d| d.as_ref().map_or(Value::Null, |x| json!(x.to_string())));
    Ok(Outcome::from_report(json!({
        "simples": [i.simples.0, i.simples.1],
        "cartan_determinant": det,
        "center_dimension": [i.center_dimension.0, i.center_dimension.1],
        "verdict": verdict_word(i.agree()),
    })))
}
