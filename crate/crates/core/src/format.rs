//! JSON documents for algebras, modules, complexes and certificates.
//!
//! Objects are emitted with sorted keys and rationals as `"num/den"` strings,
//! so equal inputs always serialize to identical bytes.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{build_fd_algebra, presentation_of, Arrow, FDAlgebra, PathAlgebraPresentation, Quiver, Relation};
use crate::certificate::{EquivalenceCertificate, InvariantComparison, Status};
use crate::derived::Complex;
use crate::error::{Error, Result};
use crate::linalg::{parse_scalar, Matrix, Scalar};
use crate::module::{Module, ModuleMap};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(format!("{}/{}", s.numer(), s.denom()))
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_integer(n.as_i64().unwrap().into())),
        _ => Err(schema(format!("expected a rational, found {v}"))),
    }
}

/// Parses a document, reporting line and column on failure.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Pretty-printed with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{ctx}: missing key {key:?}")))
}

fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(format!("{ctx}: expected a string")))
}

fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{ctx}: expected an array")))
}

fn as_object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{ctx}: expected an object")))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(format!("{ctx}: expected a nonnegative integer")))
}

fn as_i64(v: &Value, ctx: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| schema(format!("{ctx}: expected an integer")))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(scalar_to_json).collect())).collect())
}

pub fn matrix_from_json(v: &Value, rows: usize, cols: usize, ctx: &str) -> Result<Matrix> {
    let rs = as_array(v, ctx)?;
    if rs.len() != rows {
        return Err(schema(format!("{ctx}: expected {rows} rows, found {}", rs.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in rs {
        let r = as_array(r, ctx)?;
        if r.len() != cols {
            return Err(schema(format!("{ctx}: expected {cols} columns, found {}", r.len())));
        }
        for x in r {
            data.push(scalar_from_json(x)?);
        }
    }
    Matrix::from_vec(rows, cols, data)
}

pub fn presentation_to_json(p: &PathAlgebraPresentation) -> Value {
    let arrows: Vec<Value> =
        p.quiver.arrows.iter().map(|a| json!({"name": a.name, "from": a.source, "to": a.target})).collect();
    let relations: Vec<Value> = p
        .relations
        .iter()
        .map(|r| {
            Value::Array(r.terms.iter().map(|(c, path)| json!({"coeff": scalar_to_json(c), "path": path})).collect())
        })
        .collect();
    json!({
        "field": "Q",
        "quiver": {"vertices": p.quiver.vertices, "arrows": arrows},
        "relations": relations,
        "nilpotency_bound": p.nilpotency_bound,
    })
}

pub fn algebra_to_json(a: &FDAlgebra) -> Result<Value> {
    Ok(presentation_to_json(&presentation_of(a)?))
}

pub fn presentation_from_json(v: &Value) -> Result<PathAlgebraPresentation> {
    match field(v, "field", "algebra")? {
        Value::String(s) if s == "Q" => {}
        Value::Object(o) if o.contains_key("p") => {
            return Err(Error::UnsupportedField(format!("prime field {}; only Q is implemented", o["p"])))
        }
        other => return Err(schema(format!("algebra: unrecognised field {other}"))),
    }
    let q = field(v, "quiver", "algebra")?;
    let vertices = as_array(field(q, "vertices", "quiver")?, "quiver.vertices")?
        .iter()
        .map(|x| as_str(x, "quiver.vertices").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let arrows = as_array(field(q, "arrows", "quiver")?, "quiver.arrows")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ctx = format!("quiver.arrows[{i}]");
            Ok(Arrow {
                name: as_str(field(a, "name", &ctx)?, &ctx)?.to_string(),
                source: as_str(field(a, "from", &ctx)?, &ctx)?.to_string(),
                target: as_str(field(a, "to", &ctx)?, &ctx)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let relations = match v.get("relations") {
        None => vec![],
        Some(rs) => as_array(rs, "relations")?
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let ctx = format!("relations[{i}]");
                let terms = as_array(r, &ctx)?
                    .iter()
                    .map(|t| {
                        let c = scalar_from_json(field(t, "coeff", &ctx)?)?;
                        let path = as_array(field(t, "path", &ctx)?, &ctx)?
                            .iter()
                            .map(|x| as_str(x, &ctx).map(str::to_string))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((c, path))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation { terms })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let nilpotency_bound = as_usize(field(v, "nilpotency_bound", "algebra")?, "nilpotency_bound")?;
    Ok(PathAlgebraPresentation::new(Quiver { vertices, arrows }, relations, nilpotency_bound))
}

pub fn algebra_from_json(v: &Value) -> Result<FDAlgebra> {
    build_fd_algebra(&presentation_from_json(v)?)
}

/// `algebra` is a reference (a file name or content hash) recorded verbatim.
pub fn module_to_json(m: &Module, algebra: &str) -> Value {
    let a = m.algebra();
    let dims: Map<String, Value> = a.vertices().iter().zip(m.dims()).map(|(v, d)| (v.clone(), json!(d))).collect();
    let arrows: Map<String, Value> =
        a.generators().iter().map(|&g| (a.labels()[g].clone(), matrix_to_json(m.action(g)))).collect();
    json!({"algebra": algebra, "dims": dims, "arrows": arrows})
}

pub fn module_from_json(v: &Value, a: &Arc<FDAlgebra>) -> Result<Module> {
    let dobj = as_object(field(v, "dims", "module")?, "module.dims")?;
    for k in dobj.keys() {
        a.vertex_index(k)?;
    }
    let dims = a
        .vertices()
        .iter()
        .map(|name| dobj.get(name).map_or(Ok(0), |d| as_usize(d, "module.dims")))
        .collect::<Result<Vec<_>>>()?;
    let mut actions = Vec::new();
    if let Some(arr) = v.get("arrows") {
        for (name, mat) in as_object(arr, "module.arrows")? {
            let g = a.label_index(name).ok_or_else(|| Error::UnknownArrow(name.clone()))?;
            let ctx = format!("module.arrows.{name}");
            actions.push((name.clone(), matrix_from_json(mat, dims[a.target(g)], dims[a.source(g)], &ctx)?));
        }
    }
    Module::from_generator_actions(a, dims, &actions)
}

fn map_to_json(f: &ModuleMap) -> Value {
    let a = f.source.algebra();
    let comps: Map<String, Value> =
        a.vertices().iter().zip(&f.components).map(|(v, m)| (v.clone(), matrix_to_json(m))).collect();
    Value::Object(comps)
}

fn map_from_json(v: &Value, s: &Module, t: &Module, ctx: &str) -> Result<ModuleMap> {
    let a = s.algebra();
    let obj = as_object(v, ctx)?;
    let comps = a
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let (r, c) = (t.dims()[i], s.dims()[i]);
            match obj.get(name) {
                Some(m) => matrix_from_json(m, r, c, &format!("{ctx}.{name}")),
                None => Ok(Matrix::zeros(r, c)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::new(s, t, comps)
}

pub fn complex_to_json(x: &Complex, algebra: &str) -> Value {
    let (lo, hi) = if x.terms().is_empty() { (0, -1) } else { (x.lo(), x.hi()) };
    json!({
        "modules": x.terms().iter().map(|m| module_to_json(m, algebra)).collect::<Vec<_>>(),
        "degrees": [lo, hi],
        "differentials": x.diffs().iter().map(map_to_json).collect::<Vec<_>>(),
    })
}

pub fn complex_from_json(v: &Value, a: &Arc<FDAlgebra>) -> Result<Complex> {
    let degs = as_array(field(v, "degrees", "complex")?, "complex.degrees")?;
    if degs.len() != 2 {
        return Err(schema("complex.degrees: expected [lo, hi]"));
    }
    let (lo, hi) = (as_i64(&degs[0], "complex.degrees")?, as_i64(&degs[1], "complex.degrees")?);
    let mods = as_array(field(v, "modules", "complex")?, "complex.modules")?
        .iter()
        .map(|m| module_from_json(m, a))
        .collect::<Result<Vec<_>>>()?;
    let expected = (hi - lo + 1).max(0) as usize;
    if mods.len() != expected {
        return Err(schema(format!("complex: degrees [{lo}, {hi}] need {expected} modules, found {}", mods.len())));
    }
    if mods.is_empty() {
        return Ok(Complex::zero(a));
    }
    let diffs_json = match v.get("differentials") {
        Some(d) => as_array(d, "complex.differentials")?.clone(),
        None => vec![],
    };
    if diffs_json.len() != mods.len() - 1 {
        return Err(schema(format!("complex: expected {} differentials, found {}", mods.len() - 1, diffs_json.len())));
    }
    let diffs = diffs_json
        .iter()
        .enumerate()
        .map(|(k, d)| map_from_json(d, &mods[k], &mods[k + 1], &format!("complex.differentials[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Complex::new(a, lo, mods, diffs)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Unknown => "UNKNOWN",
    }
}

fn invariants_to_json(i: &InvariantComparison) -> Value {
    let det = |d: &Option<num_bigint::BigInt>| d.as_ref().map_or(Value::Null, |x| Value::String(x.to_string()));
    json!({
        "simples": [i.simples.0, i.simples.1],
        "cartan_determinant": [det(&i.cartan_determinant.0), det(&i.cartan_determinant.1)],
        "center_dimension": [i.center_dimension.0, i.center_dimension.1],
        "agree": i.agree(),
    })
}

pub fn verdict_word(valid: bool) -> &'static str {
    if valid {
        "VALID"
    } else {
        "INVALID"
    }
}

pub fn certificate_to_json(c: &EquivalenceCertificate) -> Result<Value> {
    let conditions: Vec<Value> = c
        .conditions
        .iter()
        .map(|k| {
            let mut o = Map::new();
            o.insert("id".into(), json!(k.id));
            o.insert("window".into(), k.window.map_or(Value::Null, |(lo, hi)| json!([lo, hi])));
            o.insert("verdict".into(), json!(status_word(k.status)));
            if let Some(w) = &k.witness {
                o.insert("witness".into(), json!(w));
            }
            Value::Object(o)
        })
        .collect();
    let e = match &c.endomorphism_algebra {
        Some(e) => algebra_to_json(e)?,
        None => Value::Null,
    };
    let mut invariants = c.invariants.as_ref().map_or_else(|| json!({}), invariants_to_json);
    if let Some(t) = &c.endomorphism_triangular {
        let (b, cc, m) = t.dims();
        invariants["triangular_blocks"] = json!({"upper": b, "lower": cc, "bimodule": m});
    }
    Ok(json!({
        "kind": c.construction,
        "conditions": conditions,
        "E": e,
        "invariants": invariants,
        "verdict": verdict_word(c.is_valid()),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn algebra_round_trip() {
        let a = fixtures::kr(3, 2);
        let v = algebra_to_json(&a).unwrap();
        assert_eq!(v["relations"][0][0]["coeff"], "1/1");
        let b = algebra_from_json(&v).unwrap();
        assert_eq!(&b, a.as_ref());
        assert_eq!(to_canonical_string(&algebra_to_json(&b).unwrap()), to_canonical_string(&v));
    }

    #[test]
    fn prime_field_rejected() {
        let mut v = algebra_to_json(&fixtures::a2()).unwrap();
        v["field"] = json!({"p": 5});
        assert!(matches!(algebra_from_json(&v), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn bad_endpoint_and_syntax() {
        let mut v = algebra_to_json(&fixtures::a2()).unwrap();
        v["quiver"]["arrows"][0]["to"] = json!("nowhere");
        assert!(matches!(algebra_from_json(&v), Err(Error::UnknownVertex(_))));
        let e = parse_document("{\n  \"field\": \"Q\",\n  oops\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn module_and_complex_round_trip() {
        let a = fixtures::kr(3, 2);
        let m = crate::ar::tau_inverse(&Module::projective(&a, 1)).unwrap().module;
        let back = module_from_json(&module_to_json(&m, "kr"), &a).unwrap();
        assert_eq!(back.dims(), m.dims());
        assert_eq!(back.actions(), m.actions());
        let r = crate::derived::proj_resolve(&Complex::stalk(&m, 0), 4).unwrap().complex;
        let v = complex_to_json(&r, "kr");
        let r2 = complex_from_json(&v, &a).unwrap();
        assert_eq!(r2.lo(), r.lo());
        assert_eq!(complex_to_json(&r2, "kr"), v);
    }

    #[test]
    fn action_axiom_violation() {
        let a = fixtures::kr(2, 2);
        let mut v = module_to_json(&Module::regular(&a), "kr");
        // delta^2 = 0 fails once delta acts invertibly
        let n = v["dims"]["x"].as_u64().unwrap() as usize;
        let id: Vec<Vec<Value>> =
            (0..n).map(|i| (0..n).map(|j| json!(if i == j { "1" } else { "0" })).collect()).collect();
        v["arrows"]["delta"] = json!(id);
        assert!(module_from_json(&v, &a).is_err());
    }
}
