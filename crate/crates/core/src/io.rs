//! Versioned JSON for functor expressions, complexes, algebra lists and
//! reports. Readers report schema violations with the JSON path.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::functor::expr::Arrow;
use crate::functor::{FunctorExpr, SquareSpec};
use crate::linalg::Mat;
use crate::module::{FPModule, ModuleMap};
use crate::ring::{parse_algebra, parse_ring, BaseRing, RingElement, TestAlgebra};

pub const FORMAT_VERSION: u64 = 1;

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

/// Checks the `version` field of a document.
pub fn check_version(doc: &Value) -> Result<()> {
    let v = doc.get("version").ok_or_else(|| {
        schema("$.version", format!("missing; add \"version\": {FORMAT_VERSION} after checking the file against the current schema"))
    })?;
    match v.as_u64() {
        Some(FORMAT_VERSION) => Ok(()),
        Some(other) if other > FORMAT_VERSION => Err(schema(
            "$.version",
            format!("format {other} is newer than this build (reads {FORMAT_VERSION}); upgrade modcoh to read it"),
        )),
        Some(other) => Err(schema(
            "$.version",
            format!(
                "format {other} is no longer read; re-save the file with a build that writes format {FORMAT_VERSION} \
                 (matrices as row lists, module relations as column lists)"
            ),
        )),
        None => Err(schema("$.version", "must be a non-negative integer")),
    }
}

/// `{"version": 1, "kind": kind, ...body}`.
pub fn envelope(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("version".into(), json!(FORMAT_VERSION));
    m.insert("kind".into(), json!(kind));
    match body {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("data".into(), other);
        }
    }
    Value::Object(m)
}

fn open<'a>(doc: &'a Value, kind: &str) -> Result<&'a Value> {
    check_version(doc)?;
    let k = field(doc, "kind", "$")?;
    match k.as_str() {
        Some(s) if s == kind => Ok(doc),
        Some(s) => Err(schema("$.kind", format!("expected \"{kind}\", found \"{s}\""))),
        None => Err(schema("$.kind", "must be a string")),
    }
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    obj.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn string_of<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn elem(base: &BaseRing, v: &Value, path: &str) -> Result<RingElement> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(schema(path, "expected a ring element (string or integer)")),
    };
    base.parse_element(&text).map_err(|e| schema(path, e.to_string()))
}

fn elem_json(base: &BaseRing, a: &RingElement) -> Value {
    let s = base.render(a);
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

/// A matrix as a list of rows, or `{"rows", "cols", "entries"}` when a
/// dimension is zero. `shape` is checked when given.
fn mat_from(base: &BaseRing, v: &Value, path: &str, shape: Option<(usize, usize)>) -> Result<Mat<RingElement>> {
    let (rows, cols, data) = if let Some(obj) = v.as_object() {
        let r = usize_of(field(v, "rows", path)?, &format!("{path}.rows"))?;
        let c = usize_of(field(v, "cols", path)?, &format!("{path}.cols"))?;
        let entries = match obj.get("entries") {
            Some(e) => array(e, &format!("{path}.entries"))?.clone(),
            None => vec![],
        };
        if entries.len() != r * c {
            return Err(schema(&format!("{path}.entries"), format!("expected {} entries, found {}", r * c, entries.len())));
        }
        let data = entries
            .iter()
            .enumerate()
            .map(|(i, x)| elem(base, x, &format!("{path}.entries[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        (r, c, data)
    } else {
        let rows = array(v, path)?;
        let c = match (rows.first(), shape) {
            (Some(r), _) => array(r, &format!("{path}[0]"))?.len(),
            (None, Some((_, c))) => c,
            (None, None) => 0,
        };
        let mut data = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let rp = format!("{path}[{i}]");
            let row = array(row, &rp)?;
            if row.len() != c {
                return Err(schema(&rp, format!("row has {} entries, expected {c}", row.len())));
            }
            for (j, x) in row.iter().enumerate() {
                data.push(elem(base, x, &format!("{rp}[{j}]"))?);
            }
        }
        (rows.len(), c, data)
    };
    if let Some((r, c)) = shape {
        if (r, c) != (rows, cols) && !(rows == 0 && r == 0) {
            return Err(schema(path, format!("matrix is {rows}x{cols}, expected {r}x{c}")));
        }
        return Ok(Mat { rows: r, cols: c, data });
    }
    Ok(Mat { rows, cols, data })
}

fn mat_json(base: &BaseRing, m: &Mat<RingElement>) -> Value {
    if m.rows == 0 || m.cols == 0 {
        return json!({ "rows": m.rows, "cols": m.cols });
    }
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|a| elem_json(base, a)).collect())).collect())
}

/// `{"gens": n, "relations": [[…n entries…], …]}`, one list per relation.
fn module_from(base: &BaseRing, v: &Value, path: &str) -> Result<FPModule> {
    let gens = usize_of(field(v, "gens", path)?, &format!("{path}.gens"))?;
    let rp = format!("{path}.relations");
    let rels = match v.get("relations") {
        Some(r) => array(r, &rp)?.clone(),
        None => vec![],
    };
    let mut cols = Vec::new();
    for (i, r) in rels.iter().enumerate() {
        let p = format!("{rp}[{i}]");
        let r = array(r, &p)?;
        if r.len() != gens {
            return Err(schema(&p, format!("relation has {} entries, expected {gens}", r.len())));
        }
        cols.push(r.iter().enumerate().map(|(j, x)| elem(base, x, &format!("{p}[{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    let rel = Mat::from_fn(gens, cols.len(), |i, j| cols[j][i].clone());
    FPModule::new(base, gens, rel).map_err(|e| schema(path, e.to_string()))
}

fn module_json(base: &BaseRing, m: &FPModule) -> Value {
    let rels: Vec<Value> = (0..m.rel.cols)
        .map(|j| Value::Array(m.rel.col(j).iter().map(|a| elem_json(base, a)).collect()))
        .collect();
    json!({ "gens": m.gens, "relations": rels })
}

fn map_from(base: &BaseRing, v: &Value, path: &str) -> Result<ModuleMap> {
    let s = module_from(base, field(v, "source", path)?, &format!("{path}.source"))?;
    let t = module_from(base, field(v, "target", path)?, &format!("{path}.target"))?;
    let m = mat_from(base, field(v, "matrix", path)?, &format!("{path}.matrix"), Some((t.gens, s.gens)))?;
    ModuleMap::new(&s, &t, m).map_err(|e| schema(path, e.to_string()))
}

fn map_json(base: &BaseRing, f: &ModuleMap) -> Value {
    json!({
        "source": module_json(base, &f.source),
        "target": module_json(base, &f.target),
        "matrix": mat_json(base, &f.matrix),
    })
}

fn square_from(base: &BaseRing, v: &Value, path: &str) -> Result<SquareSpec> {
    Ok(SquareSpec {
        phi: mat_from(base, field(v, "phi", path)?, &format!("{path}.phi"), None)?,
        psi: mat_from(base, field(v, "psi", path)?, &format!("{path}.psi"), None)?,
    })
}

fn square_json(base: &BaseRing, s: &SquareSpec) -> Value {
    json!({ "phi": mat_json(base, &s.phi), "psi": mat_json(base, &s.psi) })
}

const NODE_KINDS: [&str; 13] = [
    "Strict",
    "KernelPair",
    "LimitOf",
    "Product",
    "Equalizer",
    "KernelOfMorphism",
    "CokernelOfMorphism",
    "ImageOfMorphism",
    "TensorModule",
    "Tor1",
    "AnnOf",
    "HomOf",
    "CohomologyOf",
];

fn boxed(base: &BaseRing, v: &Value, key: &str, path: &str) -> Result<Box<FunctorExpr>> {
    Ok(Box::new(node_from(base, field(v, key, path)?, &format!("{path}.{key}"))?))
}

fn node_from(base: &BaseRing, v: &Value, path: &str) -> Result<FunctorExpr> {
    let kind = string_of(field(v, "node", path)?, &format!("{path}.node"))?;
    let module = |key: &str| module_from(base, field(v, key, path)?, &format!("{path}.{key}"));
    let sq = |key: &str| square_from(base, field(v, key, path)?, &format!("{path}.{key}"));
    let children = |key: &str| -> Result<Vec<FunctorExpr>> {
        let p = format!("{path}.{key}");
        array(field(v, key, path)?, &p)?
            .iter()
            .enumerate()
            .map(|(i, c)| node_from(base, c, &format!("{p}[{i}]")))
            .collect()
    };
    Ok(match kind {
        "Strict" => FunctorExpr::Strict(module("module")?),
        "KernelPair" => FunctorExpr::KernelPair(map_from(base, v, path)?),
        "Product" => FunctorExpr::Product(children("factors")?),
        "LimitOf" => {
            let nodes = children("nodes")?;
            let ap = format!("{path}.arrows");
            let arrows = array(field(v, "arrows", path)?, &ap)?
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let p = format!("{ap}[{i}]");
                    let from = usize_of(field(a, "from", &p)?, &format!("{p}.from"))?;
                    let to = usize_of(field(a, "to", &p)?, &format!("{p}.to"))?;
                    if from >= nodes.len() || to >= nodes.len() {
                        return Err(schema(&p, format!("arrow {from} -> {to} refers past {} nodes", nodes.len())));
                    }
                    Ok(Arrow { from, to, square: square_from(base, a, &p)? })
                })
                .collect::<Result<Vec<_>>>()?;
            FunctorExpr::LimitOf { nodes, arrows }
        }
        "Equalizer" => FunctorExpr::Equalizer {
            source: boxed(base, v, "source", path)?,
            target: boxed(base, v, "target", path)?,
            sigma: sq("sigma")?,
            tau: sq("tau")?,
        },
        "KernelOfMorphism" | "CokernelOfMorphism" | "ImageOfMorphism" => {
            let (source, target, sigma) = (boxed(base, v, "source", path)?, boxed(base, v, "target", path)?, sq("sigma")?);
            match kind {
                "KernelOfMorphism" => FunctorExpr::KernelOfMorphism { source, target, sigma },
                "CokernelOfMorphism" => FunctorExpr::CokernelOfMorphism { source, target, sigma },
                _ => FunctorExpr::ImageOfMorphism { source, target, sigma },
            }
        }
        "TensorModule" => FunctorExpr::TensorModule { inner: boxed(base, v, "inner", path)?, module: module("module")? },
        "Tor1" => FunctorExpr::Tor1 { left: module("left")?, right: module("right")? },
        "AnnOf" => {
            let gp = format!("{path}.gens");
            let gens = array(field(v, "gens", path)?, &gp)?
                .iter()
                .enumerate()
                .map(|(i, g)| elem(base, g, &format!("{gp}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            FunctorExpr::AnnOf { base: base.clone(), gens }
        }
        "HomOf" => FunctorExpr::HomOf { source: boxed(base, v, "source", path)?, target: boxed(base, v, "target", path)? },
        "CohomologyOf" => {
            let (complex, degree) = complex_body(base, v, path)?;
            FunctorExpr::CohomologyOf { complex, degree }
        }
        other => {
            return Err(schema(
                &format!("{path}.node"),
                format!("unknown node kind \"{other}\" (expected one of {})", NODE_KINDS.join(", ")),
            ))
        }
    })
}

fn complex_body(base: &BaseRing, v: &Value, path: &str) -> Result<(Vec<ModuleMap>, usize)> {
    let cp = format!("{path}.maps");
    let maps = array(field(v, "maps", path)?, &cp)?
        .iter()
        .enumerate()
        .map(|(i, m)| map_from(base, m, &format!("{cp}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    for i in 1..maps.len() {
        if maps[i].source != maps[i - 1].target {
            return Err(schema(&format!("{cp}[{i}].source"), "does not match the target of the previous map"));
        }
    }
    let degree = usize_of(field(v, "degree", path)?, &format!("{path}.degree"))?;
    Ok((maps, degree))
}

fn complex_json(base: &BaseRing, maps: &[ModuleMap], degree: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("maps".into(), Value::Array(maps.iter().map(|f| map_json(base, f)).collect()));
    m.insert("degree".into(), json!(degree));
    m
}

fn node_json(base: &BaseRing, e: &FunctorExpr) -> Value {
    let mut m = Map::new();
    m.insert("node".into(), json!(e.kind()));
    let mut put = |k: &str, v: Value| {
        m.insert(k.into(), v);
    };
    match e {
        FunctorExpr::Strict(md) => put("module", module_json(base, md)),
        FunctorExpr::KernelPair(f) => {
            if let Value::Object(o) = map_json(base, f) {
                for (k, v) in o {
                    put(&k, v);
                }
            }
        }
        FunctorExpr::Product(v) => put("factors", Value::Array(v.iter().map(|c| node_json(base, c)).collect())),
        FunctorExpr::LimitOf { nodes, arrows } => {
            put("nodes", Value::Array(nodes.iter().map(|c| node_json(base, c)).collect()));
            let arrows: Vec<Value> = arrows
                .iter()
                .map(|a| {
                    json!({ "from": a.from, "to": a.to, "phi": mat_json(base, &a.square.phi), "psi": mat_json(base, &a.square.psi) })
                })
                .collect();
            put("arrows", Value::Array(arrows));
        }
        FunctorExpr::Equalizer { source, target, sigma, tau } => {
            put("source", node_json(base, source));
            put("target", node_json(base, target));
            put("sigma", square_json(base, sigma));
            put("tau", square_json(base, tau));
        }
        FunctorExpr::KernelOfMorphism { source, target, sigma }
        | FunctorExpr::CokernelOfMorphism { source, target, sigma }
        | FunctorExpr::ImageOfMorphism { source, target, sigma } => {
            put("source", node_json(base, source));
            put("target", node_json(base, target));
            put("sigma", square_json(base, sigma));
        }
        FunctorExpr::TensorModule { inner, module } => {
            put("inner", node_json(base, inner));
            put("module", module_json(base, module));
        }
        FunctorExpr::Tor1 { left, right } => {
            put("left", module_json(base, left));
            put("right", module_json(base, right));
        }
        FunctorExpr::AnnOf { gens, .. } => put("gens", Value::Array(gens.iter().map(|g| elem_json(base, g)).collect())),
        FunctorExpr::HomOf { source, target } => {
            put("source", node_json(base, source));
            put("target", node_json(base, target));
        }
        FunctorExpr::CohomologyOf { complex, degree } => {
            for (k, v) in complex_json(base, complex, *degree) {
                put(&k, v);
            }
        }
    }
    Value::Object(m)
}

fn base_from(doc: &Value) -> Result<BaseRing> {
    let s = string_of(field(doc, "base", "$")?, "$.base")?;
    parse_ring(s).map_err(|e| schema("$.base", e.to_string()))
}

pub fn expr_to_json(base: &BaseRing, e: &FunctorExpr) -> Value {
    envelope("functor", json!({ "base": base.to_string(), "expr": node_json(base, e) }))
}

pub fn expr_from_json(doc: &Value) -> Result<(BaseRing, FunctorExpr)> {
    let doc = open(doc, "functor")?;
    let base = base_from(doc)?;
    let e = node_from(&base, field(doc, "expr", "$")?, "$.expr")?;
    Ok((base, e))
}

pub fn complex_to_json(base: &BaseRing, maps: &[ModuleMap], degree: usize) -> Value {
    let mut body = complex_json(base, maps, degree);
    body.insert("base".into(), json!(base.to_string()));
    envelope("complex", Value::Object(body))
}

pub fn complex_from_json(doc: &Value) -> Result<(BaseRing, Vec<ModuleMap>, usize)> {
    let doc = open(doc, "complex")?;
    let base = base_from(doc)?;
    let (maps, degree) = complex_body(&base, doc, "$")?;
    Ok((base, maps, degree))
}

pub fn algebras_to_json(algs: &[TestAlgebra]) -> Value {
    envelope("algebras", json!({ "algebras": algs.iter().map(|a| a.to_string()).collect::<Vec<_>>() }))
}

pub fn algebras_from_json(doc: &Value) -> Result<Vec<TestAlgebra>> {
    let doc = open(doc, "algebras")?;
    array(field(doc, "algebras", "$")?, "$.algebras")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let p = format!("$.algebras[{i}]");
            parse_algebra(string_of(a, &p)?).map_err(|e| schema(&p, e.to_string()))
        })
        .collect()
}

/// Parses text as JSON, mapping syntax errors to a schema error at `$`.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", format!("not valid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::random::{battery, random_suite, BATTERY};
    use crate::module::int_mat;

    fn ker2() -> (BaseRing, FunctorExpr) {
        let z = BaseRing::Integers;
        let one = FPModule::free(&z, 1);
        (z.clone(), FunctorExpr::KernelPair(ModuleMap::new(&one, &one, int_mat(&z, &[&[2]], 1)).unwrap()))
    }

    #[test]
    fn round_trip_random_trees() {
        let suite = random_suite(11, 40, 3).unwrap();
        for (base, e) in &suite {
            let doc = expr_to_json(base, e);
            let text = serde_json::to_string(&doc).unwrap();
            let (b2, e2) = expr_from_json(&parse_json(&text).unwrap()).unwrap();
            assert_eq!((&b2, &e2), (base, e), "{text}");
        }
    }

    #[test]
    fn round_trip_battery() {
        for base in [BaseRing::Integers, BaseRing::integers_mod(12)] {
            let algs = battery(&base);
            assert_eq!(algebras_from_json(&algebras_to_json(&algs)).unwrap(), algs);
        }
        let all: Vec<TestAlgebra> = BATTERY.iter().map(|s| parse_algebra(s).unwrap()).collect();
        assert_eq!(algebras_from_json(&algebras_to_json(&all)).unwrap(), all);
    }

    #[test]
    fn handwritten_document() {
        let text = r#"{"version": 1, "kind": "functor", "base": "Z",
            "expr": {"node": "KernelPair", "source": {"gens": 1}, "target": {"gens": 1}, "matrix": [[2]]}}"#;
        let (b, e) = expr_from_json(&parse_json(text).unwrap()).unwrap();
        assert_eq!((b, e), ker2());
    }

    #[test]
    fn errors_name_the_path() {
        let bad_kind = r#"{"version": 1, "kind": "functor", "base": "Z",
            "expr": {"node": "Product", "factors": [{"node": "Strict", "module": {"gens": 1}}, {"node": "Colimit"}]}}"#;
        match expr_from_json(&parse_json(bad_kind).unwrap()) {
            Err(Error::Schema { path, msg }) => {
                assert_eq!(path, "$.expr.factors[1].node");
                assert!(msg.contains("Colimit"));
            }
            other => panic!("{other:?}"),
        }
        let bad_entry = r#"{"version": 1, "kind": "functor", "base": "Z",
            "expr": {"node": "KernelPair", "source": {"gens": 1}, "target": {"gens": 1}, "matrix": [["q"]]}}"#;
        assert!(matches!(expr_from_json(&parse_json(bad_entry).unwrap()),
            Err(Error::Schema { path, .. }) if path == "$.expr.matrix[0][0]"));
        let bad_shape = r#"{"version": 1, "kind": "functor", "base": "Z",
            "expr": {"node": "KernelPair", "source": {"gens": 2}, "target": {"gens": 1}, "matrix": [[2]]}}"#;
        assert!(matches!(expr_from_json(&parse_json(bad_shape).unwrap()),
            Err(Error::Schema { path, .. }) if path == "$.expr.matrix"));
    }

    #[test]
    fn version_checks() {
        let (b, e) = ker2();
        let mut doc = expr_to_json(&b, &e);
        doc["version"] = json!(2);
        let err = expr_from_json(&doc).unwrap_err();
        assert!(matches!(&err, Error::Schema { path, msg } if path == "$.version" && msg.contains("upgrade")));
        doc["version"] = json!(0);
        assert!(matches!(expr_from_json(&doc), Err(Error::Schema { msg, .. }) if msg.contains("re-save")));
        doc.as_object_mut().unwrap().remove("version");
        assert!(matches!(expr_from_json(&doc), Err(Error::Schema { msg, .. }) if msg.contains("add \"version\"")));
        let c = complex_to_json(&b, &[], 0);
        assert!(matches!(expr_from_json(&c), Err(Error::Schema { path, .. }) if path == "$.kind"));
    }

    #[test]
    fn complex_round_trip() {
        let z = BaseRing::Integers;
        let one = FPModule::free(&z, 1);
        let two = FPModule::free(&z, 2);
        let d0 = ModuleMap::new(&one, &two, int_mat(&z, &[&[2], &[3]], 1)).unwrap();
        let d1 = ModuleMap::new(&two, &one, int_mat(&z, &[&[3, -2]], 2)).unwrap();
        let doc = complex_to_json(&z, &[d0.clone(), d1.clone()], 1);
        let (b, maps, deg) = complex_from_json(&doc).unwrap();
        assert_eq!((b, maps, deg), (z, vec![d0, d1], 1));
    }

    #[test]
    fn schemas_track_the_format_version() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/v");
        let common: Value = serde_json::from_str(&std::fs::read_to_string(format!("{dir}{FORMAT_VERSION}/common.schema.json")).unwrap()).unwrap();
        assert_eq!(common["$defs"]["version"]["const"], json!(FORMAT_VERSION));
        let functor: Value = serde_json::from_str(&std::fs::read_to_string(format!("{dir}{FORMAT_VERSION}/functor.schema.json")).unwrap()).unwrap();
        let kinds: Vec<String> = functor["$defs"]["node"]["oneOf"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|b| {
                let n = &b["properties"]["node"];
                match n.get("const") {
                    Some(c) => vec![c.as_str().unwrap().to_string()],
                    None => n["enum"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect(),
                }
            })
            .collect();
        let mut want: Vec<String> = NODE_KINDS.iter().map(|s| s.to_string()).collect();
        let mut got = kinds;
        want.sort();
        got.sort();
        assert_eq!(got, want);
    }
}
