use std::path::{Path, PathBuf};

use latk3::cyclo::{self, DetStatus};
use latk3::exactmat::IntMatrix;
use latk3::finquad;
use latk3::glue;
use latk3::lattice::parse::int_value;
use latk3::lattice::{parse_lattice_expr_with, read_gram_file, IntegralLattice};
use latk3::lefschetz::{self, FixedPointCaps, TraceData};
use latk3::vinberg::{self, VinbergOptions};
use latk3::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Discriminant groups larger than this are not enumerated.
const GROUP_BOUND: u64 = 100_000;

fn fixtures_dir() -> PathBuf {
    if let Some(d) = std::env::var_os("LATK3_FIXTURES") {
        return PathBuf::from(d);
    }
    if Path::new("fixtures").is_dir() {
        return PathBuf::from("fixtures");
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// `@fixtures/x.json` is looked up in the fixtures directory, every other
/// path relative to the working directory.
pub fn resolve(path: &str) -> PathBuf {
    match path.strip_prefix("fixtures/") {
        Some(rest) => fixtures_dir().join(rest),
        None => PathBuf::from(path),
    }
}

pub fn parse(expr: &str) -> Result<IntegralLattice> {
    parse_lattice_expr_with(expr, &mut |p| read_gram_file(&resolve(p)))
}

fn payload(command: &str, body: Value, warnings: Vec<String>) -> Value {
    let mut m = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    m.insert("command".into(), command.into());
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("warnings".into(), warnings.into());
    Value::Object(m)
}

fn big(x: &BigInt) -> Value {
    int_value(x)
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(big).collect())).collect())
}

fn lattice_summary(l: &IntegralLattice) -> Value {
    let (p, q) = l.signature();
    json!({
        "rank": l.rank(),
        "signature": [p, q],
        "det": big(&l.det()),
        "even": l.is_even(),
        "gram": matrix(l.gram()),
    })
}

pub fn lattice_info(expr: &str) -> Result<Value> {
    let l = parse(expr)?;
    let mut body = lattice_summary(&l);
    let d = l.disc_group();
    body["disc_invariants"] = Value::Array(d.invariants().iter().map(big).collect());
    let mut warnings = Vec::new();
    if l.is_even() {
        match finquad::disc_form(&l) {
            Ok(f) => {
                let vals: Vec<Value> = f
                    .value_matrix()
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                    .collect();
                body["disc_form"] = json!({ "orders": f.orders(), "values": vals });
            }
            Err(e) => warnings.push(format!("disc form not computed: {e}")),
        }
    } else {
        warnings.push("odd lattice: no discriminant quadratic form".into());
    }
    Ok(payload("lattice-info", body, warnings))
}

pub fn glue(a: &str, b: &str, order: u64, build: Option<usize>) -> Result<Value> {
    let m = parse(a)?;
    let n = parse(b)?;
    let maps = glue::enumerate_glue_maps(&m, &n, order, GROUP_BOUND)?;
    let list: Vec<Value> = maps
        .iter()
        .map(|g| json!({ "source": g.source, "source_orders": g.source_orders, "target": g.target }))
        .collect();
    let mut body = json!({ "order": order, "count": maps.len(), "glues": list });
    if let Some(i) = build {
        let g = maps.get(i).ok_or_else(|| Error::Invalid(format!("no glue with index {i}; found {}", maps.len())))?;
        let ext = glue::build_overlattice(&m, &n, g)?;
        let mut o = lattice_summary(&ext.overlattice);
        o["index"] = big(&ext.index());
        body["overlattice"] = o;
    }
    Ok(payload("glue", body, Vec::new()))
}

fn cn_summary(l: &cyclo::CnLattice) -> Value {
    let mut v = lattice_summary(l.lattice());
    v["x_action"] = matrix(&l.x_action());
    v["modulus"] = Value::String(l.modulus().to_string_var("x"));
    v
}

pub fn cyclo_principal(n: u64) -> Result<Value> {
    let l = cyclo::principal_cn(n)?;
    let mut body = cn_summary(&l);
    body["n"] = n.into();
    Ok(payload("cyclo principal", body, Vec::new()))
}

pub fn cyclo_twist(n: u64, a: &str) -> Result<Value> {
    let l0 = cyclo::principal_cn(n)?;
    let e = cyclo::parse_field_elem(a, l0.modulus())?;
    let t = cyclo::twist_lattice(&l0, &e)?;
    let mut body = cn_summary(&t);
    body["n"] = n.into();
    body["twist"] = Value::String(e.to_string());
    let mut warnings = Vec::new();
    match cyclo::sign_invariant(&t) {
        Ok(s) => body["signs"] = json!(s.signs),
        Err(e) => warnings.push(format!("sign invariant not computed: {e}")),
    }
    Ok(payload("cyclo twist", body, warnings))
}

fn status_name(s: DetStatus) -> &'static str {
    match s {
        DetStatus::Admissible => "admissible",
        DetStatus::NoResultant => "no-resultant",
        DetStatus::NoSignature => "no-signature",
        DetStatus::NotEven => "not-even",
    }
}

pub fn cyclo_possible_dets(n: u64) -> Result<Value> {
    let cands = cyclo::determinant_candidates(n)?;
    let mut dets: Vec<BigInt> =
        cands.iter().filter(|c| c.status == DetStatus::Admissible).map(|c| c.det.clone()).collect();
    dets.sort();
    dets.dedup();
    let list: Vec<Value> = cands
        .iter()
        .map(|c| json!({ "det": big(&c.det), "exponents": c.exponents, "status": status_name(c.status) }))
        .collect();
    let body = json!({ "n": n, "determinants": dets.iter().map(big).collect::<Vec<_>>(), "candidates": list });
    Ok(payload("cyclo possible-dets", body, Vec::new()))
}

pub fn cyclo_resultant(n: u64, m: u64) -> Result<Value> {
    let r = cyclo::cyclo_resultant(n, m)?;
    Ok(payload("cyclo resultant", json!({ "n": n, "m": m, "resultant": big(&r) }), Vec::new()))
}

pub fn vinberg(
    expr: &str,
    max_height: Option<u64>,
    norms: Option<Vec<u64>>,
    dot: Option<&Path>,
    oq_bound: u64,
) -> Result<Value> {
    let l = parse(expr)?;
    let opts = VinbergOptions {
        v0: None,
        max_height: max_height.map(|h| num_rational::BigRational::from_integer(h.into())),
        allowed_norms: norms,
    };
    let c = vinberg::vinberg_fundamental_roots(&l, &opts)?;
    let mut warnings = Vec::new();
    if !c.saturated {
        warnings.push(format!("UNVERIFIED-COMPLETE: search stopped at height {}", c.searched_height));
    }
    if let Some(path) = dot {
        std::fs::write(path, c.to_dot()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    let roots: Vec<Value> = c.roots.iter().map(|r| Value::Array(r.iter().map(big).collect())).collect();
    let mut body = json!({
        "v0": c.v0.iter().map(big).collect::<Vec<_>>(),
        "roots": roots,
        "heights": c.heights.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        "root_gram": matrix(&c.gram),
        "complete": c.saturated,
    });
    let g = vinberg::chamber_symmetries(&c)?;
    body["group_order"] = big(&g.order);
    match vinberg::chamber_to_disc(&g, Some(oq_bound)) {
        Ok(d) => {
            body["disc"] = json!({
                "group_order": big(&d.group_order),
                "image_order": d.image_order,
                "kernel_order": big(&d.kernel_order),
                "orthogonal_order": d.orthogonal_order,
                "cokernel_order": d.cokernel_order,
                "minus_id_in_image": d.minus_id_in_image,
            });
            if d.orthogonal_order.is_none() {
                warnings.push("undecided: O(q) not computed within the bound".into());
            }
        }
        Err(e) => warnings.push(format!("undecided: {e}")),
    }
    Ok(payload("vinberg", body, warnings))
}

pub fn lefschetz(n: u64, traces: Option<&[i64]>, caps: &FixedPointCaps) -> Result<Value> {
    let trace = match traces {
        Some([t, ns]) => Some(TraceData { trace_t: *t, trace_ns: *ns }),
        Some(_) => return Err(Error::Invalid("--traces takes two values".into())),
        None => None,
    };
    let sols = lefschetz::solve_fixed_data(n, trace.as_ref(), caps)?;
    let list: Vec<Value> = sols
        .iter()
        .map(|d| {
            let pts: Vec<Value> =
                d.points.iter().map(|&(i, j, m)| json!({ "i": i, "j": j, "count": m })).collect();
            json!({ "points": pts, "genera": d.genera, "euler": lefschetz::euler_of_fixed(d) })
        })
        .collect();
    let mut body = json!({
        "n": n,
        "caps": { "max_points": caps.max_points, "max_curves": caps.max_curves, "max_genus": caps.max_genus, "conj": caps.conj },
        "count": sols.len(),
        "solutions": list,
    });
    if let Some(t) = trace {
        body["traces"] = json!([t.trace_t, t.trace_ns]);
        body["euler"] = lefschetz::topological_euler(&t).into();
    }
    Ok(payload("lefschetz", body, Vec::new()))
}
