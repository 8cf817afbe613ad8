//! Browser bindings for the `smooth-fano` crate.
//!
//! Each exported function takes and returns plain strings so the page can
//! stay framework-free. The `*_json` functions hold the logic and are what
//! the native tests exercise; the `#[wasm_bindgen]` wrappers only convert
//! errors into JavaScript exceptions.

use serde_json::{json, Value};
use smooth_fano::catalog::{self, Record};
use smooth_fano::{moves, primitive, LatticePolytope, Relation};
use wasm_bindgen::prelude::*;

/// Largest box the page may request for addition searches.
pub const MAX_BOX: i64 = 6;

fn parse_one(text: &str) -> Result<LatticePolytope, String> {
    let mut records: Vec<Record> = catalog::parse_records(text).map_err(|e| e.to_string())?;
    match records.len() {
        1 => Ok(records.remove(0).polytope),
        0 => Err("no polytope in input".into()),
        k => Err(format!("expected one polytope, found {k}")),
    }
}

fn arg(args: &[usize], i: usize, name: &str) -> Result<usize, String> {
    args.get(i).copied().ok_or_else(|| format!("`{name}` needs {} parameter(s)", i + 1))
}

/// Catalog text of a named construction: `T n`, `V n`, `Vt n`, `pic3 a b`,
/// `cor45 n rho` or `remark7d`.
pub fn construct_text(name: &str, params: &str) -> Result<String, String> {
    let args = params
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| format!("not a parameter: `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let p = match name {
        "T" => catalog::make_t(arg(&args, 0, name)?),
        "V" => catalog::make_v(arg(&args, 0, name)?),
        "Vt" => catalog::make_v_tilde(arg(&args, 0, name)?),
        "pic3" => catalog::make_isolated_pic3(arg(&args, 0, name)?, arg(&args, 1, name)?),
        "cor45" => catalog::isolated_params(arg(&args, 0, name)?, arg(&args, 1, name)?)
            .and_then(|params| catalog::make_family(&params)),
        "remark7d" => catalog::make_remark_example_7d(),
        _ => return Err(format!("unknown construction `{name}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok(catalog::format_record(&p, None))
}

/// Verdicts, primitive relations and pattern matches for one polytope.
pub fn analyze_json(text: &str) -> Result<String, String> {
    let p = parse_one(text)?;
    let mut doc = json!({
        "dim": p.dim(),
        "vertices": p.num_vertices(),
        "reflexive": p.is_reflexive(),
        "simplicial": p.is_simplicial(),
        "smooth_fano": p.is_smooth_fano(),
        "pseudo_symmetric": p.is_pseudo_symmetric(),
    });
    if p.is_smooth_fano() {
        let family = primitive::match_family_pattern(&p).map_err(|e| e.to_string())?;
        let roles = family.as_ref().map(|f| f.roles.clone());
        let names = primitive::vertex_names(p.num_vertices(), roles.as_deref());
        let pcs = primitive::primitive_collections(&p).map_err(|e| e.to_string())?;
        let relations: Vec<Value> = pcs
            .iter()
            .map(|pc| json!({ "text": primitive::format_relation(pc, &names), "degree": pc.degree }))
            .collect();
        doc["relations"] = json!(relations);
        doc["family"] = json!(family.map(|f| f.params.to_string()));
        let isolated = primitive::match_isolated_pattern(&p).map_err(|e| e.to_string())?;
        doc["isolated_pattern"] = json!(isolated.map(|(a, b)| [a, b]));
    }
    Ok(doc.to_string())
}

/// F-moves, or I-moves with additions searched in `[-bound, bound]^n`.
pub fn moves_json(text: &str, relation: &str, bound: i64) -> Result<String, String> {
    let p = parse_one(text)?;
    if !p.is_smooth_fano() {
        return Err("not a smooth Fano polytope".into());
    }
    if !(0..=MAX_BOX).contains(&bound) {
        return Err(format!("box must be between 0 and {MAX_BOX}"));
    }
    let relation: Relation = relation.parse()?;
    let found = match relation {
        Relation::F => moves::f_neighbors(&p),
        Relation::I => moves::i_removal_neighbors(&p).and_then(|mut r| {
            r.extend(moves::i_addition_search(&p, bound)?);
            Ok(r)
        }),
    }
    .map_err(|e| e.to_string())?;
    let items = found
        .iter()
        .map(|(q, record)| {
            Ok(json!({
                "move": record.to_string(),
                "vertices": q.num_vertices(),
                "result": catalog::format_record(q, None),
                "canonical": q.canonical_form().map_err(|e| e.to_string())?.to_string(),
            }))
        })
        .collect::<Result<Vec<Value>, String>>()?;
    Ok(Value::Array(items).to_string())
}

#[wasm_bindgen]
pub fn construct(name: &str, params: &str) -> Result<String, JsValue> {
    construct_text(name, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(text: &str) -> Result<String, JsValue> {
    analyze_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn list_moves(text: &str, relation: &str, bound: i64) -> Result<String, JsValue> {
    moves_json(text, relation, bound).map_err(|e| JsValue::from_str(&e))
}
