//! WebAssembly bindings for the demo page in `www/`.
//!
//! The exported functions take and return JSON or SVG text. The logic lives in
//! plain functions so it can be tested without a browser.

use num_bigint::BigInt;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use kmfan::abelian::FgaGroup;
use kmfan::cli::{draw_svg, ints, parse_fan, serialize_fan};
use kmfan::gsfan::{is_gs_representable, rigidified_unfold};
use kmfan::kmfan::{coarse_fan, dilate, fundamental_group, rigidify, roots, strata, validate, KmFan};

fn load(doc: &str) -> Result<KmFan, String> {
    let fan = parse_fan(doc).map_err(|e| e.to_string())?;
    if let Some(v) = validate(&fan).first() {
        return Err(format!("invalid fan: {v}"));
    }
    Ok(fan)
}

fn group(g: &FgaGroup) -> Value {
    json!({"free_rank": g.free_rank(), "torsion": ints(g.torsion_invariants())})
}

pub fn draw(doc: &str, window: u32) -> Result<String, String> {
    draw_svg(&load(doc)?, window).map_err(|e| e.to_string())
}

pub fn summary(doc: &str) -> Result<String, String> {
    let f = load(doc)?;
    let isotropy: Vec<Value> = strata(&f).iter().map(|s| json!(ints(s.isotropy.torsion_invariants()))).collect();
    let gs = if f.group().is_lattice() { json!(is_gs_representable(&f).map_err(|e| e.to_string())?) } else { Value::Null };
    let v = json!({
        "group": group(f.group()),
        "cones": f.len(),
        "classical": f.is_classical(),
        "smooth": f.is_smooth(),
        "pi1": group(&fundamental_group(&f)),
        "isotropy": isotropy,
        "gs_representable": gs,
    });
    Ok(serde_json::to_string_pretty(&v).expect("values serialize"))
}

/// `op` is one of `coarse`, `rigidify`, `dilate`, `roots` and `unfold-rig`;
/// `arg` holds the comma separated integers that `dilate` and `roots` need.
pub fn apply(doc: &str, op: &str, arg: &str) -> Result<String, String> {
    let f = load(doc)?;
    let nums = || -> Result<Vec<BigInt>, String> {
        arg.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| format!("bad integer {s:?}")))
            .collect()
    };
    let out = match op {
        "coarse" => coarse_fan(&f).fan,
        "rigidify" => rigidify(&f).fan,
        "dilate" => {
            let a = nums()?;
            let [a] = a.as_slice() else {
                return Err("dilate needs one integer".into());
            };
            dilate(&f, a).map_err(|e| e.to_string())?.0
        }
        "roots" => roots(&f, &nums()?).map_err(|e| e.to_string())?.0,
        "unfold-rig" => rigidified_unfold(&f).0,
        _ => return Err(format!("unknown operation {op:?}")),
    };
    Ok(serialize_fan(&out))
}

#[wasm_bindgen]
pub fn draw_fan(doc: &str, window: u32) -> Result<String, JsValue> {
    draw(doc, window).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn invariants(doc: &str) -> Result<String, JsValue> {
    summary(doc).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn transform(doc: &str, op: &str, arg: &str) -> Result<String, JsValue> {
    apply(doc, op, arg).map_err(|e| JsValue::from_str(&e))
}
