//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Every export takes rationals as strings (`"1/3"`, `"-2"`) and returns a
//! JSON document. The `*_json` functions hold the logic so they can be
//! exercised natively; the exported wrappers only convert errors.

use lambda_griffiths::exact::{format_rational, parse_rational};
use lambda_griffiths::griffiths::{
    g_biorth_gram, g_gram_with_weight, g_tilde_table, omega, GRelationId, GriffithsTable, ParamSet,
};
use lambda_griffiths::{Matrix, TriangleGrid};
use num_traits::Zero;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Larger triangles stay correct but get slow in a browser tab.
pub const MAX_N: usize = 10;

fn params(p1: &str, p2: &str, p3: &str, lambda: &str, n: usize) -> Result<ParamSet, String> {
    if n > MAX_N {
        return Err(format!("N = {n} is above the demo limit of {MAX_N}"));
    }
    let parse = |s: &str| parse_rational(s.trim()).map_err(|e| e.to_string());
    ParamSet::new(parse(p1)?, parse(p2)?, parse(p3)?, parse(lambda)?, n).map_err(|e| e.to_string())
}

fn labels(n: usize) -> Value {
    let pts: Vec<[usize; 2]> = TriangleGrid::new(n).iter().map(|(a, b)| [a, b]).collect();
    json!(pts)
}

fn exact_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(format_rational).collect())
        .collect()
}

fn to_text(v: Value) -> String {
    v.to_string()
}

/// Table of `G^λ` (or its tilde normalization), degrees as rows.
pub fn griffiths_table_json(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
    tilde: bool,
) -> Result<String, String> {
    let ps = params(p1, p2, p3, lambda, n)?;
    let m = if tilde {
        g_tilde_table(&ps)
    } else {
        GriffithsTable::new(&ps).map(|t| t.values().clone())
    }
    .map_err(|e| e.to_string())?;
    Ok(to_text(json!({
        "points": labels(n),
        "exact": exact_rows(&m),
        "approx": m.to_f64(),
    })))
}

/// Pairing of `G^λ` with `G^{μ/λ}`. `weight` is `"corrected"` for the
/// weight that diagonalizes the pairing, or `"omega"` for the bare
/// `Ω_{x,y}(p2, p3)`, which does not.
pub fn biorth_gram_json(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
    weight: &str,
) -> Result<String, String> {
    let ps = params(p1, p2, p3, lambda, n)?;
    let partner = ps.partner().map_err(|e| e.to_string())?;
    let gram = match weight {
        "corrected" => g_biorth_gram(&ps),
        "omega" => g_gram_with_weight(
            |x, y| omega(x, y, &ps.p2, &ps.p3, n).expect("validated parameters"),
            &ps,
            &partner.lambda,
        ),
        other => return Err(format!("unknown weight {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let off = gram
        .first_off_diagonal()
        .map(|(r, c, q)| json!({ "row": r, "col": c, "value": format_rational(q) }));
    Ok(to_text(json!({
        "points": labels(n),
        "partner_lambda": format_rational(&partner.lambda),
        "diagonal": gram.is_diagonal(),
        "first_off_diagonal": off,
        "exact": exact_rows(&gram),
        "approx": gram.to_f64(),
    })))
}

/// The four relations, each checked at every point of both triangles.
pub fn relation_check_json(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
) -> Result<String, String> {
    let ps = params(p1, p2, p3, lambda, n)?;
    let table = GriffithsTable::new(&ps).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for rel in GRelationId::ALL {
        let res = table.relation_residuals(rel).map_err(|e| e.to_string())?;
        let checked = res.rows() * res.cols();
        let nonzero: Vec<Value> = (0..res.rows())
            .flat_map(|r| (0..res.cols()).map(move |c| (r, c)))
            .filter(|&(r, c)| !res[(r, c)].is_zero())
            .take(5)
            .map(|(r, c)| json!({ "row": r, "col": c, "value": format_rational(&res[(r, c)]) }))
            .collect();
        out.push(json!({
            "relation": rel.name(),
            "checked": checked,
            "exact_zero": nonzero.is_empty(),
            "nonzero": nonzero,
        }));
    }
    Ok(to_text(json!({ "N": n, "relations": out })))
}

#[wasm_bindgen]
pub fn griffiths_table(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
    tilde: bool,
) -> Result<String, JsError> {
    griffiths_table_json(p1, p2, p3, lambda, n, tilde).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn biorth_gram(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
    weight: &str,
) -> Result<String, JsError> {
    biorth_gram_json(p1, p2, p3, lambda, n, weight).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn relation_check(
    p1: &str,
    p2: &str,
    p3: &str,
    lambda: &str,
    n: usize,
) -> Result<String, JsError> {
    relation_check_json(p1, p2, p3, lambda, n).map_err(|e| JsError::new(&e))
}
