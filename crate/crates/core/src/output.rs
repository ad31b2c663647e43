//! Machine-readable rendering of elements.

use serde_json::{json, Value};

use crate::algebra::Element;

/// `{"context": {...}, "result": [{"monomial": [[m, a, b], ...], "coeff": [[deg, "n/d"], ...]}]}`
///
/// Terms follow the text rendering order. `trunc` is the configured
/// truncation order reported alongside the context.
pub fn element_json(e: &Element, trunc: u32) -> Value {
    let ctx = e.ctx();
    let result: Vec<Value> = e
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| {
            let monomial: Vec<Value> = m.pairs().map(|(i, a, b)| json!([i, a, b])).collect();
            let coeff: Vec<Value> = c
                .terms()
                .map(|(deg, r)| json!([deg, r.to_fraction_string()]))
                .collect();
            json!({ "monomial": monomial, "coeff": coeff })
        })
        .collect();
    json!({
        "context": {
            "n": ctx.n_pairs(),
            "mode": ctx.mode().as_str(),
            "trunc": ctx.truncation().unwrap_or(trunc),
        },
        "result": result,
    })
}
