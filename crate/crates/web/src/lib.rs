//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page only ever parses one shape.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use mub_forge::circuits::{decompose_injection, injection_unitary, unitary_of};
use mub_forge::entangle::{classify_basis, linspace, purity_sweep};
use mub_forge::presets::named_family;
use mub_forge::{ComplexMatrix, Tolerance};

fn tol() -> Tolerance {
    Tolerance::CONSTRUCTION
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn phases(m: &ComplexMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| z.arg()).collect())
        .collect()
}

/// Purities of the three single-qubit reductions along the quintuplet
/// family with all parameters equal, from 0 to `upper`.
#[wasm_bindgen]
pub fn purity_curve(points: usize, upper: f64) -> String {
    finish((|| {
        let f = named_family("dim8-quintuplet", tol()).map_err(|e| e.to_string())?;
        let samples = purity_sweep(&f, 1, &linspace(0.0, upper, points.max(2)), tol()).map_err(|e| e.to_string())?;
        let rows: Vec<Value> = samples
            .iter()
            .map(|s| json!({ "alpha": s.alpha, "a": s.purity_a[0], "b": s.purity_b[0], "c": s.purity_c[0] }))
            .collect();
        Ok(json!({ "samples": rows }))
    })())
}

/// Evaluates a named family; `params` shorter than the slot count is padded
/// with zeros. Reports the worst unbiasedness error, the phase pattern of
/// the first parametrized basis and its entanglement class.
#[wasm_bindgen]
pub fn evaluate_family(name: &str, params: &[f64]) -> String {
    finish((|| {
        let f = named_family(name, tol()).map_err(|e| e.to_string())?;
        let mut p = params.to_vec();
        p.resize(f.num_params(), 0.0);
        let set = f.evaluate(&p).map_err(|e| e.to_string())?;
        let dev = set.deviation();
        let b = f.slots().first().map_or(1, |s| s.basis);
        let class = if set.dim() == 8 {
            classify_basis(set.basis(b), tol(), Tolerance::SPECTRAL)
                .map(|c| c.to_string())
                .unwrap_or_default()
        } else {
            String::new()
        };
        Ok(json!({
            "labels": set.labels(),
            "params": f.num_params(),
            "worst": dev.worst,
            "unbiased": dev.worst <= tol().eps(),
            "basis": set.labels()[b],
            "phases": phases(set.basis(b)),
            "class": class,
        }))
    })())
}

/// Gate sequence for the diagonal phase on `rows` (1-indexed, comma
/// separated) of a three-qubit register.
#[wasm_bindgen]
pub fn injection_circuit(rows: &str, alpha: f64) -> String {
    finish((|| {
        let rows: Vec<usize> = rows
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let c = decompose_injection(&rows, alpha, 3).map_err(|e| e.to_string())?;
        let u = unitary_of(&c, tol()).map_err(|e| e.to_string())?;
        let d = injection_unitary(&rows, alpha, 8).map_err(|e| e.to_string())?;
        Ok(json!({
            "gates": c.to_records(),
            "text": c.gates.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "resim": u.max_abs_diff(&d),
        }))
    })())
}
