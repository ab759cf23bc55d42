//! wasm-bindgen entry points for the static demo page in `www/`. Every
//! function returns a JSON string; failures come back as a JS string
//! error.

use serde_json::json;
use tverberg_core::certify::{certify_planar_witness, check_claim_negative};
use tverberg_core::constructions::{choose_params, generate_scalloped};
use tverberg_core::separating::{
    build_auxiliary_graph, check_fac_bound, extract_incidences, improve_separating_system, naive_separating_system,
    DisjointFamily, DEFAULT_MAX_ROUNDS,
};
use tverberg_core::svg::{render_grid, render_system};
use tverberg_core::turan::hypercube::max_hypercube_free;
use wasm_bindgen::prelude::*;

/// Largest inputs the page accepts; beyond these a browser tab stalls.
const MAX_GRID_S: usize = 12;
const MAX_SETS: usize = 10;
const NODE_CAP: u64 = 2_000_000;

fn js<E: std::fmt::Display>(e: E) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn check(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

pub fn grid_report(s: usize, refined: bool, partition: Option<u64>) -> Result<String, String> {
    check((2..=MAX_GRID_S).contains(&s), &format!("s must be between 2 and {MAX_GRID_S}"))?;
    let params = choose_params(s, 128).map_err(|e| e.to_string())?;
    let grid = generate_scalloped(&if refined { params.refined() } else { params }).map_err(|e| e.to_string())?;
    if let Some(mask) = partition {
        check(grid.len() >= 64 || mask >> grid.len() == 0, "partition mask has bits beyond the grid")?;
    }
    let negative = check_claim_negative(&grid);
    let maximal = certify_planar_witness(&grid).map_err(|e| e.to_string())?;
    let svg = render_grid(&grid, partition).map_err(|e| e.to_string())?;
    Ok(json!({
        "points": grid.len(),
        "M": tverberg_core::exact::scalar::to_string(&grid.params.m),
        "negative": { "passed": negative.passed(), "checked": negative.checked_count },
        "maximal": { "passed": maximal.passed(), "checked": maximal.checked_count },
        "svg": svg,
    })
    .to_string())
}

pub fn separation_report(a: usize, seed: u64) -> Result<String, String> {
    check((3..=MAX_SETS).contains(&a), &format!("a must be between 3 and {MAX_SETS}"))?;
    let family = DisjointFamily::random(a, seed).map_err(|e| e.to_string())?;
    let naive = naive_separating_system(&family).map_err(|e| e.to_string())?;
    let imp = improve_separating_system(&naive, &family, DEFAULT_MAX_ROUNDS).map_err(|e| e.to_string())?;
    let incidences = extract_incidences(&imp.system);
    let graph = build_auxiliary_graph(&imp.system, &incidences).map_err(|e| e.to_string())?;
    graph.check_plane().map_err(|e| e.to_string())?;
    let fac = check_fac_bound(&imp.system).map_err(|e| e.to_string())?;
    let svg = render_system(&imp.system, &family, &incidences, Some(&graph)).map_err(|e| e.to_string())?;
    Ok(json!({
        "naive_fac": naive.fac,
        "fac": fac.fac,
        "bound": fac.bound,
        "incidences": fac.incidences,
        "type1": fac.type1,
        "type2": fac.type2,
        "supported": imp.supported,
        "moves": imp.moves.len(),
        "edges": graph.edges.len(),
        "svg": svg,
    })
    .to_string())
}

pub fn hypercube_report(k: usize, m: usize, s: usize) -> Result<String, String> {
    let f = max_hypercube_free(k, m, s, NODE_CAP).map_err(|e| e.to_string())?;
    Ok(json!({ "value": f.value, "nodes": f.nodes, "witness": f.witness.members }).to_string())
}

/// Scalloped grid with both certificates and an SVG figure. A negative
/// `partition` means no container overlay.
#[wasm_bindgen]
pub fn scalloped_grid(s: usize, refined: bool, partition: f64) -> Result<String, JsValue> {
    let mask = (partition >= 0.0).then_some(partition as u64);
    grid_report(s, refined, mask).map_err(js)
}

/// Random disjoint family, improved separating system and its drawing.
#[wasm_bindgen]
pub fn separating_system(a: usize, seed: u32) -> Result<String, JsValue> {
    separation_report(a, u64::from(seed)).map_err(js)
}

/// Exact `F(k, m, s)` with a witness set.
#[wasm_bindgen]
pub fn hypercube_free(k: usize, m: usize, s: usize) -> Result<String, JsValue> {
    hypercube_report(k, m, s).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_report_certifies() {
        let v: serde_json::Value = serde_json::from_str(&grid_report(3, false, Some(5)).unwrap()).unwrap();
        assert_eq!(v["points"], 9);
        assert_eq!(v["maximal"]["passed"], true);
        assert_eq!(v["maximal"]["checked"], 18);
        assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
        assert!(grid_report(1, false, None).is_err());
        assert!(grid_report(2, false, Some(1 << 4)).is_err());
    }

    #[test]
    fn separation_report_is_planar() {
        let v: serde_json::Value = serde_json::from_str(&separation_report(4, 2).unwrap()).unwrap();
        assert!(v["edges"].as_u64().unwrap() <= 6);
        assert!(v["fac"].as_u64().unwrap() <= v["naive_fac"].as_u64().unwrap());
        assert!(separation_report(2, 0).is_err());
    }

    #[test]
    fn hypercube_report_values() {
        let v: serde_json::Value = serde_json::from_str(&hypercube_report(2, 2, 3).unwrap()).unwrap();
        assert_eq!(v["value"], 6);
        assert_eq!(v["witness"].as_array().unwrap().len(), 6);
    }
}
