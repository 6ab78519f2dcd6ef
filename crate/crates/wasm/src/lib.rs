//! Browser bindings. Each export returns a JSON string; the `*_json`
//! functions hold the logic so they can be tested off the browser.

use serde_json::{json, Value};
use treebound::harness::{evaluate_instance, GraphFamily, TreeSpec};
use treebound::measure::{g_table_exact, g_table_monte_carlo, GTable};
use treebound::numeric::{ratio_to_f64, ratio_to_string};
use treebound::{GoodLabeling, Graph, MeasureKind, Tree, WorkCap};
use wasm_bindgen::prelude::*;

/// Keeps a single call interactive in the page.
const DEMO_CAP: WorkCap = WorkCap(20_000_000);
const MAX_SAMPLES: u64 = 2_000_000;

fn instance(family: &str, tree: &str, seed: u64) -> Result<(Graph, Tree), String> {
    let fam: GraphFamily = family.trim().parse().map_err(|e: treebound::Error| e.to_string())?;
    let graph = fam.build(seed).map_err(|e| e.to_string())?;
    let spec = TreeSpec::preset(tree.trim())
        .ok_or_else(|| format!("tree must be path:T or star:T, got {tree:?}"))?
        .map_err(|e| e.to_string())?;
    let tree = spec.build().map_err(|e| e.to_string())?;
    Ok((graph, tree))
}

fn floats(tab: &GTable) -> Vec<Vec<f64>> {
    tab.rows.iter().map(|r| r.iter().map(ratio_to_f64).collect()).collect()
}

fn to_string(v: Value) -> Result<String, String> {
    serde_json::to_string(&v).map_err(|e| e.to_string())
}

/// Counts, every bound and its comparison for one instance.
pub fn explore_json(family: &str, tree: &str, seed: u64) -> Result<String, String> {
    let (graph, t) = instance(family, tree, seed)?;
    let row = evaluate_instance(family.trim(), &graph, tree.trim(), &t, None, DEMO_CAP, false);
    to_string(json!({ "edgeList": graph.edges().collect::<Vec<_>>(), "row": row }))
}

/// Exact g-table under `measure` (`p`, `P` or `Pprime`) beside `d(v)/(nd)`.
pub fn gtable_json(family: &str, tree: &str, measure: &str, seed: u64) -> Result<String, String> {
    let kind = MeasureKind::parse(measure).ok_or_else(|| format!("unknown measure {measure:?}"))?;
    let (graph, t) = instance(family, tree, seed)?;
    let l = GoodLabeling::breadth_first(&t, None).map_err(|e| e.to_string())?;
    let tab = g_table_exact(&graph, &l, kind, DEMO_CAP).map_err(|e| e.to_string())?;
    let share: Vec<f64> = (0..graph.n()).map(|v| ratio_to_f64(&GTable::degree_share(&graph, v))).collect();
    let slack = tab.min_slack(&graph);
    to_string(json!({
        "labeling": l.order(),
        "measure": kind.name(),
        "values": floats(&tab),
        "exact": tab,
        "degreeShare": share,
        "minSlack": ratio_to_string(&slack),
        "minSlackValue": ratio_to_f64(&slack),
    }))
}

/// Monte Carlo position frequencies of the random process next to the
/// exact table of `P`.
pub fn histogram_json(family: &str, tree: &str, samples: u64, seed: u64) -> Result<String, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be in 1..={MAX_SAMPLES}"));
    }
    let (graph, t) = instance(family, tree, seed)?;
    let l = GoodLabeling::breadth_first(&t, None).map_err(|e| e.to_string())?;
    let empirical = floats(&g_table_monte_carlo(&graph, &l, samples, seed).map_err(|e| e.to_string())?);
    let exact = floats(&g_table_exact(&graph, &l, MeasureKind::P, DEMO_CAP).map_err(|e| e.to_string())?);
    let max_abs_error = empirical
        .iter()
        .flatten()
        .zip(exact.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    to_string(json!({
        "labeling": l.order(),
        "samples": samples,
        "empirical": empirical,
        "exact": exact,
        "maxAbsError": max_abs_error,
    }))
}

#[wasm_bindgen]
pub fn explore(family: &str, tree: &str, seed: u32) -> Result<String, JsError> {
    explore_json(family, tree, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gtable(family: &str, tree: &str, measure: &str, seed: u32) -> Result<String, JsError> {
    gtable_json(family, tree, measure, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn histogram(family: &str, tree: &str, samples: u32, seed: u32) -> Result<String, JsError> {
    histogram_json(family, tree, samples.into(), seed.into()).map_err(|e| JsError::new(&e))
}
