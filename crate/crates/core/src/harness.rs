//! Suite runner, conjecture scanner, clique sharpness check and the
//! per-instance invariant verifier.
//!
//! Rows are computed in config order and depend only on the config and seed.
//! Per-instance failures are stored in the row's `errors` column; a run never
//! aborts because one instance is too large or violates a hypothesis.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::{compare_count_to_bound, evaluate_bounds, BoundReport, Comparison};
use crate::counting::{
    count_copies, count_homomorphisms, count_homomorphisms_bruteforce, count_walks, max_induced_copy_degree,
    CountResult, WorkCap,
};
use crate::error::{Error, Result};
use crate::generators::{self, DEFAULT_RETRY_CAP};
use crate::graph::Graph;
use crate::measure::{check_identities, g_table_exact, verify_chain, ChainReport, GTable, IdentityReport, MeasureKind};
use crate::numeric::{ratio_to_string, serialize_opt_log, LOG_TOLERANCE};
use crate::tree::{GoodLabeling, Tree};

pub const SCHEMA_VERSION: u32 = 1;

/// Named graph families. The string form is `name:arg,arg,...`.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFamily {
    Cliques { c: usize, q: usize },
    Complete { n: usize },
    CompleteMinusEdge { n: usize },
    Cycle { n: usize },
    Bipartite { a: usize, b: usize },
    Petersen,
    /// `G(n, p)` conditioned on minimum degree; the seed comes from the run.
    Random { n: usize, p: f64, min_degree: usize },
}

impl GraphFamily {
    /// Parses `name` with positional arguments, e.g. `("cliques", ["3", "5"])`.
    pub fn parse(name: &str, args: &[&str]) -> Result<Self> {
        let bad = || Error::Precondition(format!("bad arguments for family {name}: {args:?}"));
        let int = |i: usize| -> Result<usize> { args.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(bad) };
        let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(bad()) };
        let fam = match name {
            "cliques" => {
                arity(2)?;
                GraphFamily::Cliques { c: int(0)?, q: int(1)? }
            }
            "complete" => {
                arity(1)?;
                GraphFamily::Complete { n: int(0)? }
            }
            "complete-minus-edge" => {
                arity(1)?;
                GraphFamily::CompleteMinusEdge { n: int(0)? }
            }
            "cycle" => {
                arity(1)?;
                GraphFamily::Cycle { n: int(0)? }
            }
            "bipartite" => {
                arity(2)?;
                GraphFamily::Bipartite { a: int(0)?, b: int(1)? }
            }
            "petersen" => {
                arity(0)?;
                GraphFamily::Petersen
            }
            "random" => {
                arity(3)?;
                let p = args[1].trim().parse().map_err(|_| bad())?;
                GraphFamily::Random { n: int(0)?, p, min_degree: int(2)? }
            }
            _ => return Err(Error::Precondition(format!("unknown graph family {name:?}"))),
        };
        Ok(fam)
    }

    pub fn build(&self, seed: u64) -> Result<Graph> {
        match *self {
            GraphFamily::Cliques { c, q } => generators::disjoint_cliques(c, q),
            GraphFamily::Complete { n } => generators::complete(n),
            GraphFamily::CompleteMinusEdge { n } => generators::complete(n)?.without_edge(0, 1),
            GraphFamily::Cycle { n } => generators::cycle(n),
            GraphFamily::Bipartite { a, b } => generators::complete_bipartite(a, b),
            GraphFamily::Petersen => Ok(generators::petersen()),
            GraphFamily::Random { n, p, min_degree } => {
                generators::random_min_degree(n, p, min_degree, seed, DEFAULT_RETRY_CAP)
            }
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Cliques { c, q } => write!(f, "cliques:{c},{q}"),
            GraphFamily::Complete { n } => write!(f, "complete:{n}"),
            GraphFamily::CompleteMinusEdge { n } => write!(f, "complete-minus-edge:{n}"),
            GraphFamily::Cycle { n } => write!(f, "cycle:{n}"),
            GraphFamily::Bipartite { a, b } => write!(f, "bipartite:{a},{b}"),
            GraphFamily::Petersen => write!(f, "petersen"),
            GraphFamily::Random { n, p, min_degree } => write!(f, "random:{n},{p},{min_degree}"),
        }
    }
}

impl std::str::FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(',').collect() };
        GraphFamily::parse(name, &args)
    }
}

/// Tree presets (`path:T`, `star:T`) or an explicit tree.
#[derive(Clone, Debug, PartialEq)]
pub enum TreeSpec {
    Path(usize),
    Star(usize),
    Custom { name: String, tree: Tree },
}

impl TreeSpec {
    pub fn build(&self) -> Result<Tree> {
        match self {
            TreeSpec::Path(t) => Tree::path(*t),
            TreeSpec::Star(t) => Tree::star(*t),
            TreeSpec::Custom { tree, .. } => Ok(tree.clone()),
        }
    }

    /// Parses a preset; `None` if `s` is not of the form `path:T` / `star:T`.
    pub fn preset(s: &str) -> Option<Result<Self>> {
        let (kind, t) = s.split_once(':')?;
        let t: usize = match t.parse() {
            Ok(t) if t >= 1 => t,
            _ => return Some(Err(Error::Precondition(format!("bad tree size in {s:?}")))),
        };
        match kind {
            "path" => Some(Ok(TreeSpec::Path(t))),
            "star" => Some(Ok(TreeSpec::Star(t))),
            _ => None,
        }
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Path(t) => write!(f, "path:{t}"),
            TreeSpec::Star(t) => write!(f, "star:{t}"),
            TreeSpec::Custom { name, .. } => f.write_str(name),
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    };
}
string_serde!(GraphFamily);
string_serde!(TreeSpec);

impl<'de> Deserialize<'de> for GraphFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for TreeSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TreeSpec::preset(&s)
            .unwrap_or_else(|| Err(Error::Precondition(format!("unknown tree preset {s:?}"))))
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SuiteConfig {
    pub graphs: Vec<GraphFamily>,
    pub trees: Vec<TreeSpec>,
    pub seed: u64,
    pub work_cap: u64,
    /// `k` for the bounded-induced-degree bound.
    pub k: Option<usize>,
    /// Embed the full g-tables in JSON output.
    pub include_gtables: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            graphs: vec![
                GraphFamily::Complete { n: 4 },
                GraphFamily::Complete { n: 5 },
                GraphFamily::CompleteMinusEdge { n: 5 },
                GraphFamily::Cycle { n: 5 },
                GraphFamily::Bipartite { a: 3, b: 3 },
                GraphFamily::Bipartite { a: 3, b: 4 },
                GraphFamily::Petersen,
                GraphFamily::Cliques { c: 2, q: 4 },
                GraphFamily::Random { n: 7, p: 0.6, min_degree: 3 },
                GraphFamily::Random { n: 8, p: 0.5, min_degree: 3 },
            ],
            trees: vec![TreeSpec::Path(2), TreeSpec::Path(3), TreeSpec::Star(3)],
            seed: 1,
            work_cap: WorkCap::DEFAULT.0,
            k: None,
            include_gtables: false,
        }
    }
}

impl SuiteConfig {
    /// Seed handed to the `index`-th graph family.
    pub fn instance_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundChecks {
    pub thm1: Option<Comparison>,
    pub cor2: Option<Comparison>,
    pub hom_eq1: Option<Comparison>,
    pub p3_eq2: Option<Comparison>,
    pub blakley_roy: Option<Comparison>,
    pub cor3: Option<Comparison>,
    pub falling_factorial: Option<Comparison>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlackColumns {
    /// `min_{i,v} g_i(v) − d(v)/(nd)` under `p`.
    pub p: Option<String>,
    /// Same under `P` (observational only).
    #[serde(rename = "P")]
    pub big_p: Option<String>,
    /// Same under `P'`, zero exactly when the table matches `d(v)/(nd)`.
    pub pprime: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteRow {
    pub graph: String,
    pub tree: String,
    pub n: usize,
    pub edges: usize,
    pub d: String,
    pub min_degree: usize,
    pub t: usize,
    pub count: Option<String>,
    pub hom_count: Option<String>,
    pub walk_count: String,
    pub bounds: Option<BoundReport>,
    pub checks: BoundChecks,
    /// Largest max-degree of a subgraph induced by a copy (only with `k`).
    pub max_induced_degree: Option<usize>,
    pub slack: SlackColumns,
    pub pprime_equality: Option<bool>,
    pub identities: Option<IdentityReport>,
    pub chain: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gtables: Option<Vec<GTable>>,
    pub errors: Vec<String>,
}

fn record<T>(errors: &mut Vec<String>, what: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            None
        }
    }
}

fn is_path(tree: &Tree) -> bool {
    (1..=tree.vertex_count()).all(|x| tree.degree(x) <= 2)
}

/// Computes every suite column for one (graph, tree) pair.
pub fn evaluate_instance(
    graph_name: &str,
    graph: &Graph,
    tree_name: &str,
    tree: &Tree,
    k: Option<usize>,
    cap: WorkCap,
    include_gtables: bool,
) -> SuiteRow {
    let t = tree.t();
    let mut errors = Vec::new();
    let labeling = GoodLabeling::breadth_first(tree, None).expect("every tree has a leaf");
    let count = record(&mut errors, "count", count_copies(graph, tree, cap));
    let hom = record(&mut errors, "hom", count_homomorphisms(graph, tree));
    let walks = count_walks(graph, t);
    let bounds = record(&mut errors, "bounds", evaluate_bounds(graph, t, k));

    let mut checks = BoundChecks::default();
    let mut max_induced_degree = None;
    if let Some(b) = &bounds {
        let cmp = |c: &Option<CountResult>, bound: &crate::bounds::Bound| {
            Some(compare_count_to_bound(c.as_ref()?, bound.log()?))
        };
        checks.thm1 = cmp(&count, &b.thm1);
        checks.cor2 = cmp(&count, &b.cor2);
        checks.hom_eq1 = cmp(&hom, &b.hom_eq1);
        if t == 3 && is_path(tree) {
            checks.p3_eq2 = cmp(&count, &b.p3_eq2);
        }
        checks.blakley_roy = cmp(&Some(walks.clone()), &b.blakley_roy);
        checks.falling_factorial = cmp(&count, &b.falling_factorial);
        if let (Some(k), true) = (k, b.cor3.is_applicable()) {
            max_induced_degree = record(&mut errors, "induced degree", max_induced_copy_degree(graph, tree, cap));
            if max_induced_degree.is_some_and(|m| m <= k) {
                checks.cor3 = cmp(&count, &b.cor3);
            }
        }
    }

    let mut slack = SlackColumns::default();
    let mut tables = Vec::new();
    let mut pprime_equality = None;
    let hypothesis = graph.min_degree() >= t && graph.edge_count() > 0;
    if hypothesis {
        if let Some(tab) = record(&mut errors, "g-table p", g_table_exact(graph, &labeling, MeasureKind::PWeight, cap)) {
            slack.p = Some(ratio_to_string(&tab.min_slack(graph)));
            tables.push(tab);
        }
        if let Some(tab) = record(&mut errors, "g-table P", g_table_exact(graph, &labeling, MeasureKind::P, cap)) {
            slack.big_p = Some(ratio_to_string(&tab.min_slack(graph)));
            tables.push(tab);
        }
    }
    if graph.edge_count() > 0 {
        if let Some(tab) = record(&mut errors, "g-table Pprime", g_table_exact(graph, &labeling, MeasureKind::PPrime, cap)) {
            slack.pprime = Some(ratio_to_string(&tab.min_slack(graph)));
            pprime_equality = Some(tab.equals_degree_share(graph));
            tables.push(tab);
        }
    }
    let identities = hypothesis
        .then(|| record(&mut errors, "identities", check_identities(graph, tree, &labeling, cap)))
        .flatten();
    let chain = hypothesis
        .then(|| record(&mut errors, "chain", verify_chain(graph, tree, &labeling, cap)))
        .flatten();

    SuiteRow {
        graph: graph_name.to_string(),
        tree: tree_name.to_string(),
        n: graph.n(),
        edges: graph.edge_count(),
        d: graph.average_degree().to_string(),
        min_degree: graph.min_degree(),
        t,
        count: count.map(|c| c.value.to_string()),
        hom_count: hom.map(|c| c.value.to_string()),
        walk_count: walks.value.to_string(),
        bounds,
        checks,
        max_induced_degree,
        slack,
        pprime_equality,
        identities,
        chain,
        gtables: include_gtables.then_some(tables),
        errors,
    }
}

pub fn run_suite(config: &SuiteConfig) -> Vec<SuiteRow> {
    let cap = WorkCap(config.work_cap);
    let mut rows = Vec::with_capacity(config.graphs.len() * config.trees.len());
    for (gi, family) in config.graphs.iter().enumerate() {
        let graph = family.build(config.instance_seed(gi));
        for spec in &config.trees {
            let tree = spec.build();
            let row = match (&graph, tree) {
                (Ok(g), Ok(tree)) => evaluate_instance(
                    &family.to_string(),
                    g,
                    &spec.to_string(),
                    &tree,
                    config.k,
                    cap,
                    config.include_gtables,
                ),
                (g, tree) => failed_row(family, spec, g.as_ref().err().or(tree.as_ref().err())),
            };
            rows.push(row);
        }
    }
    rows
}

fn failed_row(family: &GraphFamily, spec: &TreeSpec, err: Option<&Error>) -> SuiteRow {
    SuiteRow {
        graph: family.to_string(),
        tree: spec.to_string(),
        n: 0,
        edges: 0,
        d: String::new(),
        min_degree: 0,
        t: 0,
        count: None,
        hom_count: None,
        walk_count: String::new(),
        bounds: None,
        checks: BoundChecks::default(),
        max_induced_degree: None,
        slack: SlackColumns::default(),
        pprime_equality: None,
        identities: None,
        chain: None,
        gtables: None,
        errors: vec![format!("build: {}", err.map_or_else(|| "unknown".to_string(), Error::to_string))],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureRow {
    pub instance: String,
    pub tree: String,
    pub n: usize,
    pub d: String,
    pub min_degree: usize,
    pub t: usize,
    pub count: Option<String>,
    #[serde(serialize_with = "serialize_opt_log")]
    pub log_count: Option<f64>,
    #[serde(serialize_with = "serialize_opt_log")]
    pub log_falling_factorial: Option<f64>,
    #[serde(serialize_with = "serialize_opt_log")]
    pub log_margin: Option<f64>,
    pub verdict: Verdict,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanFamily {
    /// `G(n, p)` conditioned on the minimum-degree floor, `trials` per `n`.
    Random { p: f64 },
    /// Every `c · K_q` with `c·q = n` and `q − 1 ≥` the floor.
    Cliques,
    /// Every `K_{a, n−a}` with `min(a, n−a) ≥` the floor.
    Bipartite,
}

impl ScanFamily {
    pub fn parse(name: &str, p: f64) -> Result<Self> {
        match name {
            "random" => Ok(ScanFamily::Random { p }),
            "cliques" => Ok(ScanFamily::Cliques),
            "bipartite" => Ok(ScanFamily::Bipartite),
            _ => Err(Error::Precondition(format!("unknown scan family {name:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureConfig {
    pub family: ScanFamily,
    pub n_min: usize,
    pub n_max: usize,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    /// Minimum-degree floor imposed on every scanned graph.
    pub min_degree: usize,
    /// Trees to test; empty means the `t`-edge path and star.
    pub trees: Vec<TreeSpec>,
    pub work_cap: u64,
}

impl ConjectureConfig {
    /// Floor used when none is given: `max(t, 2t)`.
    pub fn default_min_degree(t: usize) -> usize {
        t.max(2 * t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureScan {
    pub schema_version: u32,
    pub rows: Vec<ConjectureRow>,
    #[serde(serialize_with = "serialize_opt_log")]
    pub min_log_margin: Option<f64>,
    pub violations: usize,
}

fn scan_instances(config: &ConjectureConfig) -> Vec<(String, Result<Graph>)> {
    let mut out = Vec::new();
    for n in config.n_min..=config.n_max {
        match &config.family {
            ScanFamily::Random { p } => {
                for trial in 0..config.trials {
                    let seed = config.seed.wrapping_add((n as u64) << 32).wrapping_add(trial as u64);
                    let fam = GraphFamily::Random { n, p: *p, min_degree: config.min_degree };
                    out.push((format!("{fam}#{seed}"), fam.build(seed)));
                }
            }
            ScanFamily::Cliques => {
                for q in (config.min_degree.max(config.t) + 1)..=n {
                    if n % q == 0 {
                        let fam = GraphFamily::Cliques { c: n / q, q };
                        out.push((fam.to_string(), fam.build(0)));
                    }
                }
            }
            ScanFamily::Bipartite => {
                for a in config.min_degree.max(1)..=n / 2 {
                    if n - a >= config.min_degree {
                        let fam = GraphFamily::Bipartite { a, b: n - a };
                        out.push((fam.to_string(), fam.build(0)));
                    }
                }
            }
        }
    }
    out
}

/// Compares exact copy counts with `n·d(d−1)⋯(d−t+1)` on sampled graphs.
pub fn conjecture_scan(config: &ConjectureConfig) -> Result<ConjectureScan> {
    if config.t < 1 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    let trees = if config.trees.is_empty() {
        vec![TreeSpec::Path(config.t), TreeSpec::Star(config.t)]
    } else {
        config.trees.clone()
    };
    for spec in &trees {
        if spec.build()?.t() != config.t {
            return Err(Error::Precondition(format!("tree {spec} does not have t = {} edges", config.t)));
        }
    }
    let cap = WorkCap(config.work_cap);
    let mut rows = Vec::new();
    for (name, graph) in scan_instances(config) {
        for spec in &trees {
            let tree = spec.build()?;
            rows.push(conjecture_row(&name, graph.as_ref(), spec, &tree, cap));
        }
    }
    let min_log_margin = rows.iter().filter_map(|r| r.log_margin).min_by(f64::total_cmp);
    let violations = rows.iter().filter(|r| r.verdict == Verdict::Violated).count();
    Ok(ConjectureScan { schema_version: SCHEMA_VERSION, rows, min_log_margin, violations })
}

fn conjecture_row(
    name: &str,
    graph: std::result::Result<&Graph, &Error>,
    spec: &TreeSpec,
    tree: &Tree,
    cap: WorkCap,
) -> ConjectureRow {
    let t = tree.t();
    let mut row = ConjectureRow {
        instance: name.to_string(),
        tree: spec.to_string(),
        n: 0,
        d: String::new(),
        min_degree: 0,
        t,
        count: None,
        log_count: None,
        log_falling_factorial: None,
        log_margin: None,
        verdict: Verdict::Inapplicable,
        error: None,
    };
    let graph = match graph {
        Ok(g) => g,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.n = graph.n();
    row.d = graph.average_degree().to_string();
    row.min_degree = graph.min_degree();
    let count = match count_copies(graph, tree, cap) {
        Ok(c) => c,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.log_count = Some(count.ln()).filter(|x| x.is_finite());
    row.count = Some(count.value.to_string());
    let bounds = match evaluate_bounds(graph, t, None) {
        Ok(b) => b,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    if let Some(ff) = bounds.falling_factorial.log() {
        let cmp = compare_count_to_bound(&count, ff);
        row.log_falling_factorial = Some(ff);
        row.log_margin = Some(cmp.log_margin).filter(|m| m.is_finite());
        row.verdict = if cmp.holds || cmp.log_margin >= -LOG_TOLERANCE { Verdict::Holds } else { Verdict::Violated };
    }
    row
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Sharpness {
    pub ok: bool,
    /// `n(q−1)(q−2)⋯(q−t)`.
    pub expected: String,
    pub counts: Vec<(String, String)>,
    pub diagnostics: Vec<String>,
}

/// Checks that `c·K_q` holds exactly `n(q−1)⋯(q−t)` copies of the `t`-edge
/// path, the star, and every tree in `extra`.
pub fn sharpness_check(q: usize, c: usize, t: usize, extra: &[Tree], cap: WorkCap) -> Result<Sharpness> {
    if t < 1 || q < t + 1 {
        return Err(Error::Precondition(format!("need q − 1 >= t >= 1 (q = {q}, t = {t})")));
    }
    let graph = generators::disjoint_cliques(c, q)?;
    let expected = (1..=t).fold(num_bigint::BigUint::from(c * q), |acc, j| acc * (q - j));
    let mut trees = vec![("path".to_string(), Tree::path(t)?), ("star".to_string(), Tree::star(t)?)];
    trees.extend(extra.iter().enumerate().map(|(i, tr)| (format!("extra#{i}"), tr.clone())));
    let mut counts = Vec::new();
    let mut diagnostics = Vec::new();
    for (name, tree) in trees {
        if tree.t() != t {
            diagnostics.push(format!("{name}: has {} edges, expected {t}", tree.t()));
            continue;
        }
        let got = count_copies(&graph, &tree, cap)?.value;
        if got != expected {
            diagnostics.push(format!("{name}: counted {got}, expected {expected}"));
        }
        counts.push((name, got.to_string()));
    }
    Ok(Sharpness { ok: diagnostics.is_empty(), expected: expected.to_string(), counts, diagnostics })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    fn push(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (status, detail) = match outcome {
            Ok((true, d)) => (CheckStatus::Pass, d),
            Ok((false, d)) => (CheckStatus::Fail, d),
            Err(Error::Precondition(m)) => (CheckStatus::Skipped, m),
            Err(e) => (CheckStatus::Fail, e.to_string()),
        };
        self.checks.push(CheckOutcome { name, status, detail });
    }

    fn skip(&mut self, name: &'static str, why: &str) {
        self.checks.push(CheckOutcome { name, status: CheckStatus::Skipped, detail: why.to_string() });
    }
}

/// Runs every asserted invariant on one instance.
///
/// Checks whose hypothesis fails (e.g. minimum degree below `t`) are skipped;
/// a work-cap overrun fails the check it interrupted.
pub fn verify_instance(graph: &Graph, tree: &Tree, cap: WorkCap) -> VerifyReport {
    let t = tree.t();
    let mut report = VerifyReport { checks: Vec::new() };
    let labeling = GoodLabeling::breadth_first(tree, None).expect("every tree has a leaf");
    let hypothesis = graph.min_degree() >= t;
    let below = format!("minimum degree {} < t = {t}", graph.min_degree());

    if hypothesis {
        let ids = check_identities(graph, tree, &labeling, cap);
        let ids = ids.as_ref();
        report.push(
            "measure-sum-to-one",
            ids.map(|r| (num_traits::One::is_one(&r.total_p_measure), format!("sum P = {}", ratio_to_string(&r.total_p_measure))))
                .map_err(Clone::clone),
        );
        report.push(
            "measure-below-weight",
            ids.map(|r| (r.measure_above_weight == 0, format!("{} copies with P > p", r.measure_above_weight)))
                .map_err(Clone::clone),
        );
        report.push(
            "reversal",
            ids.map(|r| (r.reversal_failures == 0, format!("{} of {} copies differ", r.reversal_failures, r.copies)))
                .map_err(Clone::clone),
        );
        report.push(
            "product-form",
            ids.map(|r| (r.product_form_failures == 0, format!("{} of {} copies differ", r.product_form_failures, r.copies)))
                .map_err(Clone::clone),
        );
        report.push(
            "key-lemma-slack",
            g_table_exact(graph, &labeling, MeasureKind::PWeight, cap).map(|tab| {
                let s = tab.min_slack(graph);
                (!s.is_negative(), format!("min slack {}", ratio_to_string(&s)))
            }),
        );
    } else {
        for name in ["measure-sum-to-one", "measure-below-weight", "reversal", "product-form", "key-lemma-slack"] {
            report.skip(name, &below);
        }
    }

    if graph.edge_count() > 0 {
        report.push(
            "pprime-equality",
            g_table_exact(graph, &labeling, MeasureKind::PPrime, cap).and_then(|tab| {
                let sum = crate::measure::total_weight(graph, &labeling, MeasureKind::PPrime, cap)?;
                let ok = tab.equals_degree_share(graph) && num_traits::One::is_one(&sum);
                Ok((ok, format!("sum P' = {}, min slack {}", ratio_to_string(&sum), ratio_to_string(&tab.min_slack(graph)))))
            }),
        );
    } else {
        report.skip("pprime-equality", "graph has no edges");
    }

    let count = count_copies(graph, tree, cap);
    let hom = count_homomorphisms(graph, tree);
    let bounds = evaluate_bounds(graph, t, None);
    report.push(
        "theorem1",
        (|| {
            let b = bounds.clone()?;
            let log = b.thm1.log().ok_or_else(|| Error::Precondition(below.clone()))?;
            let c = compare_count_to_bound(&count.clone()?, log);
            Ok((c.holds, format!("log margin {:.6e}", c.log_margin)))
        })(),
    );
    report.push(
        "copies-below-homomorphisms",
        (|| {
            let (c, h) = (count.clone()?, hom.clone()?);
            Ok((c.value <= h.value, format!("{} <= {}", c.value, h.value)))
        })(),
    );
    report.push(
        "homomorphism-eq1",
        (|| {
            let b = bounds.clone()?;
            let log = b.hom_eq1.log().ok_or_else(|| Error::Precondition("bound inapplicable".into()))?;
            let c = compare_count_to_bound(&hom.clone()?, log);
            Ok((c.holds, format!("log margin {:.6e}", c.log_margin)))
        })(),
    );
    report.push(
        "blakley-roy",
        (|| {
            let b = bounds.clone()?;
            let log = b.blakley_roy.log().ok_or_else(|| Error::Precondition("graph has no edges".into()))?;
            let c = compare_count_to_bound(&count_walks(graph, t), log);
            Ok((c.holds, format!("log margin {:.6e}", c.log_margin)))
        })(),
    );
    report.push(
        "homomorphism-dp-vs-brute",
        match count_homomorphisms_bruteforce(graph, tree, cap) {
            Err(Error::WorkCapExceeded { cap }) => Err(Error::Precondition(format!("n^(t+1) above cap {cap}"))),
            brute => brute.and_then(|b| {
                let h = hom.clone()?;
                Ok((b.value == h.value, format!("dp {} brute {}", h.value, b.value)))
            }),
        },
    );
    if hypothesis {
        report.push(
            "chain-theorem1-link",
            verify_chain(graph, tree, &labeling, cap)
                .map(|c| (c.links.omega_ge_thm1, format!("links {:?}", c.links.as_array()))),
        );
    } else {
        report.skip("chain-theorem1-link", &below);
    }
    report
}

/// Flat CSV projection of a suite row; column order is fixed.
#[derive(Serialize)]
struct SuiteCsvRow<'a> {
    graph: &'a str,
    tree: &'a str,
    n: usize,
    edges: usize,
    d: &'a str,
    min_degree: usize,
    t: usize,
    count: Option<&'a str>,
    hom_count: Option<&'a str>,
    walk_count: &'a str,
    log_thm1: Option<f64>,
    thm1_holds: Option<bool>,
    thm1_margin: Option<f64>,
    log_cor2: Option<f64>,
    cor2_holds: Option<bool>,
    log_hom_eq1: Option<f64>,
    hom_eq1_holds: Option<bool>,
    log_p3_eq2: Option<f64>,
    p3_eq2_holds: Option<bool>,
    log_blakley_roy: Option<f64>,
    blakley_roy_holds: Option<bool>,
    log_cor3: Option<f64>,
    cor3_holds: Option<bool>,
    log_falling_factorial: Option<f64>,
    falling_factorial_holds: Option<bool>,
    slack_p: Option<&'a str>,
    slack_big_p: Option<&'a str>,
    slack_pprime: Option<&'a str>,
    pprime_equality: Option<bool>,
    identities_hold: Option<bool>,
    log_entropy_p: Option<f64>,
    log_product_p: Option<f64>,
    link_omega_entropy: Option<bool>,
    link_entropy_product: Option<bool>,
    link_product_thm1: Option<bool>,
    link_omega_thm1: Option<bool>,
    errors: String,
}

/// Column names of the suite CSV, in order.
pub const SUITE_CSV_COLUMNS: &[&str] = &[
    "graph", "tree", "n", "edges", "d", "min_degree", "t", "count", "hom_count", "walk_count",
    "log_thm1", "thm1_holds", "thm1_margin", "log_cor2", "cor2_holds", "log_hom_eq1", "hom_eq1_holds",
    "log_p3_eq2", "p3_eq2_holds", "log_blakley_roy", "blakley_roy_holds", "log_cor3", "cor3_holds",
    "log_falling_factorial", "falling_factorial_holds", "slack_p", "slack_big_p", "slack_pprime",
    "pprime_equality", "identities_hold", "log_entropy_p", "log_product_p", "link_omega_entropy",
    "link_entropy_product", "link_product_thm1", "link_omega_thm1", "errors",
];

fn sig(x: Option<f64>) -> Option<f64> {
    x.map(crate::numeric::sig15)
}

pub fn suite_to_csv(rows: &[SuiteRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        let b = r.bounds.as_ref();
        let log = |f: fn(&BoundReport) -> &crate::bounds::Bound| sig(b.and_then(|b| f(b).log()));
        let holds = |c: &Option<Comparison>| c.map(|c| c.holds);
        let chain = r.chain.as_ref();
        w.serialize(SuiteCsvRow {
            graph: &r.graph,
            tree: &r.tree,
            n: r.n,
            edges: r.edges,
            d: &r.d,
            min_degree: r.min_degree,
            t: r.t,
            count: r.count.as_deref(),
            hom_count: r.hom_count.as_deref(),
            walk_count: &r.walk_count,
            log_thm1: log(|b| &b.thm1),
            thm1_holds: holds(&r.checks.thm1),
            thm1_margin: sig(r.checks.thm1.map(|c| c.log_margin)),
            log_cor2: log(|b| &b.cor2),
            cor2_holds: holds(&r.checks.cor2),
            log_hom_eq1: log(|b| &b.hom_eq1),
            hom_eq1_holds: holds(&r.checks.hom_eq1),
            log_p3_eq2: log(|b| &b.p3_eq2),
            p3_eq2_holds: holds(&r.checks.p3_eq2),
            log_blakley_roy: log(|b| &b.blakley_roy),
            blakley_roy_holds: holds(&r.checks.blakley_roy),
            log_cor3: log(|b| &b.cor3),
            cor3_holds: holds(&r.checks.cor3),
            log_falling_factorial: log(|b| &b.falling_factorial),
            falling_factorial_holds: holds(&r.checks.falling_factorial),
            slack_p: r.slack.p.as_deref(),
            slack_big_p: r.slack.big_p.as_deref(),
            slack_pprime: r.slack.pprime.as_deref(),
            pprime_equality: r.pprime_equality,
            identities_hold: r.identities.as_ref().map(IdentityReport::all_hold),
            log_entropy_p: sig(chain.map(|c| c.log_entropy_p)),
            log_product_p: sig(chain.map(|c| c.log_product_p)),
            link_omega_entropy: chain.map(|c| c.links.omega_ge_entropy),
            link_entropy_product: chain.map(|c| c.links.entropy_ge_product),
            link_product_thm1: chain.map(|c| c.links.product_ge_thm1),
            link_omega_thm1: chain.map(|c| c.links.omega_ge_thm1),
            errors: r.errors.join("; "),
        })
        .map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    }
    csv_finish(w)
}

pub fn conjecture_to_csv(rows: &[ConjectureRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    }
    csv_finish(w)
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport<'a> {
    pub schema_version: u32,
    pub config: &'a SuiteConfig,
    pub rows: &'a [SuiteRow],
}

pub fn suite_to_json(config: &SuiteConfig, rows: &[SuiteRow]) -> String {
    let report = SuiteReport { schema_version: SCHEMA_VERSION, config, rows };
    serde_json::to_string_pretty(&report).expect("suite rows serialize")
}
