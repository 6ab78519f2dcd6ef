use std::path::Path;

use serde_json::json;
use treebound::counting::count_homomorphisms_bruteforce;
use treebound::harness::{
    conjecture_scan, conjecture_to_csv, run_suite, sharpness_check, suite_to_csv, verify_instance, CheckStatus,
    ConjectureConfig, GraphFamily, ScanFamily, SuiteConfig, SuiteReport, TreeSpec, SCHEMA_VERSION,
};
use treebound::io::{parse_graph, parse_tree, write_graph};
use treebound::measure::{
    g_table_exact, g_table_monte_carlo, seeded_rng, verify_chain, weight, EmbeddingSampler, GTable,
};
use treebound::numeric::ratio_to_string;
use treebound::{
    count_copies, count_homomorphisms, count_walks, evaluate_bounds, Bound, GoodLabeling, Graph, MeasureKind, Tree,
};

use crate::output::{log_cell, sha256_hex, table, work_cap, Failure, Invocation, Report};
use crate::{Command, HomMethod, Instance};

type Outcome = Result<Report, Failure>;

pub fn run(cmd: &Command, inv: &mut Invocation) -> Outcome {
    match cmd {
        Command::Count { input } => count(inv, input),
        Command::Hom { input, method } => hom(inv, input, *method),
        Command::Walks { graph, length } => walks(inv, graph, *length),
        Command::Bounds { graph, t, k } => bounds(inv, graph, *t, *k),
        Command::Gtable { input, measure, exact: _, samples, seed } => gtable(inv, input, measure, *samples, *seed),
        Command::Sample { input, samples, seed } => sample(inv, input, *samples, *seed),
        Command::Verify { input } => verify(inv, input),
        Command::Chain { input } => chain(inv, input),
        Command::Conjecture { family, n, t, trials, seed, min_degree, p, tree } => {
            let (n_min, n_max) = parse_range(n)?;
            let trees = tree.iter().map(|s| tree_spec(inv, s)).collect::<Result<Vec<_>, _>>()?;
            let config = ConjectureConfig {
                family: ScanFamily::parse(family, *p)?,
                n_min,
                n_max,
                t: *t,
                trials: *trials,
                seed: *seed,
                min_degree: min_degree.unwrap_or_else(|| ConjectureConfig::default_min_degree(*t)),
                trees,
                work_cap: work_cap()?.0,
            };
            conjecture(&config)
        }
        Command::Sharpness { q, c, t, tree } => {
            let extra = tree.iter().map(|s| tree_spec(inv, s)?.build().map_err(Failure::from)).collect::<Result<Vec<_>, _>>()?;
            let s = sharpness_check(*q, *c, *t, &extra, work_cap()?)?;
            let csv = table(&["tree", "count", "expected"], s.counts.iter().map(|(n, c)| [n.as_str(), c, &s.expected]))?;
            let mut r = Report::new(&s, csv)?;
            r.failed = !s.ok;
            Ok(r)
        }
        Command::Gen { family, args, output, seed } => gen(family, args, output, *seed),
        Command::Suite { config } => suite(inv, config.as_deref()),
    }
}

fn load_graph(inv: &mut Invocation, path: &Path) -> Result<Graph, Failure> {
    let text = inv.read("graph", path)?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn tree_spec(inv: &mut Invocation, s: &str) -> Result<TreeSpec, Failure> {
    if let Some(preset) = TreeSpec::preset(s) {
        let preset = preset.map_err(|e| Failure::Usage(e.to_string()))?;
        inv.record_preset("tree", s);
        return Ok(preset);
    }
    let path = Path::new(s);
    let text = inv.read("tree", path)?;
    let tree = parse_tree(&text).map_err(|e| Failure::Input(format!("{s}: {e}")))?;
    Ok(TreeSpec::Custom { name: s.to_string(), tree })
}

fn load(inv: &mut Invocation, input: &Instance) -> Result<(Graph, Tree), Failure> {
    let graph = load_graph(inv, &input.graph)?;
    let tree = tree_spec(inv, &input.tree)?.build()?;
    Ok((graph, tree))
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--n expects N or A..B, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn count(inv: &mut Invocation, input: &Instance) -> Outcome {
    let (g, tree) = load(inv, input)?;
    let c = count_copies(&g, &tree, work_cap()?)?;
    let csv = table(&["count", "method"], [[c.value.to_string(), "enumeration".to_string()]])?;
    Report::new(json!({ "count": c.value.to_string(), "method": c.method }), csv)
}

fn hom(inv: &mut Invocation, input: &Instance, method: HomMethod) -> Outcome {
    let (g, tree) = load(inv, input)?;
    let c = match method {
        HomMethod::Dp => count_homomorphisms(&g, &tree)?,
        HomMethod::Brute => count_homomorphisms_bruteforce(&g, &tree, work_cap()?)?,
    };
    let method = serde_json::to_value(c.method).expect("method serializes");
    let name = method.as_str().unwrap_or_default().to_string();
    let csv = table(&["count", "method"], [[c.value.to_string(), name]])?;
    Report::new(json!({ "count": c.value.to_string(), "method": method }), csv)
}

fn walks(inv: &mut Invocation, graph: &Path, length: usize) -> Outcome {
    let g = load_graph(inv, graph)?;
    let c = count_walks(&g, length);
    let csv = table(&["length", "count"], [[length.to_string(), c.value.to_string()]])?;
    Report::new(json!({ "length": length, "count": c.value.to_string() }), csv)
}

fn bounds(inv: &mut Invocation, graph: &Path, t: usize, k: Option<usize>) -> Outcome {
    let g = load_graph(inv, graph)?;
    let r = evaluate_bounds(&g, t, k)?;
    let named: [(&str, &Bound); 7] = [
        ("thm1", &r.thm1),
        ("cor2", &r.cor2),
        ("homEq1", &r.hom_eq1),
        ("p3Eq2", &r.p3_eq2),
        ("blakleyRoy", &r.blakley_roy),
        ("cor3", &r.cor3),
        ("fallingFactorial", &r.falling_factorial),
    ];
    let rows = named.iter().map(|(name, b)| {
        let reason = match b {
            Bound::Log(_) => String::new(),
            Bound::Inapplicable(why) => why.clone(),
        };
        [name.to_string(), log_cell(b.log()), b.is_applicable().to_string(), reason]
    });
    let csv = table(&["bound", "log_value", "applicable", "reason"], rows)?;
    Report::new(&r, csv)
}

fn labeling(tree: &Tree) -> Result<GoodLabeling, Failure> {
    Ok(GoodLabeling::breadth_first(tree, None)?)
}

fn gtable(inv: &mut Invocation, input: &Instance, measure: &str, samples: Option<u64>, seed: Option<u64>) -> Outcome {
    let kind = MeasureKind::parse(measure)
        .ok_or_else(|| Failure::Usage(format!("--measure must be p, P or Pprime, got {measure:?}")))?;
    let (g, tree) = load(inv, input)?;
    let l = labeling(&tree)?;
    let tab = match samples {
        Some(n) => {
            if kind != MeasureKind::P {
                return Err(Failure::Usage("--samples estimates the measure P only".into()));
            }
            g_table_monte_carlo(&g, &l, n, seed.unwrap_or_default())?
        }
        None => g_table_exact(&g, &l, kind, work_cap()?)?,
    };
    gtable_report(&g, &l, &tab)
}

fn gtable_report(g: &Graph, l: &GoodLabeling, tab: &GTable) -> Outcome {
    let share: Vec<String> = (0..g.n()).map(|v| ratio_to_string(&GTable::degree_share(g, v))).collect();
    let mut rows = Vec::new();
    for (i, row) in tab.rows.iter().enumerate() {
        for (v, x) in row.iter().enumerate() {
            rows.push([(i + 1).to_string(), v.to_string(), ratio_to_string(x), share[v].clone()]);
        }
    }
    let csv = table(&["i", "v", "value", "degree_share"], rows)?;
    let payload = json!({
        "labeling": l.order(),
        "table": tab,
        "degreeShare": share,
        "minSlack": ratio_to_string(&tab.min_slack(g)),
        "rowSums": tab.row_sums().iter().map(ratio_to_string).collect::<Vec<_>>(),
    });
    Report::new(payload, csv)
}

fn sample(inv: &mut Invocation, input: &Instance, samples: u64, seed: u64) -> Outcome {
    let (g, tree) = load(inv, input)?;
    let l = labeling(&tree)?;
    let sampler = EmbeddingSampler::new(&g, &l)?;
    let mut rng = seeded_rng(seed);
    let mut draws = Vec::new();
    let mut rows = Vec::new();
    for s in 0..samples {
        let omega = sampler.sample(&mut rng)?;
        let p = ratio_to_string(&weight(&g, &l, &omega, MeasureKind::P)?);
        let mut row = vec![s.to_string()];
        row.extend(omega.0.iter().map(usize::to_string));
        row.push(p.clone());
        rows.push(row);
        draws.push(json!({ "omega": omega, "P": p }));
    }
    let mut headers: Vec<String> = vec!["sample".into()];
    headers.extend((1..=l.len()).map(|i| format!("omega_{i}")));
    headers.push("P".into());
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    let csv = table(&headers, rows)?;
    Report::new(json!({ "labeling": l.order(), "seed": seed, "samples": draws }), csv)
}

fn verify(inv: &mut Invocation, input: &Instance) -> Outcome {
    let (g, tree) = load(inv, input)?;
    let cap = work_cap()?;
    // surface an oversized instance as a work-cap exit rather than failed checks
    count_copies(&g, &tree, cap)?;
    let report = verify_instance(&g, &tree, cap);
    let status = |s: CheckStatus| serde_json::to_value(s).expect("status serializes").as_str().unwrap_or_default().to_string();
    let csv = table(
        &["check", "status", "detail"],
        report.checks.iter().map(|c| [c.name.to_string(), status(c.status), c.detail.clone()]),
    )?;
    for c in report.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    let mut r = Report::new(json!({ "allPass": report.all_pass(), "checks": report.checks }), csv)?;
    r.failed = !report.all_pass();
    Ok(r)
}

fn chain(inv: &mut Invocation, input: &Instance) -> Outcome {
    let (g, tree) = load(inv, input)?;
    let l = labeling(&tree)?;
    let c = verify_chain(&g, &tree, &l, work_cap()?)?;
    let links = c.links.as_array();
    let csv = table(
        &[
            "omega_count",
            "total_p_measure",
            "total_p_weight",
            "log_entropy_p",
            "log_product_p",
            "log_thm1",
            "link_omega_entropy",
            "link_entropy_product",
            "link_product_thm1",
            "link_omega_thm1",
        ],
        [[
            c.omega_count.to_string(),
            ratio_to_string(&c.total_p_measure),
            ratio_to_string(&c.total_p_weight),
            log_cell(Some(c.log_entropy_p)),
            log_cell(Some(c.log_product_p)),
            log_cell(Some(c.log_thm1)),
            links[0].to_string(),
            links[1].to_string(),
            links[2].to_string(),
            links[3].to_string(),
        ]],
    )?;
    Report::new(&c, csv)
}

fn conjecture(config: &ConjectureConfig) -> Outcome {
    let scan = conjecture_scan(config)?;
    for r in scan.rows.iter().filter(|r| r.verdict == treebound::harness::Verdict::Violated) {
        eprintln!("violation: {} {} margin {:?}", r.instance, r.tree, r.log_margin);
    }
    let csv = conjecture_to_csv(&scan.rows)?;
    Report::new(&scan, csv)
}

fn gen(family: &str, args: &[String], output: &Path, seed: u64) -> Outcome {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let fam = GraphFamily::parse(family, &args)?;
    let g = fam.build(seed)?;
    let text = write_graph(&g);
    std::fs::write(output, &text).map_err(|e| Failure::Input(format!("{}: {e}", output.display())))?;
    let digest = sha256_hex(text.as_bytes());
    let out = output.display().to_string();
    let csv = table(
        &["family", "seed", "n", "edges", "output", "sha256"],
        [[fam.to_string(), seed.to_string(), g.n().to_string(), g.edge_count().to_string(), out.clone(), digest.clone()]],
    )?;
    Report::new(
        json!({ "family": fam, "seed": seed, "n": g.n(), "edges": g.edge_count(), "output": out, "sha256": digest }),
        csv,
    )
}

fn suite(inv: &mut Invocation, path: Option<&Path>) -> Outcome {
    let mut config = match path {
        Some(p) => {
            let text = inv.read("config", p)?;
            serde_json::from_str::<SuiteConfig>(&text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        None => SuiteConfig::default(),
    };
    if std::env::var_os(crate::output::WORK_CAP_ENV).is_some() {
        config.work_cap = work_cap()?.0;
    }
    let rows = run_suite(&config);
    let violated = rows.iter().any(|r| {
        [r.checks.thm1, r.checks.hom_eq1, r.checks.blakley_roy].iter().flatten().any(|c| !c.holds)
    });
    let csv = suite_to_csv(&rows)?;
    let mut r = Report::new(SuiteReport { schema_version: SCHEMA_VERSION, config: &config, rows: &rows }, csv)?;
    r.failed = violated;
    Ok(r)
}
