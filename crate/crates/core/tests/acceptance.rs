//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use num_rational::BigRational;
use num_traits::{One, Signed};
use treebound::generators::{complete, complete_bipartite, cycle, disjoint_cliques, petersen, random_min_degree};
use treebound::harness::{conjecture_scan, ConjectureConfig, ScanFamily, Verdict};
use treebound::measure::{check_identities, g_table_exact, seeded_rng, verify_chain, EmbeddingSampler, GTable, MeasureKind};
use treebound::{
    compare_count_to_bound, count_copies, count_homomorphisms, count_homomorphisms_bruteforce, count_walks,
    evaluate_bounds, GoodLabeling, Graph, Tree, WorkCap,
};

const CAP: WorkCap = WorkCap::DEFAULT;
const LOG_TOL: f64 = 1e-9;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn bfs(tree: &Tree) -> GoodLabeling {
    GoodLabeling::breadth_first(tree, None).unwrap()
}

fn count(g: &Graph, tree: &Tree) -> num_bigint::BigUint {
    count_copies(g, tree, CAP).unwrap().value
}

fn spider() -> Tree {
    // t = 4: 1-2, 2-3, 2-4, 4-5
    Tree::from_edges(5, [(1, 2), (2, 3), (2, 4), (4, 5)]).unwrap()
}

fn trees_up_to(t_max: usize) -> Vec<(String, Tree)> {
    let mut out = Vec::new();
    for t in 2..=t_max {
        out.push((format!("path:{t}"), Tree::path(t).unwrap()));
        if t >= 3 {
            out.push((format!("star:{t}"), Tree::star(t).unwrap()));
        }
    }
    if t_max >= 4 {
        out.push(("spider:4".into(), spider()));
    }
    out
}

/// Instances with `n ≤ 8`, `t ≤ 4` and minimum degree at least `t`.
fn suite() -> Vec<(String, Graph, String, Tree)> {
    let mut graphs: Vec<(String, Graph)> = vec![
        ("K4".into(), complete(4).unwrap()),
        ("K5".into(), complete(5).unwrap()),
        ("K6".into(), complete(6).unwrap()),
        ("K7".into(), complete(7).unwrap()),
        ("K8".into(), complete(8).unwrap()),
        ("K5-e".into(), complete(5).unwrap().without_edge(0, 1).unwrap()),
        ("K6-e".into(), complete(6).unwrap().without_edge(2, 3).unwrap()),
        ("K3,3".into(), complete_bipartite(3, 3).unwrap()),
        ("K3,4".into(), complete_bipartite(3, 4).unwrap()),
        ("K4,4".into(), complete_bipartite(4, 4).unwrap()),
        ("2K4".into(), disjoint_cliques(2, 4).unwrap()),
        ("C5".into(), cycle(5).unwrap()),
        ("C8".into(), cycle(8).unwrap()),
    ];
    for seed in 0..4 {
        graphs.push((format!("G(7,.6)>=3#{seed}"), random_min_degree(7, 0.6, 3, seed, 10_000).unwrap()));
        graphs.push((format!("G(8,.7)>=4#{seed}"), random_min_degree(8, 0.7, 4, 100 + seed, 10_000).unwrap()));
    }
    let mut out = Vec::new();
    for (gn, g) in &graphs {
        for (tn, tree) in trees_up_to(4) {
            if g.min_degree() >= tree.t() {
                out.push((gn.clone(), g.clone(), tn, tree));
            }
        }
    }
    out
}

fn ac1_clique_sharpness() -> Check {
    let g = disjoint_cliques(3, 5).unwrap();
    let (n, d) = (15u32, 4u32);
    let expect = n * d * (d - 1) * (d - 2);
    for tree in [Tree::path(3).unwrap(), Tree::star(3).unwrap()] {
        let c = count(&g, &tree);
        ensure(c == expect.into(), || format!("count {c} != {expect}"))?;
    }
    Ok(format!("P3 and S3 both {expect}"))
}

fn thm1_margin(g: &Graph, tree: &Tree) -> Result<(num_bigint::BigUint, f64, f64), String> {
    let b = evaluate_bounds(g, tree.t(), None).unwrap();
    let log = b.thm1.log().ok_or("thm1 inapplicable")?;
    let c = count_copies(g, tree, CAP).unwrap();
    let cmp = compare_count_to_bound(&c, log);
    ensure(cmp.holds, || format!("bound fails, margin {}", cmp.log_margin))?;
    Ok((c.value, log.exp(), cmp.log_margin))
}

fn ac2_thm1_equality() -> Check {
    let mut msg = Vec::new();
    for (name, g, expect) in [("K4", complete(4).unwrap(), 24u32), ("C5", cycle(5).unwrap(), 10)] {
        let (c, bound, margin) = thm1_margin(&g, &Tree::path(2).unwrap())?;
        ensure(c == expect.into(), || format!("{name}: count {c}"))?;
        ensure((bound - expect as f64).abs() <= 1e-9 * expect as f64, || format!("{name}: bound {bound}"))?;
        ensure(margin.abs() <= LOG_TOL, || format!("{name}: margin {margin}"))?;
        msg.push(format!("{name}/P2 {c}={bound:.12}"));
    }
    Ok(msg.join(", "))
}

fn ac3_thm1_strict() -> Check {
    let mut msg = Vec::new();
    for (name, g, count_exp, bound_exp) in [("K4", complete(4).unwrap(), 24u32, 12.0), ("Petersen", petersen(), 120, 30.0)] {
        let (c, bound, _) = thm1_margin(&g, &Tree::path(3).unwrap())?;
        ensure(c == count_exp.into(), || format!("{name}: count {c}"))?;
        ensure((bound - bound_exp).abs() <= 1e-9 * bound_exp, || format!("{name}: bound {bound}"))?;
        msg.push(format!("{name}/P3 {c}>={bound:.9}"));
    }
    Ok(msg.join(", "))
}

fn ac4_hom_eq1() -> Check {
    let k4 = complete(4).unwrap();
    let p2 = Tree::path(2).unwrap();
    let hom = count_homomorphisms(&k4, &p2).unwrap();
    ensure(hom.value == 36u32.into(), || format!("hom {}", hom.value))?;
    let b = evaluate_bounds(&k4, 2, None).unwrap();
    let margin = compare_count_to_bound(&hom, b.hom_eq1.log().unwrap()).log_margin;
    ensure(margin.abs() <= LOG_TOL, || format!("Eq1 margin {margin}"))?;
    let mut checked = 0;
    for seed in 0..20u64 {
        let n = 4 + (seed as usize % 5);
        let g = random_min_degree(n, 0.5, 1, seed, 10_000).unwrap();
        let tree = random_tree(1 + seed as usize % 4, seed);
        let dp = count_homomorphisms(&g, &tree).unwrap().value;
        let brute = count_homomorphisms_bruteforce(&g, &tree, CAP).unwrap().value;
        ensure(dp == brute, || format!("seed {seed}: dp {dp} vs brute {brute}"))?;
        checked += 1;
    }
    Ok(format!("K4/P2 hom 36 = Eq1, dp == brute on {checked} random instances"))
}

fn random_tree(t: usize, seed: u64) -> Tree {
    use rand::Rng;
    let mut rng = seeded_rng(seed ^ 0xA5A5);
    Tree::from_edges(t + 1, (2..=t + 1).map(|i| (rng.random_range(1..i), i))).unwrap()
}

fn ac5_blakley_roy() -> Check {
    let mut n_inst = 0;
    for (gn, g, tn, tree) in suite() {
        let b = evaluate_bounds(&g, tree.t(), None).unwrap();
        let cmp = compare_count_to_bound(&count_walks(&g, tree.t()), b.blakley_roy.log().unwrap());
        ensure(cmp.holds, || format!("{gn}/{tn}: walks below n d^t"))?;
        if g.is_regular() {
            ensure(cmp.log_margin.abs() <= LOG_TOL, || format!("{gn}/{tn}: regular margin {}", cmp.log_margin))?;
        }
        n_inst += 1;
    }
    for (name, g, t, expect) in [("K4", complete(4).unwrap(), 3, 108u32), ("C5", cycle(5).unwrap(), 2, 20)] {
        let w = count_walks(&g, t);
        ensure(w.value == expect.into(), || format!("{name}: walks {}", w.value))?;
        let b = evaluate_bounds(&g, t, None).unwrap();
        let margin = compare_count_to_bound(&w, b.blakley_roy.log().unwrap()).log_margin;
        ensure(margin.abs() <= LOG_TOL, || format!("{name}: margin {margin}"))?;
    }
    Ok(format!("{n_inst} suite instances; K4 t=3 108 and C5 t=2 20 tight"))
}

fn ac6_key_lemma() -> Check {
    let instances = suite();
    ensure(instances.len() >= 20, || format!("only {} instances", instances.len()))?;
    let mut min_slack: Option<BigRational> = None;
    for (gn, g, tn, tree) in &instances {
        let tab = g_table_exact(g, &bfs(tree), MeasureKind::PWeight, CAP).unwrap();
        ensure(tab.rows.len() == tree.t() + 1, || format!("{gn}/{tn}: rows"))?;
        let s = tab.min_slack(g);
        ensure(!s.is_negative(), || format!("{gn}/{tn}: slack {s}"))?;
        min_slack = Some(min_slack.map_or(s.clone(), |m| m.min(s)));
    }
    let k4 = complete(4).unwrap();
    let tab = g_table_exact(&k4, &bfs(&Tree::path(3).unwrap()), MeasureKind::PWeight, CAP).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    ensure(tab.rows.iter().flatten().all(|x| *x == half), || "K4/P3 entries not all 1/2".into())?;
    ensure((0..4).all(|v| GTable::degree_share(&k4, v) == quarter), || "K4 share not 1/4".into())?;
    Ok(format!("{} instances, min slack {}, K4/P3 all 1/2 vs 1/4", instances.len(), min_slack.unwrap()))
}

fn ac7_pprime_equality() -> Check {
    let g = complete(4).unwrap().without_edge(0, 1).unwrap();
    let tab = g_table_exact(&g, &bfs(&Tree::path(2).unwrap()), MeasureKind::PPrime, CAP).unwrap();
    ensure(tab.equals_degree_share(&g), || "K4-e/P2 table differs from d(v)/nd".into())?;
    let mut checked = 0;
    for seed in 0..12u64 {
        let g = random_min_degree(5 + seed as usize % 3, 0.5, 1, 200 + seed, 10_000).unwrap();
        let tree = random_tree(1 + seed as usize % 3, seed);
        let tab = g_table_exact(&g, &bfs(&tree), MeasureKind::PPrime, CAP).unwrap();
        ensure(tab.equals_degree_share(&g), || format!("seed {seed}: table differs"))?;
        checked += 1;
    }
    Ok(format!("K4-e/P2 exact, plus {checked} random instances"))
}

fn ac8_measure_identities() -> Check {
    let mut copies = 0u64;
    let instances = suite();
    for (gn, g, tn, tree) in &instances {
        let r = check_identities(g, tree, &bfs(tree), CAP).unwrap();
        ensure(r.total_p_measure.is_one(), || format!("{gn}/{tn}: sum P = {}", r.total_p_measure))?;
        ensure(r.measure_above_weight == 0, || format!("{gn}/{tn}: P > p on {} copies", r.measure_above_weight))?;
        ensure(r.reversal_failures == 0, || format!("{gn}/{tn}: reversal fails on {}", r.reversal_failures))?;
        ensure(r.product_form_failures == 0, || format!("{gn}/{tn}: product form fails on {}", r.product_form_failures))?;
        copies += u64::try_from(&r.copies).unwrap();
    }
    Ok(format!("{} instances, {copies} copies", instances.len()))
}

fn sample_frequencies(g: &Graph, l: &GoodLabeling, samples: usize, seed: u64) -> BTreeMap<Vec<usize>, u64> {
    let sampler = EmbeddingSampler::new(g, l).unwrap();
    let mut rng = seeded_rng(seed);
    let mut freq = BTreeMap::new();
    for _ in 0..samples {
        *freq.entry(sampler.sample(&mut rng).unwrap().0).or_insert(0) += 1;
    }
    freq
}

fn ac9_sampler_law() -> Check {
    let g = complete(4).unwrap();
    let l = bfs(&Tree::path(3).unwrap());
    let samples = 24_000usize;
    let freq = sample_frequencies(&g, &l, samples, 2024);
    ensure(freq.len() == 24, || format!("{} distinct copies sampled", freq.len()))?;
    let p = 1.0 / 24.0;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    let mut worst: f64 = 0.0;
    for hits in freq.values() {
        let z = ((*hits as f64 / samples as f64) - p).abs() / se;
        worst = worst.max(z);
    }
    ensure(worst <= 5.0, || format!("max deviation {worst:.2} SE"))?;
    ensure(freq == sample_frequencies(&g, &l, samples, 2024), || "not deterministic".into())?;
    Ok(format!("24 copies, max deviation {worst:.2} SE, reproducible"))
}

fn ac10_jensen_specialization() -> Check {
    let mut valid = 0;
    let mut p3 = 0;
    let mut seed = 0u64;
    let mut jensen_violations = Vec::new();
    let mut cor2_count_ok = true;
    while valid < 50 {
        let n = 6 + (seed as usize % 5);
        let t = 2 + (seed as usize % 3);
        seed += 1;
        let Ok(g) = random_min_degree(n, 0.6, t, seed, 10_000) else { continue };
        let b = evaluate_bounds(&g, t, Some(t)).unwrap();
        let (thm1, cor2, cor3) = (b.thm1.log().unwrap(), b.cor2.log().unwrap(), b.cor3.log().unwrap());
        if thm1 < cor2 - LOG_TOL {
            for tree in [Tree::path(t).unwrap(), Tree::star(t).unwrap()] {
                let c = count_copies(&g, &tree, CAP).unwrap();
                cor2_count_ok &= compare_count_to_bound(&c, cor2).holds;
            }
            jensen_violations.push(format!("n={n} t={t} seed={seed} min_deg={} ({thm1:.6} < {cor2:.6})", g.min_degree()));
        }
        ensure((cor3 - thm1).abs() <= LOG_TOL, || format!("seed {seed}: cor3 {cor3} != thm1 {thm1}"))?;
        if g.is_regular() {
            ensure((thm1 - cor2).abs() <= LOG_TOL, || format!("seed {seed}: regular but thm1 != cor2"))?;
        }
        if t == 3 {
            let eq2 = b.p3_eq2.log().unwrap();
            ensure((eq2 - thm1).abs() <= LOG_TOL, || format!("seed {seed}: eq2 {eq2} != thm1 {thm1}"))?;
            p3 += 1;
        }
        valid += 1;
    }
    ensure(jensen_violations.is_empty(), || {
        format!(
            "logThm1 < logCor2 on {} of {valid} instances, first: {}; path/star counts >= Cor2 there: {cor2_count_ok}; specialization and Cor3(k=t) hold",
            jensen_violations.len(),
            jensen_violations[0]
        )
    })?;
    Ok(format!("{valid} instances ({p3} with t=3)"))
}

fn ac11_chain_report() -> Check {
    let g = complete(4).unwrap();
    let tree = Tree::path(3).unwrap();
    let r = verify_chain(&g, &tree, &bfs(&tree), CAP).unwrap();
    ensure(r.omega_count == 24u32.into(), || format!("|Ω| = {}", r.omega_count))?;
    for (what, got, want) in [("exp H(P)", r.entropy_p(), 24.0), ("Π p^-p", r.product_p(), 144.0), ("thm1", r.thm1(), 12.0)] {
        ensure((got - want).abs() <= 1e-9 * want, || format!("{what} = {got}, want {want}"))?;
    }
    let links = r.links.as_array();
    ensure(links == [true, false, true, true], || format!("links {links:?}"))?;
    let instances = suite();
    for (gn, g, tn, tree) in &instances {
        let r = verify_chain(g, tree, &bfs(tree), CAP).unwrap();
        ensure(r.links.omega_ge_thm1, || format!("{gn}/{tn}: final link false"))?;
    }
    Ok(format!("K4/P3 24, 24, 144, 12 with links {links:?}; final link on {} instances", instances.len()))
}

fn ac12_conjecture_scan() -> Check {
    let mut clique_rows = 0;
    for n in [4, 6, 8, 10, 12, 15] {
        let scan = conjecture_scan(&ConjectureConfig {
            family: ScanFamily::Cliques,
            n_min: n,
            n_max: n,
            t: 3,
            trials: 1,
            seed: 0,
            min_degree: 3,
            trees: vec![],
            work_cap: CAP.0,
        })
        .map_err(|e| e.to_string())?;
        for row in &scan.rows {
            ensure(row.verdict == Verdict::Holds, || format!("{}: {:?}", row.instance, row.verdict))?;
            let m = row.log_margin.unwrap();
            ensure(m.abs() <= LOG_TOL, || format!("{}: margin {m}", row.instance))?;
            clique_rows += 1;
        }
    }
    let scan = conjecture_scan(&ConjectureConfig {
        family: ScanFamily::Random { p: 0.6 },
        n_min: 10,
        n_max: 10,
        t: 3,
        trials: 50,
        seed: 7,
        min_degree: 4,
        trees: vec![],
        work_cap: CAP.0,
    })
    .map_err(|e| e.to_string())?;
    let graphs: std::collections::BTreeSet<_> = scan.rows.iter().map(|r| r.instance.clone()).collect();
    ensure(graphs.len() == 50, || format!("{} graphs scanned", graphs.len()))?;
    ensure(scan.rows.iter().all(|r| r.error.is_none()), || "scan row errored".into())?;
    ensure(scan.rows.iter().all(|r| r.log_margin.is_some()), || "missing margin".into())?;
    Ok(format!(
        "{clique_rows} clique rows tight; random scan: {} rows, {} violations, min margin {:.4}",
        scan.rows.len(),
        scan.violations,
        scan.min_log_margin.unwrap()
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("AC1  clique sharpness", ac1_clique_sharpness),
        ("AC2  theorem-1 equality cases", ac2_thm1_equality),
        ("AC3  theorem-1 strict cases", ac3_thm1_strict),
        ("AC4  homomorphism bound and DP oracle", ac4_hom_eq1),
        ("AC5  walk bound", ac5_blakley_roy),
        ("AC6  key lemma on p g-tables", ac6_key_lemma),
        ("AC7  P' g-table equality", ac7_pprime_equality),
        ("AC8  measure identities", ac8_measure_identities),
        ("AC9  sampler law", ac9_sampler_law),
        ("AC10 jensen and specialization", ac10_jensen_specialization),
        ("AC11 chain report", ac11_chain_report),
        ("AC12 conjecture scan", ac12_conjecture_scan),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run);
        eprintln!("  {name} took {:.2?}", start.elapsed());
        match outcome {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    println!("{} of {} acceptance criteria passed", 12 - failed, 12);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
