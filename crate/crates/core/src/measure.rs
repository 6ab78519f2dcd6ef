//! Probability weights on tree embeddings and the oriented embedding process.
//!
//! For a good labeling `x_1..x_{t+1}` with parent map `f`, an embedding `ω`
//! gets one of three weights, all of the form `1 / (nd · Π_{i=2}^{t} c_i)`:
//!
//! * [`MeasureKind::P`]: `c_i = |N(ω_{f(i+1)}) \ {ω_1..ω_i}|`, the law of the
//!   random process that starts on a uniform directed edge and attaches each
//!   new vertex to a uniform unused neighbour of its parent's image;
//! * [`MeasureKind::PWeight`]: `c_i = d(ω_{f(i+1)}) − t + 1`, a pointwise
//!   majorant of `P` that is not normalised;
//! * [`MeasureKind::PPrime`]: `c_i = d(ω_{f(i+1)})`, the homomorphism
//!   analogue, supported on all (not necessarily injective) maps.
//!
//! Weights are exact rationals. Since each is a unit fraction, sums are
//! accumulated as denominator multisets and reduced once at the end.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::bounds::evaluate_bounds;
use crate::counting::{Embedder, WorkCap};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{big_ratio, ratio_to_string, serialize_biguint, serialize_log, serialize_ratio, LOG_TOLERANCE};
use crate::tree::{GoodLabeling, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MeasureKind {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "p")]
    PWeight,
    #[serde(rename = "Pprime")]
    PPrime,
}

impl MeasureKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "P" => Some(MeasureKind::P),
            "p" => Some(MeasureKind::PWeight),
            "Pprime" | "P'" => Some(MeasureKind::PPrime),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::P => "P",
            MeasureKind::PWeight => "p",
            MeasureKind::PPrime => "Pprime",
        }
    }

    fn injective(self) -> bool {
        !matches!(self, MeasureKind::PPrime)
    }
}

/// Images `ω_1..ω_{t+1}` of the labeled tree vertices, in labeling order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }
}

fn check_embedding(graph: &Graph, labeling: &GoodLabeling, omega: &[usize], injective: bool) -> Result<()> {
    if omega.len() != labeling.len() {
        return Err(Error::InvalidEmbedding(format!(
            "expected {} vertices, got {}",
            labeling.len(),
            omega.len()
        )));
    }
    if let Some(&v) = omega.iter().find(|&&v| v >= graph.n()) {
        return Err(Error::InvalidEmbedding(format!("vertex {v} not in graph")));
    }
    for pos in 1..omega.len() {
        let (a, b) = (omega[labeling.parent_pos(pos)], omega[pos]);
        if !graph.has_edge(a, b) {
            return Err(Error::InvalidEmbedding(format!("({a}, {b}) is not an edge")));
        }
        if injective && omega[..pos].contains(&b) {
            return Err(Error::InvalidEmbedding(format!("vertex {b} repeated")));
        }
    }
    Ok(())
}

fn require_min_degree(graph: &Graph, t: usize) -> Result<()> {
    if graph.min_degree() < t {
        return Err(Error::Precondition(format!(
            "minimum degree {} < t = {t}",
            graph.min_degree()
        )));
    }
    Ok(())
}

/// Denominator `nd · Π c_i` of the weight of `omega`, without validation.
fn denominator(graph: &Graph, labeling: &GoodLabeling, omega: &[usize], kind: MeasureKind) -> Result<u128> {
    let t = labeling.len() - 1;
    let mut den = graph.degree_sum() as u128;
    for pos in 2..=t {
        let anchor = omega[labeling.parent_pos(pos)];
        let d = graph.degree(anchor);
        let c = match kind {
            MeasureKind::P => graph.neighbors(anchor).iter().filter(|w| !omega[..pos].contains(w)).count(),
            MeasureKind::PWeight => (d + 1).saturating_sub(t),
            MeasureKind::PPrime => d,
        };
        if c == 0 {
            return Err(Error::Precondition(format!(
                "zero denominator for {} at position {}",
                kind.name(),
                pos + 1
            )));
        }
        den = den
            .checked_mul(c as u128)
            .ok_or_else(|| Error::Precondition("weight denominator overflows 128 bits".into()))?;
    }
    if den == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    Ok(den)
}

/// Exact weight of one embedding under `kind`.
pub fn weight(graph: &Graph, labeling: &GoodLabeling, omega: &Embedding, kind: MeasureKind) -> Result<BigRational> {
    check_embedding(graph, labeling, &omega.0, kind.injective())?;
    let den = denominator(graph, labeling, &omega.0, kind)?;
    Ok(big_ratio(1, den))
}

/// Sum of unit fractions `Σ 1/den`, kept as a multiset of denominators.
#[derive(Clone, Debug, Default)]
struct UnitFractionSum {
    terms: BTreeMap<u128, u64>,
}

impl UnitFractionSum {
    fn add(&mut self, den: u128) {
        *self.terms.entry(den).or_default() += 1;
    }

    fn to_ratio(&self) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&den, &mult)| {
            acc + BigRational::new(BigInt::from(mult), BigInt::from(den))
        })
    }

    /// `Σ w ln(1/w)` evaluated in double precision.
    fn entropy(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&den, &mult)| {
                let den = den.to_f64().expect("finite");
                mult as f64 / den * den.ln()
            })
            .sum()
    }
}

fn for_each_in_space(
    graph: &Graph,
    labeling: &GoodLabeling,
    kind: MeasureKind,
    cap: WorkCap,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    Embedder::new(graph, labeling, kind.injective(), cap).for_each(visit)
}

/// `Σ_ω weight(ω)` over copies (or homomorphisms for `PPrime`).
pub fn total_weight(graph: &Graph, labeling: &GoodLabeling, kind: MeasureKind, cap: WorkCap) -> Result<BigRational> {
    if kind != MeasureKind::PPrime {
        require_min_degree(graph, labeling.len() - 1)?;
    }
    let mut sum = UnitFractionSum::default();
    let mut err = None;
    for_each_in_space(graph, labeling, kind, cap, &mut |omega| {
        match denominator(graph, labeling, omega, kind) {
            Ok(den) => sum.add(den),
            Err(e) => err = err.take().or(Some(e)),
        }
    })?;
    err.map_or(Ok(sum.to_ratio()), Err)
}

/// Aggregated weights `g[i][v] = Σ_{ω : ω_i = v} weight(ω)`, rows `i = 1..t+1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GTable {
    pub kind: MeasureKind,
    /// Number of Monte Carlo samples; `None` for an exact table.
    pub samples: Option<u64>,
    #[serde(serialize_with = "serialize_rows")]
    pub rows: Vec<Vec<BigRational>>,
}

fn serialize_rows<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ratio_to_string).collect()).collect();
    strings.serialize(s)
}

impl GTable {
    /// Entry `g_i(v)` with 1-based `i`.
    pub fn get(&self, i: usize, v: usize) -> &BigRational {
        &self.rows[i - 1][v]
    }

    /// `d(v) / (nd)`.
    pub fn degree_share(graph: &Graph, v: usize) -> BigRational {
        big_ratio(graph.degree(v), graph.degree_sum())
    }

    /// `min_{i,v} (g_i(v) − d(v)/(nd))`.
    pub fn min_slack(&self, graph: &Graph) -> BigRational {
        self.rows
            .iter()
            .flat_map(|row| row.iter().enumerate().map(|(v, g)| g - GTable::degree_share(graph, v)))
            .min()
            .expect("non-empty table")
    }

    /// Every entry equals `d(v)/(nd)` exactly.
    pub fn equals_degree_share(&self, graph: &Graph) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().enumerate().all(|(v, g)| *g == GTable::degree_share(graph, v)))
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.rows.iter().map(|r| r.iter().fold(BigRational::zero(), |a, b| a + b)).collect()
    }
}

pub fn g_table_exact(graph: &Graph, labeling: &GoodLabeling, kind: MeasureKind, cap: WorkCap) -> Result<GTable> {
    if kind != MeasureKind::PPrime {
        require_min_degree(graph, labeling.len() - 1)?;
    }
    let mut cells = vec![vec![UnitFractionSum::default(); graph.n()]; labeling.len()];
    let mut err = None;
    for_each_in_space(graph, labeling, kind, cap, &mut |omega| match denominator(graph, labeling, omega, kind) {
        Ok(den) => {
            for (i, &v) in omega.iter().enumerate() {
                cells[i][v].add(den);
            }
        }
        Err(e) => err = err.take().or(Some(e)),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let rows = cells.iter().map(|r| r.iter().map(UnitFractionSum::to_ratio).collect()).collect();
    Ok(GTable { kind, samples: None, rows })
}

/// The oriented random embedding process.
///
/// A uniform directed edge `(ω_1, ω_2)` is drawn first; each later `ω_{i+1}`
/// is uniform over the sorted list `N(ω_{f(i+1)}) \ {ω_1..ω_i}`.
pub struct EmbeddingSampler<'a> {
    graph: &'a Graph,
    labeling: &'a GoodLabeling,
    /// `ends[v] = Σ_{u ≤ v} d(u)`.
    ends: Vec<usize>,
}

impl<'a> EmbeddingSampler<'a> {
    pub fn new(graph: &'a Graph, labeling: &'a GoodLabeling) -> Result<Self> {
        require_min_degree(graph, labeling.len() - 1)?;
        if graph.edge_count() == 0 {
            return Err(Error::Precondition("graph has no edges".into()));
        }
        let ends = graph
            .degrees()
            .scan(0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        Ok(EmbeddingSampler { graph, labeling, ends })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Embedding> {
        let r = rng.random_range(0..self.graph.degree_sum());
        let v = self.ends.partition_point(|&e| e <= r);
        let first = self.ends[v] - self.graph.degree(v);
        let mut omega = Vec::with_capacity(self.labeling.len());
        omega.push(v);
        omega.push(self.graph.neighbors(v)[r - first]);
        let mut candidates = Vec::new();
        for pos in 2..self.labeling.len() {
            let anchor = omega[self.labeling.parent_pos(pos)];
            candidates.clear();
            candidates.extend(self.graph.neighbors(anchor).iter().copied().filter(|w| !omega.contains(w)));
            if candidates.is_empty() {
                return Err(Error::Precondition(format!("no unused neighbour of vertex {anchor}")));
            }
            omega.push(candidates[rng.random_range(0..candidates.len())]);
        }
        Ok(Embedding(omega))
    }
}

/// One draw of the oriented embedding process.
pub fn sample_embedding<R: Rng + ?Sized>(graph: &Graph, labeling: &GoodLabeling, rng: &mut R) -> Result<Embedding> {
    EmbeddingSampler::new(graph, labeling)?.sample(rng)
}

/// Seeded generator used by every sampling entry point.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Empirical `P(ω_i = v)` over `samples` draws; entries are exact frequencies.
pub fn g_table_monte_carlo(graph: &Graph, labeling: &GoodLabeling, samples: u64, seed: u64) -> Result<GTable> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample required".into()));
    }
    let sampler = EmbeddingSampler::new(graph, labeling)?;
    let mut rng = seeded_rng(seed);
    let mut hits = vec![vec![0u64; graph.n()]; labeling.len()];
    for _ in 0..samples {
        let omega = sampler.sample(&mut rng)?;
        for (i, &v) in omega.0.iter().enumerate() {
            hits[i][v] += 1;
        }
    }
    let rows = hits.iter().map(|r| r.iter().map(|&h| big_ratio(h, samples)).collect()).collect();
    Ok(GTable { kind: MeasureKind::P, samples: Some(samples), rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReversalCheck {
    /// The reversed good labeling, as 1-based tree vertices.
    pub labeling: Vec<usize>,
    /// The same copy listed in the reversed order, `z_1 = ω_{t+1}`, `z_{t+1} = ω_1`.
    pub z: Embedding,
    #[serde(serialize_with = "serialize_ratio")]
    pub p_omega: BigRational,
    #[serde(serialize_with = "serialize_ratio")]
    pub p_z: BigRational,
    pub equal: bool,
}

/// Good labeling that starts at `x_{t+1}` and ends at `x_1`.
pub fn reversed_labeling(tree: &Tree, labeling: &GoodLabeling) -> Result<GoodLabeling> {
    let last = labeling.len() - 1;
    GoodLabeling::between(tree, labeling.vertex_at(last) + 1, labeling.vertex_at(0) + 1)
}

fn relist(labeling: &GoodLabeling, reversed: &GoodLabeling, omega: &[usize]) -> Vec<usize> {
    let pos = labeling.positions();
    (0..reversed.len()).map(|j| omega[pos[reversed.vertex_at(j)]]).collect()
}

/// Re-lists a copy in reversed order and compares the `p` weights.
pub fn reversal_check(graph: &Graph, tree: &Tree, labeling: &GoodLabeling, omega: &Embedding) -> Result<ReversalCheck> {
    require_min_degree(graph, tree.t())?;
    let reversed = reversed_labeling(tree, labeling)?;
    let p_omega = weight(graph, labeling, omega, MeasureKind::PWeight)?;
    let z = Embedding(relist(labeling, &reversed, &omega.0));
    let p_z = weight(graph, &reversed, &z, MeasureKind::PWeight)?;
    Ok(ReversalCheck { labeling: reversed.order(), z, equal: p_omega == p_z, p_omega, p_z })
}

/// `(1/(nd)) · Π_{j=2}^{t} (d(ω_j) − t + 1)^{−(d_T(x_j) − 1)}`.
fn product_form(graph: &Graph, tree: &Tree, labeling: &GoodLabeling, omega: &[usize]) -> Result<BigRational> {
    let t = tree.t();
    let mut den = BigUint::from(graph.degree_sum());
    for (j, &w) in omega.iter().enumerate().take(t).skip(1) {
        let children = tree.degree0(labeling.vertex_at(j)) - 1;
        if children == 0 {
            continue;
        }
        let base = (graph.degree(w) + 1).saturating_sub(t);
        if base == 0 {
            return Err(Error::Precondition(format!("d(ω_{}) − t + 1 <= 0", j + 1)));
        }
        den *= BigUint::from(base).pow(children as u32);
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(den)))
}

/// `p(ω)` equals its per-vertex product form.
pub fn product_form_check(graph: &Graph, tree: &Tree, labeling: &GoodLabeling, omega: &Embedding) -> Result<bool> {
    let p = weight(graph, labeling, omega, MeasureKind::PWeight)?;
    Ok(p == product_form(graph, tree, labeling, &omega.0)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLinks {
    /// `|Ω| ≥ Π P(ω)^{−P(ω)}`
    pub omega_ge_entropy: bool,
    /// `Π P(ω)^{−P(ω)} ≥ Π p(ω)^{−p(ω)}`
    pub entropy_ge_product: bool,
    /// `Π p(ω)^{−p(ω)} ≥` Theorem-1 bound
    pub product_ge_thm1: bool,
    /// `|Ω| ≥` Theorem-1 bound
    pub omega_ge_thm1: bool,
}

impl ChainLinks {
    pub fn as_array(&self) -> [bool; 4] {
        [self.omega_ge_entropy, self.entropy_ge_product, self.product_ge_thm1, self.omega_ge_thm1]
    }
}

/// Measured values along the chain `|Ω| ≥ exp H(P) ≥ Π p^{−p} = … ≥ thm1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    #[serde(serialize_with = "serialize_biguint")]
    pub omega_count: BigUint,
    /// `Σ_ω P(ω)`, exactly 1 when the enumeration is complete.
    #[serde(serialize_with = "serialize_ratio")]
    pub total_p_measure: BigRational,
    /// `Σ_ω p(ω)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub total_p_weight: BigRational,
    /// `H(P) = ln Π P(ω)^{−P(ω)}`.
    #[serde(serialize_with = "serialize_log")]
    pub log_entropy_p: f64,
    /// `ln Π p(ω)^{−p(ω)}`.
    #[serde(serialize_with = "serialize_log")]
    pub log_product_p: f64,
    #[serde(serialize_with = "serialize_log")]
    pub log_thm1: f64,
    pub links: ChainLinks,
}

impl ChainReport {
    pub fn entropy_p(&self) -> f64 {
        self.log_entropy_p.exp()
    }

    pub fn product_p(&self) -> f64 {
        self.log_product_p.exp()
    }

    pub fn thm1(&self) -> f64 {
        self.log_thm1.exp()
    }
}

pub fn verify_chain(graph: &Graph, tree: &Tree, labeling: &GoodLabeling, cap: WorkCap) -> Result<ChainReport> {
    let t = tree.t();
    require_min_degree(graph, t)?;
    let log_thm1 = evaluate_bounds(graph, t, None)?
        .thm1
        .log()
        .ok_or_else(|| Error::Precondition("Theorem-1 bound inapplicable".into()))?;
    let mut big_p = UnitFractionSum::default();
    let mut small_p = UnitFractionSum::default();
    let mut count = 0u128;
    let mut err = None;
    for_each_in_space(graph, labeling, MeasureKind::P, cap, &mut |omega| {
        count += 1;
        let dens = denominator(graph, labeling, omega, MeasureKind::P)
            .and_then(|a| Ok((a, denominator(graph, labeling, omega, MeasureKind::PWeight)?)));
        match dens {
            Ok((a, b)) => {
                big_p.add(a);
                small_p.add(b);
            }
            Err(e) => err = err.take().or(Some(e)),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let omega_count = BigUint::from(count);
    let ln_omega = crate::numeric::ln_biguint(&omega_count);
    let log_entropy_p = big_p.entropy();
    let log_product_p = small_p.entropy();
    let ge = |a: f64, b: f64| a >= b - LOG_TOLERANCE;
    let links = ChainLinks {
        omega_ge_entropy: ge(ln_omega, log_entropy_p),
        entropy_ge_product: ge(log_entropy_p, log_product_p),
        product_ge_thm1: ge(log_product_p, log_thm1),
        omega_ge_thm1: ge(ln_omega, log_thm1),
    };
    Ok(ChainReport {
        omega_count,
        total_p_measure: big_p.to_ratio(),
        total_p_weight: small_p.to_ratio(),
        log_entropy_p,
        log_product_p,
        log_thm1,
        links,
    })
}

/// Outcome of checking the pointwise identities on every copy.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    #[serde(serialize_with = "serialize_biguint")]
    pub copies: BigUint,
    #[serde(serialize_with = "serialize_ratio")]
    pub total_p_measure: BigRational,
    /// Copies with `P(ω) > p(ω)`.
    pub measure_above_weight: u64,
    /// Copies whose reversed listing has a different `p` weight.
    pub reversal_failures: u64,
    /// Copies where `p(ω)` differs from its product form.
    pub product_form_failures: u64,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.total_p_measure.is_one()
            && self.measure_above_weight == 0
            && self.reversal_failures == 0
            && self.product_form_failures == 0
    }
}

/// Checks `ΣP = 1`, `P ≤ p`, the reversal identity and the product form on
/// every copy in one enumeration pass.
pub fn check_identities(graph: &Graph, tree: &Tree, labeling: &GoodLabeling, cap: WorkCap) -> Result<IdentityReport> {
    require_min_degree(graph, tree.t())?;
    let reversed = reversed_labeling(tree, labeling)?;
    let mut total = UnitFractionSum::default();
    let mut report = IdentityReport {
        copies: BigUint::zero(),
        total_p_measure: BigRational::zero(),
        measure_above_weight: 0,
        reversal_failures: 0,
        product_form_failures: 0,
    };
    let mut copies = 0u64;
    let mut err = None;
    let mut check = |omega: &[usize]| -> Result<()> {
        copies += 1;
        let big = denominator(graph, labeling, omega, MeasureKind::P)?;
        let small = denominator(graph, labeling, omega, MeasureKind::PWeight)?;
        total.add(big);
        // 1/big <= 1/small
        if big < small {
            report.measure_above_weight += 1;
        }
        let z = relist(labeling, &reversed, omega);
        if denominator(graph, &reversed, &z, MeasureKind::PWeight)? != small {
            report.reversal_failures += 1;
        }
        if product_form(graph, tree, labeling, omega)? != big_ratio(1, small) {
            report.product_form_failures += 1;
        }
        Ok(())
    };
    for_each_in_space(graph, labeling, MeasureKind::P, cap, &mut |omega| {
        if let Err(e) = check(omega) {
            err = err.take().or(Some(e));
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    report.copies = BigUint::from(copies);
    report.total_p_measure = total.to_ratio();
    Ok(report)
}

/// Every embedding of the measure's sample space, in enumeration order.
pub fn enumerate_space(graph: &Graph, labeling: &GoodLabeling, kind: MeasureKind, cap: WorkCap) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    for_each_in_space(graph, labeling, kind, cap, &mut |omega| out.push(Embedding(omega.to_vec())))?;
    Ok(out)
}
