//! Exact counters for labeled tree copies, tree homomorphisms and walks.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{ln_biguint, serialize_biguint};
use crate::tree::{GoodLabeling, Tree};

/// Upper limit on the number of search nodes an exact enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkCap(pub u64);

impl WorkCap {
    pub const DEFAULT: WorkCap = WorkCap(100_000_000);
}

impl Default for WorkCap {
    fn default() -> Self {
        WorkCap::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Enumeration,
    Dp,
    Formula,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_biguint")]
    pub value: BigUint,
    pub method: CountMethod,
}

impl CountResult {
    fn new(value: impl Into<BigUint>, method: CountMethod) -> Self {
        CountResult { value: value.into(), method }
    }

    pub fn ln(&self) -> f64 {
        ln_biguint(&self.value)
    }
}

/// Backtracking walk over all embeddings driven by a good labeling.
///
/// `injective = false` drops the used-vertex filter and so enumerates
/// homomorphisms instead of copies.
pub(crate) struct Embedder<'a> {
    graph: &'a Graph,
    labeling: &'a GoodLabeling,
    injective: bool,
    cap: u64,
    nodes: u64,
    used: Vec<bool>,
    omega: Vec<usize>,
}

impl<'a> Embedder<'a> {
    pub(crate) fn new(graph: &'a Graph, labeling: &'a GoodLabeling, injective: bool, cap: WorkCap) -> Self {
        Embedder {
            graph,
            labeling,
            injective,
            cap: cap.0,
            nodes: 0,
            used: vec![false; graph.n()],
            omega: Vec::with_capacity(labeling.len()),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::WorkCapExceeded { cap: self.cap });
        }
        Ok(())
    }

    /// Calls `visit` on every embedding, positions in labeling order.
    pub(crate) fn for_each(&mut self, visit: &mut dyn FnMut(&[usize])) -> Result<()> {
        for v in 0..self.graph.n() {
            self.push(v);
            let r = self.extend(visit);
            self.pop();
            r?;
        }
        Ok(())
    }

    fn push(&mut self, v: usize) {
        self.used[v] = true;
        self.omega.push(v);
    }

    fn pop(&mut self) {
        let v = self.omega.pop().expect("non-empty partial embedding");
        self.used[v] = false;
    }

    fn extend(&mut self, visit: &mut dyn FnMut(&[usize])) -> Result<()> {
        self.tick()?;
        let pos = self.omega.len();
        if pos == self.labeling.len() {
            visit(&self.omega);
            return Ok(());
        }
        let anchor = self.omega[self.labeling.parent_pos(pos)];
        let graph = self.graph;
        for &w in graph.neighbors(anchor) {
            if self.injective && self.used[w] {
                continue;
            }
            self.push(w);
            let r = self.extend(visit);
            self.pop();
            r?;
        }
        Ok(())
    }

    /// Counts injective embeddings; the final position is tallied without
    /// descending into it.
    pub(crate) fn count(&mut self) -> Result<u128> {
        debug_assert!(self.injective);
        let mut total = 0u128;
        for v in 0..self.graph.n() {
            self.push(v);
            let r = self.count_from();
            self.pop();
            total += r?;
        }
        Ok(total)
    }

    fn count_from(&mut self) -> Result<u128> {
        self.tick()?;
        let pos = self.omega.len();
        let anchor = self.omega[self.labeling.parent_pos(pos)];
        let graph = self.graph;
        if pos + 1 == self.labeling.len() {
            let free = graph.neighbors(anchor).iter().filter(|&&w| !self.used[w]).count();
            return Ok(free as u128);
        }
        let mut total = 0u128;
        for &w in graph.neighbors(anchor) {
            if self.used[w] {
                continue;
            }
            self.push(w);
            let r = self.count_from();
            self.pop();
            total += r?;
        }
        Ok(total)
    }
}

/// Number of injections `φ: V(T) → V(G)` mapping tree edges to graph edges.
pub fn count_copies(graph: &Graph, tree: &Tree, cap: WorkCap) -> Result<CountResult> {
    let labeling = GoodLabeling::breadth_first(tree, None)?;
    count_copies_with(graph, &labeling, cap)
}

/// [`count_copies`] driven by an explicit good labeling.
pub fn count_copies_with(graph: &Graph, labeling: &GoodLabeling, cap: WorkCap) -> Result<CountResult> {
    let total = Embedder::new(graph, labeling, true, cap).count()?;
    Ok(CountResult::new(total, CountMethod::Enumeration))
}

/// `Σ_v t!·C(d(v), t)`, the number of labeled copies of the star `S_t`.
pub fn count_star_formula(graph: &Graph, t: usize) -> Result<CountResult> {
    if t < 1 {
        return Err(Error::Precondition("star needs t >= 1".into()));
    }
    let t_fact: BigUint = (1..=t).map(BigUint::from).product();
    let total: BigUint = graph
        .degrees()
        .map(|d| binomial(BigUint::from(d), BigUint::from(t)))
        .sum();
    Ok(CountResult::new(total * t_fact, CountMethod::Formula))
}

/// Tree homomorphisms by message passing from the root `x_1` of the default
/// good labeling.
pub fn count_homomorphisms(graph: &Graph, tree: &Tree) -> Result<CountResult> {
    let labeling = GoodLabeling::breadth_first(tree, None)?;
    count_homomorphisms_rooted(graph, tree, labeling.order()[0])
}

/// Homomorphism DP rooted at an arbitrary (1-based) tree vertex.
pub fn count_homomorphisms_rooted(graph: &Graph, tree: &Tree, root: usize) -> Result<CountResult> {
    if root == 0 || root > tree.vertex_count() {
        return Err(Error::Precondition(format!("root {root} not a tree vertex")));
    }
    let n = graph.n();
    let mut order = vec![root - 1];
    let mut parent = vec![usize::MAX; tree.vertex_count()];
    parent[root - 1] = root - 1;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &y in tree.neighbors0(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
        i += 1;
    }
    let mut h: Vec<Vec<BigUint>> = vec![vec![BigUint::one(); n]; tree.vertex_count()];
    for &x in order.iter().skip(1).rev() {
        let msg: Vec<BigUint> = (0..n)
            .map(|v| graph.neighbors(v).iter().map(|&u| &h[x][u]).sum())
            .collect();
        let p = parent[x];
        for (hv, m) in h[p].iter_mut().zip(msg) {
            *hv *= m;
        }
    }
    let total: BigUint = h[root - 1].iter().sum();
    Ok(CountResult::new(total, CountMethod::Dp))
}

/// Checks all `n^{t+1}` maps; refuses when that exceeds the cap.
pub fn count_homomorphisms_bruteforce(graph: &Graph, tree: &Tree, cap: WorkCap) -> Result<CountResult> {
    let n = graph.n();
    let k = tree.vertex_count();
    let space = (n as u128).checked_pow(k as u32);
    match space {
        Some(s) if s <= cap.0 as u128 => {}
        _ => return Err(Error::WorkCapExceeded { cap: cap.0 }),
    }
    if n == 0 {
        return Ok(CountResult::new(0u32, CountMethod::Brute));
    }
    let edges: Vec<(usize, usize)> = tree.edges().into_iter().map(|(a, b)| (a - 1, b - 1)).collect();
    let mut phi = vec![0usize; k];
    let mut total = 0u64;
    loop {
        if edges.iter().all(|&(a, b)| graph.has_edge(phi[a], phi[b])) {
            total += 1;
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(CountResult::new(total, CountMethod::Brute));
            }
            phi[i] += 1;
            if phi[i] < n {
                break;
            }
            phi[i] = 0;
            i += 1;
        }
    }
}

/// Number of walks `v_0 .. v_t` with consecutive vertices adjacent.
pub fn count_walks(graph: &Graph, t: usize) -> CountResult {
    let mut w = vec![BigUint::one(); graph.n()];
    for _ in 0..t {
        w = (0..graph.n())
            .map(|v| graph.neighbors(v).iter().map(|&u| &w[u]).sum())
            .collect();
    }
    CountResult::new(w.into_iter().sum::<BigUint>(), CountMethod::Dp)
}

/// Fraction of length-`t` walks that are paths.
pub fn path_walk_ratio(graph: &Graph, t: usize, cap: WorkCap) -> Result<f64> {
    let walks = count_walks(graph, t);
    if walks.value.is_zero() {
        return Err(Error::Precondition(format!("no walks of length {t}")));
    }
    if t == 0 {
        return Ok(1.0);
    }
    let paths = count_copies(graph, &Tree::path(t)?, cap)?;
    if paths.value.is_zero() {
        return Ok(0.0);
    }
    match (paths.value.to_f64(), walks.value.to_f64()) {
        (Some(p), Some(w)) if p.is_finite() && w.is_finite() => Ok(p / w),
        _ => Ok((paths.ln() - walks.ln()).exp()),
    }
}

/// Largest degree of a subgraph induced on the image of some copy of `tree`.
pub fn max_induced_copy_degree(graph: &Graph, tree: &Tree, cap: WorkCap) -> Result<usize> {
    let labeling = GoodLabeling::breadth_first(tree, None)?;
    let mut best: Option<usize> = None;
    Embedder::new(graph, &labeling, true, cap).for_each(&mut |omega| {
        let deg = omega
            .iter()
            .map(|&u| omega.iter().filter(|&&w| graph.has_edge(u, w)).count())
            .max()
            .unwrap_or(0);
        best = Some(best.map_or(deg, |b| b.max(deg)));
    })?;
    best.ok_or_else(|| Error::Precondition("graph contains no copy of the tree".into()))
}
