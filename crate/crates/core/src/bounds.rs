//! Closed-form lower bounds on tree counts, evaluated in natural-log space.
//!
//! Every bound is a product with fractional exponents, so it is computed as a
//! sum of `exponent · ln(base)` terms. A bound whose hypothesis fails is
//! reported as [`Bound::Inapplicable`] with the reason instead of a value.

use num_traits::Zero;
use serde::Serialize;

use crate::counting::CountResult;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{serialize_log, LOG_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Bound {
    Log(#[serde(serialize_with = "serialize_log")] f64),
    Inapplicable(String),
}

impl Bound {
    pub fn log(&self) -> Option<f64> {
        match self {
            Bound::Log(x) => Some(*x),
            Bound::Inapplicable(_) => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Bound::Log(_))
    }

    /// `exp` of the log value.
    pub fn value(&self) -> Option<f64> {
        self.log().map(f64::exp)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub t: usize,
    pub k: Option<usize>,
    /// `nd · Π_v (d(v)−t+1)^{(t−1)d(v)/(nd)}`, labeled copies.
    pub thm1: Bound,
    /// `nd · (d−t+1)^{t−1}`, labeled copies via average degree.
    pub cor2: Bound,
    /// `2|E| · Π_v d(v)^{(t−1)d(v)/(2|E|)}`, homomorphisms.
    pub hom_eq1: Bound,
    /// `2|E| · Π_v (d(v)−2)^{2d(v)/(2|E|)}`, copies of the 3-edge path.
    pub p3_eq2: Bound,
    /// `n · d^t`, walks.
    pub blakley_roy: Bound,
    /// `2|E| · Π_v (d(v)−k+1)^{(t−1)d(v)/(2|E|)}`, copies when every copy
    /// induces maximum degree at most `k`.
    pub cor3: Bound,
    /// `n · d(d−1)⋯(d−t+1)`, the conjectured bound.
    pub falling_factorial: Bound,
}

/// `ln(2|E|) + Σ_v (t−1)·d(v)/(2|E|) · ln(d(v) − shift)`, or the first vertex
/// whose base is not positive.
fn degree_product(graph: &Graph, t: usize, shift: usize) -> std::result::Result<f64, usize> {
    let two_e = graph.degree_sum() as f64;
    let mut acc = two_e.ln();
    for (v, d) in graph.degrees().enumerate() {
        if d == 0 {
            // exponent (t−1)·0/(2|E|) vanishes
            continue;
        }
        if d <= shift {
            return Err(v);
        }
        let base = (d - shift) as f64;
        acc += (t - 1) as f64 * d as f64 / two_e * base.ln();
    }
    Ok(acc)
}

pub fn evaluate_bounds(graph: &Graph, t: usize, k: Option<usize>) -> Result<BoundReport> {
    if t < 1 {
        return Err(Error::Precondition("bounds need t >= 1".into()));
    }
    let n = graph.n();
    let min_deg = graph.min_degree();
    let no_edges = || Bound::Inapplicable("graph has no edges".into());
    if graph.edge_count() == 0 {
        return Ok(BoundReport {
            t,
            k,
            thm1: no_edges(),
            cor2: no_edges(),
            hom_eq1: no_edges(),
            p3_eq2: no_edges(),
            blakley_roy: no_edges(),
            cor3: no_edges(),
            falling_factorial: no_edges(),
        });
    }
    let nd = graph.degree_sum() as f64;
    let d = graph.average_degree();
    let d = *d.numer() as f64 / *d.denom() as f64;

    let min_degree_below = |need: usize| {
        Bound::Inapplicable(format!("minimum degree {min_deg} < {need}"))
    };
    let from_product = |shift: usize, exp_t: usize| match degree_product(graph, exp_t, shift) {
        Ok(x) => Bound::Log(x),
        Err(v) => Bound::Inapplicable(format!("vertex {v} has degree <= {shift}")),
    };

    let thm1 = if min_deg >= t { from_product(t - 1, t) } else { min_degree_below(t) };
    let cor2 = if min_deg >= t {
        Bound::Log(nd.ln() + (t - 1) as f64 * (d - (t - 1) as f64).ln())
    } else {
        min_degree_below(t)
    };
    let hom_eq1 = from_product(0, t);
    let p3_eq2 = if t != 3 {
        Bound::Inapplicable(format!("defined only for t = 3 (t = {t})"))
    } else if min_deg < 3 {
        min_degree_below(3)
    } else {
        from_product(2, 3)
    };
    let blakley_roy = Bound::Log((n as f64).ln() + t as f64 * d.ln());
    let cor3 = match k {
        None => Bound::Inapplicable("k not supplied".into()),
        Some(0) => Bound::Inapplicable("k must be at least 1".into()),
        Some(k) if min_deg < k => min_degree_below(k),
        Some(k) => from_product(k - 1, t),
    };
    let falling_factorial = (0..t)
        .map(|j| d - j as f64)
        .try_fold((n as f64).ln(), |acc, f| (f > 0.0).then(|| acc + f.ln()))
        .map_or_else(
            || Bound::Inapplicable(format!("factor d - j <= 0 for some j < {t} (d = {d})")),
            Bound::Log,
        );

    Ok(BoundReport { t, k, thm1, cor2, hom_eq1, p3_eq2, blakley_roy, cor3, falling_factorial })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub holds: bool,
    #[serde(serialize_with = "serialize_log")]
    pub log_margin: f64,
}

/// `ln(count) ≥ log_bound − 1e-9`; a zero count holds only for bounds `≤ 1`.
pub fn compare_count_to_bound(count: &CountResult, log_bound: f64) -> Comparison {
    let ln_count = count.ln();
    let holds = if count.value.is_zero() {
        log_bound <= LOG_TOLERANCE
    } else {
        ln_count >= log_bound - LOG_TOLERANCE
    };
    Comparison { holds, log_margin: ln_count - log_bound }
}
