//! Deterministic graph families used by the tests and the harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_RETRY_CAP: u32 = 10_000;

/// `c` vertex-disjoint copies of `K_q`.
pub fn disjoint_cliques(c: usize, q: usize) -> Result<Graph> {
    if c < 1 || q < 2 {
        return Err(Error::Precondition(format!("disjoint cliques need c >= 1, q >= 2 (got {c}, {q})")));
    }
    let edges = (0..c).flat_map(move |k| {
        let base = k * q;
        (0..q).flat_map(move |i| (i + 1..q).map(move |j| (base + i, base + j)))
    });
    Graph::from_edges(c * q, edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    disjoint_cliques(1, n)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Precondition(format!("cycle needs n >= 3 (got {n})")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a < 1 || b < 1 {
        return Err(Error::Precondition(format!("K_(a,b) needs a, b >= 1 (got {a}, {b})")));
    }
    Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen graph is simple")
}

/// Binomial random graph `G(n, p)` conditioned on minimum degree `>= min_degree`.
///
/// Attempts are drawn from a ChaCha8 stream seeded with `seed`; each attempt
/// visits the pairs `(u, v)`, `u < v`, in lexicographic order and keeps the
/// edge with probability `p`.
pub fn random_min_degree(
    n: usize,
    p: f64,
    min_degree: usize,
    seed: u64,
    retry_cap: u32,
) -> Result<Graph> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Precondition(format!("edge probability must lie in (0, 1], got {p}")));
    }
    if min_degree >= n.max(1) {
        return Err(Error::Precondition(format!("minimum degree {min_degree} impossible on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retry_cap {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges)?;
        if g.min_degree() >= min_degree {
            return Ok(g);
        }
    }
    Err(Error::RetryCapExceeded {
        attempts: retry_cap,
        msg: format!("no G({n}, {p}) sample reached minimum degree {min_degree}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_graph, write_graph};

    #[test]
    fn clique_family_shapes() {
        let g = disjoint_cliques(3, 5).unwrap();
        assert_eq!((g.n(), g.edge_count()), (15, 30));
        assert!(g.degrees().all(|d| d == 4));
        assert_eq!(disjoint_cliques(1, 4).unwrap(), complete(4).unwrap());
        let m = disjoint_cliques(2, 2).unwrap();
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert!(disjoint_cliques(0, 3).is_err());
        assert!(disjoint_cliques(2, 1).is_err());
    }

    #[test]
    fn cycles_and_bipartite() {
        assert_eq!(cycle(3).unwrap(), complete(3).unwrap());
        assert!(cycle(5).unwrap().degrees().all(|d| d == 2));
        let k23 = complete_bipartite(2, 3).unwrap();
        assert_eq!(k23.degrees().collect::<Vec<_>>(), vec![3, 3, 2, 2, 2]);
        assert_eq!(k23.edge_count(), 6);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn petersen_is_cubic_girth_five() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert!(g.degrees().all(|d| d == 3));
        for (u, v) in g.edges() {
            for &w in g.neighbors(u) {
                assert!(!g.has_edge(v, w), "triangle {u} {v} {w}");
            }
        }
    }

    #[test]
    fn random_generator_is_seeded() {
        let k6 = random_min_degree(6, 1.0, 5, 99, 1).unwrap();
        assert_eq!(k6, complete(6).unwrap());
        let a = random_min_degree(10, 0.5, 3, 7, DEFAULT_RETRY_CAP).unwrap();
        let b = random_min_degree(10, 0.5, 3, 7, DEFAULT_RETRY_CAP).unwrap();
        assert_eq!(a, b);
        assert!(a.min_degree() >= 3);
        assert!(matches!(
            random_min_degree(4, 0.1, 3, 1, 10),
            Err(Error::RetryCapExceeded { attempts: 10, .. })
        ));
        assert!(random_min_degree(4, 0.0, 1, 1, 10).is_err());
        assert!(random_min_degree(4, 0.5, 4, 1, 10).is_err());
    }

    #[test]
    fn generators_round_trip_through_text() {
        for g in [disjoint_cliques(2, 4).unwrap(), cycle(7).unwrap(), complete_bipartite(3, 2).unwrap(), petersen()] {
            assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }
    }
}
