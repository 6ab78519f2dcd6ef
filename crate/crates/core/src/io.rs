//! Edge-list text format shared by graphs and trees.
//!
//! ```text
//! # optional comments
//! n m
//! u v
//! ...
//! ```
//!
//! Graph vertices are `0..n`, tree vertices `1..=n`. Blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

struct EdgeList {
    n: usize,
    edges: Vec<(usize, usize)>,
    lines: Vec<usize>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pair(line: usize, s: &str) -> Result<(usize, usize)> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::parse(line, "expected two integers"))?;
        tok.parse().map_err(|_| Error::parse(line, format!("not a nonnegative integer: {tok:?}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::parse(line, "trailing tokens"));
    }
    Ok(pair)
}

fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing \"n m\" header"))?;
    let (n, m) = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut at = Vec::with_capacity(m);
    let mut last = hline;
    for (line, s) in lines {
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than the declared {m} edges")));
        }
        edges.push(parse_pair(line, s)?);
        at.push(line);
        last = line;
    }
    if edges.len() < m {
        return Err(Error::parse(last, format!("declared {m} edges, found {}", edges.len())));
    }
    Ok(EdgeList { n, edges, lines: at })
}

/// Parses a 0-indexed graph; every rejected edge is reported with its line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let list = parse_edge_list(text)?;
    let n = list.n;
    let mut seen = std::collections::HashSet::with_capacity(list.edges.len());
    for (&(u, v), &line) in list.edges.iter().zip(&list.lines) {
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("vertex index out of range 0..{n}")));
        }
        if u == v {
            return Err(Error::parse(line, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge ({u}, {v})")));
        }
    }
    Graph::from_edges(n, list.edges)
}

/// Parses a 1-indexed tree with `t + 1` vertices and `t` edges.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let list = parse_edge_list(text)?;
    let n = list.n;
    // union-find to pinpoint the edge closing a cycle
    let mut root: Vec<usize> = (0..=n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for (&(a, b), &line) in list.edges.iter().zip(&list.lines) {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::parse(line, format!("vertex outside 1..={n}")));
        }
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra == rb {
            return Err(Error::parse(line, format!("cyclic: edge ({a}, {b}) closes a cycle")));
        }
        root[ra] = rb;
    }
    if n < 2 || list.edges.len() + 1 != n {
        return Err(Error::parse(
            list.lines.last().copied().unwrap_or(1),
            format!(
                "wrong edge count: a tree on {n} vertices needs {} edges, found {} (disconnected)",
                n.saturating_sub(1),
                list.edges.len()
            ),
        ));
    }
    Tree::from_edges(n, list.edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_tree(tree: &Tree) -> String {
    let edges = tree.edges();
    let mut out = format!("{} {}\n", tree.vertex_count(), edges.len());
    for (a, b) in edges {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k4_and_c5() {
        let k4 = parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        assert_eq!(k4.n(), 4);
        assert!(k4.degrees().all(|d| d == 3));
        let c5 = parse_graph("# five-cycle\n5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
        assert!(c5.degrees().all(|d| d == 2));
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        assert_eq!(parse_graph("2 1\n0 0"), Err(Error::parse(2, "self-loop at vertex 0")));
        assert!(matches!(parse_graph("3 2\n0 1\n1 0"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3 1\n0 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 1\n1 2"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parses_trees() {
        let p3 = parse_tree("4 3\n1 2\n2 3\n3 4").unwrap();
        assert_eq!(p3, Tree::path(3).unwrap());
        let s3 = parse_tree("4 3\n1 2\n1 3\n1 4").unwrap();
        assert_eq!(s3, Tree::star(3).unwrap());
        let err = parse_tree("3 3\n1 2\n2 3\n3 1").unwrap_err();
        assert!(err.to_string().contains("cyclic"), "{err}");
        let err = parse_tree("4 2\n1 2\n3 4").unwrap_err();
        assert!(err.to_string().contains("wrong edge count"), "{err}");
        assert!(parse_tree("3 2\n0 1\n1 2").is_err());
    }

    #[test]
    fn serializer_sorts_edges() {
        let g = Graph::from_edges(3, [(2, 1), (0, 2)]).unwrap();
        assert_eq!(write_graph(&g), "3 2\n0 2\n1 2\n");
        assert_eq!(write_tree(&Tree::star(2).unwrap()), "3 2\n1 2\n1 3\n");
    }
}
