//! Trees and good labelings.
//!
//! Tree vertices are named `1..=t+1` in the public API (files use the same
//! names) and stored 0-based. A good labeling is an ordering `x_1, ..., x_{t+1}`
//! of the tree vertices that starts at a leaf and in which every later vertex
//! has exactly one earlier neighbour, its parent `f(j)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Builds a tree on vertices `1..=vertex_count` from 1-based edges.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count < 2 {
            return Err(Error::InvalidTree("a tree needs at least one edge".into()));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        let mut m = 0;
        for (a, b) in edges {
            if a == 0 || b == 0 || a > vertex_count || b > vertex_count {
                return Err(Error::InvalidTree(format!(
                    "edge ({a}, {b}) outside vertex range 1..={vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at vertex {a}")));
            }
            adj[a - 1].push(b - 1);
            adj[b - 1].push(a - 1);
            m += 1;
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidTree("cyclic: duplicate edge".into()));
            }
        }
        let reached = reachable_from(&adj, 0);
        if m >= vertex_count {
            return Err(Error::InvalidTree(format!(
                "cyclic: {m} edges on {vertex_count} vertices"
            )));
        }
        if reached < vertex_count {
            return Err(Error::InvalidTree(format!(
                "disconnected: {reached} of {vertex_count} vertices reachable"
            )));
        }
        Ok(Tree { adj })
    }

    /// Path with `t` edges: `1 - 2 - ... - t+1`.
    pub fn path(t: usize) -> Result<Self> {
        Tree::from_edges(t + 1, (1..=t).map(|i| (i, i + 1)))
    }

    /// Star with `t` edges, centre `1`.
    pub fn star(t: usize) -> Result<Self> {
        Tree::from_edges(t + 1, (2..=t + 1).map(|i| (1, i)))
    }

    /// Number of edges.
    pub fn t(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// `d_T(x)` for a 1-based vertex name.
    pub fn degree(&self, x: usize) -> usize {
        self.adj[x - 1].len()
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        (1..=self.vertex_count()).contains(&x) && self.degree(x) == 1
    }

    /// Leaves in ascending order (1-based).
    pub fn leaves(&self) -> Vec<usize> {
        (1..=self.vertex_count()).filter(|&x| self.degree(x) == 1).collect()
    }

    /// 1-based edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u + 1, v + 1)))
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn neighbors0(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub(crate) fn degree0(&self, x: usize) -> usize {
        self.adj[x].len()
    }
}

fn reachable_from(adj: &[Vec<usize>], start: usize) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count
}

/// Ordering `x_1..x_{t+1}` of a tree's vertices with parent map `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoodLabeling {
    /// Tree vertex (0-based) at each position.
    order: Vec<usize>,
    /// Parent position of each position; `parent[0]` is unused and set to 0.
    parent: Vec<usize>,
}

impl GoodLabeling {
    /// Breadth-first labeling from `start_leaf`, children in ascending order.
    /// Defaults to the lowest-numbered leaf.
    pub fn breadth_first(tree: &Tree, start_leaf: Option<usize>) -> Result<Self> {
        let root = Self::check_start(tree, start_leaf)?;
        let mut seen = vec![false; tree.vertex_count()];
        let mut order = Vec::with_capacity(tree.vertex_count());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in tree.neighbors0(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        Self::from_order0(tree, order)
    }

    /// Preorder depth-first labeling from `start_leaf`, children in ascending order.
    pub fn depth_first(tree: &Tree, start_leaf: Option<usize>) -> Result<Self> {
        let root = Self::check_start(tree, start_leaf)?;
        let mut seen = vec![false; tree.vertex_count()];
        let mut order = Vec::with_capacity(tree.vertex_count());
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            order.push(u);
            for &v in tree.neighbors0(u).iter().rev() {
                if !seen[v] {
                    stack.push(v);
                }
            }
        }
        Self::from_order0(tree, order)
    }

    /// Good labeling with `x_1 = first_leaf` and `x_{t+1} = last_leaf`.
    ///
    /// Built breadth-first from `first_leaf`, then `last_leaf` is moved to the
    /// end; a leaf other than the root has no children, so only its parent
    /// needs to precede it.
    pub fn between(tree: &Tree, first_leaf: usize, last_leaf: usize) -> Result<Self> {
        if first_leaf == last_leaf || !tree.is_leaf(first_leaf) || !tree.is_leaf(last_leaf) {
            return Err(Error::InvalidLabeling(format!(
                "{first_leaf} and {last_leaf} must be distinct leaves"
            )));
        }
        let bfs = Self::breadth_first(tree, Some(first_leaf))?;
        let mut order = bfs.order;
        order.retain(|&x| x != last_leaf - 1);
        order.push(last_leaf - 1);
        Self::from_order0(tree, order)
    }

    /// Validates an explicit ordering given as 1-based vertex names.
    pub fn from_order(tree: &Tree, order: &[usize]) -> Result<Self> {
        if order.iter().any(|&x| x == 0 || x > tree.vertex_count()) {
            return Err(Error::InvalidLabeling("vertex outside 1..=t+1".into()));
        }
        Self::from_order0(tree, order.iter().map(|&x| x - 1).collect())
    }

    fn check_start(tree: &Tree, start_leaf: Option<usize>) -> Result<usize> {
        match start_leaf {
            Some(x) if tree.is_leaf(x) => Ok(x - 1),
            Some(x) => Err(Error::InvalidLabeling(format!("start vertex {x} is not a leaf"))),
            None => Ok(tree.leaves()[0] - 1),
        }
    }

    fn from_order0(tree: &Tree, order: Vec<usize>) -> Result<Self> {
        let len = tree.vertex_count();
        if order.len() != len {
            return Err(Error::InvalidLabeling(format!(
                "ordering has {} entries, tree has {len} vertices",
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; len];
        for (j, &x) in order.iter().enumerate() {
            if position[x] != usize::MAX {
                return Err(Error::InvalidLabeling(format!("vertex {} repeated", x + 1)));
            }
            position[x] = j;
        }
        if tree.degree0(order[0]) != 1 {
            return Err(Error::InvalidLabeling(format!("x_1 = {} is not a leaf", order[0] + 1)));
        }
        let mut parent = vec![0; len];
        for (j, &x) in order.iter().enumerate().skip(1) {
            let mut earlier = tree.neighbors0(x).iter().map(|&y| position[y]).filter(|&p| p < j);
            match (earlier.next(), earlier.next()) {
                (Some(p), None) => parent[j] = p,
                _ => {
                    return Err(Error::InvalidLabeling(format!(
                        "x_{} = {} needs exactly one earlier neighbour",
                        j + 1,
                        x + 1
                    )))
                }
            }
        }
        Ok(GoodLabeling { order, parent })
    }

    /// Number of positions, `t + 1`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The ordering as 1-based tree vertex names.
    pub fn order(&self) -> Vec<usize> {
        self.order.iter().map(|&x| x + 1).collect()
    }

    /// Parent index `f(j)` for 1-based `j ≥ 2`.
    pub fn f(&self, j: usize) -> usize {
        assert!(j >= 2 && j <= self.len(), "f(j) defined for 2 <= j <= t+1");
        self.parent[j - 1] + 1
    }

    /// 0-based tree vertex at 0-based position.
    pub(crate) fn vertex_at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// 0-based parent position of 0-based position `pos ≥ 1`.
    pub(crate) fn parent_pos(&self, pos: usize) -> usize {
        self.parent[pos]
    }

    /// Position (0-based) of every 0-based tree vertex.
    pub(crate) fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (j, &x) in self.order.iter().enumerate() {
            pos[x] = j;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_trees() {
        let cyc = Tree::from_edges(3, [(1, 2), (2, 3), (3, 1)]);
        assert!(matches!(cyc, Err(Error::InvalidTree(m)) if m.contains("cyclic")));
        let disc = Tree::from_edges(4, [(1, 2), (3, 4)]);
        assert!(matches!(disc, Err(Error::InvalidTree(m)) if m.contains("disconnected")));
        assert!(Tree::from_edges(1, []).is_err());
    }

    #[test]
    fn path_labeling_is_forced() {
        let p3 = Tree::path(3).unwrap();
        let l = GoodLabeling::breadth_first(&p3, Some(1)).unwrap();
        assert_eq!(l.order(), vec![1, 2, 3, 4]);
        assert_eq!((l.f(2), l.f(3), l.f(4)), (1, 2, 3));
    }

    #[test]
    fn star_labeling_starts_at_leaf() {
        let s3 = Tree::star(3).unwrap();
        let l = GoodLabeling::breadth_first(&s3, Some(2)).unwrap();
        assert_eq!(l.order(), vec![2, 1, 3, 4]);
        assert_eq!((l.f(2), l.f(3), l.f(4)), (1, 2, 2));
        // default picks the lowest leaf
        assert_eq!(GoodLabeling::breadth_first(&s3, None).unwrap().order()[0], 2);
        assert!(GoodLabeling::breadth_first(&s3, Some(1)).is_err());
    }

    #[test]
    fn single_edge() {
        let t1 = Tree::path(1).unwrap();
        let l = GoodLabeling::breadth_first(&t1, None).unwrap();
        assert_eq!(l.order(), vec![1, 2]);
        assert_eq!(l.f(2), 1);
        assert_eq!(GoodLabeling::between(&t1, 1, 2).unwrap().order(), vec![1, 2]);
    }

    #[test]
    fn between_examples() {
        let p3 = Tree::path(3).unwrap();
        assert_eq!(GoodLabeling::between(&p3, 4, 1).unwrap().order(), vec![4, 3, 2, 1]);
        let s3 = Tree::star(3).unwrap();
        let l = GoodLabeling::between(&s3, 3, 4).unwrap();
        assert_eq!(l.order(), vec![3, 1, 2, 4]);
        assert_eq!((l.f(2), l.f(3), l.f(4)), (1, 2, 2));
        assert!(GoodLabeling::between(&s3, 3, 3).is_err());
        assert!(GoodLabeling::between(&s3, 1, 3).is_err());
    }

    #[test]
    fn explicit_orders_are_validated() {
        let p3 = Tree::path(3).unwrap();
        assert!(GoodLabeling::from_order(&p3, &[1, 2, 3, 4]).is_ok());
        assert!(GoodLabeling::from_order(&p3, &[1, 3, 2, 4]).is_err());
        assert!(GoodLabeling::from_order(&p3, &[2, 1, 3, 4]).is_err());
        let s3 = Tree::star(3).unwrap();
        let dfs = GoodLabeling::depth_first(&s3, Some(4)).unwrap();
        assert_eq!(dfs.order(), vec![4, 1, 2, 3]);
    }
}
