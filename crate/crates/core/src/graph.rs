//! Simple undirected graphs over bitset adjacency rows, the cycle and
//! complementary-prism constructions, distance balls and closed twins.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// An immutable simple undirected graph on vertices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(order: usize) -> Self {
        Self {
            adj: vec![VertexSet::new(order); order],
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected; repeated
    /// edges collapse.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::new(order); order];
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) out of range for order {order}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self { adj })
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric and
    /// irreflexive.
    pub fn from_rows(adj: Vec<VertexSet>) -> Result<Self> {
        let order = adj.len();
        for (u, row) in adj.iter().enumerate() {
            if row.universe() != order {
                return Err(Error::domain(format!("row {u} has wrong universe")));
            }
            if row.contains(u) {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            if let Some(v) = row.iter().find(|&v| !adj[v].contains(u)) {
                return Err(Error::domain(format!("asymmetric edge ({u}, {v})")));
            }
        }
        Ok(Self { adj })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &VertexSet {
        &self.adj[u]
    }

    /// `N[u]`: the neighbors of `u` together with `u`.
    pub fn closed_neighborhood(&self, u: usize) -> VertexSet {
        let mut set = self.adj[u].clone();
        set.insert(u);
        set
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Subgraph induced by `lo..hi`, relabeled to start at zero.
    pub fn induced_range(&self, lo: usize, hi: usize) -> Graph {
        let edges = self
            .edges()
            .filter(|&(u, v)| lo <= u && v < hi)
            .map(|(u, v)| (u - lo, v - lo));
        Graph::from_edges(hi - lo, edges).expect("induced edges are in range")
    }
}

/// The cycle `C_n` with edges `{i, (i+1) mod n}`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::domain(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are in range")
}

pub fn complete(n: usize) -> Graph {
    complement(&Graph::empty(n))
}

pub fn complement(g: &Graph) -> Graph {
    let adj = (0..g.order())
        .map(|u| {
            let mut row = g.adj[u].complement();
            row.remove(u);
            row
        })
        .collect();
    Graph { adj }
}

/// Index convention of a complementary prism built from an order-`n` graph:
/// paper vertex `v_i` (1-based) is index `i - 1`, and `v̄_i` is `n + i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrismIndexing {
    pub n: usize,
}

impl PrismIndexing {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn order(&self) -> usize {
        2 * self.n
    }

    /// Index of `v_i` for a 1-based paper index.
    pub fn base(&self, i: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        i - 1
    }

    /// Index of `v̄_i` for a 1-based paper index.
    pub fn bar(&self, i: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        self.n + i - 1
    }

    /// The matched partner of a vertex.
    pub fn partner(&self, v: usize) -> usize {
        if v < self.n {
            v + self.n
        } else {
            v - self.n
        }
    }

    pub fn is_bar(&self, v: usize) -> bool {
        v >= self.n
    }

    /// Human-facing label, `v3` or `vbar7`.
    pub fn label(&self, v: usize) -> String {
        if v < self.n {
            format!("v{}", v + 1)
        } else {
            format!("vbar{}", v - self.n + 1)
        }
    }

    /// Inverse of [`PrismIndexing::label`].
    pub fn parse_label(&self, s: &str) -> Option<usize> {
        let (rest, offset) = match s.strip_prefix("vbar") {
            Some(rest) => (rest, self.n),
            None => (s.strip_prefix('v')?, 0),
        };
        let i: usize = rest.parse().ok()?;
        (1..=self.n).contains(&i).then(|| offset + i - 1)
    }
}

/// The complementary prism: `g` on `0..n`, its complement on `n..2n`, and the
/// matching `{i, n+i}`.
pub fn complementary_prism(g: &Graph) -> (Graph, PrismIndexing) {
    let n = g.order();
    let bar = complement(g);
    let edges = g
        .edges()
        .chain(bar.edges().map(|(u, v)| (u + n, v + n)))
        .chain((0..n).map(|i| (i, i + n)));
    let prism = Graph::from_edges(2 * n, edges).expect("prism edges are in range");
    (prism, PrismIndexing::new(n))
}

/// `C_n C̄_n` with its indexing.
pub fn cycle_prism(n: usize) -> Result<(Graph, PrismIndexing)> {
    Ok(complementary_prism(&cycle(n)?))
}

/// Closed balls of radius `d` around every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallTable {
    d: usize,
    balls: Vec<VertexSet>,
}

impl BallTable {
    pub fn radius(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.balls.len()
    }

    #[inline]
    pub fn ball(&self, u: usize) -> &VertexSet {
        &self.balls[u]
    }

    pub fn balls(&self) -> &[VertexSet] {
        &self.balls
    }
}

/// Balls by `d` rounds of neighborhood expansion.
pub fn ball_table(g: &Graph, d: usize) -> Result<BallTable> {
    if d < 1 {
        return Err(Error::domain("radius d must be at least 1"));
    }
    let n = g.order();
    let balls = (0..n)
        .map(|u| {
            let mut ball = g.closed_neighborhood(u);
            let mut frontier = ball.clone();
            for _ in 1..d {
                let mut next = VertexSet::new(n);
                for v in frontier.iter() {
                    next.union_with(g.neighbors(v));
                }
                next.difference_with(&ball);
                if next.is_empty() {
                    break;
                }
                ball.union_with(&next);
                frontier = next;
            }
            ball
        })
        .collect();
    Ok(BallTable { d, balls })
}

/// All pairs `(u, v)`, `u < v`, with identical balls, sorted lexicographically.
pub fn closed_twins(g: &Graph, d: usize) -> Result<Vec<(usize, usize)>> {
    Ok(twins_in(&ball_table(g, d)?))
}

pub(crate) fn twins_in(table: &BallTable) -> Vec<(usize, usize)> {
    let mut classes: HashMap<&VertexSet, Vec<usize>> = HashMap::new();
    for (u, ball) in table.balls().iter().enumerate() {
        classes.entry(ball).or_default().push(u);
    }
    let mut pairs: Vec<(usize, usize)> = classes
        .values()
        .flat_map(|members| {
            members
                .iter()
                .enumerate()
                .flat_map(move |(k, &u)| members[k + 1..].iter().map(move |&v| (u, v)))
        })
        .collect();
    pairs.sort_unstable();
    pairs
}
