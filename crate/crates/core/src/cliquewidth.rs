//! Layout trees and equivalence-class counting.
//!
//! For a node `s` of a layout tree let `V_s` be the vertices below it. Two
//! vertices of `V_s` are equivalent when `N[u] ∖ V_s = N[v] ∖ V_s`. Replacing
//! every leaf `u` by a node with children `u` and `ū` turns a layout of `G`
//! into a layout of its complementary prism, and the class count at any node
//! of the new tree is at most twice the worst count of the old one.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{complementary_prism, Graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Leaf(usize),
    Internal(usize, usize),
}

/// A rooted binary tree whose leaves are labelled by distinct vertices.
/// Nodes live in an arena; the root is the last node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutTree {
    nodes: Vec<Node>,
}

impl LayoutTree {
    pub fn leaf(v: usize) -> Self {
        Self {
            nodes: vec![Node::Leaf(v)],
        }
    }

    pub fn join(left: LayoutTree, right: LayoutTree) -> Self {
        let offset = left.nodes.len();
        let mut nodes = left.nodes;
        let left_root = offset - 1;
        nodes.extend(right.nodes.into_iter().map(|node| match node {
            Node::Leaf(v) => Node::Leaf(v),
            Node::Internal(a, b) => Node::Internal(a + offset, b + offset),
        }));
        let right_root = nodes.len() - 1;
        nodes.push(Node::Internal(left_root, right_root));
        Self { nodes }
    }

    /// Left-deep tree over `order`: `(((a, b), c), d)`.
    pub fn caterpillar(order: &[usize]) -> Result<Self> {
        let (&first, rest) = order
            .split_first()
            .ok_or_else(|| Error::domain("layout tree needs at least one leaf"))?;
        Ok(rest
            .iter()
            .fold(Self::leaf(first), |t, &v| Self::join(t, Self::leaf(v))))
    }

    /// Balanced tree over `order`, splitting each range at its midpoint.
    pub fn balanced(order: &[usize]) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::domain("layout tree needs at least one leaf"));
        }
        fn build(vs: &[usize]) -> LayoutTree {
            if vs.len() == 1 {
                return LayoutTree::leaf(vs[0]);
            }
            let mid = vs.len() / 2;
            LayoutTree::join(build(&vs[..mid]), build(&vs[mid..]))
        }
        Ok(build(order))
    }

    /// Seeded random tree: shuffle `0..order`, then split every range at a
    /// uniformly random point.
    pub fn random(order: usize, rng: &mut impl Rng) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("layout tree needs at least one leaf"));
        }
        let mut vs: Vec<usize> = (0..order).collect();
        vs.shuffle(rng);
        fn build(vs: &[usize], rng: &mut impl Rng) -> LayoutTree {
            if vs.len() == 1 {
                return LayoutTree::leaf(vs[0]);
            }
            let cut = rng.gen_range(1..vs.len());
            let left = build(&vs[..cut], rng);
            LayoutTree::join(left, build(&vs[cut..], rng))
        }
        Ok(build(&vs, rng))
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    pub fn internal_count(&self) -> usize {
        self.node_count() - self.leaf_count()
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(s) = stack.pop() {
            match self.nodes[s] {
                Node::Leaf(v) => out.push(v),
                Node::Internal(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Replaces each leaf `u` by an internal node with children `u` and
    /// `u + n`, where `n` is the number of leaves.
    pub fn prism_layout(&self) -> LayoutTree {
        let n = self.leaf_count();
        let mut map = vec![0; self.nodes.len()];
        let mut nodes = Vec::with_capacity(self.nodes.len() + 2 * n);
        // Children precede parents in the arena, so one forward pass works.
        for (k, node) in self.nodes.iter().enumerate() {
            map[k] = match *node {
                Node::Leaf(u) => {
                    nodes.push(Node::Leaf(u));
                    nodes.push(Node::Leaf(u + n));
                    nodes.push(Node::Internal(nodes.len() - 2, nodes.len() - 1));
                    nodes.len() - 1
                }
                Node::Internal(a, b) => {
                    nodes.push(Node::Internal(map[a], map[b]));
                    nodes.len() - 1
                }
            };
        }
        LayoutTree { nodes }
    }

    fn check_against(&self, order: usize) -> Result<()> {
        let leaves = self.leaves();
        if leaves.len() != order {
            return Err(Error::LayoutMismatch(format!(
                "{} leaves for {order} vertices",
                leaves.len()
            )));
        }
        let mut seen = vec![false; order];
        for v in leaves {
            if v >= order || std::mem::replace(&mut seen[v], true) {
                return Err(Error::LayoutMismatch(format!("leaf {} repeated or out of range", v + 1)));
            }
        }
        Ok(())
    }

    /// Parses nested parentheses over 1-based labels, e.g. `((1,2),(3,4))`.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_node(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::parse(1, format!("trailing input at column {}", pos + 1)));
        }
        Ok(tree)
    }
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<LayoutTree> {
    match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let left = parse_node(chars, pos)?;
            if chars.get(*pos) != Some(&',') {
                return Err(Error::parse(1, format!("expected ',' at column {}", *pos + 1)));
            }
            *pos += 1;
            let right = parse_node(chars, pos)?;
            if chars.get(*pos) != Some(&')') {
                return Err(Error::parse(1, format!("expected ')' at column {}", *pos + 1)));
            }
            *pos += 1;
            Ok(LayoutTree::join(left, right))
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let label: String = chars[start..*pos].iter().collect();
            let v: usize = label.parse().map_err(|_| Error::parse(1, "bad leaf label"))?;
            if v == 0 {
                return Err(Error::parse(1, "leaf labels are 1-based"));
            }
            Ok(LayoutTree::leaf(v - 1))
        }
        _ => Err(Error::parse(1, format!("unexpected input at column {}", *pos + 1))),
    }
}

impl fmt::Display for LayoutTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &LayoutTree, s: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.nodes[s] {
                Node::Leaf(v) => write!(f, "{}", v + 1),
                Node::Internal(a, b) => {
                    write!(f, "(")?;
                    go(t, a, f)?;
                    write!(f, ",")?;
                    go(t, b, f)?;
                    write!(f, ")")
                }
            }
        }
        go(self, self.root(), f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCountProfile {
    /// Class count for every tree node, in arena order.
    pub counts: Vec<usize>,
    pub max_classes: usize,
}

/// Counts the classes of `N[u] ∖ V_s` signatures at every tree node.
pub fn class_profile(g: &Graph, t: &LayoutTree) -> Result<ClassCountProfile> {
    let order = g.order();
    t.check_against(order)?;
    let mut below: Vec<VertexSet> = Vec::with_capacity(t.node_count());
    let mut counts = Vec::with_capacity(t.node_count());
    for node in &t.nodes {
        let set = match *node {
            Node::Leaf(v) => VertexSet::from_iter(order, [v]),
            Node::Internal(a, b) => below[a].union(&below[b]),
        };
        let signatures: HashSet<VertexSet> = set
            .iter()
            .map(|u| g.closed_neighborhood(u).difference(&set))
            .collect();
        counts.push(signatures.len());
        below.push(set);
    }
    let max_classes = counts.iter().copied().max().unwrap_or(0);
    Ok(ClassCountProfile { counts, max_classes })
}

pub fn prism_layout(t: &LayoutTree) -> LayoutTree {
    t.prism_layout()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoublingCheck {
    /// Worst class count for `g` on `t`.
    pub base: usize,
    /// Worst class count for the complementary prism on the doubled tree.
    pub prism: usize,
}

impl DoublingCheck {
    pub fn ok(&self) -> bool {
        self.prism <= 2 * self.base
    }
}

pub fn check_doubling(g: &Graph, t: &LayoutTree) -> Result<DoublingCheck> {
    let base = class_profile(g, t)?.max_classes;
    let (prism, _) = complementary_prism(g);
    let doubled = class_profile(&prism, &t.prism_layout())?.max_classes;
    Ok(DoublingCheck { base, prism: doubled })
}

/// `G(n, p)` from a seeded generator.
pub fn random_graph(order: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..order)
        .flat_map(|u| (u + 1..order).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(order, edges).expect("generated edges are in range")
}

/// Summary of a batch of random doubling checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DoublingBatch {
    pub trials: usize,
    pub failures: Vec<(Graph, LayoutTree, DoublingCheck)>,
    pub worst_ratio: (usize, usize),
}

/// Runs `trials` checks on seeded random graphs of order `1..=max_order`
/// with random layout trees.
pub fn random_doubling_batch(trials: usize, max_order: usize, seed: u64) -> Result<DoublingBatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = DoublingBatch {
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let order = rng.gen_range(1..=max_order);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(order, p, &mut rng);
        let t = LayoutTree::random(order, &mut rng)?;
        let check = check_doubling(&g, &t)?;
        let (a, b) = batch.worst_ratio;
        if b == 0 || check.prism * b > a * check.base {
            batch.worst_ratio = (check.prism, check.base);
        }
        if !check.ok() {
            batch.failures.push((g, t, check));
        }
    }
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};

    #[test]
    fn k2_single_class() {
        let t = LayoutTree::parse("(1,2)").unwrap();
        let profile = class_profile(&complete(2), &t).unwrap();
        assert_eq!(profile.max_classes, 1);
        let check = check_doubling(&complete(2), &t).unwrap();
        assert!(check.ok());
        assert_eq!(check.base, 1);
    }

    #[test]
    fn c4_caterpillar() {
        // Computed by hand: at {v1,v2,v3}, v1 and v3 both see only v4 outside
        // and v2 sees nothing, so two classes; {v1,v2} also has two.
        let t = LayoutTree::caterpillar(&[0, 1, 2, 3]).unwrap();
        assert_eq!(t.to_string(), "(((1,2),3),4)");
        let profile = class_profile(&cycle(4).unwrap(), &t).unwrap();
        assert_eq!(profile.max_classes, 2);
        assert_eq!(profile.counts[t.root()], 1);
    }

    #[test]
    fn empty_graph_single_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let t = LayoutTree::random(5, &mut rng).unwrap();
            assert_eq!(class_profile(&Graph::empty(5), &t).unwrap().max_classes, 1);
        }
    }

    #[test]
    fn prism_layout_shape() {
        let single = LayoutTree::leaf(0).prism_layout();
        assert_eq!(single.to_string(), "(1,2)");

        let t = LayoutTree::balanced(&[0, 1, 2, 3, 4]).unwrap();
        let p = t.prism_layout();
        assert_eq!(p.leaf_count(), 10);
        assert_eq!(p.internal_count(), t.internal_count() + 5);
        assert_eq!(p.leaves(), vec![0, 5, 1, 6, 2, 7, 3, 8, 4, 9]);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let text = "((1,2),(3,(4,5)))";
        assert_eq!(LayoutTree::parse(text).unwrap().to_string(), text);
        assert_eq!(LayoutTree::parse(" ( 1 , 2 ) ").unwrap().to_string(), "(1,2)");
        for bad in ["", "(1,2", "(1 2)", "(0,1)", "(1,2))", "x"] {
            assert!(LayoutTree::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn leaf_mismatch_rejected() {
        let g = cycle(4).unwrap();
        let t = LayoutTree::parse("((1,2),3)").unwrap();
        assert!(matches!(class_profile(&g, &t), Err(Error::LayoutMismatch(_))));
        let t = LayoutTree::parse("((1,2),(3,3))").unwrap();
        assert!(class_profile(&g, &t).is_err());
        let t = LayoutTree::parse("((1,2),(3,5))").unwrap();
        assert!(class_profile(&g, &t).is_err());
    }

    #[test]
    fn internal_ids_do_not_matter() {
        // Same shape built in two arena orders.
        let a = LayoutTree::join(
            LayoutTree::join(LayoutTree::leaf(0), LayoutTree::leaf(1)),
            LayoutTree::join(LayoutTree::leaf(2), LayoutTree::leaf(3)),
        );
        let b = LayoutTree::parse("((1,2),(3,4))").unwrap();
        let g = cycle(4).unwrap();
        let mut pa = class_profile(&g, &a).unwrap().counts;
        let mut pb = class_profile(&g, &b).unwrap().counts;
        pa.sort();
        pb.sort();
        assert_eq!(pa, pb);
    }

    #[test]
    fn random_batch_holds() {
        let batch = random_doubling_batch(50, 8, 1).unwrap();
        assert!(batch.failures.is_empty());
    }
}
