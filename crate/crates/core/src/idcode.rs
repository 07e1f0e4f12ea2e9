//! Definitional verification of `d`-identifying codes and the equivalent
//! hitting-set instance.
//!
//! A set `C` is a `d`-identifying code when every `ball(u) ∩ C` is nonempty
//! and the sets are pairwise distinct. Equivalently, `C` hits every ball and
//! every symmetric difference `ball(u) Δ ball(v)` for `u != v`.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{ball_table, twins_in, BallTable, Graph};
use crate::textio::VertexLabels;
use serde_json::{json, Value};
use std::collections::HashSet;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    /// `ball(u) ∩ C` is empty.
    EmptyBall(usize),
    /// `ball(u) ∩ C = ball(v) ∩ C` with `u < v`.
    Unseparated(usize, usize),
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::EmptyBall(_) => "empty-ball",
            Failure::Unseparated(..) => "unseparated",
        }
    }

    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            Failure::EmptyBall(u) => vec![u],
            Failure::Unseparated(u, v) => vec![u, v],
        }
    }
}

/// Outcome of a definitional check. Invalid codes carry the
/// lexicographically first witness: the smallest undominated vertex if any,
/// otherwise the smallest unseparated pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub failure: Option<Failure>,
}

impl VerificationReport {
    pub fn valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self, labels: &VertexLabels) -> Value {
        let failure = match &self.failure {
            None => Value::Null,
            Some(f) => json!({
                "kind": f.kind(),
                "vertices": f.vertices().into_iter().map(|v| labels.json(v)).collect::<Vec<_>>(),
            }),
        };
        json!({ "valid": self.valid(), "failure": failure })
    }
}

/// Verifier bound to a fixed ball table; reuse it when checking many codes on
/// one graph.
#[derive(Clone, Debug)]
pub struct Verifier {
    table: BallTable,
    // Single-word copies of the balls when the graph has at most 64 vertices.
    masks: Option<Vec<u64>>,
}

impl Verifier {
    pub fn new(g: &Graph, d: usize) -> Result<Self> {
        Ok(Self::from_table(ball_table(g, d)?))
    }

    pub fn from_table(table: BallTable) -> Self {
        let masks = (table.order() <= 64)
            .then(|| table.balls().iter().map(VertexSet::as_mask).collect());
        Self { table, masks }
    }

    pub fn table(&self) -> &BallTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn report(&self, code: &VertexSet) -> VerificationReport {
        assert_eq!(code.universe(), self.order(), "code universe mismatch");
        if let Some(masks) = &self.masks {
            let sigs: Vec<u64> = masks.iter().map(|b| b & code.as_mask()).collect();
            return VerificationReport {
                failure: first_failure(&sigs),
            };
        }
        let sigs: Vec<VertexSet> = self
            .table
            .balls()
            .iter()
            .map(|b| b.intersection(code))
            .collect();
        VerificationReport {
            failure: first_failure(&sigs),
        }
    }

    pub fn is_valid(&self, code: &VertexSet) -> bool {
        match &self.masks {
            Some(_) => self.is_valid_mask(code.as_mask()),
            None => self.report(code).valid(),
        }
    }

    /// Fast path for graphs of at most 64 vertices, codes given as bitmasks.
    pub fn is_valid_mask(&self, code: u64) -> bool {
        let masks = self
            .masks
            .as_ref()
            .expect("mask verification needs at most 64 vertices");
        let mut sigs = [0u64; 64];
        let sigs = &mut sigs[..masks.len()];
        for (s, b) in sigs.iter_mut().zip(masks) {
            *s = b & code;
            if *s == 0 {
                return false;
            }
        }
        sigs.sort_unstable();
        sigs.windows(2).all(|w| w[0] != w[1])
    }
}

fn first_failure<S: Ord + Clone + EmptyCheck>(sigs: &[S]) -> Option<Failure> {
    if let Some(u) = sigs.iter().position(EmptyCheck::is_none) {
        return Some(Failure::EmptyBall(u));
    }
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    // Stable sort keeps equal signatures in index order, so the first two
    // entries of each run form that class's smallest pair.
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut best: Option<(usize, usize)> = None;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && sigs[order[end]] == sigs[order[start]] {
            end += 1;
        }
        if end - start >= 2 {
            let pair = (order[start], order[start + 1]);
            best = Some(best.map_or(pair, |b| b.min(pair)));
        }
        start = end;
    }
    best.map(|(u, v)| Failure::Unseparated(u, v))
}

trait EmptyCheck {
    fn is_none(&self) -> bool;
}

impl EmptyCheck for u64 {
    fn is_none(&self) -> bool {
        *self == 0
    }
}

impl EmptyCheck for VertexSet {
    fn is_none(&self) -> bool {
        self.is_empty()
    }
}

pub fn is_identifying_code(g: &Graph, d: usize, code: &VertexSet) -> Result<VerificationReport> {
    Ok(Verifier::new(g, d)?.report(code))
}

/// Domination and separation constraints an identifying code must hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingInstance {
    pub universe: usize,
    /// Nonempty and pairwise distinct; balls first (by vertex), then
    /// symmetric differences (by pair), each in first-occurrence order.
    pub constraints: Vec<VertexSet>,
    /// Pairs `(u, v)`, `u < v`, with identical balls.
    pub infeasible_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Drop constraints that are strict supersets of another constraint.
    pub remove_supersets: bool,
}

impl HittingInstance {
    pub fn is_feasible(&self) -> bool {
        self.infeasible_pairs.is_empty()
    }

    pub fn is_hit_by(&self, code: &VertexSet) -> bool {
        self.is_feasible() && self.constraints.iter().all(|c| c.intersects(code))
    }

    /// Text export: header `h <universe> <constraint-count>`, then one line of
    /// 1-based vertex indices per constraint.
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "h {} {}", self.universe, self.constraints.len()).unwrap();
        for c in &self.constraints {
            let line: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    /// Parses [`HittingInstance::export`] output. Infeasible pairs are not
    /// part of the format.
    pub fn parse_export(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums: Vec<&str> = head.split_whitespace().collect();
        let (universe, count) = match nums.as_slice() {
            ["h", u, c] => (
                u.parse::<usize>().map_err(|_| Error::parse(1, "bad universe"))?,
                c.parse::<usize>().map_err(|_| Error::parse(1, "bad count"))?,
            ),
            _ => return Err(Error::parse(1, "expected 'h <universe> <count>'")),
        };
        let mut constraints = Vec::with_capacity(count);
        for (no, line) in lines {
            let mut set = VertexSet::new(universe);
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::parse(no + 1, "bad vertex"))?;
                if !(1..=universe).contains(&v) {
                    return Err(Error::parse(no + 1, "vertex out of range"));
                }
                set.insert(v - 1);
            }
            constraints.push(set);
        }
        if constraints.len() != count {
            return Err(Error::parse(0, "constraint count does not match header"));
        }
        Ok(Self {
            universe,
            constraints,
            infeasible_pairs: Vec::new(),
        })
    }
}

pub fn hitting_instance(g: &Graph, d: usize) -> Result<HittingInstance> {
    hitting_instance_with(g, d, ExtractOptions::default())
}

pub fn hitting_instance_with(g: &Graph, d: usize, opts: ExtractOptions) -> Result<HittingInstance> {
    let table = ball_table(g, d)?;
    Ok(instance_from_table(&table, opts))
}

pub(crate) fn instance_from_table(table: &BallTable, opts: ExtractOptions) -> HittingInstance {
    let n = table.order();
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut constraints = Vec::new();
    let mut push = |set: VertexSet, constraints: &mut Vec<VertexSet>| {
        if !set.is_empty() && seen.insert(set.clone()) {
            constraints.push(set);
        }
    };
    for ball in table.balls() {
        push(ball.clone(), &mut constraints);
    }
    for u in 0..n {
        for v in u + 1..n {
            push(table.ball(u).symmetric_difference(table.ball(v)), &mut constraints);
        }
    }
    if opts.remove_supersets {
        let keep: Vec<bool> = constraints
            .iter()
            .map(|c| !constraints.iter().any(|o| o != c && o.is_subset(c)))
            .collect();
        constraints = constraints
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
    }
    HittingInstance {
        universe: n,
        constraints,
        infeasible_pairs: twins_in(table),
    }
}

/// Greedy maximum coverage: repeatedly take the vertex hitting the most
/// unhit constraints, lowest index on ties.
pub fn greedy_code(inst: &HittingInstance) -> Result<VertexSet> {
    if let Some(&(u, v)) = inst.infeasible_pairs.first() {
        return Err(Error::Infeasible(u, v));
    }
    let mut code = VertexSet::new(inst.universe);
    let mut unhit: Vec<&VertexSet> = inst.constraints.iter().collect();
    while !unhit.is_empty() {
        let mut counts = vec![0usize; inst.universe];
        for c in &unhit {
            for v in c.iter() {
                counts[v] += 1;
            }
        }
        let best = (0..inst.universe)
            .max_by_key(|&v| (counts[v], std::cmp::Reverse(v)))
            .expect("nonempty constraints imply a nonempty universe");
        code.insert(best);
        unhit.retain(|c| !c.contains(best));
    }
    Ok(code)
}
