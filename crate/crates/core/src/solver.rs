//! Exact minimum identifying codes.
//!
//! Two strategies over the hitting-set instance: plain enumeration by
//! increasing cardinality, and branch-and-bound. Both report the
//! lexicographically smallest minimum code (comparing sorted vertex lists),
//! so their outputs are directly comparable and independent of the worker
//! count.

use crate::bitset::VertexSet;
use crate::cycle_prism::{lower_bound, upper_bound, MIN_ORDER};
use crate::error::{Error, Result};
use crate::graph::{ball_table, cycle_prism, Graph};
use crate::idcode::{greedy_code, instance_from_table, ExtractOptions, HittingInstance};
use crate::textio::VertexLabels;
use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Exhaustive,
    #[default]
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub strategy: Strategy,
    /// Largest code size to search; nothing found up to it is reported as
    /// [`Status::CapExceeded`].
    pub size_cap: Option<usize>,
    pub workers: usize,
    /// Reserved for randomized orderings; the search is currently fully
    /// deterministic and ignores it.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::default(),
            size_cap: None,
            workers: 1,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.size_cap = Some(cap);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.size_cap == Some(0) {
            return Err(Error::domain("size cap must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::domain("worker count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    CapExceeded,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::CapExceeded => "cap-exceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub status: Status,
    /// Minimum code; set only when optimal.
    pub code: Option<VertexSet>,
    /// A pair of closed twins; set only when infeasible.
    pub witness: Option<(usize, usize)>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SolverResult {
    pub fn size(&self) -> Option<usize> {
        self.code.as_ref().map(VertexSet::len)
    }

    pub fn to_json(&self, labels: &VertexLabels) -> Value {
        let mut out = json!({
            "status": self.status.as_str(),
            "size": self.size(),
            "code": self.code.as_ref().map(|c| c.iter().map(|v| labels.json(v)).collect::<Vec<_>>()),
            "nodes": self.nodes,
            "ms": self.elapsed.as_millis() as u64,
        });
        if let Some((u, v)) = self.witness {
            out["witness"] = json!([labels.json(u), labels.json(v)]);
        }
        out
    }
}

pub fn solve_min_idcode(g: &Graph, d: usize, opts: &SolverOptions) -> Result<SolverResult> {
    let table = ball_table(g, d)?;
    solve_instance(&instance_from_table(&table, ExtractOptions::default()), opts)
}

pub fn solve_instance(inst: &HittingInstance, opts: &SolverOptions) -> Result<SolverResult> {
    opts.validate()?;
    let start = Instant::now();
    if let Some(&pair) = inst.infeasible_pairs.first() {
        return Ok(SolverResult {
            status: Status::Infeasible,
            code: None,
            witness: Some(pair),
            nodes: 0,
            elapsed: start.elapsed(),
        });
    }
    let cap = opts.size_cap.unwrap_or(inst.universe).min(inst.universe);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    let (code, nodes) = pool.install(|| match opts.strategy {
        Strategy::Exhaustive => exhaustive(inst, cap),
        Strategy::BranchAndBound => branch_and_bound(inst, cap),
    })?;
    Ok(SolverResult {
        status: if code.is_some() {
            Status::Optimal
        } else {
            Status::CapExceeded
        },
        code,
        witness: None,
        nodes,
        elapsed: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

fn exhaustive(inst: &HittingInstance, cap: usize) -> Result<(Option<VertexSet>, u64)> {
    let n = inst.universe;
    if n > 64 {
        return Err(Error::domain(format!(
            "exhaustive search supports at most 64 vertices, got {n}"
        )));
    }
    let mut masks: Vec<u64> = inst.constraints.iter().map(VertexSet::as_mask).collect();
    // Small constraints fail fastest.
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let nodes = AtomicU64::new(0);
    for k in 0..=cap {
        if k == 0 {
            nodes.fetch_add(1, Ordering::Relaxed);
            if masks.is_empty() {
                return Ok((Some(VertexSet::new(n)), 1));
            }
            continue;
        }
        // Split on the smallest member; the least successful first member
        // holds the lexicographically first code.
        let found = (0..=n - k)
            .into_par_iter()
            .find_map_first(|first| {
                let mut local = 0u64;
                let hit = first_combination(&masks, n, k - 1, first + 1, 1 << first, &mut local);
                nodes.fetch_add(local, Ordering::Relaxed);
                hit
            });
        if let Some(mask) = found {
            return Ok((Some(VertexSet::from_mask(n, mask)), nodes.into_inner()));
        }
    }
    Ok((None, nodes.into_inner()))
}

/// First (in lexicographic order) completion of `chosen` by `remaining`
/// vertices from `from..n` that hits every mask.
fn first_combination(
    masks: &[u64],
    n: usize,
    remaining: usize,
    from: usize,
    chosen: u64,
    nodes: &mut u64,
) -> Option<u64> {
    if remaining == 0 {
        *nodes += 1;
        return masks.iter().all(|m| m & chosen != 0).then_some(chosen);
    }
    (from..=n - remaining)
        .find_map(|v| first_combination(masks, n, remaining - 1, v + 1, chosen | 1 << v, nodes))
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

struct Search<'a> {
    constraints: &'a [VertexSet],
    best: &'a AtomicUsize,
    nodes: &'a AtomicU64,
}

impl Search<'_> {
    /// Size of a greedily built family of unhit constraints whose candidate
    /// sets are pairwise disjoint: each needs its own code vertex.
    fn packing_bound(&self, unhit: &[usize], excluded: &VertexSet) -> usize {
        let mut cands: Vec<VertexSet> = unhit
            .iter()
            .map(|&c| self.constraints[c].difference(excluded))
            .collect();
        cands.sort_by_key(VertexSet::len);
        let mut used = VertexSet::new(excluded.universe());
        let mut count = 0;
        for c in &cands {
            if !c.intersects(&used) {
                used.union_with(c);
                count += 1;
            }
        }
        count
    }

    /// Returns a code strictly smaller than the shared bound, if one exists
    /// below this node.
    fn descend(&self, chosen: &mut VertexSet, excluded: &mut VertexSet, unhit: &[usize]) -> Option<VertexSet> {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let size = chosen.len();
        if unhit.is_empty() {
            return (size < self.best.fetch_min(size, Ordering::SeqCst)).then(|| chosen.clone());
        }
        if size + self.packing_bound(unhit, excluded) >= self.best.load(Ordering::SeqCst) {
            return None;
        }
        let branch = self.pick(unhit, excluded)?;
        let mut found = None;
        let mut newly_excluded = Vec::new();
        for v in branch.iter() {
            chosen.insert(v);
            let rest: Vec<usize> = unhit
                .iter()
                .copied()
                .filter(|&c| !self.constraints[c].contains(v))
                .collect();
            if let Some(code) = self.descend(chosen, excluded, &rest) {
                found = Some(code);
            }
            chosen.remove(v);
            excluded.insert(v);
            newly_excluded.push(v);
            if chosen.len() + 1 >= self.best.load(Ordering::SeqCst) {
                break;
            }
        }
        for v in newly_excluded {
            excluded.remove(v);
        }
        found
    }

    /// Candidates of the unhit constraint with fewest of them (first such
    /// constraint on ties); `None` when some constraint has none left.
    fn pick(&self, unhit: &[usize], excluded: &VertexSet) -> Option<VertexSet> {
        let mut best: Option<VertexSet> = None;
        for &c in unhit {
            let cands = self.constraints[c].difference(excluded);
            if cands.is_empty() {
                return None;
            }
            if best.as_ref().is_none_or(|b| cands.len() < b.len()) {
                best = Some(cands);
            }
        }
        best
    }
}

fn prune_redundant(inst: &HittingInstance, code: &mut VertexSet) {
    for v in code.to_vec().into_iter().rev() {
        code.remove(v);
        if !inst.is_hit_by(code) {
            code.insert(v);
        }
    }
}

fn branch_and_bound(inst: &HittingInstance, cap: usize) -> Result<(Option<VertexSet>, u64)> {
    let n = inst.universe;
    let mut seed = greedy_code(inst)?;
    prune_redundant(inst, &mut seed);
    // The bound is exclusive: a code must be strictly smaller to count.
    let best = AtomicUsize::new(seed.len().min(cap + 1));
    let nodes = AtomicU64::new(1);
    let search = Search {
        constraints: &inst.constraints,
        best: &best,
        nodes: &nodes,
    };

    let all: Vec<usize> = (0..inst.constraints.len()).collect();
    let empty = VertexSet::new(n);
    if !all.is_empty() && search.packing_bound(&all, &empty) < best.load(Ordering::SeqCst) {
        // Root split: branch k takes the k-th candidate and excludes the
        // earlier ones. Branches run in parallel against the shared bound.
        let root = search.pick(&all, &empty).expect("constraints are nonempty");
        let cands = root.to_vec();
        cands.par_iter().enumerate().for_each(|(k, &v)| {
            let mut chosen = VertexSet::from_iter(n, [v]);
            let mut excluded = VertexSet::from_iter(n, cands[..k].iter().copied());
            let rest: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&c| !inst.constraints[c].contains(v))
                .collect();
            search.descend(&mut chosen, &mut excluded, &rest);
        });
    }

    let size = best.load(Ordering::SeqCst);
    if size > cap {
        return Ok((None, nodes.into_inner()));
    }
    let mut lex_nodes = 0;
    let code = lex_first_code(inst, size, &mut lex_nodes).expect("a code of the optimal size exists");
    Ok((Some(code), nodes.into_inner() + lex_nodes))
}

/// Lexicographically first code with at most `budget` vertices, found by
/// choosing members in increasing order.
pub(crate) fn lex_first_code(inst: &HittingInstance, budget: usize, nodes: &mut u64) -> Option<VertexSet> {
    let n = inst.universe;
    let unhit: Vec<usize> = (0..inst.constraints.len()).collect();
    let mut chosen = VertexSet::new(n);
    lex_descend(&inst.constraints, &mut chosen, 0, budget, &unhit, nodes).then_some(chosen)
}

fn lex_descend(
    constraints: &[VertexSet],
    chosen: &mut VertexSet,
    from: usize,
    budget: usize,
    unhit: &[usize],
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if unhit.is_empty() {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let n = chosen.universe();
    // Vertices below `from` are settled; every unhit constraint must still be
    // reachable, and the next pick cannot pass any constraint's last member.
    let mut limit = n;
    let mut excluded = VertexSet::new(n);
    for v in 0..from {
        excluded.insert(v);
    }
    let mut cands = Vec::with_capacity(unhit.len());
    for &c in unhit {
        let rest = constraints[c].difference(&excluded);
        match rest.iter().last() {
            None => return false,
            Some(last) => limit = limit.min(last + 1),
        }
        cands.push(rest);
    }
    cands.sort_by_key(VertexSet::len);
    let mut used = VertexSet::new(n);
    let mut packing = 0;
    for c in &cands {
        if !c.intersects(&used) {
            used.union_with(c);
            packing += 1;
        }
    }
    if packing > budget {
        return false;
    }
    for v in from..limit {
        chosen.insert(v);
        let rest: Vec<usize> = unhit.iter().copied().filter(|&c| !constraints[c].contains(v)).collect();
        if lex_descend(constraints, chosen, v + 1, budget - 1, &rest, nodes) {
            return true;
        }
        chosen.remove(v);
    }
    false
}

// ---------------------------------------------------------------------------
// Tables over cycle prisms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct IcRow {
    pub n: usize,
    pub result: SolverResult,
    /// `7n/9 - 12`, for `n >= 9`.
    pub lower: Option<Rational64>,
    /// Size of the periodic construction, for `n >= 9`.
    pub upper: Option<usize>,
}

/// Solves `C_n C̄_n` for each `n` and checks the optimum against the bounds
/// where they apply.
pub fn ic_table<I>(ns: I, d: usize, opts: &SolverOptions) -> Result<Vec<IcRow>>
where
    I: IntoIterator<Item = usize>,
{
    ns.into_iter()
        .map(|n| {
            let (g, _) = cycle_prism(n)?;
            let result = solve_min_idcode(&g, d, opts)?;
            let (lower, upper) = if n >= MIN_ORDER {
                (Some(lower_bound(n)?), Some(upper_bound(n)?.0))
            } else {
                (None, None)
            };
            if let (Some(ic), Some(lo), Some(hi)) = (result.size(), lower, upper) {
                if Rational64::from_integer(ic as i64) < lo || ic > hi {
                    return Err(Error::BoundViolation {
                        n,
                        msg: format!("ic = {ic} outside [{lo}, {hi}]"),
                    });
                }
            }
            Ok(IcRow {
                n,
                result,
                lower,
                upper,
            })
        })
        .collect()
}
