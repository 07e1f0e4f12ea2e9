//! Identifying codes in `C_n C̄_n` described by their two characteristic
//! vectors: the local condition system, the periodic 9-column construction,
//! the size bounds, and the exchange moves that reduce bad indices.
//!
//! Positions are 0-based here (paper index `i` is position `i - 1`) and all
//! index arithmetic wraps modulo `n`.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{cycle_prism, Graph, PrismIndexing};
use crate::idcode::{VerificationReport, Verifier};
use num_rational::Rational64;
use std::fmt;

/// Smallest cycle order the condition system and construction apply to.
pub const MIN_ORDER: usize = 9;

/// Columns forced by a failed exchange, identical in both rows.
pub const FORCED_WINDOW: [bool; 9] = [true, false, false, true, false, true, false, false, true];

fn require_min_order(n: usize) -> Result<()> {
    if n < MIN_ORDER {
        return Err(Error::domain(format!("cycle order must be at least {MIN_ORDER}, got {n}")));
    }
    Ok(())
}

/// A candidate code `C ∪ C̄` given by `x` (cycle side) and `xbar`
/// (complement side).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CodePair {
    x: Vec<bool>,
    xbar: Vec<bool>,
}

impl CodePair {
    pub fn new(x: Vec<bool>, xbar: Vec<bool>) -> Result<Self> {
        if x.len() != xbar.len() {
            return Err(Error::domain(format!(
                "row lengths differ: {} vs {}",
                x.len(),
                xbar.len()
            )));
        }
        Ok(Self { x, xbar })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            x: vec![false; n],
            xbar: vec![false; n],
        }
    }

    /// Low `n` bits of each mask, bit `k` for position `k`.
    pub fn from_masks(n: usize, x: u64, xbar: u64) -> Self {
        assert!(n <= 64);
        Self {
            x: (0..n).map(|k| x >> k & 1 == 1).collect(),
            xbar: (0..n).map(|k| xbar >> k & 1 == 1).collect(),
        }
    }

    pub fn from_bitstrings(x: &str, xbar: &str) -> Result<Self> {
        let row = |s: &str, line: usize| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::parse(line, format!("unexpected character {c:?}"))),
                })
                .collect()
        };
        let (x, xbar) = (row(x.trim(), 1)?, row(xbar.trim(), 2)?);
        if x.len() != xbar.len() {
            return Err(Error::parse(2, "rows have different lengths"));
        }
        if x.is_empty() {
            return Err(Error::parse(1, "empty row"));
        }
        Ok(Self { x, xbar })
    }

    /// Two lines of `0`/`1`: `x` then `xbar`.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        match lines.as_slice() {
            [x, xbar] => Self::from_bitstrings(x, xbar),
            _ => Err(Error::parse(0, "expected exactly two bitstring lines")),
        }
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", bits(&self.x), bits(&self.xbar))
    }

    /// Two-row drawing with the complement row on top, as in the
    /// construction's figure: `#` for code vertices, `.` otherwise.
    pub fn render_ascii(&self) -> String {
        let row = |r: &[bool]| -> String {
            r.iter()
                .enumerate()
                .map(|(k, &b)| {
                    let sep = if k > 0 && k % 9 == 0 { "|" } else { "" };
                    format!("{sep}{}", if b { '#' } else { '.' })
                })
                .collect()
        };
        format!("vbar {}\nv    {}\n", row(&self.xbar), row(&self.x))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn xbar(&self) -> &[bool] {
        &self.xbar
    }

    #[inline]
    fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.n() as isize) as usize
    }

    /// `x` at a position taken modulo `n`.
    #[inline]
    pub fn x_at(&self, i: isize) -> bool {
        self.x[self.wrap(i)]
    }

    #[inline]
    pub fn xbar_at(&self, i: isize) -> bool {
        self.xbar[self.wrap(i)]
    }

    pub fn set_x(&mut self, i: isize, value: bool) {
        let k = self.wrap(i);
        self.x[k] = value;
    }

    pub fn set_xbar(&mut self, i: isize, value: bool) {
        let k = self.wrap(i);
        self.xbar[k] = value;
    }

    pub fn cycle_count(&self) -> usize {
        self.x.iter().filter(|&&b| b).count()
    }

    pub fn bar_count(&self) -> usize {
        self.xbar.iter().filter(|&&b| b).count()
    }

    pub fn size(&self) -> usize {
        self.cycle_count() + self.bar_count()
    }

    /// Positions `j` with `x_j = xbar_j = 0`.
    pub fn bad_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| !self.x[j] && !self.xbar[j]).collect()
    }

    /// Positions `i` with `xbar_{i-1} + x_i + xbar_{i+1} = 0`.
    pub fn bar_i_set(&self) -> Vec<usize> {
        (0..self.n() as isize)
            .filter(|&i| !self.xbar_at(i - 1) && !self.x_at(i) && !self.xbar_at(i + 1))
            .map(|i| i as usize)
            .collect()
    }

    pub fn to_vertex_set(&self) -> VertexSet {
        let idx = PrismIndexing::new(self.n());
        let mut set = VertexSet::new(idx.order());
        for k in 0..self.n() {
            if self.x[k] {
                set.insert(k);
            }
            if self.xbar[k] {
                set.insert(idx.n + k);
            }
        }
        set
    }

    pub fn from_vertex_set(n: usize, set: &VertexSet) -> Result<Self> {
        if set.universe() != 2 * n {
            return Err(Error::domain(format!(
                "set over {} vertices is not a code of the order-{n} prism",
                set.universe()
            )));
        }
        Ok(Self {
            x: (0..n).map(|k| set.contains(k)).collect(),
            xbar: (0..n).map(|k| set.contains(n + k)).collect(),
        })
    }

    fn matches_window(&self, start: isize) -> bool {
        FORCED_WINDOW
            .iter()
            .enumerate()
            .all(|(k, &b)| self.x_at(start + k as isize) == b && self.xbar_at(start + k as isize) == b)
    }
}

fn bits(row: &[bool]) -> String {
    row.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Debug for CodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodePair({} / {})", bits(&self.x), bits(&self.xbar))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionFamily {
    /// `x_{i-1} + x_i + xbar_i + x_{i+1} >= 1`
    Dominated,
    /// `x_{i-1} + xbar_i + xbar_{i+1} + x_{i+2} >= 1`
    CycleAdjacent,
    /// `x_{i-1} + x_i + xbar_i + x_{i+2} + xbar_{i+2} + x_{i+3} >= 1`
    CycleDistanceTwo,
    /// `xbar_{i-1} + x_i + xbar_{i+1} + xbar_{j-1} + x_j + xbar_{j+1} >= 1`
    /// for `(j - i) mod n` not in `{0, 2}`.
    BarPair,
    /// `xbar_{i-1} + x_i + x_{i+2} + xbar_{i+3} >= 1`
    BarDistanceTwo,
}

impl ConditionFamily {
    pub const ALL: [ConditionFamily; 5] = [
        ConditionFamily::Dominated,
        ConditionFamily::CycleAdjacent,
        ConditionFamily::CycleDistanceTwo,
        ConditionFamily::BarPair,
        ConditionFamily::BarDistanceTwo,
    ];
}

/// A violated condition at 0-based positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub family: ConditionFamily,
    pub i: usize,
    /// Second position for the pairwise families (`i+1`, `i+2`, or `j`).
    pub j: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            ConditionFamily::Dominated | ConditionFamily::CycleAdjacent | ConditionFamily::CycleDistanceTwo => "C",
            ConditionFamily::BarPair | ConditionFamily::BarDistanceTwo => "Cbar",
        };
        match self.j {
            None => write!(f, "{name}({})", self.i + 1),
            Some(j) => write!(f, "{name}({},{})", self.i + 1, j + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    /// Sorted by family, then position.
    pub violations: Vec<Violation>,
    pub bad_indices: Vec<usize>,
    pub bar_i_set: Vec<usize>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, family: ConditionFamily) -> usize {
        self.violations.iter().filter(|v| v.family == family).count()
    }
}

/// Walks every condition instance; `emit` returns `false` to stop early.
fn scan_conditions(code: &CodePair, emit: &mut dyn FnMut(Violation) -> bool) {
    let n = code.n() as isize;
    let x = |k: isize| code.x_at(k);
    let xb = |k: isize| code.xbar_at(k);
    let pos = |k: isize| k.rem_euclid(n) as usize;
    let fam = |family, i: isize, j: Option<isize>| Violation {
        family,
        i: pos(i),
        j: j.map(pos),
    };

    for i in 0..n {
        if !(x(i - 1) || x(i) || xb(i) || x(i + 1)) && !emit(fam(ConditionFamily::Dominated, i, None)) {
            return;
        }
    }
    for i in 0..n {
        if !(x(i - 1) || xb(i) || xb(i + 1) || x(i + 2))
            && !emit(fam(ConditionFamily::CycleAdjacent, i, Some(i + 1)))
        {
            return;
        }
    }
    for i in 0..n {
        if !(x(i - 1) || x(i) || xb(i) || x(i + 2) || xb(i + 2) || x(i + 3))
            && !emit(fam(ConditionFamily::CycleDistanceTwo, i, Some(i + 2)))
        {
            return;
        }
    }
    // `xbar_{k-1} + x_k + xbar_{k+1}`, the part of a bar condition tied to one position.
    let bar_part: Vec<bool> = (0..n).map(|k| xb(k - 1) || x(k) || xb(k + 1)).collect();
    for i in 0..n {
        for j in 0..n {
            let gap = (j - i).rem_euclid(n);
            if gap == 0 || gap == 2 {
                continue;
            }
            if !(bar_part[i as usize] || bar_part[j as usize])
                && !emit(fam(ConditionFamily::BarPair, i, Some(j)))
            {
                return;
            }
        }
    }
    for i in 0..n {
        if !(xb(i - 1) || x(i) || x(i + 2) || xb(i + 3))
            && !emit(fam(ConditionFamily::BarDistanceTwo, i, Some(i + 2)))
        {
            return;
        }
    }
}

/// Evaluates all five condition families on `code`.
pub fn lemma1_check(code: &CodePair) -> Result<ConditionReport> {
    require_min_order(code.n())?;
    let mut violations = Vec::new();
    scan_conditions(code, &mut |v| {
        violations.push(v);
        true
    });
    Ok(ConditionReport {
        violations,
        bad_indices: code.bad_indices(),
        bar_i_set: code.bar_i_set(),
    })
}

/// `true` when no condition is violated; stops at the first violation.
pub fn conditions_hold(code: &CodePair) -> Result<bool> {
    require_min_order(code.n())?;
    let mut ok = true;
    scan_conditions(code, &mut |_| {
        ok = false;
        false
    });
    Ok(ok)
}

/// `C_n C̄_n` together with a verifier, for checking many codes of one order.
#[derive(Clone, Debug)]
pub struct CyclePrism {
    graph: Graph,
    indexing: PrismIndexing,
    verifier: Verifier,
}

impl CyclePrism {
    pub fn new(n: usize) -> Result<Self> {
        let (graph, indexing) = cycle_prism(n)?;
        let verifier = Verifier::new(&graph, 1)?;
        Ok(Self {
            graph,
            indexing,
            verifier,
        })
    }

    pub fn n(&self) -> usize {
        self.indexing.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn indexing(&self) -> PrismIndexing {
        self.indexing
    }

    pub fn verifier(&self) -> &Verifier {
        &self.verifier
    }

    fn check_order(&self, code: &CodePair) {
        assert_eq!(code.n(), self.n(), "code order does not match the prism");
    }

    /// Definitional check on the prism graph.
    pub fn verify(&self, code: &CodePair) -> VerificationReport {
        self.check_order(code);
        self.verifier.report(&code.to_vertex_set())
    }

    pub fn is_valid(&self, code: &CodePair) -> bool {
        self.check_order(code);
        self.verifier.is_valid(&code.to_vertex_set())
    }

    /// Identifying-code test from the conditions alone when `|C̄| >= 4`
    /// (where they are sufficient); otherwise the definitional check.
    pub fn equiv_verify(&self, code: &CodePair) -> Result<bool> {
        self.check_order(code);
        if code.bar_count() >= 4 {
            conditions_hold(code)
        } else {
            require_min_order(code.n())?;
            Ok(self.is_valid(code))
        }
    }

    /// Tries the exchanges at position `i` (0-based).
    pub fn exchange(&self, code: &CodePair, i: usize) -> Result<ExchangeResult> {
        self.check_order(code);
        require_min_order(code.n())?;
        let i = i as isize;
        if !exchange_hypothesis(code, i) || !self.is_valid(code) {
            return Ok(ExchangeResult::NotApplicable);
        }

        // Grow the cycle side at i, i+1 and drop the bar vertices at i-1, i+2.
        let mut grown = code.clone();
        grown.set_x(i, true);
        grown.set_x(i + 1, true);
        grown.set_xbar(i - 1, false);
        grown.set_xbar(i + 2, false);
        if self.equiv_verify(&grown)? {
            return Ok(ExchangeResult::Improved {
                code: grown,
                exchange: Exchange::Grow,
            });
        }

        // Move x_{i+2} across to xbar_{i+1}, then the mirror image about the
        // centre of the zero block: x_{i-1} across to xbar_i.
        for (exchange, drop, add) in [(Exchange::Shift, i + 2, i + 1), (Exchange::ShiftMirror, i - 1, i)] {
            let mut shifted = code.clone();
            shifted.set_x(drop, false);
            shifted.set_xbar(add, true);
            if self.equiv_verify(&shifted)? {
                return Ok(ExchangeResult::Improved { code: shifted, exchange });
            }
        }

        for start in [i - 1, i - 6] {
            if code.matches_window(start) {
                return Ok(ExchangeResult::PatternDetected {
                    start: start.rem_euclid(code.n() as isize) as usize,
                });
            }
        }
        Ok(ExchangeResult::NotApplicable)
    }
}

/// Hypothesis block at position `i`: `|C̄| >= 6`, none of `i-5, i, i+1, i+6`
/// in the bar-`I` set, and both columns `i, i+1` empty.
pub fn exchange_hypothesis(code: &CodePair, i: isize) -> bool {
    let in_bar_i = |k: isize| !code.xbar_at(k - 1) && !code.x_at(k) && !code.xbar_at(k + 1);
    code.bar_count() >= 6
        && ![i - 5, i, i + 1, i + 6].into_iter().any(in_bar_i)
        && !code.x_at(i)
        && !code.x_at(i + 1)
        && !code.xbar_at(i)
        && !code.xbar_at(i + 1)
}

/// Which exchange produced an improved code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exchange {
    /// `C ∪ {v_i, v_{i+1}}`, `C̄ ∖ {v̄_{i-1}, v̄_{i+2}}`.
    Grow,
    /// `C ∖ {v_{i+2}}`, `C̄ ∪ {v̄_{i+1}}`.
    Shift,
    /// `C ∖ {v_{i-1}}`, `C̄ ∪ {v̄_i}`.
    ShiftMirror,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExchangeResult {
    Improved { code: CodePair, exchange: Exchange },
    /// The forced 9-column window starts at this 0-based position.
    PatternDetected { start: usize },
    NotApplicable,
}

pub fn lemma1_equiv_verify(code: &CodePair) -> Result<bool> {
    require_min_order(code.n())?;
    if code.bar_count() >= 4 {
        conditions_hold(code)
    } else {
        CyclePrism::new(code.n())?.equiv_verify(code)
    }
}

/// The exchange step on a one-off code; see [`CyclePrism::exchange`].
pub fn lemma2b_exchange(code: &CodePair, i: usize) -> Result<ExchangeResult> {
    require_min_order(code.n())?;
    CyclePrism::new(code.n())?.exchange(code, i)
}

/// Periodic construction: per full block of nine columns, cycle positions
/// 1–3 and bar positions 5–8 (1-based within the block); every column past
/// the last full block is taken on the cycle side.
pub fn pattern_code(n: usize) -> Result<CodePair> {
    require_min_order(n)?;
    let full = 9 * (n / 9);
    let mut code = CodePair::empty(n);
    for i in 1..=n {
        let r = i % 9;
        code.x[i - 1] = (i <= full && (1..=3).contains(&r)) || i > full;
        code.xbar[i - 1] = i <= full && (5..=8).contains(&r);
    }
    Ok(code)
}

/// Size of the construction, `n - 2⌊n/9⌋`, and the closed form `7n/9 + 16/9`.
pub fn upper_bound(n: usize) -> Result<(usize, Rational64)> {
    require_min_order(n)?;
    let exact = n - 2 * (n / 9);
    let analytic = Rational64::new(7 * n as i64 + 16, 9);
    Ok((exact, analytic))
}

/// `7n/9 - 12`; negative for small `n`.
pub fn lower_bound(n: usize) -> Result<Rational64> {
    require_min_order(n)?;
    Ok(Rational64::new(7 * n as i64, 9) - 12)
}
