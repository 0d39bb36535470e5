//! The rule catalog: five basic rules (R1-R5) and five derived rules
//! (R6-R10), each a pair of gate-sequence schemas that may be applied in
//! either direction.
//!
//! A [`RuleInstance`] carries the full set of schema parameters, so both
//! sides of the rule are computable from the instance alone. Matching infers
//! those parameters from a circuit segment; application re-derives both
//! sides and checks the segment against the source side before splicing.

mod optimize;
mod trace;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ir::{Circuit, Gate, IrError, LineSet};

pub use optimize::optimize;
pub use trace::{
    replay, verify_step, ReplayError, RewriteStep, RewriteTrace, StepKind, TraceBuilder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("invalid bindings for {rule}: {reason}")]
    InvalidBindings { rule: RuleId, reason: String },
    #[error("stale instance: segment at {position} no longer matches the {rule} {direction} side")]
    Stale { rule: RuleId, position: usize, direction: Direction },
    #[error("position {position} out of bounds for a circuit of {len} gates")]
    OutOfBounds { position: usize, len: usize },
    #[error(transparent)]
    Ir(#[from] IrError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
    ];

    pub fn is_basic(&self) -> bool {
        matches!(self, RuleId::R1 | RuleId::R2 | RuleId::R3 | RuleId::R4 | RuleId::R5)
    }

    /// One-line schema summary.
    pub fn summary(&self) -> &'static str {
        match self {
            RuleId::R1 => "A A = e (adjacent identical gates cancel)",
            RuleId::R2 => "G[P,N+p,q] G[P+p,N,q] = G[P,N,q] (merge on one opposite-polarity control)",
            RuleId::R3 => "A B = B A when some control has opposite polarities in A and B",
            RuleId::R4 => "CNOT[p,q] CNOT[q,p] CNOT[p,q] C1 = C2 CNOT[p,q] CNOT[q,p] CNOT[p,q] (swap moves through a gate)",
            RuleId::R5 => "A0 A1 B1..Bm..B1 A1 A0 = B1'..Bm'..B1' (polarity transfer through a controlled palindrome)",
            RuleId::R6 => "G[P,N,q] = product over subsets S of Q of G[P+S, N+(Q-S), q]",
            RuleId::R7 => "A B = B A when A and B share a target",
            RuleId::R8 => "G[P,N,q] = X[N] G[P+N,{},q] X[N]",
            RuleId::R9 => "G[P1,N1,p] G[P2+p,N2,q] = G[P2,N2+p,q] G[P1,N1,p] when P1<=P2, N1<=N2",
            RuleId::R10 => "G[P+p,{},q] G[P+q,{},p] G[P+p,{},q] = G[P+q,{},p] G[P+p,{},q] G[P+q,{},p]",
        }
    }

    /// Longer description for `rules show`.
    pub fn description(&self) -> &'static str {
        match self {
            RuleId::R1 => "Basic. Two adjacent identical gates are removed. Backward: insert a gate pair A A (A given in the bindings).",
            RuleId::R2 => "Basic. A0 = G[P, N u {p}, q] followed by A1 = G[P u {p}, N, q] merges into A = G[P, N, q]. Backward splits A on a fresh line p supplied in the bindings.",
            RuleId::R3 => "Basic. A = G[P1,N1,p], B = G[P2,N2,q] commute when P1 n N2 or P2 n N1 is nonempty: at most one of them fires on any input.",
            RuleId::R4 => "Basic. With A = CNOT[p,q], B = CNOT[q,p], C1 = G[P u P1, N u N1, p], C2 = G[P u P2, N u N2, q] and either P1={q},P2={p},N1=N2={} (variant pos) or N1={q},N2={p},P1=P2={} (variant neg): A B A C1 = C2 A B A.",
            RuleId::R5 => "Basic. A0 = G[P, N u Q, q], A1 = G[P u Q, N, q], Q = (q1..qm). B_i = G[P u {q} u {q_i+1..q_m}, N u {q_1..q_i-1}, q_i], B_i' = G[P u {q_i+1..q_m}, N u {q} u {q_1..q_i-1}, q_i]. A0 A1 B1..Bm..B1 A1 A0 = B1'..Bm'..B1'.",
            RuleId::R6 => "Derived. A = G[P,N,q] expands over lines Q disjoint from its support into 2^|Q| gates, one per polarity assignment of Q. Subset i takes the lines of Q (ascending) whose bit in i, read most significant first, is 1 as positive.",
            RuleId::R7 => "Derived. Two gates with the same target commute.",
            RuleId::R8 => "Derived. A = G[P,N,q] with N = (q1..qm) equals X[q1]..X[qm] G[P u N, {}, q] X[q1]..X[qm].",
            RuleId::R9 => "Derived. A = G[P1,N1,p], B1 = G[P2 u {p}, N2, q], B2 = G[P2, N2 u {p}, q] with P1 <= P2 and N1 <= N2: A B1 = B2 A.",
            RuleId::R10 => "Derived. A = G[P u {p}, {}, q], B = G[P u {q}, {}, p]: A B A = B A B.",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = RuleId::ALL.iter().position(|r| r == self).unwrap() + 1;
        write!(f, "R{n}")
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('R').or_else(|| s.strip_prefix('r')).unwrap_or(s);
        match digits.parse::<usize>() {
            Ok(n) if (1..=10).contains(&n) => Ok(RuleId::ALL[n - 1]),
            _ => Err(format!("unknown rule {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flipped(&self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fwd" | "forward" => Ok(Direction::Forward),
            "bwd" | "backward" => Ok(Direction::Backward),
            _ => Err(format!("unknown direction {s:?}")),
        }
    }
}

/// Which polarity condition of R4 is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapVariant {
    /// `P1 = {q}`, `P2 = {p}`.
    Positive,
    /// `N1 = {q}`, `N2 = {p}`.
    Negative,
}

/// Instantiated schema parameters, one variant per rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bindings {
    R1 { gate: Gate },
    R2 { positives: LineSet, negatives: LineSet, p: usize, q: usize },
    R3 { a: Gate, b: Gate },
    R4 { variant: SwapVariant, p: usize, q: usize, positives: LineSet, negatives: LineSet },
    /// `lines` is the ordered `Q = (q_1, .., q_m)`.
    R5 { positives: LineSet, negatives: LineSet, q: usize, lines: Vec<usize> },
    /// `lines` is `Q`, ascending.
    R6 { positives: LineSet, negatives: LineSet, q: usize, lines: Vec<usize> },
    R7 { a: Gate, b: Gate },
    /// `negatives` is the ordered X-gate sequence.
    R8 { positives: LineSet, negatives: Vec<usize>, q: usize },
    R9 { p1: LineSet, n1: LineSet, p: usize, p2: LineSet, n2: LineSet, q: usize },
    R10 { positives: LineSet, p: usize, q: usize },
}

fn invalid(rule: RuleId, reason: impl Into<String>) -> RuleError {
    RuleError::InvalidBindings { rule, reason: reason.into() }
}

fn ordered_set(rule: RuleId, lines: &[usize]) -> Result<LineSet, RuleError> {
    LineSet::from_lines(lines).map_err(|e| invalid(rule, e.to_string()))
}

impl Bindings {
    pub fn rule(&self) -> RuleId {
        match self {
            Bindings::R1 { .. } => RuleId::R1,
            Bindings::R2 { .. } => RuleId::R2,
            Bindings::R3 { .. } => RuleId::R3,
            Bindings::R4 { .. } => RuleId::R4,
            Bindings::R5 { .. } => RuleId::R5,
            Bindings::R6 { .. } => RuleId::R6,
            Bindings::R7 { .. } => RuleId::R7,
            Bindings::R8 { .. } => RuleId::R8,
            Bindings::R9 { .. } => RuleId::R9,
            Bindings::R10 { .. } => RuleId::R10,
        }
    }

    /// Left and right sides of the instantiated rule, after checking every
    /// side condition of the schema.
    pub fn sides(&self) -> Result<(Vec<Gate>, Vec<Gate>), RuleError> {
        let rule = self.rule();
        let g = |p: LineSet, n: LineSet, t: usize| -> Result<Gate, RuleError> {
            Gate::from_sets(p, n, t).map_err(|e| invalid(rule, e.to_string()))
        };
        match self {
            Bindings::R1 { gate } => Ok((vec![*gate, *gate], vec![])),
            Bindings::R2 { positives, negatives, p, q } => {
                if positives.union(*negatives).contains(*p) || p == q {
                    return Err(invalid(rule, "p must be a fresh line"));
                }
                let a0 = g(*positives, negatives.with(*p), *q)?;
                let a1 = g(positives.with(*p), *negatives, *q)?;
                let a = g(*positives, *negatives, *q)?;
                Ok((vec![a0, a1], vec![a]))
            }
            Bindings::R3 { a, b } => {
                if !opposite_polarity_control(a, b) {
                    return Err(invalid(rule, "no shared control with opposite polarities"));
                }
                Ok((vec![*a, *b], vec![*b, *a]))
            }
            Bindings::R4 { variant, p, q, positives, negatives } => {
                if p == q {
                    return Err(invalid(rule, "p and q must differ"));
                }
                let rest = positives.union(*negatives);
                if rest.contains(*p) || rest.contains(*q) {
                    return Err(invalid(rule, "p and q must not occur in P or N"));
                }
                let a = g(LineSet::single(*p), LineSet::EMPTY, *q)?;
                let b = g(LineSet::single(*q), LineSet::EMPTY, *p)?;
                let (c1, c2) = match variant {
                    SwapVariant::Positive => (
                        g(positives.with(*q), *negatives, *p)?,
                        g(positives.with(*p), *negatives, *q)?,
                    ),
                    SwapVariant::Negative => (
                        g(*positives, negatives.with(*q), *p)?,
                        g(*positives, negatives.with(*p), *q)?,
                    ),
                };
                Ok((vec![a, b, a, c1], vec![c2, a, b, a]))
            }
            Bindings::R5 { positives, negatives, q, lines } => {
                let qset = ordered_set(rule, lines)?;
                if lines.is_empty() {
                    return Err(invalid(rule, "Q must be nonempty"));
                }
                if qset.contains(*q) || !qset.intersection(positives.union(*negatives)).is_empty() {
                    return Err(invalid(rule, "Q must be disjoint from P, N and q"));
                }
                let a0 = g(*positives, negatives.union(qset), *q)?;
                let a1 = g(positives.union(qset), *negatives, *q)?;
                let m = lines.len();
                let mut bs = Vec::with_capacity(m);
                let mut bps = Vec::with_capacity(m);
                for i in 0..m {
                    let later: LineSet = lines[i + 1..].iter().copied().collect();
                    let earlier: LineSet = lines[..i].iter().copied().collect();
                    bs.push(g(positives.with(*q).union(later), negatives.union(earlier), lines[i])?);
                    bps.push(g(positives.union(later), negatives.with(*q).union(earlier), lines[i])?);
                }
                let mut lhs = vec![a0, a1];
                lhs.extend(palindrome(&bs));
                lhs.extend([a1, a0]);
                Ok((lhs, palindrome(&bps)))
            }
            Bindings::R6 { positives, negatives, q, lines } => {
                let qset = ordered_set(rule, lines)?;
                if lines.is_empty() {
                    return Err(invalid(rule, "Q must be nonempty"));
                }
                if !lines.windows(2).all(|w| w[0] < w[1]) {
                    return Err(invalid(rule, "Q must be listed in ascending order"));
                }
                if qset.contains(*q) || !qset.intersection(positives.union(*negatives)).is_empty() {
                    return Err(invalid(rule, "Q must be disjoint from the gate's support"));
                }
                let a = g(*positives, *negatives, *q)?;
                let m = lines.len();
                let mut expansion = Vec::with_capacity(1 << m);
                for i in 0..(1usize << m) {
                    let chosen: LineSet = (0..m)
                        .filter(|k| (i >> (m - 1 - k)) & 1 == 1)
                        .map(|k| lines[k])
                        .collect();
                    expansion.push(g(positives.union(chosen), negatives.union(qset.difference(chosen)), *q)?);
                }
                Ok((vec![a], expansion))
            }
            Bindings::R7 { a, b } => {
                if a.target() != b.target() {
                    return Err(invalid(rule, "gates must share a target"));
                }
                Ok((vec![*a, *b], vec![*b, *a]))
            }
            Bindings::R8 { positives, negatives, q } => {
                let nset = ordered_set(rule, negatives)?;
                if negatives.is_empty() {
                    return Err(invalid(rule, "N must be nonempty"));
                }
                let a = g(*positives, nset, *q)?;
                let b = g(positives.union(nset), LineSet::EMPTY, *q)?;
                let xs = negatives
                    .iter()
                    .map(|&l| g(LineSet::EMPTY, LineSet::EMPTY, l))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut rhs = xs.clone();
                rhs.push(b);
                rhs.extend(xs);
                Ok((vec![a], rhs))
            }
            Bindings::R9 { p1, n1, p, p2, n2, q } => {
                if !p1.is_subset(*p2) || !n1.is_subset(*n2) {
                    return Err(invalid(rule, "requires P1 <= P2 and N1 <= N2"));
                }
                let a = g(*p1, *n1, *p)?;
                let b1 = g(p2.with(*p), *n2, *q)?;
                let b2 = g(*p2, n2.with(*p), *q)?;
                Ok((vec![a, b1], vec![b2, a]))
            }
            Bindings::R10 { positives, p, q } => {
                if p == q {
                    return Err(invalid(rule, "p and q must differ"));
                }
                let a = g(positives.with(*p), LineSet::EMPTY, *q)?;
                let b = g(positives.with(*q), LineSet::EMPTY, *p)?;
                Ok((vec![a, b, a], vec![b, a, b]))
            }
        }
    }
}

fn palindrome(gates: &[Gate]) -> Vec<Gate> {
    let mut out = gates.to_vec();
    out.extend(gates.iter().rev().skip(1));
    out
}

/// Rule 3's side condition: some shared control has opposite polarities.
pub fn opposite_polarity_control(a: &Gate, b: &Gate) -> bool {
    a.positive_mask() & b.negative_mask() != 0 || b.positive_mask() & a.negative_mask() != 0
}

/// A fully bound rule application at a position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub position: usize,
    pub direction: Direction,
    pub bindings: Bindings,
}

impl RuleInstance {
    pub fn new(position: usize, direction: Direction, bindings: Bindings) -> Self {
        Self { position, direction, bindings }
    }

    pub fn rule(&self) -> RuleId {
        self.bindings.rule()
    }

    /// `(source side, replacement side)` for this direction.
    pub fn oriented_sides(&self) -> Result<(Vec<Gate>, Vec<Gate>), RuleError> {
        let (lhs, rhs) = self.bindings.sides()?;
        Ok(match self.direction {
            Direction::Forward => (lhs, rhs),
            Direction::Backward => (rhs, lhs),
        })
    }

    /// The same rule applied the other way at the same position.
    pub fn inverted(&self) -> RuleInstance {
        RuleInstance { position: self.position, direction: self.direction.flipped(), bindings: self.bindings.clone() }
    }
}

/// First instance of `rule` matching at `position` in `direction`.
///
/// Sides with free parameters (R1 and R2 backward, R6 forward) cannot be
/// inferred from the circuit; build those instances explicitly.
pub fn match_rule(c: &Circuit, rule: RuleId, position: usize, direction: Direction) -> Option<RuleInstance> {
    match_all(c, rule, position, direction).into_iter().next()
}

/// Every binding of `rule` matching at `position` in `direction`.
pub fn match_all(c: &Circuit, rule: RuleId, position: usize, direction: Direction) -> Vec<RuleInstance> {
    let gates = c.gates();
    if position > gates.len() {
        return Vec::new();
    }
    let seg = &gates[position..];
    candidates(seg, rule, direction)
        .into_iter()
        .filter_map(|b| {
            let inst = RuleInstance::new(position, direction, b);
            let (from, to) = inst.oriented_sides().ok()?;
            let fits = to.iter().all(|g| g.fits(c.width()));
            (fits && !from.is_empty() && seg.starts_with(&from)).then_some(inst)
        })
        .collect()
}

fn candidates(seg: &[Gate], rule: RuleId, dir: Direction) -> Vec<Bindings> {
    use Direction::*;
    let mut out = Vec::new();
    let at = |i: usize| seg.get(i).copied();
    match (rule, dir) {
        (RuleId::R1, Forward) => {
            if let (Some(a), Some(b)) = (at(0), at(1)) {
                if a == b {
                    out.push(Bindings::R1 { gate: a });
                }
            }
        }
        (RuleId::R1, Backward) => {}
        (RuleId::R2, Forward) => {
            if let (Some(a0), Some(a1)) = (at(0), at(1)) {
                let diff = a0.negative_set().intersection(a1.positive_set());
                if a0.target() == a1.target() && diff.len() == 1 {
                    let p = diff.iter().next().unwrap();
                    out.push(Bindings::R2 {
                        positives: a0.positive_set(),
                        negatives: a1.negative_set(),
                        p,
                        q: a0.target(),
                    });
                }
            }
        }
        (RuleId::R2, Backward) => {}
        (RuleId::R3, _) | (RuleId::R7, _) => {
            if let (Some(x), Some(y)) = (at(0), at(1)) {
                // The backward side is `B A`.
                let (a, b) = if dir == Forward { (x, y) } else { (y, x) };
                out.push(if rule == RuleId::R3 { Bindings::R3 { a, b } } else { Bindings::R7 { a, b } });
            }
        }
        (RuleId::R4, _) => {
            if seg.len() >= 4 {
                // Forward side A B A C1; backward side C2 A B A.
                let (cnot, other) = if dir == Forward { (seg[0], seg[3]) } else { (seg[1], seg[0]) };
                if let Some(p) = cnot.positives().first().copied() {
                    let q = cnot.target();
                    let (ctl_line, tgt) = if dir == Forward { (q, p) } else { (p, q) };
                    if other.target() == tgt {
                        for variant in [SwapVariant::Positive, SwapVariant::Negative] {
                            let (pos, neg) = match variant {
                                SwapVariant::Positive => (other.positive_set().without(ctl_line), other.negative_set()),
                                SwapVariant::Negative => (other.positive_set(), other.negative_set().without(ctl_line)),
                            };
                            out.push(Bindings::R4 { variant, p, q, positives: pos, negatives: neg });
                        }
                    }
                }
            }
        }
        (RuleId::R5, Forward) => {
            if let (Some(a0), Some(a1)) = (at(0), at(1)) {
                let q = a0.target();
                let qset = a1.positive_set().difference(a0.positive_set());
                let m = qset.len();
                if m >= 1 && seg.len() >= 2 * m + 3 {
                    let lines: Vec<usize> = seg[2..2 + m].iter().map(|g| g.target()).collect();
                    out.push(Bindings::R5 {
                        positives: a0.positive_set(),
                        negatives: a1.negative_set(),
                        q,
                        lines,
                    });
                }
            }
        }
        (RuleId::R5, Backward) => {
            let mut m = 1;
            while 2 * m - 1 <= seg.len() {
                let lines: Vec<usize> = seg[..m].iter().map(|g| g.target()).collect();
                let mid = seg[m - 1];
                let earlier: LineSet = lines[..m - 1].iter().copied().collect();
                for q in mid.negative_set().difference(earlier).iter() {
                    out.push(Bindings::R5 {
                        positives: mid.positive_set(),
                        negatives: mid.negative_set().difference(earlier).without(q),
                        q,
                        lines: lines.clone(),
                    });
                }
                m += 1;
            }
        }
        (RuleId::R6, Forward) => {}
        (RuleId::R6, Backward) => {
            let mut m = 1;
            while (1usize << m) <= seg.len() && m < 16 {
                let first = seg[0];
                let last = seg[(1 << m) - 1];
                let qset = last.positive_set().difference(first.positive_set());
                if qset.len() == m {
                    out.push(Bindings::R6 {
                        positives: first.positive_set(),
                        negatives: last.negative_set(),
                        q: first.target(),
                        lines: qset.to_vec(),
                    });
                }
                m += 1;
            }
        }
        (RuleId::R8, Forward) => {
            if let Some(a) = at(0) {
                if !a.negative_set().is_empty() {
                    out.push(Bindings::R8 {
                        positives: a.positive_set(),
                        negatives: a.negatives(),
                        q: a.target(),
                    });
                }
            }
        }
        (RuleId::R8, Backward) => {
            let mut m = 1;
            while 2 * m < seg.len() {
                if !seg[m - 1].is_x() {
                    break;
                }
                let negatives: Vec<usize> = seg[..m].iter().map(|g| g.target()).collect();
                let mid = seg[m];
                let nset: LineSet = negatives.iter().copied().collect();
                out.push(Bindings::R8 {
                    positives: mid.positive_set().difference(nset),
                    negatives,
                    q: mid.target(),
                });
                m += 1;
            }
        }
        (RuleId::R9, _) => {
            if let (Some(x), Some(y)) = (at(0), at(1)) {
                // Forward side A B1; backward side B2 A.
                let (a, b) = if dir == Forward { (x, y) } else { (y, x) };
                let p = a.target();
                out.push(Bindings::R9 {
                    p1: a.positive_set(),
                    n1: a.negative_set(),
                    p,
                    p2: b.positive_set().without(p),
                    n2: b.negative_set().without(p),
                    q: b.target(),
                });
            }
        }
        (RuleId::R10, _) => {
            if let (Some(x), Some(y)) = (at(0), at(1)) {
                // Forward side A B A with A targeting q; backward B A B.
                let (a, b) = if dir == Forward { (x, y) } else { (y, x) };
                let q = a.target();
                let p = b.target();
                out.push(Bindings::R10 { positives: a.positive_set().without(p), p, q });
            }
        }
    }
    out
}

/// Applies a matched instance, returning the rewritten circuit and its step.
pub fn apply_rule(c: &Circuit, inst: &RuleInstance) -> Result<(Circuit, RewriteStep), RuleError> {
    let mut out = c.clone();
    let step = apply_in_place(&mut out, inst)?;
    Ok((out, step))
}

pub(crate) fn apply_in_place(c: &mut Circuit, inst: &RuleInstance) -> Result<RewriteStep, RuleError> {
    let (from, to) = inst.oriented_sides()?;
    let pos = inst.position;
    let len = c.len();
    if pos > len || pos + from.len() > len {
        return Err(RuleError::OutOfBounds { position: pos, len });
    }
    if c.gates()[pos..pos + from.len()] != from[..] {
        return Err(RuleError::Stale { rule: inst.rule(), position: pos, direction: inst.direction });
    }
    c.splice(pos, from.len(), &to)?;
    Ok(RewriteStep { kind: StepKind::Rule(inst.clone()), removed_count: from.len(), inserted: to })
}

/// All instances of the given rules over every position and direction, in
/// (position, rule, direction) order. Overlapping matches are all reported.
pub fn enumerate_matches(c: &Circuit, rules: &[RuleId]) -> Vec<RuleInstance> {
    let mut sorted: Vec<RuleId> = rules.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::new();
    for pos in 0..c.len() {
        for &r in &sorted {
            for dir in [Direction::Forward, Direction::Backward] {
                out.extend(match_all(c, r, pos, dir));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate;

    fn g(p: &[usize], n: &[usize], t: usize) -> Gate {
        Gate::new(p, n, t).unwrap()
    }

    fn circ(width: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new(width, gates).unwrap()
    }

    #[test]
    fn r1_matches_identical_pair() {
        let a = g(&[1], &[2], 3);
        let c = circ(3, vec![a, a]);
        let inst = match_rule(&c, RuleId::R1, 0, Direction::Forward).unwrap();
        let (out, step) = apply_rule(&c, &inst).unwrap();
        assert!(out.is_empty());
        assert_eq!(step.removed_count, 2);
    }

    #[test]
    fn r2_merges_opposite_polarity_pair() {
        let c = circ(3, vec![g(&[], &[1], 3), g(&[1], &[], 3)]);
        let inst = match_rule(&c, RuleId::R2, 0, Direction::Forward).unwrap();
        assert!(matches!(inst.bindings, Bindings::R2 { p: 1, q: 3, .. }));
        let (out, _) = apply_rule(&c, &inst).unwrap();
        assert_eq!(out.gates(), &[Gate::x(3).unwrap()]);
        // wrong order is not the schema
        let swapped = circ(3, vec![g(&[1], &[], 3), g(&[], &[1], 3)]);
        assert!(match_rule(&swapped, RuleId::R2, 0, Direction::Forward).is_none());
    }

    #[test]
    fn r3_needs_opposite_polarity() {
        let c = circ(2, vec![Gate::x(1).unwrap(), Gate::x(2).unwrap()]);
        assert!(match_rule(&c, RuleId::R3, 0, Direction::Forward).is_none());
        let c = circ(3, vec![g(&[1], &[], 3), g(&[], &[1], 2)]);
        assert!(match_rule(&c, RuleId::R3, 0, Direction::Forward).is_some());
    }

    #[test]
    fn r8_forward_example() {
        let c = circ(3, vec![g(&[1], &[2], 3)]);
        let inst = match_rule(&c, RuleId::R8, 0, Direction::Forward).unwrap();
        let (out, _) = apply_rule(&c, &inst).unwrap();
        assert_eq!(out.gates(), &[Gate::x(2).unwrap(), g(&[1, 2], &[], 3), Gate::x(2).unwrap()]);
        let back = match_rule(&out, RuleId::R8, 0, Direction::Backward).unwrap();
        assert_eq!(apply_rule(&out, &back).unwrap().0, c);
    }

    #[test]
    fn r5_cnot_to_negative_cnot() {
        // X[2] CNOT[2,1] X[2] -> split both X gates (R2 backward on p = 1),
        // reorder the trailing pair (R7), then R5 forward.
        let x2 = Gate::x(2).unwrap();
        let c = circ(2, vec![x2, Gate::cnot(2, 1).unwrap(), x2]);
        let split = |pos| {
            RuleInstance::new(
                pos,
                Direction::Backward,
                Bindings::R2 { positives: LineSet::EMPTY, negatives: LineSet::EMPTY, p: 1, q: 2 },
            )
        };
        let (c1, _) = apply_rule(&c, &split(0)).unwrap();
        let (c2, _) = apply_rule(&c1, &split(3)).unwrap();
        let r7 = match_rule(&c2, RuleId::R7, 3, Direction::Forward).unwrap();
        let (c3, _) = apply_rule(&c2, &r7).unwrap();
        assert_eq!(c3.len(), 5);
        let r5 = match_rule(&c3, RuleId::R5, 0, Direction::Forward).unwrap();
        let (c4, _) = apply_rule(&c3, &r5).unwrap();
        assert_eq!(c4.gates(), &[g(&[], &[2], 1)]);
        assert_eq!(simulate(&c).unwrap(), simulate(&c4).unwrap());

        // and back again from the negative CNOT
        let back = match_all(&c4, RuleId::R5, 0, Direction::Backward);
        let with_q2 = back
            .iter()
            .find(|i| matches!(i.bindings, Bindings::R5 { q: 2, .. }))
            .unwrap();
        let (c5, _) = apply_rule(&c4, with_q2).unwrap();
        assert_eq!(c5, c3);
    }

    #[test]
    fn r5_side_lengths() {
        for m in 1..=3usize {
            let lines: Vec<usize> = (2..2 + m).collect();
            let b = Bindings::R5 { positives: LineSet::EMPTY, negatives: LineSet::EMPTY, q: 1, lines };
            let (lhs, rhs) = b.sides().unwrap();
            assert_eq!(lhs.len(), 2 * m + 3);
            assert_eq!(rhs.len(), 2 * m - 1);
        }
    }

    #[test]
    fn r6_expands_over_polarities() {
        let a = Gate::cnot(3, 4).unwrap();
        let inst = RuleInstance::new(
            0,
            Direction::Forward,
            Bindings::R6 { positives: a.positive_set(), negatives: LineSet::EMPTY, q: 4, lines: vec![1, 2] },
        );
        let c = circ(4, vec![a]);
        let (out, _) = apply_rule(&c, &inst).unwrap();
        assert_eq!(out.len(), 4);
        let mut pols: Vec<(Option<bool>, Option<bool>)> =
            out.gates().iter().map(|g| (g.polarity(1), g.polarity(2))).collect();
        pols.sort();
        pols.dedup();
        assert_eq!(pols.len(), 4);
        assert_eq!(simulate(&c).unwrap(), simulate(&out).unwrap());
        let back = match_all(&out, RuleId::R6, 0, Direction::Backward);
        assert!(back.iter().any(|i| i.bindings == inst.bindings));
    }

    #[test]
    fn stale_instance_rejected() {
        let a = g(&[1], &[], 2);
        let c = circ(2, vec![a, a]);
        let inst = match_rule(&c, RuleId::R1, 0, Direction::Forward).unwrap();
        let other = circ(2, vec![a, Gate::x(1).unwrap()]);
        assert!(matches!(apply_rule(&other, &inst), Err(RuleError::Stale { .. })));
    }

    #[test]
    fn enumerate_reports_overlaps() {
        let cn = Gate::cnot(1, 2).unwrap();
        let c = circ(2, vec![cn, cn, cn]);
        let found = enumerate_matches(&c, &[RuleId::R1]);
        let positions: Vec<usize> = found.iter().map(|i| i.position).collect();
        assert_eq!(positions, vec![0, 1]);
        assert!(enumerate_matches(&Circuit::empty(2).unwrap(), &RuleId::ALL).is_empty());
    }

    #[test]
    fn rule_ids_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.to_string().parse::<RuleId>().unwrap(), r);
        }
        assert!(RuleId::R5.is_basic() && !RuleId::R6.is_basic());
    }
}
