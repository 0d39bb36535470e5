//! Rewriting arbitrary circuits into canonical form using rule steps.
//!
//! The pipeline widens every gate to full width (R6), replaces each
//! full-width gate outside the path's gate set by a palindrome over that set,
//! and then drives the resulting Δ-circuit to canonical form.

mod coords;
mod moves;
mod walk;

use thiserror::Error;

use crate::canon::{CanonError, CanonicalForm, DeltaGateSet, HamiltonianPath};
use crate::ir::{BitString, Circuit, Gate, IrError};
use crate::rules::{Bindings, Direction, ReplayError, RewriteTrace, RuleError, RuleInstance, StepKind, TraceBuilder};
use crate::sim::{SimError, Simulator};

pub use coords::{generate, reduce_coordinates, CoordinateSequence, Edit};
pub use moves::{
    aba_to_bab, braid_applies, canonicalize_delta, commutes_structurally, form_block, palindrome_reverse,
    reduce_double_occurrence, reduce_double_occurrence_measured,
};
pub use walk::{reduce_palindrome_to_gate, reduce_walk_palindrome, PalindromeReduction};

/// Default cap on the width [`canonicalize`] accepts.
pub const DEFAULT_MAX_CANON_WIDTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("{op} at {position}: {reason}")]
    Shape { op: &'static str, position: usize, reason: String },
    #[error("gate {position} is not in the path's gate set")]
    NotDelta { position: usize },
    #[error("no reduction case applies to M_{index} at {left} and {right}")]
    NoCaseApplies { index: usize, left: usize, right: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot reduce to a single gate: {0}")]
    NotReducible(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("width {width} exceeds the canonicalization cap {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("gate {0} does not act on every line")]
    NotFullWidth(Gate),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// How a full-width gate is replaced by its palindrome over the gate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decomposition {
    /// One step checked by simulation.
    #[default]
    Macro,
    /// The reversed rule derivation of the palindrome's reduction.
    Rules,
}

/// Canonicalization settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Normalizer {
    pub max_width: usize,
    pub decomposition: Decomposition,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self { max_width: DEFAULT_MAX_CANON_WIDTH, decomposition: Decomposition::Macro }
    }
}

/// Outcome of [`Normalizer::equivalent`].
#[derive(Debug, Clone)]
pub enum Equivalence {
    /// Both circuits reach `form`; `certificate` rewrites the first into the
    /// second.
    Equivalent { form: CanonicalForm, certificate: RewriteTrace },
    /// The forms differ, and the circuits disagree on `witness`.
    Inequivalent { forms: (CanonicalForm, CanonicalForm), witness: BitString },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

fn widen_in(b: &mut TraceBuilder) -> Result<(), NormalizeError> {
    let width = b.current().width();
    let mut pos = 0;
    while pos < b.gates().len() {
        let g = b.gates()[pos];
        let free: Vec<usize> = (1..=width).filter(|&l| g.support_mask() & (1u64 << (l - 1)) == 0).collect();
        if free.is_empty() {
            pos += 1;
            continue;
        }
        let count = 1usize << free.len();
        b.apply(RuleInstance::new(
            pos,
            Direction::Forward,
            Bindings::R6 { positives: g.positive_set(), negatives: g.negative_set(), q: g.target(), lines: free },
        ))?;
        pos += count;
    }
    Ok(())
}

/// Expands every gate over the lines it does not touch (R6), so every gate
/// acts on all lines.
pub fn widen_gates(c: &Circuit) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    let mut b = TraceBuilder::new(c.clone());
    widen_in(&mut b)?;
    Ok(b.finish())
}

/// Path positions `(i, j)`, `i < j`, of the strings a full-width gate
/// exchanges.
fn exchange_span(g: &Gate, delta: &DeltaGateSet) -> Result<(usize, usize), NormalizeError> {
    let (a, b) = g.exchanges(delta.width()).ok_or(NormalizeError::NotFullWidth(*g))?;
    let path = delta.path();
    let i = path.index_of(&a).expect("path covers every string");
    let j = path.index_of(&b).expect("path covers every string");
    Ok((i.min(j), i.max(j)))
}

fn palindrome_between(delta: &DeltaGateSet, i: usize, j: usize) -> Vec<Gate> {
    let mut out: Vec<Gate> = (i..j).map(|k| delta.gate(k)).collect();
    out.extend((i..j - 1).rev().map(|k| delta.gate(k)));
    out
}

/// Replaces the full-width gate at `pos` by its palindrome; returns the
/// palindrome length.
fn decompose_in(
    b: &mut TraceBuilder,
    delta: &DeltaGateSet,
    pos: usize,
    mode: Decomposition,
) -> Result<usize, NormalizeError> {
    let g = b.gates()[pos];
    let (i, j) = exchange_span(&g, delta)?;
    if j == i + 1 {
        return Ok(1);
    }
    let pal = palindrome_between(delta, i, j);
    let len = pal.len();
    match mode {
        Decomposition::Macro => {
            b.apply_macro(pos, 1, pal).map_err(NormalizeError::Internal)?;
        }
        Decomposition::Rules => {
            let standalone = Circuit::new(delta.width(), pal)?;
            let red = reduce_walk_palindrome(&standalone)?;
            for step in red.trace.reversed()?.steps {
                match step.kind {
                    StepKind::Rule(mut inst) => {
                        inst.position += pos;
                        b.apply(inst)?;
                    }
                    StepKind::Macro { .. } => {
                        return Err(NormalizeError::Internal("reduction produced a macro step".into()))
                    }
                }
            }
        }
    }
    Ok(len)
}

/// Replaces a full-width gate by the palindrome `M_i .. M_{j-1} .. M_i` over
/// the gate set, recorded as one simulation-checked step.
pub fn decompose_to_delta(m: &Gate, delta: &DeltaGateSet) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    decompose_to_delta_with(m, delta, Decomposition::Macro)
}

pub fn decompose_to_delta_with(
    m: &Gate,
    delta: &DeltaGateSet,
    mode: Decomposition,
) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    if !m.fits(delta.width()) || !m.is_full_width(delta.width()) {
        return Err(NormalizeError::NotFullWidth(*m));
    }
    let mut b = TraceBuilder::new(Circuit::new(delta.width(), vec![*m])?);
    decompose_in(&mut b, delta, 0, mode)?;
    Ok(b.finish())
}

impl Normalizer {
    pub fn new(max_width: usize) -> Self {
        Self { max_width, ..Self::default() }
    }

    pub fn with_decomposition(mut self, mode: Decomposition) -> Self {
        self.decomposition = mode;
        self
    }

    /// Rewrites `c` into its canonical form under `path`.
    pub fn canonicalize(&self, c: &Circuit, path: &HamiltonianPath) -> Result<(CanonicalForm, RewriteTrace), NormalizeError> {
        if c.width() > self.max_width {
            return Err(NormalizeError::WidthCap { width: c.width(), cap: self.max_width });
        }
        if c.width() != path.width() {
            return Err(NormalizeError::WidthMismatch(c.width(), path.width()));
        }
        let delta = DeltaGateSet::new(path);
        let mut b = TraceBuilder::new(c.clone());
        widen_in(&mut b)?;
        let mut pos = 0;
        while pos < b.gates().len() {
            pos += decompose_in(&mut b, &delta, pos, self.decomposition)?;
        }
        let form = moves::canonicalize_delta_in(&mut b, &delta)?;
        Ok((form, b.finish().1))
    }

    /// Decides equivalence by comparing canonical forms.
    pub fn equivalent(&self, a: &Circuit, b: &Circuit, path: &HamiltonianPath) -> Result<Equivalence, NormalizeError> {
        if a.width() != b.width() {
            return Err(NormalizeError::WidthMismatch(a.width(), b.width()));
        }
        let (fa, ta) = self.canonicalize(a, path)?;
        let (fb, tb) = self.canonicalize(b, path)?;
        if fa == fb {
            let certificate = ta.then(tb.reversed()?)?;
            return Ok(Equivalence::Equivalent { form: fa, certificate });
        }
        let sim = Simulator::new(a.width().max(1));
        let witness = sim
            .distinguishing_input(a, b)?
            .ok_or_else(|| NormalizeError::Internal("different canonical forms for equal functions".into()))?;
        Ok(Equivalence::Inequivalent { forms: (fa, fb), witness })
    }
}

/// [`Normalizer::canonicalize`] with default settings.
pub fn canonicalize(c: &Circuit, path: &HamiltonianPath) -> Result<(CanonicalForm, RewriteTrace), NormalizeError> {
    Normalizer::default().canonicalize(c, path)
}

/// [`Normalizer::equivalent`] with default settings.
pub fn equivalent(a: &Circuit, b: &Circuit, path: &HamiltonianPath) -> Result<Equivalence, NormalizeError> {
    Normalizer::default().equivalent(a, b, path)
}
