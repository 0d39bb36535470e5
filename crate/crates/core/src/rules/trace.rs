//! Rewrite steps, traces and replay.

use thiserror::Error;

use super::{apply_in_place, RuleError, RuleInstance};
use crate::ir::{Circuit, Gate};
use crate::sim::simulate_gates;

/// What justifies a step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StepKind {
    Rule(RuleInstance),
    /// A bulk replacement of equivalent segments, checked by simulation.
    Macro { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub removed_count: usize,
    pub inserted: Vec<Gate>,
}

impl RewriteStep {
    pub fn position(&self) -> usize {
        match &self.kind {
            StepKind::Rule(inst) => inst.position,
            StepKind::Macro { position } => *position,
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(self.kind, StepKind::Macro { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace step {step}: {reason}")]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

/// Checks one step against `c` and returns the rewritten circuit.
pub fn verify_step(c: &Circuit, step: &RewriteStep) -> Result<Circuit, String> {
    let mut out = c.clone();
    verify_in_place(&mut out, step)?;
    Ok(out)
}

fn verify_in_place(c: &mut Circuit, step: &RewriteStep) -> Result<(), String> {
    match &step.kind {
        StepKind::Rule(inst) => {
            let (from, to) = inst.oriented_sides().map_err(|e| e.to_string())?;
            if from.len() != step.removed_count {
                return Err(format!(
                    "{} {} removes {} gates, step claims {}",
                    inst.rule(),
                    inst.direction,
                    from.len(),
                    step.removed_count
                ));
            }
            if to != step.inserted {
                return Err(format!("{} {} inserts different gates than recorded", inst.rule(), inst.direction));
            }
            apply_in_place(c, inst).map_err(|e| e.to_string())?;
            Ok(())
        }
        StepKind::Macro { position } => {
            let pos = *position;
            if pos + step.removed_count > c.len() {
                return Err(format!("macro at {pos} removes {} gates past the end", step.removed_count));
            }
            let removed = &c.gates()[pos..pos + step.removed_count];
            let width = c.width();
            if step.inserted.iter().any(|g| !g.fits(width)) {
                return Err("macro inserts a gate outside the circuit width".into());
            }
            let lhs = simulate_gates(width, removed).map_err(|e| e.to_string())?;
            let rhs = simulate_gates(width, &step.inserted).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("macro at {pos} replaces a segment with an inequivalent one"));
            }
            c.splice(pos, step.removed_count, &step.inserted).map_err(|e| e.to_string())
        }
    }
}

/// An initial circuit plus the steps that rewrite it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteTrace {
    pub initial: Circuit,
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn new(initial: Circuit) -> Self {
        Self { initial, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rule_step_count(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_macro()).count()
    }

    /// Replays the trace and returns the final circuit.
    pub fn replay(&self) -> Result<Circuit, ReplayError> {
        replay(&self.initial, &self.steps)
    }

    /// The trace that rewrites the final circuit back into the initial one.
    pub fn reversed(&self) -> Result<RewriteTrace, ReplayError> {
        let mut states = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let next = verify_step(&cur, step).map_err(|reason| ReplayError { step: i, reason })?;
            states.push(cur);
            cur = next;
        }
        let mut steps = Vec::with_capacity(self.steps.len());
        for (step, before) in self.steps.iter().zip(&states).rev() {
            let pos = step.position();
            let original: Vec<Gate> = before.gates()[pos..pos + step.removed_count].to_vec();
            let kind = match &step.kind {
                StepKind::Rule(inst) => StepKind::Rule(inst.inverted()),
                StepKind::Macro { position } => StepKind::Macro { position: *position },
            };
            steps.push(RewriteStep { kind, removed_count: step.inserted.len(), inserted: original });
        }
        Ok(RewriteTrace { initial: cur, steps })
    }

    /// Appends `other`, which must start where this trace ends.
    pub fn then(mut self, other: RewriteTrace) -> Result<RewriteTrace, ReplayError> {
        let end = self.replay()?;
        if end != other.initial {
            return Err(ReplayError {
                step: self.steps.len(),
                reason: "second trace does not start where the first one ends".into(),
            });
        }
        self.steps.extend(other.steps);
        Ok(self)
    }
}

/// Replays `steps` from `initial`, failing at the first step that does not
/// apply.
pub fn replay(initial: &Circuit, steps: &[RewriteStep]) -> Result<Circuit, ReplayError> {
    let mut cur = initial.clone();
    for (i, step) in steps.iter().enumerate() {
        verify_in_place(&mut cur, step).map_err(|reason| ReplayError { step: i, reason })?;
    }
    Ok(cur)
}

/// Applies steps to a working circuit while recording them.
#[derive(Debug, Clone)]
pub struct TraceBuilder {
    current: Circuit,
    trace: RewriteTrace,
}

impl TraceBuilder {
    pub fn new(initial: Circuit) -> Self {
        Self { current: initial.clone(), trace: RewriteTrace::new(initial) }
    }

    pub fn current(&self) -> &Circuit {
        &self.current
    }

    pub fn gates(&self) -> &[Gate] {
        self.current.gates()
    }

    pub fn steps(&self) -> usize {
        self.trace.steps.len()
    }

    pub fn apply(&mut self, inst: RuleInstance) -> Result<(), RuleError> {
        let step = apply_in_place(&mut self.current, &inst)?;
        self.trace.steps.push(step);
        Ok(())
    }

    /// Records a macro step, checked by simulation at the circuit width.
    pub fn apply_macro(&mut self, position: usize, removed_count: usize, inserted: Vec<Gate>) -> Result<(), String> {
        let step = RewriteStep { kind: StepKind::Macro { position }, removed_count, inserted };
        verify_in_place(&mut self.current, &step)?;
        self.trace.steps.push(step);
        Ok(())
    }

    /// Drops every step after the first `len`, restoring the matching circuit.
    pub fn truncate(&mut self, len: usize, state: Circuit) {
        self.trace.steps.truncate(len);
        self.current = state;
    }

    pub fn finish(self) -> (Circuit, RewriteTrace) {
        (self.current, self.trace)
    }
}
