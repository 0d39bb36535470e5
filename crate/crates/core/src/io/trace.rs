//! Trace files. One step per line, positions 0-based:
//!
//! ```text
//! # format: rc-trace-v1
//! .width 2
//! R1 fwd 0 2 gate=G[{1},{},2] |
//! R6 fwd 0 1 P={} N={} q=2 lines=1 | g -1 2; g +1 2
//! MACRO 3 1 | g +1 +2 3; g +1 3
//! ```
//!
//! Sets are written `{1,2}`, ordered line lists `2,1`, gates in their
//! `G[{P},{N},q]` form. The gates after `|` are the inserted sequence.

use std::collections::HashMap;

use super::{content, gate_line, parse_gate_line, parse_width_header, ParseError, SyntaxError};
use crate::ir::{Circuit, Gate, LineSet};
use crate::rules::{Bindings, Direction, RewriteStep, RewriteTrace, RuleId, RuleInstance, StepKind, SwapVariant};

pub const TRACE_FORMAT: &str = "# format: rc-trace-v1";

/// A parsed trace file: the declared width and the steps, without the
/// initial circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDocument {
    pub width: usize,
    pub steps: Vec<RewriteStep>,
}

impl TraceDocument {
    /// Attaches the initial circuit.
    pub fn into_trace(self, initial: Circuit) -> Result<RewriteTrace, ParseError> {
        if initial.width() != self.width {
            return Err(ParseError::new(
                0,
                SyntaxError::Other(format!("trace width {} does not match circuit width {}", self.width, initial.width())),
            ));
        }
        Ok(RewriteTrace { initial, steps: self.steps })
    }
}

fn set(s: LineSet) -> String {
    s.to_string()
}

fn list(v: &[usize]) -> String {
    v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn bindings_text(b: &Bindings) -> String {
    match b {
        Bindings::R1 { gate } => format!("gate={gate}"),
        Bindings::R2 { positives, negatives, p, q } => format!("P={} N={} p={p} q={q}", set(*positives), set(*negatives)),
        Bindings::R3 { a, b } | Bindings::R7 { a, b } => format!("a={a} b={b}"),
        Bindings::R4 { variant, p, q, positives, negatives } => {
            let v = match variant {
                SwapVariant::Positive => "pos",
                SwapVariant::Negative => "neg",
            };
            format!("variant={v} p={p} q={q} P={} N={}", set(*positives), set(*negatives))
        }
        Bindings::R5 { positives, negatives, q, lines } | Bindings::R6 { positives, negatives, q, lines } => {
            format!("P={} N={} q={q} lines={}", set(*positives), set(*negatives), list(lines))
        }
        Bindings::R8 { positives, negatives, q } => format!("P={} N={} q={q}", set(*positives), list(negatives)),
        Bindings::R9 { p1, n1, p, p2, n2, q } => {
            format!("P1={} N1={} p={p} P2={} N2={} q={q}", set(*p1), set(*n1), set(*p2), set(*n2))
        }
        Bindings::R10 { positives, p, q } => format!("P={} p={p} q={q}", set(*positives)),
    }
}

fn gates_text(gates: &[Gate]) -> String {
    gates.iter().map(gate_line).collect::<Vec<_>>().join("; ")
}

pub fn print_step(step: &RewriteStep) -> String {
    let head = match &step.kind {
        StepKind::Rule(inst) => format!(
            "{} {} {} {} {}",
            inst.rule(),
            inst.direction,
            inst.position,
            step.removed_count,
            bindings_text(&inst.bindings)
        ),
        StepKind::Macro { position } => format!("MACRO {position} {}", step.removed_count),
    };
    if step.inserted.is_empty() {
        format!("{head} |")
    } else {
        format!("{head} | {}", gates_text(&step.inserted))
    }
}

pub fn print_trace(trace: &RewriteTrace) -> String {
    let mut out = format!("{TRACE_FORMAT}\n.width {}\n", trace.initial.width());
    for step in &trace.steps {
        out.push_str(&print_step(step));
        out.push('\n');
    }
    out
}

fn other(msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Other(msg.into())
}

fn parse_usize(s: &str) -> Result<usize, SyntaxError> {
    s.parse().map_err(|_| SyntaxError::BadToken(s.to_string()))
}

fn parse_list(s: &str) -> Result<Vec<usize>, SyntaxError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_usize).collect()
}

fn parse_set(s: &str) -> Result<LineSet, SyntaxError> {
    let inner = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(|| SyntaxError::BadToken(s.into()))?;
    LineSet::from_lines(&parse_list(inner)?).map_err(|e| other(e.to_string()))
}

/// Parses the `G[{P},{N},q]` form.
fn parse_gate_token(s: &str) -> Result<Gate, SyntaxError> {
    let bad = || SyntaxError::BadToken(s.to_string());
    let inner = s.strip_prefix("G[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let (pos, rest) = inner.split_once("},").ok_or_else(bad)?;
    let (neg, target) = rest.split_once("},").ok_or_else(bad)?;
    let p = parse_set(&format!("{pos}}}"))?;
    let n = parse_set(&format!("{neg}}}"))?;
    Gate::from_sets(p, n, parse_usize(target)?).map_err(|e| other(e.to_string()))
}

struct Fields<'a>(HashMap<&'a str, &'a str>);

impl<'a> Fields<'a> {
    fn parse(tokens: &[&'a str], keys: &[&str]) -> Result<Self, SyntaxError> {
        let mut map = HashMap::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or_else(|| SyntaxError::BadToken(tok.to_string()))?;
            if !keys.contains(&k) {
                return Err(other(format!("unexpected key {k:?}")));
            }
            if map.insert(k, v).is_some() {
                return Err(other(format!("key {k:?} given twice")));
            }
        }
        if let Some(missing) = keys.iter().find(|k| !map.contains_key(*k)) {
            return Err(other(format!("missing key {missing:?}")));
        }
        Ok(Self(map))
    }

    fn get(&self, k: &str) -> &'a str {
        self.0[k]
    }

    fn line(&self, k: &str) -> Result<usize, SyntaxError> {
        parse_usize(self.get(k))
    }

    fn set(&self, k: &str) -> Result<LineSet, SyntaxError> {
        parse_set(self.get(k))
    }

    fn list(&self, k: &str) -> Result<Vec<usize>, SyntaxError> {
        parse_list(self.get(k))
    }

    fn gate(&self, k: &str) -> Result<Gate, SyntaxError> {
        parse_gate_token(self.get(k))
    }
}

fn parse_bindings(rule: RuleId, tokens: &[&str]) -> Result<Bindings, SyntaxError> {
    let keys: &[&str] = match rule {
        RuleId::R1 => &["gate"],
        RuleId::R2 => &["P", "N", "p", "q"],
        RuleId::R3 | RuleId::R7 => &["a", "b"],
        RuleId::R4 => &["variant", "p", "q", "P", "N"],
        RuleId::R5 | RuleId::R6 => &["P", "N", "q", "lines"],
        RuleId::R8 => &["P", "N", "q"],
        RuleId::R9 => &["P1", "N1", "p", "P2", "N2", "q"],
        RuleId::R10 => &["P", "p", "q"],
    };
    let f = Fields::parse(tokens, keys)?;
    Ok(match rule {
        RuleId::R1 => Bindings::R1 { gate: f.gate("gate")? },
        RuleId::R2 => Bindings::R2 { positives: f.set("P")?, negatives: f.set("N")?, p: f.line("p")?, q: f.line("q")? },
        RuleId::R3 => Bindings::R3 { a: f.gate("a")?, b: f.gate("b")? },
        RuleId::R7 => Bindings::R7 { a: f.gate("a")?, b: f.gate("b")? },
        RuleId::R4 => Bindings::R4 {
            variant: match f.get("variant") {
                "pos" => SwapVariant::Positive,
                "neg" => SwapVariant::Negative,
                v => return Err(SyntaxError::BadToken(v.to_string())),
            },
            p: f.line("p")?,
            q: f.line("q")?,
            positives: f.set("P")?,
            negatives: f.set("N")?,
        },
        RuleId::R5 => {
            Bindings::R5 { positives: f.set("P")?, negatives: f.set("N")?, q: f.line("q")?, lines: f.list("lines")? }
        }
        RuleId::R6 => {
            Bindings::R6 { positives: f.set("P")?, negatives: f.set("N")?, q: f.line("q")?, lines: f.list("lines")? }
        }
        RuleId::R8 => Bindings::R8 { positives: f.set("P")?, negatives: f.list("N")?, q: f.line("q")? },
        RuleId::R9 => Bindings::R9 {
            p1: f.set("P1")?,
            n1: f.set("N1")?,
            p: f.line("p")?,
            p2: f.set("P2")?,
            n2: f.set("N2")?,
            q: f.line("q")?,
        },
        RuleId::R10 => Bindings::R10 { positives: f.set("P")?, p: f.line("p")?, q: f.line("q")? },
    })
}

fn parse_step(line: &str, width: usize) -> Result<RewriteStep, SyntaxError> {
    let (head, tail) = line.split_once('|').ok_or_else(|| other("missing `|` before the inserted gates"))?;
    let inserted = tail
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_gate_line(s, width))
        .collect::<Result<Vec<_>, _>>()?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() < 3 {
        return Err(other("step needs a rule, position and removed count"));
    }
    if toks[0] == "MACRO" {
        if toks.len() != 3 {
            return Err(other("MACRO takes a position and a removed count"));
        }
        return Ok(RewriteStep {
            kind: StepKind::Macro { position: parse_usize(toks[1])? },
            removed_count: parse_usize(toks[2])?,
            inserted,
        });
    }
    if toks.len() < 4 {
        return Err(other("step needs a rule, direction, position and removed count"));
    }
    let rule: RuleId = toks[0].parse().map_err(|_| SyntaxError::BadToken(toks[0].to_string()))?;
    let direction: Direction = toks[1].parse().map_err(|_| SyntaxError::BadToken(toks[1].to_string()))?;
    let position = parse_usize(toks[2])?;
    let removed_count = parse_usize(toks[3])?;
    let bindings = parse_bindings(rule, &toks[4..])?;
    Ok(RewriteStep { kind: StepKind::Rule(RuleInstance::new(position, direction, bindings)), removed_count, inserted })
}

pub fn parse_trace(text: &str) -> Result<TraceDocument, ParseError> {
    let mut width = None;
    let mut steps = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(".width") {
            if width.is_some() {
                return Err(ParseError::new(lineno, SyntaxError::MalformedHeader(line.to_string())));
            }
            width = Some(parse_width_header(rest).map_err(|e| ParseError::new(lineno, e))?);
            continue;
        }
        let w = width.ok_or(ParseError::new(lineno, SyntaxError::MissingHeader))?;
        steps.push(parse_step(line, w).map_err(|e| ParseError::new(lineno, e))?);
    }
    let width = width.ok_or(ParseError::new(text.lines().count().max(1), SyntaxError::MissingHeader))?;
    Ok(TraceDocument { width, steps })
}
