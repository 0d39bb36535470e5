//! Text formats: the line-oriented circuit grammar, a `.real` import shim,
//! ASCII rendering and rewrite traces.
//!
//! ```text
//! # format: rc-v1
//! .width 3
//! x 1
//! cnot 1 2
//! t 1 2 3
//! g +1 -2 3
//! .end
//! ```

mod real;
mod render;
mod trace;

use thiserror::Error;

use crate::ir::{Circuit, Gate, IrError, LineSet};

pub use real::parse_real;
pub use render::{render_ascii, render_with, RenderStyle};
pub use trace::{parse_trace, print_step, print_trace, TraceDocument, TRACE_FORMAT};

/// Comment emitted as the first line of versioned circuit files.
pub const CIRCUIT_FORMAT: &str = "# format: rc-v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("missing `.width` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unknown gate mnemonic {0:?}")]
    UnknownMnemonic(String),
    #[error("`{mnemonic}` takes {expected} line indices, found {found}")]
    Arity { mnemonic: String, expected: usize, found: usize },
    #[error("bad token {0:?}")]
    BadToken(String),
    #[error("line {0} appears twice in one gate")]
    DuplicateLine(usize),
    #[error("target {0} is also a control")]
    TargetAmongControls(usize),
    #[error("line index {index} is outside 1..={width}")]
    OutOfRange { index: usize, width: usize },
    #[error("the last index of a `g` gate must be an unsigned target")]
    MissingTarget,
    #[error("content after `.end`")]
    AfterEnd,
    #[error("{0}")]
    Other(String),
}

/// A syntax error with the 1-based line number where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {error}")]
pub struct ParseError {
    pub line: usize,
    pub error: SyntaxError,
}

impl ParseError {
    pub(crate) fn new(line: usize, error: SyntaxError) -> Self {
        Self { line, error }
    }
}

/// Strips a `#` comment and surrounding whitespace.
pub(crate) fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub(crate) fn parse_index(tok: &str, width: usize) -> Result<usize, SyntaxError> {
    let index: usize = tok.parse().map_err(|_| SyntaxError::BadToken(tok.to_string()))?;
    if index == 0 || index > width {
        return Err(SyntaxError::OutOfRange { index, width });
    }
    Ok(index)
}

pub(crate) fn parse_width_header(rest: &str) -> Result<usize, SyntaxError> {
    let mut toks = rest.split_whitespace();
    let (Some(tok), None) = (toks.next(), toks.next()) else {
        return Err(SyntaxError::MalformedHeader(format!(".width{rest}")));
    };
    let width: usize = tok.parse().map_err(|_| SyntaxError::MalformedHeader(format!("bad width {tok:?}")))?;
    Circuit::empty(width).map_err(|e| SyntaxError::MalformedHeader(e.to_string()))?;
    Ok(width)
}

/// Builds a gate, reporting duplicates and target/control clashes.
pub(crate) fn build_gate(positives: &[usize], negatives: &[usize], target: usize) -> Result<Gate, SyntaxError> {
    Gate::new(positives, negatives, target).map_err(|e| match e {
        IrError::DuplicateIndex(l) | IrError::OverlappingControls(l) => SyntaxError::DuplicateLine(l),
        IrError::TargetIsControl(l) => SyntaxError::TargetAmongControls(l),
        other => SyntaxError::Other(other.to_string()),
    })
}

/// Parses one gate line (without comment) against `width`.
pub fn parse_gate_line(line: &str, width: usize) -> Result<Gate, SyntaxError> {
    let mut toks = line.split_whitespace();
    let mnemonic = toks.next().ok_or(SyntaxError::Other("empty gate line".into()))?;
    let args: Vec<&str> = toks.collect();
    let fixed = |expected: usize| -> Result<Vec<usize>, SyntaxError> {
        if args.len() != expected {
            return Err(SyntaxError::Arity { mnemonic: mnemonic.to_string(), expected, found: args.len() });
        }
        args.iter().map(|t| parse_index(t, width)).collect()
    };
    match mnemonic {
        "x" => {
            let v = fixed(1)?;
            build_gate(&[], &[], v[0])
        }
        "cnot" => {
            let v = fixed(2)?;
            build_gate(&v[..1], &[], v[1])
        }
        "t" => {
            let v = fixed(3)?;
            build_gate(&v[..2], &[], v[2])
        }
        "g" => {
            let (last, controls) = args.split_last().ok_or(SyntaxError::MissingTarget)?;
            if last.starts_with(['+', '-']) {
                return Err(SyntaxError::MissingTarget);
            }
            let target = parse_index(last, width)?;
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for tok in controls {
                match tok.strip_prefix('-') {
                    Some(rest) => neg.push(parse_index(rest, width)?),
                    None => pos.push(parse_index(tok.strip_prefix('+').unwrap_or(tok), width)?),
                }
            }
            build_gate(&pos, &neg, target)
        }
        other => Err(SyntaxError::UnknownMnemonic(other.to_string())),
    }
}

/// Parses the circuit grammar; gate lines execute top to bottom.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut width = None;
    let mut gates = Vec::new();
    let mut ended = false;
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        if ended {
            return Err(ParseError::new(lineno, SyntaxError::AfterEnd));
        }
        if let Some(rest) = line.strip_prefix(".width") {
            if width.is_some() || !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                return Err(ParseError::new(lineno, SyntaxError::MalformedHeader(line.to_string())));
            }
            width = Some(parse_width_header(rest).map_err(|e| ParseError::new(lineno, e))?);
            continue;
        }
        if line == ".end" {
            ended = true;
            continue;
        }
        let w = width.ok_or(ParseError::new(lineno, SyntaxError::MissingHeader))?;
        gates.push(parse_gate_line(line, w).map_err(|e| ParseError::new(lineno, e))?);
    }
    let width = width.ok_or(ParseError::new(text.lines().count().max(1), SyntaxError::MissingHeader))?;
    Circuit::new(width, gates).map_err(|e| ParseError::new(0, SyntaxError::Other(e.to_string())))
}

/// Printing options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrintOptions {
    /// Use `x`, `cnot` and `t` for gates with at most two positive controls.
    pub prefer_short_mnemonics: bool,
}

impl Default for PrintOptions {
    fn default() -> Self {
        Self { prefer_short_mnemonics: true }
    }
}

/// The `g` form of a gate: signed controls in ascending line order, then
/// the target.
pub fn gate_line(g: &Gate) -> String {
    let mut out = String::from("g");
    let pos = g.positive_set();
    for l in LineSet::from_mask(g.control_mask()).iter() {
        out.push_str(if pos.contains(l) { " +" } else { " -" });
        out.push_str(&l.to_string());
    }
    out.push(' ');
    out.push_str(&g.target().to_string());
    out
}

pub fn gate_line_with(g: &Gate, opts: PrintOptions) -> String {
    if opts.prefer_short_mnemonics && g.negative_mask() == 0 {
        let p = g.positives();
        match p[..] {
            [] => return format!("x {}", g.target()),
            [c] => return format!("cnot {c} {}", g.target()),
            [a, b] => return format!("t {a} {b} {}", g.target()),
            _ => {}
        }
    }
    gate_line(g)
}

pub fn print_circuit(c: &Circuit) -> String {
    print_circuit_with(c, PrintOptions::default())
}

pub fn print_circuit_with(c: &Circuit, opts: PrintOptions) -> String {
    let mut out = format!(".width {}\n", c.width());
    for g in c.gates() {
        out.push_str(&gate_line_with(g, opts));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: &[usize], n: &[usize], t: usize) -> Gate {
        Gate::new(p, n, t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_circuit(".width 1\nx 1").unwrap().gates(), &[Gate::x(1).unwrap()]);
        assert_eq!(parse_circuit(".width 3\ng +1 -2 3").unwrap().gates(), &[g(&[1], &[2], 3)]);
        let swap = parse_circuit(".width 2\ncnot 2 1\ncnot 1 2\ncnot 2 1").unwrap();
        assert_eq!(swap.gates(), &[g(&[2], &[], 1), g(&[1], &[], 2), g(&[2], &[], 1)]);
        let text = "# format: rc-v1\n\n.width 3  # three lines\nt 1 2 3\ng 1 -3 2\n.end\n# trailing\n";
        assert_eq!(parse_circuit(text).unwrap().gates(), &[g(&[1, 2], &[], 3), g(&[1], &[3], 2)]);
        assert!(parse_circuit(".width 2\n").unwrap().is_empty());
    }

    #[test]
    fn parse_errors() {
        let err = |t: &str| parse_circuit(t).unwrap_err();
        assert_eq!(err(".width 3\ng +1 +1 3").error, SyntaxError::DuplicateLine(1));
        assert_eq!(err(".width 3\ng +1 -1 3").error, SyntaxError::DuplicateLine(1));
        assert_eq!(err(".width 3\ncnot 2 2").error, SyntaxError::TargetAmongControls(2));
        assert_eq!(err(".width 3\nx 4"), ParseError::new(2, SyntaxError::OutOfRange { index: 4, width: 3 }));
        assert_eq!(err(".width 3\nx 0").error, SyntaxError::OutOfRange { index: 0, width: 3 });
        assert!(matches!(err(".width three").error, SyntaxError::MalformedHeader(_)));
        assert!(matches!(err(".width 0").error, SyntaxError::MalformedHeader(_)));
        assert!(matches!(err(".width 2 3").error, SyntaxError::MalformedHeader(_)));
        assert_eq!(err("x 1").error, SyntaxError::MissingHeader);
        assert_eq!(err("").error, SyntaxError::MissingHeader);
        assert_eq!(err(".width 2\ng +1 -2").error, SyntaxError::MissingTarget);
        assert!(matches!(err(".width 2\ncnot 1").error, SyntaxError::Arity { .. }));
        assert!(matches!(err(".width 2\nswap 1 2").error, SyntaxError::UnknownMnemonic(_)));
        assert_eq!(err(".width 2\n.end\nx 1"), ParseError::new(3, SyntaxError::AfterEnd));
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_circuit(&Circuit::empty(2).unwrap()), ".width 2\n");
        let x = Circuit::new(1, vec![Gate::x(1).unwrap()]).unwrap();
        assert_eq!(print_circuit(&x), ".width 1\nx 1\n");
        assert_eq!(print_circuit_with(&x, PrintOptions { prefer_short_mnemonics: false }), ".width 1\ng 1\n");
        let c = Circuit::new(4, vec![g(&[3, 1], &[], 2), g(&[4], &[2, 1], 3), g(&[1, 2, 3], &[], 4)]).unwrap();
        assert_eq!(print_circuit(&c), ".width 4\nt 1 3 2\ng -1 -2 +4 3\ng +1 +2 +3 4\n");
        assert_eq!(parse_circuit(&print_circuit(&c)).unwrap(), c);
    }
}
