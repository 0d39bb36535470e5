//! Read-only import of `.real` benchmark files. Only `t<k>` (multiple-control
//! Toffoli) gate lines are accepted; a `-` prefix on a control marks it
//! negative. Header directives other than `.numvars` and `.variables` are
//! ignored.

use std::collections::HashMap;

use super::{build_gate, content, ParseError, SyntaxError};
use crate::ir::Circuit;

pub fn parse_real(text: &str) -> Result<Circuit, ParseError> {
    let mut numvars: Option<usize> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut in_body = false;
    let mut gates = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let err = |e: SyntaxError| ParseError::new(lineno, e);
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        let args: Vec<&str> = toks.collect();
        match head.to_ascii_lowercase().as_str() {
            ".numvars" => {
                let n = args
                    .first()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(SyntaxError::MalformedHeader(line.to_string())))?;
                Circuit::empty(n).map_err(|e| err(SyntaxError::MalformedHeader(e.to_string())))?;
                numvars = Some(n);
            }
            ".variables" => {
                names = args.iter().enumerate().map(|(i, v)| (v.to_string(), i + 1)).collect();
                if names.len() != args.len() {
                    return Err(err(SyntaxError::MalformedHeader("repeated variable name".into())));
                }
            }
            ".begin" => in_body = true,
            ".end" => in_body = false,
            h if h.starts_with('.') => {}
            h if in_body => {
                let arity: usize = h
                    .strip_prefix('t')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| err(SyntaxError::UnknownMnemonic(head.to_string())))?;
                if arity != args.len() {
                    return Err(err(SyntaxError::Arity {
                        mnemonic: head.to_string(),
                        expected: arity,
                        found: args.len(),
                    }));
                }
                let width = numvars.unwrap_or(names.len());
                let lookup = |name: &str| -> Result<usize, SyntaxError> {
                    let index = *names.get(name).ok_or_else(|| SyntaxError::BadToken(name.to_string()))?;
                    if index > width {
                        return Err(SyntaxError::OutOfRange { index, width });
                    }
                    Ok(index)
                };
                let (last, controls) = args.split_last().ok_or_else(|| err(SyntaxError::MissingTarget))?;
                let target = lookup(last).map_err(err)?;
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                for c in controls {
                    match c.strip_prefix('-') {
                        Some(name) => neg.push(lookup(name).map_err(err)?),
                        None => pos.push(lookup(c).map_err(err)?),
                    }
                }
                gates.push(build_gate(&pos, &neg, target).map_err(err)?);
            }
            _ => return Err(err(SyntaxError::Other(format!("gate line outside .begin/.end: {line}")))),
        }
    }
    let width = numvars.unwrap_or(names.len());
    let width_err = || ParseError::new(0, SyntaxError::MissingHeader);
    Circuit::new(width, gates).map_err(|_| width_err())
}
