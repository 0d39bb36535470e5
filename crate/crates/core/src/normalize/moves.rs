//! Rewriting procedures built from rule steps: moving X gates through a
//! circuit, the three-gate braid, palindrome reversal, and the occurrence
//! reduction and block formation that drive Δ-circuits to canonical form.

use super::NormalizeError;
use crate::canon::{validate_with, CanonicalForm, DeltaGateSet};
use crate::ir::{Circuit, Gate, LineSet};
use crate::rules::{opposite_polarity_control, Bindings, Direction, RewriteTrace, RuleInstance, TraceBuilder};

/// Whether some control line has opposite polarities in `a` and `b`, which
/// lets R3 exchange them.
pub fn commutes_structurally(a: &Gate, b: &Gate) -> bool {
    opposite_polarity_control(a, b)
}

fn shape(op: &'static str, position: usize, reason: impl Into<String>) -> NormalizeError {
    NormalizeError::Shape { op, position, reason: reason.into() }
}

fn gate_at(b: &TraceBuilder, op: &'static str, pos: usize) -> Result<Gate, NormalizeError> {
    b.gates().get(pos).copied().ok_or_else(|| shape(op, pos, "position out of range"))
}

fn apply(b: &mut TraceBuilder, pos: usize, dir: Direction, bindings: Bindings) -> Result<(), NormalizeError> {
    b.apply(RuleInstance::new(pos, dir, bindings)).map_err(NormalizeError::from)
}

/// Exchanges the gates at `pos` and `pos+1` with R3, or R7 if they share a
/// target.
pub(crate) fn swap(b: &mut TraceBuilder, pos: usize) -> Result<(), NormalizeError> {
    let x = gate_at(b, "swap", pos)?;
    let y = gate_at(b, "swap", pos + 1)?;
    let bindings = if opposite_polarity_control(&x, &y) {
        Bindings::R3 { a: x, b: y }
    } else if x.target() == y.target() {
        Bindings::R7 { a: x, b: y }
    } else {
        return Err(shape("swap", pos, format!("{x} and {y} do not commute by R3 or R7")));
    };
    apply(b, pos, Direction::Forward, bindings)
}

/// Removes the identical pair at `pos`.
pub(crate) fn cancel(b: &mut TraceBuilder, pos: usize) -> Result<(), NormalizeError> {
    let x = gate_at(b, "cancel", pos)?;
    let y = gate_at(b, "cancel", pos + 1)?;
    if x != y {
        return Err(shape("cancel", pos, format!("{x} and {y} differ")));
    }
    apply(b, pos, Direction::Forward, Bindings::R1 { gate: x })
}

fn insert_pair(b: &mut TraceBuilder, pos: usize, g: Gate) -> Result<(), NormalizeError> {
    apply(b, pos, Direction::Backward, Bindings::R1 { gate: g })
}

/// R9 with a bare X gate as the moving gate. Forward turns
/// `X[s] G[P, N, q]` (s positive) into `G[P-s, N+s, q] X[s]`.
fn r9_x(s: usize, g: &Gate, dir: Direction) -> Bindings {
    let (p2, n2) = match dir {
        Direction::Forward => (g.positive_set().without(s), g.negative_set()),
        Direction::Backward => (g.positive_set(), g.negative_set().without(s)),
    };
    Bindings::R9 { p1: LineSet::EMPTY, n1: LineSet::EMPTY, p: s, p2, n2, q: g.target() }
}

/// Moves the X gate at `pos` one place left, past the gate at `pos-1`,
/// flipping that gate's polarity on the X line.
pub(crate) fn pass_x_left(b: &mut TraceBuilder, pos: usize) -> Result<(), NormalizeError> {
    let x = gate_at(b, "pass_x", pos)?;
    if !x.is_x() || pos == 0 {
        return Err(shape("pass_x", pos, "expected an X gate with a gate to its left"));
    }
    let s = x.target();
    let g = gate_at(b, "pass_x", pos - 1)?;
    if g.target() == s {
        return apply(b, pos - 1, Direction::Forward, Bindings::R7 { a: g, b: x });
    }
    match g.polarity(s) {
        Some(false) => apply(b, pos - 1, Direction::Backward, r9_x(s, &g, Direction::Backward)),
        Some(true) => {
            insert_pair(b, pos - 1, x)?;
            apply(b, pos, Direction::Forward, r9_x(s, &g, Direction::Forward))?;
            cancel(b, pos + 1)
        }
        None => Err(shape("pass_x", pos - 1, format!("{g} does not involve line {s}"))),
    }
}

/// Moves the X gate at `pos` one place right, past the gate at `pos+1`.
pub(crate) fn pass_x_right(b: &mut TraceBuilder, pos: usize) -> Result<(), NormalizeError> {
    let x = gate_at(b, "pass_x", pos)?;
    if !x.is_x() {
        return Err(shape("pass_x", pos, "expected an X gate"));
    }
    let s = x.target();
    let g = gate_at(b, "pass_x", pos + 1)?;
    if g.target() == s {
        return apply(b, pos, Direction::Forward, Bindings::R7 { a: x, b: g });
    }
    match g.polarity(s) {
        Some(true) => apply(b, pos, Direction::Forward, r9_x(s, &g, Direction::Forward)),
        Some(false) => {
            insert_pair(b, pos + 2, x)?;
            apply(b, pos + 1, Direction::Backward, r9_x(s, &g, Direction::Backward))?;
            cancel(b, pos)
        }
        None => Err(shape("pass_x", pos + 1, format!("{g} does not involve line {s}"))),
    }
}

/// Wraps `[start, start+len)` in a pair of `X[s]`, flipping every control on
/// `s` inside. The segment then sits at `start+1`.
pub(crate) fn conjugate(b: &mut TraceBuilder, start: usize, len: usize, s: usize) -> Result<(), NormalizeError> {
    insert_pair(b, start + len, Gate::x(s)?)?;
    for pos in (start + 1..=start + len).rev() {
        pass_x_left(b, pos)?;
    }
    Ok(())
}

/// Undoes [`conjugate`]: `X[s]` at `start` and `start+len+1` around a
/// segment of `len` gates.
pub(crate) fn unconjugate(b: &mut TraceBuilder, start: usize, len: usize, s: usize) -> Result<(), NormalizeError> {
    if gate_at(b, "unconjugate", start)? != Gate::x(s)? {
        return Err(shape("unconjugate", start, format!("expected X[{s}]")));
    }
    for pos in start..start + len {
        pass_x_right(b, pos)?;
    }
    cancel(b, start + len)
}

/// Whether `A B A` with these gates can be rewritten to `B A B`: different
/// targets, equal supports, agreeing polarities on shared controls.
pub fn braid_applies(a: &Gate, b: &Gate) -> bool {
    let common = a.control_mask() & b.control_mask();
    a.target() != b.target()
        && a.support_mask() == b.support_mask()
        && a.positive_mask() & common == b.positive_mask() & common
}

/// Rewrites `A B A` at `pos` into `B A B`. Negative controls are cleared by
/// X-conjugation, R10 does the exchange, and the conjugations are undone.
pub(crate) fn braid(b: &mut TraceBuilder, pos: usize) -> Result<(), NormalizeError> {
    let a = gate_at(b, "braid", pos)?;
    let m = gate_at(b, "braid", pos + 1)?;
    let a2 = gate_at(b, "braid", pos + 2)?;
    if a != a2 || !braid_applies(&a, &m) {
        return Err(shape("braid", pos, format!("{a} {m} {a2} is not a braidable triple")));
    }
    let lines: Vec<usize> = a.negative_set().union(m.negative_set()).to_vec();
    for (k, &s) in lines.iter().enumerate() {
        conjugate(b, pos + k, 3, s)?;
    }
    let core = pos + lines.len();
    let a = b.gates()[core];
    let p = m.target();
    apply(b, core, Direction::Forward, Bindings::R10 { positives: a.positive_set().without(p), p, q: a.target() })?;
    for (k, &s) in lines.iter().enumerate().rev() {
        unconjugate(b, pos + k, 3, s)?;
    }
    Ok(())
}

/// Reverses the palindrome `A_1 .. A_m .. A_1` at `pos` into
/// `A_m .. A_1 .. A_m`.
pub(crate) fn reverse_palindrome(b: &mut TraceBuilder, pos: usize, m: usize) -> Result<(), NormalizeError> {
    if m == 0 {
        return Err(shape("palindrome_reverse", pos, "empty palindrome"));
    }
    let len = 2 * m - 1;
    let g = b.gates();
    if pos + len > g.len() {
        return Err(shape("palindrome_reverse", pos, "segment runs past the end"));
    }
    let seg = &g[pos..pos + len];
    if seg.iter().ne(seg.iter().rev()) {
        return Err(shape("palindrome_reverse", pos, "segment is not a palindrome"));
    }
    let mut pos = pos;
    let mut m = m;
    while m >= 2 {
        braid(b, pos + m - 2)?;
        for p in (pos..pos + m - 2).rev() {
            swap(b, p)?;
        }
        for p in pos + m..pos + 2 * m - 2 {
            swap(b, p)?;
        }
        pos += 1;
        m -= 1;
    }
    Ok(())
}

/// Primitive moves on a Δ-word, by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Swap(usize),
    Braid(usize),
}

impl Op {
    fn run(self, b: &mut TraceBuilder) -> Result<(), NormalizeError> {
        match self {
            Op::Swap(p) => swap(b, p),
            Op::Braid(p) => braid(b, p),
        }
    }
}

fn moves_left(from: usize, to: usize) -> impl Iterator<Item = Op> {
    // the gate at `from` ends at `to`
    (to..from).rev().map(Op::Swap)
}

pub(crate) fn word(b: &TraceBuilder, delta: &DeltaGateSet) -> Result<Vec<usize>, NormalizeError> {
    b.gates()
        .iter()
        .enumerate()
        .map(|(position, g)| delta.index_of(g).ok_or(NormalizeError::NotDelta { position }))
        .collect()
}

fn step(i: usize, sign: isize, j: usize) -> Option<usize> {
    let v = i as isize + sign * j as isize;
    (v >= 0).then_some(v as usize)
}

/// If `w[l..=r]` is `M_i M_{i±1} .. M_{i±k} .. M_{i±1} M_i`, its half length
/// `k+1`.
fn chain_palindrome(w: &[usize], l: usize, r: usize, i: usize) -> Option<usize> {
    let len = r - l + 1;
    if len.is_multiple_of(2) {
        return None;
    }
    let m = len.div_ceil(2);
    let sign = w[l + 1] as isize - i as isize;
    if sign.abs() != 1 {
        return None;
    }
    for j in 0..m {
        let v = step(i, sign, j)?;
        if w[l + j] != v || w[r - j] != v {
            return None;
        }
    }
    Some(m)
}

/// One left-side move for the occurrence pair at `l < r`: returns the moves
/// and the new pair positions.
fn plan_side(w: &[usize], l: usize, r: usize, i: usize) -> Option<(Vec<Op>, usize, usize)> {
    let sign: isize = if w[l + 1] == i + 1 {
        1
    } else if i > 0 && w[l + 1] == i - 1 {
        -1
    } else {
        0
    };
    let mut k = 0;
    if sign != 0 {
        while l + k + 1 < r && step(i, sign, k + 1) == Some(w[l + k + 1]) {
            k += 1;
        }
    }
    let y_pos = l + k + 1;
    if y_pos >= r {
        // The gap is the bare run; its last gate commutes with the right M_i.
        return (k >= 2).then(|| (vec![Op::Swap(r - 1)], l, r - 1));
    }
    let y = w[y_pos];
    let chain = |j: usize| step(i, sign, j);
    let far = |a: usize, b: usize| a.abs_diff(b) >= 2;
    if far(y, i) && (1..=k).all(|j| chain(j).is_some_and(|c| far(y, c))) {
        // y commutes with the chain and with M_i.
        return Some((moves_left(y_pos, l).collect(), l + 1, r));
    }
    if k >= 2 && chain(k - 1) == Some(y) {
        // Braid the chain end with y, move the new front out.
        let mut ops = vec![Op::Braid(l + k - 1)];
        ops.extend(moves_left(l + k - 1, l));
        return Some((ops, l + 1, r));
    }
    if let Some(j) = (1..k.saturating_sub(1)).find(|&j| chain(j) == Some(y)) {
        // Bring y next to its chain copy, then braid as above.
        let mut ops: Vec<Op> = moves_left(y_pos, l + j + 2).collect();
        ops.push(Op::Braid(l + j));
        ops.extend(moves_left(l + j, l));
        return Some((ops, l + 1, r));
    }
    None
}

/// Removes one occurrence pair `M_i .. M_i` at `l < r` (no `M_i` between),
/// leaving zero or one occurrences. Returns the (occurrences, gap) measure
/// seen before every round.
pub(crate) fn reduce_pair(
    b: &mut TraceBuilder,
    delta: &DeltaGateSet,
    mut l: usize,
    mut r: usize,
) -> Result<Vec<(usize, usize)>, NormalizeError> {
    let mut measures = Vec::new();
    loop {
        let w = word(b, delta)?;
        let i = w[l];
        if w[r] != i || w[l + 1..r].contains(&i) {
            return Err(NormalizeError::Precondition(format!(
                "positions {l} and {r} are not consecutive occurrences of M_{i}"
            )));
        }
        measures.push((w.iter().filter(|&&x| x == i).count(), r - l - 1));
        if r == l + 1 {
            cancel(b, l)?;
            return Ok(measures);
        }
        if let Some(m) = chain_palindrome(&w, l, r, i) {
            reverse_palindrome(b, l, m)?;
            return Ok(measures);
        }
        if let Some(p) = (l + 1..r - 1).find(|&p| w[p] == w[p + 1]) {
            // Adjacent duplicates inside the gap cancel.
            cancel(b, p)?;
            r -= 2;
            continue;
        }
        if let Some((ops, nl, nr)) = plan_side(&w, l, r, i) {
            for op in ops {
                op.run(b)?;
            }
            l = nl;
            r = nr;
            continue;
        }
        return Err(NormalizeError::NoCaseApplies { index: i, left: l, right: r });
    }
}

/// Grows the run `M_i M_{i+1} ..` that starts at `s` until it reaches `end`.
/// Every other gate in `[s, end)` must have a larger index. Returns the run
/// start and the new `end`.
pub(crate) fn grow_block(
    b: &mut TraceBuilder,
    delta: &DeltaGateSet,
    mut s: usize,
    mut end: usize,
) -> Result<(usize, usize), NormalizeError> {
    loop {
        let w = word(b, delta)?;
        let i = w[s];
        let mut k = 0;
        while s + k + 1 < end && w[s + k + 1] == i + k + 1 {
            k += 1;
        }
        let y_pos = s + k + 1;
        if y_pos == end {
            return Ok((s, end));
        }
        let y = w[y_pos];
        if y <= i {
            return Err(NormalizeError::Precondition(format!(
                "M_{y} at {y_pos} is not above the block index {i}"
            )));
        }
        if k >= 1 && y == i + k {
            cancel(b, s + k)?;
            end -= 2;
        } else if y >= i + k + 2 {
            for op in moves_left(y_pos, s) {
                op.run(b)?;
            }
            s += 1;
        } else {
            let j = y - i;
            let mut ops: Vec<Op> = moves_left(y_pos, s + j + 2).collect();
            ops.push(Op::Braid(s + j));
            ops.extend(moves_left(s + j, s));
            for op in ops {
                op.run(b)?;
            }
            s += 1;
        }
    }
}

/// Drives a circuit over Δ to canonical form inside `b`.
pub(crate) fn canonicalize_delta_in(b: &mut TraceBuilder, delta: &DeltaGateSet) -> Result<CanonicalForm, NormalizeError> {
    let mut bound = b.gates().len();
    while bound > 0 {
        let mut w = word(b, delta)?;
        let x = *w[..bound].iter().min().expect("nonempty prefix");
        loop {
            let occ: Vec<usize> = (0..bound).filter(|&p| w[p] == x).take(2).collect();
            if occ.len() < 2 {
                break;
            }
            let before = w.len();
            reduce_pair(b, delta, occ[0], occ[1])?;
            w = word(b, delta)?;
            bound -= before - w.len();
        }
        match (0..bound).find(|&p| w[p] == x) {
            Some(p) => bound = grow_block(b, delta, p, bound)?.0,
            None => continue,
        }
    }
    validate_with(b.current(), delta).map_err(|e| NormalizeError::Internal(format!("result rejected: {e}")))
}

fn check_delta(c: &Circuit, delta: &DeltaGateSet) -> Result<(), NormalizeError> {
    if c.width() != delta.width() {
        return Err(NormalizeError::WidthMismatch(c.width(), delta.width()));
    }
    match c.gates().iter().position(|g| delta.index_of(g).is_none()) {
        Some(position) => Err(NormalizeError::NotDelta { position }),
        None => Ok(()),
    }
}

/// Rewrites `A B A` at `position` into `B A B`.
pub fn aba_to_bab(c: &Circuit, position: usize) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    let mut b = TraceBuilder::new(c.clone());
    braid(&mut b, position)?;
    Ok(b.finish())
}

/// Reverses the `(2m-1)`-gate palindrome at `position`.
pub fn palindrome_reverse(c: &Circuit, position: usize, m: usize) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    let mut b = TraceBuilder::new(c.clone());
    reverse_palindrome(&mut b, position, m)?;
    Ok(b.finish())
}

/// Reduces the first two occurrences of `M_i` to at most one.
pub fn reduce_double_occurrence(
    c: &Circuit,
    delta: &DeltaGateSet,
    i: usize,
) -> Result<(Circuit, RewriteTrace), NormalizeError> {
    reduce_double_occurrence_measured(c, delta, i).map(|(c, t, _)| (c, t))
}

/// Rewritten circuit, its trace, and the measure before each round.
pub type MeasuredReduction = (Circuit, RewriteTrace, Vec<(usize, usize)>);

/// As [`reduce_double_occurrence`], also returning the
/// `(occurrences of M_i, gates between the pair)` measure before each round.
pub fn reduce_double_occurrence_measured(
    c: &Circuit,
    delta: &DeltaGateSet,
    i: usize,
) -> Result<MeasuredReduction, NormalizeError> {
    check_delta(c, delta)?;
    let mut b = TraceBuilder::new(c.clone());
    let w = word(&b, delta)?;
    let occ: Vec<usize> = w.iter().enumerate().filter(|(_, &x)| x == i).map(|(p, _)| p).take(2).collect();
    let measures = match occ[..] {
        [l, r] => reduce_pair(&mut b, delta, l, r)?,
        _ => Vec::new(),
    };
    let (c, t) = b.finish();
    Ok((c, t, measures))
}

/// Moves the single `M_i` right until it heads a consecutive run
/// `M_i .. M_{i+k}` ending the circuit; gates after it must all have larger
/// indices. Returns the circuit and the run's start position.
pub fn form_block(c: &Circuit, delta: &DeltaGateSet, i: usize) -> Result<(Circuit, RewriteTrace, usize), NormalizeError> {
    check_delta(c, delta)?;
    let mut b = TraceBuilder::new(c.clone());
    let w = word(&b, delta)?;
    let occ: Vec<usize> = w.iter().enumerate().filter(|(_, &x)| x == i).map(|(p, _)| p).collect();
    let &[p] = &occ[..] else {
        return Err(NormalizeError::Precondition(format!("M_{i} occurs {} times, expected once", occ.len())));
    };
    let end = w.len();
    let (start, _) = grow_block(&mut b, delta, p, end)?;
    let (c, t) = b.finish();
    Ok((c, t, start))
}

/// Rewrites a circuit over Δ into its canonical form.
pub fn canonicalize_delta(c: &Circuit, delta: &DeltaGateSet) -> Result<(CanonicalForm, RewriteTrace), NormalizeError> {
    check_delta(c, delta)?;
    let mut b = TraceBuilder::new(c.clone());
    let form = canonicalize_delta_in(&mut b, delta)?;
    Ok((form, b.finish().1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{constructive_canonicalize, gray_path};
    use crate::sim::simulate;

    fn g(p: &[usize], n: &[usize], t: usize) -> Gate {
        Gate::new(p, n, t).unwrap()
    }

    fn delta(n: usize) -> DeltaGateSet {
        DeltaGateSet::new(&gray_path(n).unwrap())
    }

    fn over(d: &DeltaGateSet, idx: &[usize]) -> Circuit {
        Circuit::new(d.width(), idx.iter().map(|&i| d.gate(i)).collect()).unwrap()
    }

    fn check(before: &Circuit, after: &Circuit, trace: &RewriteTrace) {
        assert_eq!(simulate(before).unwrap(), simulate(after).unwrap());
        assert_eq!(&trace.replay().unwrap(), after);
        assert!(trace.steps.iter().all(|s| !s.is_macro()));
    }

    #[test]
    fn structural_commutation() {
        let d = delta(2);
        assert!(commutes_structurally(&d.gate(0), &d.gate(2)));
        assert!(!commutes_structurally(&d.gate(0), &d.gate(1)));
        assert!(!commutes_structurally(&d.gate(1), &d.gate(1)));
    }

    #[test]
    fn x_passes_flip_polarity() {
        let c = Circuit::new(3, vec![g(&[1], &[2], 3), Gate::x(2).unwrap(), g(&[2], &[], 1)]).unwrap();
        let mut b = TraceBuilder::new(c.clone());
        pass_x_left(&mut b, 1).unwrap();
        assert_eq!(b.gates()[..2], [Gate::x(2).unwrap(), g(&[1, 2], &[], 3)]);
        pass_x_right(&mut b, 0).unwrap();
        pass_x_right(&mut b, 1).unwrap();
        assert_eq!(b.gates(), &[g(&[1], &[2], 3), g(&[], &[2], 1), Gate::x(2).unwrap()]);
        let (end, trace) = b.finish();
        check(&c, &end, &trace);
    }

    #[test]
    fn braid_all_positive_is_one_step() {
        let a = g(&[1, 2], &[], 3);
        let m = g(&[1, 3], &[], 2);
        let c = Circuit::new(3, vec![a, m, a]).unwrap();
        let (out, trace) = aba_to_bab(&c, 0).unwrap();
        assert_eq!(out.gates(), &[m, a, m]);
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn braid_mixed_polarity() {
        let a = g(&[2], &[1, 4], 3);
        let m = g(&[3], &[1, 4], 2);
        let c = Circuit::new(4, vec![a, m, a]).unwrap();
        let (out, trace) = aba_to_bab(&c, 0).unwrap();
        assert_eq!(out.gates(), &[m, a, m]);
        check(&c, &out, &trace);
        let (back, _) = aba_to_bab(&out, 0).unwrap();
        assert_eq!(back, c);
        let bad = Circuit::new(4, vec![a, g(&[3], &[4], 2), a]).unwrap();
        assert!(aba_to_bab(&bad, 0).is_err());
    }

    #[test]
    fn palindrome_examples() {
        let d = delta(3);
        let c = over(&d, &[4]);
        assert_eq!(palindrome_reverse(&c, 0, 1).unwrap().0, c);
        let c = over(&d, &[1, 2, 3, 2, 1]);
        let (out, trace) = palindrome_reverse(&c, 0, 3).unwrap();
        assert_eq!(out, over(&d, &[3, 2, 1, 2, 3]));
        check(&c, &out, &trace);
        let c = over(&d, &[0, 1, 2, 3, 4, 5, 4, 3, 2, 1, 0]);
        let (out, trace) = palindrome_reverse(&c, 0, 6).unwrap();
        assert_eq!(out, over(&d, &[5, 4, 3, 2, 1, 0, 1, 2, 3, 4, 5]));
        check(&c, &out, &trace);
    }

    #[test]
    fn double_occurrence_examples() {
        let d = delta(2);
        let c = over(&d, &[0, 2, 0]);
        let (out, trace) = reduce_double_occurrence(&c, &d, 0).unwrap();
        assert_eq!(out, over(&d, &[2]));
        check(&c, &out, &trace);
        let c = over(&d, &[0, 1, 0]);
        assert_eq!(reduce_double_occurrence(&c, &d, 0).unwrap().0, over(&d, &[1, 0, 1]));
        let c = over(&d, &[0, 1, 1, 0]);
        assert!(reduce_double_occurrence(&c, &d, 0).unwrap().0.is_empty());
    }

    #[test]
    fn double_occurrence_from_below() {
        let d = delta(3);
        let c = over(&d, &[3, 2, 0, 3]);
        let (out, trace, measures) = reduce_double_occurrence_measured(&c, &d, 3).unwrap();
        check(&c, &out, &trace);
        assert_eq!(out, over(&d, &[0, 2, 3, 2]));
        assert!(measures.windows(2).all(|w| w[1] < w[0]));
        // neighbours on both sides of the index between the pair
        let mixed = over(&d, &[1, 2, 0, 1]);
        assert!(matches!(
            reduce_double_occurrence(&mixed, &d, 1),
            Err(NormalizeError::NoCaseApplies { .. })
        ));
    }

    #[test]
    fn block_examples() {
        let d = delta(2);
        let (out, _, s) = form_block(&over(&d, &[0]), &d, 0).unwrap();
        assert_eq!((out, s), (over(&d, &[0]), 0));
        let (out, _, s) = form_block(&over(&d, &[0, 1]), &d, 0).unwrap();
        assert_eq!((out, s), (over(&d, &[0, 1]), 0));
        let c = over(&d, &[0, 2, 1]);
        let (out, trace, s) = form_block(&c, &d, 0).unwrap();
        check(&c, &out, &trace);
        let w: Vec<usize> = out.gates().iter().map(|g| d.index_of(g).unwrap()).collect();
        assert_eq!(w[s], 0);
        assert!(w[s..].windows(2).all(|p| p[1] == p[0] + 1));
        assert!(!w[..s].contains(&0));
    }

    #[test]
    fn delta_canonicalization_examples() {
        let d = delta(2);
        let (form, trace) = canonicalize_delta(&Circuit::empty(2).unwrap(), &d).unwrap();
        assert!(form.blocks.is_empty() && trace.is_empty());
        let (form, trace) = canonicalize_delta(&over(&d, &[0, 0]), &d).unwrap();
        assert!(form.blocks.is_empty());
        assert_eq!(trace.len(), 1);
        let d3 = delta(3);
        let c = over(&d3, &[3, 0, 5, 1, 6, 2, 0, 4, 3, 1, 6, 5]);
        let (form, trace) = canonicalize_delta(&c, &d3).unwrap();
        let expected = constructive_canonicalize(&simulate(&c).unwrap(), d3.path()).unwrap();
        assert_eq!(form, expected);
        assert_eq!(trace.replay().unwrap(), form.to_circuit(&d3).unwrap());
        assert!(canonicalize_delta(&Circuit::new(2, vec![Gate::x(1).unwrap()]).unwrap(), &d).is_err());
    }
}
