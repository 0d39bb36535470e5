//! Reducing a palindrome of exchange gates along a hypercube walk to the
//! single gate exchanging the walk's endpoints.
//!
//! The palindrome `G_0 .. G_{r-1} G_r G_{r-1} .. G_0`, with `G_t` exchanging
//! walk vertices `v_t` and `v_{t+1}`, computes the exchange of `v_0` and
//! `v_{r+1}` while the walk has no repeated vertex. Each round picks two
//! steps `g < h` along the same coordinate with distinct coordinates between
//! them and removes both, flipping that coordinate in the gates between
//! (braid/commute moves, then R5 under X-conjugation).

use super::coords::CoordinateSequence;
use super::moves::{cancel, conjugate, reverse_palindrome, swap, unconjugate};
use super::NormalizeError;
use crate::canon::DeltaGateSet;
use crate::ir::{BitString, Circuit, Gate, LineSet};
use crate::rules::{Bindings, Direction, RewriteTrace, RuleInstance, TraceBuilder};

/// Result of [`reduce_palindrome_to_gate`].
#[derive(Debug, Clone)]
pub struct PalindromeReduction {
    pub gate: Gate,
    pub trace: RewriteTrace,
    /// The walk's coordinate sequence at the start and after every round.
    pub coordinates: Vec<CoordinateSequence>,
}

/// Vertices of the walk traced by `half`; `None` if consecutive gates do not
/// share exactly one exchanged string.
fn walk_of(half: &[Gate], width: usize) -> Option<Vec<BitString>> {
    let pairs: Vec<(BitString, BitString)> = half.iter().map(|g| g.exchanges(width)).collect::<Option<_>>()?;
    let (a, b) = pairs[0];
    let first = match pairs.get(1) {
        None => a,
        Some(&(c, d)) => {
            let a_shared = a == c || a == d;
            let b_shared = b == c || b == d;
            match (a_shared, b_shared) {
                (false, true) => a,
                (true, false) => b,
                _ => return None,
            }
        }
    };
    let mut verts = vec![first];
    for &(a, b) in &pairs {
        let cur = *verts.last().unwrap();
        verts.push(if cur == a {
            b
        } else if cur == b {
            a
        } else {
            return None;
        });
    }
    Some(verts)
}

fn coordinates_of(verts: &[BitString]) -> Vec<usize> {
    verts.windows(2).map(|w| w[0].differing_lines(&w[1])[0]).collect()
}

/// Cancels adjacent identical gates in the palindrome `half ++ rev(half)`
/// at `pos` (both halves), keeping `half` in sync.
fn cleanup(b: &mut TraceBuilder, pos: usize, half: &mut Vec<Gate>) -> Result<(), NormalizeError> {
    while let Some(j) = (0..half.len().saturating_sub(1)).find(|&j| half[j] == half[j + 1]) {
        let m = half.len();
        if j + 2 == m {
            return Err(NormalizeError::Internal("walk folds back onto its midpoint".into()));
        }
        cancel(b, pos + j)?;
        cancel(b, pos + 2 * m - 5 - j)?;
        half.drain(j..j + 2);
    }
    Ok(())
}

/// Pairs `(g, h)` with equal coordinates and distinct coordinates strictly
/// between, ordered by `h`.
fn candidates(coords: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for h in 1..coords.len() {
        let Some(g) = (0..h).rev().find(|&g| coords[g] == coords[h]) else {
            continue;
        };
        let mut seen = 0u64;
        let distinct = coords[g + 1..h].iter().all(|&c| {
            let bit = 1u64 << (c - 1);
            let fresh = seen & bit == 0;
            seen |= bit;
            fresh
        });
        if distinct && h > g + 1 {
            out.push((g, h));
        }
    }
    out
}

/// The walk after removing steps `g` and `h`, with back-and-forth steps
/// removed; `None` if it folds onto its end.
fn predicted_walk(verts: &[BitString], g: usize, h: usize) -> Option<Vec<BitString>> {
    let t = verts[g].differing_lines(&verts[g + 1])[0];
    let mut v: Vec<BitString> = verts[..=g].to_vec();
    for x in &verts[g + 2..=h] {
        v.push(x.flip(t).ok()?);
    }
    v.extend_from_slice(&verts[h + 2..]);
    while let Some(k) = (0..v.len().saturating_sub(2)).find(|&k| v[k] == v[k + 2]) {
        if k + 3 == v.len() {
            return None;
        }
        v.drain(k + 1..k + 3);
    }
    Some(v)
}

fn all_distinct(v: &[BitString]) -> bool {
    let mut seen = std::collections::HashSet::new();
    v.iter().all(|b| seen.insert(*b))
}

/// Removes steps `g` and `h` from the walk palindrome at `base` with
/// `r + 1` gates in its half.
fn eliminate(
    b: &mut TraceBuilder,
    base: usize,
    verts: &[BitString],
    g: usize,
    h: usize,
) -> Result<usize, NormalizeError> {
    let r = verts.len() - 2;
    let width = verts[0].width();
    let coords = coordinates_of(verts);
    let t = coords[g];
    let lr = r - h;
    let lb = h - g;

    // The tail palindrome from step h outward becomes centred on step h.
    reverse_palindrome(b, base + h, r - h + 1)?;
    // Move steps g..h-1 inside the steps after h, on both sides.
    for k in 0..lr {
        for p in (base + g + k..base + h + k).rev() {
            swap(b, p)?;
        }
    }
    let mut bs = base + 2 * r - h + 1;
    for _ in 0..lr {
        for p in bs - 1..bs + lb - 1 {
            swap(b, p)?;
        }
        bs -= 1;
    }
    // Bring step h next to step g.
    reverse_palindrome(b, base + g + lr + 1, lb)?;

    // Now `G_g G_h [G_{h-1} .. G_{g+1} .. G_{h-1}] G_h G_g` at p5.
    let p5 = base + g + lr;
    let between: Vec<usize> = coords[g + 1..h].to_vec();
    let qset: LineSet = between.iter().copied().collect();
    let v = verts[g];
    let mut flips: Vec<usize> = between.iter().copied().filter(|&s| v.bit(s).unwrap_or(false)).collect();
    if v.bit(t)? {
        flips.push(t);
    }
    flips.sort_unstable();
    let m5 = h - g - 1;
    for (k, &s) in flips.iter().enumerate() {
        conjugate(b, p5 + k, 2 * m5 + 3, s)?;
    }
    let mut positives = LineSet::EMPTY;
    let mut negatives = LineSet::EMPTY;
    for line in (1..=width).filter(|&l| l != t && !qset.contains(l)) {
        if v.bit(line)? {
            positives = positives.with(line);
        } else {
            negatives = negatives.with(line);
        }
    }
    let lines: Vec<usize> = between.iter().rev().copied().collect();
    b.apply(RuleInstance::new(
        p5 + flips.len(),
        Direction::Forward,
        Bindings::R5 { positives, negatives, q: t, lines },
    ))?;
    for (k, &s) in flips.iter().enumerate().rev() {
        unconjugate(b, p5 + k, 2 * m5 - 1, s)?;
    }

    // Restore walk order for the remaining steps from g on.
    let m = r - g - 1;
    let mut y: Vec<Gate> = b.gates()[base + g..base + g + m].to_vec();
    cleanup(b, base + g, &mut y)?;
    reverse_palindrome(b, base + g, y.len())?;
    Ok(g + y.len())
}

/// Reduces a walk palindrome inside `b` at `base`; `len` is its gate count.
pub(crate) fn reduce_walk_in(
    b: &mut TraceBuilder,
    base: usize,
    len: usize,
) -> Result<(Gate, Vec<CoordinateSequence>), NormalizeError> {
    let width = b.current().width();
    let not_walk = || NormalizeError::Precondition("not a palindrome along a hypercube walk".into());
    if len.is_multiple_of(2) || base + len > b.gates().len() {
        return Err(not_walk());
    }
    let seg = &b.gates()[base..base + len];
    if seg.iter().ne(seg.iter().rev()) {
        return Err(not_walk());
    }
    let mut half: Vec<Gate> = seg[..len.div_ceil(2)].to_vec();
    let mut history = Vec::new();
    loop {
        cleanup(b, base, &mut half)?;
        let verts = walk_of(&half, width).ok_or_else(not_walk)?;
        let coords = coordinates_of(&verts);
        history.push(CoordinateSequence::new(width, coords.clone())?);
        if half.len() == 1 {
            return Ok((half[0], history));
        }
        let mut order: Vec<(usize, usize)> = candidates(&coords);
        if order.is_empty() {
            return Err(NormalizeError::NotReducible(format!(
                "walk {} has no repeated coordinate",
                history.last().unwrap()
            )));
        }
        order.sort_by_key(|&(g, h)| !predicted_walk(&verts, g, h).is_some_and(|v| all_distinct(&v)));
        let mark = b.steps();
        let saved = b.current().clone();
        let mut new_half = None;
        for (g, h) in order {
            if let Ok(n) = eliminate(b, base, &verts, g, h) {
                new_half = Some(n);
                break;
            }
            b.truncate(mark, saved.clone());
        }
        let Some(n) = new_half else {
            return Err(NormalizeError::NotReducible(format!(
                "no elimination applies to walk {}",
                history.last().unwrap()
            )));
        };
        half = b.gates()[base..base + n].to_vec();
    }
}

/// Reduces any palindrome of full-width gates along a hypercube walk.
pub fn reduce_walk_palindrome(c: &Circuit) -> Result<PalindromeReduction, NormalizeError> {
    let mut b = TraceBuilder::new(c.clone());
    let (gate, coordinates) = reduce_walk_in(&mut b, 0, c.len())?;
    Ok(PalindromeReduction { gate, trace: b.finish().1, coordinates })
}

/// Reduces the Δ palindrome `M_i .. M_{j-1} .. M_i` to the single gate
/// exchanging `a_i` and `a_j`.
pub fn reduce_palindrome_to_gate(c: &Circuit, delta: &DeltaGateSet) -> Result<PalindromeReduction, NormalizeError> {
    if c.width() != delta.width() {
        return Err(NormalizeError::WidthMismatch(c.width(), delta.width()));
    }
    let idx: Vec<usize> = c
        .gates()
        .iter()
        .enumerate()
        .map(|(position, g)| delta.index_of(g).ok_or(NormalizeError::NotDelta { position }))
        .collect::<Result<_, _>>()?;
    let half = idx.len().div_ceil(2);
    let shaped = idx.len() % 2 == 1
        && idx[..half].windows(2).all(|w| w[1] == w[0] + 1)
        && idx.iter().eq(idx.iter().rev());
    if !shaped {
        return Err(NormalizeError::Precondition("not a palindrome M_i .. M_{j-1} .. M_i".into()));
    }
    reduce_walk_palindrome(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::gray_path;
    use crate::sim::simulate;

    fn run_all_gates(n: usize) {
        let path = gray_path(n).unwrap();
        let d = DeltaGateSet::new(&path);
        let size = path.len();
        for i in 0..size {
            for j in i + 2..size {
                if path.node(i).hamming_distance(&path.node(j)) != 1 {
                    continue;
                }
                let mut idx: Vec<usize> = (i..j).collect();
                idx.extend((i..j - 1).rev());
                let c = Circuit::new(n, idx.iter().map(|&k| d.gate(k)).collect()).unwrap();
                let red = reduce_palindrome_to_gate(&c, &d).unwrap_or_else(|e| panic!("{i}->{j}: {e}"));
                assert_eq!(red.gate, Gate::exchanging(&path.node(i), &path.node(j)).unwrap());
                let end = red.trace.replay().unwrap();
                assert_eq!(end.gates(), &[red.gate]);
                assert_eq!(simulate(&c).unwrap(), simulate(&end).unwrap());
            }
        }
    }

    #[test]
    fn width_two_example() {
        let path = gray_path(2).unwrap();
        let d = DeltaGateSet::new(&path);
        let c = Circuit::new(2, [0, 1, 2, 1, 0].iter().map(|&k| d.gate(k)).collect()).unwrap();
        let red = reduce_palindrome_to_gate(&c, &d).unwrap();
        assert_eq!(red.gate, Gate::new(&[], &[2], 1).unwrap());
        assert_eq!(red.coordinates.first().unwrap().entries(), &[2, 1, 2]);
        assert_eq!(red.coordinates.last().unwrap().entries(), &[1]);
        let single = Circuit::new(2, vec![d.gate(1)]).unwrap();
        assert_eq!(reduce_palindrome_to_gate(&single, &d).unwrap().gate, d.gate(1));
    }

    #[test]
    fn all_gates_small_widths() {
        run_all_gates(2);
        run_all_gates(3);
        run_all_gates(4);
    }

    #[test]
    fn folded_walk_example() {
        // walk 000 100 110 010 000 001 revisits 000
        let verts: Vec<BitString> =
            ["000", "100", "110", "010", "000", "001"].iter().map(|s| s.parse().unwrap()).collect();
        let mut gates: Vec<Gate> = verts.windows(2).map(|w| Gate::exchanging(&w[0], &w[1]).unwrap()).collect();
        let back: Vec<Gate> = gates.iter().rev().skip(1).copied().collect();
        gates.extend(back);
        let c = Circuit::new(3, gates).unwrap();
        let red = reduce_walk_palindrome(&c).unwrap();
        assert_eq!(red.coordinates[0].entries(), &[1, 2, 1, 2, 3]);
        assert_eq!(red.coordinates.last().unwrap().entries(), &[3]);
        assert_eq!(simulate(&c).unwrap(), simulate(&Circuit::new(3, vec![red.gate]).unwrap()).unwrap());
    }

    #[test]
    fn rejects_non_palindromes() {
        let d = DeltaGateSet::new(&gray_path(2).unwrap());
        let c = Circuit::new(2, vec![d.gate(0), d.gate(1), d.gate(0), d.gate(1), d.gate(0)]).unwrap();
        assert!(reduce_palindrome_to_gate(&c, &d).is_err());
    }
}
