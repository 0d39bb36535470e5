//! Greedy gate-count reduction using only rule steps.

use super::{match_rule, opposite_polarity_control, Bindings, Direction, RuleId, RuleInstance};
use super::trace::{RewriteTrace, TraceBuilder};
use crate::ir::{Circuit, Gate};

/// Whether `a b` can be reordered to `b a` by R3 or R7.
fn swap_rule(a: &Gate, b: &Gate) -> Option<Bindings> {
    if a == b {
        None
    } else if opposite_polarity_control(a, b) {
        Some(Bindings::R3 { a: *a, b: *b })
    } else if a.target() == b.target() {
        Some(Bindings::R7 { a: *a, b: *b })
    } else {
        None
    }
}

/// Whether the adjacent pair `a b` can be shortened, possibly after one swap.
fn pair_reduces(a: &Gate, b: &Gate) -> bool {
    if a == b {
        return true;
    }
    if a.target() != b.target() {
        return false;
    }
    a.control_mask() == b.control_mask() && (a.positive_mask() ^ b.positive_mask()).count_ones() == 1
}

/// Reduces the adjacent pair at `pos`; returns false if nothing applies.
fn reduce_at(b: &mut TraceBuilder, pos: usize) -> bool {
    if let Some(inst) = match_rule(b.current(), RuleId::R1, pos, Direction::Forward) {
        return b.apply(inst).is_ok();
    }
    if let Some(inst) = match_rule(b.current(), RuleId::R2, pos, Direction::Forward) {
        return b.apply(inst).is_ok();
    }
    let g = b.gates();
    if pos + 1 < g.len() && pair_reduces(&g[pos], &g[pos + 1]) {
        // Wrong polarity order for R2: swap first (same target, so R7).
        let (x, y) = (g[pos], g[pos + 1]);
        if b.apply(RuleInstance::new(pos, Direction::Forward, Bindings::R7 { a: x, b: y })).is_err() {
            return false;
        }
        if let Some(inst) = match_rule(b.current(), RuleId::R2, pos, Direction::Forward) {
            return b.apply(inst).is_ok();
        }
    }
    false
}

/// Greedily shortens `c` with R1 and R2, using R3/R7 swaps to bring
/// reducible pairs together. At most `budget` swap steps are spent; the gate
/// count never increases.
pub fn optimize(c: &Circuit, budget: usize) -> (Circuit, RewriteTrace) {
    let mut b = TraceBuilder::new(c.clone());
    let mut spent = 0usize;
    'outer: loop {
        for pos in 0..b.gates().len().saturating_sub(1) {
            if reduce_at(&mut b, pos) {
                continue 'outer;
            }
        }
        // Look for a pair that can be made adjacent by swaps.
        let gates = b.gates().to_vec();
        for j in 1..gates.len() {
            for i in (0..j.saturating_sub(1)).rev() {
                if !pair_reduces(&gates[i], &gates[j]) {
                    continue;
                }
                let cost = j - i - 1;
                if spent + cost > budget {
                    continue;
                }
                // Move gate j left past everything between.
                if (i + 1..j).all(|k| swap_rule(&gates[k], &gates[j]).is_some()) {
                    for k in (i + 1..j).rev() {
                        let g = b.gates();
                        let bind = swap_rule(&g[k], &g[k + 1]).expect("checked above");
                        b.apply(RuleInstance::new(k, Direction::Forward, bind)).expect("swap matches");
                    }
                    spent += cost;
                    if reduce_at(&mut b, i) {
                        continue 'outer;
                    }
                    break 'outer;
                }
                // Or move gate i right.
                if (i + 1..j).all(|k| swap_rule(&gates[i], &gates[k]).is_some()) {
                    for k in i..j - 1 {
                        let g = b.gates();
                        let bind = swap_rule(&g[k], &g[k + 1]).expect("checked above");
                        b.apply(RuleInstance::new(k, Direction::Forward, bind)).expect("swap matches");
                    }
                    spent += cost;
                    if reduce_at(&mut b, j - 1) {
                        continue 'outer;
                    }
                    break 'outer;
                }
            }
        }
        break;
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate;

    fn g(p: &[usize], n: &[usize], t: usize) -> Gate {
        Gate::new(p, n, t).unwrap()
    }

    #[test]
    fn cancels_through_commuting_gates() {
        let a = g(&[1], &[], 3);
        let c = Circuit::new(3, vec![a, g(&[], &[1], 2), a]).unwrap();
        let (out, trace) = optimize(&c, 10);
        assert_eq!(out.gates(), &[g(&[], &[1], 2)]);
        assert_eq!(trace.replay().unwrap(), out);
    }

    #[test]
    fn merges_in_either_order() {
        let c = Circuit::new(2, vec![g(&[1], &[], 2), g(&[], &[1], 2)]).unwrap();
        let (out, _) = optimize(&c, 0);
        assert_eq!(out.gates(), &[Gate::x(2).unwrap()]);
        assert_eq!(simulate(&c).unwrap(), simulate(&out).unwrap());
    }

    #[test]
    fn zero_budget_blocks_swaps() {
        let a = g(&[1], &[], 3);
        let c = Circuit::new(3, vec![a, g(&[], &[1], 2), a]).unwrap();
        let (out, _) = optimize(&c, 0);
        assert_eq!(out, c);
    }
}
