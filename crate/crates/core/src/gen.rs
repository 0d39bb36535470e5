//! Random circuits, permutations, rule instances and sound mutations for
//! testing and benchmarking.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ir::{Circuit, Gate, LineSet, Permutation};
use crate::rules::{
    enumerate_matches, Bindings, Direction, RewriteTrace, RuleId, RuleInstance, SwapVariant, TraceBuilder,
};

/// Splits `lines` at random into positive controls, negative controls and
/// unused lines, one third each in expectation.
pub fn random_roles<R: Rng + ?Sized>(rng: &mut R, lines: impl IntoIterator<Item = usize>) -> (LineSet, LineSet) {
    let (mut p, mut n) = (LineSet::EMPTY, LineSet::EMPTY);
    for l in lines {
        match rng.gen_range(0..3) {
            0 => p = p.with(l),
            1 => n = n.with(l),
            _ => {}
        }
    }
    (p, n)
}

fn others(width: usize, exclude: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (1..=width).filter(move |l| !exclude.contains(l))
}

/// A mixed-polarity gate with uniformly random target and line roles.
pub fn random_gate<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Gate {
    let t = rng.gen_range(1..=width);
    let (p, n) = random_roles(rng, others(width, &[t]));
    Gate::from_sets(p, n, t).expect("roles are disjoint from the target")
}

/// A gate drawn evenly from X, CNOT, Toffoli and mixed-polarity gates,
/// falling back to smaller kinds when the width is too small.
pub fn random_mixed_gate<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Gate {
    let mut lines: Vec<usize> = (1..=width).collect();
    lines.shuffle(rng);
    match rng.gen_range(0..4).min(width) {
        0 => Gate::x(lines[0]),
        1 if width >= 2 => Gate::cnot(lines[0], lines[1]),
        2 if width >= 3 => Gate::toffoli(lines[0], lines[1], lines[2]),
        _ => Ok(random_gate(rng, width)),
    }
    .expect("distinct lines within width")
}

pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, width: usize, len: usize) -> Circuit {
    Circuit::new(width, (0..len).map(|_| random_gate(rng, width)).collect()).expect("gates fit the width")
}

pub fn random_mixed_circuit<R: Rng + ?Sized>(rng: &mut R, width: usize, len: usize) -> Circuit {
    Circuit::new(width, (0..len).map(|_| random_mixed_gate(rng, width)).collect()).expect("gates fit the width")
}

/// A uniformly random permutation of `{0,1}^width`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Permutation {
    let mut images: Vec<u64> = (0..1u64 << width).collect();
    images.shuffle(rng);
    Permutation::from_images(width, images).expect("a shuffle is a bijection")
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, s: LineSet) -> LineSet {
    s.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

fn two_lines<R: Rng + ?Sized>(rng: &mut R, width: usize) -> (usize, usize) {
    let mut lines: Vec<usize> = (1..=width).collect();
    lines.shuffle(rng);
    (lines[0], lines[1])
}

/// Nonempty ordered selection of at most `max` lines from `pool`.
fn random_sequence<R: Rng + ?Sized>(rng: &mut R, pool: Vec<usize>, max: usize) -> Vec<usize> {
    let mut pool = pool;
    pool.shuffle(rng);
    let k = rng.gen_range(1..=pool.len().min(max));
    pool.truncate(k);
    pool
}

/// Random bindings satisfying the side conditions of `rule`, or `None` when
/// the width is too small. Expansion rules use at most three lines in `Q`.
pub fn random_bindings<R: Rng + ?Sized>(rng: &mut R, rule: RuleId, width: usize) -> Option<Bindings> {
    if width < 2 && rule != RuleId::R1 && rule != RuleId::R7 {
        return None;
    }
    Some(match rule {
        RuleId::R1 => Bindings::R1 { gate: random_gate(rng, width) },
        RuleId::R2 => {
            let (p, q) = two_lines(rng, width);
            let (positives, negatives) = random_roles(rng, others(width, &[p, q]));
            Bindings::R2 { positives, negatives, p, q }
        }
        RuleId::R3 => {
            let l = rng.gen_range(1..=width);
            let pick = |rng: &mut R, positive: bool| {
                let t = *others(width, &[l]).collect::<Vec<_>>().choose(rng).expect("width >= 2");
                let (p, n) = random_roles(rng, others(width, &[l, t]));
                if positive {
                    Gate::from_sets(p.with(l), n, t)
                } else {
                    Gate::from_sets(p, n.with(l), t)
                }
                .expect("disjoint roles")
            };
            let first_positive = rng.gen_bool(0.5);
            Bindings::R3 { a: pick(rng, first_positive), b: pick(rng, !first_positive) }
        }
        RuleId::R4 => {
            let (p, q) = two_lines(rng, width);
            let (positives, negatives) = random_roles(rng, others(width, &[p, q]));
            let variant = if rng.gen_bool(0.5) { SwapVariant::Positive } else { SwapVariant::Negative };
            Bindings::R4 { variant, p, q, positives, negatives }
        }
        RuleId::R5 | RuleId::R6 => {
            let q = rng.gen_range(1..=width);
            let mut lines = random_sequence(rng, others(width, &[q]).collect(), 3);
            let (positives, negatives) = random_roles(rng, others(width, &[q]).filter(|l| !lines.contains(l)));
            if rule == RuleId::R5 {
                Bindings::R5 { positives, negatives, q, lines }
            } else {
                lines.sort_unstable();
                Bindings::R6 { positives, negatives, q, lines }
            }
        }
        RuleId::R7 => {
            let q = rng.gen_range(1..=width);
            let gate = |rng: &mut R| {
                let (p, n) = random_roles(rng, others(width, &[q]));
                Gate::from_sets(p, n, q).expect("disjoint roles")
            };
            Bindings::R7 { a: gate(rng), b: gate(rng) }
        }
        RuleId::R8 => {
            let q = rng.gen_range(1..=width);
            let negatives = random_sequence(rng, others(width, &[q]).collect(), width);
            let positives: LineSet = others(width, &[q]).filter(|l| !negatives.contains(l) && rng.gen_bool(0.5)).collect();
            Bindings::R8 { positives, negatives, q }
        }
        RuleId::R9 => {
            let (p, q) = two_lines(rng, width);
            let (p2, n2) = random_roles(rng, others(width, &[p, q]));
            Bindings::R9 { p1: random_subset(rng, p2), n1: random_subset(rng, n2), p, p2, n2, q }
        }
        RuleId::R10 => {
            let (p, q) = two_lines(rng, width);
            let positives: LineSet = others(width, &[p, q]).filter(|_| rng.gen_bool(0.5)).collect();
            Bindings::R10 { positives, p, q }
        }
    })
}

/// A circuit containing one side of a random `rule` instance between random
/// gates, and the instance that rewrites it.
pub fn plant<R: Rng + ?Sized>(
    rng: &mut R,
    rule: RuleId,
    width: usize,
    max_context: usize,
) -> Option<(Circuit, RuleInstance)> {
    let bindings = random_bindings(rng, rule, width)?;
    let direction = if rng.gen_bool(0.5) { Direction::Forward } else { Direction::Backward };
    let inst = RuleInstance::new(0, direction, bindings);
    let (from, _) = inst.oriented_sides().ok()?;
    let before = rng.gen_range(0..=max_context);
    let after = rng.gen_range(0..=max_context);
    let mut gates: Vec<Gate> = (0..before).map(|_| random_gate(rng, width)).collect();
    gates.extend(from);
    gates.extend((0..after).map(|_| random_gate(rng, width)));
    Some((Circuit::new(width, gates).ok()?, RuleInstance { position: before, ..inst }))
}

/// A random applicable instance on `c`: either a match found in the circuit
/// or one of the free-parameter rewrites (inserting a cancelling pair,
/// splitting a gate on a fresh line, expanding a gate on one or two unused
/// lines).
pub fn random_sound_instance<R: Rng + ?Sized>(rng: &mut R, c: &Circuit) -> Option<RuleInstance> {
    let width = c.width();
    match rng.gen_range(0..4) {
        0 => {
            let matches = enumerate_matches(c, &RuleId::ALL);
            matches.choose(rng).cloned()
        }
        1 => {
            let pos = rng.gen_range(0..=c.len());
            Some(RuleInstance::new(pos, Direction::Backward, Bindings::R1 { gate: random_gate(rng, width) }))
        }
        k => {
            let pos = rng.gen_range(0..c.len().max(1));
            let g = *c.gates().get(pos)?;
            let free: Vec<usize> = others(width, &[]).filter(|&l| g.support_mask() & (1 << (l - 1)) == 0).collect();
            if free.is_empty() {
                return None;
            }
            let bindings = if k == 2 {
                let p = *free.choose(rng)?;
                Bindings::R2 { positives: g.positive_set(), negatives: g.negative_set(), p, q: g.target() }
            } else {
                let mut lines = random_sequence(rng, free, 2);
                lines.sort_unstable();
                Bindings::R6 { positives: g.positive_set(), negatives: g.negative_set(), q: g.target(), lines }
            };
            let dir = if k == 2 { Direction::Backward } else { Direction::Forward };
            Some(RuleInstance::new(pos, dir, bindings))
        }
    }
}

/// Applies `steps` random sound rewrites to `c`.
pub fn mutate<R: Rng + ?Sized>(rng: &mut R, c: &Circuit, steps: usize) -> (Circuit, RewriteTrace) {
    let mut b = TraceBuilder::new(c.clone());
    let mut applied = 0;
    let mut attempts = 0;
    while applied < steps && attempts < steps * 50 {
        attempts += 1;
        if let Some(inst) = random_sound_instance(rng, b.current()) {
            if b.apply(inst).is_ok() {
                applied += 1;
            }
        }
    }
    b.finish()
}
