//! Fixed expected values computed independently of the library.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revrules::canon::{constructive_canonicalize, gray_path, validate_canonical, DeltaGateSet};
use revrules::gen::{mutate, random_mixed_circuit};
use revrules::normalize::{
    canonicalize, decompose_to_delta, equivalent, reduce_palindrome_to_gate, widen_gates, Equivalence,
};
use revrules::sim::{equivalent_by_sim, permutation_of_exchange};
use revrules::{parse_circuit, simulate, BitString, Circuit, Gate, Permutation};

fn g(p: &[usize], n: &[usize], t: usize) -> Gate {
    Gate::new(p, n, t).unwrap()
}

const EXAMPLE: &str = "\
.width 4
cnot 3 2
cnot 1 3
g +1 -2 +3 4
cnot 3 2
g -1 -2 3
g +3 +4 2
cnot 3 1
x 4
t 1 2 4
";

// Images of 0..16 under the example circuit, line 1 most significant,
// evaluated gate by gate outside the library.
const EXAMPLE_IMAGES: [u64; 16] = [11, 15, 1, 0, 5, 4, 14, 10, 2, 7, 12, 13, 3, 6, 9, 8];

fn example() -> Circuit {
    Circuit::new(
        4,
        vec![
            Gate::cnot(3, 2).unwrap(),
            Gate::cnot(1, 3).unwrap(),
            g(&[1, 3], &[2], 4),
            Gate::cnot(3, 2).unwrap(),
            g(&[], &[1, 2], 3),
            g(&[3, 4], &[], 2),
            Gate::cnot(3, 1).unwrap(),
            Gate::x(4).unwrap(),
            g(&[1, 2], &[], 4),
        ],
    )
    .unwrap()
}

/// Evaluates the example on a bit vector with plain boolean expressions.
fn example_by_hand(x: [bool; 4]) -> [bool; 4] {
    let [mut a, mut b, mut c, mut d] = x;
    b ^= c;
    c ^= a;
    d ^= a && !b && c;
    b ^= c;
    c ^= !a && !b;
    b ^= c && d;
    a ^= c;
    d = !d;
    d ^= a && b;
    [a, b, c, d]
}

#[test]
fn example_circuit_permutation() {
    let c = example();
    assert_eq!(parse_circuit(EXAMPLE).unwrap(), c);
    let expected = Permutation::from_images(4, EXAMPLE_IMAGES.to_vec()).unwrap();
    assert_eq!(simulate(&c).unwrap(), expected);
    for x in 0..16u64 {
        let bits = [x & 8 != 0, x & 4 != 0, x & 2 != 0, x & 1 != 0];
        let y = example_by_hand(bits);
        let encoded = y.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        assert_eq!(encoded, EXAMPLE_IMAGES[x as usize]);
    }
}

#[test]
fn example_circuit_canonicalizes() {
    let c = example();
    let path = gray_path(4).unwrap();
    let (form, trace) = canonicalize(&c, &path).unwrap();
    assert_eq!(form, constructive_canonicalize(&simulate(&c).unwrap(), &path).unwrap());
    let end = trace.replay().unwrap();
    assert_eq!(end, form.to_circuit(&DeltaGateSet::new(&path)).unwrap());
    assert!(validate_canonical(&end, &path).is_ok());
}

#[test]
fn gate_semantics() {
    let toffoli = g(&[1, 2], &[], 3);
    assert!(toffoli.fires(&"110".parse().unwrap()).unwrap());
    assert!(!toffoli.fires(&"010".parse().unwrap()).unwrap());
    let mixed = g(&[2], &[1], 3);
    assert_eq!(mixed.apply(&"010".parse().unwrap()).unwrap().to_string(), "011");
    assert_eq!(mixed.apply(&"110".parse().unwrap()).unwrap().to_string(), "110");
}

#[test]
fn three_cnots_swap() {
    let c = parse_circuit(".width 2\ncnot 2 1\ncnot 1 2\ncnot 2 1").unwrap();
    assert_eq!(simulate(&c).unwrap().images(), &[0, 2, 1, 3]);
    let path = gray_path(2).unwrap();
    let form = constructive_canonicalize(&simulate(&c).unwrap(), &path).unwrap();
    let back = form.to_circuit(&DeltaGateSet::new(&path)).unwrap();
    assert_eq!(simulate(&back).unwrap(), simulate(&c).unwrap());
}

#[test]
fn exchange_of_adjacent_strings() {
    let a: BitString = "000".parse().unwrap();
    let b: BitString = "001".parse().unwrap();
    let gate = Circuit::new(3, vec![g(&[], &[1, 2], 3)]).unwrap();
    assert_eq!(permutation_of_exchange(&a, &b).unwrap(), simulate(&gate).unwrap());
}

#[test]
fn widening_a_bare_x() {
    let c = Circuit::new(2, vec![Gate::x(2).unwrap()]).unwrap();
    let (wide, trace) = widen_gates(&c).unwrap();
    assert_eq!(wide.gates(), &[g(&[], &[1], 2), g(&[1], &[], 2)]);
    assert_eq!(trace.replay().unwrap(), wide);
    // the reverse order is the same function: both gates share a target
    let swapped = Circuit::new(2, vec![g(&[1], &[], 2), g(&[], &[1], 2)]).unwrap();
    assert!(equivalent_by_sim(&wide, &swapped).unwrap());
}

#[test]
fn palindrome_for_distant_exchange() {
    let path = gray_path(2).unwrap();
    let delta = DeltaGateSet::new(&path);
    let m = g(&[], &[2], 1);
    let (pal, _) = decompose_to_delta(&m, &delta).unwrap();
    let expected: Vec<Gate> = [0, 1, 2, 1, 0].iter().map(|&i| delta.gate(i)).collect();
    assert_eq!(pal.gates(), &expected[..]);
    let swap = permutation_of_exchange(&"00".parse().unwrap(), &"10".parse().unwrap()).unwrap();
    assert_eq!(simulate(&pal).unwrap(), swap);
    let back = reduce_palindrome_to_gate(&pal, &delta).unwrap();
    assert_eq!(back.gate, m);
    assert_eq!(back.trace.replay().unwrap().gates(), &[m]);
}

#[test]
fn mutated_copies_share_a_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let path = gray_path(3).unwrap();
    for _ in 0..20 {
        let seed = random_mixed_circuit(&mut rng, 3, 6);
        let (a, _) = mutate(&mut rng, &seed, 8);
        let (b, _) = mutate(&mut rng, &seed, 8);
        assert_eq!(canonicalize(&a, &path).unwrap().0, canonicalize(&b, &path).unwrap().0);
    }
}

#[test]
fn cancelling_pair_is_equivalent_to_nothing() {
    let path = gray_path(3).unwrap();
    let a = g(&[1], &[3], 2);
    let aa = Circuit::new(3, vec![a, a]).unwrap();
    match equivalent(&aa, &Circuit::empty(3).unwrap(), &path).unwrap() {
        Equivalence::Equivalent { form, certificate } => {
            assert!(form.blocks.is_empty());
            assert!(certificate.replay().unwrap().is_empty());
        }
        other => panic!("{other:?}"),
    }
}
