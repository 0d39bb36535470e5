use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revrules::canon::{constructive_canonicalize, gray_path, validate_canonical, DeltaGateSet};
use revrules::gen::{plant, random_circuit, random_permutation};
use revrules::io::{parse_trace, print_circuit_with, print_trace, render_ascii, PrintOptions};
use revrules::normalize::{generate, reduce_coordinates, CoordinateSequence};
use revrules::rules::{apply_rule, optimize};
use revrules::{canonicalize, parse_circuit, print_circuit, simulate, BitString, RuleId};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(seed: u64, width in 1usize..=8, len in 0usize..20, short: bool) {
        let c = random_circuit(&mut rng(seed), width, len);
        let text = print_circuit_with(&c, PrintOptions { prefer_short_mnemonics: short });
        prop_assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn forward_then_backward_restores(seed: u64, rule in 0usize..10, width in 1usize..=6) {
        let mut r = rng(seed);
        if let Some((c, inst)) = plant(&mut r, RuleId::ALL[rule], width, 3) {
            let (mid, _) = apply_rule(&c, &inst).unwrap();
            prop_assert_eq!(simulate(&mid).unwrap(), simulate(&c).unwrap());
            let (back, _) = apply_rule(&mid, &inst.inverted()).unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn inverse_and_concatenation(seed: u64, width in 1usize..=6, len in 0usize..12) {
        let mut r = rng(seed);
        let a = random_circuit(&mut r, width, len);
        let b = random_circuit(&mut r, width, len);
        let pa = simulate(&a).unwrap();
        prop_assert_eq!(simulate(&a.inverse()).unwrap(), pa.inverse());
        prop_assert_eq!(simulate(&a.concat(&b).unwrap()).unwrap(), pa.then(&simulate(&b).unwrap()).unwrap());
        prop_assert!(simulate(&a.concat(&a.inverse()).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn constructed_forms_are_canonical(seed: u64, width in 1usize..=4) {
        let path = gray_path(width).unwrap();
        let p = random_permutation(&mut rng(seed), width);
        let form = constructive_canonicalize(&p, &path).unwrap();
        let c = form.to_circuit(&DeltaGateSet::new(&path)).unwrap();
        prop_assert_eq!(simulate(&c).unwrap(), p);
        prop_assert_eq!(validate_canonical(&c, &path).unwrap(), form.clone());
        prop_assert_eq!(form.to_string().parse::<revrules::CanonicalForm>().unwrap(), form);
    }

    #[test]
    fn traces_survive_text(seed: u64, width in 1usize..=3, len in 0usize..8) {
        let c = random_circuit(&mut rng(seed), width, len);
        let (_, trace) = canonicalize(&c, &gray_path(width).unwrap()).unwrap();
        let doc = parse_trace(&print_trace(&trace)).unwrap();
        prop_assert_eq!(doc.into_trace(c).unwrap(), trace);
    }

    #[test]
    fn coordinate_edits_preserve_endpoints(entries in proptest::collection::vec(1usize..=4, 0..=20)) {
        let seq = CoordinateSequence::new(4, entries).unwrap();
        let (out, edits) = reduce_coordinates(&seq);
        let mut first = out.entries().to_vec();
        first.sort_unstable();
        first.dedup();
        prop_assert_eq!(first.len(), out.len());
        let mut cur = seq.clone();
        for e in edits {
            cur.apply(e).unwrap();
            for v in 0..16 {
                let b0 = BitString::new(4, v).unwrap();
                prop_assert_eq!(generate(&cur, &b0).unwrap(), generate(&seq, &b0).unwrap());
            }
        }
        prop_assert_eq!(cur, out);
    }

    #[test]
    fn optimize_is_sound_and_never_grows(seed: u64, width in 1usize..=4, len in 0usize..16) {
        let c = random_circuit(&mut rng(seed), width, len);
        let (out, trace) = optimize(&c, 200);
        prop_assert!(out.len() <= c.len());
        prop_assert_eq!(simulate(&out).unwrap(), simulate(&c).unwrap());
        prop_assert_eq!(trace.replay().unwrap(), out);
    }

    #[test]
    fn render_has_one_row_per_line(seed: u64, width in 1usize..=10, len in 0usize..10) {
        let c = random_circuit(&mut rng(seed), width, len);
        let text = render_ascii(&c);
        prop_assert_eq!(text.lines().count(), width);
        prop_assert!(text.lines().all(|l| l.chars().count() == text.lines().next().unwrap().chars().count()));
        prop_assert_eq!(print_circuit(&parse_circuit(&print_circuit(&c)).unwrap()), print_circuit(&c));
    }
}
