//! Exhaustive truth-table simulation. Every semantic claim in the crate is
//! checked against this module.

use thiserror::Error;

use crate::ir::{encoded_mask, BitString, Circuit, Gate, IrError, Permutation};

/// Default cap on simulated width (2^16-entry tables).
pub const DEFAULT_MAX_SIM_WIDTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("width {width} exceeds the simulation cap {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("cannot exchange a string with itself")]
    SameString,
    #[error(transparent)]
    Ir(#[from] IrError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    pub max_width: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self { max_width: DEFAULT_MAX_SIM_WIDTH }
    }
}

impl Simulator {
    pub fn new(max_width: usize) -> Self {
        Self { max_width }
    }

    fn check(&self, width: usize) -> Result<(), SimError> {
        if width > self.max_width {
            Err(SimError::WidthCap { width, cap: self.max_width })
        } else {
            Ok(())
        }
    }

    pub fn simulate(&self, c: &Circuit) -> Result<Permutation, SimError> {
        self.check(c.width())?;
        simulate_gates(c.width(), c.gates())
    }

    pub fn equivalent(&self, a: &Circuit, b: &Circuit) -> Result<bool, SimError> {
        if a.width() != b.width() {
            return Err(SimError::WidthMismatch(a.width(), b.width()));
        }
        Ok(self.simulate(a)? == self.simulate(b)?)
    }

    /// First input on which the two circuits disagree, if any.
    pub fn distinguishing_input(&self, a: &Circuit, b: &Circuit) -> Result<Option<BitString>, SimError> {
        if a.width() != b.width() {
            return Err(SimError::WidthMismatch(a.width(), b.width()));
        }
        let pa = self.simulate(a)?;
        let pb = self.simulate(b)?;
        let hit = pa.images().iter().zip(pb.images()).position(|(x, y)| x != y);
        Ok(match hit {
            Some(i) => Some(BitString::new(a.width(), i as u64)?),
            None => None,
        })
    }
}

/// Simulates with the default width cap.
pub fn simulate(c: &Circuit) -> Result<Permutation, SimError> {
    Simulator::default().simulate(c)
}

pub fn equivalent_by_sim(a: &Circuit, b: &Circuit) -> Result<bool, SimError> {
    Simulator::default().equivalent(a, b)
}

/// The transposition of `a` and `b`.
pub fn permutation_of_exchange(a: &BitString, b: &BitString) -> Result<Permutation, SimError> {
    if a.width() != b.width() {
        return Err(SimError::WidthMismatch(a.width(), b.width()));
    }
    if a == b {
        return Err(SimError::SameString);
    }
    Ok(Permutation::transposition(a, b)?)
}

/// Simulates a gate slice of the given width, without a cap check.
pub(crate) fn simulate_gates(width: usize, gates: &[Gate]) -> Result<Permutation, SimError> {
    let mut images: Vec<u64> = Permutation::identity(width)?.images().to_vec();
    for g in gates {
        let pos = encoded_mask(g.positive_mask(), width);
        let ctl = pos | encoded_mask(g.negative_mask(), width);
        let flip = 1u64 << (width - g.target());
        for y in images.iter_mut() {
            if *y & ctl == pos {
                *y ^= flip;
            }
        }
    }
    Ok(Permutation::from_images(width, images)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert!(simulate(&Circuit::empty(2).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn three_cnots_swap_lines() {
        let c = Circuit::new(
            3,
            vec![Gate::cnot(1, 3).unwrap(), Gate::cnot(3, 1).unwrap(), Gate::cnot(1, 3).unwrap()],
        )
        .unwrap();
        let p = simulate(&c).unwrap();
        for x in 0..8u64 {
            let s = BitString::new(3, x).unwrap();
            let bits = s.bits();
            let swapped = BitString::from_bits(&[bits[2], bits[1], bits[0]]).unwrap();
            assert_eq!(p.apply(&s).unwrap(), swapped);
        }
    }

    #[test]
    fn equivalence_cases() {
        let e = Circuit::empty(2).unwrap();
        assert!(equivalent_by_sim(&e, &e).unwrap());
        let a = Gate::new(&[1], &[2], 3).unwrap();
        let aa = Circuit::new(3, vec![a, a]).unwrap();
        assert!(equivalent_by_sim(&aa, &Circuit::empty(3).unwrap()).unwrap());
        let x2 = Circuit::new(2, vec![Gate::x(2).unwrap()]).unwrap();
        let x1 = Circuit::new(2, vec![Gate::x(1).unwrap()]).unwrap();
        assert!(!equivalent_by_sim(&x2, &x1).unwrap());
        assert!(equivalent_by_sim(&x1, &Circuit::empty(3).unwrap()).is_err());
    }

    #[test]
    fn exchange_permutations() {
        let x = simulate(&Circuit::new(1, vec![Gate::x(1).unwrap()]).unwrap()).unwrap();
        assert_eq!(permutation_of_exchange(&bs("0"), &bs("1")).unwrap(), x);
        let cnot = simulate(&Circuit::new(2, vec![Gate::cnot(1, 2).unwrap()]).unwrap()).unwrap();
        assert_eq!(permutation_of_exchange(&bs("10"), &bs("11")).unwrap(), cnot);
        let g = simulate(&Circuit::new(3, vec![Gate::new(&[], &[1, 2], 3).unwrap()]).unwrap()).unwrap();
        assert_eq!(permutation_of_exchange(&bs("000"), &bs("001")).unwrap(), g);
        assert_eq!(permutation_of_exchange(&bs("01"), &bs("01")), Err(SimError::SameString));
    }

    #[test]
    fn width_cap() {
        let sim = Simulator::new(2);
        let c = Circuit::empty(3).unwrap();
        assert_eq!(sim.simulate(&c), Err(SimError::WidthCap { width: 3, cap: 2 }));
    }
}
