//! Coordinate sequences: the list of bit positions flipped along a walk on
//! the hypercube.

use std::fmt;

use super::NormalizeError;
use crate::ir::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordinateSequence {
    width: usize,
    entries: Vec<usize>,
}

impl CoordinateSequence {
    pub fn new(width: usize, entries: Vec<usize>) -> Result<Self, NormalizeError> {
        if let Some(&bad) = entries.iter().find(|&&m| m == 0 || m > width) {
            return Err(NormalizeError::Precondition(format!("coordinate {bad} outside 1..={width}")));
        }
        Ok(Self { width, entries })
    }

    /// Coordinates of a walk: entry `k` is the line where `walk[k]` and
    /// `walk[k+1]` differ.
    pub fn of_walk(walk: &[BitString]) -> Result<Self, NormalizeError> {
        let width = walk.first().map(|b| b.width()).unwrap_or(0);
        let mut entries = Vec::with_capacity(walk.len().saturating_sub(1));
        for w in walk.windows(2) {
            match w[0].differing_lines(&w[1])[..] {
                [m] => entries.push(m),
                _ => {
                    return Err(NormalizeError::Precondition(format!("{} and {} are not adjacent", w[0], w[1])))
                }
            }
        }
        Self::new(width, entries)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Applies one edit. Deleting a pair of unequal entries is an error.
    pub fn apply(&mut self, edit: Edit) -> Result<(), NormalizeError> {
        match edit {
            Edit::Swap(k) if k + 1 < self.entries.len() => {
                self.entries.swap(k, k + 1);
                Ok(())
            }
            Edit::Delete(k) if k + 1 < self.entries.len() && self.entries[k] == self.entries[k + 1] => {
                self.entries.drain(k..k + 2);
                Ok(())
            }
            _ => Err(NormalizeError::Precondition(format!("edit {edit:?} does not apply to {self}"))),
        }
    }
}

impl fmt::Display for CoordinateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

/// One move on a coordinate sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edit {
    /// Exchange entries `k` and `k+1`.
    Swap(usize),
    /// Remove the identical entries `k` and `k+1`.
    Delete(usize),
}

/// Flips bit `m` of `b0` for every entry `m` in turn.
pub fn generate(seq: &CoordinateSequence, b0: &BitString) -> Result<BitString, NormalizeError> {
    if seq.width != b0.width() {
        return Err(NormalizeError::WidthMismatch(seq.width, b0.width()));
    }
    let mut b = *b0;
    for &m in &seq.entries {
        b = b.flip(m)?;
    }
    Ok(b)
}

/// Reduces `seq` until no value repeats.
///
/// Each round takes the first entry whose value already occurred, moves it
/// left until it sits next to that earlier occurrence, and deletes the pair.
pub fn reduce_coordinates(seq: &CoordinateSequence) -> (CoordinateSequence, Vec<Edit>) {
    let mut cur = seq.clone();
    let mut edits = Vec::new();
    while let Some((g, h)) = first_repeat(&cur.entries) {
        for k in (g + 1..h).rev() {
            cur.entries.swap(k, k + 1);
            edits.push(Edit::Swap(k));
        }
        cur.entries.drain(g..g + 2);
        edits.push(Edit::Delete(g));
    }
    (cur, edits)
}

/// `(g, h)` with `h` the first index whose value occurs earlier, at `g`.
pub(crate) fn first_repeat(entries: &[usize]) -> Option<(usize, usize)> {
    let mut seen = [usize::MAX; 65];
    for (h, &m) in entries.iter().enumerate() {
        if seen[m] != usize::MAX {
            return Some((seen[m], h));
        }
        seen[m] = h;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n: usize, e: &[usize]) -> CoordinateSequence {
        CoordinateSequence::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn generate_examples() {
        let z: BitString = "000".parse().unwrap();
        assert_eq!(generate(&seq(3, &[1, 2, 1, 2, 3]), &z).unwrap().to_string(), "001");
        assert_eq!(generate(&seq(3, &[3]), &z).unwrap().to_string(), "001");
        assert_eq!(generate(&seq(3, &[]), &z).unwrap(), z);
        assert!(CoordinateSequence::new(3, vec![4]).is_err());
    }

    #[test]
    fn reduce_examples() {
        let (out, edits) = reduce_coordinates(&seq(3, &[1, 2, 1, 2, 3]));
        assert_eq!(out.entries(), &[3]);
        assert_eq!(edits, vec![Edit::Swap(1), Edit::Delete(0), Edit::Delete(0)]);
        assert!(reduce_coordinates(&seq(3, &[])).0.is_empty());
        let (out, edits) = reduce_coordinates(&seq(2, &[2, 2]));
        assert!(out.is_empty());
        assert_eq!(edits, vec![Edit::Delete(0)]);
    }

    #[test]
    fn edits_replay() {
        let start = seq(4, &[1, 2, 3, 1, 4, 2, 2, 3]);
        let (out, edits) = reduce_coordinates(&start);
        let mut cur = start.clone();
        for e in edits {
            cur.apply(e).unwrap();
        }
        assert_eq!(cur, out);
        assert_eq!(out.entries(), &[4, 2]);
    }
}
