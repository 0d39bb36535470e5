//! Width-checked intermediate representation: bit strings, MPMCT gates,
//! circuits and permutations.
//!
//! Lines are numbered `1..=n` (`q_1..q_n`). Bit strings are encoded as
//! integers with `q_1` as the most significant bit, so `"100"` encodes to 4.
//! Gate control sets are stored as line masks (bit `j - 1` for line `j`),
//! which gives every gate a single structural representation.

use std::fmt;

use thiserror::Error;

/// Largest supported circuit width (line masks are `u64`).
pub const MAX_WIDTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("width {0} is outside 1..={MAX_WIDTH}")]
    BadWidth(usize),
    #[error("line index {index} is outside 1..={width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("line {0} is both a positive and a negative control")]
    OverlappingControls(usize),
    #[error("target line {0} is also a control")]
    TargetIsControl(usize),
    #[error("line {0} listed twice")]
    DuplicateIndex(usize),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("bit string value {value} does not fit in width {width}")]
    ValueTooWide { value: u64, width: usize },
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
    #[error("line {0} already occurs in the circuit")]
    LineInUse(usize),
    #[error("images do not form a bijection")]
    NotBijection,
}

fn check_width(width: usize) -> Result<(), IrError> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(IrError::BadWidth(width))
    }
}

#[inline]
pub(crate) fn line_bit(line: usize) -> u64 {
    1u64 << (line - 1)
}

/// Iterates the lines set in a line mask, ascending.
pub(crate) fn mask_lines(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let tz = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(tz + 1)
        }
    })
}

/// Converts a line mask into the matching mask over encoded bit strings.
#[inline]
pub(crate) fn encoded_mask(mask: u64, width: usize) -> u64 {
    mask_lines(mask).fold(0, |acc, j| acc | (1u64 << (width - j)))
}

/// A set of line indices, stored as a mask (bit `j - 1` for line `j`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineSet(u64);

impl LineSet {
    pub const EMPTY: LineSet = LineSet(0);

    pub fn from_mask(mask: u64) -> Self {
        LineSet(mask)
    }

    pub fn from_lines(lines: &[usize]) -> Result<Self, IrError> {
        let mut m = 0u64;
        for &l in lines {
            check_line(l)?;
            if m & line_bit(l) != 0 {
                return Err(IrError::DuplicateIndex(l));
            }
            m |= line_bit(l);
        }
        Ok(LineSet(m))
    }

    pub fn single(line: usize) -> Self {
        LineSet(line_bit(line))
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, line: usize) -> bool {
        (1..=MAX_WIDTH).contains(&line) && self.0 & line_bit(line) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(&self, other: LineSet) -> LineSet {
        LineSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: LineSet) -> LineSet {
        LineSet(self.0 & other.0)
    }

    pub fn difference(&self, other: LineSet) -> LineSet {
        LineSet(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: LineSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(&self, line: usize) -> LineSet {
        LineSet(self.0 | line_bit(line))
    }

    pub fn without(&self, line: usize) -> LineSet {
        LineSet(self.0 & !line_bit(line))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        mask_lines(self.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for LineSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        LineSet(iter.into_iter().fold(0, |m, l| m | line_bit(l)))
    }
}

impl fmt::Display for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A width-`n` string of bits; bit `j` is the value on line `q_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    value: u64,
}

impl BitString {
    pub fn new(width: usize, value: u64) -> Result<Self, IrError> {
        check_width(width)?;
        if width < 64 && value >> width != 0 {
            return Err(IrError::ValueTooWide { value, width });
        }
        Ok(Self { width, value })
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(width: usize, value: u64) -> Result<Self, IrError> {
        Self::new(width, value)
    }

    pub fn zeros(width: usize) -> Result<Self, IrError> {
        Self::new(width, 0)
    }

    /// Builds a string from explicit bit values, `bits[0]` being `q_1`.
    pub fn from_bits(bits: &[bool]) -> Result<Self, IrError> {
        check_width(bits.len())?;
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Self { width: bits.len(), value })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `sum_j bits[j] * 2^(n - j)`: `q_1` is the most significant bit.
    pub fn encode(&self) -> u64 {
        self.value
    }

    /// Value of line `q_j` (1-based).
    pub fn bit(&self, line: usize) -> Result<bool, IrError> {
        if line == 0 || line > self.width {
            return Err(IrError::IndexOutOfRange { index: line, width: self.width });
        }
        Ok((self.value >> (self.width - line)) & 1 == 1)
    }

    /// Flips line `q_j`.
    pub fn flip(&self, line: usize) -> Result<Self, IrError> {
        if line == 0 || line > self.width {
            return Err(IrError::IndexOutOfRange { index: line, width: self.width });
        }
        Ok(Self { width: self.width, value: self.value ^ (1u64 << (self.width - line)) })
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.width).map(|j| (self.value >> (self.width - j)) & 1 == 1).collect()
    }

    /// Lines on which `self` and `other` differ.
    pub fn differing_lines(&self, other: &BitString) -> Vec<usize> {
        (1..=self.width)
            .filter(|&j| ((self.value ^ other.value) >> (self.width - j)) & 1 == 1)
            .collect()
    }

    pub fn hamming_distance(&self, other: &BitString) -> u32 {
        (self.value ^ other.value).count_ones()
    }
}

impl std::str::FromStr for BitString {
    type Err = IrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(IrError::BadBitString(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(&bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// The mixed-polarity multiple-control Toffoli gate `G[P, N, q]`: flips line
/// `q` iff every line in `P` reads 1 and every line in `N` reads 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    positives: u64,
    negatives: u64,
    target: u8,
}

impl Gate {
    pub fn new(positives: &[usize], negatives: &[usize], target: usize) -> Result<Self, IrError> {
        let mut pos = 0u64;
        for &p in positives {
            check_line(p)?;
            if pos & line_bit(p) != 0 {
                return Err(IrError::DuplicateIndex(p));
            }
            pos |= line_bit(p);
        }
        let mut neg = 0u64;
        for &p in negatives {
            check_line(p)?;
            if neg & line_bit(p) != 0 {
                return Err(IrError::DuplicateIndex(p));
            }
            neg |= line_bit(p);
        }
        Self::from_masks(pos, neg, target)
    }

    pub fn from_masks(positives: u64, negatives: u64, target: usize) -> Result<Self, IrError> {
        check_line(target)?;
        if let Some(l) = mask_lines(positives & negatives).next() {
            return Err(IrError::OverlappingControls(l));
        }
        if (positives | negatives) & line_bit(target) != 0 {
            return Err(IrError::TargetIsControl(target));
        }
        Ok(Self { positives, negatives, target: target as u8 })
    }

    /// `X[q] = G[{}, {}, q]`.
    pub fn x(target: usize) -> Result<Self, IrError> {
        Self::from_masks(0, 0, target)
    }

    /// `CNOT[p, q] = G[{p}, {}, q]`.
    pub fn cnot(control: usize, target: usize) -> Result<Self, IrError> {
        check_line(control)?;
        Self::from_masks(line_bit(control), 0, target)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Result<Self, IrError> {
        Self::new(&[c1, c2], &[], target)
    }

    pub fn target(&self) -> usize {
        self.target as usize
    }

    pub fn positive_mask(&self) -> u64 {
        self.positives
    }

    pub fn negative_mask(&self) -> u64 {
        self.negatives
    }

    pub fn control_mask(&self) -> u64 {
        self.positives | self.negatives
    }

    /// Controls plus target.
    pub fn support_mask(&self) -> u64 {
        self.control_mask() | line_bit(self.target())
    }

    pub fn positive_set(&self) -> LineSet {
        LineSet(self.positives)
    }

    pub fn negative_set(&self) -> LineSet {
        LineSet(self.negatives)
    }

    /// `G[P, N, q]` from line sets.
    pub fn from_sets(positives: LineSet, negatives: LineSet, target: usize) -> Result<Self, IrError> {
        Self::from_masks(positives.0, negatives.0, target)
    }

    pub fn positives(&self) -> Vec<usize> {
        mask_lines(self.positives).collect()
    }

    pub fn negatives(&self) -> Vec<usize> {
        mask_lines(self.negatives).collect()
    }

    /// Highest line the gate touches.
    pub fn max_line(&self) -> usize {
        64 - self.support_mask().leading_zeros() as usize
    }

    pub fn fits(&self, width: usize) -> bool {
        self.max_line() <= width
    }

    pub fn is_full_width(&self, width: usize) -> bool {
        width <= MAX_WIDTH && self.support_mask() == full_mask(width)
    }

    pub fn is_x(&self) -> bool {
        self.control_mask() == 0
    }

    /// Polarity of `line` as a control: `Some(true)` positive, `Some(false)`
    /// negative, `None` if not a control.
    pub fn polarity(&self, line: usize) -> Option<bool> {
        let b = line_bit(line);
        if self.positives & b != 0 {
            Some(true)
        } else if self.negatives & b != 0 {
            Some(false)
        } else {
            None
        }
    }

    /// The same gate with the polarity of control `line` inverted.
    pub fn with_flipped_control(&self, line: usize) -> Option<Gate> {
        let b = line_bit(line);
        self.polarity(line)?;
        Some(Gate {
            positives: self.positives ^ b,
            negatives: self.negatives ^ b,
            target: self.target,
        })
    }

    /// Adds `line` as a positive control.
    pub fn with_positive(&self, line: usize) -> Result<Gate, IrError> {
        check_line(line)?;
        if self.support_mask() & line_bit(line) != 0 {
            return Err(IrError::LineInUse(line));
        }
        Gate::from_masks(self.positives | line_bit(line), self.negatives, self.target())
    }

    fn check_in(&self, width: usize) -> Result<(), IrError> {
        if self.fits(width) {
            Ok(())
        } else {
            Err(IrError::IndexOutOfRange { index: self.max_line(), width })
        }
    }

    pub fn fires(&self, s: &BitString) -> Result<bool, IrError> {
        self.check_in(s.width())?;
        let w = s.width();
        let pos = encoded_mask(self.positives, w);
        let neg = encoded_mask(self.negatives, w);
        Ok(s.encode() & (pos | neg) == pos)
    }

    pub fn apply(&self, s: &BitString) -> Result<BitString, IrError> {
        if self.fires(s)? {
            s.flip(self.target())
        } else {
            Ok(*s)
        }
    }

    /// For a full-width gate, the two strings it swaps (target bit 0 first).
    pub fn exchanges(&self, width: usize) -> Option<(BitString, BitString)> {
        if !self.is_full_width(width) {
            return None;
        }
        let a = BitString::new(width, encoded_mask(self.positives, width)).ok()?;
        let b = a.flip(self.target()).ok()?;
        Some((a, b))
    }

    /// Full-width gate exchanging two Hamming-adjacent strings.
    pub fn exchanging(a: &BitString, b: &BitString) -> Result<Gate, IrError> {
        if a.width() != b.width() {
            return Err(IrError::WidthMismatch(a.width(), b.width()));
        }
        let diff = a.differing_lines(b);
        if diff.len() != 1 {
            return Err(IrError::BadBitString(format!("{a} and {b} are not adjacent")));
        }
        let target = diff[0];
        let mut pos = 0u64;
        let mut neg = 0u64;
        for j in (1..=a.width()).filter(|&j| j != target) {
            if a.bit(j)? {
                pos |= line_bit(j);
            } else {
                neg |= line_bit(j);
            }
        }
        Gate::from_masks(pos, neg, target)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |m: u64| mask_lines(m).map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "G[{{{}}},{{{}}},{}]", set(self.positives), set(self.negatives), self.target)
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_line(line: usize) -> Result<(), IrError> {
    if line == 0 || line > MAX_WIDTH {
        Err(IrError::IndexOutOfRange { index: line, width: MAX_WIDTH })
    } else {
        Ok(())
    }
}

pub(crate) fn full_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A gate sequence over lines `1..=width`; the leftmost gate executes first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self, IrError> {
        check_width(width)?;
        for g in &gates {
            g.check_in(width)?;
        }
        Ok(Self { width, gates })
    }

    /// The empty circuit.
    pub fn empty(width: usize) -> Result<Self, IrError> {
        Self::new(width, Vec::new())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<(), IrError> {
        g.check_in(self.width)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    /// Replaces `removed` gates at `position` with `inserted`.
    pub fn splice(&mut self, position: usize, removed: usize, inserted: &[Gate]) -> Result<(), IrError> {
        for g in inserted {
            g.check_in(self.width)?;
        }
        if removed == inserted.len() {
            self.gates[position..position + removed].copy_from_slice(inserted);
        } else {
            self.gates.splice(position..position + removed, inserted.iter().copied());
        }
        Ok(())
    }

    pub fn concat(&self, other: &Circuit) -> Result<Circuit, IrError> {
        if self.width != other.width {
            return Err(IrError::WidthMismatch(self.width, other.width));
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { width: self.width, gates })
    }

    /// The gate sequence reversed; every MPMCT gate is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit { width: self.width, gates: self.gates.iter().rev().copied().collect() }
    }

    /// Adds `line` as a positive control to every gate.
    pub fn control_extend(&self, line: usize) -> Result<Circuit, IrError> {
        if line == 0 || line > self.width {
            return Err(IrError::IndexOutOfRange { index: line, width: self.width });
        }
        let gates = self
            .gates
            .iter()
            .map(|g| g.with_positive(line))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit { width: self.width, gates })
    }

    /// Applies the gates left to right.
    pub fn apply(&self, s: &BitString) -> Result<BitString, IrError> {
        if s.width() != self.width {
            return Err(IrError::WidthMismatch(self.width, s.width()));
        }
        self.gates.iter().try_fold(*s, |acc, g| g.apply(&acc))
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Circuit(width={}, {:?})", self.width, self.gates)
    }
}

/// A bijection on the `2^n` strings of width `n`, stored as encoded images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    width: usize,
    images: Vec<u64>,
}

impl Permutation {
    pub fn identity(width: usize) -> Result<Self, IrError> {
        check_width(width)?;
        if width > 30 {
            return Err(IrError::BadWidth(width));
        }
        Ok(Self { width, images: (0..1u64 << width).collect() })
    }

    pub fn from_images(width: usize, images: Vec<u64>) -> Result<Self, IrError> {
        check_width(width)?;
        if width > 30 || images.len() != 1usize << width {
            return Err(IrError::NotBijection);
        }
        let mut seen = vec![false; images.len()];
        for &y in &images {
            let slot = seen.get_mut(y as usize).ok_or(IrError::NotBijection)?;
            if *slot {
                return Err(IrError::NotBijection);
            }
            *slot = true;
        }
        Ok(Self { width, images })
    }

    /// The permutation swapping `a` and `b` and fixing everything else.
    pub fn transposition(a: &BitString, b: &BitString) -> Result<Self, IrError> {
        if a.width() != b.width() {
            return Err(IrError::WidthMismatch(a.width(), b.width()));
        }
        let mut p = Self::identity(a.width())?;
        p.images.swap(a.encode() as usize, b.encode() as usize);
        Ok(p)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply_encoded(&self, x: u64) -> u64 {
        self.images[x as usize]
    }

    pub fn apply(&self, s: &BitString) -> Result<BitString, IrError> {
        if s.width() != self.width {
            return Err(IrError::WidthMismatch(self.width, s.width()));
        }
        BitString::new(self.width, self.images[s.encode() as usize])
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u64 == y)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation, IrError> {
        if self.width != other.width {
            return Err(IrError::WidthMismatch(self.width, other.width));
        }
        let images = self.images.iter().map(|&y| other.images[y as usize]).collect();
        Ok(Permutation { width: self.width, images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u64; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u64;
        }
        Permutation { width: self.width, images }
    }

    pub fn is_bijection(&self) -> bool {
        Self::from_images(self.width, self.images.clone()).is_ok()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(width={}, {:?})", self.width, self.images)
    }
}
