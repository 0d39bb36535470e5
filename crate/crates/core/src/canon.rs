//! Hamiltonian paths on the hypercube, the adjacent-exchange gate set they
//! induce, and the block canonical form of a reversible function.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ir::{BitString, Circuit, Gate, Permutation};

/// Widest path we build; tables are `2^n` long.
pub const MAX_PATH_WIDTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("width {0} is outside 1..={MAX_PATH_WIDTH}")]
    BadWidth(usize),
    #[error("not a Hamiltonian path: {0}")]
    NotHamiltonian(String),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("block ({start}, {len}) exceeds a row of {size}")]
    Bounds { start: usize, len: usize, size: usize },
    #[error("enumeration is limited to width {max}, got {width}")]
    TooWide { width: usize, max: usize },
    #[error("bad canonical form text: {0}")]
    Parse(String),
}

/// An ordering `a_0, .., a_{2^n-1}` of all width-`n` strings in which
/// neighbours differ in one bit.
#[derive(Clone, PartialEq, Eq)]
pub struct HamiltonianPath {
    name: String,
    width: usize,
    nodes: Vec<BitString>,
    // position of each string, indexed by its encoding
    index: Vec<usize>,
}

impl HamiltonianPath {
    /// Validates a custom path.
    pub fn new(name: &str, nodes: Vec<BitString>) -> Result<Self, CanonError> {
        let width = nodes.first().map(|b| b.width()).unwrap_or(0);
        if width == 0 || width > MAX_PATH_WIDTH {
            return Err(CanonError::BadWidth(width));
        }
        let size = 1usize << width;
        if nodes.len() != size {
            return Err(CanonError::NotHamiltonian(format!("{} nodes, expected {size}", nodes.len())));
        }
        let mut index = vec![usize::MAX; size];
        for (i, b) in nodes.iter().enumerate() {
            if b.width() != width {
                return Err(CanonError::WidthMismatch(width, b.width()));
            }
            let slot = &mut index[b.encode() as usize];
            if *slot != usize::MAX {
                return Err(CanonError::NotHamiltonian(format!("{b} appears twice")));
            }
            *slot = i;
        }
        for w in nodes.windows(2) {
            if w[0].hamming_distance(&w[1]) != 1 {
                return Err(CanonError::NotHamiltonian(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(Self { name: name.to_string(), width, nodes, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn nodes(&self) -> &[BitString] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> BitString {
        self.nodes[i]
    }

    pub fn index_of(&self, b: &BitString) -> Option<usize> {
        if b.width() != self.width {
            return None;
        }
        self.index.get(b.encode() as usize).copied()
    }

    pub(crate) fn index_of_encoded(&self, x: u64) -> usize {
        self.index[x as usize]
    }

    /// `row[i]` = path position of `p(a_i)`.
    pub fn row_of(&self, p: &Permutation) -> Result<Vec<usize>, CanonError> {
        if p.width() != self.width {
            return Err(CanonError::WidthMismatch(self.width, p.width()));
        }
        Ok(self
            .nodes
            .iter()
            .map(|a| self.index_of_encoded(p.apply_encoded(a.encode())))
            .collect())
    }
}

impl fmt::Debug for HamiltonianPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HamiltonianPath({}, n={})", self.name, self.width)
    }
}

/// The binary reflected Gray code of width `n`, printed most significant
/// line first.
pub fn gray_path(n: usize) -> Result<HamiltonianPath, CanonError> {
    if n == 0 || n > MAX_PATH_WIDTH {
        return Err(CanonError::BadWidth(n));
    }
    let nodes = (0..1u64 << n)
        .map(|i| BitString::new(n, i ^ (i >> 1)).expect("fits"))
        .collect();
    HamiltonianPath::new("gray", nodes)
}

/// The gates `M_0, .., M_{2^n-2}`, where `M_i` exchanges `a_i` and `a_{i+1}`.
#[derive(Clone, Debug)]
pub struct DeltaGateSet {
    path: HamiltonianPath,
    gates: Vec<Gate>,
    lookup: HashMap<Gate, usize>,
}

impl DeltaGateSet {
    pub fn new(path: &HamiltonianPath) -> Self {
        let gates: Vec<Gate> = path
            .nodes
            .windows(2)
            .map(|w| Gate::exchanging(&w[0], &w[1]).expect("path neighbours are adjacent"))
            .collect();
        let lookup = gates.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        Self { path: path.clone(), gates, lookup }
    }

    pub fn path(&self) -> &HamiltonianPath {
        &self.path
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, i: usize) -> Gate {
        self.gates[i]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn index_of(&self, g: &Gate) -> Option<usize> {
        self.lookup.get(g).copied()
    }

    pub fn width(&self) -> usize {
        self.path.width
    }
}

pub fn delta_gates(path: &HamiltonianPath) -> DeltaGateSet {
    DeltaGateSet::new(path)
}

/// `M_start M_{start+1} .. M_{start+len-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Blocks in execution order; starts strictly decrease left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub width: usize,
    pub path_name: String,
    pub blocks: Vec<Block>,
}

impl CanonicalForm {
    pub fn empty(path: &HamiltonianPath) -> Self {
        Self { width: path.width, path_name: path.name.clone(), blocks: Vec::new() }
    }

    pub fn gate_count(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    /// Gate indices in execution order.
    pub fn indices(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.start..b.end()).collect()
    }

    pub fn to_circuit(&self, delta: &DeltaGateSet) -> Result<Circuit, CanonError> {
        if delta.width() != self.width {
            return Err(CanonError::WidthMismatch(self.width, delta.width()));
        }
        let mut gates = Vec::with_capacity(self.gate_count());
        for b in &self.blocks {
            if b.end() > delta.len() {
                return Err(CanonError::Bounds { start: b.start, len: b.len, size: delta.len() });
            }
            gates.extend_from_slice(&delta.gates()[b.start..b.end()]);
        }
        Ok(Circuit::new(self.width, gates).expect("delta gates fit"))
    }
}

/// `canon n=<n> path=<name> blocks=[(x,k), ...]`, a block `(x,k)` being
/// `M_x .. M_{x+k}`.
impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "canon n={} path={} blocks=[", self.width, self.path_name)?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", b.start, b.len - 1)?;
        }
        f.write_str("]")
    }
}

impl FromStr for CanonicalForm {
    type Err = CanonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| CanonError::Parse(m.to_string());
        let rest = s.trim().strip_prefix("canon ").ok_or_else(|| bad("missing `canon` prefix"))?;
        let rest = rest.trim_start().strip_prefix("n=").ok_or_else(|| bad("missing n="))?;
        let (n, rest) = rest.split_once(' ').ok_or_else(|| bad("missing path="))?;
        let width: usize = n.parse().map_err(|_| bad("bad width"))?;
        let rest = rest.trim_start().strip_prefix("path=").ok_or_else(|| bad("missing path="))?;
        let (path_name, rest) = rest.split_once(' ').ok_or_else(|| bad("missing blocks="))?;
        let list = rest
            .trim()
            .strip_prefix("blocks=[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("blocks must be a bracketed list"))?;
        let mut blocks = Vec::new();
        let mut body = list.trim();
        while !body.is_empty() {
            let inner_end = body.find(')').ok_or_else(|| bad("unclosed block"))?;
            let pair = body[..inner_end].strip_prefix('(').ok_or_else(|| bad("block must start with ("))?;
            let (x, k) = pair.split_once(',').ok_or_else(|| bad("block needs two fields"))?;
            let start = x.trim().parse().map_err(|_| bad("bad block start"))?;
            let k: usize = k.trim().parse().map_err(|_| bad("bad block extent"))?;
            blocks.push(Block { start, len: k + 1 });
            body = body[inner_end + 1..].trim_start();
            if let Some(r) = body.strip_prefix(',') {
                body = r.trim_start();
            }
        }
        Ok(CanonicalForm { width, path_name: path_name.to_string(), blocks })
    }
}

/// The row after prepending `M_start .. M_{start+len-1}` to a circuit whose
/// row is `row`: position `start` takes `row[start+len]` and the next `len`
/// positions shift right by one.
pub fn block_permutation_row<T: Clone>(start: usize, len: usize, row: &[T]) -> Result<Vec<T>, CanonError> {
    if start + len >= row.len() && len > 0 || start > row.len() {
        return Err(CanonError::Bounds { start, len, size: row.len() });
    }
    let mut out = row.to_vec();
    if len > 0 {
        out[start..=start + len].rotate_right(1);
    }
    Ok(out)
}

/// Builds the canonical form of `p` position by position.
pub fn constructive_canonicalize(p: &Permutation, path: &HamiltonianPath) -> Result<CanonicalForm, CanonError> {
    let targets = path.row_of(p)?;
    let size = path.len();
    let mut row: Vec<usize> = (0..size).collect();
    let mut blocks = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        let l = i + row[i..].iter().position(|&r| r == t).expect("row is a permutation");
        if l > i {
            row[i..=l].rotate_right(1);
            blocks.push(Block { start: i, len: l - i });
        }
    }
    blocks.reverse();
    Ok(CanonicalForm { width: path.width, path_name: path.name.clone(), blocks })
}

/// Why a circuit is not in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("circuit width {circuit} does not match path width {path}")]
    WidthMismatch { circuit: usize, path: usize },
    #[error("gate {position} is not an adjacent exchange along the path")]
    NotInGateSet { position: usize },
    #[error("M_{index} occurs {count} times, at most {max} allowed")]
    TooManyOccurrences { index: usize, count: usize, max: usize },
    #[error("{blocks} blocks, at most {max} allowed")]
    TooManyBlocks { blocks: usize, max: usize },
    #[error("block {block} starts at {start}, not below the preceding start {previous}")]
    StartsNotDecreasing { block: usize, start: usize, previous: usize },
    #[error("first gate M_{start} of block {block} already occurs in an earlier block")]
    LeadingGateRepeated { block: usize, start: usize },
}

/// Accepts exactly the circuits that are canonical forms under `path`.
pub fn validate_canonical(c: &Circuit, path: &HamiltonianPath) -> Result<CanonicalForm, Rejection> {
    validate_with(c, &DeltaGateSet::new(path))
}

pub fn validate_with(c: &Circuit, delta: &DeltaGateSet) -> Result<CanonicalForm, Rejection> {
    let path = delta.path();
    if c.width() != path.width {
        return Err(Rejection::WidthMismatch { circuit: c.width(), path: path.width });
    }
    let mut idx = Vec::with_capacity(c.len());
    for (position, g) in c.gates().iter().enumerate() {
        idx.push(delta.index_of(g).ok_or(Rejection::NotInGateSet { position })?);
    }
    let mut blocks: Vec<Block> = Vec::new();
    for &i in &idx {
        match blocks.last_mut() {
            Some(b) if b.end() == i => b.len += 1,
            _ => blocks.push(Block { start: i, len: 1 }),
        }
    }
    let mut counts = vec![0usize; delta.len()];
    for &i in &idx {
        counts[i] += 1;
    }
    for (index, &count) in counts.iter().enumerate() {
        if count > index + 1 {
            return Err(Rejection::TooManyOccurrences { index, count, max: index + 1 });
        }
    }
    if blocks.len() > delta.len() {
        return Err(Rejection::TooManyBlocks { blocks: blocks.len(), max: delta.len() });
    }
    for (k, w) in blocks.windows(2).enumerate() {
        if w[1].start >= w[0].start {
            return Err(Rejection::StartsNotDecreasing { block: k + 1, start: w[1].start, previous: w[0].start });
        }
    }
    for (k, b) in blocks.iter().enumerate() {
        if blocks[..k].iter().any(|e| e.start <= b.start && b.start < e.end()) {
            return Err(Rejection::LeadingGateRepeated { block: k, start: b.start });
        }
    }
    Ok(CanonicalForm { width: path.width, path_name: path.name.clone(), blocks })
}

/// Widest path for which [`enumerate_canonical_forms`] runs.
pub const MAX_ENUMERATION_WIDTH: usize = 3;

/// Every canonical form under `path`, by choosing for each start `i` a
/// block length in `0..=len-i`.
pub fn enumerate_canonical_forms(path: &HamiltonianPath) -> Result<Vec<CanonicalForm>, CanonError> {
    if path.width > MAX_ENUMERATION_WIDTH {
        return Err(CanonError::TooWide { width: path.width, max: MAX_ENUMERATION_WIDTH });
    }
    let gates = path.len() - 1;
    let mut out = Vec::new();
    let mut lens = vec![0usize; gates];
    loop {
        let blocks = (0..gates)
            .rev()
            .filter(|&i| lens[i] > 0)
            .map(|i| Block { start: i, len: lens[i] })
            .collect();
        out.push(CanonicalForm { width: path.width, path_name: path.name.clone(), blocks });
        // odometer over lens[i] in 0..=gates-i
        let mut i = 0;
        loop {
            if i == gates {
                return Ok(out);
            }
            if lens[i] < gates - i {
                lens[i] += 1;
                break;
            }
            lens[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::simulate;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn gray_paths() {
        let p: Vec<String> = gray_path(2).unwrap().nodes().iter().map(|b| b.to_string()).collect();
        assert_eq!(p, ["00", "01", "11", "10"]);
        let p: Vec<String> = gray_path(3).unwrap().nodes().iter().map(|b| b.to_string()).collect();
        assert_eq!(p, ["000", "001", "011", "010", "110", "111", "101", "100"]);
        assert_eq!(gray_path(1).unwrap().nodes(), &[bs("0"), bs("1")]);
        assert!(gray_path(0).is_err());
    }

    #[test]
    fn custom_path_checks() {
        assert!(HamiltonianPath::new("bad", vec![bs("00"), bs("11"), bs("01"), bs("10")]).is_err());
        assert!(HamiltonianPath::new("dup", vec![bs("00"), bs("01"), bs("00"), bs("10")]).is_err());
        let rev = HamiltonianPath::new("rev", vec![bs("10"), bs("11"), bs("01"), bs("00")]).unwrap();
        assert_eq!(rev.index_of(&bs("01")), Some(2));
    }

    #[test]
    fn delta_gates_width_two() {
        let d = DeltaGateSet::new(&gray_path(2).unwrap());
        let g = |p: &[usize], n: &[usize], t| Gate::new(p, n, t).unwrap();
        assert_eq!(d.gates(), &[g(&[], &[1], 2), g(&[2], &[], 1), g(&[1], &[], 2)]);
        let d1 = DeltaGateSet::new(&gray_path(1).unwrap());
        assert_eq!(d1.gates(), &[Gate::x(1).unwrap()]);
        let m1 = simulate(&Circuit::new(2, vec![d.gate(1)]).unwrap()).unwrap();
        assert_eq!(m1, Permutation::transposition(&bs("01"), &bs("11")).unwrap());
    }

    #[test]
    fn block_rows() {
        let row = vec![0, 1, 2, 3];
        assert_eq!(block_permutation_row(1, 0, &row).unwrap(), row);
        assert_eq!(block_permutation_row(0, 1, &row).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(block_permutation_row(0, 3, &row).unwrap(), vec![3, 0, 1, 2]);
        assert!(block_permutation_row(2, 2, &row).is_err());
    }

    #[test]
    fn constructive_examples() {
        let path = gray_path(2).unwrap();
        let d = DeltaGateSet::new(&path);
        let id = Permutation::identity(2).unwrap();
        assert!(constructive_canonicalize(&id, &path).unwrap().blocks.is_empty());
        let m1 = simulate(&Circuit::new(2, vec![d.gate(1)]).unwrap()).unwrap();
        assert_eq!(constructive_canonicalize(&m1, &path).unwrap().blocks, vec![Block { start: 1, len: 1 }]);
        let swap = Circuit::new(
            2,
            vec![Gate::cnot(1, 2).unwrap(), Gate::cnot(2, 1).unwrap(), Gate::cnot(1, 2).unwrap()],
        )
        .unwrap();
        let p = simulate(&swap).unwrap();
        let form = constructive_canonicalize(&p, &path).unwrap();
        assert_eq!(simulate(&form.to_circuit(&d).unwrap()).unwrap(), p);
    }

    #[test]
    fn validator_examples() {
        let path = gray_path(2).unwrap();
        let d = DeltaGateSet::new(&path);
        assert!(validate_canonical(&Circuit::empty(2).unwrap(), &path).unwrap().blocks.is_empty());
        let ok = Circuit::new(2, vec![d.gate(1), d.gate(0), d.gate(1)]).unwrap();
        let form = validate_canonical(&ok, &path).unwrap();
        assert_eq!(form.blocks, vec![Block { start: 1, len: 1 }, Block { start: 0, len: 2 }]);
        let twice = Circuit::new(2, vec![d.gate(0), d.gate(0)]).unwrap();
        assert!(matches!(
            validate_canonical(&twice, &path),
            Err(Rejection::TooManyOccurrences { index: 0, count: 2, max: 1 })
        ));
        let rising = Circuit::new(2, vec![d.gate(1), d.gate(2), d.gate(2)]).unwrap();
        assert!(validate_canonical(&rising, &path).is_err());
        let up = Circuit::new(2, vec![d.gate(0), d.gate(2)]).unwrap();
        assert!(matches!(validate_canonical(&up, &path), Err(Rejection::StartsNotDecreasing { .. })));
        let foreign = Circuit::new(2, vec![Gate::x(1).unwrap()]).unwrap();
        assert_eq!(validate_canonical(&foreign, &path), Err(Rejection::NotInGateSet { position: 0 }));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_canonical_forms(&gray_path(1).unwrap()).unwrap().len(), 2);
        assert_eq!(enumerate_canonical_forms(&gray_path(2).unwrap()).unwrap().len(), 24);
        assert!(enumerate_canonical_forms(&gray_path(4).unwrap()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let path = gray_path(3).unwrap();
        let form = CanonicalForm {
            width: 3,
            path_name: "gray".into(),
            blocks: vec![Block { start: 4, len: 2 }, Block { start: 0, len: 1 }],
        };
        let text = form.to_string();
        assert_eq!(text, "canon n=3 path=gray blocks=[(4,1), (0,0)]");
        assert_eq!(text.parse::<CanonicalForm>().unwrap(), form);
        assert_eq!(CanonicalForm::empty(&path).to_string(), "canon n=3 path=gray blocks=[]");
        assert_eq!("canon n=3 path=gray blocks=[]".parse::<CanonicalForm>().unwrap(), CanonicalForm::empty(&path));
    }
}
