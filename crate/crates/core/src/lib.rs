//! Reversible circuits of mixed-polarity multiple-control Toffoli gates, a
//! sound and complete catalog of rewrite rules over them, and a
//! canonicalizer that produces a replayable rule trace.

pub mod canon;
pub mod gen;
pub mod io;
pub mod ir;
pub mod normalize;
pub mod rules;
pub mod sim;

pub use canon::{gray_path, CanonicalForm, DeltaGateSet, HamiltonianPath};
pub use io::{parse_circuit, print_circuit, ParseError};
pub use ir::{BitString, Circuit, Gate, IrError, LineSet, Permutation};
pub use normalize::{canonicalize, equivalent, Equivalence, NormalizeError, Normalizer};
pub use rules::{Direction, RewriteStep, RewriteTrace, RuleId, RuleInstance};
pub use sim::{simulate, Simulator};
