//! Graph-state toolkit: F2 linear algebra, stabilizer bookkeeping, Clifford
//! simulation by graph rewriting, LC-equivalence, entanglement measures,
//! weighted graph states, decoherence and purification.

pub mod canon;
pub mod clifford;
pub mod decoherence;
pub mod dense;
pub mod entanglement;
pub mod error;
pub mod f2;
pub mod graph;
pub mod io;
pub mod lc;
pub mod pauli;
pub mod purification;
pub mod sim;
pub mod stabilizer;
pub mod weighted;

pub use clifford::{Axis, Clifford, Named, SignedAxis};
pub use decoherence::{GraphDiagonalState, PauliChannel};
pub use dense::DenseState;
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVec};
pub use graph::{Graph, TwoColoring, VertexSet};
pub use lc::{ClassRecord, LcWitness};
pub use pauli::PauliString;
pub use purification::{ColoredDiagonalState, Subprotocol};
pub use sim::{Initial, Instruction, MeasurementRecord, Register};
pub use stabilizer::GeneratorMatrix;
pub use weighted::{ReducedState, WeightedGraph};
