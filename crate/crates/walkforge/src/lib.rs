//! walkforge — continuous-time quantum walks in gate-based form.
//!
//! The crate evolves continuous-time quantum walks e^{−iΩtA} on
//! complex-weighted graphs exactly, compiles hypercube walks to gate circuits
//! through two encodings (separable qubits, and a one-hot line with Trotterized
//! XX+YY couplings), simulates circuits on a statevector backend, and inverts
//! the pipeline by extracting walk graphs from circuit unitaries through the
//! principal matrix logarithm and its free-parameter family.
//!
//! Conventions used throughout:
//!
//! * **Qubit order.** Qubit 0 is the least significant bit of every basis
//!   index.
//! * **Bit-string labels.** The leftmost character of a label is qubit 0, so
//!   basis index 1 on four qubits is written `1000`.
//! * **Phases.** ħ = 1 and only the product s = Ω·t enters any computation;
//!   the separable circuit angle is θ = 2Ωt.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `walkforge` binary for the file-based command-line pipeline.

pub mod circuit;
pub mod cli;
pub mod compile;
pub mod error;
pub mod extract;
pub mod graphs;
pub mod numlin;
pub mod walk;

pub use error::{Error, Result};
pub use numlin::CMatrix;
