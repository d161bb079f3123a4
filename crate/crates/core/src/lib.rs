//! U(1) lattice gauge theory on qubits.
//!
//! Builds lattice-QED Hamiltonians (Wilson fermions, quantum-link gauge fields) as
//! explicit Pauli-string operators, counts qubits, Pauli strings and CNOTs, synthesizes
//! Trotter circuits and simulates real-time dynamics on a statevector.

pub mod circuits;
pub mod dynamics;
pub mod error;
pub mod gauge;
pub mod hamiltonian;
pub mod lattice;
pub mod matter;
pub mod pauli;
pub mod resources;
pub mod scenario;

pub use error::{LgtError, Result};
pub use pauli::{Axes, PauliAxis, PauliOperator, PauliString, C64};
