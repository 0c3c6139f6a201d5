//! Boolean constraint networks as penalty Hamiltonians over qubits, with a
//! continuously monitored drive that steers the register toward satisfying
//! assignments.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod hilbert;
pub mod network;
pub mod protocol;
pub mod statics;

pub use error::{Error, ParseErrorKind, Result};
pub use hilbert::{Assignment, NodeOrder, SectorDiag, StateVector, C64};
pub use network::{builtin, parse_network, Gate, Network, Pin, PinKind, PinSelection, TruthTable};
pub use statics::{ConstraintMask, EnergyParams, GateEnergies, PenaltyHamiltonian};
