//! Statevector tools for the four-site Hubbard ring at half filling.
//!
//! The crate diagonalizes the ring exactly in the N = 4, Sz = 0 sector,
//! matches the ground state to its ten-configuration template, and rebuilds
//! that state as a short product of number-conserving factor rotations
//! applied to a single reference configuration. The rotation angles come in
//! closed form from the ground-state amplitudes; a doubles-only variant
//! drops one quadruple factor and trades a little fidelity for it. On top
//! of the construction sit a step-by-step bookkeeping verifier, a
//! derivative-free energy minimizer over the free angles, CSV sweep
//! drivers, and a self-contained verification suite.
//!
//! Quick taste, everything in units of the hopping amplitude:
//!
//! ```
//! use hubbard_ucc::stateprep::{prepare, Mode};
//!
//! let exact = prepare(4.0, Mode::Exact).unwrap();
//! assert!(exact.fidelity > 1.0 - 1e-12);
//!
//! let doubles = prepare(4.0, Mode::DoublesOnly).unwrap();
//! assert!(doubles.fidelity > 0.998 && doubles.fidelity < 1.0);
//! ```
//!
//! Module map:
//!
//! * [`fock`]: occupation-number bookkeeping, sector enumeration, state
//!   vectors.
//! * [`hamiltonian`]: the ring Hamiltonian in its site and momentum forms.
//! * [`spectrum`]: exact diagonalization, the ground-state cubic, template
//!   amplitudes, total spin.
//! * [`ucc`]: factor rotations, their generators, and the closed-form
//!   single-factor action.
//! * [`stateprep`]: the factor table, angle formulas, preparation runs, and
//!   the bookkeeping-row verifier.
//! * [`vqe`]: simplex minimization of the prepared-state energy.
//! * [`cli`]: sweep, verify, and optimization drivers behind the binary.

pub mod cli;
mod error;
pub mod fock;
pub mod hamiltonian;
mod linalg;
pub mod spectrum;
pub mod stateprep;
pub mod ucc;
pub mod vqe;

pub use error::{Error, Result};
