//! Construction of the studied Hamiltonians: lattice geometry, spin and
//! fermionic lattice models, molecular active-space Hamiltonians from
//! FCIDUMP integrals, and the second-order split-step schedule.

pub mod fcidump;
pub mod lattice;
pub mod models;
pub mod schedule;

pub use fcidump::FcidumpData;
pub use lattice::{LatticeGraph, LatticeKind};
pub use models::{
    build_active_space_hamiltonian, build_fermi_hubbard, build_heisenberg, build_tfim,
    CouplingSpec, HamiltonianKind, HamiltonianTerm, ProblemHamiltonian, TermOperator,
};
pub use schedule::{make_trotter_schedule, TrotterSchedule};
