//! Operator algebra: Pauli strings, spin operators, fermionic operators,
//! Majorana monomials, the Jordan-Wigner mapping and statevector kernels.

pub mod dense;
pub mod fermion;
pub mod jw;
pub mod majorana;
pub mod pauli;
pub mod statevector;

pub use fermion::{FermionOperator, Ladder};
pub use jw::{jordan_wigner, majorana_pauli_string, pauli_to_majorana};
pub use majorana::{MajoranaMonomial, MajoranaOperator};
pub use pauli::{PauliLetter, PauliString, SpinOperator};
pub use statevector::{apply_exp_hermitian, expectation, ExpResult, StateVector};
