//! The unitary-fit evolution: domain selection, grouped-term scheduling,
//! spin and fermionic linear-system solvers for the Hermitian generator of
//! each substep, and the update loop.

pub mod basis;
pub mod domains;
pub mod evolve;
pub mod linsys;
pub(crate) mod window;

pub use basis::{fermionic_basis, spin_basis, FermionicGenerator, SpinBasis};
pub use domains::{plan_domains, BasisKind, DomainGroup, DomainPlan, DomainSelector};
pub use evolve::{qite_evolve, QiteConfig};
pub use linsys::{
    build_fermionic_linear_system, build_spin_linear_system, solve_for_a, LinearSystem,
    SolveResult, SolverConfig, SolverMethod,
};

/// Manhattan distance needed for precision `ε` at correlation length `C`
/// over `n` steps of `m` terms: `2C·ln(2√2·n·m/ε)`.
pub fn required_manhattan_distance(c: f64, n: f64, m: f64, eps: f64) -> crate::Result<f64> {
    if c < 0.0 || n <= 0.0 || m <= 0.0 || eps <= 0.0 {
        return Err(crate::Error::InvalidArgument(
            "correlation length, step count, term count and precision must be positive".into(),
        ));
    }
    Ok(2.0 * c * (2.0 * 2f64.sqrt() * n * m / eps).ln())
}

/// Running-time scaling estimate `T = m·n·e^{k·ν^d}` used to refuse
/// infeasible configurations.
pub fn estimate_running_time(m: f64, n: f64, k: f64, nu: f64, d: f64) -> f64 {
    m * n * (k * nu.powf(d)).exp()
}
