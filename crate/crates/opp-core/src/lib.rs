//! Certified computation of optimized pulse patterns.
//!
//! The crate couples an exact pulse-pattern model (harmonic objective,
//! modulation constraint, Taylor band relaxation) with two convex relaxation
//! hierarchies (sum-of-squares/moment and relative-entropy SAGE) solved by an
//! in-house conic interior-point method, plus a multi-start local solver used
//! as the reference baseline.

pub mod local;
pub mod opp;
pub mod poly;

pub use local::{gradient_exact, solve_local, LocalResult, LocalSolveConfig};
pub use opp::{
    build_relaxed_problem, compute_tdd, fundamental_amplitude, harmonic_set, objective_exact,
    objective_polynomial, synthesize_waveform, taylor_expansion, MotorParams, OppError,
    PulseProblem, SemialgebraicProblem, TaylorApprox, Waveform,
};
pub use poly::{monomial_basis, Monomial, PolyError, Polynomial};
