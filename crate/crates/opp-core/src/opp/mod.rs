//! The optimized pulse pattern problem: harmonic objective, modulation
//! constraint, Taylor band relaxation, waveform synthesis and TDD scaling.

mod objective;
mod problem;
mod relaxed;
mod taylor;
mod waveform;

pub use objective::{
    fundamental_amplitude, harmonic_set, objective_exact, objective_polynomial, FitReport,
    FIT_TOLERANCE,
};
pub use problem::{compute_tdd, MotorParams, OppError, PulseProblem, MODULATION_MAX};
pub use relaxed::{build_relaxed_problem, SemialgebraicProblem};
pub use taylor::{taylor_expansion, TaylorApprox};
pub use waveform::{synthesize_waveform, Waveform};
