//! Assembly of the polynomial relaxation: objective plus band, ordering and
//! box constraints, all as `g(alpha) >= 0` polynomials.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::objective::objective_polynomial;
use super::problem::{OppError, PulseProblem};
use super::taylor::TaylorApprox;
use crate::poly::Polynomial;

/// Polynomial objective over a basic semialgebraic feasible set
/// `K = {alpha : g_i(alpha) >= 0}` contained in the ordered quarter box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemialgebraicProblem {
    pub objective: Polynomial,
    pub constraints: Vec<Polynomial>,
    pub variable_box: Vec<(f64, f64)>,
}

impl SemialgebraicProblem {
    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    /// Worst constraint violation at a point (0 when feasible).
    pub fn violation(&self, alpha: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|g| (-g.evaluate(alpha).unwrap_or(f64::NEG_INFINITY)).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// Build the order-`k` band relaxation: polynomial objective, the two-sided
/// modulation band `|(4/pi) sum du_i Gamma_k(a_i) - m| <= delta_m`, and the
/// ordering chain `0 <= a_1 <= ... <= a_d <= 1/4`.
pub fn build_relaxed_problem(
    p: &PulseProblem,
    t: &TaylorApprox,
) -> Result<SemialgebraicProblem, OppError> {
    assert_eq!(
        p.pulse_number(),
        t.pulse_number(),
        "pulse number mismatch between problem and Taylor data"
    );
    let d = p.pulse_number();
    let (objective, _) = objective_polynomial(p, 3)?;

    let mut band = Polynomial::zero(d);
    for (i, &du) in p.delta_u().iter().enumerate() {
        let gamma_i = t.gamma_polynomial(d, i).scale(4.0 / PI * du as f64);
        band = band.add(&gamma_i).unwrap();
    }
    let m = p.modulation_index();
    let dm = t.delta_m();

    let mut constraints = Vec::with_capacity(d + 3);
    // (m + dm) - band >= 0
    constraints.push(
        Polynomial::constant(d, m + dm)
            .sub(&band)
            .unwrap(),
    );
    // band - (m - dm) >= 0
    constraints.push(band.sub(&Polynomial::constant(d, m - dm)).unwrap());
    // 0 <= a_1
    constraints.push(Polynomial::variable(d, 0));
    // a_{i+1} - a_i >= 0
    for i in 0..d - 1 {
        constraints.push(
            Polynomial::variable(d, i + 1)
                .sub(&Polynomial::variable(d, i))
                .unwrap(),
        );
    }
    // 1/4 - a_d >= 0
    constraints.push(
        Polynomial::constant(d, 0.25)
            .sub(&Polynomial::variable(d, d - 1))
            .unwrap(),
    );

    Ok(SemialgebraicProblem {
        objective,
        constraints,
        variable_box: vec![(0.0, 0.25); d],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opp::taylor::taylor_expansion;

    #[test]
    fn constraint_counts() {
        let p1 = PulseProblem::new(1, 0.55).unwrap();
        let sp1 = build_relaxed_problem(&p1, &taylor_expansion(5, 1)).unwrap();
        assert_eq!(sp1.constraints.len(), 4); // 2 band + 2 box

        let p3 = PulseProblem::new(3, 0.55).unwrap();
        let sp3 = build_relaxed_problem(&p3, &taylor_expansion(5, 3)).unwrap();
        assert_eq!(sp3.constraints.len(), 6); // 2 band + 4 ordering/box
    }

    #[test]
    fn true_optimizer_is_feasible_at_k5() {
        let p = PulseProblem::new(1, 0.55).unwrap();
        let sp = build_relaxed_problem(&p, &taylor_expansion(5, 1)).unwrap();
        assert_eq!(sp.violation(&[0.1789]), 0.0);
    }

    #[test]
    fn exact_feasible_points_stay_feasible() {
        // Sample the exact constraint manifold by solving the fundamental
        // equality for the first angle with the rest fixed; every such point
        // must satisfy the relaxed band.
        use crate::opp::objective::fundamental_amplitude;
        let d = 3;
        let p = PulseProblem::new(d, 0.55).unwrap();
        let t = taylor_expansion(5, d);
        let sp = build_relaxed_problem(&p, &t).unwrap();
        let mut found = 0;
        for s in 0..200 {
            let a2 = 0.10 + 0.12 * (s as f64 / 199.0);
            let a3 = a2 + 0.03;
            if a3 > 0.25 {
                continue;
            }
            // bisect for a1 in [0, a2] with fundamental = m
            let f = |a1: f64| {
                fundamental_amplitude(&p, &[a1, a2, a3]).unwrap() - p.modulation_index()
            };
            let (mut lo, mut hi) = (0.0, a2);
            if f(lo) * f(hi) > 0.0 {
                continue;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let alpha = [0.5 * (lo + hi), a2, a3];
            assert!(
                sp.violation(&alpha) <= 1e-9,
                "relaxation must contain the exact manifold at {alpha:?}"
            );
            found += 1;
        }
        assert!(found > 20, "sampler found too few exact points: {found}");
    }
}
