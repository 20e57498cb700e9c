//! Multi-start local optimization of the exact trigonometric problem.
//!
//! Each start runs an augmented-Lagrangian loop on the single fundamental
//! equality with projected-gradient inner iterations; the ordering/box
//! constraints are handled by exact projection onto the monotone box
//! (pool-adjacent-violators followed by clamping).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::opp::{fundamental_amplitude, objective_exact, OppError, PulseProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSolveConfig {
    /// Number of random initializations.
    pub starts: usize,
    /// Inner projected-gradient iteration cap per outer round.
    pub max_iters: usize,
    /// Stationarity tolerance on the projected gradient.
    pub tol_kkt: f64,
    /// RNG seed; identical seeds give identical results.
    pub seed: u64,
}

impl Default for LocalSolveConfig {
    fn default() -> Self {
        LocalSolveConfig {
            starts: 100,
            max_iters: 400,
            tol_kkt: 1e-8,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalResult {
    pub alpha_star: Vec<f64>,
    pub j_star: f64,
    pub m_residual: f64,
    pub converged_starts: usize,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LocalError {
    #[error("no start reached feasibility; best residual {best_residual:.3e}")]
    NoFeasibleStart {
        best_alpha: Vec<f64>,
        best_objective: f64,
        best_residual: f64,
    },
    #[error(transparent)]
    Opp(#[from] OppError),
}

const EQ_TOL: f64 = 1e-8;

/// Analytic gradient of the exact objective:
/// `dJ/da_i = -(32/pi) du_i sum_n S_n sin(2 pi n a_i) / n^3`.
pub fn gradient_exact(p: &PulseProblem, alpha: &[f64]) -> Result<Vec<f64>, OppError> {
    p.check_alpha_box(alpha)?;
    let d = p.pulse_number();
    let mut grad = vec![0.0; d];
    let mut n = 1u32;
    while n <= p.n_max() {
        let nf = n as f64;
        let s: f64 = p
            .delta_u()
            .iter()
            .zip(alpha)
            .map(|(&du, &a)| du as f64 * (2.0 * PI * nf * a).cos())
            .sum();
        let w = s / nf.powi(3);
        for (g, (&du, &a)) in grad.iter_mut().zip(p.delta_u().iter().zip(alpha)) {
            *g -= 32.0 / PI * du as f64 * w * (2.0 * PI * nf * a).sin();
        }
        n += 2;
    }
    Ok(grad)
}

fn constraint(p: &PulseProblem, alpha: &[f64]) -> f64 {
    fundamental_amplitude(p, alpha).unwrap() - p.modulation_index()
}

fn constraint_gradient(p: &PulseProblem, alpha: &[f64]) -> Vec<f64> {
    p.delta_u()
        .iter()
        .zip(alpha)
        .map(|(&du, &a)| -8.0 * du as f64 * (2.0 * PI * a).sin())
        .collect()
}

/// Euclidean projection onto `{a : 0 <= a_1 <= ... <= a_d <= 1/4}`:
/// isotonic regression (PAV) then clamping.
fn project_ordered_box(x: &mut [f64]) {
    let n = x.len();
    // pool adjacent violators with weights
    let mut vals: Vec<f64> = Vec::with_capacity(n);
    let mut weights: Vec<f64> = Vec::with_capacity(n);
    let mut counts: Vec<usize> = Vec::with_capacity(n);
    for &xi in x.iter() {
        vals.push(xi);
        weights.push(1.0);
        counts.push(1);
        while vals.len() > 1 && vals[vals.len() - 2] > vals[vals.len() - 1] {
            let (v2, w2, c2) = (
                vals.pop().unwrap(),
                weights.pop().unwrap(),
                counts.pop().unwrap(),
            );
            let last = vals.len() - 1;
            let merged_w = weights[last] + w2;
            vals[last] = (vals[last] * weights[last] + v2 * w2) / merged_w;
            weights[last] = merged_w;
            counts[last] += c2;
        }
    }
    let mut k = 0;
    for (v, c) in vals.iter().zip(&counts) {
        for _ in 0..*c {
            x[k] = v.clamp(0.0, 0.25);
            k += 1;
        }
    }
}

struct StartOutcome {
    alpha: Vec<f64>,
    objective: f64,
    residual: f64,
    kkt: f64,
}

fn run_start(p: &PulseProblem, cfg: &LocalSolveConfig, start_index: u64) -> StartOutcome {
    let d = p.pulse_number();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(start_index * 0x9E37_79B9));
    let mut alpha: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..=0.25)).collect();
    alpha.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut lambda = 0.0;
    let mut rho = 1.0;
    let mut kkt = f64::INFINITY;
    for _outer in 0..10 {
        kkt = inner_minimize(p, &mut alpha, lambda, rho, cfg);
        let c = constraint(p, &alpha);
        lambda += rho * c;
        if c.abs() <= EQ_TOL && kkt <= cfg.tol_kkt {
            break;
        }
        rho = (rho * 10.0).min(1e10);
    }
    polish_equality(p, &mut alpha);
    let residual = constraint(p, &alpha).abs();
    let objective = objective_exact(p, &alpha).unwrap_or(f64::INFINITY);
    StartOutcome {
        alpha,
        objective,
        residual,
        kkt,
    }
}

/// Projected gradient with Barzilai-Borwein steps and Armijo backtracking on
/// the augmented Lagrangian; returns the projected-gradient norm at exit.
fn inner_minimize(
    p: &PulseProblem,
    alpha: &mut Vec<f64>,
    lambda: f64,
    rho: f64,
    cfg: &LocalSolveConfig,
) -> f64 {
    let value = |a: &[f64]| -> f64 {
        let c = constraint(p, a);
        objective_exact(p, a).unwrap_or(f64::INFINITY) + lambda * c + 0.5 * rho * c * c
    };
    let grad = |a: &[f64]| -> Vec<f64> {
        let c = constraint(p, a);
        let gj = gradient_exact(p, a).unwrap();
        let gc = constraint_gradient(p, a);
        gj.iter()
            .zip(&gc)
            .map(|(j, ci)| j + (lambda + rho * c) * ci)
            .collect()
    };

    let mut f = value(alpha);
    let mut g = grad(alpha);
    let mut step = 1e-3;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut pg_norm = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        if let Some((pa, pg)) = &prev {
            let mut sy = 0.0;
            let mut ss = 0.0;
            for i in 0..alpha.len() {
                let s = alpha[i] - pa[i];
                let y = g[i] - pg[i];
                sy += s * y;
                ss += s * s;
            }
            if sy > 1e-18 {
                step = (ss / sy).clamp(1e-9, 1e3);
            }
        }
        let mut t = step;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial: Vec<f64> = alpha.iter().zip(&g).map(|(a, gi)| a - t * gi).collect();
            project_ordered_box(&mut trial);
            let ft = value(&trial);
            let decrease: f64 = alpha
                .iter()
                .zip(&trial)
                .zip(&g)
                .map(|((a, tr), gi)| gi * (a - tr))
                .sum();
            if ft <= f - 1e-4 * decrease.max(0.0) && ft.is_finite() {
                prev = Some((alpha.clone(), g.clone()));
                *alpha = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        g = grad(alpha);
        // projected gradient norm: distance moved by a unit gradient step
        let mut probe: Vec<f64> = alpha.iter().zip(&g).map(|(a, gi)| a - gi).collect();
        project_ordered_box(&mut probe);
        pg_norm = alpha
            .iter()
            .zip(&probe)
            .map(|(a, pr)| (a - pr).powi(2))
            .sum::<f64>()
            .sqrt();
        if pg_norm <= cfg.tol_kkt {
            break;
        }
    }
    pg_norm
}

/// Newton correction along the constraint gradient to drive the equality
/// residual to machine level without leaving the ordered box.
fn polish_equality(p: &PulseProblem, alpha: &mut Vec<f64>) {
    for _ in 0..8 {
        let c = constraint(p, alpha);
        if c.abs() < 1e-13 {
            break;
        }
        let gc = constraint_gradient(p, alpha);
        let norm2: f64 = gc.iter().map(|v| v * v).sum();
        if norm2 < 1e-18 {
            break;
        }
        for (a, gi) in alpha.iter_mut().zip(&gc) {
            *a -= c * gi / norm2;
        }
        project_ordered_box(alpha);
    }
}

/// Best feasible point across all starts. Ties are broken by lower equality
/// residual, then lexicographically smaller angles, so the merge order cannot
/// change the result.
pub fn solve_local(p: &PulseProblem, cfg: &LocalSolveConfig) -> Result<LocalResult, LocalError> {
    assert!(cfg.starts >= 1, "starts must be >= 1");
    assert!(cfg.tol_kkt > 0.0, "tol_kkt must be positive");
    let outcomes: Vec<StartOutcome> = (0..cfg.starts as u64)
        .into_par_iter()
        .map(|s| run_start(p, cfg, s))
        .collect();

    let feasible = |o: &StartOutcome| o.residual <= EQ_TOL;
    let converged_starts = outcomes
        .iter()
        .filter(|o| feasible(o) && o.kkt <= cfg.tol_kkt * 10.0)
        .count();

    let better = |a: &StartOutcome, b: &StartOutcome| -> bool {
        (a.objective, a.residual, &a.alpha) < (b.objective, b.residual, &b.alpha)
    };

    let mut best_feasible: Option<&StartOutcome> = None;
    let mut best_any: Option<&StartOutcome> = None;
    for o in &outcomes {
        if feasible(o) && best_feasible.map_or(true, |b| better(o, b)) {
            best_feasible = Some(o);
        }
        if best_any.map_or(true, |b| o.residual < b.residual) {
            best_any = Some(o);
        }
    }
    match best_feasible {
        Some(o) => Ok(LocalResult {
            alpha_star: o.alpha.clone(),
            j_star: o.objective,
            m_residual: o.residual,
            converged_starts,
        }),
        None => {
            let b = best_any.expect("at least one start");
            Err(LocalError::NoFeasibleStart {
                best_alpha: b.alpha.clone(),
                best_objective: b.objective,
                best_residual: b.residual,
            })
        }
    }
}
