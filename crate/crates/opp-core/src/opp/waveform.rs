//! Three-level switching waveform synthesis over one fundamental period.

use serde::{Deserialize, Serialize};

use super::problem::{OppError, PulseProblem};

/// Sampled waveform on `[0, 1)`, normalized time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Waveform {
    pub t: Vec<f64>,
    pub u: Vec<i8>,
}

/// Sample the quarter- and half-wave symmetric pattern defined by the sorted
/// switching angles: `u(0) = 0`, transitions `delta_u_i` at `alpha_i` on the
/// first quarter, `u(1/2 - t) = u(t)`, `u(t + 1/2) = -u(t)`.
pub fn synthesize_waveform(
    p: &PulseProblem,
    alpha: &[f64],
    samples: usize,
) -> Result<Waveform, OppError> {
    p.check_alpha_box(alpha)?;
    if alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(OppError::AlphaUnsorted);
    }
    if samples < 4 {
        return Err(OppError::TooFewSamples(samples));
    }
    let t: Vec<f64> = (0..samples).map(|i| i as f64 / samples as f64).collect();
    let u = t.iter().map(|&ti| level_at(p, alpha, ti)).collect();
    Ok(Waveform { t, u })
}

/// Level at normalized time `t` in `[0, 1)`; right-continuous at switches.
pub fn level_at(p: &PulseProblem, alpha: &[f64], t: f64) -> i8 {
    let (half_t, sign) = if t < 0.5 { (t, 1) } else { (t - 0.5, -1) };
    let mut level = 0i32;
    for (&a, &du) in alpha.iter().zip(p.delta_u()) {
        // rising quarter counts switches at or before t; the mirrored
        // quarter takes the pre-switch value exactly at the image point
        let on = if half_t < 0.25 {
            a <= half_t
        } else {
            a < 0.5 - half_t
        };
        if on {
            level += du as i32;
        }
    }
    (sign * level) as i8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(p: &PulseProblem, alpha: &[f64], n: usize) -> Vec<i8> {
        synthesize_waveform(p, alpha, n).unwrap().u
    }

    #[test]
    fn single_pulse_shape() {
        let p = PulseProblem::new(1, 0.55).unwrap();
        let w = synthesize_waveform(&p, &[0.125], 1000).unwrap();
        for (&t, &u) in w.t.iter().zip(&w.u) {
            let expect = if t >= 0.125 && t < 0.375 {
                1
            } else if t >= 0.625 && t < 0.875 {
                -1
            } else {
                0
            };
            assert_eq!(u, expect, "at t={t}");
        }
    }

    #[test]
    fn zero_mean_by_half_wave_antisymmetry() {
        let p = PulseProblem::new(3, 0.9).unwrap();
        let u = levels(&p, &[0.05, 0.11, 0.21], 4000);
        let mean: f64 = u.iter().map(|&v| v as f64).sum::<f64>() / u.len() as f64;
        assert!(mean.abs() < 1e-12);
    }

    #[test]
    fn three_pulse_pattern_has_seven_segments_per_half() {
        // d = 3 per quarter: 2d + 1 = 7 constant segments over [0, 1/2).
        let p = PulseProblem::new(3, 0.9).unwrap();
        let alpha = [0.05, 0.11, 0.21];
        let u = levels(&p, &alpha, 20_000);
        let half = &u[..10_000];
        let segments = 1 + half.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(segments, 7);
        // full period: 4d transitions
        let mut transitions = u.windows(2).filter(|w| w[0] != w[1]).count();
        if u[0] != u[u.len() - 1] {
            transitions += 1;
        }
        assert_eq!(transitions, 12);
    }

    #[test]
    fn levels_stay_three_valued() {
        let p = PulseProblem::new(4, 0.4).unwrap();
        for &u in levels(&p, &[0.02, 0.09, 0.16, 0.23], 5000).iter() {
            assert!((-1..=1).contains(&(u as i32)));
        }
    }

    #[test]
    fn rejects_unsorted_angles() {
        let p = PulseProblem::new(2, 0.55).unwrap();
        assert_eq!(
            synthesize_waveform(&p, &[0.2, 0.1], 100).unwrap_err(),
            OppError::AlphaUnsorted
        );
    }
}
