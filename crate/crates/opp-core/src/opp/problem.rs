use serde::{Deserialize, Serialize};

/// Largest representable modulation index, 4/pi.
pub const MODULATION_MAX: f64 = 4.0 / std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum OppError {
    #[error("pulse number d must be >= 1")]
    ZeroPulseNumber,
    #[error("modulation index {0} outside [0, 4/pi]")]
    ModulationOutOfRange(f64),
    #[error("harmonic truncation order must be >= 5, got {0}")]
    TruncationTooSmall(u32),
    #[error("delta_u entries must be +1 or -1")]
    BadSwitchTransition,
    #[error("delta_u cumulative level leaves {{-1,0,1}}")]
    BadLevelSequence,
    #[error("alpha length {got} does not match pulse number {expected}")]
    AlphaLength { expected: usize, got: usize },
    #[error("alpha component {0} outside [0, 1/4]")]
    AlphaOutOfBox(f64),
    #[error("alpha must be sorted ascending")]
    AlphaUnsorted,
    #[error("motor parameters must be strictly positive")]
    NonPositiveMotorParam,
    #[error("objective value must be nonnegative, got {0}")]
    NegativeObjective(f64),
    #[error("polynomial fit error {achieved:.3e} exceeds tolerance {tolerance:.3e} at degree {degree}")]
    FitToleranceNotMet {
        achieved: f64,
        tolerance: f64,
        degree: u32,
    },
    #[error("fit degree must be >= 2, got {0}")]
    FitDegreeTooSmall(u32),
    #[error("waveform needs at least 4 samples, got {0}")]
    TooFewSamples(usize),
}

/// One OPP instance: pulse number, modulation index, harmonic truncation and
/// the fixed switch-transition pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseProblem {
    d: usize,
    m: f64,
    n_max: u32,
    delta_u: Vec<i8>,
}

impl PulseProblem {
    /// New instance with the default alternating transition pattern
    /// `delta_u_i = (-1)^(i+1)` and truncation order 300.
    pub fn new(d: usize, m: f64) -> Result<Self, OppError> {
        let delta_u = (0..d).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        Self::with_parts(d, m, 300, delta_u)
    }

    pub fn with_n_max(self, n_max: u32) -> Result<Self, OppError> {
        Self::with_parts(self.d, self.m, n_max, self.delta_u)
    }

    /// Override the transition pattern. Entries must be +-1 and the running
    /// level sum must stay within the three converter levels.
    pub fn with_delta_u(self, delta_u: Vec<i8>) -> Result<Self, OppError> {
        Self::with_parts(self.d, self.m, self.n_max, delta_u)
    }

    fn with_parts(d: usize, m: f64, n_max: u32, delta_u: Vec<i8>) -> Result<Self, OppError> {
        if d == 0 {
            return Err(OppError::ZeroPulseNumber);
        }
        if !(0.0..=MODULATION_MAX + 1e-12).contains(&m) {
            return Err(OppError::ModulationOutOfRange(m));
        }
        if n_max < 5 {
            return Err(OppError::TruncationTooSmall(n_max));
        }
        if delta_u.len() != d || delta_u.iter().any(|&s| s != 1 && s != -1) {
            return Err(OppError::BadSwitchTransition);
        }
        let mut level = 0i32;
        for &s in &delta_u {
            level += s as i32;
            if !(-1..=1).contains(&level) {
                return Err(OppError::BadLevelSequence);
            }
        }
        Ok(PulseProblem {
            d,
            m,
            n_max,
            delta_u,
        })
    }

    pub fn pulse_number(&self) -> usize {
        self.d
    }

    pub fn modulation_index(&self) -> f64 {
        self.m
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn delta_u(&self) -> &[i8] {
        &self.delta_u
    }

    pub(crate) fn check_alpha_len(&self, alpha: &[f64]) -> Result<(), OppError> {
        if alpha.len() != self.d {
            return Err(OppError::AlphaLength {
                expected: self.d,
                got: alpha.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_alpha_box(&self, alpha: &[f64]) -> Result<(), OppError> {
        self.check_alpha_len(alpha)?;
        for &a in alpha {
            if !(-1e-12..=0.25 + 1e-12).contains(&a) {
                return Err(OppError::AlphaOutOfBox(a));
            }
        }
        Ok(())
    }
}

/// Converter and machine constants entering the TDD prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorParams {
    pub v_dc: f64,
    pub i_s_nom: f64,
    pub omega_1: f64,
    pub x_sigma: f64,
}

impl MotorParams {
    pub fn new(v_dc: f64, i_s_nom: f64, omega_1: f64, x_sigma: f64) -> Result<Self, OppError> {
        let p = MotorParams {
            v_dc,
            i_s_nom,
            omega_1,
            x_sigma,
        };
        if [v_dc, i_s_nom, omega_1, x_sigma].iter().any(|&v| v <= 0.0) {
            return Err(OppError::NonPositiveMotorParam);
        }
        Ok(p)
    }
}

/// Current total demand distortion from the optimized objective value:
/// `(sqrt(2) V_dc) / (pi I_nom omega_1 X_sigma) * sqrt(J)`.
pub fn compute_tdd(mp: &MotorParams, j: f64) -> Result<f64, OppError> {
    if j < 0.0 {
        return Err(OppError::NegativeObjective(j));
    }
    let pre = std::f64::consts::SQRT_2 * mp.v_dc
        / (std::f64::consts::PI * mp.i_s_nom * mp.omega_1 * mp.x_sigma);
    Ok(pre * j.sqrt())
}
