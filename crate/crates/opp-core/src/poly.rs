//! Sparse multivariate polynomials over `f64` coefficients.
//!
//! Monomials are exponent vectors under a fixed graded-lexicographic order:
//! lower total degree first, ties broken by comparing exponent vectors
//! lexicographically. The order is global so that moment-matrix indexing is
//! reproducible across runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Coefficients with magnitude below this are dropped after arithmetic.
pub const COEFF_EPS: f64 = 1e-14;

/// A monomial: an exponent vector of fixed dimension.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The constant monomial in `dimension` variables.
    pub fn unit(dimension: usize) -> Self {
        Monomial(vec![0; dimension])
    }

    /// The monomial `x_i`.
    pub fn variable(dimension: usize, i: usize) -> Self {
        let mut e = vec![0; dimension];
        e[i] = 1;
        Monomial(e)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Product of two monomials (exponent-wise sum).
    pub fn product(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.0)
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A sparse multivariate polynomial. Canonical form: no stored coefficient is
/// exactly zero and all monomials share the polynomial's dimension.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(dimension);
        if c != 0.0 {
            p.terms.insert(Monomial::unit(dimension), c);
        }
        p
    }

    /// The polynomial `x_i`.
    pub fn variable(dimension: usize, i: usize) -> Self {
        assert!(i < dimension, "variable index out of range");
        let mut p = Polynomial::zero(dimension);
        p.terms.insert(Monomial::variable(dimension, i), 1.0);
        p
    }

    /// Build from (coefficient, monomial) pairs; merges duplicates and drops
    /// near-zero coefficients.
    pub fn from_terms(
        dimension: usize,
        terms: impl IntoIterator<Item = (Monomial, f64)>,
    ) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(dimension);
        for (m, c) in terms {
            if m.dimension() != dimension {
                return Err(PolyError::DimensionMismatch {
                    expected: dimension,
                    got: m.dimension(),
                });
            }
            *p.terms.entry(m).or_insert(0.0) += c;
        }
        p.canonicalize();
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| c.abs() >= COEFF_EPS);
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.dimension {
            return Err(PolyError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(self.terms.iter().map(|(m, c)| c * m.evaluate(x)).sum())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            *out.terms.entry(m.clone()).or_insert(0.0) += c;
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.dimension);
        if s == 0.0 {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out.canonicalize();
        out
    }

    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dimension);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *out.terms.entry(ma.product(mb)).or_insert(0.0) += ca * cb;
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// `self` composed with the substitution `x_i -> x_i + delta_i`.
    pub fn shift(&self, delta: &[f64]) -> Result<Polynomial, PolyError> {
        if delta.len() != self.dimension {
            return Err(PolyError::DimensionMismatch {
                expected: self.dimension,
                got: delta.len(),
            });
        }
        let mut out = Polynomial::zero(self.dimension);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(self.dimension, *c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                // (x_i + delta_i)^e via binomial expansion
                let mut pow = Polynomial::zero(self.dimension);
                for j in 0..=e {
                    let coeff = binomial(e, j) * delta[i].powi((e - j) as i32);
                    let mut expo = vec![0; self.dimension];
                    expo[i] = j;
                    *pow.terms.entry(Monomial(expo)).or_insert(0.0) += coeff;
                }
                term = term.multiply(&pow)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Maximum |coefficient| difference against `other` (canonical compare
    /// with tolerance for floating-point arithmetic).
    pub fn max_coeff_distance(&self, other: &Polynomial) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).abs());
        }
        for (m, c) in &other.terms {
            worst = worst.max((c - self.coefficient(m)).abs());
        }
        worst
    }

    fn check_dim(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.dimension != other.dimension {
            return Err(PolyError::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c:+.6e}*{m:?}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut out = 1.0;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// All monomials of total degree <= `max_degree` in `dimension` variables, in
/// graded-lexicographic order. Count is C(dimension + max_degree, max_degree).
pub fn monomial_basis(dimension: usize, max_degree: u32) -> Vec<Monomial> {
    assert!(dimension >= 1, "dimension must be positive");
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut current = vec![0u32; dimension];
        fill_degree(&mut out, &mut current, 0, deg);
    }
    out
}

fn fill_degree(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill_degree(out, current, pos + 1, remaining - e);
        current[pos] = 0;
    }
}
