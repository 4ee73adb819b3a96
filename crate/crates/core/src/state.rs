//! Amplitude vectors over the directed (node, port) basis.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::WalkFloat;

/// Unit-norm complex amplitude vector over the directed basis states of a
/// graph, used by both walk pictures (the coin picture reads index
/// `(j, σ)` as "at node j, pointing through port σ"; the scattering
/// picture reads it as "incoming to node j along port σ").
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState<T: WalkFloat> {
    amp: Vec<Complex<T>>,
}

impl<T: WalkFloat> WalkState<T> {
    /// Builds a state from raw amplitudes. Inputs whose squared norm
    /// deviates from one by more than the scalar's rejection threshold are
    /// refused; smaller deviations are renormalized away.
    pub fn new(amp: Vec<Complex<T>>) -> Result<Self> {
        let norm_sq: T = amp.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - T::one()).abs();
        if deviation > T::norm_reject_tol() {
            return Err(Error::NormViolation {
                deviation: deviation.to_f64(),
            });
        }
        let mut state = Self { amp };
        if deviation > T::zero() {
            let scale = T::one() / norm_sq.sqrt();
            for a in &mut state.amp {
                *a = a.scale(scale);
            }
        }
        Ok(state)
    }

    /// The basis state with unit amplitude at `index`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amp = vec![Complex::new(T::zero(), T::zero()); dim];
        amp[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amp })
    }

    /// Wraps amplitudes produced by a norm-preserving transformation of an
    /// already-validated state, skipping the norm gate.
    pub(crate) fn from_raw(amp: Vec<Complex<T>>) -> Self {
        Self { amp }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amp
    }

    pub fn amplitude(&self, d: usize) -> Complex<T> {
        self.amp[d]
    }

    /// Squared 2-norm; one up to accumulated rounding.
    pub fn norm_sq(&self) -> T {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// 2-norm distance to another state of the same dimension.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let sq: T = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(sq.sqrt())
    }
}
