use serde::Serialize;

/// Degeneracy estimate produced by any backend.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyResult {
    /// Unrounded estimate, `2^n |⟨0̃|ψ̃⟩|²` for the evolution backends.
    pub d_raw: f64,
    pub d_rounded: u64,
    /// `|d_raw - d_rounded|`.
    pub residual: f64,
    pub energy: f64,
    /// `sqrt(⟨H²⟩ - ⟨H⟩²)` of the final state.
    pub delta_e: f64,
    /// Evolution length: iterations, power steps or time steps.
    pub steps: usize,
    pub converged: bool,
}

/// Residual above which the rounded value is reported as ambiguous.
pub const AMBIGUOUS_RESIDUAL: f64 = 0.25;

impl DegeneracyResult {
    pub fn new(d_raw: f64, energy: f64, delta_e: f64, steps: usize, converged: bool) -> Self {
        let rounded = d_raw.round().max(0.0);
        DegeneracyResult {
            d_raw,
            d_rounded: rounded as u64,
            residual: (d_raw - rounded).abs(),
            energy,
            delta_e,
            steps,
            converged,
        }
    }

    pub fn ambiguous(&self) -> bool {
        self.residual > AMBIGUOUS_RESIDUAL
    }

    /// A zero overlap cannot come from a correct evolution of a Hermitian H.
    pub fn failed(&self) -> bool {
        self.d_rounded == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_flags() {
        let r = DegeneracyResult::new(1.97, -1.0, 1e-3, 10, true);
        assert_eq!(r.d_rounded, 2);
        assert!((r.residual - 0.03).abs() < 1e-12);
        assert!(!r.ambiguous());
        assert!(DegeneracyResult::new(1.6, 0.0, 0.0, 0, true).ambiguous());
        assert!(DegeneracyResult::new(0.0, 0.0, 0.0, 0, true).failed());
    }
}
