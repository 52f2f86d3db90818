//! Dense imaginary-time evolution and the doubled-register overlap readout.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::dense::{eigh, to_dense};
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, LocalSpace};
use crate::kernel::{CompiledHamiltonian, LinearOperator};
use crate::pauli_algebra::BasisCode;
use crate::scalar::{axpy, dot, norm, scale};
use crate::super_map::{degeneracy_from_overlap, lift, vacuum_state, LiftVariant, StateVector};
use crate::C64;

/// Largest `dt · ‖H‖` the first-order stepper accepts.
pub const STABILITY_LIMIT: f64 = 0.5;

/// Largest qubit count of the spectral reference path.
pub const MAX_SPECTRAL_SITES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IteSample {
    pub tau: f64,
    pub energy: f64,
    /// `energy` minus the exact ground energy.
    pub delta_e: f64,
    pub d_raw: f64,
}

/// Samples of an imaginary-time run, `tau` strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ItePath {
    pub samples: Vec<IteSample>,
}

impl ItePath {
    pub fn last(&self) -> Option<&IteSample> {
        self.samples.last()
    }

    /// Largest increase of `delta_e` between consecutive samples.
    pub fn max_rise(&self) -> f64 {
        self.samples.windows(2).map(|w| w[1].delta_e - w[0].delta_e).fold(0.0, f64::max)
    }

    /// First `tau` with `delta_e` below `threshold`.
    pub fn time_to(&self, threshold: f64) -> Option<f64> {
        self.samples.iter().find(|s| s.delta_e < threshold).map(|s| s.tau)
    }
}

/// Default step `1e-3 / ‖H‖`.
pub fn default_dt(h: &HamiltonianSpec) -> Result<f64> {
    let bound = CompiledHamiltonian::<C64>::new(h)?.spectral_bound();
    Ok(if bound > 0.0 { 1e-3 / bound } else { 1e-3 })
}

/// Euler stepper `v ← normalize((1 − dt·H) v)` with a compiled operator.
struct Stepper {
    op: CompiledHamiltonian<C64>,
    dt: f64,
    scratch: Vec<C64>,
}

impl Stepper {
    fn new(h: &HamiltonianSpec, dt: f64) -> Result<Self> {
        let op = CompiledHamiltonian::<C64>::new(h)?;
        if !(dt > 0.0) || dt * op.spectral_bound() >= STABILITY_LIMIT {
            return Err(Error::EvolutionFailure(format!(
                "dt = {dt} violates dt·‖H‖ < {STABILITY_LIMIT} (‖H‖ ≤ {})",
                op.spectral_bound()
            )));
        }
        let scratch = vec![C64::new(0.0, 0.0); op.dim()];
        Ok(Stepper { op, dt, scratch })
    }

    fn step(&mut self, v: &mut [C64]) -> Result<()> {
        self.op.apply(v, &mut self.scratch);
        axpy(C64::from(-self.dt), &self.scratch, v);
        let nrm = norm(v);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::EvolutionFailure("state norm vanished".into()));
        }
        scale(C64::from(1.0 / nrm), v);
        Ok(())
    }

    fn energy(&mut self, v: &[C64]) -> f64 {
        self.op.apply(v, &mut self.scratch);
        dot(v, &self.scratch).re
    }
}

fn check_state(h: &HamiltonianSpec, v: &StateVector) -> Result<()> {
    if v.n_sites() != h.n_sites() || v.local_dim() != h.local_dim() {
        return Err(Error::DimensionMismatch { expected: h.hilbert_dim().unwrap_or(0), got: v.dim() });
    }
    Ok(())
}

/// Normalized first-order approximation of `e^{−τH} v0` with `τ = dt·steps`.
pub fn ite_evolve(h: &HamiltonianSpec, v0: &StateVector, dt: f64, steps: usize) -> Result<StateVector> {
    check_state(h, v0)?;
    let mut stepper = Stepper::new(h, dt)?;
    let mut v = v0.clone().normalized()?;
    for _ in 0..steps {
        stepper.step(v.amps_mut())?;
    }
    Ok(v)
}

/// Exact `e^{−τH} v0`, normalized, from a dense eigendecomposition.
pub fn ite_spectral(h: &HamiltonianSpec, v0: &StateVector, tau: f64) -> Result<StateVector> {
    check_state(h, v0)?;
    let qubits = h.n_sites() * h.local_dim().trailing_zeros() as usize;
    if qubits > MAX_SPECTRAL_SITES {
        return Err(Error::Budget(format!("spectral path limited to {MAX_SPECTRAL_SITES} qubits")));
    }
    let (vals, vecs) = eigh(&to_dense(h)?)?;
    let coeffs = vecs.adjoint() * nalgebra::DVector::from_column_slice(v0.amps());
    let e_min = vals[0];
    let weighted = nalgebra::DVector::from_iterator(
        coeffs.len(),
        coeffs.iter().zip(&vals).map(|(c, e)| c * (-(tau * (e - e_min))).exp()),
    );
    let out = vecs * weighted;
    StateVector::new(h.n_sites(), h.local_dim(), out.as_slice().to_vec())?.normalized()
}

/// Per-site map from a ququart amplitude to the qubit pair `(row, col)`:
/// `𝒪[(r, c), α] = (O_α)_{rc}` with `O_α = σ_α/√2`.
pub fn site_unitary() -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    for code in BasisCode::ALL {
        let p = LocalSpace::Qubit.site_matrix(code) / C64::from(std::f64::consts::SQRT_2);
        for r in 0..2 {
            for c in 0..2 {
                m[(2 * r + c, code.index())] = p[(r, c)];
            }
        }
    }
    m
}

/// Applies `𝒪` on every ququart and reorders the `2n` qubits from
/// `(r_1 c_1 … r_n c_n)` to `(r_1 … r_n c_1 … c_n)`, so the result is the
/// row-major vectorization of the decoded operator.
pub fn doubled_register_transform(psi: &StateVector) -> Result<Vec<C64>> {
    if psi.local_dim() != 4 {
        return Err(Error::UnsupportedDimension(psi.local_dim()));
    }
    let n = psi.n_sites();
    let u = site_unitary();
    let mut v = psi.amps().to_vec();
    let mut next = vec![C64::new(0.0, 0.0); v.len()];
    for k in 0..n {
        let stride = 1usize << (2 * (n - 1 - k));
        for (i, out) in next.iter_mut().enumerate() {
            let digit = (i / stride) % 4;
            let base = i - digit * stride;
            *out = (0..4).map(|a| u[(digit, a)] * v[base + a * stride]).sum();
        }
        std::mem::swap(&mut v, &mut next);
    }
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (i, amp) in v.iter().enumerate() {
        let (mut row, mut col) = (0usize, 0usize);
        for k in 0..n {
            let digit = (i >> (2 * (n - 1 - k))) & 3;
            row = (row << 1) | (digit >> 1);
            col = (col << 1) | (digit & 1);
        }
        out[(row << n) | col] = *amp;
    }
    Ok(out)
}

/// `(⟨φ|⊗⟨φ|) P 𝒪^{⊗n} |ψ̃⟩` for a real `φ`.
pub fn doubled_register_overlap(phi: &StateVector, psi: &StateVector) -> Result<C64> {
    if phi.local_dim() != 2 || phi.n_sites() != psi.n_sites() {
        return Err(Error::DimensionMismatch { expected: psi.n_sites(), got: phi.n_sites() });
    }
    let t = doubled_register_transform(psi)?;
    let p = phi.amps();
    let d = p.len();
    Ok((0..d).flat_map(|r| (0..d).map(move |c| (r, c))).map(|(r, c)| p[r] * p[c] * t[r * d + c]).sum())
}

/// Real Gaussian state, normalized.
pub fn random_real_state(n: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n).map(|_| C64::from(Distribution::<f64>::sample(&StandardNormal, &mut rng))).collect();
    StateVector::new(n, 2, amps)?.normalized()
}

fn require_real(h: &HamiltonianSpec) -> Result<()> {
    let m = to_dense(h)?;
    if m.iter().any(|z| z.im.abs() > 1e-12) {
        return Err(Error::Unsupported("the doubled-register readout needs a real Hamiltonian".into()));
    }
    Ok(())
}

/// Evolves a random real `φ` under `h` and the vacuum under the averaged
/// lift for time `tau`, then returns the doubled-register overlap, which
/// tends to `1/√D`.
pub fn qite_overlap_check(h: &HamiltonianSpec, dt: f64, tau: f64, seed: u64) -> Result<f64> {
    require_real(h)?;
    let n = h.n_sites();
    let steps = (tau / dt).round() as usize;
    let phi = ite_evolve(h, &random_real_state(n, seed)?, dt, steps)?;
    let psi = ite_evolve(&lift(h, LiftVariant::Averaged)?, &vacuum_state(n)?, dt, steps)?;
    let ov = doubled_register_overlap(&phi, &psi)?;
    Ok(ov.re)
}

/// Energy deviation and degeneracy estimate along `τ` for `h` from a random
/// real state and for its averaged lift from the vacuum. The qubit path's
/// `d_raw` is `1/overlap²` of the doubled-register readout at the same `τ`;
/// the lifted path's is `2^n |⟨0̃|ψ̃⟩|²`.
pub fn convergence_curves(h: &HamiltonianSpec, dt: f64, tau_max: f64, seed: u64) -> Result<(ItePath, ItePath)> {
    require_real(h)?;
    let n = h.n_sites();
    let (vals, _) = eigh(&to_dense(h)?)?;
    let e_g = vals[0];
    let lifted = lift(h, LiftVariant::Averaged)?;
    let mut qs = Stepper::new(h, dt)?;
    let mut ls = Stepper::new(&lifted, dt)?;
    let mut phi = random_real_state(n, seed)?;
    let mut psi = vacuum_state(n)?;
    let steps = (tau_max / dt).round() as usize;
    let every = (steps / 200).max(1);
    let (mut qpath, mut lpath) = (ItePath::default(), ItePath::default());
    for step in 0..=steps {
        if step > 0 {
            qs.step(phi.amps_mut())?;
            ls.step(psi.amps_mut())?;
        }
        if step % every == 0 || step == steps {
            let tau = step as f64 * dt;
            let ov = doubled_register_overlap(&phi, &psi)?.re;
            let eq = qs.energy(phi.amps());
            qpath.samples.push(IteSample { tau, energy: eq, delta_e: eq - e_g, d_raw: 1.0 / (ov * ov) });
            let el = ls.energy(psi.amps());
            let d = degeneracy_from_overlap(psi.amps()[0], n);
            lpath.samples.push(IteSample { tau, energy: el, delta_e: el - e_g, d_raw: d });
        }
    }
    Ok((qpath, lpath))
}
