//! Krylov ground-state solver with a fixed-size kept basis and full
//! re-orthogonalization, and the degeneracy pipeline built on it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{shift_constant, HamiltonianSpec, LocalSpace};
use crate::readout::DegeneracyResult;
use crate::scalar::{self, Scalar};
use crate::super_map::{lift, vacuum_state, LiftVariant, StateVector, MAX_DENSE_QUQUARTS};
use crate::C64;

pub use crate::kernel::{apply_hamiltonian, CompiledHamiltonian, DenseOperator, LinearOperator};

/// Norm below which the projected new direction counts as zero.
pub const BREAKDOWN_NORM: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LanczosConfig {
    /// Number of basis vectors kept.
    pub ndim: usize,
    pub maxiter: usize,
    /// Absolute energy tolerance; `None` means `1e-10` times the spectral bound.
    pub conv_tol: Option<f64>,
    /// Consecutive iterations the tolerance must hold.
    pub conv_window: usize,
    /// Ritz values within this distance of the lowest one count towards the
    /// ground sector in the degeneracy readout. `None` keeps only the lowest.
    pub resolution: Option<f64>,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig { ndim: 20, maxiter: 3000, conv_tol: None, conv_window: 3, resolution: None }
    }
}

impl LanczosConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ndim < 3 {
            return Err(Error::Config(format!("ndim must be at least 3, got {}", self.ndim)));
        }
        if self.maxiter <= self.ndim {
            return Err(Error::Config("maxiter must exceed ndim".into()));
        }
        if self.conv_window == 0 {
            return Err(Error::Config("conv_window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LanczosStatus {
    Converged,
    /// The Krylov space of `v0` closed; the result is exact within it.
    InvariantSubspace,
    MaxIterations,
}

impl LanczosStatus {
    pub fn converged(self) -> bool {
        self != LanczosStatus::MaxIterations
    }
}

/// Orthonormal basis and projected Hamiltonian at termination.
#[derive(Clone, Debug)]
pub struct KrylovState<T: Scalar> {
    /// Columns are the basis vectors.
    pub basis: DMatrix<T>,
    pub local_h: DMatrix<T>,
    pub last_energy: f64,
}

#[derive(Clone, Debug)]
pub struct LanczosOutcome<T: Scalar> {
    pub energy: f64,
    pub vector: Vec<T>,
    /// `‖(H - energy) v‖`, the standard deviation of `H` in `v`.
    pub delta_e: f64,
    /// Ritz values of the final basis, ascending.
    pub ritz_values: Vec<f64>,
    /// `|⟨v0|y_k⟩|²` for each Ritz vector, with `v0` normalized.
    pub v0_weights: Vec<f64>,
    pub iterations: usize,
    pub status: LanczosStatus,
    pub state: KrylovState<T>,
}

impl<T: Scalar> LanczosOutcome<T> {
    /// Weight of `v0` in Ritz vectors within `window` of the lowest Ritz value.
    pub fn ground_weight(&self, window: Option<f64>) -> f64 {
        match window {
            None => self.v0_weights[0],
            Some(w) => self
                .ritz_values
                .iter()
                .zip(&self.v0_weights)
                .take_while(|(t, _)| **t - self.energy <= w)
                .map(|(_, p)| p)
                .sum(),
        }
    }
}

/// `r -= Q (Q† r)` over the first `m` columns; returns the coefficients.
fn project_out<T: Scalar>(q: &DMatrix<T>, m: usize, r: &mut [T]) -> Vec<T> {
    let dim = q.nrows();
    let cols = q.as_slice();
    let coeffs: Vec<T> = (0..m).map(|k| scalar::dot(&cols[k * dim..(k + 1) * dim], r)).collect();
    for (k, c) in coeffs.iter().enumerate() {
        scalar::axpy(-*c, &cols[k * dim..(k + 1) * dim], r);
    }
    coeffs
}

/// `Q[:, :m] ← Q[:, :m] Y`, in row blocks to bound the temporary.
fn rotate_basis<T: Scalar>(q: &mut DMatrix<T>, m: usize, y: &DMatrix<T>) {
    const BLOCK: usize = 4096;
    let dim = q.nrows();
    let mut r0 = 0;
    while r0 < dim {
        let b = BLOCK.min(dim - r0);
        let rotated = q.view((r0, 0), (b, m)) * y;
        q.view_mut((r0, 0), (b, m)).copy_from(&rotated);
        r0 += b;
    }
}

/// Lowest eigenpair in the Krylov closure of `v0`.
///
/// Each iteration applies the operator once to the newest basis vector. Once
/// `ndim` vectors are held, the projected matrix is diagonalized, the basis is
/// rotated onto Ritz vectors and the highest one is replaced by the new
/// direction. A vanishing new direction ends the run; no random vector is
/// injected.
pub fn lanczos_core<T: Scalar>(
    op: &dyn LinearOperator<T>,
    v0: &[T],
    cfg: &LanczosConfig,
    conv_tol: f64,
) -> Result<LanczosOutcome<T>> {
    cfg.validate()?;
    let dim = op.dim();
    if v0.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v0.len() });
    }
    let v0_norm = scalar::norm(v0);
    if v0_norm == 0.0 || !v0_norm.is_finite() {
        return Err(Error::EvolutionFailure("initial vector is zero".into()));
    }
    let ndim = cfg.ndim.min(dim);
    let mut v0n = v0.to_vec();
    scalar::scale(T::from_real(1.0 / v0_norm), &mut v0n);

    let mut q = DMatrix::<T>::zeros(dim, ndim);
    q.column_mut(0).copy_from_slice(&v0n);
    // ⟨v0|q_k⟩ for each basis vector
    let mut c = vec![T::zero(); ndim];
    c[0] = T::one();
    let mut h = DMatrix::<T>::zeros(ndim, ndim);
    let mut m = 1;
    let mut w = vec![T::zero(); dim];
    let mut prev_e = f64::INFINITY;
    let mut prev_weight = f64::INFINITY;
    let mut streak = 0;
    let mut status = LanczosStatus::MaxIterations;
    let mut iterations = 0;
    let (mut theta, mut y);

    loop {
        iterations += 1;
        op.apply(&q.as_slice()[(m - 1) * dim..m * dim], &mut w);
        let col = project_out(&q, m, &mut w);
        let col2 = project_out(&q, m, &mut w);
        for i in 0..m {
            let v = col[i] + col2[i];
            h[(i, m - 1)] = v;
            h[(m - 1, i)] = v.conjugate();
        }
        h[(m - 1, m - 1)] = T::from_real(h[(m - 1, m - 1)].real());
        let hm = h.view((0, 0), (m, m)).into_owned();
        (theta, y) = T::hermitian_eigen(&hm)?;
        let weights: Vec<f64> = (0..m)
            .map(|k| (0..m).fold(T::zero(), |acc, i| acc + c[i].conjugate() * y[(i, k)]).modulus_squared())
            .collect();
        let e0 = theta[0];
        let weight = match cfg.resolution {
            None => weights[0],
            Some(win) => theta.iter().zip(&weights).take_while(|(t, _)| **t - e0 <= win).map(|(_, p)| p).sum(),
        };
        let weight_tol = if cfg.resolution.is_some() { 1e-6 / (dim as f64).sqrt() } else { f64::INFINITY };
        if (e0 - prev_e).abs() < conv_tol && (weight - prev_weight).abs() < weight_tol {
            streak += 1;
        } else {
            streak = 0;
        }
        prev_e = e0;
        prev_weight = weight;

        let beta = scalar::norm(&w);
        let scale = theta.iter().fold(1.0f64, |a, t| a.max(t.abs()));
        if beta < BREAKDOWN_NORM * scale || m == dim && beta < 1e-8 * scale {
            status = LanczosStatus::InvariantSubspace;
            break;
        }
        if streak >= cfg.conv_window {
            status = LanczosStatus::Converged;
            break;
        }
        if iterations >= cfg.maxiter {
            break;
        }
        scalar::scale(T::from_real(1.0 / beta), &mut w);
        if m < ndim {
            q.column_mut(m).copy_from_slice(&w);
            c[m] = scalar::dot(&v0n, &w);
            m += 1;
        } else {
            rotate_basis(&mut q, m, &y);
            let rotated_c: Vec<T> = (0..m).map(|k| (0..m).fold(T::zero(), |acc, i| acc + c[i] * y[(i, k)])).collect();
            c = rotated_c;
            h.fill(T::zero());
            for k in 0..m - 1 {
                h[(k, k)] = T::from_real(theta[k]);
            }
            q.column_mut(m - 1).copy_from_slice(&w);
            c[m - 1] = scalar::dot(&v0n, &w);
        }
    }

    let mut vector = vec![T::zero(); dim];
    for i in 0..m {
        scalar::axpy(y[(i, 0)], &q.as_slice()[i * dim..(i + 1) * dim], &mut vector);
    }
    let vn = scalar::norm(&vector);
    scalar::scale(T::from_real(1.0 / vn), &mut vector);
    let mut hv = vec![T::zero(); dim];
    op.apply(&vector, &mut hv);
    let energy = scalar::dot(&vector, &hv).real();
    scalar::axpy(T::from_real(-energy), &vector, &mut hv);
    let delta_e = scalar::norm(&hv);

    let v0_weights = (0..m)
        .map(|k| (0..m).fold(T::zero(), |acc, i| acc + c[i].conjugate() * y[(i, k)]).modulus_squared())
        .collect();
    let state = KrylovState {
        basis: q.columns(0, m).into_owned(),
        local_h: h.view((0, 0), (m, m)).into_owned(),
        last_energy: theta[0],
    };
    Ok(LanczosOutcome { energy, vector, delta_e, ritz_values: theta, v0_weights, iterations, status, state })
}

/// Complex entry point on state vectors.
pub fn lanczos_ground(
    op: &dyn LinearOperator<C64>,
    v0: &StateVector,
    cfg: &LanczosConfig,
) -> Result<(LanczosOutcome<C64>, StateVector)> {
    let tol = cfg.conv_tol.unwrap_or(1e-10);
    let out = lanczos_core(op, v0.amps(), cfg, tol)?;
    let v = StateVector::new(v0.n_sites(), v0.local_dim(), out.vector.clone())?;
    Ok((out, v))
}

fn lanczos_on_spec<T: Scalar>(h: &HamiltonianSpec, v0: &[T], cfg: &LanczosConfig) -> Result<LanczosOutcome<T>> {
    let op = CompiledHamiltonian::<T>::new(h)?;
    let tol = cfg.conv_tol.unwrap_or(1e-10 * op.spectral_bound().max(1.0));
    lanczos_core(&op, v0, cfg, tol)
}

/// Degeneracy from the averaged lift, starting at the vacuum.
///
/// `D_raw = 2^n |⟨0̃|ψ̃⟩|²`, summed over Ritz vectors inside
/// `cfg.resolution` when one is set.
pub fn count_degeneracy_lanczos(h: &HamiltonianSpec, cfg: &LanczosConfig) -> Result<DegeneracyResult> {
    if h.space() != LocalSpace::Qubit {
        return Err(Error::InvalidHamiltonian("expected a qubit Hamiltonian".into()));
    }
    if h.n_sites() > MAX_DENSE_QUQUARTS {
        return Err(Error::Budget(format!("{} ququarts exceed the dense vector budget", h.n_sites())));
    }
    if !h.is_hermitian() {
        return Err(Error::InvalidHamiltonian("Hamiltonian is not Hermitian".into()));
    }
    let n = h.n_sites();
    let lifted = lift(h, LiftVariant::Averaged)?;
    let vac = vacuum_state(n)?;
    let pow = 2f64.powi(n as i32);
    let result = match CompiledHamiltonian::<f64>::new(&lifted) {
        Ok(_) => {
            let v0: Vec<f64> = vac.amps().iter().map(|z| z.re).collect();
            let out = lanczos_on_spec::<f64>(&lifted, &v0, cfg)?;
            (out.ground_weight(cfg.resolution), out.energy, out.delta_e, out.iterations, out.status)
        }
        Err(_) => {
            let out = lanczos_on_spec::<C64>(&lifted, vac.amps(), cfg)?;
            (out.ground_weight(cfg.resolution), out.energy, out.delta_e, out.iterations, out.status)
        }
    };
    let (weight, energy, delta_e, steps, status) = result;
    if status == LanczosStatus::InvariantSubspace {
        log::info!("invariant subspace reached after {steps} iterations");
    }
    Ok(DegeneracyResult::new(pow * weight, energy, delta_e, steps, status.converged()))
}

/// Scale used for the default tolerance of a qubit Hamiltonian's lift.
pub fn default_scale(h: &HamiltonianSpec) -> f64 {
    shift_constant(h).max(1.0)
}

/// Runs the complex path on a plain vector; exposed for tests of the kernel.
pub fn lanczos_dense(m: &DMatrix<C64>, v0: &[C64], cfg: &LanczosConfig) -> Result<LanczosOutcome<C64>> {
    let op = DenseOperator(m.clone());
    lanczos_core(&op, v0, cfg, cfg.conv_tol.unwrap_or(1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{spectrum_of, to_dense};
    use crate::hamiltonian::{build_tfi, build_triangular_tfi, random_two_local, triangle_edges, RandomKind};
    use nalgebra::DVector;
    use rand::SeedableRng;

    fn diag_op(vals: &[f64]) -> DenseOperator<f64> {
        DenseOperator(DMatrix::from_diagonal(&DVector::from_column_slice(vals)))
    }

    #[test]
    fn diagonal_uniform_start() {
        let vals: Vec<f64> = (0..50).map(|k| k as f64).collect();
        let v0 = vec![1.0; 50];
        let cfg = LanczosConfig { ndim: 8, maxiter: 2000, ..Default::default() };
        let out = lanczos_core(&diag_op(&vals), &v0, &cfg, 1e-12).unwrap();
        assert!(out.energy.abs() < 1e-10);
        assert!((out.vector[0].abs() - 1.0).abs() < 1e-8);
        assert!(out.status.converged());
    }

    #[test]
    fn block_start_stays_in_sector() {
        // v0 lives in the block spanned by indices 3..6 whose minimum is 2
        let vals = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0];
        let v0 = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let out = lanczos_core(&diag_op(&vals), &v0, &LanczosConfig::default(), 1e-12).unwrap();
        assert!((out.energy - 2.0).abs() < 1e-12);
        assert_eq!(out.status, LanczosStatus::InvariantSubspace);
    }

    #[test]
    fn basis_stays_orthonormal_through_rotations() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let h = random_two_local(4, RandomKind::RealSymmetric, &mut rng).unwrap();
        let op = CompiledHamiltonian::<f64>::new(&h).unwrap();
        let v0: Vec<f64> = (0..16).map(|k| 1.0 + k as f64 * 0.1).collect();
        let cfg = LanczosConfig { ndim: 4, maxiter: 30, conv_tol: Some(0.0), ..Default::default() };
        let out = lanczos_core(&op, &v0, &cfg, 0.0).unwrap();
        let q = &out.state.basis;
        let gram = q.transpose() * q;
        assert!((gram - DMatrix::identity(q.ncols(), q.ncols())).norm() < 1e-10);
    }

    #[test]
    fn tfi_lift_energy_matches_dense() {
        let h = build_tfi(6, 0.25, 0.0).unwrap();
        let e = spectrum_of(&h, None).unwrap().ground_energy;
        let lifted = lift(&h, LiftVariant::Averaged).unwrap();
        let v0: Vec<f64> = vacuum_state(6).unwrap().amps().iter().map(|z| z.re).collect();
        let out = lanczos_on_spec::<f64>(&lifted, &v0, &LanczosConfig::default()).unwrap();
        assert!((out.energy - e).abs() < 1e-8, "{} vs {e}", out.energy);
    }

    #[test]
    fn triangle_counts() {
        let cfg = LanczosConfig::default();
        let d6 = count_degeneracy_lanczos(&build_triangular_tfi(&triangle_edges(), 0.0).unwrap(), &cfg).unwrap();
        assert_eq!(d6.d_rounded, 6);
        assert!(d6.residual < 1e-8);
        let d1 = count_degeneracy_lanczos(&build_triangular_tfi(&triangle_edges(), 0.3).unwrap(), &cfg).unwrap();
        assert_eq!(d1.d_rounded, 1);
    }

    #[test]
    fn full_degeneracy() {
        let h = HamiltonianSpec::identity(3, -1.0).unwrap();
        let r = count_degeneracy_lanczos(&h, &LanczosConfig::default()).unwrap();
        assert_eq!(r.d_rounded, 8);
        assert!(r.converged);
    }

    #[test]
    fn krylov_basis_is_polynomial_in_h() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let h = random_two_local(3, RandomKind::RealSymmetric, &mut rng).unwrap();
        let lifted = lift(&h, LiftVariant::Averaged).unwrap();
        let m = to_dense(&lifted).unwrap().map(|z| z.re);
        let v0: Vec<f64> = vacuum_state(3).unwrap().amps().iter().map(|z| z.re).collect();
        // orthonormal basis of span{H^i v0}
        let mut span: Vec<DVector<f64>> = Vec::new();
        let mut v = DVector::from_column_slice(&v0);
        for _ in 0..20 {
            let mut r = v.clone();
            for _ in 0..2 {
                for s in &span {
                    r -= s * s.dot(&r);
                }
            }
            if r.norm() > 1e-9 * v.norm() {
                span.push(r.normalize());
            }
            v = &m * v;
            v /= v.norm();
        }
        let op = CompiledHamiltonian::<f64>::new(&lifted).unwrap();
        let cfg = LanczosConfig { ndim: 4, maxiter: 40, ..Default::default() };
        let out = lanczos_core(&op, &v0, &cfg, 1e-14).unwrap();
        for k in 0..out.state.basis.ncols() {
            let b = out.state.basis.column(k).into_owned();
            let mut r = b.clone();
            for s in &span {
                r -= s * s.dot(&b);
            }
            assert!(r.norm() < 1e-8, "basis vector {k} leaves the Krylov span");
        }
    }

    #[test]
    fn config_validation() {
        assert!(LanczosConfig { ndim: 2, ..Default::default() }.validate().is_err());
        assert!(LanczosConfig { ndim: 10, maxiter: 10, ..Default::default() }.validate().is_err());
    }
}
