use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mpo_from_spec, Mpo, MpsState};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_tfi, shift_constant, HamiltonianSpec, LocalSpace, PauliTerm};
use crate::pauli_algebra::{BasisCode, Variant};
use crate::readout::DegeneracyResult;
use crate::super_map::{lift, LiftVariant};

/// Settings of the shifted power method `(e0 − H̃)^τ` on matrix product states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerConfig {
    pub chi_max: usize,
    pub svd_cutoff: f64,
    /// Shift; defaults to the shift constant of the operator.
    pub e0: Option<f64>,
    pub max_steps: usize,
    /// Relative energy change counted as stationary.
    pub conv_tol: f64,
    pub conv_window: usize,
    /// Steps between energy-uncertainty evaluations.
    pub delta_e_every: usize,
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig {
            chi_max: 30,
            svd_cutoff: 1e-14,
            e0: None,
            max_steps: 1500,
            conv_tol: 1e-10,
            conv_window: 5,
            delta_e_every: 10,
        }
    }
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chi_max < 1 {
            return Err(Error::Config("chi_max must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.svd_cutoff) {
            return Err(Error::Config(format!("svd_cutoff {} outside [0, 1)", self.svd_cutoff)));
        }
        if self.max_steps == 0 || self.conv_window == 0 || self.delta_e_every == 0 {
            return Err(Error::Config("max_steps, conv_window and delta_e_every must be positive".into()));
        }
        if !(self.conv_tol >= 0.0) {
            return Err(Error::Config(format!("conv_tol {} must be non-negative", self.conv_tol)));
        }
        if let Some(e0) = self.e0 {
            if !e0.is_finite() {
                return Err(Error::Config("e0 must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Final state and diagnostics of a power run.
#[derive(Clone, Debug)]
pub struct PowerOutcome {
    pub state: MpsState<f64>,
    /// `⟨ψ|H|ψ⟩` of the unshifted operator.
    pub energy: f64,
    /// `‖(H − energy)ψ‖`.
    pub delta_e: f64,
    pub steps: usize,
    pub converged: bool,
    /// Largest relative weight discarded in a single step.
    pub max_discarded: f64,
}

/// One point of the field-resolution experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolutionRow {
    pub bz: f64,
    pub d_raw: f64,
    pub d_rounded: u64,
    pub delta_e: f64,
    /// Splitting of the two ferromagnetic states, `n·bz`.
    pub gap: f64,
    pub gap_over_delta_e: f64,
    pub steps: usize,
    pub converged: bool,
}

/// Zip-up application at twice the target bond dimension, then a canonical
/// sweep down to `chi_max`, then normalization. Returns the state and the
/// relative weight discarded.
pub fn apply_and_truncate(op: &Mpo<f64>, psi: &MpsState<f64>, chi_max: usize, cutoff: f64) -> Result<(MpsState<f64>, f64)> {
    let (mut next, lost_zip) = op.apply_zip_up(psi, 2 * chi_max, cutoff)?;
    let lost_sweep = next.compress_right(chi_max, cutoff)?;
    next.normalize()?;
    Ok((next, lost_zip + lost_sweep))
}

/// `‖(H − e)ψ‖` for normalized `ψ`, from an exact MPO application.
fn uncertainty(h: &HamiltonianSpec, psi: &MpsState<f64>, e: f64) -> Result<f64> {
    let op = mpo_from_spec::<f64>(&h.affine(1.0, -e))?;
    Ok(op.apply_exact(psi)?.norm())
}

fn power_run(h: &HamiltonianSpec, init: MpsState<f64>, cfg: &PowerConfig) -> Result<PowerOutcome> {
    cfg.validate()?;
    let e0 = cfg.e0.unwrap_or_else(|| shift_constant(h));
    let op = mpo_from_spec::<f64>(h)?;
    let shifted = mpo_from_spec::<f64>(&h.affine(-1.0, e0))?;
    let mut psi = init;
    psi.compress_right(cfg.chi_max, cfg.svd_cutoff)?;
    psi.normalize()?;
    let mut energy = op.expectation(&psi)?;
    if h.merged().iter().all(|(codes, c)| c.norm() == 0.0 || codes.iter().all(|x| x.is_identity())) {
        // a multiple of the identity: every state is stationary
        return Ok(PowerOutcome { state: psi, energy, delta_e: 0.0, steps: 0, converged: true, max_discarded: 0.0 });
    }
    let (mut steps, mut stable, mut converged, mut max_discarded) = (0, 0, false, 0.0f64);
    while steps < cfg.max_steps {
        let (next, lost) = apply_and_truncate(&shifted, &psi, cfg.chi_max, cfg.svd_cutoff)?;
        psi = next;
        steps += 1;
        max_discarded = max_discarded.max(lost);
        let e = op.expectation(&psi)?;
        if !e.is_finite() {
            return Err(Error::EvolutionFailure(format!("energy diverged at step {steps}")));
        }
        stable = if (e - energy).abs() <= cfg.conv_tol * e.abs() { stable + 1 } else { 0 };
        energy = e;
        if steps % cfg.delta_e_every == 0 {
            log::debug!("step {steps}: e = {energy:.12}, δe = {:.3e}", uncertainty(h, &psi, energy)?);
        }
        if stable >= cfg.conv_window {
            converged = true;
            break;
        }
    }
    let delta_e = uncertainty(h, &psi, energy)?;
    Ok(PowerOutcome { state: psi, energy, delta_e, steps, converged, max_discarded })
}

/// Shifted power method on a real lifted operator, started from the vacuum
/// `|0̃…0̃⟩`, the encoding of the identity.
pub fn power_iterate(h_lifted: &HamiltonianSpec, cfg: &PowerConfig) -> Result<PowerOutcome> {
    if h_lifted.space() != LocalSpace::Ququart(Variant::Averaged) {
        return Err(Error::Unsupported("the MPS power method runs on the averaged lift".into()));
    }
    let n = h_lifted.n_sites();
    let vacuum = MpsState::product(&vec![vec![1.0, 0.0, 0.0, 0.0]; n])?;
    power_run(h_lifted, vacuum, cfg)
}

/// `|⟨0̃′|ψ⟩|²` with per-site vector `(√2, 0, 0, 0)`; the `√2` per site
/// replaces the global `2^{n/2}` so nothing underflows at large `n`.
pub fn degeneracy_readout_mps(s: &MpsState<f64>) -> Result<f64> {
    if s.sites().iter().any(|a| a.d != 4) {
        return Err(Error::UnsupportedDimension(s.sites()[0].d));
    }
    let nrm = s.norm();
    if nrm == 0.0 {
        return Err(Error::EvolutionFailure("readout of a zero state".into()));
    }
    let ov = s.product_overlap(&[std::f64::consts::SQRT_2, 0.0, 0.0, 0.0]) / nrm;
    Ok(ov * ov)
}

/// Lifts a qubit Hamiltonian, runs the power method and reads out the degeneracy.
pub fn count_degeneracy_mps(h: &HamiltonianSpec, cfg: &PowerConfig) -> Result<DegeneracyResult> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(0.0));
    }
    let lifted = lift(h, LiftVariant::Averaged)?;
    let out = power_iterate(&lifted, cfg)?;
    let d_raw = degeneracy_readout_mps(&out.state)?;
    Ok(DegeneracyResult::new(d_raw, out.energy, out.delta_e, out.steps, out.converged))
}

/// `⟨S^z⟩` at the middle site of the power-method ground state of
/// `h + pin_bz Σ S^z`, started from the product state the pin favours.
pub fn pinned_magnetization(h_qubit: &HamiltonianSpec, pin_bz: f64, cfg: &PowerConfig) -> Result<f64> {
    if h_qubit.space() != LocalSpace::Qubit {
        return Err(Error::Unsupported("pinned magnetization needs a qubit Hamiltonian".into()));
    }
    let n = h_qubit.n_sites();
    let mut terms = h_qubit.terms().to_vec();
    terms.extend((0..n).map(|k| PauliTerm::on_sites(0.5 * pin_bz, n, &[(k, BasisCode::Z)])));
    let pinned = HamiltonianSpec::new(n, terms)?;
    let start = if pin_bz > 0.0 { vec![0.0, 1.0] } else { vec![1.0, 0.0] };
    let out = power_run(&pinned, MpsState::product(&vec![start; n])?, cfg)?;
    let sz = HamiltonianSpec::new(n, vec![PauliTerm::on_sites(0.5, n, &[(n / 2, BasisCode::Z)])])?;
    mpo_from_spec::<f64>(&sz)?.expectation(&out.state)
}

/// Open TFI chain at `bx = 0` for each `bz`: degeneracy readout against the
/// ratio of the exact ferromagnetic splitting `n·bz` to the measured `δe`.
/// Points run in parallel.
pub fn resolution_experiment(n: usize, bz_list: &[f64], cfg: &PowerConfig) -> Result<Vec<ResolutionRow>> {
    bz_list
        .par_iter()
        .map(|&bz| {
            let r = count_degeneracy_mps(&build_tfi(n, 0.0, bz)?, cfg)?;
            let gap = n as f64 * bz;
            Ok(ResolutionRow {
                bz,
                d_raw: r.d_raw,
                d_rounded: r.d_rounded,
                delta_e: r.delta_e,
                gap,
                gap_over_delta_e: gap / r.delta_e,
                steps: r.steps,
                converged: r.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::to_dense;
    use crate::hamiltonian::{build_triangular_tfi, triangle_edges};
    use crate::super_map::degeneracy_from_overlap;
    use crate::C64;

    fn dense_power(h: &HamiltonianSpec, e0: f64, steps: usize) -> Vec<f64> {
        let m = to_dense(h).unwrap().map(|z| z.re);
        let shifted = nalgebra::DMatrix::identity(m.nrows(), m.ncols()) * e0 - m;
        let mut v = nalgebra::DVector::zeros(shifted.nrows());
        v[0] = 1.0;
        for _ in 0..steps {
            v = &shifted * v;
            v /= v.norm();
        }
        v.as_slice().to_vec()
    }

    #[test]
    fn untruncated_run_matches_dense_power_method() {
        let h = lift(&build_tfi(4, 0.3, 0.05).unwrap(), LiftVariant::Averaged).unwrap();
        let cfg = PowerConfig { chi_max: 256, svd_cutoff: 0.0, max_steps: 60, ..Default::default() };
        let out = power_iterate(&h, &cfg).unwrap();
        assert!(out.max_discarded < 1e-20);
        let want = dense_power(&h, shift_constant(&h), out.steps);
        let got = out.state.to_dense();
        let fid: f64 = got.iter().zip(&want).map(|(a, b)| a * b).sum::<f64>().powi(2);
        assert!(fid > 1.0 - 1e-8, "{fid}");
        let d_dense = degeneracy_from_overlap(C64::from(want[0]), 4);
        assert!((degeneracy_readout_mps(&out.state).unwrap() - d_dense).abs() < 1e-6);
    }

    #[test]
    fn triangle_and_identity_readouts() {
        let cfg = PowerConfig { max_steps: 3000, ..Default::default() };
        let tri = build_triangular_tfi(&triangle_edges(), 0.0).unwrap();
        let r = count_degeneracy_mps(&tri, &cfg).unwrap();
        assert_eq!(r.d_rounded, 6, "{r:?}");
        assert!(r.residual < 1e-6);
        let id = HamiltonianSpec::identity(5, 1.0).unwrap();
        let r = count_degeneracy_mps(&id, &cfg).unwrap();
        assert!((r.d_raw - 32.0).abs() < 1e-9);
    }

    #[test]
    fn delta_e_is_the_energy_spread() {
        let h = lift(&build_tfi(3, 0.5, 0.0).unwrap(), LiftVariant::Averaged).unwrap();
        let cfg = PowerConfig { chi_max: 64, max_steps: 5, conv_tol: 0.0, ..Default::default() };
        let out = power_iterate(&h, &cfg).unwrap();
        let m = to_dense(&h).unwrap().map(|z| z.re);
        let v = nalgebra::DVector::from_vec(out.state.to_dense());
        let hv = &m * &v;
        let e = v.dot(&hv);
        let var = hv.dot(&hv) - e * e;
        assert!((out.energy - e).abs() < 1e-12);
        assert!((out.delta_e - var.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn pinned_chain_orders_only_in_the_ferro_phase() {
        let cfg = PowerConfig { chi_max: 16, max_steps: 400, ..Default::default() };
        let ordered = pinned_magnetization(&build_tfi(12, 0.2, 0.0).unwrap(), 1e-5, &cfg).unwrap();
        let para = pinned_magnetization(&build_tfi(12, 1.0, 0.0).unwrap(), 1e-5, &cfg).unwrap();
        assert!(ordered < -0.45, "{ordered}");
        assert!(para.abs() < 0.05, "{para}");
    }

    #[test]
    fn config_validation() {
        assert!(PowerConfig::default().validate().is_ok());
        assert!(PowerConfig { chi_max: 0, ..Default::default() }.validate().is_err());
        assert!(PowerConfig { svd_cutoff: 1.0, ..Default::default() }.validate().is_err());
        assert!(PowerConfig { conv_tol: f64::NAN, ..Default::default() }.validate().is_err());
        let q = build_tfi(3, 0.1, 0.0).unwrap();
        assert!(power_iterate(&q, &PowerConfig::default()).is_err());
    }
}
