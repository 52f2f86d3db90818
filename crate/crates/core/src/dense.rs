//! Dense ground truth at small sizes: matrices, full spectra and the
//! correspondence checks between `H` and its lift.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::pauli_algebra::BasisCode;
use crate::readout::DegeneracyResult;
use crate::scalar::Scalar;
use crate::super_map::{encode_operator, lift, vacuum_state, LiftVariant};

/// Maximum number of matrix entries `to_dense` will allocate.
pub const DENSE_ENTRY_BUDGET: usize = 1 << 24;

/// Sum of Kronecker products of the terms.
pub fn to_dense(h: &HamiltonianSpec) -> Result<DMatrix<C64>> {
    let dim = h
        .hilbert_dim()
        .filter(|d| d.checked_mul(*d).is_some_and(|e| e <= DENSE_ENTRY_BUDGET))
        .ok_or_else(|| Error::Budget(format!("dense matrix for {} sites of dim {}", h.n_sites(), h.local_dim())))?;
    let mut m = DMatrix::zeros(dim, dim);
    for (w, space) in h.space().product_expansion() {
        let site: Vec<DMatrix<C64>> = BasisCode::ALL.iter().map(|&c| space.site_matrix(c)).collect();
        for t in h.terms() {
            let mut k = DMatrix::from_element(1, 1, t.coeff * w);
            for c in &t.codes {
                k = k.kronecker(&site[c.index()]);
            }
            m += k;
        }
    }
    let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    for z in m.iter_mut() {
        if z.im.abs() <= 1e-14 * scale {
            z.im = 0.0;
        }
    }
    Ok(m)
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// Uses a real symmetric solver when the matrix has no imaginary part.
pub fn eigh(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let defect = hermiticity_defect(m);
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(defect));
    }
    if m.iter().all(|x| x.im == 0.0) {
        let (vals, vecs) = f64::hermitian_eigen(&m.map(|x| x.re))?;
        return Ok((vals, vecs.map(C64::from)));
    }
    C64::hermitian_eigen(m)
}

/// Full spectrum with ground degeneracy counted within a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    pub degeneracy: usize,
    pub tol_used: f64,
}

/// `max(1e-9, 1e-12 · spectral radius)`.
pub fn default_tolerance(eigenvalues: &[f64]) -> f64 {
    let radius = eigenvalues.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    (1e-12 * radius).max(1e-9)
}

fn count_within(eigenvalues: &[f64], tol: f64) -> usize {
    let e0 = eigenvalues[0];
    eigenvalues.iter().take_while(|e| **e - e0 <= tol).count()
}

pub fn full_spectrum(m: &DMatrix<C64>, tol: Option<f64>) -> Result<SpectrumReport> {
    let (eigenvalues, _) = eigh(m)?;
    Ok(report_from_eigenvalues(eigenvalues, tol))
}

fn report_from_eigenvalues(eigenvalues: Vec<f64>, tol: Option<f64>) -> SpectrumReport {
    let tol_used = tol.unwrap_or_else(|| default_tolerance(&eigenvalues));
    let degeneracy = count_within(&eigenvalues, tol_used);
    SpectrumReport { ground_energy: eigenvalues[0], degeneracy, tol_used, eigenvalues }
}

/// Spectrum of a Hamiltonian built densely.
pub fn spectrum_of(h: &HamiltonianSpec, tol: Option<f64>) -> Result<SpectrumReport> {
    let m = to_dense(h)?;
    full_spectrum(&m, tol)
}

/// Projector onto the eigenvectors within `tol` of the lowest eigenvalue.
pub fn ground_projector(m: &DMatrix<C64>, tol: f64) -> Result<DMatrix<C64>> {
    let (vals, vecs) = eigh(m)?;
    let d = count_within(&vals, tol);
    let g = vecs.columns(0, d);
    Ok(&g * g.adjoint())
}

/// Degeneracy straight from the dense spectrum.
pub fn count_degeneracy_dense(h: &HamiltonianSpec, tol: Option<f64>) -> Result<DegeneracyResult> {
    let report = spectrum_of(h, tol)?;
    Ok(DegeneracyResult::new(report.degeneracy as f64, report.ground_energy, 0.0, 0, true))
}

/// Largest register `count_degeneracy_diagonal` will enumerate.
pub const MAX_DIAGONAL_SITES: usize = 30;

/// Degeneracy of a Hamiltonian built only from `I` and `Z` by enumerating
/// the computational basis. Levels within `tol` (default `1e-9`) of the
/// minimum count as ground states.
pub fn count_degeneracy_diagonal(h: &HamiltonianSpec, tol: Option<f64>) -> Result<DegeneracyResult> {
    let n = h.n_sites();
    if h.local_dim() != 2 || n > MAX_DIAGONAL_SITES {
        return Err(Error::Unsupported(format!("diagonal enumeration needs at most {MAX_DIAGONAL_SITES} qubits")));
    }
    let mut terms = Vec::new();
    for t in h.terms() {
        if t.coeff.im.abs() > 1e-12 || t.codes.iter().any(|c| *c != BasisCode::IDENTITY && *c != BasisCode::Z) {
            return Err(Error::Unsupported("diagonal enumeration needs real I/Z strings".into()));
        }
        let mask = t
            .codes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == BasisCode::Z)
            .fold(0u64, |m, (k, _)| m | 1 << (n - 1 - k));
        terms.push((mask, t.coeff.re));
    }
    let tol = tol.unwrap_or(1e-9);
    let (mut e0, mut count) = (f64::INFINITY, 0usize);
    for x in 0..1u64 << n {
        let e: f64 = terms
            .iter()
            .map(|(m, c)| if (x & m).count_ones() % 2 == 0 { *c } else { -*c })
            .sum();
        if e < e0 - tol {
            (e0, count) = (e, 1);
        } else if e <= e0 + tol {
            count += 1;
            e0 = e0.min(e);
        }
    }
    Ok(DegeneracyResult::new(count as f64, e0, 0.0, 0, true))
}

/// Outcome of comparing the lifted spectrum to the predicted one.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub variant: LiftVariant,
    pub passed: bool,
    pub max_deviation: f64,
    /// `(index, lifted eigenvalue, predicted eigenvalue)` of the worst mismatch.
    pub worst: (usize, f64, f64),
}

/// Lifted eigenvalues predicted from the spectrum of `H`.
///
/// Left and right lifts repeat every eigenvalue `2^n` times; the averaged lift
/// has the pairwise means `(e_i + e_k)/2`.
pub fn predicted_lift_spectrum(eigenvalues: &[f64], variant: LiftVariant) -> Vec<f64> {
    let mut out: Vec<f64> = match variant {
        LiftVariant::Left | LiftVariant::Right => {
            eigenvalues.iter().flat_map(|&e| std::iter::repeat(e).take(eigenvalues.len())).collect()
        }
        LiftVariant::Averaged => eigenvalues
            .iter()
            .flat_map(|&a| eigenvalues.iter().map(move |&b| 0.5 * (a + b)))
            .collect(),
    };
    out.sort_by(f64::total_cmp);
    out
}

pub fn correspondence_check(h: &HamiltonianSpec, variant: LiftVariant) -> Result<CorrespondenceReport> {
    if h.n_sites() > 3 {
        return Err(Error::Budget("correspondence check is limited to n <= 3".into()));
    }
    let (e, _) = eigh(&to_dense(h)?)?;
    let (lifted, _) = eigh(&to_dense(&lift(h, variant)?)?)?;
    let predicted = predicted_lift_spectrum(&e, variant);
    let mut worst = (0, lifted[0], predicted[0]);
    let mut max_deviation: f64 = 0.0;
    for (k, (a, b)) in lifted.iter().zip(&predicted).enumerate() {
        let dev = (a - b).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst = (k, *a, *b);
        }
    }
    Ok(CorrespondenceReport { variant, passed: max_deviation <= 1e-8, max_deviation, worst })
}

#[derive(Clone, Debug)]
pub struct EvolutionLimitReport {
    pub degeneracy: usize,
    /// Largest distance over the lift variants between the projected vacuum and `|P_gs⟩/√D`.
    pub max_deviation: f64,
    pub passed: bool,
}

/// Checks that the ground-sector projection of `|0̃⟩` under every lift is `|P_gs⟩/√D`.
pub fn evolution_limit_check(h: &HamiltonianSpec, tol: f64) -> Result<EvolutionLimitReport> {
    if h.n_sites() > 3 {
        return Err(Error::Budget("evolution limit check is limited to n <= 3".into()));
    }
    let m = to_dense(h)?;
    let (vals, _) = eigh(&m)?;
    let d = count_within(&vals, tol);
    let p = ground_projector(&m, tol)?;
    let target = encode_operator(&p)?;
    let target: Vec<C64> = target.amps().iter().map(|a| a / (d as f64).sqrt()).collect();

    let vac = vacuum_state(h.n_sites())?;
    let vac = DVector::from_column_slice(vac.amps());
    let mut max_deviation: f64 = 0.0;
    for variant in LiftVariant::ALL {
        let (lv, lvecs) = eigh(&to_dense(&lift(h, variant)?)?)?;
        let k = count_within(&lv, tol);
        let g = lvecs.columns(0, k);
        let proj = &g * (g.adjoint() * &vac);
        let norm = proj.norm();
        if norm == 0.0 {
            return Err(Error::EvolutionFailure("vacuum has no ground-sector component".into()));
        }
        let dev = proj.iter().zip(&target).map(|(a, b)| (a / norm - b).norm_sqr()).sum::<f64>().sqrt();
        max_deviation = max_deviation.max(dev);
    }
    Ok(EvolutionLimitReport { degeneracy: d, max_deviation, passed: max_deviation <= 1e-9 })
}
