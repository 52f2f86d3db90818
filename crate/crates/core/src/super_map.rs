//! The lift `H → H̃` and the dictionary between qubit operators and ququart states.
//!
//! An operator `A = Σ c_{α} ⊗ O_{α_k}` is encoded as the ququart state with
//! amplitudes `c_{α} = Tr((⊗O_α)† A)`. Ququart multi-indices are ordered with
//! site 0 as the most significant base-4 digit, qubit indices with site 0 as
//! the most significant bit.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, LocalSpace};
pub use crate::pauli_algebra::Variant as LiftVariant;

/// Largest site count handled by dense operator encode/decode.
pub const MAX_DENSE_OPERATOR_SITES: usize = 8;
/// Largest ququart count for which a dense state is allocated.
pub const MAX_DENSE_QUQUARTS: usize = 13;

/// Dense amplitudes over `local_dim^n_sites` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    local_dim: usize,
    amps: Vec<C64>,
    normalized: bool,
}

impl StateVector {
    pub fn new(n_sites: usize, local_dim: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = checked_dim(n_sites, local_dim)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amps.len() });
        }
        if amps.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidHamiltonian("state has non-finite amplitudes".into()));
        }
        Ok(StateVector { n_sites, local_dim, amps, normalized: false })
    }

    pub fn zeros(n_sites: usize, local_dim: usize) -> Result<Self> {
        let dim = checked_dim(n_sites, local_dim)?;
        Ok(StateVector { n_sites, local_dim, amps: vec![C64::new(0.0, 0.0); dim], normalized: false })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        self.normalized = false;
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::EvolutionFailure("cannot normalize a zero state".into()));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        self.normalized = true;
        Ok(n)
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }
}

fn checked_dim(n_sites: usize, local_dim: usize) -> Result<usize> {
    if local_dim == 4 && n_sites > MAX_DENSE_QUQUARTS {
        return Err(Error::Budget(format!("{n_sites} ququarts exceed the dense limit of {MAX_DENSE_QUQUARTS}")));
    }
    local_dim
        .checked_pow(n_sites as u32)
        .filter(|d| *d <= 1 << 30)
        .ok_or_else(|| Error::Budget(format!("{local_dim}^{n_sites} amplitudes")))
}

/// Replaces every site operator by its lifted 4×4 counterpart; coefficients are unchanged.
pub fn lift(h: &HamiltonianSpec, variant: LiftVariant) -> Result<HamiltonianSpec> {
    if h.space() != LocalSpace::Qubit {
        return Err(Error::Unsupported("only qubit Hamiltonians can be lifted".into()));
    }
    Ok(h.clone().with_space(LocalSpace::Ququart(variant)))
}

/// Product vacuum `|0̃…0̃⟩`, normalized.
pub fn vacuum_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidHamiltonian("vacuum needs at least one site".into()));
    }
    let mut v = StateVector::zeros(n, 4)?;
    v.amps[0] = C64::new(1.0, 0.0);
    v.normalized = true;
    Ok(v)
}

/// `2^n |overlap|²`: the degeneracy encoded in `⟨0̃|ψ̃⟩`.
pub fn degeneracy_from_overlap(overlap: C64, n: usize) -> f64 {
    2f64.powi(n as i32) * overlap.norm_sqr()
}

/// Action of a Pauli string on a computational basis state: flip mask and phase.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PauliAction {
    pub flip: usize,
    pub phase_mask: usize,
    pub n_y: u32,
}

impl PauliAction {
    /// Decodes a base-4 multi-index (site 0 most significant) into masks over qubit bits.
    pub fn from_index(index: usize, n: usize) -> Self {
        let (mut flip, mut phase_mask, mut n_y) = (0, 0, 0);
        for k in 0..n {
            let code = (index >> (2 * (n - 1 - k))) & 3;
            let bit = 1 << (n - 1 - k);
            match code {
                1 => flip |= bit,
                2 => {
                    flip |= bit;
                    phase_mask |= bit;
                    n_y += 1;
                }
                3 => phase_mask |= bit,
                _ => {}
            }
        }
        PauliAction { flip, phase_mask, n_y }
    }

    /// `σ|i⟩ = f |i ^ flip⟩`; returns `f`.
    #[inline]
    pub fn phase(&self, i: usize) -> C64 {
        let sign = if (i & self.phase_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let ipow = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
        ipow[(self.n_y % 4) as usize] * sign
    }
}

fn operator_sites(a: &DMatrix<C64>) -> Result<usize> {
    let d = a.nrows();
    if d != a.ncols() || !d.is_power_of_two() || d < 2 {
        return Err(Error::DimensionMismatch { expected: d.next_power_of_two().max(2), got: d });
    }
    let n = d.trailing_zeros() as usize;
    if n > MAX_DENSE_OPERATOR_SITES {
        return Err(Error::Budget(format!("dense encoding limited to {MAX_DENSE_OPERATOR_SITES} sites")));
    }
    Ok(n)
}

/// Encodes a dense `2^n × 2^n` operator as a ququart state (not normalized).
pub fn encode_operator(a: &DMatrix<C64>) -> Result<StateVector> {
    let n = operator_sites(a)?;
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let mut out = StateVector::zeros(n, 4)?;
    for (idx, amp) in out.amps.iter_mut().enumerate() {
        let p = PauliAction::from_index(idx, n);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..1usize << n {
            acc += p.phase(i).conj() * a[(i ^ p.flip, i)];
        }
        *amp = acc * scale;
    }
    Ok(out)
}

/// Encodes a qubit Hamiltonian directly from its coefficients.
pub fn encode_spec(h: &HamiltonianSpec) -> Result<StateVector> {
    if h.space() != LocalSpace::Qubit {
        return Err(Error::Unsupported("only qubit operators can be encoded".into()));
    }
    let n = h.n_sites();
    let mut out = StateVector::zeros(n, 4)?;
    let scale = 2f64.powf(n as f64 / 2.0);
    for (codes, c) in h.merged() {
        let idx = codes.iter().fold(0usize, |acc, c| (acc << 2) | c.index());
        out.amps[idx] += c * scale;
    }
    Ok(out)
}

/// Inverse of [`encode_operator`].
pub fn decode_state(v: &StateVector) -> Result<DMatrix<C64>> {
    if v.local_dim != 4 {
        return Err(Error::Unsupported("decode expects a ququart state".into()));
    }
    let n = v.n_sites;
    if n > MAX_DENSE_OPERATOR_SITES {
        return Err(Error::Budget(format!("dense decoding limited to {MAX_DENSE_OPERATOR_SITES} sites")));
    }
    let d = 1usize << n;
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let mut a = DMatrix::zeros(d, d);
    for (idx, amp) in v.amps.iter().enumerate() {
        if *amp == C64::new(0.0, 0.0) {
            continue;
        }
        let p = PauliAction::from_index(idx, n);
        for i in 0..d {
            a[(i ^ p.flip, i)] += amp * p.phase(i) * scale;
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_tfi, PauliTerm};
    use crate::pauli_algebra::BasisCode;
    use rand::{Rng, SeedableRng};

    fn random_matrix(d: usize, rng: &mut impl Rng) -> DMatrix<C64> {
        DMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn identity_encodes_to_scaled_vacuum() {
        for n in 1..=4 {
            let v = encode_operator(&DMatrix::identity(1 << n, 1 << n)).unwrap();
            let expected = 2f64.powf(n as f64 / 2.0);
            assert!((v.amps()[0] - C64::from(expected)).norm() < 1e-12);
            assert!(v.amps()[1..].iter().all(|a| a.norm() < 1e-12));
            let vac = vacuum_state(n).unwrap();
            assert!((v.inner(&vac).re * 2f64.powf(-(n as f64) / 2.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_z_encoding() {
        let z = DMatrix::from_row_slice(2, 2, &[C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::from(-1.0)]);
        let v = encode_operator(&z).unwrap();
        let want = [0.0, 0.0, 0.0, std::f64::consts::SQRT_2];
        for (a, w) in v.amps().iter().zip(want) {
            assert!((a - C64::from(w)).norm() < 1e-14);
        }
    }

    #[test]
    fn inner_product_is_hilbert_schmidt() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_matrix(4, &mut rng);
            let b = random_matrix(4, &mut rng);
            let lhs = encode_operator(&a).unwrap().inner(&encode_operator(&b).unwrap());
            let rhs = (a.adjoint() * &b).trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn decode_inverts_encode() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(8, &mut rng);
        let back = decode_state(&encode_operator(&a).unwrap()).unwrap();
        assert!((back - &a).norm() < 1e-12);
        let v = StateVector::new(2, 4, (0..16).map(|k| C64::new(k as f64, -0.5 * k as f64)).collect()).unwrap();
        let again = encode_operator(&decode_state(&v).unwrap()).unwrap();
        assert!(again.amps().iter().zip(v.amps()).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn spec_encoding_matches_coefficients() {
        let h = build_tfi(3, 0.4, 0.1).unwrap();
        let v = encode_spec(&h).unwrap();
        // ZZI carries basis coefficient -0.25 * 2^{3/2}
        let idx = (3 << 4) | (3 << 2);
        assert!((v.amps()[idx].re + 0.25 * 2f64.powf(1.5)).abs() < 1e-14);
        let t = PauliTerm::on_sites(1.0, 3, &[(2, BasisCode::Y)]);
        let hy = HamiltonianSpec::new(3, vec![t]).unwrap();
        assert!((encode_spec(&hy).unwrap().amps()[2].re - 2f64.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn overlap_readout() {
        for n in [1, 4, 9] {
            let ov = C64::from(2f64.powf(-(n as f64) / 2.0));
            assert!((degeneracy_from_overlap(ov, n) - 1.0).abs() < 1e-12);
        }
        let ov = C64::from(2f64.powf(-4.0) * std::f64::consts::SQRT_2);
        assert!((degeneracy_from_overlap(ov, 8) - 2.0).abs() < 1e-12);
        assert_eq!(degeneracy_from_overlap(C64::from(0.0), 5), 0.0);
    }

    #[test]
    fn lift_rejects_ququart_input() {
        let h = build_tfi(2, 0.0, 0.0).unwrap();
        let l = lift(&h, LiftVariant::Averaged).unwrap();
        assert_eq!(l.local_dim(), 4);
        assert_eq!(l.terms(), h.terms());
        assert!(lift(&l, LiftVariant::Left).is_err());
    }

    #[test]
    fn state_vector_checks() {
        assert!(StateVector::new(2, 4, vec![C64::from(0.0); 15]).is_err());
        let mut z = StateVector::zeros(1, 4).unwrap();
        assert!(z.normalize().is_err());
        assert!(vacuum_state(14).is_err());
    }
}
