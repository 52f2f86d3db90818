//! Matrix product states and operators for the lifted power method.

mod mpo;
mod power;

pub use mpo::{mpo_from_spec, Mpo};
pub use power::{
    count_degeneracy_mps, degeneracy_readout_mps, pinned_magnetization, power_iterate, resolution_experiment,
    PowerConfig, PowerOutcome, ResolutionRow,
};

use crate::error::{Error, Result};
use crate::scalar::{self, matmul, Scalar};

/// Site tensor `A[l][s][r]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor<T> {
    pub dl: usize,
    pub d: usize,
    pub dr: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> SiteTensor<T> {
    pub fn new(dl: usize, d: usize, dr: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dl * d * dr {
            return Err(Error::DimensionMismatch { expected: dl * d * dr, got: data.len() });
        }
        Ok(SiteTensor { dl, d, dr, data })
    }

    #[inline]
    pub fn at(&self, l: usize, s: usize, r: usize) -> T {
        self.data[(l * self.d + s) * self.dr + r]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Canonical {
    None,
    /// Every site but the last is a left isometry.
    Left,
    /// Every site but the first is a right isometry.
    Right,
}

/// Open-boundary matrix product state.
#[derive(Clone, Debug)]
pub struct MpsState<T> {
    sites: Vec<SiteTensor<T>>,
    canonical: Canonical,
}

impl<T: Scalar> MpsState<T> {
    pub fn new(sites: Vec<SiteTensor<T>>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidHamiltonian("MPS needs at least one site".into()));
        }
        if sites[0].dl != 1 || sites[sites.len() - 1].dr != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: sites[0].dl.max(sites[sites.len() - 1].dr) });
        }
        for w in sites.windows(2) {
            if w[0].dr != w[1].dl {
                return Err(Error::DimensionMismatch { expected: w[0].dr, got: w[1].dl });
            }
        }
        Ok(MpsState { sites, canonical: Canonical::None })
    }

    /// Product state with the given per-site vectors.
    pub fn product(vectors: &[Vec<T>]) -> Result<Self> {
        let sites = vectors
            .iter()
            .map(|v| SiteTensor::new(1, v.len(), 1, v.clone()))
            .collect::<Result<Vec<_>>>()?;
        MpsState::new(sites)
    }

    /// Exact MPS of a dense vector (site 0 most significant) by successive SVDs.
    pub fn from_dense(amps: &[T], n: usize, d: usize) -> Result<Self> {
        if amps.len() != d.pow(n as u32) {
            return Err(Error::DimensionMismatch { expected: d.pow(n as u32), got: amps.len() });
        }
        let mut sites = Vec::with_capacity(n);
        let mut rest = amps.to_vec();
        let mut dl = 1;
        for _ in 0..n - 1 {
            let rows = dl * d;
            let cols = rest.len() / rows;
            let (u, s, vh) = T::thin_svd(&rest, rows, cols)?;
            let keep = s.iter().take_while(|x| **x > 1e-14 * s[0].max(f64::MIN_POSITIVE)).count().max(1);
            let kfull = s.len();
            let site: Vec<T> = (0..rows * keep).map(|x| u[(x / keep) * kfull + x % keep]).collect();
            sites.push(SiteTensor::new(dl, d, keep, site)?);
            rest = (0..keep * cols).map(|x| vh[x] * T::from_real(s[x / cols])).collect();
            dl = keep;
        }
        sites.push(SiteTensor::new(dl, d, 1, rest)?);
        let mut out = MpsState::new(sites)?;
        out.canonical = Canonical::Left;
        Ok(out)
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteTensor<T>] {
        &self.sites
    }

    pub fn canonical(&self) -> Canonical {
        self.canonical
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(|s| s.dr).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Dense amplitudes, site 0 most significant.
    pub fn to_dense(&self) -> Vec<T> {
        let mut acc = vec![T::one()];
        let mut dl = 1;
        let mut rows = 1;
        for site in &self.sites {
            acc = matmul(&acc, rows, dl, &site.data, site.d * site.dr);
            rows *= site.d;
            dl = site.dr;
        }
        acc
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &MpsState<T>) -> T {
        let mut env = vec![T::one()];
        for (a, b) in self.sites.iter().zip(&other.sites) {
            // env[la][lb] · B[lb][s][rb] → t[la][s][rb]
            let t = matmul(&env, a.dl, b.dl, &b.data, b.d * b.dr);
            // conj(A)[la][s][ra] summed over (la, s)
            let ah: Vec<T> = (0..a.dr * a.dl * a.d)
                .map(|x| {
                    let (r, ls) = (x / (a.dl * a.d), x % (a.dl * a.d));
                    a.data[ls * a.dr + r].conjugate()
                })
                .collect();
            env = matmul(&ah, a.dr, a.dl * a.d, &t, b.dr);
        }
        env[0]
    }

    pub fn norm(&self) -> f64 {
        self.overlap(self).real().max(0.0).sqrt()
    }

    /// Overlap with a product state `⊗_k v`.
    pub fn product_overlap(&self, v: &[T]) -> T {
        let mut env = vec![T::one()];
        for site in &self.sites {
            let mut next = vec![T::zero(); site.dr];
            for (l, e) in env.iter().enumerate() {
                for (s, vs) in v.iter().enumerate() {
                    let w = vs.conjugate() * *e;
                    for (r, nr) in next.iter_mut().enumerate() {
                        *nr += w * site.at(l, s, r);
                    }
                }
            }
            env = next;
        }
        env[0]
    }

    pub fn scale(&mut self, factor: T) {
        scalar::scale(factor, &mut self.sites[0].data);
    }

    /// Brings every site but the first into right-isometric form, truncating
    /// with the given rule; returns the discarded weight relative to the norm.
    pub fn compress_right(&mut self, chi_max: usize, cutoff: f64) -> Result<f64> {
        let mut discarded = 0.0;
        for k in (1..self.sites.len()).rev() {
            let (dl, d, dr) = (self.sites[k].dl, self.sites[k].d, self.sites[k].dr);
            let (u, s, vh) = T::thin_svd(&self.sites[k].data, dl, d * dr)?;
            let (keep, lost) = truncation(&s, chi_max, cutoff);
            discarded += lost;
            let kfull = s.len();
            self.sites[k] = SiteTensor::new(keep, d, dr, vh[..keep * d * dr].to_vec())?;
            let us: Vec<T> = (0..dl * keep).map(|x| u[(x / keep) * kfull + x % keep] * T::from_real(s[x % keep])).collect();
            let prev = &self.sites[k - 1];
            let merged = matmul(&prev.data, prev.dl * prev.d, prev.dr, &us, keep);
            self.sites[k - 1] = SiteTensor::new(prev.dl, prev.d, keep, merged)?;
        }
        self.canonical = Canonical::Right;
        Ok(discarded)
    }

    /// Normalizes through the canonical centre when there is one; returns the old norm.
    pub fn normalize(&mut self) -> Result<f64> {
        let nrm = match self.canonical {
            Canonical::Right => scalar::norm(&self.sites[0].data),
            Canonical::Left => scalar::norm(&self.sites[self.sites.len() - 1].data),
            Canonical::None => self.norm(),
        };
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::EvolutionFailure("state norm vanished".into()));
        }
        let last = self.sites.len() - 1;
        let idx = if self.canonical == Canonical::Left { last } else { 0 };
        scalar::scale(T::from_real(1.0 / nrm), &mut self.sites[idx].data);
        Ok(nrm)
    }

    /// Largest deviation from the isometry condition of the canonical form.
    pub fn isometry_defect(&self) -> f64 {
        let n = self.sites.len();
        let mut worst: f64 = 0.0;
        for (k, a) in self.sites.iter().enumerate() {
            let (rows, cols, right) = match self.canonical {
                Canonical::Right if k > 0 => (a.dl, a.d * a.dr, true),
                Canonical::Left if k + 1 < n => (a.dl * a.d, a.dr, false),
                _ => continue,
            };
            let dim = if right { rows } else { cols };
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = T::zero();
                    if right {
                        for c in 0..cols {
                            acc += a.data[i * cols + c] * a.data[j * cols + c].conjugate();
                        }
                    } else {
                        for r in 0..rows {
                            acc += a.data[r * cols + i].conjugate() * a.data[r * cols + j];
                        }
                    }
                    let target = if i == j { T::one() } else { T::zero() };
                    worst = worst.max((acc - target).modulus());
                }
            }
        }
        worst
    }
}

/// Number of singular values kept and the relative weight discarded.
fn truncation(s: &[f64], chi_max: usize, cutoff: f64) -> (usize, f64) {
    let total: f64 = s.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return (1, 0.0);
    }
    let mut keep = s.len().min(chi_max.max(1));
    let mut tail: f64 = s[keep..].iter().map(|x| x * x).sum();
    while keep > 1 && (tail + s[keep - 1] * s[keep - 1]) / total <= cutoff {
        keep -= 1;
        tail += s[keep] * s[keep];
    }
    (keep, tail / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn random_vec(len: usize, seed: u64) -> Vec<f64> {
        let mut x = seed;
        (0..len)
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect()
    }

    #[test]
    fn dense_round_trip_and_overlap() {
        let v = random_vec(64, 1);
        let m = MpsState::from_dense(&v, 3, 4).unwrap();
        for (a, b) in m.to_dense().iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        let w = random_vec(64, 2);
        let mw = MpsState::from_dense(&w, 3, 4).unwrap();
        let direct: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!((m.overlap(&mw) - direct).abs() < 1e-12);
    }

    #[test]
    fn compression_is_canonical_and_exact_without_truncation() {
        let v = random_vec(256, 3);
        let mut m = MpsState::from_dense(&v, 4, 4).unwrap();
        let lost = m.compress_right(100, 0.0).unwrap();
        assert!(lost < 1e-15);
        assert_eq!(m.canonical(), Canonical::Right);
        assert!(m.isometry_defect() < 1e-10);
        for (a, b) in m.to_dense().iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        m.normalize().unwrap();
        assert!((m.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_overlap_matches_dense() {
        let v: Vec<C64> = random_vec(16, 4).into_iter().map(C64::from).collect();
        let m = MpsState::from_dense(&v, 2, 4).unwrap();
        let p = [C64::new(0.3, 0.1), C64::from(0.0), C64::from(1.0), C64::from(-0.2)];
        let direct: C64 = (0..16).map(|i| (p[i / 4] * p[i % 4]).conj() * v[i]).sum();
        assert!((m.product_overlap(&p) - direct).norm() < 1e-12);
    }

    #[test]
    fn truncation_rule() {
        let (keep, lost) = truncation(&[1.0, 0.5, 1e-9], 10, 1e-12);
        assert_eq!(keep, 2);
        assert!((lost - 0.8e-18).abs() < 1e-30);
        assert_eq!(truncation(&[1.0, 0.5, 0.1], 1, 0.0).0, 1);
    }
}
