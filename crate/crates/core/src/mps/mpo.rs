use std::collections::HashMap;

use nalgebra::DMatrix;

use super::{truncation, Canonical, MpsState, SiteTensor};
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, LocalSpace};
use crate::pauli_algebra::{BasisCode, Variant};
use crate::scalar::{matmul, Scalar};
use crate::C64;

/// One MPO tensor `W[a][out][in][b]`, kept alongside a copy laid out as a
/// `(a, in) × (out, b)` matrix for contractions.
#[derive(Clone, Debug)]
pub struct MpoSite<T> {
    pub wl: usize,
    pub d: usize,
    pub wr: usize,
    pub data: Vec<T>,
    zip: Vec<T>,
}

impl<T: Scalar> MpoSite<T> {
    fn new(wl: usize, d: usize, wr: usize, data: Vec<T>) -> Self {
        let mut zip = vec![T::zero(); data.len()];
        for a in 0..wl {
            for so in 0..d {
                for si in 0..d {
                    for b in 0..wr {
                        zip[((a * d + si) * d + so) * wr + b] = data[((a * d + so) * d + si) * wr + b];
                    }
                }
            }
        }
        MpoSite { wl, d, wr, data, zip }
    }
}

/// Matrix product operator with open boundaries.
#[derive(Clone, Debug)]
pub struct Mpo<T> {
    sites: Vec<MpoSite<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Channel {
    Start,
    Done,
    Re(usize),
    Im(usize),
}

/// Real and imaginary parts of a complex matrix.
fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let clean = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    (m.map(|z| clean(z.re)), m.map(|z| clean(z.im)))
}

/// Finite-state-machine MPO of a real operator.
///
/// Each bond carries a "not started" and a "finished" channel plus, for every
/// term crossing it, the real and imaginary parts of the partial product. A
/// term whose factors are all real needs only the real channel. Constants
/// attach to the first site and add no channels.
///
/// Supported spaces are qubits (strings must be real) and the averaged lift,
/// where each string is `c·Re(⊗L)` because the right lift is the entrywise
/// conjugate of the left one.
pub fn mpo_from_spec<T: Scalar>(h: &HamiltonianSpec) -> Result<Mpo<T>> {
    let n = h.n_sites();
    let d = h.local_dim();
    let factor_space = match h.space() {
        LocalSpace::Qubit => LocalSpace::Qubit,
        LocalSpace::Ququart(Variant::Averaged) => LocalSpace::Ququart(Variant::Left),
        other => return Err(Error::Unsupported(format!("MPO for {other:?}; only real operators are built"))),
    };
    let site_mats: Vec<DMatrix<C64>> = BasisCode::ALL.iter().map(|&c| factor_space.site_matrix(c)).collect();
    let parts: Vec<(DMatrix<f64>, DMatrix<f64>)> = site_mats.iter().map(split).collect();
    let terms: Vec<(Vec<BasisCode>, C64)> = h.merged().into_iter().filter(|(_, c)| c.norm() > 0.0).collect();

    let mut constant = 0.0;
    let mut local: Vec<DMatrix<f64>> = vec![DMatrix::zeros(d, d); n];
    // (codes, support, coefficient, needs imaginary channel)
    let mut strings: Vec<(&[BasisCode], Vec<usize>, C64, bool)> = Vec::new();
    for (codes, c) in &terms {
        let support: Vec<usize> = (0..n).filter(|&k| !codes[k].is_identity()).collect();
        let real_string = match h.space() {
            LocalSpace::Qubit => {
                let n_y = codes.iter().filter(|&&x| x == BasisCode::Y).count() as i32;
                (c * C64::i().powi(n_y)).im.abs() < 1e-12 * c.norm()
            }
            _ => c.im.abs() < 1e-12 * c.norm(),
        };
        if !real_string {
            return Err(Error::Unsupported("operator is not real; the MPO builder needs a real operator".into()));
        }
        match support.len() {
            0 => constant += c.re,
            1 => {
                let m = &site_mats[codes[support[0]].index()] * *c;
                local[support[0]] += m.map(|z| z.re);
            }
            _ => {
                let all_real = c.im == 0.0 && support.iter().all(|&k| parts[codes[k].index()].1.iter().all(|x| *x == 0.0));
                strings.push((codes, support, *c, !all_real));
            }
        }
    }

    if strings.is_empty() && local.iter().all(|m| m.iter().all(|x| *x == 0.0)) {
        let sites = (0..n)
            .map(|k| {
                let v = if k == 0 { constant } else { 1.0 };
                let data = (0..d * d).map(|x| T::from_real(if x / d == x % d { v } else { 0.0 })).collect();
                MpoSite::new(1, d, 1, data)
            })
            .collect();
        return Ok(Mpo { sites });
    }

    let bonds: Vec<Vec<Channel>> = (0..=n)
        .map(|b| {
            if b == 0 {
                return vec![Channel::Start];
            }
            if b == n {
                return vec![Channel::Done];
            }
            let mut ch = vec![Channel::Start, Channel::Done];
            for (t, (_, support, _, imag)) in strings.iter().enumerate() {
                if support[0] < b && *support.last().unwrap() >= b {
                    ch.push(Channel::Re(t));
                    if *imag {
                        ch.push(Channel::Im(t));
                    }
                }
            }
            ch
        })
        .collect();
    let index: Vec<HashMap<Channel, usize>> =
        bonds.iter().map(|b| b.iter().enumerate().map(|(i, c)| (*c, i)).collect()).collect();

    let identity = DMatrix::<f64>::identity(d, d);
    let mut sites = Vec::with_capacity(n);
    for k in 0..n {
        let (rows, cols) = (&index[k], &index[k + 1]);
        let (wl, wr) = (bonds[k].len(), bonds[k + 1].len());
        let mut data = vec![T::zero(); wl * d * d * wr];
        let mut add = |from: Channel, to: Channel, m: &DMatrix<f64>| {
            if let (Some(&a), Some(&b)) = (rows.get(&from), cols.get(&to)) {
                for so in 0..d {
                    for si in 0..d {
                        data[((a * d + so) * d + si) * wr + b] += T::from_real(m[(so, si)]);
                    }
                }
            }
        };
        add(Channel::Start, Channel::Start, &identity);
        add(Channel::Done, Channel::Done, &identity);
        let mut onsite = local[k].clone();
        if k == 0 {
            onsite += &identity * constant;
        }
        add(Channel::Start, Channel::Done, &onsite);
        for (t, (codes, support, c, imag)) in strings.iter().enumerate() {
            let (first, last) = (support[0], *support.last().unwrap());
            if k < first || k > last {
                continue;
            }
            let (b, a) = if codes[k].is_identity() {
                (identity.clone(), DMatrix::<f64>::zeros(d, d))
            } else {
                parts[codes[k].index()].clone()
            };
            if k == first {
                // c·(B + iA)
                add(Channel::Start, Channel::Re(t), &(&b * c.re - &a * c.im));
                if *imag {
                    add(Channel::Start, Channel::Im(t), &(&a * c.re + &b * c.im));
                }
            } else if k == last {
                add(Channel::Re(t), Channel::Done, &b);
                if *imag {
                    add(Channel::Im(t), Channel::Done, &(-&a));
                }
            } else {
                add(Channel::Re(t), Channel::Re(t), &b);
                if *imag {
                    add(Channel::Re(t), Channel::Im(t), &a);
                    add(Channel::Im(t), Channel::Re(t), &(-&a));
                    add(Channel::Im(t), Channel::Im(t), &b);
                }
            }
        }
        sites.push(MpoSite::new(wl, d, wr, data));
    }
    Ok(Mpo { sites })
}

impl<T: Scalar> Mpo<T> {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[MpoSite<T>] {
        &self.sites
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(|s| s.wr).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Full matrix, site 0 most significant.
    pub fn to_dense(&self) -> DMatrix<T> {
        // acc[(out, in), b]
        let (mut dout, mut w) = (1usize, 1usize);
        let mut acc = vec![T::one()];
        for site in &self.sites {
            let d = site.d;
            let ndim = dout * d;
            let mut next = vec![T::zero(); ndim * ndim * site.wr];
            for o in 0..dout {
                for i in 0..dout {
                    for a in 0..w {
                        let v = acc[(o * dout + i) * w + a];
                        if v == T::zero() {
                            continue;
                        }
                        for so in 0..d {
                            for si in 0..d {
                                for b in 0..site.wr {
                                    let x = site.data[((a * d + so) * d + si) * site.wr + b];
                                    next[((o * d + so) * ndim + i * d + si) * site.wr + b] += v * x;
                                }
                            }
                        }
                    }
                }
            }
            acc = next;
            dout = ndim;
            w = site.wr;
        }
        DMatrix::from_fn(dout, dout, |r, c| acc[r * dout + c])
    }

    fn check(&self, psi: &MpsState<T>) -> Result<()> {
        if psi.n_sites() != self.n_sites() {
            return Err(Error::DimensionMismatch { expected: self.n_sites(), got: psi.n_sites() });
        }
        for (a, w) in psi.sites().iter().zip(&self.sites) {
            if a.d != w.d {
                return Err(Error::DimensionMismatch { expected: w.d, got: a.d });
            }
        }
        Ok(())
    }

    /// `W|ψ⟩` without truncation; bond dimensions multiply.
    pub fn apply_exact(&self, psi: &MpsState<T>) -> Result<MpsState<T>> {
        self.check(psi)?;
        let sites = psi
            .sites()
            .iter()
            .zip(&self.sites)
            .map(|(a, w)| {
                let (dl, dr, d) = (a.dl * w.wl, a.dr * w.wr, a.d);
                let mut data = vec![T::zero(); dl * d * dr];
                for l in 0..a.dl {
                    for wa in 0..w.wl {
                        for so in 0..d {
                            for si in 0..d {
                                for wb in 0..w.wr {
                                    let x = w.data[((wa * d + so) * d + si) * w.wr + wb];
                                    if x == T::zero() {
                                        continue;
                                    }
                                    for r in 0..a.dr {
                                        data[((l * w.wl + wa) * d + so) * dr + r * w.wr + wb] += x * a.at(l, si, r);
                                    }
                                }
                            }
                        }
                    }
                }
                SiteTensor::new(dl, d, dr, data)
            })
            .collect::<Result<Vec<_>>>()?;
        MpsState::new(sites)
    }

    /// Zip-up application: contracts `W|ψ⟩` left to right, truncating each
    /// bond by SVD. Returns a left-canonical state and the discarded weight.
    pub fn apply_zip_up(&self, psi: &MpsState<T>, chi_max: usize, cutoff: f64) -> Result<(MpsState<T>, f64)> {
        self.check(psi)?;
        let n = self.n_sites();
        let mut carry = vec![T::one()];
        let (mut cn, mut cw, mut co) = (1usize, 1usize, 1usize);
        let mut out = Vec::with_capacity(n);
        let mut discarded = 0.0;
        for (k, (a, w)) in psi.sites().iter().zip(&self.sites).enumerate() {
            let (d, dr, wr) = (a.d, a.dr, w.wr);
            debug_assert_eq!(co, a.dl);
            debug_assert_eq!(cw, w.wl);
            // carry[x][b][l] · A[l][si][r] → t1[x][b][si][r]
            let t1 = matmul(&carry, cn * cw, co, &a.data, d * dr);
            let mut p1 = vec![T::zero(); t1.len()];
            for x in 0..cn {
                for b in 0..cw {
                    for si in 0..d {
                        for r in 0..dr {
                            p1[((x * dr + r) * cw + b) * d + si] = t1[((x * cw + b) * d + si) * dr + r];
                        }
                    }
                }
            }
            // p1[(x, r)][(b, si)] · W[(b, si)][(so, b')] → t2[x][r][so][b']
            let t2 = matmul(&p1, cn * dr, cw * d, &w.zip, d * wr);
            let mut m = vec![T::zero(); t2.len()];
            for x in 0..cn {
                for r in 0..dr {
                    for so in 0..d {
                        for b in 0..wr {
                            m[((x * d + so) * wr + b) * dr + r] = t2[((x * dr + r) * d + so) * wr + b];
                        }
                    }
                }
            }
            if k + 1 == n {
                out.push(SiteTensor::new(cn, d, 1, m)?);
                break;
            }
            let (rows, cols) = (cn * d, wr * dr);
            let (u, s, vh) = T::thin_svd(&m, rows, cols)?;
            let (keep, lost) = truncation(&s, chi_max, cutoff);
            discarded += lost;
            let kfull = s.len();
            let site: Vec<T> = (0..rows * keep).map(|x| u[(x / keep) * kfull + x % keep]).collect();
            out.push(SiteTensor::new(cn, d, keep, site)?);
            carry = (0..keep * cols).map(|x| vh[x] * T::from_real(s[x / cols])).collect();
            cn = keep;
            cw = wr;
            co = dr;
        }
        let mut state = MpsState::new(out)?;
        state.canonical = Canonical::Left;
        Ok((state, discarded))
    }

    /// `⟨ψ|W|ψ⟩`.
    pub fn expectation(&self, psi: &MpsState<T>) -> Result<T> {
        self.check(psi)?;
        let mut env = vec![T::one()];
        let (mut cb, mut cw, mut ck) = (1usize, 1usize, 1usize);
        for (a, w) in psi.sites().iter().zip(&self.sites) {
            let (d, dr, wr) = (a.d, a.dr, w.wr);
            let t1 = matmul(&env, cb * cw, ck, &a.data, d * dr);
            let mut p1 = vec![T::zero(); t1.len()];
            for b in 0..cb {
                for x in 0..cw {
                    for si in 0..d {
                        for r in 0..dr {
                            p1[((b * dr + r) * cw + x) * d + si] = t1[((b * cw + x) * d + si) * dr + r];
                        }
                    }
                }
            }
            let t2 = matmul(&p1, cb * dr, cw * d, &w.zip, d * wr);
            let mut q = vec![T::zero(); t2.len()];
            for b in 0..cb {
                for r in 0..dr {
                    for so in 0..d {
                        for x in 0..wr {
                            q[((b * d + so) * wr + x) * dr + r] = t2[((b * dr + r) * d + so) * wr + x];
                        }
                    }
                }
            }
            let bh: Vec<T> = (0..dr * cb * d)
                .map(|i| {
                    let (r, bs) = (i / (cb * d), i % (cb * d));
                    a.data[bs * dr + r].conjugate()
                })
                .collect();
            env = matmul(&bh, dr, cb * d, &q, wr * dr);
            cb = dr;
            cw = wr;
            ck = dr;
        }
        Ok(env[0])
    }
}
