//! Matrix-free action of a Pauli-string Hamiltonian.
//!
//! Every site matrix in use (Pauli matrices and the rescaled lifted ones) has
//! at most one nonzero per row, so each term maps an output index to a single
//! input index. The kernel gathers over output chunks in parallel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::pauli_algebra::BasisCode;
use crate::scalar::Scalar;
use crate::super_map::StateVector;
use crate::C64;

const CHUNK: usize = 1 << 12;

/// A linear map on `T^dim`.
pub trait LinearOperator<T: Scalar>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Largest support handled by a per-term lookup table.
pub const MAX_TERM_SUPPORT: usize = 8;

/// A term as a table over the digits of its support: output digits `combo`
/// read input index `j ^ delta[combo]` with weight `val[combo]`.
#[derive(Clone, Debug)]
struct CompiledTerm<T> {
    shifts: Vec<u32>,
    delta: Vec<usize>,
    val: Vec<T>,
}

/// Drops round-off below `1e-13` in each component.
fn snap(z: C64) -> C64 {
    let clean = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    C64::new(clean(z.re), clean(z.im))
}

/// Row `r` of a site matrix as `(column, value)`, or `None` for a zero row.
fn monomial_rows(m: &nalgebra::DMatrix<C64>) -> Result<Vec<Option<(usize, C64)>>> {
    (0..m.nrows())
        .map(|r| {
            let nz: Vec<usize> = (0..m.ncols()).filter(|&c| m[(r, c)] != C64::new(0.0, 0.0)).collect();
            match nz[..] {
                [] => Ok(None),
                [c] => Ok(Some((c, m[(r, c)]))),
                _ => Err(Error::Unsupported("site matrix has a row with several entries".into())),
            }
        })
        .collect()
}

/// Hamiltonian compiled for repeated application.
#[derive(Clone, Debug)]
pub struct CompiledHamiltonian<T> {
    n_sites: usize,
    local_dim: usize,
    dim: usize,
    terms: Vec<CompiledTerm<T>>,
    constant: T,
    /// Upper bound on the spectral radius.
    bound: f64,
}

impl<T: Scalar> CompiledHamiltonian<T> {
    pub fn new(h: &HamiltonianSpec) -> Result<Self> {
        let dim = h
            .hilbert_dim()
            .filter(|d| *d <= 1 << 30)
            .ok_or_else(|| Error::Budget(format!("{} sites of dim {}", h.n_sites(), h.local_dim())))?;
        let d = h.local_dim();
        let bits = d.trailing_zeros();
        let n = h.n_sites();
        let space = h.space();
        let products: Vec<(f64, Vec<Vec<Option<(usize, C64)>>>)> = space
            .product_expansion()
            .into_iter()
            .map(|(w, sp)| {
                let rows = BasisCode::ALL.iter().map(|&c| monomial_rows(&sp.site_matrix(c).map(snap))).collect::<Result<_>>()?;
                Ok((w, rows))
            })
            .collect::<Result<_>>()?;
        let mut terms = Vec::new();
        let mut constant = C64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (codes, c) in h.merged() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            bound += c.norm() * space.string_norm_bound(&codes);
            let support: Vec<usize> = (0..n).filter(|&k| !codes[k].is_identity()).collect();
            if support.is_empty() {
                constant += c;
                continue;
            }
            if support.len() > MAX_TERM_SUPPORT {
                return Err(Error::Unsupported(format!("term acting on {} sites", support.len())));
            }
            let shifts: Vec<u32> = support.iter().map(|&k| bits * (n - 1 - k) as u32).collect();
            let s = support.len();
            let mut delta = vec![0usize; d.pow(s as u32)];
            let mut val = vec![T::zero(); delta.len()];
            for (combo, (dl, vl)) in delta.iter_mut().zip(val.iter_mut()).enumerate() {
                let mut total = C64::new(0.0, 0.0);
                let mut src_delta = None;
                for (w, rows) in &products {
                    let mut amp = c * *w;
                    let mut dd = 0usize;
                    for (pos, &k) in support.iter().enumerate() {
                        let digit = (combo >> (bits as usize * (s - 1 - pos))) & (d - 1);
                        match rows[codes[k].index()][digit] {
                            Some((col, v)) => {
                                amp *= v;
                                dd |= (digit ^ col) << shifts[pos];
                            }
                            None => {
                                amp = C64::new(0.0, 0.0);
                                break;
                            }
                        }
                    }
                    if amp != C64::new(0.0, 0.0) {
                        if src_delta.is_some_and(|x| x != dd) {
                            return Err(Error::Unsupported("expansion products with different patterns".into()));
                        }
                        src_delta = Some(dd);
                        total += amp;
                    }
                }
                let total = snap_relative(total, c.norm());
                *dl = src_delta.unwrap_or(0);
                *vl = T::from_c64(total).ok_or_else(|| Error::Unsupported("complex operator in a real kernel".into()))?;
            }
            terms.push(CompiledTerm { shifts, delta, val });
        }
        let constant = T::from_c64(constant).ok_or_else(|| Error::Unsupported("complex operator in a real kernel".into()))?;
        Ok(CompiledHamiltonian { n_sites: n, local_dim: d, dim, terms, constant, bound })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn spectral_bound(&self) -> f64 {
        self.bound
    }
}

fn snap_relative(z: C64, scale: f64) -> C64 {
    let clean = |x: f64| if x.abs() < 1e-14 * scale { 0.0 } else { x };
    C64::new(clean(z.re), clean(z.im))
}

impl<T: Scalar> LinearOperator<T> for CompiledHamiltonian<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mask = self.local_dim - 1;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, out)| {
            let base = chunk * CHUNK;
            for (o, xi) in out.iter_mut().zip(&x[base..]) {
                *o = self.constant * *xi;
            }
            for term in &self.terms {
                let bits = self.local_dim.trailing_zeros();
                for (off, o) in out.iter_mut().enumerate() {
                    let j = base + off;
                    let combo = term.shifts.iter().fold(0, |acc, sh| (acc << bits) | ((j >> sh) & mask));
                    *o += term.val[combo] * x[j ^ term.delta[combo]];
                }
            }
        });
    }
}

/// `Hv` without building `H`.
pub fn apply_hamiltonian(h: &HamiltonianSpec, v: &StateVector) -> Result<StateVector> {
    if v.n_sites() != h.n_sites() || v.local_dim() != h.local_dim() {
        return Err(Error::DimensionMismatch { expected: h.hilbert_dim().unwrap_or(0), got: v.dim() });
    }
    let op = CompiledHamiltonian::<C64>::new(h)?;
    let mut out = vec![C64::new(0.0, 0.0); v.dim()];
    op.apply(v.amps(), &mut out);
    StateVector::new(h.n_sites(), h.local_dim(), out)
}

/// Dense matrix wrapped as an operator, mostly for tests.
pub struct DenseOperator<T: Scalar>(pub nalgebra::DMatrix<T>);

impl<T: Scalar> LinearOperator<T> for DenseOperator<T> {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let n = self.0.nrows();
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..n).fold(T::zero(), |acc, j| acc + self.0[(i, j)] * x[j]);
        }
    }
}
