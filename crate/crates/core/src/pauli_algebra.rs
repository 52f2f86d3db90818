//! Single-site operator basis and its structure tensor.
//!
//! The basis is the normalized Pauli set `O_α = σ_α / √2`, orthonormal under
//! the Hilbert–Schmidt product `X·Y = Tr(X† Y)`. The structure tensor
//! `Õ_α^{βγ} = Tr(O_β† O_α O_γ)` turns every basis element into a 4×4 matrix
//! acting on the ququart that labels the basis itself.

use std::fmt;
use std::sync::LazyLock;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Index of a basis operator: 0 = identity, 1 = x, 2 = y, 3 = z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisCode(u8);

impl BasisCode {
    pub const IDENTITY: BasisCode = BasisCode(0);
    pub const X: BasisCode = BasisCode(1);
    pub const Y: BasisCode = BasisCode(2);
    pub const Z: BasisCode = BasisCode(3);
    pub const ALL: [BasisCode; 4] = [Self::IDENTITY, Self::X, Self::Y, Self::Z];

    pub fn new(code: u8) -> Result<Self> {
        if code < 4 {
            Ok(BasisCode(code))
        } else {
            Err(Error::InvalidCode(code))
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '0' => Some(Self::IDENTITY),
            'X' | '1' => Some(Self::X),
            'Y' | '2' => Some(Self::Y),
            'Z' | '3' => Some(Self::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }
}

impl fmt::Display for BasisCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Unnormalized Pauli matrix `σ_α`.
pub fn pauli_matrix(code: BasisCode) -> Matrix2<C64> {
    match code.0 {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        _ => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

/// An orthonormal operator basis for one site.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    matrices: [Matrix2<C64>; 4],
}

/// Builds the normalized Pauli basis for a qubit site.
pub fn build_basis(local_dim: usize) -> Result<OperatorBasis> {
    if local_dim != 2 {
        return Err(Error::UnsupportedDimension(local_dim));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let matrices = BasisCode::ALL.map(|c| pauli_matrix(c) * C64::from(s));
    Ok(OperatorBasis { matrices })
}

impl OperatorBasis {
    pub fn matrix(&self, code: BasisCode) -> &Matrix2<C64> {
        &self.matrices[code.index()]
    }

    pub fn hilbert_schmidt(a: &Matrix2<C64>, b: &Matrix2<C64>) -> C64 {
        (a.adjoint() * b).trace()
    }

    /// Expands an arbitrary 2×2 operator in this basis.
    pub fn expand(&self, m: &Matrix2<C64>) -> [C64; 4] {
        BasisCode::ALL.map(|c| Self::hilbert_schmidt(self.matrix(c), m))
    }
}

/// Which ordering of the product defines the lifted operator.
///
/// `Left` lifts `O_α` to left multiplication (`H̃|A⟩ = |HA⟩`), `Right` to right
/// multiplication (`|AH⟩`), and `Averaged` is the mean of the two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Left,
    Right,
    #[default]
    Averaged,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Left, Variant::Right, Variant::Averaged];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Left => "left",
            Variant::Right => "right",
            Variant::Averaged => "averaged",
        })
    }
}

type Table = [[[C64; 4]; 4]; 4];

/// All three variants of `Õ_α^{βγ}`, indexed `[α][β][γ]`.
#[derive(Clone, Debug)]
pub struct StructureTensor {
    left: Table,
    right: Table,
    averaged: Table,
}

static STRUCTURE: LazyLock<StructureTensor> =
    LazyLock::new(|| StructureTensor::new(&build_basis(2).expect("qubit basis")));

impl StructureTensor {
    pub fn new(basis: &OperatorBasis) -> Self {
        let mut left = [[[ZERO; 4]; 4]; 4];
        let mut right = [[[ZERO; 4]; 4]; 4];
        let mut averaged = [[[ZERO; 4]; 4]; 4];
        for a in BasisCode::ALL {
            for b in BasisCode::ALL {
                for g in BasisCode::ALL {
                    let (oa, ob, og) = (basis.matrix(a), basis.matrix(b), basis.matrix(g));
                    let l = (ob.adjoint() * oa * og).trace();
                    let r = (ob.adjoint() * og * oa).trace();
                    let (ai, bi, gi) = (a.index(), b.index(), g.index());
                    left[ai][bi][gi] = l;
                    right[ai][bi][gi] = r;
                    averaged[ai][bi][gi] = (l + r) * 0.5;
                }
            }
        }
        StructureTensor { left, right, averaged }
    }

    /// Shared table for the normalized Pauli basis.
    pub fn pauli() -> &'static StructureTensor {
        &STRUCTURE
    }

    fn table(&self, variant: Variant) -> &Table {
        match variant {
            Variant::Left => &self.left,
            Variant::Right => &self.right,
            Variant::Averaged => &self.averaged,
        }
    }

    pub fn entry(&self, variant: Variant, alpha: BasisCode, beta: BasisCode, gamma: BasisCode) -> C64 {
        self.table(variant)[alpha.index()][beta.index()][gamma.index()]
    }

    /// `Õ_α` as a 4×4 matrix with row `β` and column `γ`.
    pub fn lifted_matrix(&self, variant: Variant, alpha: BasisCode) -> Matrix4<C64> {
        let t = &self.table(variant)[alpha.index()];
        Matrix4::from_fn(|b, g| t[b][g])
    }

    /// Multiplication constant `S_{αβ}^γ` defined by `O_α O_β = Σ_γ S_{αβ}^γ O_γ`.
    #[inline]
    pub fn product(&self, alpha: usize, beta: usize, gamma: usize) -> C64 {
        self.left[alpha][gamma][beta]
    }
}

/// `Õ_α^{βγ}` for the normalized Pauli basis.
pub fn structure_entry(variant: Variant, alpha: BasisCode, beta: BasisCode, gamma: BasisCode) -> C64 {
    StructureTensor::pauli().entry(variant, alpha, beta, gamma)
}

/// Expansion of `O_α O_γ` in the basis, nonzero coefficients only.
pub fn multiply_codes(alpha: BasisCode, gamma: BasisCode) -> Vec<(BasisCode, C64)> {
    let s = StructureTensor::pauli();
    BasisCode::ALL
        .into_iter()
        .filter_map(|b| {
            let c = s.entry(Variant::Left, alpha, b, gamma);
            (c.norm() > 1e-14).then_some((b, c))
        })
        .collect()
}
