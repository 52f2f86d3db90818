//! Self-checks of the algebra and of the solvers against the dense oracle.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dense::{correspondence_check, count_degeneracy_dense, to_dense};
use crate::error::Result;
use crate::hamiltonian::{build_triangular_tfi, random_two_local, triangle_edges, HamiltonianSpec, RandomKind};
use crate::kernel::apply_hamiltonian;
use crate::lanczos::{count_degeneracy_lanczos, LanczosConfig};
use crate::pauli_algebra::{build_basis, StructureTensor, Variant};
use crate::super_map::{encode_operator, lift, LiftVariant};
use crate::C64;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Largest deviation found, or the number of failures for batteries.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
}

/// `max |Σ_λ S_{αλ}^μ S_{βν}^λ − Σ_γ S_{αβ}^γ S_{γν}^μ|` over all indices.
pub fn associativity_defect() -> f64 {
    let s = StructureTensor::pauli();
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for nu in 0..4 {
                for mu in 0..4 {
                    let lhs: C64 = (0..4).map(|l| s.product(a, l, mu) * s.product(b, nu, l)).sum();
                    let rhs: C64 = (0..4).map(|g| s.product(a, b, g) * s.product(g, nu, mu)).sum();
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Largest mismatch between `[O_α, O_β]`, `[Õ_α, Õ_β]` (left lift) and their
/// expansions with the antisymmetrized constants `S_{αβ}^γ − S_{βα}^γ`.
pub fn commutation_defect() -> f64 {
    let s = StructureTensor::pauli();
    let basis = build_basis(2).expect("qubit basis");
    let codes = crate::pauli_algebra::BasisCode::ALL;
    let lifted: Vec<Matrix4<C64>> = codes.iter().map(|&c| s.lifted_matrix(Variant::Left, c)).collect();
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let (oa, ob) = (basis.matrix(codes[a]), basis.matrix(codes[b]));
            let comm = oa * ob - ob * oa;
            let lcomm = lifted[a] * lifted[b] - lifted[b] * lifted[a];
            let mut expand = Matrix2::zeros();
            let mut lexpand = Matrix4::zeros();
            for g in 0..4 {
                let k = s.product(a, b, g) - s.product(b, a, g);
                expand += basis.matrix(codes[g]) * k;
                lexpand += lifted[g] * k;
            }
            worst = worst.max((comm - expand).norm()).max((lcomm - lexpand).norm());
        }
    }
    worst
}

fn random_pairs(count: usize, seed: u64) -> Result<Vec<(DMatrix<C64>, DMatrix<C64>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % 2;
            let a = to_dense(&random_two_local(n, RandomKind::Hermitian, &mut rng)?)?;
            let b = to_dense(&random_two_local(n, RandomKind::Hermitian, &mut rng)?)?;
            Ok((a, b))
        })
        .collect()
}

/// `max |⟨A|B⟩ − Tr(A†B)|` over random 2- and 3-qubit pairs.
pub fn inner_product_defect(count: usize, seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (a, b) in random_pairs(count, seed)? {
        let lhs = encode_operator(&a)?.inner(&encode_operator(&b)?);
        let rhs = (a.adjoint() * &b).trace();
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok(worst)
}

/// Largest deviation of `H̃_L|H′⟩ = |HH′⟩` and `H̃_R|H′⟩ = |H′H⟩` over random
/// 2- and 3-qubit pairs, relative to the norm of the product.
pub fn multiplication_defect(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let n = 2 + i % 2;
        let h = random_two_local(n, RandomKind::Hermitian, &mut rng)?;
        let hp = to_dense(&random_two_local(n, RandomKind::Hermitian, &mut rng)?)?;
        let m = to_dense(&h)?;
        let state = encode_operator(&hp)?;
        for (variant, product) in [(LiftVariant::Left, &m * &hp), (LiftVariant::Right, &hp * &m)] {
            let got = apply_hamiltonian(&lift(&h, variant)?, &state)?;
            let want = encode_operator(&product)?;
            let err = got.amps().iter().zip(want.amps()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(err / want.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Number of random Hermitian 2-local Hamiltonians (`n ∈ {2, 3}`) whose left
/// or averaged lift fails the predicted spectrum.
pub fn spectrum_battery(count: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for i in 0..count {
        let h = random_two_local(2 + i % 2, RandomKind::Hermitian, &mut rng)?;
        for variant in [LiftVariant::Left, LiftVariant::Averaged] {
            if !correspondence_check(&h, variant)?.passed {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

/// The deliberately degenerate toy set with its known degeneracies.
pub fn toy_set() -> Result<Vec<(String, HamiltonianSpec, u64)>> {
    Ok(vec![
        ("identity n=3".into(), HamiltonianSpec::identity(3, 1.0)?, 8),
        ("triangle AFM".into(), build_triangular_tfi(&triangle_edges(), 0.0)?, 6),
        ("zero n=4".into(), HamiltonianSpec::zero(4)?, 16),
    ])
}

/// Failures of Lanczos-on-lift against the dense oracle: random real 2-local
/// Hamiltonians with `n` cycling through 2..=5, then the toy set. A case
/// fails if the rounded degeneracies differ or the residual reaches 0.1.
pub fn oracle_battery(count: usize, seed: u64) -> Result<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases: Vec<(String, HamiltonianSpec, Option<u64>)> = Vec::new();
    for i in 0..count {
        let n = 2 + i % 4;
        cases.push((format!("random #{i} n={n}"), random_two_local(n, RandomKind::RealSymmetric, &mut rng)?, None));
    }
    for (name, h, d) in toy_set()? {
        cases.push((name, h, Some(d)));
    }
    let cfg = LanczosConfig::default();
    let mut failures = Vec::new();
    for (name, h, known) in cases {
        let oracle = count_degeneracy_dense(&h, None)?.d_rounded;
        let r = count_degeneracy_lanczos(&h, &cfg)?;
        let expected = known.unwrap_or(oracle);
        if r.d_rounded != oracle || r.d_rounded != expected || r.residual >= 0.1 {
            failures.push(format!("{name}: lanczos {} ({:.4}), dense {oracle}, expected {expected}", r.d_rounded, r.d_raw));
        }
    }
    Ok(failures)
}

/// Every check with its default size.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    let battery = oracle_battery(100, seed)?;
    for f in &battery {
        log::warn!("{f}");
    }
    Ok(vec![
        Check::new("structure-tensor associativity", associativity_defect(), 1e-12),
        Check::new("commutation match", commutation_defect(), 1e-12),
        Check::new("encoded inner product", inner_product_defect(100, seed)?, 1e-10),
        Check::new("lifted multiplication", multiplication_defect(100, seed)?, 1e-10),
        Check::new("spectrum correspondence failures", spectrum_battery(50, seed)? as f64, 0.0),
        Check::new("lanczos vs dense failures", battery.len() as f64, 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebraic_identities_hold() {
        assert!(associativity_defect() < 1e-12);
        assert!(commutation_defect() < 1e-12);
        assert!(inner_product_defect(10, 1).unwrap() < 1e-10);
        assert!(multiplication_defect(10, 1).unwrap() < 1e-10);
    }

    #[test]
    fn small_batteries_pass() {
        assert_eq!(spectrum_battery(4, 2).unwrap(), 0);
        assert!(oracle_battery(4, 3).unwrap().is_empty());
    }
}
