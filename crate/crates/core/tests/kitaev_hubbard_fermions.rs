//! The spin chain built by `build_kitaev_hubbard` against the fermionic
//! Hamiltonian assembled directly in Fock space.

use nalgebra::DMatrix;
use superham::dense::spectrum_of;
use superham::hamiltonian::build_kitaev_hubbard;

/// Annihilator of mode `j` on `n` modes; occupation of mode `k` is bit `k`.
fn annihilator(n: usize, j: usize) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        if x >> j & 1 == 1 {
            let sign = if (x & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(x ^ 1 << j, x)] = sign;
        }
    }
    m
}

/// `Σ [-(c†_j c_{j+1} + h.c.) + (c_j c_{j+1} + h.c.)] - h Σ (2n_j - 1)
///  + u Σ (2n_j - 1)(2n_{j+1} - 1)`.
fn fermionic(n: usize, h: f64, u: f64) -> DMatrix<f64> {
    let c: Vec<DMatrix<f64>> = (0..n).map(|j| annihilator(n, j)).collect();
    let id = DMatrix::<f64>::identity(1 << n, 1 << n);
    let z: Vec<DMatrix<f64>> = c.iter().map(|cj| cj.transpose() * cj * 2.0 - &id).collect();
    let mut m = DMatrix::zeros(1 << n, 1 << n);
    for j in 0..n - 1 {
        let hop = c[j].transpose() * &c[j + 1];
        let pair = &c[j] * &c[j + 1];
        m += -(&hop + hop.transpose()) + &pair + pair.transpose();
        m += &z[j] * &z[j + 1] * u;
    }
    for zj in &z {
        m -= zj * h;
    }
    m
}

#[test]
fn anticommutation_of_the_oracle() {
    let n = 4;
    let c: Vec<DMatrix<f64>> = (0..n).map(|j| annihilator(n, j)).collect();
    for a in 0..n {
        for b in 0..n {
            let anti = &c[a] * c[b].transpose() + c[b].transpose() * &c[a];
            let want = if a == b { DMatrix::identity(1 << n, 1 << n) } else { DMatrix::zeros(1 << n, 1 << n) };
            assert!((anti - want).norm() < 1e-14);
            assert!((&c[a] * &c[b] + &c[b] * &c[a]).norm() < 1e-14);
        }
    }
}

#[test]
fn spin_chain_matches_fermions() {
    for (n, h, u) in [(4, 0.5, 0.0), (5, 1.5, 0.0), (6, 0.7, 0.3), (6, 1.2, -0.4)] {
        let mut want: Vec<f64> = fermionic(n, h, u).symmetric_eigen().eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let got = spectrum_of(&build_kitaev_hubbard(n, h, u).unwrap(), None).unwrap().eigenvalues;
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "n={n} h={h} u={u}: {a} vs {b}");
        }
    }
}

#[test]
fn edge_modes_pair_the_ground_level() {
    let n = 8;
    for (h, paired) in [(0.5, true), (1.5, false)] {
        let mut e: Vec<f64> = fermionic(n, h, 0.0).symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        let (split, gap) = (e[1] - e[0], e[2] - e[0]);
        assert_eq!(split < 1e-2 && gap > 0.1, paired, "h={h}: split {split}, gap {gap}");
    }
}
