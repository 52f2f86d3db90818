//! Exact degeneracies and the evolution limit of the vacuum.

use superham::dense::{count_degeneracy_dense, evolution_limit_check, spectrum_of};
use superham::hamiltonian::{build_kitaev_hubbard, build_tfi, build_triangular_tfi, triangle_edges};
use superham::HamiltonianSpec;

fn main() -> superham::Result<()> {
    let cases: Vec<(&str, HamiltonianSpec, Option<f64>)> = vec![
        ("triangle AFM, bx=0", build_triangular_tfi(&triangle_edges(), 0.0)?, None),
        ("triangle AFM, bx=0.3", build_triangular_tfi(&triangle_edges(), 0.3)?, None),
        ("TFI n=8, bx=0", build_tfi(8, 0.0, 0.0)?, None),
        ("TFI n=8, bx=0.25, tol 1e-2", build_tfi(8, 0.25, 0.0)?, Some(1e-2)),
        ("Kitaev-Hubbard n=8, h=0.5, tol 1e-2", build_kitaev_hubbard(8, 0.5, 0.0)?, Some(1e-2)),
        ("identity n=4", HamiltonianSpec::identity(4, 1.0)?, None),
    ];
    for (name, h, tol) in &cases {
        let r = count_degeneracy_dense(h, *tol)?;
        let s = spectrum_of(h, *tol)?;
        println!("{name}: D = {}, E0 = {:.10}, tol {:.1e}", r.d_rounded, r.energy, s.tol_used);
    }
    let limit = evolution_limit_check(&cases[0].1, 1e-9)?;
    println!("triangle: vacuum projects onto encode(P_gs)/sqrt(D) to {:.1e}", limit.max_deviation);
    Ok(())
}
