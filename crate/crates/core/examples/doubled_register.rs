//! The doubled-register overlap `1/√D` from imaginary-time evolution, and the
//! convergence of the qubit and lifted evolutions.

use superham::hamiltonian::build_tfi;
use superham::ite::{convergence_curves, qite_overlap_check};
use superham::{HamiltonianSpec, PauliTerm};

/// Two copies of a 2-qubit block with a three-fold lowest level, plus a
/// field on a fifth qubit: nine ground states.
fn nine_fold() -> superham::Result<HamiltonianSpec> {
    let terms = ["ZIIII", "IZIII", "ZZIII", "IIZII", "IIIZI", "IIZZI", "IIIIZ"]
        .iter()
        .map(|s| PauliTerm::from_str(1.0, s))
        .collect::<superham::Result<Vec<_>>>()?;
    HamiltonianSpec::new(5, terms)
}

fn main() -> superham::Result<()> {
    let ov = qite_overlap_check(&nine_fold()?, 0.01, 10.0, 1)?;
    println!("nine-fold model: overlap {ov:.6}, 1/overlap² = {:.4}", 1.0 / (ov * ov));
    let ov = qite_overlap_check(&build_tfi(4, 0.0, 0.0)?, 0.01, 20.0, 1)?;
    println!("TFI n=4, bx=0: overlap {ov:.6} (1/√2 = {:.6})", 0.5f64.sqrt());

    let (q, l) = convergence_curves(&build_tfi(4, 0.0, 0.0)?, 0.01, 30.0, 1)?;
    println!("{:>6} {:>12} {:>12} {:>9} {:>9}", "tau", "de(H)", "de(H~)", "D(H)", "D(H~)");
    for (a, b) in q.samples.iter().zip(&l.samples).step_by(20) {
        println!("{:>6.2} {:>12.3e} {:>12.3e} {:>9.5} {:>9.5}", a.tau, a.delta_e, b.delta_e, a.d_raw, b.d_raw);
    }
    Ok(())
}
