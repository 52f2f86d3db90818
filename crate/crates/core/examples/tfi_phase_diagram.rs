//! Degeneracy and pinned magnetization of the open TFI chain across bx.
//!
//! Usage: `tfi_phase_diagram [n] [chi] [points] [out.csv]` (defaults 20, 30, 21).

use superham::hamiltonian::build_tfi;
use superham::mps::{count_degeneracy_mps, pinned_magnetization, PowerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map(|a| a.parse()).transpose()?.unwrap_or(20);
    let chi: usize = args.get(1).map(|a| a.parse()).transpose()?.unwrap_or(30);
    let points: usize = args.get(2).map(|a| a.parse()).transpose()?.unwrap_or(21);
    let cfg = PowerConfig { chi_max: chi, ..Default::default() };

    let mut out = args.get(3).map(csv::Writer::from_path).transpose()?;
    if let Some(w) = out.as_mut() {
        w.write_record(["bx", "D_raw", "D_rounded", "delta_e", "steps", "converged", "sz_mid"])?;
    }
    println!("{:>6} {:>10} {:>3} {:>10} {:>6} {:>9}", "bx", "D_raw", "D", "delta_e", "steps", "<Sz>");
    for i in 0..points {
        let bx = i as f64 / (points - 1).max(1) as f64;
        let r = count_degeneracy_mps(&build_tfi(n, bx, 0.0)?, &cfg)?;
        let sz = pinned_magnetization(&build_tfi(n, bx, 0.0)?, 1e-5, &cfg)?;
        println!("{bx:>6.3} {:>10.6} {:>3} {:>10.3e} {:>6} {:>9.5}", r.d_raw, r.d_rounded, r.delta_e, r.steps, sz);
        if let Some(w) = out.as_mut() {
            w.serialize((bx, r.d_raw, r.d_rounded, r.delta_e, r.steps, r.converged, sz))?;
        }
    }
    Ok(())
}
