//! How far a tiny longitudinal field must grow before the power method sees
//! the ferromagnetic pair as split.
//!
//! Usage: `field_resolution [n] [points] [max_steps]` (defaults 20, 13, 200000).

use superham::mps::{resolution_experiment, PowerConfig};

fn main() -> superham::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(20);
    let points = args.get(1).copied().unwrap_or(13);
    let bz: Vec<f64> = (0..points).map(|i| 1e-8 * 1e6f64.powf(i as f64 / (points - 1) as f64)).collect();
    let max_steps = args.get(2).copied().unwrap_or(200_000);
    let rows = resolution_experiment(n, &bz, &PowerConfig { max_steps, ..Default::default() })?;
    println!("{:>10} {:>10} {:>3} {:>10} {:>10} {:>6}", "bz", "D_raw", "D", "delta_e", "n*bz/de", "steps");
    for r in rows {
        println!(
            "{:>10.2e} {:>10.6} {:>3} {:>10.3e} {:>10.3e} {:>6}",
            r.bz, r.d_raw, r.d_rounded, r.delta_e, r.gap_over_delta_e, r.steps
        );
    }
    Ok(())
}
