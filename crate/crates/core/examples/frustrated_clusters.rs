//! Frustrated antiferromagnets: the triangle and the three-hexagon cluster.
//!
//! Usage: `frustrated_clusters [bx...]` (fields for the cluster, default 0).

use superham::dense::count_degeneracy_diagonal;
use superham::hamiltonian::{build_triangular_tfi, three_hexagon_edges, triangle_edges};
use superham::lanczos::{count_degeneracy_lanczos, LanczosConfig};
use superham::mps::{count_degeneracy_mps, PowerConfig};

fn main() -> superham::Result<()> {
    let fields: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let fields = if fields.is_empty() { vec![0.0] } else { fields };
    let cfg = LanczosConfig::default();
    for bx in [0.0, 0.05, 0.1, 0.2, 0.3] {
        let h = build_triangular_tfi(&triangle_edges(), bx)?;
        let r = count_degeneracy_lanczos(&h, &cfg)?;
        println!("triangle bx={bx:.2}: D = {} (raw {:.6})", r.d_rounded, r.d_raw);
    }

    let edges = three_hexagon_edges();
    let h = build_triangular_tfi(&edges, 0.0)?;
    println!("three hexagons: {} sites, {} bonds", h.n_sites(), edges.len());
    let exact = count_degeneracy_diagonal(&h, None)?;
    println!("  bx=0 enumeration: D = {}", exact.d_rounded);
    let cfg = PowerConfig { chi_max: 40, ..Default::default() };
    for bx in fields {
        let r = count_degeneracy_mps(&build_triangular_tfi(&edges, bx)?, &cfg)?;
        println!(
            "  bx={bx:.2} power method on the lift: D = {} (raw {:.6}, {} steps, converged {})",
            r.d_rounded, r.d_raw, r.steps, r.converged
        );
    }
    Ok(())
}
