//! Acceptance run: one pass/fail line per criterion.
//!
//! `cargo test --release --test acceptance` runs everything; criterion numbers
//! given after `--` select a subset, e.g. `-- 1 2 8`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use superham::dense::{count_degeneracy_dense, count_degeneracy_diagonal};
use superham::hamiltonian::{build_kitaev_hubbard, build_tfi, build_triangular_tfi, three_hexagon_edges, triangle_edges};
use superham::ite::{convergence_curves, qite_overlap_check, ItePath};
use superham::lanczos::{count_degeneracy_lanczos, LanczosConfig};
use superham::mps::{count_degeneracy_mps, resolution_experiment, PowerConfig};
use superham::verify::{
    associativity_defect, commutation_defect, inner_product_defect, multiplication_defect, oracle_battery,
    spectrum_battery,
};
use superham::{HamiltonianSpec, PauliTerm};

type Outcome = superham::Result<(bool, String)>;

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

const SEED: u64 = 20240;

fn algebra() -> Outcome {
    let (assoc, comm) = (associativity_defect(), commutation_defect());
    let inner = inner_product_defect(100, SEED)?;
    let mult = multiplication_defect(100, SEED)?;
    let ok = assoc <= 1e-12 && comm <= 1e-12 && inner <= 1e-10 && mult <= 1e-10;
    Ok((ok, format!("assoc {assoc:.1e}, comm {comm:.1e}, inner {inner:.1e}, mult {mult:.1e}")))
}

fn spectrum() -> Outcome {
    let failures = spectrum_battery(50, SEED)?;
    Ok((failures == 0, format!("{failures} of 100 lifted spectra off")))
}

fn oracle() -> Outcome {
    let failures = oracle_battery(100, SEED)?;
    let detail = match failures.first() {
        Some(f) => format!("{} failures, first: {f}", failures.len()),
        None => "103 cases agree".into(),
    };
    Ok((failures.is_empty(), detail))
}

/// Index of the single step from `hi` to `lo` in `d`, if `d` is `hi…hi lo…lo`.
fn single_step(d: &[u64], hi: u64, lo: u64) -> Option<usize> {
    let k = d.iter().position(|&x| x != hi)?;
    (k > 0 && d[k..].iter().all(|&x| x == lo)).then_some(k)
}

fn tfi_sweep() -> Outcome {
    let cfg = PowerConfig { chi_max: 30, ..Default::default() };
    let bx: Vec<f64> = (0..21).map(|i| i as f64 * 0.05).collect();
    let d = bx
        .par_iter()
        .map(|&b| Ok(count_degeneracy_mps(&build_tfi(20, b, 0.0)?, &cfg)?.d_rounded))
        .collect::<superham::Result<Vec<u64>>>()?;
    let ordered = bx.iter().zip(&d).all(|(b, d)| (*b > 0.4 + 1e-9 || *d == 2) && (*b < 0.6 - 1e-9 || *d == 1));
    let step = single_step(&d, 2, 1);
    let inside = step.is_some_and(|k| bx[k - 1] >= 0.4 - 1e-9 && bx[k] <= 0.6 + 1e-9);
    let at = step.map_or("none".into(), |k| format!("({:.2}, {:.2})", bx[k - 1], bx[k]));
    Ok((ordered && inside, format!("D = {d:?}, step in {at}")))
}

fn field_resolution() -> Outcome {
    let n = 20;
    let bz: Vec<f64> = (0..25).map(|i| 1e-8 * 10f64.powf(i as f64 / 4.0)).collect();
    let cfg = PowerConfig { max_steps: 200_000, ..Default::default() };
    let rows = resolution_experiment(n, &bz, &cfg)?;
    let d: Vec<u64> = rows.iter().map(|r| r.d_rounded).collect();
    let Some(k) = single_step(&d, 2, 1) else {
        return Ok((false, format!("no single 2 -> 1 step: D = {d:?}")));
    };
    let transition = (bz[k - 1] * bz[k]).sqrt();
    let ratio: Vec<f64> = rows.iter().map(|r| r.gap_over_delta_e).collect();
    let Some(j) = (1..rows.len()).find(|&j| ratio[j - 1] < 1.0 && ratio[j] >= 1.0) else {
        return Ok((false, format!("n*bz never crosses delta_e: {ratio:.3?}")));
    };
    let t = (0.0 - ratio[j - 1].ln()) / (ratio[j].ln() - ratio[j - 1].ln());
    let crossing = (bz[j - 1].ln() + t * (bz[j].ln() - bz[j - 1].ln())).exp();
    let decades = (transition / crossing).log10();
    Ok((
        decades.abs() <= 1.0,
        format!("step at bz {transition:.2e}, n*bz = delta_e at {crossing:.2e} ({decades:+.2} decades)"),
    ))
}

fn kitaev_hubbard() -> Outcome {
    let cfg = LanczosConfig { resolution: Some(1e-2), ..Default::default() };
    let mut parts = Vec::new();
    let mut ok = true;
    for (h, want) in [(0.5, 2), (1.5, 1)] {
        let model = build_kitaev_hubbard(10, h, 0.0)?;
        let r = count_degeneracy_lanczos(&model, &cfg)?;
        let oracle = count_degeneracy_dense(&model, Some(1e-2))?.d_rounded;
        ok &= r.d_rounded == want && oracle == want;
        parts.push(format!("h={h}: D {} (raw {:.4}), dense {oracle}", r.d_rounded, r.d_raw));
    }
    Ok((ok, parts.join("; ")))
}

fn triangle() -> Outcome {
    let cfg = LanczosConfig::default();
    let mut d = Vec::new();
    let mut dense = Vec::new();
    for bx in [0.0, 0.1, 0.2, 0.3] {
        let h = build_triangular_tfi(&triangle_edges(), bx)?;
        d.push(count_degeneracy_lanczos(&h, &cfg)?.d_rounded);
        dense.push(count_degeneracy_dense(&h, None)?.d_rounded);
    }
    let ok = d == [6, 1, 1, 1] && dense == d;
    Ok((ok, format!("bx 0, 0.1, 0.2, 0.3: D = {d:?}, dense {dense:?}")))
}

fn three_hexagons() -> Outcome {
    let edges = three_hexagon_edges();
    let exact = count_degeneracy_diagonal(&build_triangular_tfi(&edges, 0.0)?, None)?.d_rounded;
    let cfg = PowerConfig { chi_max: 40, ..Default::default() };
    let fields = [0.0, 0.2, 0.5, 0.7];
    let d = fields
        .iter()
        .map(|&bx| Ok(count_degeneracy_mps(&build_triangular_tfi(&edges, bx)?, &cfg)?.d_rounded))
        .collect::<superham::Result<Vec<u64>>>()?;
    let ok = exact == 18 && d == [18, 2, 2, 1];
    Ok((ok, format!("enumeration {exact}; lift at bx {fields:?}: D = {d:?}")))
}

/// Two copies of a two-qubit block with a threefold lowest level, plus a
/// field on a fifth qubit.
fn nine_fold() -> superham::Result<HamiltonianSpec> {
    let terms = ["ZIIII", "IZIII", "ZZIII", "IIZII", "IIIZI", "IIZZI", "IIIIZ"]
        .iter()
        .map(|s| PauliTerm::from_str(1.0, s))
        .collect::<superham::Result<Vec<_>>>()?;
    HamiltonianSpec::new(5, terms)
}

fn doubled_register() -> Outcome {
    let nine = nine_fold()?;
    let d9 = count_degeneracy_dense(&nine, None)?.d_rounded;
    let a = qite_overlap_check(&nine, 0.01, 12.0, SEED)?;
    let b = qite_overlap_check(&build_tfi(4, 0.0, 0.0)?, 0.01, 20.0, SEED)?;
    let ok = d9 == 9 && (a - 1.0 / 3.0).abs() <= 1e-3 && (b - 0.5f64.sqrt()).abs() <= 1e-3;
    Ok((ok, format!("D=9 model: {a:.6} (want 1/3); TFI n=4: {b:.6} (want 1/sqrt 2)")))
}

/// Slope of `-ln(delta_e)` against `tau` over the samples in `[lo, hi]`.
fn decay_rate(path: &ItePath, lo: f64, hi: f64) -> f64 {
    let pts: Vec<(f64, f64)> = path
        .samples
        .iter()
        .filter(|s| s.delta_e >= lo && s.delta_e <= hi)
        .map(|s| (s.tau, -s.delta_e.ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Non-increasing until below `floor`, and below `floor` at the end.
fn monotone_to(path: &ItePath, floor: f64) -> bool {
    let s = &path.samples;
    let k = s.iter().position(|x| x.delta_e < floor).unwrap_or(s.len());
    k < s.len() && s[..=k].windows(2).all(|w| w[1].delta_e <= w[0].delta_e) && s[k..].iter().all(|x| x.delta_e < floor)
}

fn convergence() -> Outcome {
    let h = build_tfi(4, 0.0, 0.0)?;
    let oracle = count_degeneracy_dense(&h, None)?.d_rounded as f64;
    let (q, l) = convergence_curves(&h, 0.01, 30.0, SEED)?;
    let monotone = monotone_to(&q, 1e-6) && monotone_to(&l, 1e-6);
    let settled = [&q, &l].iter().all(|p| p.last().is_some_and(|s| (s.d_raw - oracle).abs() <= 1e-3));
    let (rq, rl) = (decay_rate(&q, 1e-10, 1e-4), decay_rate(&l, 1e-10, 1e-4));
    let slower = rl <= rq * 1.01;
    let settle = |p: &ItePath| p.samples.iter().find(|s| (s.d_raw - oracle).abs() <= 1e-3).map(|s| s.tau);
    Ok((
        monotone && settled && slower,
        format!(
            "monotone {monotone}, D settled {settled} (tau {:?} qubit, {:?} lifted), decay rate {rq:.4} qubit, {rl:.4} lifted",
            settle(&q),
            settle(&l)
        ),
    ))
}

fn criteria() -> Vec<Criterion> {
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    vec![
        Criterion { id: "1", name: "algebraic identities", limit: Some(Duration::from_secs(10)), run: algebra },
        Criterion { id: "2", name: "spectrum correspondence", limit: min(2), run: spectrum },
        Criterion { id: "3", name: "oracle equivalence battery", limit: min(5), run: oracle },
        Criterion { id: "4", name: "TFI n=20 degeneracy across bx", limit: min(30), run: tfi_sweep },
        Criterion { id: "5", name: "field resolution at bx=0", limit: None, run: field_resolution },
        Criterion { id: "6", name: "Kitaev-Hubbard n=10", limit: min(10), run: kitaev_hubbard },
        Criterion { id: "7", name: "triangle cluster", limit: None, run: triangle },
        Criterion { id: "7b", name: "three-hexagon cluster (conditional)", limit: None, run: three_hexagons },
        Criterion { id: "8", name: "doubled-register overlap", limit: min(1), run: doubled_register },
        Criterion { id: "9", name: "imaginary-time convergence", limit: None, run: convergence },
    ]
}

fn main() -> ExitCode {
    let picked: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in criteria() {
        if !picked.is_empty() && !picked.iter().any(|p| p == c.id) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let (ok, detail) = match result {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = c.limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!(
            "[{}] {:<3} {}: {detail} ({:.1}s{limit})",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
