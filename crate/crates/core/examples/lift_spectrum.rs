//! Spectrum of each lift against the prediction from the spectrum of H.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superham::dense::{correspondence_check, spectrum_of};
use superham::hamiltonian::{build_tfi, random_two_local, RandomKind};
use superham::super_map::{lift, LiftVariant};

fn main() -> superham::Result<()> {
    let h = build_tfi(2, 0.3, 0.1)?;
    println!("H: {:?}", spectrum_of(&h, None)?.eigenvalues);
    for variant in [LiftVariant::Left, LiftVariant::Averaged] {
        let s = spectrum_of(&lift(&h, variant)?, None)?;
        println!("{variant} lift: {:?}", s.eigenvalues);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..5 {
        let r = random_two_local(2 + i % 2, RandomKind::Hermitian, &mut rng)?;
        for variant in LiftVariant::ALL {
            let rep = correspondence_check(&r, variant)?;
            println!("random #{i} {variant}: passed {} (max deviation {:.1e})", rep.passed, rep.max_deviation);
        }
    }
    Ok(())
}
