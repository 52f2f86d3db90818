//! Operators as ququart states: encoding, inner products and lifted products.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superham::dense::to_dense;
use superham::hamiltonian::{random_two_local, RandomKind};
use superham::kernel::apply_hamiltonian;
use superham::super_map::{decode_state, encode_operator, lift, vacuum_state, LiftVariant};

fn main() -> superham::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = random_two_local(3, RandomKind::Hermitian, &mut rng)?;
    let g = random_two_local(3, RandomKind::Hermitian, &mut rng)?;
    let (a, b) = (to_dense(&h)?, to_dense(&g)?);

    let (ea, eb) = (encode_operator(&a)?, encode_operator(&b)?);
    println!("<A|B> = {:.10}", ea.inner(&eb));
    println!("Tr(A†B) = {:.10}", (a.adjoint() * &b).trace());

    let round_trip = (decode_state(&ea)? - &a).norm();
    println!("decode(encode(A)) error {round_trip:.1e}");

    for (variant, want) in [
        (LiftVariant::Left, &a * &b),
        (LiftVariant::Right, &b * &a),
        (LiftVariant::Averaged, (&a * &b + &b * &a) * superham::C64::from(0.5)),
    ] {
        let got = apply_hamiltonian(&lift(&h, variant)?, &eb)?;
        let err = (decode_state(&got)? - want).norm();
        println!("{variant} lift acting on |B>: error {err:.1e}");
    }

    let vac = decode_state(&vacuum_state(3)?)?;
    println!("vacuum decodes to I/2^(n/2): diagonal {:.6}", vac[(0, 0)].re);
    Ok(())
}
