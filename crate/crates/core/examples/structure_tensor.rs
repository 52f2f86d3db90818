//! Prints the three structure tables and checks the algebraic identities.

use superham::pauli_algebra::{multiply_codes, structure_entry, BasisCode, Variant};
use superham::verify::{associativity_defect, commutation_defect};

fn main() {
    for variant in Variant::ALL {
        println!("{variant} table, nonzero entries Õ_α^(βγ):");
        for a in BasisCode::ALL {
            for b in BasisCode::ALL {
                for g in BasisCode::ALL {
                    let z = structure_entry(variant, a, b, g);
                    if z.norm() > 1e-14 {
                        println!("  α={a} β={b} γ={g}: {:+.4}{:+.4}i", z.re, z.im);
                    }
                }
            }
        }
    }
    println!("O_X O_Y = {:?}", multiply_codes(BasisCode::X, BasisCode::Y));
    println!("associativity defect {:.1e}", associativity_defect());
    println!("commutation defect   {:.1e}", commutation_defect());
}
