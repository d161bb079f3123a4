//! Jordan-Wigner, parity and Bravyi-Kitaev images of the fermionic ladder operators.

use lgt::matter::{encode_occupations, FermionMapping, MappingKind};
use lgt::pauli::C64;

fn main() -> lgt::Result<()> {
    let n = 4;
    for kind in [MappingKind::JordanWigner, MappingKind::Parity, MappingKind::BravyiKitaev] {
        let f = FermionMapping::new(kind, n);
        println!("{kind:?}");
        for j in 0..n {
            println!("  a_{j} = {}", f.annihilation(j)?);
        }
        let hop = f.map_bilinear(1, 3, C64::new(1.0, 0.0))?.plus_hc();
        println!("  a+_1 a_3 + h.c. = {hop}  (max support {})", hop.max_support());
        let rep = f.anticommutator_check();
        println!("  anticommutators hold: {} (max error {:.1e})", rep.holds(), rep.max_error);
        let occ = [true, false, true, true];
        let bits: String = encode_occupations(kind, &occ).iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("  occupation 1011 -> qubits {bits}");
    }
    Ok(())
}
