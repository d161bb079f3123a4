//! Quantum-link operators for a spin-S truncation under the logarithmic and linear encodings.
//!
//! Prints the encoded E and U for S=1, checks `[E, U] = U` on the physical states and
//! lists Pauli counts for a range of truncations.

use lgt::gauge::{physical_block, spin_pauli_counts, EncodedLink, SpinSystem};
use lgt::lattice::Encoding;

fn main() -> lgt::Result<()> {
    let spin = SpinSystem::new(1.0)?;
    for enc in [Encoding::Log, Encoding::Linear] {
        let link = EncodedLink::build(spin, enc, 0.0)?;
        println!("S=1 {enc:?} on {} qubits", link.n_qubits);
        println!("  E = {}", link.e);
        println!("  U = {}", link.u);
        let lhs = physical_block(&link.e.commutator(&link.u), spin, enc)?;
        let rhs = physical_block(&link.u, spin, enc)?;
        println!("  |[E,U] - U| on physical states = {:.1e}", (lhs - rhs).norm());
    }

    println!("\n   S   enc     Sx   Sy   Sz   S+");
    for s in [0.5, 1.0, 1.5, 3.5, 7.5] {
        for enc in [Encoding::Log, Encoding::Linear] {
            let c = spin_pauli_counts(SpinSystem::new(s)?, enc)?;
            println!("{s:>5} {:<7} {:>4} {:>4} {:>4} {:>4}", format!("{enc:?}"), c.sx, c.sy, c.sz, c.splus);
        }
    }
    Ok(())
}
