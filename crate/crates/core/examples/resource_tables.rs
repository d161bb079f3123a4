//! Per-link Pauli counts versus truncation, and qubit registers for large lattices.

use lgt::gauge::SpinSystem;
use lgt::lattice::{qubit_totals, Boundary, Encoding, LatticeSpec};
use lgt::resources::{link_counts_exact, link_counts_formula, predict_pauli_counts};

fn main() -> lgt::Result<()> {
    println!("    S   hopping   E  E^2       plaquette");
    for s in [0.5, 1.0, 1.5, 2.0, 3.5, 7.5, 15.5, 31.5, 63.5, 127.5, 255.5] {
        let spin = SpinSystem::new(s)?;
        let c = if s <= 3.5 { link_counts_exact(spin, Encoding::Log)? } else { link_counts_formula(spin, Encoding::Log)? };
        println!("{s:>5} {:>9} {:>3} {:>4} {:>15}", c.hopping, c.e_op, c.e_sq, c.plaquette);
    }

    println!("\nlattice          S   qubits (fermionic + gauge)");
    for (ext, s) in [(vec![4, 4], 1.0), (vec![100, 100], 15.5), (vec![100, 100, 100], 255.5)] {
        let q = qubit_totals(&LatticeSpec::new(&ext, Boundary::Open), SpinSystem::new(s)?.two_s, Encoding::Log);
        println!("{:<15} {s:>5} {:>9} ({} + {})", format!("{ext:?}"), q.total, q.fermionic, q.gauge);
    }

    let spec = LatticeSpec::new(&[4, 4], Boundary::Periodic);
    let p = predict_pauli_counts(&spec, SpinSystem::new(1.0)?, Encoding::Log, 1.0)?;
    println!("\n4x4 periodic, S=1: {p:?}, total {}", p.total());
    Ok(())
}
