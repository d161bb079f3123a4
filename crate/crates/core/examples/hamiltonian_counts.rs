//! Assembles the three-site Schwinger-model Hamiltonian and breaks down its Pauli and CNOT counts.

use lgt::hamiltonian::GaussCharge;
use lgt::matter::MappingKind;
use lgt::resources::{cnot_per_trotter_step, support_histogram};
use lgt::scenario::{ScenarioConfig, ScenarioKind};

fn main() -> lgt::Result<()> {
    let mut cfg = ScenarioConfig::preset(ScenarioKind::VacuumDecay);
    let sys = cfg.system()?;
    let p = cfg.model.params();
    let t = sys.assemble(&p)?;
    println!("{} qubits ({} fermionic, {} gauge), lambda = {}", sys.n_qubits(), sys.layout.n_fermionic, sys.layout.n_gauge, p.lambda);
    for (name, op) in [("mass", &t.mass), ("hopping+wilson", &t.hopp_wilson), ("electric", &t.elec), ("plaquette", &t.plaq), ("gauss", &t.gauss), ("total", &t.total)] {
        println!("  {name:<15} {:>5} strings {:>6} CNOTs", op.len(), cnot_per_trotter_step(op));
    }
    println!("  support histogram: {:?}", support_histogram(&t.total));

    cfg.gauss_charge = GaussCharge::QubitOccupation;
    for mapping in [MappingKind::JordanWigner, MappingKind::Parity, MappingKind::BravyiKitaev] {
        cfg.mapping = mapping;
        let h = cfg.system()?.assemble(&p)?.total;
        println!("{mapping:?}: {} strings, {} CNOTs per Trotter step", h.len(), cnot_per_trotter_step(&h));
    }
    Ok(())
}
