//! One first-order Trotter step of the string-breaking Hamiltonian as an OpenQASM 2.0 circuit.

use lgt::circuits::{export_qasm, synth_trotter_step};
use lgt::scenario::{ScenarioConfig, ScenarioKind};

fn main() -> lgt::Result<()> {
    let cfg = ScenarioConfig::preset(ScenarioKind::StringBreaking1d);
    let (h, _) = cfg.system()?.assemble(&cfg.model.params())?.drop_identity();
    let step = synth_trotter_step(&h, cfg.dt[0])?;
    let c = step.counts();
    println!("// {} strings -> {} CNOTs, {} single-qubit gates, depth {}", h.len(), c.cnot, c.single_qubit, c.depth);
    for line in export_qasm(&step).lines().take(24) {
        println!("{line}");
    }
    println!("// ...");
    Ok(())
}
