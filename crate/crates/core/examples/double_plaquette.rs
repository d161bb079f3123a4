//! Two plaquettes with a flux string along the bottom row: 19 qubits, Krylov reference against Trotter.

use lgt::dynamics::{trotter_evolve, ExactMethod, Ordering, Propagator, TrotterPlan};
use lgt::scenario::{initial_state, ScenarioConfig, ScenarioKind};

fn main() -> lgt::Result<()> {
    let cfg = ScenarioConfig::preset(ScenarioKind::DoublePlaquette2d);
    let sys = cfg.system()?;
    let (h, _) = sys.assemble(&cfg.model.params())?.drop_identity();
    println!("{} qubits, {} Pauli strings", sys.n_qubits(), h.len());
    let psi0 = initial_state(&cfg.initial_state, &sys)?;

    let total = 0.6;
    let exact = Propagator::new(&h, ExactMethod::Krylov)?.evolve(&psi0, total);
    let g_exact = psi0.inner(&exact).norm_sqr();
    println!("exact   G({total}) = {g_exact:.6}");
    for dt in [0.05, 0.025, 0.0125] {
        let plan = TrotterPlan::new(&[&h], dt, total, Ordering::Canonical)?;
        let mut s = psi0.clone();
        trotter_evolve(&mut s, &plan, |_, _, _| {});
        let g = psi0.inner(&s).norm_sqr();
        println!("dt={dt:<6} G({total}) = {g:.6}  |dG| = {:.2e}", (g - g_exact).abs());
    }
    Ok(())
}
