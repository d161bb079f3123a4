//! Pair creation out of the vacuum on a periodic three-site chain.
//!
//! Evolves the vacuum exactly and prints the most likely configurations at a few times.
//! Labels list the sites (o vacuum, p particle, a antiparticle, b both) and then the link fluxes.

use lgt::dynamics::{config_probabilities, loschmidt, observables, ExactMethod, Propagator};
use lgt::scenario::{initial_state, ScenarioConfig, ScenarioKind};

fn main() -> lgt::Result<()> {
    let cfg = ScenarioConfig::preset(ScenarioKind::VacuumDecay);
    let sys = cfg.system()?;
    let h = sys.assemble(&cfg.model.params())?.total;
    let psi0 = initial_state(&cfg.initial_state, &sys)?;
    let prop = Propagator::new(&h, ExactMethod::Krylov)?;

    for t in [0.0, 0.2, 0.4, 1.0] {
        let s = prop.evolve(&psi0, t);
        let obs = observables(&s, &sys);
        println!("t = {t:.1}: G = {:.4}, particle number = {:.4}", loschmidt(&psi0, &s)?, obs.particle_number);
        let dist = config_probabilities(&s, &sys, 7);
        for (label, p) in &dist.entries {
            println!("    {label:<12} {:>7.3}%", 100.0 * p);
        }
        println!("    {:<12} {:>7.3}%", "other", 100.0 * dist.other);
    }
    Ok(())
}
