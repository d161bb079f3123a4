//! A flux string between two static charges: heavy fermions keep it, light ones break it.

use lgt::dynamics::{ExactMethod, Propagator};
use lgt::scenario::{initial_state, ScenarioConfig, ScenarioKind};

fn survival(m: f64) -> lgt::Result<Vec<f64>> {
    let mut cfg = ScenarioConfig::preset(ScenarioKind::StringBreaking1d);
    cfg.model.m = m;
    let sys = cfg.system()?;
    let h = sys.assemble(&cfg.model.params())?.total;
    let psi0 = initial_state(&cfg.initial_state, &sys)?;
    let prop = Propagator::new(&h, ExactMethod::Krylov)?;
    let mut s = psi0.clone();
    let mut g = vec![1.0];
    for _ in 0..20 {
        s = prop.evolve(&s, 0.1);
        g.push(psi0.inner(&s).norm_sqr());
    }
    Ok(g)
}

fn main() -> lgt::Result<()> {
    let e = ScenarioConfig::preset(ScenarioKind::StringBreaking1d).model.e;
    let heavy = survival(5.0 * e)?;
    let light = survival(e / 5.0)?;
    println!("   t   m=5e     m=e/5");
    for (k, (a, b)) in heavy.iter().zip(&light).enumerate() {
        println!("{:>4.1}  {a:.4}   {b:.4}", 0.1 * k as f64);
    }
    Ok(())
}
