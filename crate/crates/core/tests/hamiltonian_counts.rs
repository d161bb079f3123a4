use lgt::gauge::{spin_pauli_counts, SpinSystem};
use lgt::hamiltonian::GaussCharge;
use lgt::lattice::{qubit_totals, Boundary, Encoding, LatticeSpec};
use lgt::matter::MappingKind;
use lgt::resources::{cnot_per_trotter_step, link_counts_exact, link_counts_formula, log_sx_counts, predict_pauli_counts, u_classification};
use lgt::scenario::{ScenarioConfig, ScenarioKind};

fn vacuum_decay(mapping: MappingKind, charge: GaussCharge) -> (usize, usize) {
    let mut cfg = ScenarioConfig::preset(ScenarioKind::VacuumDecay);
    cfg.mapping = mapping;
    cfg.gauss_charge = charge;
    let t = cfg.system().unwrap().assemble(&cfg.model.params()).unwrap();
    (t.total.len(), cnot_per_trotter_step(&t.total))
}

#[test]
fn vacuum_decay_string_and_cnot_counts() {
    assert_eq!(vacuum_decay(MappingKind::JordanWigner, GaussCharge::Mapped), (466, 3302));
    assert_eq!(vacuum_decay(MappingKind::JordanWigner, GaussCharge::QubitOccupation), (466, 3302));
    assert_eq!(vacuum_decay(MappingKind::BravyiKitaev, GaussCharge::QubitOccupation).1, 3434);
    assert_eq!(vacuum_decay(MappingKind::Parity, GaussCharge::QubitOccupation).1, 3178);
}

#[test]
fn hamiltonian_is_hermitian_and_term_groups_add_up() {
    let cfg = ScenarioConfig::preset(ScenarioKind::DoublePlaquette2d);
    let sys = cfg.system().unwrap();
    assert_eq!(sys.n_qubits(), 19);
    let p = cfg.model.params();
    let t = sys.assemble(&p).unwrap();
    assert!(t.total.is_hermitian(1e-12));
    let sum = t.mass.add(&t.hopp_wilson).add(&t.elec).add(&t.plaq).add(&t.gauss.scale_re(p.lambda));
    assert!(sum.approx_eq(&t.total, 1e-10));
}

#[test]
fn per_link_counts_by_construction() {
    let table = [
        (0.5, [4, 1, 1, 8]),
        (1.0, [32, 4, 4, 15616]),
        (1.5, [12, 2, 2, 648]),
        (2.0, [80, 8, 8, 772096]),
        (3.0, [80, 8, 8, 772096]),
        (3.5, [32, 3, 4, 32768]),
    ];
    for (s, want) in table {
        let c = link_counts_exact(SpinSystem::new(s).unwrap(), Encoding::Log).unwrap();
        assert_eq!([c.hopping, c.e_op, c.e_sq, c.plaquette], want.map(|x| x as u128), "S={s}");
    }
}

#[test]
fn plaquette_counts_by_formula() {
    let table: [(f64, u128); 4] = [(7.5, 1_280_000), (15.5, 42_467_328), (31.5, 1_258_815_488), (63.5, 34_359_738_368)];
    for (s, want) in table {
        let c = link_counts_formula(SpinSystem::new(s).unwrap(), Encoding::Log).unwrap();
        assert_eq!(c.plaquette, want, "S={s}");
    }
    let big = link_counts_formula(SpinSystem::new(127.5).unwrap(), Encoding::Log).unwrap();
    assert!((big.plaquette as f64 / 9e11 - 1.0).abs() < 0.1);
    let top = link_counts_formula(SpinSystem::new(255.5).unwrap(), Encoding::Log).unwrap();
    assert_eq!([top.hopping, top.e_op, top.e_sq], [5120, 9, 37]);
    assert_eq!(top.plaquette, 21_474_836_480_000);
}

#[test]
fn formula_agrees_with_construction_for_small_spins() {
    for s in [0.5, 1.0, 1.5, 2.0, 3.5] {
        let spin = SpinSystem::new(s).unwrap();
        let a = link_counts_exact(spin, Encoding::Log).unwrap();
        let b = link_counts_formula(spin, Encoding::Log).unwrap();
        assert_eq!((a.hopping, a.plaquette), (b.hopping, b.plaquette), "S={s}");
    }
    let u = u_classification(SpinSystem::new(1.0).unwrap(), Encoding::Log).unwrap();
    assert_eq!(u.n_mixed, 4);
}

#[test]
fn register_tables() {
    let rows2: &[(&[usize], f64, u64, u64)] = &[
        (&[2, 3], 0.5, 12, 7),
        (&[2, 3], 1.0, 12, 14),
        (&[2, 3], 3.5, 12, 21),
        (&[4, 4], 0.5, 32, 24),
        (&[4, 4], 7.5, 32, 96),
        (&[10, 10], 3.5, 200, 540),
        (&[100, 100], 15.5, 20000, 99000),
        (&[2, 2, 2], 0.5, 32, 12),
        (&[4, 4, 4], 15.5, 256, 720),
        (&[10, 10, 10], 31.5, 4000, 16200),
        (&[100, 100, 100], 127.5, 4_000_000, 23_760_000),
        (&[100, 100, 100], 255.5, 4_000_000, 26_730_000),
    ];
    for &(ext, s, ferm, gauge) in rows2 {
        let spec = LatticeSpec::new(ext, Boundary::Open);
        let q = qubit_totals(&spec, SpinSystem::new(s).unwrap().two_s, Encoding::Log);
        assert_eq!((q.fermionic, q.gauge, q.total), (ferm, gauge, ferm + gauge), "{ext:?} S={s}");
    }
}

#[test]
fn lattice_totals_exact_and_predicted() {
    let r = 1.0;
    let cases = [
        (Boundary::Periodic, 1.0, 254_081u128, 253_617usize),
        (Boundary::Periodic, 1.5, 11_969, 11_969),
        (Boundary::Open, 1.5, 7_041, 7_041),
    ];
    for (b, s, formula, exact) in cases {
        let spec = LatticeSpec::new(&[4, 4], b);
        let spin = SpinSystem::new(s).unwrap();
        assert_eq!(predict_pauli_counts(&spec, spin, Encoding::Log, r).unwrap().total(), formula);
        let sys = lgt::hamiltonian::LatticeSystem::new(spec, spin, Encoding::Log, MappingKind::JordanWigner, &[0.0, 0.0]).unwrap();
        let t = sys.assemble(&lgt::hamiltonian::ModelParams::new(0.5, r, 0.5, 1.0)).unwrap();
        let without_gauss = t.mass.add(&t.hopp_wilson).add(&t.elec).add(&t.plaq);
        assert_eq!(without_gauss.len(), exact, "{b:?} S={s}");
    }
}

#[test]
fn log_encoding_scaling() {
    let pts = log_sx_counts(10).unwrap();
    assert_eq!(pts.len(), 10);
    let (_, b, _) = lgt::gauge::fit_scaling(&pts.iter().map(|&(d, n)| (d as f64, n as f64)).collect::<Vec<_>>());
    assert!((1.7..=2.0).contains(&b), "linear coefficient {b}");
    for k in 1..=8u32 {
        let spin = SpinSystem { two_s: (1u64 << k) - 1 };
        assert_eq!(spin_pauli_counts(spin, Encoding::Log).unwrap().sz, k as usize);
    }
}
