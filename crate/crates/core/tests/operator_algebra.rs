use lgt::gauge::{encode_log, physical_block, spin_matrices, EncodedLink, SpinSystem};
use lgt::lattice::Encoding;
use lgt::matter::{FermionMapping, MappingKind};
use lgt::pauli::{PauliOperator, C64};
use nalgebra::DMatrix;

const MAPPINGS: [MappingKind; 3] = [MappingKind::JordanWigner, MappingKind::Parity, MappingKind::BravyiKitaev];
const SPINS: [f64; 7] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn mapped_fermions_anticommute_up_to_eight_modes() {
    for kind in MAPPINGS {
        for n in 1..=8 {
            let f = FermionMapping::new(kind, n);
            let rep = f.anticommutator_check();
            assert!(rep.holds(), "{kind:?} n={n}: {:?}", rep.violations);
            assert!(rep.max_error < 1e-12);
        }
    }
}

// Dense cross-check: build a_j as explicit matrices and compare the anticommutators entrywise.
#[test]
fn mapped_fermions_anticommute_as_matrices() {
    for kind in MAPPINGS {
        for n in 1..=6 {
            let f = FermionMapping::new(kind, n);
            let a: Vec<DMatrix<C64>> = (0..n).map(|j| f.annihilation(j).unwrap().to_matrix().unwrap()).collect();
            let id = DMatrix::<C64>::identity(1 << n, 1 << n);
            for i in 0..n {
                for j in 0..n {
                    let adj = a[j].adjoint();
                    let ac = &a[i] * &adj + &adj * &a[i];
                    let want = if i == j { id.clone() } else { DMatrix::zeros(1 << n, 1 << n) };
                    assert!(max_abs(&(ac - want)) < 1e-12, "{kind:?} n={n} ({i},{j})");
                    assert!(max_abs(&(&a[i] * &a[j] + &a[j] * &a[i])) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn number_operators_are_projectors() {
    for kind in MAPPINGS {
        let f = FermionMapping::new(kind, 5);
        for j in 0..5 {
            let nj = f.number(j).unwrap();
            assert!(nj.mul(&nj).sub(&nj).norm1() < 1e-12);
            assert!(nj.is_hermitian(1e-12));
        }
    }
}

#[test]
fn qlm_relations_hold_on_physical_subspace() {
    for enc in [Encoding::Log, Encoding::Linear] {
        for s in SPINS {
            let spin = SpinSystem::new(s).unwrap();
            let link = EncodedLink::build(spin, enc, 0.0).unwrap();
            let blk = |op: &PauliOperator| physical_block(op, spin, enc).unwrap();

            let eu = blk(&link.e.commutator(&link.u));
            let u = blk(&link.u);
            assert!(max_abs(&(eu - &u)) < 1e-12, "[E,U] S={s} {enc:?}");

            let uu = blk(&link.u.commutator(&link.u_dag));
            let rhs = blk(&link.e) * c(2.0 / spin.casimir(), 0.0);
            assert!(max_abs(&(uu - rhs)) < 1e-12, "[U,U†] S={s} {enc:?}");

            let e_sq = blk(&link.e_sq);
            let e = blk(&link.e);
            assert!(max_abs(&(e_sq - &e * &e)) < 1e-12);
        }
    }
}

#[test]
fn physical_subspace_is_invariant() {
    for enc in [Encoding::Log, Encoding::Linear] {
        for s in SPINS {
            let spin = SpinSystem::new(s).unwrap();
            let link = EncodedLink::build(spin, enc, 0.0).unwrap();
            let full = link.u.to_matrix().unwrap();
            let phys = lgt::gauge::physical_indices(spin, enc);
            for col in &phys {
                for row in 0..full.nrows() {
                    if !phys.contains(&row) {
                        assert!(full[(row, *col)].norm() < 1e-12, "U leaks out of the window: S={s} {enc:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn theta_shifts_only_the_electric_field() {
    let spin = SpinSystem::new(1.0).unwrap();
    let a = EncodedLink::build(spin, Encoding::Log, 0.0).unwrap();
    let b = EncodedLink::build(spin, Encoding::Log, 0.5).unwrap();
    assert!(a.u.approx_eq(&b.u, 1e-14));
    let de = physical_block(&b.e.sub(&a.e), spin, Encoding::Log).unwrap();
    assert!(max_abs(&(de - DMatrix::identity(3, 3) * c(0.5, 0.0))) < 1e-14);
}

#[test]
fn spin_one_decomposition_term_for_term() {
    let sm = spin_matrices(SpinSystem::new(1.0).unwrap());
    let q = 0.25;
    let h = 1.0 / (2.0 * 2f64.sqrt());
    let sx = encode_log(&sm.sx).unwrap();
    let sy = encode_log(&sm.sy).unwrap();
    let want_x = PauliOperator::parse(&[
        (c(q, 0.0), "II"),
        (c(-q, 0.0), "IZ"),
        (c(-q, 0.0), "ZI"),
        (c(q, 0.0), "ZZ"),
        (c(h, 0.0), "IX"),
        (c(h, 0.0), "XX"),
        (c(h, 0.0), "YY"),
        (c(h, 0.0), "ZX"),
    ])
    .unwrap();
    let want_y = PauliOperator::parse(&[
        (c(q, 0.0), "II"),
        (c(-q, 0.0), "IZ"),
        (c(-q, 0.0), "ZI"),
        (c(q, 0.0), "ZZ"),
        (c(h, 0.0), "IY"),
        (c(h, 0.0), "YX"),
        (c(-h, 0.0), "XY"),
        (c(h, 0.0), "ZY"),
    ])
    .unwrap();
    assert_eq!(sx.len(), 8);
    assert_eq!(sy.len(), 8);
    assert!(sx.approx_eq(&want_x, 1e-14), "Sx = {sx}");
    assert!(sy.approx_eq(&want_y, 1e-14), "Sy = {sy}");

    let raising = sx.add(&sy.scale(c(0.0, 1.0)));
    let mixed: Vec<_> = raising.terms().iter().filter(|(_, z)| z.re.abs() > 1e-14 && z.im.abs() > 1e-14).collect();
    assert_eq!(mixed.len(), 4);
    for (axes, sign) in [("II", 1.0), ("IZ", -1.0), ("ZI", -1.0), ("ZZ", 1.0)] {
        let z = raising.coeff_of(axes);
        assert!((z - c(sign * q, sign * q)).norm() < 1e-14, "{axes}: {z}");
    }
}
