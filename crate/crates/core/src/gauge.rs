//! Spin-S quantum links and their qubit encodings.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};

use crate::error::{LgtError, Result};
use crate::lattice::{qubits_per_link, Encoding};
use crate::pauli::{Axes, PauliAxis, PauliOperator, C64};

/// Spin S stored as the integer 2S.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinSystem {
    pub two_s: u64,
}

impl SpinSystem {
    pub fn new(s: f64) -> Result<Self> {
        let t = 2.0 * s;
        if !(t >= 1.0) || (t - t.round()).abs() > 1e-9 {
            return Err(LgtError::InvalidSpin(s));
        }
        Ok(SpinSystem { two_s: t.round() as u64 })
    }

    pub fn s(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    /// `m` value of basis index `k` (index 0 is m = S).
    pub fn m(&self, k: usize) -> f64 {
        self.s() - k as f64
    }

    pub fn casimir(&self) -> f64 {
        let s = self.s();
        s * (s + 1.0)
    }

    pub fn perfectly_representable(&self) -> bool {
        self.dim().is_power_of_two()
    }
}

#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub sx: DMatrix<C64>,
    pub sy: DMatrix<C64>,
    pub sz: DMatrix<C64>,
    pub splus: DMatrix<C64>,
}

pub fn spin_matrices(spin: SpinSystem) -> SpinMatrices {
    let d = spin.dim();
    let mut splus = DMatrix::<C64>::zeros(d, d);
    let mut sz = DMatrix::<C64>::zeros(d, d);
    for k in 0..d {
        let m = spin.m(k);
        sz[(k, k)] = C64::new(m, 0.0);
        if k > 0 {
            splus[(k - 1, k)] = C64::new((spin.casimir() - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let sminus = splus.adjoint();
    let sx = (&splus + &sminus) * C64::new(0.5, 0.0);
    let sy = (&splus - &sminus) * C64::new(0.0, -0.5);
    SpinMatrices { sx, sy, sz, splus }
}

/// Pads a d×d matrix to the next power of two with an identity block and decomposes it.
pub fn encode_log(m: &DMatrix<C64>) -> Result<PauliOperator> {
    let d = m.nrows();
    let nq = qubits_per_link(d as u64 - 1, Encoding::Log) as usize;
    let dim = 1usize << nq;
    let mut p = DMatrix::<C64>::identity(dim, dim);
    p.view_mut((0, 0), (d, d)).copy_from(m);
    PauliOperator::decompose_matrix(&p)
}

fn raise(n: usize, q: usize) -> PauliOperator {
    // |1><0|
    PauliOperator::from_terms(
        n,
        vec![
            (Axes::from_sparse(n, &[(q, PauliAxis::X)]), C64::new(0.5, 0.0)),
            (Axes::from_sparse(n, &[(q, PauliAxis::Y)]), C64::new(0.0, -0.5)),
        ],
    )
}

fn occupied(n: usize, q: usize) -> PauliOperator {
    PauliOperator::from_terms(
        n,
        vec![(Axes::identity(n), C64::new(0.5, 0.0)), (Axes::from_sparse(n, &[(q, PauliAxis::Z)]), C64::new(-0.5, 0.0))],
    )
}

/// One-hot encoding on d qubits; spin index k (m = S - k) lives on qubit d-1-k.
pub fn encode_lin(m: &DMatrix<C64>) -> PauliOperator {
    let d = m.nrows();
    let q = |k: usize| d - 1 - k;
    let mut parts = Vec::new();
    for k in 0..d {
        for l in 0..d {
            let c = m[(k, l)];
            if c.norm() == 0.0 {
                continue;
            }
            let op = if k == l { occupied(d, q(k)) } else { raise(d, q(k)).mul(&raise(d, q(l)).dagger()) };
            parts.push(op.scale(c));
        }
    }
    crate::pauli::sum_operators(d, parts.iter())
}

pub fn encode(m: &DMatrix<C64>, enc: Encoding) -> Result<PauliOperator> {
    match enc {
        Encoding::Log => encode_log(m),
        Encoding::Linear => Ok(encode_lin(m)),
    }
}

/// Computational-basis indices of the physical (in-window) spin states, in spin order.
pub fn physical_indices(spin: SpinSystem, enc: Encoding) -> Vec<usize> {
    match enc {
        Encoding::Log => (0..spin.dim()).collect(),
        Encoding::Linear => (0..spin.dim()).map(|k| 1usize << k).collect(),
    }
}

/// Restriction of an encoded single-link operator to the physical subspace.
pub fn physical_block(op: &PauliOperator, spin: SpinSystem, enc: Encoding) -> Result<DMatrix<C64>> {
    let full = op.to_matrix()?;
    let idx = physical_indices(spin, enc);
    Ok(DMatrix::from_fn(idx.len(), idx.len(), |r, c| full[(idx[r], idx[c])]))
}

/// Basis index of the link register holding flux `m` (units of e, before the θ offset).
pub fn flux_index(spin: SpinSystem, enc: Encoding, m: f64) -> Result<usize> {
    let k = spin.s() - m;
    if k < -1e-9 || k > spin.two_s as f64 + 1e-9 || (k - k.round()).abs() > 1e-9 {
        return Err(LgtError::Unphysical(format!("flux {m} outside the spin-{} window", spin.s())));
    }
    Ok(physical_indices(spin, enc)[k.round() as usize])
}

/// Encoded operators of one quantum link. `e` and `e_sq` are in units of the charge e.
#[derive(Clone, Debug)]
pub struct EncodedLink {
    pub spin: SpinSystem,
    pub encoding: Encoding,
    pub theta: f64,
    pub n_qubits: usize,
    pub e: PauliOperator,
    pub e_sq: PauliOperator,
    pub u: PauliOperator,
    pub u_dag: PauliOperator,
}

impl EncodedLink {
    pub fn build(spin: SpinSystem, enc: Encoding, theta: f64) -> Result<Self> {
        let sm = spin_matrices(spin);
        let d = spin.dim();
        let shifted = &sm.sz + DMatrix::<C64>::identity(d, d) * C64::new(theta, 0.0);
        let norm = C64::new(1.0 / spin.casimir().sqrt(), 0.0);
        let (e, e_sq, u) = match enc {
            Encoding::Log => {
                let e = encode_log(&shifted)?;
                let e_sq = encode_log(&(&shifted * &shifted))?;
                let u = encode_log(&sm.sx)?.add(&encode_log(&sm.sy)?.scale(C64::new(0.0, 1.0))).scale(norm);
                (e, e_sq, u)
            }
            Encoding::Linear => {
                let e = encode_lin(&shifted);
                let e_sq = e.mul(&e);
                let u = encode_lin(&sm.splus).scale(norm);
                (e, e_sq, u)
            }
        };
        let u_dag = u.dagger();
        Ok(EncodedLink { spin, encoding: enc, theta, n_qubits: e.n_qubits(), e, e_sq, u, u_dag })
    }

    /// Shared instance from a process-wide cache keyed by (2S, encoding, θ).
    pub fn cached(spin: SpinSystem, enc: Encoding, theta: f64) -> Result<Arc<Self>> {
        type Cache = RwLock<HashMap<(u64, Encoding, u64), Arc<EncodedLink>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (spin.two_s, enc, theta.to_bits());
        if let Some(l) = cache.read().expect("link cache poisoned").get(&key) {
            return Ok(l.clone());
        }
        let link = Arc::new(Self::build(spin, enc, theta)?);
        Ok(cache.write().expect("link cache poisoned").entry(key).or_insert(link).clone())
    }
}

/// Pauli-string counts of the encoded spin operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinCounts {
    pub sx: usize,
    pub sy: usize,
    pub sz: usize,
    pub splus: usize,
}

pub fn spin_pauli_counts(spin: SpinSystem, enc: Encoding) -> Result<SpinCounts> {
    let sm = spin_matrices(spin);
    Ok(SpinCounts {
        sx: encode(&sm.sx, enc)?.len(),
        sy: encode(&sm.sy, enc)?.len(),
        sz: encode(&sm.sz, enc)?.len(),
        splus: encode(&sm.splus, enc)?.len(),
    })
}

/// Least-squares fit `n ≈ a·d^{log2 3} + b·d + c`; returns (a, b, c).
pub fn fit_scaling(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let p = 3f64.log2();
    let a = DMatrix::from_fn(points.len(), 3, |r, c| match c {
        0 => points[r].0.powf(p),
        1 => points[r].0,
        _ => 1.0,
    });
    let y = DVector::from_iterator(points.len(), points.iter().map(|t| t.1));
    let sol = a.svd(true, true).solve(&y, 1e-12).expect("svd with both factors");
    (sol[0], sol[1], sol[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(s: f64) -> SpinSystem {
        SpinSystem::new(s).unwrap()
    }

    fn close(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let sm = spin_matrices(spin(0.5));
        let h = C64::new(0.5, 0.0);
        let x = DMatrix::from_row_slice(2, 2, &[C64::default(), h, h, C64::default()]);
        assert!(close(&sm.sx, &x, 1e-15));
        assert_eq!(sm.sz[(0, 0)], h);
        assert_eq!(sm.sz[(1, 1)], -h);
        assert!((sm.sy[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn spin_algebra() {
        for two_s in 1..=7 {
            let sp = SpinSystem { two_s };
            let sm = spin_matrices(sp);
            let i = C64::new(0.0, 1.0);
            let comm = &sm.sx * &sm.sy - &sm.sy * &sm.sx - &sm.sz * i;
            assert!(comm.iter().all(|z| z.norm() < 1e-14), "2S={two_s}");
            let cas = &sm.sx * &sm.sx + &sm.sy * &sm.sy + &sm.sz * &sm.sz;
            let want = DMatrix::<C64>::identity(sp.dim(), sp.dim()) * C64::new(sp.casimir(), 0.0);
            assert!(close(&cas, &want, 1e-12));
        }
    }

    #[test]
    fn invalid_spin() {
        assert!(SpinSystem::new(0.3).is_err());
        assert!(SpinSystem::new(0.0).is_err());
        assert_eq!(SpinSystem::new(1.5).unwrap().dim(), 4);
    }

    #[test]
    fn log_sz_examples() {
        let sz = encode_log(&spin_matrices(spin(0.5)).sz).unwrap();
        assert_eq!(sz.len(), 1);
        assert_eq!(sz.coeff_of("Z"), C64::new(0.5, 0.0));
        let sz = encode_log(&spin_matrices(spin(1.5)).sz).unwrap();
        assert_eq!(sz.len(), 2);
        assert!(sz.terms().iter().all(|t| t.0.support() == 1));
    }

    #[test]
    fn linear_counts() {
        let sm = spin_matrices(spin(1.0));
        let sx = encode_lin(&sm.sx);
        assert_eq!(sx.len(), 4);
        assert!(sx.terms().iter().all(|t| t.0.support() == 2));
        assert_eq!(encode_lin(&sm.sz).len(), 2);
        for two_s in 1..=15u64 {
            let sp = SpinSystem { two_s };
            let c = spin_pauli_counts(sp, Encoding::Linear).unwrap();
            assert_eq!(c.sx as u64, 2 * two_s);
            assert_eq!(c.sy as u64, 2 * two_s);
            let d = two_s + 1;
            assert_eq!(c.sz as u64, if d % 2 == 0 { d } else { d - 1 });
        }
    }

    #[test]
    fn linear_projection_reproduces_splus() {
        let sp = spin(1.5);
        let sm = spin_matrices(sp);
        let block = physical_block(&encode_lin(&sm.splus), sp, Encoding::Linear).unwrap();
        assert!(close(&block, &sm.splus, 1e-12));
    }

    #[test]
    fn flux_indices() {
        let sp = spin(1.0);
        assert_eq!(flux_index(sp, Encoding::Log, 1.0).unwrap(), 0);
        assert_eq!(flux_index(sp, Encoding::Log, 0.0).unwrap(), 1);
        assert_eq!(flux_index(sp, Encoding::Log, -1.0).unwrap(), 2);
        assert!(flux_index(sp, Encoding::Log, 2.0).is_err());
        assert_eq!(flux_index(sp, Encoding::Linear, 0.0).unwrap(), 2);
    }

    #[test]
    fn link_operators_spin_half() {
        let l = EncodedLink::build(spin(0.5), Encoding::Log, 0.0).unwrap();
        assert_eq!(l.e_sq.len(), 1);
        assert_eq!(l.u.classify().n_mixed, 0);
        let l = EncodedLink::build(spin(0.5), Encoding::Log, 0.5).unwrap();
        let b = physical_block(&l.e, l.spin, l.encoding).unwrap();
        assert!((b[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(b[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = EncodedLink::cached(spin(1.0), Encoding::Log, 0.0).unwrap();
        let b = EncodedLink::cached(spin(1.0), Encoding::Log, 0.0).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn fit_recovers_coefficients() {
        let p = 3f64.log2();
        let pts: Vec<(f64, f64)> = (1..8).map(|k| {
            let d = (1u64 << k) as f64;
            (d, 2.0 * d.powf(p) + 1.5 * d - 3.0)
        }).collect();
        let (a, b, c) = fit_scaling(&pts);
        assert!((a - 2.0).abs() < 1e-8 && (b - 1.5).abs() < 1e-7 && (c + 3.0).abs() < 1e-6);
    }
}
