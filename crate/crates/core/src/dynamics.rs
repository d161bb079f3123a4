//! Statevector evolution: Pauli exponentials, Trotter steps, exact propagation and readout.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LgtError, Result};
use crate::gauge::{flux_index, physical_indices};
use crate::hamiltonian::LatticeSystem;
use crate::matter::encode_occupations;
use crate::pauli::{i_pow, Axes, PauliOperator, C64};

/// Largest register evolved with a dense eigendecomposition.
pub const DENSE_EVOLVE_LIMIT: usize = 12;
/// Registers up to this size use the dense path under `ExactMethod::Auto`.
pub const AUTO_DENSE_LIMIT: usize = 8;
/// Largest register evolved at all.
pub const STATE_LIMIT: usize = 24;

const PAR_THRESHOLD: usize = 1 << 13;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > STATE_LIMIT {
            return Err(LgtError::SizeLimit { what: "statevector qubits", size: n_qubits, limit: STATE_LIMIT });
        }
        let mut amps = vec![C64::default(); 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amps(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(LgtError::NotPowerOfTwo(amps.len()));
        }
        Ok(StateVector { n_qubits: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn expectation(&self, h: &CompiledOperator) -> f64 {
        let hv = h.apply(&self.amps);
        self.amps.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }
}

#[inline]
fn parity_sign(x: usize) -> f64 {
    if x.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `state ← exp(−iθP)·state` for a bare Pauli string P.
pub fn apply_pauli_exp(state: &mut StateVector, p: &Axes, theta: f64) {
    assert_eq!(p.n_qubits(), state.n_qubits, "Pauli string length does not match state");
    let (xm, zm, ny) = p.masks();
    let (xm, zm) = (xm as usize, zm as usize);
    let (c, s) = (theta.cos(), theta.sin());
    let amps = &mut state.amps;
    if xm == 0 {
        let plus = C64::new(c, -s);
        let minus = C64::new(c, s);
        let f = |(j, a): (usize, &mut C64)| *a *= if (j & zm).count_ones() % 2 == 0 { plus } else { minus };
        if amps.len() >= PAR_THRESHOLD {
            amps.par_iter_mut().enumerate().for_each(f);
        } else {
            amps.iter_mut().enumerate().for_each(f);
        }
        return;
    }
    let ip = i_pow((ny % 4) as u8);
    let ms = C64::new(0.0, -s);
    let top = 1usize << (usize::BITS - 1 - xm.leading_zeros());
    let block = top << 1;
    let kernel = |base: usize, chunk: &mut [C64]| {
        for lo in 0..block {
            if lo & top != 0 {
                continue;
            }
            let hi = lo ^ xm;
            let (j, k) = (base + lo, base + hi);
            let (aj, ak) = (chunk[lo], chunk[hi]);
            // P|k> = ip (-1)^{k·z} |j>
            let pj = ip * parity_sign(k & zm) * ak;
            let pk = ip * parity_sign(j & zm) * aj;
            chunk[lo] = aj * c + ms * pj;
            chunk[hi] = ak * c + ms * pk;
        }
    };
    if amps.len() >= PAR_THRESHOLD && amps.len() / block >= 2 {
        amps.par_chunks_mut(block).enumerate().for_each(|(b, ch)| kernel(b * block, ch));
    } else {
        amps.chunks_mut(block).enumerate().for_each(|(b, ch)| kernel(b * block, ch));
    }
}

/// Operator pre-processed for fast matrix-free application.
#[derive(Clone, Debug)]
pub struct CompiledOperator {
    pub n_qubits: usize,
    groups: Vec<(usize, Vec<(usize, C64)>)>,
}

impl CompiledOperator {
    pub fn new(op: &PauliOperator) -> Self {
        let mut map: HashMap<usize, Vec<(usize, C64)>> = HashMap::new();
        for (a, c) in op.terms() {
            let (xm, zm, ny) = a.masks();
            map.entry(xm as usize).or_default().push((zm as usize, c * i_pow((ny % 4) as u8)));
        }
        let mut groups: Vec<_> = map.into_iter().collect();
        groups.sort_by_key(|g| g.0);
        CompiledOperator { n_qubits: op.n_qubits(), groups }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::default(); v.len()];
        self.apply_into(v, &mut out);
        out
    }

    pub fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        let row = |i: usize| -> C64 {
            let mut acc = C64::default();
            for (xm, terms) in &self.groups {
                let src = i ^ xm;
                let a = v[src];
                if a == C64::default() {
                    continue;
                }
                let mut f = C64::default();
                for &(zm, c) in terms {
                    f += c * parity_sign(src & zm);
                }
                acc += f * a;
            }
            acc
        };
        if v.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(|(i, o)| *o = row(i));
        } else {
            out.iter_mut().enumerate().for_each(|(i, o)| *o = row(i));
        }
    }

    /// Diagonal value on a basis state; only meaningful for I/Z operators.
    pub fn diagonal(&self, index: usize) -> f64 {
        self.groups
            .iter()
            .filter(|g| g.0 == 0)
            .flat_map(|g| g.1.iter())
            .map(|&(zm, c)| c.re * parity_sign(index & zm))
            .sum()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn tridiagonal_exp_e1(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<C64> {
    let m = alpha.len();
    let mut tri = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        tri[(i, i)] = alpha[i];
        if i + 1 < m {
            tri[(i, i + 1)] = beta[i];
            tri[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(tri);
    (0..m)
        .map(|r| {
            (0..m)
                .map(|k| eig.eigenvectors[(r, k)] * eig.eigenvectors[(0, k)] * C64::new(0.0, -eig.eigenvalues[k] * tau).exp())
                .sum()
        })
        .collect()
}

/// Krylov (Lanczos) propagation `exp(−iHt)|v>`; the subspace grows until the error estimate meets `tol`,
/// and the step is split when 40 vectors do not suffice.
pub fn krylov_evolve(h: &CompiledOperator, v: &[C64], t: f64, tol: f64) -> Vec<C64> {
    const M_MAX: usize = 40;
    let mut psi = v.to_vec();
    let mut remaining = t;
    let mut tau = t;
    while remaining.abs() > 1e-15 {
        tau = tau.abs().min(remaining.abs()).copysign(remaining);
        let beta0 = norm(&psi);
        if beta0 == 0.0 {
            return psi;
        }
        let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|a| a / beta0).collect()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![C64::default(); psi.len()];
        let coeffs = loop {
            let j = alpha.len();
            h.apply_into(&basis[j], &mut w);
            let a: f64 = basis[j].iter().zip(&w).map(|(x, y)| x.conj() * y).sum::<C64>().re;
            alpha.push(a);
            for _ in 0..2 {
                for q in &basis {
                    let proj: C64 = q.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    w.iter_mut().zip(q).for_each(|(y, x)| *y -= proj * x);
                }
            }
            let b = norm(&w);
            let c = tridiagonal_exp_e1(&alpha, &beta, tau);
            let err = b * c[j].norm() * beta0;
            if b < 1e-12 || err <= tol {
                break c;
            }
            if alpha.len() == M_MAX {
                if tau.abs() < 1e-9 {
                    break c;
                }
                tau /= 2.0;
                let c = loop {
                    let c = tridiagonal_exp_e1(&alpha, &beta, tau);
                    if b * c[j].norm() * beta0 <= tol || tau.abs() < 1e-9 {
                        break c;
                    }
                    tau /= 2.0;
                };
                break c;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        };
        let mut next = vec![C64::default(); psi.len()];
        for (c, q) in coeffs.iter().zip(&basis) {
            let c = c * beta0;
            next.iter_mut().zip(q).for_each(|(y, x)| *y += c * x);
        }
        psi = next;
        remaining -= tau;
        tau *= 2.0;
    }
    psi
}

const EIGEN_MAX_SWEEPS: usize = 1_000_000;

/// Dense-matrix propagator `V·exp(−iΛt)·V†` from a Hermitian eigendecomposition.
///
/// Falls back to a sub-stepped Taylor series (‖H‖τ ≤ 1/2) if the QR iteration does not converge.
pub struct DensePropagator {
    kind: DenseKind,
}

enum DenseKind {
    Eigen { vectors: DMatrix<C64>, values: DVector<f64> },
    Taylor { matrix: DMatrix<C64>, norm_bound: f64 },
}

impl DensePropagator {
    pub fn new(h: &PauliOperator) -> Result<Self> {
        if h.n_qubits() > DENSE_EVOLVE_LIMIT {
            return Err(LgtError::SizeLimit { what: "dense evolution qubits", size: h.n_qubits(), limit: DENSE_EVOLVE_LIMIT });
        }
        let matrix = h.to_matrix()?;
        let kind = match SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, EIGEN_MAX_SWEEPS) {
            Some(e) => DenseKind::Eigen { vectors: e.eigenvectors, values: e.eigenvalues },
            None => DenseKind::Taylor { matrix, norm_bound: h.norm1() },
        };
        Ok(DensePropagator { kind })
    }

    pub fn is_eigen(&self) -> bool {
        matches!(self.kind, DenseKind::Eigen { .. })
    }

    pub fn evolve(&self, v: &[C64], t: f64) -> Vec<C64> {
        let psi = DVector::from_column_slice(v);
        match &self.kind {
            DenseKind::Eigen { vectors, values } => {
                let mut c = vectors.ad_mul(&psi);
                c.iter_mut().zip(values.iter()).for_each(|(z, &e)| *z *= C64::from_polar(1.0, -e * t));
                (vectors * c).iter().copied().collect()
            }
            DenseKind::Taylor { matrix, norm_bound } => {
                let steps = ((norm_bound * t.abs()) / 0.5).ceil().max(1.0) as usize;
                let tau = t / steps as f64;
                let mut psi = psi;
                for _ in 0..steps {
                    let mut term = psi.clone();
                    let mut acc = psi.clone();
                    for k in 1..64 {
                        term = matrix * term * C64::new(0.0, -tau / k as f64);
                        acc += &term;
                        if term.norm() <= 1e-17 * acc.norm() {
                            break;
                        }
                    }
                    psi = acc;
                }
                psi.iter().copied().collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactMethod {
    Auto,
    Dense,
    Krylov,
}

/// Exact propagator chosen once per Hamiltonian and reused across time intervals.
pub enum Propagator {
    Dense(DensePropagator),
    Krylov(CompiledOperator),
}

impl Propagator {
    pub fn new(h: &PauliOperator, method: ExactMethod) -> Result<Self> {
        let n = h.n_qubits();
        if n > STATE_LIMIT {
            return Err(LgtError::SizeLimit { what: "statevector qubits", size: n, limit: STATE_LIMIT });
        }
        let dense = match method {
            ExactMethod::Dense => true,
            ExactMethod::Krylov => false,
            ExactMethod::Auto => n <= AUTO_DENSE_LIMIT,
        };
        Ok(if dense { Propagator::Dense(DensePropagator::new(h)?) } else { Propagator::Krylov(CompiledOperator::new(h)) })
    }

    pub fn evolve(&self, state: &StateVector, t: f64) -> StateVector {
        let amps = match self {
            Propagator::Dense(d) => d.evolve(&state.amps, t),
            Propagator::Krylov(c) => krylov_evolve(c, &state.amps, t, 1e-10),
        };
        StateVector { n_qubits: state.n_qubits, amps }
    }
}

/// `exp(−iHt)|state>` by the dense path (small registers) or the Krylov path (n ≤ 24).
pub fn exact_evolve(state: &StateVector, h: &PauliOperator, t: f64, method: ExactMethod) -> Result<StateVector> {
    if h.n_qubits() != state.n_qubits {
        return Err(LgtError::LengthMismatch(h.n_qubits(), state.n_qubits));
    }
    Ok(Propagator::new(h, method)?.evolve(state, t))
}

/// Survival probability |<φ0|φt>|².
pub fn loschmidt(state0: &StateVector, state_t: &StateVector) -> Result<f64> {
    if state0.n_qubits != state_t.n_qubits {
        return Err(LgtError::LengthMismatch(state0.n_qubits, state_t.n_qubits));
    }
    Ok(state0.inner(state_t).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    Canonical,
    ByTermGroup,
    Reversed,
}

/// Ordered list of Pauli exponentials making up one first-order step.
#[derive(Clone, Debug)]
pub struct TrotterPlan {
    pub terms: Vec<(Axes, f64)>,
    pub dt: f64,
    pub steps: usize,
    pub ordering: Ordering,
}

impl TrotterPlan {
    /// Plan over the strings of `groups` (in group order for `ByTermGroup`); identity strings are skipped.
    pub fn new(groups: &[&PauliOperator], dt: f64, total_time: f64, ordering: Ordering) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(LgtError::config("dt", "time step must be positive"));
        }
        let steps = (total_time / dt).round() as usize;
        if ((steps as f64) * dt - total_time).abs() > 1e-9 * total_time.max(1.0) {
            return Err(LgtError::config("dt", format!("total time {total_time} is not a multiple of dt {dt}")));
        }
        let n = groups.first().map(|g| g.n_qubits()).unwrap_or(0);
        let mut terms: Vec<(Axes, f64)> = match ordering {
            Ordering::ByTermGroup => groups.iter().flat_map(|g| g.terms().iter().map(|(a, c)| (a.clone(), c.re))).collect(),
            _ => crate::pauli::sum_operators(n, groups.iter().copied()).terms().iter().map(|(a, c)| (a.clone(), c.re)).collect(),
        };
        terms.retain(|(a, _)| !a.is_identity());
        if ordering == Ordering::Reversed {
            terms.reverse();
        }
        Ok(TrotterPlan { terms, dt, steps, ordering })
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn step(&self, state: &mut StateVector) {
        for (a, c) in &self.terms {
            apply_pauli_exp(state, a, c * self.dt);
        }
    }
}

/// Applies all steps, calling `observe(step_index, time, state)` at t=0 and after each step.
pub fn trotter_evolve<F: FnMut(usize, f64, &StateVector)>(state: &mut StateVector, plan: &TrotterPlan, mut observe: F) {
    observe(0, 0.0, state);
    for k in 1..=plan.steps {
        plan.step(state);
        observe(k, k as f64 * plan.dt, state);
    }
}

/// Occupation pattern of one lattice site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SiteLabel {
    Vacuum,
    Particle,
    Antiparticle,
    Pair,
    Other(i32),
}

impl SiteLabel {
    pub fn symbol(&self) -> String {
        match self {
            SiteLabel::Vacuum => "o".into(),
            SiteLabel::Particle => "p".into(),
            SiteLabel::Antiparticle => "a".into(),
            SiteLabel::Pair => "b".into(),
            SiteLabel::Other(q) => format!("[{q:+}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinkLabel {
    Flux(f64),
    Unphysical,
}

/// Lattice configuration read off a computational basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigLabel {
    pub sites: Vec<SiteLabel>,
    pub links: Vec<LinkLabel>,
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sites {
            write!(f, "{}", s.symbol())?;
        }
        write!(f, "|")?;
        for (i, l) in self.links.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match l {
                LinkLabel::Flux(x) => write!(f, "{x}")?,
                LinkLabel::Unphysical => write!(f, "x")?,
            }
        }
        Ok(())
    }
}

/// Readout helpers tied to a lattice system's conventions.
pub struct Readout<'a> {
    sys: &'a LatticeSystem,
    numbers: Vec<CompiledOperator>,
    vacuum_filled: Vec<bool>,
}

impl<'a> Readout<'a> {
    pub fn new(sys: &'a LatticeSystem) -> Self {
        let n_modes = sys.layout.n_fermionic;
        let ns = sys.layout.n_spinor;
        let numbers = (0..n_modes)
            .map(|j| {
                let op = sys.mapping.number(j).expect("mode in range").embed(0, sys.n_qubits());
                CompiledOperator::new(&op)
            })
            .collect();
        let g0 = &sys.clifford.gammas[0];
        let vacuum_filled = (0..ns).map(|a| g0[(a, a)].re < 0.0).collect();
        Readout { sys, numbers, vacuum_filled }
    }

    pub fn occupations(&self, index: usize) -> Vec<bool> {
        self.numbers.iter().map(|n| n.diagonal(index) > 0.5).collect()
    }

    pub fn site_label(&self, occ: &[bool]) -> SiteLabel {
        let ns = self.sys.layout.n_spinor;
        let q: i32 = occ.iter().filter(|&&b| b).count() as i32 - (ns / 2) as i32;
        if ns == 2 {
            return match (occ[0], occ[1]) {
                (false, true) => SiteLabel::Vacuum,
                (true, true) => SiteLabel::Particle,
                (false, false) => SiteLabel::Antiparticle,
                (true, false) => SiteLabel::Pair,
            };
        }
        if occ.iter().zip(&self.vacuum_filled).all(|(a, b)| a == b) {
            SiteLabel::Vacuum
        } else {
            SiteLabel::Other(q)
        }
    }

    pub fn link_flux(&self, index: usize, link: usize) -> LinkLabel {
        let n = self.sys.n_qubits();
        let r = self.sys.layout.link_qubits(link);
        let width = r.len();
        let value = (index >> (n - r.end)) & ((1 << width) - 1);
        let phys = physical_indices(self.sys.spin, self.sys.encoding);
        match phys.iter().position(|&p| p == value) {
            Some(k) => LinkLabel::Flux(self.sys.spin.m(k) + self.sys.theta[self.sys.lattice.links()[link].dir]),
            None => LinkLabel::Unphysical,
        }
    }

    pub fn label(&self, index: usize) -> ConfigLabel {
        let occ = self.occupations(index);
        let ns = self.sys.layout.n_spinor;
        let sites = occ.chunks(ns).map(|c| self.site_label(c)).collect();
        let links = (0..self.sys.lattice.links().len()).map(|l| self.link_flux(index, l)).collect();
        ConfigLabel { sites, links }
    }

    /// Basis index from per-mode occupations and physical link fluxes (θ included).
    pub fn basis_index(&self, occ: &[bool], fluxes: &[f64]) -> Result<usize> {
        let sys = self.sys;
        let n = sys.n_qubits();
        if occ.len() != sys.layout.n_fermionic || fluxes.len() != sys.lattice.links().len() {
            return Err(LgtError::Unphysical("occupation/flux lengths do not match the lattice".into()));
        }
        let bits = encode_occupations(sys.mapping.kind, occ);
        let mut idx = 0usize;
        for (q, b) in bits.iter().enumerate() {
            if *b {
                idx |= 1 << (n - 1 - q);
            }
        }
        for (l, &f) in fluxes.iter().enumerate() {
            let theta = sys.theta[sys.lattice.links()[l].dir];
            let v = flux_index(sys.spin, sys.encoding, f - theta)?;
            let r = sys.layout.link_qubits(l);
            idx |= v << (n - r.end);
        }
        Ok(idx)
    }

    pub fn site_occupation(&self, label: SiteLabel) -> Result<Vec<bool>> {
        if self.sys.layout.n_spinor != 2 {
            return match label {
                SiteLabel::Vacuum => Ok(self.vacuum_filled.clone()),
                _ => Err(LgtError::Unphysical(format!("site label {label:?} needs two spinor components"))),
            };
        }
        Ok(match label {
            SiteLabel::Vacuum => vec![false, true],
            SiteLabel::Particle => vec![true, true],
            SiteLabel::Antiparticle => vec![false, false],
            SiteLabel::Pair => vec![true, false],
            SiteLabel::Other(_) => return Err(LgtError::Unphysical("generic charge label".into())),
        })
    }

    /// Basis state with the given site labels and link fluxes.
    pub fn configuration_state(&self, sites: &[SiteLabel], fluxes: &[f64]) -> Result<StateVector> {
        if sites.len() != self.sys.lattice.n_sites() {
            return Err(LgtError::Unphysical(format!("expected {} site labels", self.sys.lattice.n_sites())));
        }
        let mut occ = Vec::new();
        for &s in sites {
            occ.extend(self.site_occupation(s)?);
        }
        StateVector::basis(self.sys.n_qubits(), self.basis_index(&occ, fluxes)?)
    }

    /// Bare vacuum: every site empty of excitations, every link at zero flux.
    pub fn vacuum(&self) -> Result<StateVector> {
        let sites = vec![SiteLabel::Vacuum; self.sys.lattice.n_sites()];
        let fluxes = vec![0.0; self.sys.lattice.links().len()];
        self.configuration_state(&sites, &fluxes)
    }
}

/// Expectation values of particle number, charges and fluxes.
#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    pub particle_number: f64,
    pub charges: Vec<f64>,
    pub fluxes: Vec<f64>,
}

pub fn observables(state: &StateVector, sys: &LatticeSystem) -> Observables {
    let ro = Readout::new(sys);
    let ns = sys.layout.n_spinor;
    let g0 = &sys.clifford.gammas[0];
    let mut charges = vec![0.0; sys.lattice.n_sites()];
    let mut fluxes = vec![0.0; sys.lattice.links().len()];
    let mut particle_number = 0.0;
    for (idx, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p < 1e-300 {
            continue;
        }
        let occ = ro.occupations(idx);
        for (x, c) in occ.chunks(ns).enumerate() {
            let filled = c.iter().filter(|&&b| b).count() as f64;
            charges[x] += p * (filled - ns as f64 / 2.0);
            let psibar_psi: f64 = (0..ns).filter(|&al| c[al]).map(|al| g0[(al, al)].re).sum();
            particle_number += p * (psibar_psi + ns as f64 / 2.0);
        }
        for (l, f) in fluxes.iter_mut().enumerate() {
            if let LinkLabel::Flux(v) = ro.link_flux(idx, l) {
                *f += p * v;
            }
        }
    }
    Observables { particle_number, charges, fluxes }
}

/// Configuration probabilities, largest first; groups beyond `top` are merged into "other".
#[derive(Clone, Debug)]
pub struct ConfigDistribution {
    pub entries: Vec<(ConfigLabel, f64)>,
    pub other: f64,
}

impl ConfigDistribution {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|(l, _)| l.to_string() == label).map(|e| e.1)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum::<f64>() + self.other
    }
}

pub fn config_probabilities(state: &StateVector, sys: &LatticeSystem, top: usize) -> ConfigDistribution {
    let ro = Readout::new(sys);
    let mut groups: HashMap<String, (ConfigLabel, f64)> = HashMap::new();
    for (idx, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let label = ro.label(idx);
        groups.entry(label.to_string()).or_insert((label, 0.0)).1 += p;
    }
    let mut all: Vec<(String, ConfigLabel, f64)> = groups.into_iter().map(|(k, (l, p))| (k, l, p)).collect();
    all.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    let other = all.iter().skip(top).fold(0.0, |a, e| a + e.2);
    let entries = all.into_iter().take(top).map(|(_, l, p)| (l, p)).collect();
    ConfigDistribution { entries, other }
}

/// Result of enumerating configurations against the Gauss law.
#[derive(Clone, Debug)]
pub struct GaussCensus {
    pub total: usize,
    pub physical: Vec<usize>,
}

/// Enumerates occupation patterns × in-window link states and keeps those with every G_x = 0.
pub fn gauss_filter(sys: &LatticeSystem) -> Result<GaussCensus> {
    let n = sys.n_qubits();
    if n > STATE_LIMIT {
        return Err(LgtError::SizeLimit { what: "enumeration qubits", size: n, limit: STATE_LIMIT });
    }
    let (gs, _) = sys.build_gauss();
    let gs: Vec<CompiledOperator> = gs.iter().map(CompiledOperator::new).collect();
    let nf = sys.layout.n_fermionic;
    let nl = sys.lattice.links().len();
    let d_s = sys.spin.dim();
    let phys = physical_indices(sys.spin, sys.encoding);
    let total = (1usize << nf) * d_s.pow(nl as u32);
    let mut physical = Vec::new();
    for occ_bits in 0..(1usize << nf) {
        let occ: Vec<bool> = (0..nf).map(|j| (occ_bits >> (nf - 1 - j)) & 1 == 1).collect();
        let bits = encode_occupations(sys.mapping.kind, &occ);
        let mut fidx = 0usize;
        for (q, b) in bits.iter().enumerate() {
            if *b {
                fidx |= 1 << (n - 1 - q);
            }
        }
        for link_state in 0..d_s.pow(nl as u32) {
            let mut idx = fidx;
            let mut rest = link_state;
            for l in 0..nl {
                let k = rest % d_s;
                rest /= d_s;
                idx |= phys[k] << (n - sys.layout.link_qubits(l).end);
            }
            if gs.iter().all(|g| g.diagonal(idx).abs() < 1e-9) {
                physical.push(idx);
            }
        }
    }
    physical.sort_unstable();
    Ok(GaussCensus { total, physical })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_exp(p: &PauliOperator, theta: f64) -> DMatrix<C64> {
        let m = p.to_matrix().unwrap();
        let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
        id * C64::new(theta.cos(), 0.0) + m * C64::new(0.0, -theta.sin())
    }

    #[test]
    fn z_phase_and_x_rotation() {
        let mut s = StateVector::basis(1, 0).unwrap();
        apply_pauli_exp(&mut s, &"Z".parse().unwrap(), 0.3);
        assert!((s.amps[0] - C64::new(0.0, -0.3).exp()).norm() < 1e-15);
        let mut s = StateVector::basis(1, 0).unwrap();
        apply_pauli_exp(&mut s, &"X".parse().unwrap(), std::f64::consts::FRAC_PI_2);
        assert!(s.amps[0].norm() < 1e-15);
        assert!((s.amps[1] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pauli_exp_matches_matrix_exponential() {
        let v: Vec<C64> = (0..16).map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.91).cos())).collect();
        let nrm = norm(&v);
        let v: Vec<C64> = v.iter().map(|a| a / nrm).collect();
        for s in ["XYZI", "YIZX", "ZZII", "IYYI", "XXXX", "IIIY"] {
            let axes: Axes = s.parse().unwrap();
            let mut st = StateVector::from_amps(v.clone()).unwrap();
            apply_pauli_exp(&mut st, &axes, 0.7);
            let u = dense_exp(&PauliOperator::single(axes, C64::new(1.0, 0.0)), 0.7);
            let want = &u * DVector::from_column_slice(&v);
            for (a, b) in st.amps.iter().zip(want.iter()) {
                assert!((a - b).norm() < 1e-12, "{s}");
            }
            assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn compiled_operator_matches_dense() {
        let op = PauliOperator::parse(&[
            (C64::new(0.5, 0.0), "XYZ"),
            (C64::new(-1.2, 0.0), "ZIZ"),
            (C64::new(0.3, 0.0), "IXX"),
            (C64::new(0.7, 0.0), "III"),
        ])
        .unwrap();
        let v: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect();
        let got = CompiledOperator::new(&op).apply(&v);
        let want = op.to_matrix().unwrap() * DVector::from_column_slice(&v);
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_evolution_basics() {
        let h = PauliOperator::parse(&[(C64::new(0.4, 0.0), "ZI"), (C64::new(-0.2, 0.0), "IZ")]).unwrap();
        let s0 = StateVector::basis(2, 1).unwrap();
        let s = exact_evolve(&s0, &h, 0.0, ExactMethod::Auto).unwrap();
        assert!((loschmidt(&s0, &s).unwrap() - 1.0).abs() < 1e-12);
        let s = exact_evolve(&s0, &h, 1.3, ExactMethod::Krylov).unwrap();
        // |01>: Z_0 = +1, Z_1 = -1, energy 0.6
        assert!((s.amps[1] - C64::new(0.0, -0.6 * 1.3).exp()).norm() < 1e-10);
    }

    #[test]
    fn krylov_matches_dense_small() {
        let h = PauliOperator::parse(&[
            (C64::new(0.5, 0.0), "XXZ"),
            (C64::new(-1.2, 0.0), "ZIZ"),
            (C64::new(0.8, 0.0), "YYI"),
            (C64::new(0.3, 0.0), "IIX"),
        ])
        .unwrap();
        let s0 = StateVector::basis(3, 2).unwrap();
        let a = exact_evolve(&s0, &h, 2.5, ExactMethod::Dense).unwrap();
        let b = exact_evolve(&s0, &h, 2.5, ExactMethod::Krylov).unwrap();
        for (x, y) in a.amps.iter().zip(&b.amps) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn commuting_trotter_is_exact() {
        let h = PauliOperator::parse(&[(C64::new(0.5, 0.0), "ZZI"), (C64::new(-0.7, 0.0), "IZZ"), (C64::new(0.2, 0.0), "ZII")]).unwrap();
        let mut v: Vec<C64> = vec![C64::new(0.0, 0.0); 8];
        v[3] = C64::new(0.6, 0.0);
        v[5] = C64::new(0.0, 0.8);
        let s0 = StateVector::from_amps(v).unwrap();
        let plan = TrotterPlan::new(&[&h], 0.5, 2.0, Ordering::Canonical).unwrap();
        let mut s = s0.clone();
        trotter_evolve(&mut s, &plan, |_, _, _| {});
        let e = exact_evolve(&s0, &h, 2.0, ExactMethod::Dense).unwrap();
        assert!((s.inner(&e).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plan_requires_commensurate_time() {
        let h = PauliOperator::parse(&[(C64::new(0.5, 0.0), "Z")]).unwrap();
        assert!(TrotterPlan::new(&[&h], 0.3, 1.0, Ordering::Canonical).is_err());
        let p = TrotterPlan::new(&[&h], 0.05, 1.2, Ordering::Canonical).unwrap();
        assert_eq!(p.steps, 24);
    }
}
