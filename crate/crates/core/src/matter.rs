//! Gamma matrices and fermion-to-qubit mappings.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LgtError, Result};
use crate::lattice::n_spinor;
use crate::pauli::{Axes, PauliAxis, PauliOperator, C64};

/// Gamma matrices γ^0..γ^d for `d` spatial dimensions.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub d: usize,
    pub n_spinor: usize,
    pub gammas: Vec<DMatrix<C64>>,
}

fn cm(n: usize, v: &[(f64, f64)]) -> DMatrix<C64> {
    DMatrix::from_row_iterator(n, n, v.iter().map(|&(r, i)| C64::new(r, i)))
}

fn sigma(k: usize) -> DMatrix<C64> {
    let o = (0.0, 0.0);
    match k {
        1 => cm(2, &[o, (1., 0.), (1., 0.), o]),
        2 => cm(2, &[o, (0., -1.), (0., 1.), o]),
        3 => cm(2, &[(1., 0.), o, o, (-1., 0.)]),
        _ => DMatrix::identity(2, 2),
    }
}

fn block(a: &DMatrix<C64>, b: &DMatrix<C64>, c: &DMatrix<C64>, d: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Dirac-type representation: d=1 (σz, iσx), d=2 (σz, iσx, iσy), d=3 the 4×4 Dirac matrices.
pub fn clifford_rep(d: usize) -> Result<CliffordRep> {
    let i = C64::new(0.0, 1.0);
    let gammas = match d {
        1 => vec![sigma(3), sigma(1) * i],
        2 => vec![sigma(3), sigma(1) * i, sigma(2) * i],
        3 => {
            let z = DMatrix::zeros(2, 2);
            let id = DMatrix::identity(2, 2);
            let mut g = vec![block(&id, &z, &z, &(-id.clone()))];
            for k in 1..=3 {
                let s = sigma(k);
                g.push(block(&z, &s, &(-s.clone()), &z));
            }
            g
        }
        _ => return Err(LgtError::UnsupportedDimension(d)),
    };
    Ok(CliffordRep { d, n_spinor: n_spinor(d), gammas })
}

impl CliffordRep {
    /// γ^0 (i γ^k + r), the matrix coupling spinor components across a link in direction k.
    pub fn gamma_mix(&self, k: usize, r: f64) -> DMatrix<C64> {
        let id = DMatrix::<C64>::identity(self.n_spinor, self.n_spinor);
        let inner = &self.gammas[k + 1] * C64::new(0.0, 1.0) + id * C64::new(r, 0.0);
        &self.gammas[0] * inner
    }

    /// Largest deviation of {γ^μ, γ^ν} from 2η^{μν}.
    pub fn anticommutator_error(&self) -> f64 {
        let n = self.n_spinor;
        let mut worst: f64 = 0.0;
        for mu in 0..=self.d {
            for nu in 0..=self.d {
                let ac = &self.gammas[mu] * &self.gammas[nu] + &self.gammas[nu] * &self.gammas[mu];
                let eta = if mu != nu { 0.0 } else if mu == 0 { 2.0 } else { -2.0 };
                let target = DMatrix::<C64>::identity(n, n) * C64::new(eta, 0.0);
                worst = worst.max((ac - target).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MappingKind {
    #[serde(rename = "jw")]
    JordanWigner,
    #[serde(rename = "parity")]
    Parity,
    #[serde(rename = "bk")]
    BravyiKitaev,
}

impl FromStr for MappingKind {
    type Err = LgtError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jw" => Ok(MappingKind::JordanWigner),
            "parity" => Ok(MappingKind::Parity),
            "bk" => Ok(MappingKind::BravyiKitaev),
            _ => Err(LgtError::config("mapping", format!("unknown mapping \"{s}\" (expected jw, parity or bk)"))),
        }
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MappingKind::JordanWigner => "jw",
            MappingKind::Parity => "parity",
            MappingKind::BravyiKitaev => "bk",
        };
        f.write_str(s)
    }
}

/// Mapped annihilation operators for `N` fermionic modes, one qubit per mode.
#[derive(Clone, Debug)]
pub struct FermionMapping {
    pub kind: MappingKind,
    pub n_modes: usize,
    ann: Vec<PauliOperator>,
}

// ½ X_xs Z_zs X_j + ½ i X_xs Z_rs Y_j
fn ladder(n: usize, j: usize, xs: &[usize], zs: &[usize], rs: &[usize]) -> PauliOperator {
    let mut a = Axes::identity(n);
    for &q in xs {
        a.set(q, PauliAxis::X);
    }
    let mut b = a.clone();
    for &q in zs {
        a.set(q, PauliAxis::Z);
    }
    for &q in rs {
        b.set(q, PauliAxis::Z);
    }
    a.set(j, PauliAxis::X);
    b.set(j, PauliAxis::Y);
    PauliOperator::from_terms(n, vec![(a, C64::new(0.5, 0.0)), (b, C64::new(0.0, 0.5))])
}

// Bravyi-Kitaev update, parity and flip sets on a binary superset of size n.
fn bk_parity_set(j: usize, n: usize) -> Vec<usize> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let h = n / 2;
    if j < h {
        bk_parity_set(j, h)
    } else {
        let mut v: Vec<usize> = bk_parity_set(j - h, h).into_iter().map(|x| x + h).collect();
        v.push(h - 1);
        v
    }
}

fn bk_update_set(j: usize, n: usize) -> Vec<usize> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let h = n / 2;
    if j < h {
        let mut v = vec![n - 1];
        v.extend(bk_update_set(j, h));
        v
    } else {
        bk_update_set(j - h, h).into_iter().map(|x| x + h).collect()
    }
}

fn bk_flip_set(j: usize, n: usize) -> Vec<usize> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let h = n / 2;
    if j < h {
        bk_flip_set(j, h)
    } else {
        let mut v: Vec<usize> = bk_flip_set(j - h, h).into_iter().map(|x| x + h).collect();
        if j == n - 1 {
            v.push(h - 1);
        }
        v
    }
}

impl FermionMapping {
    pub fn new(kind: MappingKind, n_modes: usize) -> Self {
        let n = n_modes;
        let ann = match kind {
            MappingKind::JordanWigner => {
                (0..n)
                    .map(|j| {
                        let below: Vec<usize> = (0..j).collect();
                        ladder(n, j, &[], &below, &below)
                    })
                    .collect()
            }
            MappingKind::Parity => (0..n)
                .map(|j| {
                    let above: Vec<usize> = (j + 1..n).collect();
                    let below: Vec<usize> = if j > 0 { vec![j - 1] } else { vec![] };
                    ladder(n, j, &above, &below, &[])
                })
                .collect(),
            MappingKind::BravyiKitaev => {
                let size = n.max(1).next_power_of_two().max(2);
                (0..n)
                    .map(|j| {
                        let keep = |v: Vec<usize>| v.into_iter().filter(|&x| x < n).collect::<Vec<_>>();
                        let u = keep(bk_update_set(j, size));
                        let p = keep(bk_parity_set(j, size));
                        let f = keep(bk_flip_set(j, size));
                        let r: Vec<usize> = p.iter().copied().filter(|x| !f.contains(x)).collect();
                        ladder(n, j, &u, &p, &r)
                    })
                    .collect()
            }
        };
        FermionMapping { kind, n_modes, ann }
    }

    pub fn annihilation(&self, j: usize) -> Result<&PauliOperator> {
        self.ann.get(j).ok_or(LgtError::ModeOutOfRange { index: j, modes: self.n_modes })
    }

    pub fn creation(&self, j: usize) -> Result<PauliOperator> {
        Ok(self.annihilation(j)?.dagger())
    }

    /// `c · a†_i a_j` as a Pauli operator on the mode register.
    pub fn map_bilinear(&self, i: usize, j: usize, c: C64) -> Result<PauliOperator> {
        let ai = self.annihilation(i)?;
        let aj = self.annihilation(j)?;
        Ok(ai.dagger().mul(aj).scale(c))
    }

    pub fn number(&self, j: usize) -> Result<PauliOperator> {
        self.map_bilinear(j, j, C64::new(1.0, 0.0))
    }

    /// Checks {a_i, a†_j} = δ_ij and {a_i, a_j} = 0 for all pairs.
    pub fn anticommutator_check(&self) -> AnticommutatorReport {
        let n = self.n_modes;
        let id = PauliOperator::identity(n);
        let zero = PauliOperator::zero(n);
        let mut violations = Vec::new();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let ai = &self.ann[i];
                let aj = &self.ann[j];
                let adj = aj.dagger();
                let ac = ai.mul(&adj).add(&adj.mul(ai));
                let want = if i == j { &id } else { &zero };
                let err = ac.sub(want).norm1();
                let aa = ai.mul(aj).add(&aj.mul(ai)).norm1();
                worst = worst.max(err).max(aa);
                if err > 1e-12 || aa > 1e-12 {
                    violations.push((i, j));
                }
            }
        }
        AnticommutatorReport { n_modes: n, violations, max_error: worst }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnticommutatorReport {
    pub n_modes: usize,
    pub violations: Vec<(usize, usize)>,
    pub max_error: f64,
}

impl AnticommutatorReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Occupation-basis to qubit-basis transform: bit j of the result is the qubit value for mode j.
pub fn encode_occupations(kind: MappingKind, occ: &[bool]) -> Vec<bool> {
    let n = occ.len();
    (0..n)
        .map(|j| {
            let lo = match kind {
                MappingKind::JordanWigner => j,
                MappingKind::Parity => 0,
                MappingKind::BravyiKitaev => {
                    let low = (j + 1) & (!(j + 1)).wrapping_add(1);
                    j + 1 - low
                }
            };
            occ[lo..=j].iter().filter(|&&b| b).count() % 2 == 1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_d1() {
        let c = clifford_rep(1).unwrap();
        assert_eq!(c.n_spinor, 2);
        assert_eq!(c.gammas[0], sigma(3));
        assert_eq!(c.gammas[1], sigma(1) * C64::new(0.0, 1.0));
        let g1sq = &c.gammas[1] * &c.gammas[1];
        assert_eq!(g1sq, -DMatrix::<C64>::identity(2, 2));
        assert!(c.anticommutator_error() < 1e-15);
    }

    #[test]
    fn reps_satisfy_clifford_algebra() {
        for d in 1..=3 {
            let c = clifford_rep(d).unwrap();
            assert!(c.anticommutator_error() < 1e-15, "d={d}");
            assert_eq!(c.gammas[0].trace(), C64::new(0.0, 0.0));
            assert_eq!(c.gammas[0].adjoint(), c.gammas[0]);
        }
        assert!(clifford_rep(4).is_err());
    }

    #[test]
    fn gamma_mix_d1() {
        let c = clifford_rep(1).unwrap();
        let g = c.gamma_mix(0, 1.0);
        let want = cm(2, &[(1., 0.), (-1., 0.), (1., 0.), (-1., 0.)]);
        assert_eq!(g, want);
    }

    #[test]
    fn jw_examples() {
        let m = FermionMapping::new(MappingKind::JordanWigner, 2);
        let n0 = m.number(0).unwrap();
        let want = PauliOperator::parse(&[(C64::new(0.5, 0.), "II"), (C64::new(-0.5, 0.), "ZI")]).unwrap();
        assert!(n0.approx_eq(&want, 1e-15));
        let hop = m.map_bilinear(0, 1, C64::new(1., 0.)).unwrap().plus_hc();
        let want = PauliOperator::parse(&[(C64::new(0.5, 0.), "XX"), (C64::new(0.5, 0.), "YY")]).unwrap();
        assert!(hop.approx_eq(&want, 1e-15));
    }

    #[test]
    fn jw_bilinear_form() {
        let m = FermionMapping::new(MappingKind::JordanWigner, 4);
        let b = m.map_bilinear(0, 3, C64::new(1., 0.)).unwrap();
        let q = |s: &str| b.coeff_of(s);
        assert_eq!(q("XZZX"), C64::new(0.25, 0.));
        assert_eq!(q("YZZY"), C64::new(0.25, 0.));
        assert_eq!(q("XZZY"), C64::new(0., 0.25));
        assert_eq!(q("YZZX"), C64::new(0., -0.25));
    }

    #[test]
    fn all_mappings_anticommute() {
        for kind in [MappingKind::JordanWigner, MappingKind::Parity, MappingKind::BravyiKitaev] {
            for n in 1..=6 {
                let r = FermionMapping::new(kind, n).anticommutator_check();
                assert!(r.holds(), "{kind} N={n}: {:?}", r.violations);
            }
        }
    }

    #[test]
    fn number_operators_are_diagonal() {
        for kind in [MappingKind::JordanWigner, MappingKind::Parity, MappingKind::BravyiKitaev] {
            let m = FermionMapping::new(kind, 5);
            for j in 0..5 {
                let nj = m.number(j).unwrap();
                for (a, _) in nj.terms() {
                    assert!((0..5).all(|q| matches!(a.get(q), PauliAxis::I | PauliAxis::Z)));
                }
            }
        }
    }

    #[test]
    fn out_of_range_mode() {
        let m = FermionMapping::new(MappingKind::BravyiKitaev, 3);
        assert_eq!(m.map_bilinear(0, 3, C64::new(1., 0.)).unwrap_err(), LgtError::ModeOutOfRange { index: 3, modes: 3 });
    }

    #[test]
    fn bk_occupation_transform() {
        let b = encode_occupations(MappingKind::BravyiKitaev, &[true, true, true, true]);
        assert_eq!(b, vec![true, false, true, false]);
        let p = encode_occupations(MappingKind::Parity, &[true, false, true, false]);
        assert_eq!(p, vec![true, true, false, false]);
    }
}
