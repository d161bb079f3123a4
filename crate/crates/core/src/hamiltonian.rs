//! Lattice-QED Hamiltonian terms as Pauli operators over the full register.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LgtError, Result};
use crate::gauge::{EncodedLink, SpinSystem};
use crate::lattice::{Encoding, Lattice, LatticeSpec, LinkEnd, RegisterLayout};
use crate::matter::{clifford_rep, CliffordRep, FermionMapping, MappingKind};
use crate::pauli::{sum_operators, Axes, PauliAxis, PauliOperator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub m: f64,
    pub r: f64,
    pub a: f64,
    pub e: f64,
    /// Gauss-law penalty weight.
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(m: f64, r: f64, a: f64, e: f64) -> Self {
        let mut p = ModelParams { m, r, a, e, lambda: 0.0 };
        p.lambda = p.default_lambda();
        p
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// 10 · max(m, e²/2).
    pub fn default_lambda(&self) -> f64 {
        10.0 * self.m.max(self.e * self.e / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(LgtError::config("a", "lattice spacing must be positive"));
        }
        if !(self.e > 0.0) {
            return Err(LgtError::config("e", "charge unit must be positive"));
        }
        if !(self.lambda >= 0.0) {
            return Err(LgtError::config("lambda", "penalty weight must be non-negative"));
        }
        Ok(())
    }
}

/// Which number operator the Gauss-law charge uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussCharge {
    /// a†a under the selected fermion mapping.
    #[default]
    Mapped,
    /// (I - Z)/2 on the mode's own qubit, regardless of mapping.
    QubitOccupation,
}

/// A lattice with its register layout, fermion mapping and encoded links.
#[derive(Clone, Debug)]
pub struct LatticeSystem {
    pub lattice: Lattice,
    pub layout: RegisterLayout,
    pub spin: SpinSystem,
    pub encoding: Encoding,
    pub mapping: FermionMapping,
    pub clifford: CliffordRep,
    pub gauss_charge: GaussCharge,
    /// θ per direction (units of e).
    pub theta: Vec<f64>,
    links_by_dir: Vec<Arc<EncodedLink>>,
}

#[derive(Clone, Debug)]
pub struct HamiltonianTerms {
    pub mass: PauliOperator,
    pub hopp_wilson: PauliOperator,
    pub elec: PauliOperator,
    pub plaq: PauliOperator,
    pub gauss: PauliOperator,
    pub gauss_ops: Vec<PauliOperator>,
    pub total: PauliOperator,
}

impl HamiltonianTerms {
    /// Total without its identity string, and the dropped energy shift.
    pub fn drop_identity(&self) -> (PauliOperator, f64) {
        let (op, s) = self.total.drop_identity();
        (op, s.re)
    }
}

impl LatticeSystem {
    pub fn new(spec: LatticeSpec, spin: SpinSystem, encoding: Encoding, mapping: MappingKind, theta: &[f64]) -> Result<Self> {
        let lattice = Lattice::new(spec)?;
        let d = lattice.d();
        let theta: Vec<f64> = match theta.len() {
            0 => vec![0.0; d],
            1 => vec![theta[0]; d],
            n if n == d => theta.to_vec(),
            n => return Err(LgtError::config("theta", format!("expected 1 or {d} values, got {n}"))),
        };
        let clifford = clifford_rep(d)?;
        let layout = RegisterLayout::new(&lattice, spin.two_s, encoding);
        let mapping = FermionMapping::new(mapping, layout.n_fermionic);
        let links_by_dir = theta.iter().map(|&t| EncodedLink::cached(spin, encoding, t)).collect::<Result<Vec<_>>>()?;
        Ok(LatticeSystem { lattice, layout, spin, encoding, mapping, clifford, gauss_charge: GaussCharge::Mapped, theta, links_by_dir })
    }

    pub fn with_gauss_charge(mut self, g: GaussCharge) -> Self {
        self.gauss_charge = g;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.n_total
    }

    pub fn link_ops(&self, link: usize) -> &EncodedLink {
        &self.links_by_dir[self.lattice.links()[link].dir]
    }

    fn on_link(&self, op: &PauliOperator, link: usize) -> PauliOperator {
        op.embed(self.layout.link_offset(link), self.n_qubits())
    }

    /// `c · a†_{site_i,α} a_{site_j,β}` on the full register.
    pub fn bilinear(&self, site_i: usize, alpha: usize, site_j: usize, beta: usize, c: C64) -> PauliOperator {
        let i = self.layout.mode(site_i, alpha);
        let j = self.layout.mode(site_j, beta);
        self.mapping.map_bilinear(i, j, c).expect("modes within layout").embed(0, self.n_qubits())
    }

    /// Number operator of a mode on the full register, according to the Gauss-charge option.
    pub fn occupation(&self, site: usize, alpha: usize) -> PauliOperator {
        let n = self.n_qubits();
        match self.gauss_charge {
            GaussCharge::Mapped => self.bilinear(site, alpha, site, alpha, C64::new(1.0, 0.0)),
            GaussCharge::QubitOccupation => {
                let q = self.layout.mode(site, alpha);
                PauliOperator::from_terms(
                    n,
                    vec![
                        (Axes::identity(n), C64::new(0.5, 0.0)),
                        (Axes::from_sparse(n, &[(q, PauliAxis::Z)]), C64::new(-0.5, 0.0)),
                    ],
                )
            }
        }
    }

    fn prefactor(&self, p: &ModelParams) -> f64 {
        p.a.powi(self.lattice.d() as i32)
    }

    pub fn build_mass(&self, p: &ModelParams) -> PauliOperator {
        let coef = self.prefactor(p) * (p.m + p.r * self.lattice.d() as f64 / p.a);
        let g0 = &self.clifford.gammas[0];
        let ns = self.layout.n_spinor;
        let parts: Vec<PauliOperator> = (0..self.lattice.n_sites())
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut v = Vec::new();
                for al in 0..ns {
                    for be in 0..ns {
                        let g = g0[(al, be)];
                        if g.norm() > 0.0 {
                            v.push(self.bilinear(x, al, x, be, g * coef));
                        }
                    }
                }
                v
            })
            .collect();
        sum_operators(self.n_qubits(), parts.iter())
    }

    pub fn build_hopp_wilson(&self, p: &ModelParams) -> PauliOperator {
        let coef = self.prefactor(p) / (2.0 * p.a);
        let ns = self.layout.n_spinor;
        let parts: Vec<PauliOperator> = (0..self.lattice.links().len())
            .into_par_iter()
            .map(|l| {
                let link = self.lattice.links()[l];
                let y = self.lattice.neighbor(link.site, link.dir).expect("dynamical link has both ends");
                let gm = self.clifford.gamma_mix(link.dir, p.r);
                let u = self.on_link(&self.link_ops(l).u, l);
                let mut fermion = Vec::new();
                for al in 0..ns {
                    for be in 0..ns {
                        let g = gm[(al, be)];
                        if g.norm() > 0.0 {
                            fermion.push(self.bilinear(link.site, al, y, be, g * coef));
                        }
                    }
                }
                let f = sum_operators(self.n_qubits(), fermion.iter());
                f.mul(&u).plus_hc()
            })
            .collect();
        sum_operators(self.n_qubits(), parts.iter())
    }

    pub fn build_electric(&self, p: &ModelParams) -> PauliOperator {
        let coef = self.prefactor(p) * p.e * p.e / 2.0;
        let parts: Vec<PauliOperator> =
            (0..self.lattice.links().len()).map(|l| self.on_link(&self.link_ops(l).e_sq, l).scale_re(coef)).collect();
        sum_operators(self.n_qubits(), parts.iter())
    }

    pub fn build_plaquette(&self, p: &ModelParams) -> PauliOperator {
        let coef = -self.prefactor(p) / (4.0 * p.e * p.e);
        let parts: Vec<PauliOperator> = self
            .lattice
            .plaquettes()
            .par_iter()
            .map(|&pl| {
                let [l1, l2, l3, l4] = self.lattice.plaquette_links(pl);
                let u1 = self.on_link(&self.link_ops(l1).u, l1);
                let u2 = self.on_link(&self.link_ops(l2).u, l2);
                let u3 = self.on_link(&self.link_ops(l3).u_dag, l3);
                let u4 = self.on_link(&self.link_ops(l4).u_dag, l4);
                u1.mul(&u2).mul(&u3).mul(&u4).plus_hc().scale_re(coef)
            })
            .collect();
        sum_operators(self.n_qubits(), parts.iter())
    }

    /// Per-site Gauss operators G_x (units of e) and Σ_x G_x².
    pub fn build_gauss(&self) -> (Vec<PauliOperator>, PauliOperator) {
        let n = self.n_qubits();
        let ns = self.layout.n_spinor;
        let gs: Vec<PauliOperator> = (0..self.lattice.n_sites())
            .into_par_iter()
            .map(|x| {
                let mut parts = Vec::new();
                let mut scalar = -(ns as f64) / 2.0;
                let (inc, out) = self.lattice.gauss_links(x);
                for (ends, sign) in [(inc, 1.0), (out, -1.0)] {
                    for end in ends {
                        match end {
                            LinkEnd::Dynamic(l) => parts.push(self.on_link(&self.link_ops(l).e, l).scale_re(sign)),
                            LinkEnd::Static(f) => scalar += sign * f,
                        }
                    }
                }
                for al in 0..ns {
                    parts.push(self.occupation(x, al));
                }
                parts.push(PauliOperator::scalar(n, C64::new(scalar, 0.0)));
                sum_operators(n, parts.iter())
            })
            .collect();
        let squares: Vec<PauliOperator> = gs.par_iter().map(|g| g.mul(g)).collect();
        let h = sum_operators(n, squares.iter());
        (gs, h)
    }

    pub fn assemble(&self, p: &ModelParams) -> Result<HamiltonianTerms> {
        p.validate()?;
        let mass = self.build_mass(p);
        let hopp_wilson = self.build_hopp_wilson(p);
        let elec = self.build_electric(p);
        let plaq = self.build_plaquette(p);
        let (gauss_ops, gauss) = self.build_gauss();
        let total = sum_operators(
            self.n_qubits(),
            [&mass, &hopp_wilson, &elec, &plaq, &gauss.scale_re(p.lambda)].into_iter(),
        );
        Ok(HamiltonianTerms { mass, hopp_wilson, elec, plaq, gauss, gauss_ops, total })
    }
}
