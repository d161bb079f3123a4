//! Qubit, Pauli-string and CNOT accounting.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::gauge::{encode, spin_matrices, EncodedLink, SpinSystem};
use crate::lattice::{qubit_totals, Boundary, Encoding, LatticeSpec, QubitTotals};
use crate::matter::{clifford_rep, FermionMapping, MappingKind};
use crate::pauli::{Classification, PauliOperator, C64};

/// CNOTs of one first-order Trotter step: 2·(support − 1) per non-identity string.
pub fn cnot_per_trotter_step(op: &PauliOperator) -> usize {
    op.terms().iter().map(|(a, _)| a.support()).filter(|&s| s > 0).map(|s| 2 * (s - 1)).sum()
}

pub fn support_histogram(op: &PauliOperator) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for (a, _) in op.terms() {
        *h.entry(a.support()).or_insert(0) += 1;
    }
    h
}

pub fn qubit_report(spec: &LatticeSpec, spin: SpinSystem, enc: Encoding) -> QubitTotals {
    qubit_totals(spec, spin.two_s, enc)
}

/// Strings with nonzero real part in one `a†_i U a_j + h.c.` element: 2(n_real + n_imag + 2 n_mix).
pub fn hopping_formula(u: Classification) -> u128 {
    2 * (u.n_real + u.n_imag + 2 * u.n_mixed) as u128
}

/// Strings of `U U U† U† + h.c.` for four independent links.
pub fn plaquette_formula(u: Classification) -> u128 {
    let (r, i, m) = (u.n_real as u128, u.n_imag as u128, u.n_mixed as u128);
    let n = r + i + m;
    n.pow(4) - 4 * r * i.pow(3) - 4 * r.pow(3) * i - m * m * (2 * r * r + 2 * i * i + 8 * r * i)
}

/// Per-link columns of the spin-truncation resource table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkCounts {
    pub hopping: u128,
    pub e_op: u128,
    pub e_sq: u128,
    pub plaquette: u128,
}

pub fn u_classification(spin: SpinSystem, enc: Encoding) -> Result<Classification> {
    Ok(EncodedLink::build(spin, enc, 0.0)?.u.classify())
}

/// Counts from the closed forms, requiring only the classification of the encoded U.
pub fn link_counts_formula(spin: SpinSystem, enc: Encoding) -> Result<LinkCounts> {
    let l = EncodedLink::build(spin, enc, 0.0)?;
    let u = l.u.classify();
    Ok(LinkCounts { hopping: hopping_formula(u), e_op: l.e.len() as u128, e_sq: l.e_sq.len() as u128, plaquette: plaquette_formula(u) })
}

/// Explicit construction of one hopping element with its conjugate, on two JW modes plus the link.
pub fn hopping_exact(spin: SpinSystem, enc: Encoding) -> Result<usize> {
    let l = EncodedLink::build(spin, enc, 0.0)?;
    let f = FermionMapping::new(MappingKind::JordanWigner, 2).map_bilinear(0, 1, C64::new(1.0, 0.0))?;
    Ok(f.tensor(&l.u).plus_hc().len())
}

/// Explicit construction of one plaquette `U₁U₂U₃†U₄† + h.c.`.
pub fn plaquette_exact(spin: SpinSystem, enc: Encoding) -> Result<usize> {
    let l = EncodedLink::build(spin, enc, 0.0)?;
    let loop_op = l.u.tensor(&l.u).tensor(&l.u_dag).tensor(&l.u_dag);
    Ok(loop_op.plus_hc().len())
}

pub fn link_counts_exact(spin: SpinSystem, enc: Encoding) -> Result<LinkCounts> {
    let l = EncodedLink::build(spin, enc, 0.0)?;
    Ok(LinkCounts {
        hopping: hopping_exact(spin, enc)? as u128,
        e_op: l.e.len() as u128,
        e_sq: l.e_sq.len() as u128,
        plaquette: plaquette_exact(spin, enc)? as u128,
    })
}

/// Closed-form per-term Pauli counts of a full lattice Hamiltonian (without the Gauss regulator).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermPredictions {
    pub mass: u128,
    pub hopping: u128,
    pub electric: u128,
    pub plaquette: u128,
}

impl TermPredictions {
    pub fn total(&self) -> u128 {
        self.mass + self.hopping + self.electric + self.plaquette
    }
}

pub fn predict_pauli_counts(spec: &LatticeSpec, spin: SpinSystem, enc: Encoding, r: f64) -> Result<TermPredictions> {
    let c = spec.counts();
    let rep = clifford_rep(spec.d)?;
    let nnz = |m: &nalgebra::DMatrix<C64>| m.iter().filter(|z| z.norm() > 1e-14).count() as u128;
    let link = EncodedLink::build(spin, enc, 0.0)?;
    let u = link.u.classify();
    let mass = c.n_sites as u128 * nnz(&rep.gammas[0]);
    let mut hopping = 0u128;
    for k in 0..spec.d {
        let along = match spec.boundary {
            Boundary::Periodic => spec.extents[k],
            Boundary::Open => spec.extents[k] - 1,
        } as u128;
        let others: u128 = (0..spec.d).filter(|&j| j != k).map(|j| spec.extents[j] as u128).product();
        let per_dir = along * others;
        hopping += per_dir * nnz(&rep.gamma_mix(k, r)) * hopping_formula(u);
    }
    let has_id = link.e_sq.terms().iter().any(|(a, _)| a.is_identity());
    let e_non_id = link.e_sq.len() as u128 - has_id as u128;
    let electric = c.n_links as u128 * e_non_id + (has_id && c.n_links > 0) as u128;
    let plaquette = c.n_plaquettes as u128 * plaquette_formula(u);
    Ok(TermPredictions { mass, hopping, electric, plaquette })
}

/// Row of the resource CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceRow {
    pub term: String,
    pub spin: f64,
    pub encoding: Encoding,
    pub n_pauli_exact: Option<u128>,
    pub n_pauli_formula: Option<u128>,
    pub n_cnot: Option<u128>,
    pub n_qubits_fermionic: u64,
    pub n_qubits_gauge: u64,
}

pub const CSV_HEADER: &str = "term,S,encoding,n_pauli_exact,n_pauli_formula,n_cnot,n_qubits_fermionic,n_qubits_gauge";

impl ResourceRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u128>| v.map(|x| x.to_string()).unwrap_or_default();
        let enc = match self.encoding {
            Encoding::Log => "log",
            Encoding::Linear => "linear",
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.term,
            self.spin,
            enc,
            opt(self.n_pauli_exact),
            opt(self.n_pauli_formula),
            opt(self.n_cnot),
            self.n_qubits_fermionic,
            self.n_qubits_gauge
        )
    }
}

/// Largest spin for which per-link strings are enumerated explicitly.
pub const EXACT_SPIN_LIMIT_TWO_S: u64 = 7;

/// Per-link table for one lattice over a list of spins; exact counts where enumerable, formula otherwise.
pub fn scaling_table(spec: &LatticeSpec, spins: &[f64], encodings: &[Encoding]) -> Result<Vec<ResourceRow>> {
    let mut rows = Vec::new();
    for &enc in encodings {
        for &s in spins {
            let spin = SpinSystem::new(s)?;
            let q = qubit_report(spec, spin, enc);
            let f = link_counts_formula(spin, enc)?;
            let exact = if spin.two_s <= EXACT_SPIN_LIMIT_TWO_S { Some(link_counts_exact(spin, enc)?) } else { None };
            let row = |term: &str, ex: Option<u128>, fo: u128| ResourceRow {
                term: term.to_string(),
                spin: s,
                encoding: enc,
                n_pauli_exact: ex,
                n_pauli_formula: Some(fo),
                n_cnot: None,
                n_qubits_fermionic: q.fermionic,
                n_qubits_gauge: q.gauge,
            };
            rows.push(row("hopping_per_link", exact.map(|e| e.hopping), f.hopping));
            rows.push(row("e_op_per_link", exact.map(|e| e.e_op), f.e_op));
            rows.push(row("e_sq_per_link", exact.map(|e| e.e_sq), f.e_sq));
            rows.push(row("plaquette_each", exact.map(|e| e.plaquette), f.plaquette));
            let p = predict_pauli_counts(spec, spin, enc, 1.0)?;
            rows.push(row(&format!("hamiltonian_total[{}]", spec.tag()), None, p.total()));
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ResourceRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.to_csv());
    }
    s
}

/// Sx string counts of the logarithmic encoding for d_S = 2^k, k = 1..=k_max.
pub fn log_sx_counts(k_max: u32) -> Result<Vec<(usize, usize)>> {
    (1..=k_max)
        .map(|k| {
            let d = 1usize << k;
            let spin = SpinSystem { two_s: d as u64 - 1 };
            Ok((d, encode(&spin_matrices(spin).sx, Encoding::Log)?.len()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_formula() {
        let op = PauliOperator::parse(&[(C64::new(1., 0.), "ZIII"), (C64::new(1., 0.), "ZZZZ"), (C64::new(1., 0.), "IIII")]).unwrap();
        assert_eq!(cnot_per_trotter_step(&op), 6);
        let single = PauliOperator::parse(&[(C64::new(1., 0.), "IZI")]).unwrap();
        assert_eq!(cnot_per_trotter_step(&single), 0);
        let h = support_histogram(&op);
        assert_eq!(h[&0], 1);
        assert_eq!(h[&4], 1);
    }

    #[test]
    fn cnot_is_additive() {
        let a = PauliOperator::parse(&[(C64::new(1., 0.), "XXI"), (C64::new(1., 0.), "IYY")]).unwrap();
        let b = PauliOperator::parse(&[(C64::new(1., 0.), "ZZZ")]).unwrap();
        assert_eq!(cnot_per_trotter_step(&a.add(&b)), cnot_per_trotter_step(&a) + cnot_per_trotter_step(&b));
    }

    #[test]
    fn small_spin_link_counts() {
        let s = SpinSystem::new(0.5).unwrap();
        let c = link_counts_exact(s, Encoding::Log).unwrap();
        assert_eq!(c, LinkCounts { hopping: 4, e_op: 1, e_sq: 1, plaquette: 8 });
        assert_eq!(link_counts_formula(s, Encoding::Log).unwrap(), c);
    }

    #[test]
    fn linear_plaquette_formula() {
        for two_s in 1..=5u64 {
            let s = SpinSystem { two_s };
            let u = u_classification(s, Encoding::Linear).unwrap();
            let sv = two_s as f64 / 2.0;
            assert_eq!(plaquette_formula(u) as f64, 2048.0 * sv.powi(4));
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let spec = LatticeSpec::new(&[2, 2], Boundary::Open);
        let rows = scaling_table(&spec, &[0.5], &[Encoding::Log]).unwrap();
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.contains("plaquette_each,0.5,log,8,8,"));
    }
}
