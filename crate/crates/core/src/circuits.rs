//! Gate-level synthesis of Pauli exponentials and Trotter steps, with depth and QASM export.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamics::StateVector;
use crate::error::{LgtError, Result};
use crate::pauli::{Axes, PauliAxis, PauliOperator, PauliString, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Rz(usize, f64),
    Rx(usize, f64),
    Cx(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) | Gate::Rx(q, _) => vec![q],
            Gate::Cx(c, t) => vec![c, t],
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cx(..))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// Phase φ of the overall factor e^{iφ} not carried by any gate.
    pub global_phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub single_qubit: usize,
    pub rz: usize,
    pub total: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, gates: Vec::new(), global_phase: 0.0 }
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        for q in g.qubits() {
            if q >= self.n_qubits {
                return Err(LgtError::ModeOutOfRange { index: q, modes: self.n_qubits });
            }
        }
        if let Gate::Rz(_, a) | Gate::Rx(_, a) = g {
            if !a.is_finite() {
                return Err(LgtError::Parse(format!("non-finite rotation angle {a}")));
            }
        }
        if let Gate::Cx(c, t) = g {
            if c == t {
                return Err(LgtError::Parse(format!("cx with identical operands q[{c}]")));
            }
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits, "circuit widths differ");
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// Depth under all-to-all connectivity, gates placed as late as possible.
    pub fn depth(&self) -> usize {
        self.alap_layers().into_iter().max().map_or(0, |l| l + 1)
    }

    /// Layer index of every gate in an as-late-as-possible schedule.
    pub fn alap_layers(&self) -> Vec<usize> {
        let mut from_end = vec![0usize; self.n_qubits];
        let mut rev_level = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate().rev() {
            let qs = g.qubits();
            let lvl = qs.iter().map(|&q| from_end[q]).max().unwrap_or(0);
            rev_level[i] = lvl;
            for q in qs {
                from_end[q] = lvl + 1;
            }
        }
        let depth = from_end.iter().copied().max().unwrap_or(0);
        rev_level.iter().map(|&l| depth - 1 - l).collect()
    }

    pub fn counts(&self) -> GateCounts {
        let cnot = self.cnot_count();
        GateCounts {
            cnot,
            single_qubit: self.gates.len() - cnot,
            rz: self.gates.iter().filter(|g| matches!(g, Gate::Rz(..))).count(),
            total: self.gates.len(),
            depth: self.depth(),
        }
    }

    pub fn apply(&self, state: &mut StateVector) {
        for g in &self.gates {
            apply_gate(state, g);
        }
        if self.global_phase != 0.0 {
            let ph = C64::from_polar(1.0, self.global_phase);
            state.amps.iter_mut().for_each(|a| *a *= ph);
        }
    }

    /// Dense unitary, column k = circuit applied to |k>.
    pub fn unitary(&self) -> Result<nalgebra::DMatrix<C64>> {
        if self.n_qubits > crate::pauli::DENSE_LIMIT {
            return Err(LgtError::SizeLimit { what: "dense circuit unitary", size: self.n_qubits, limit: crate::pauli::DENSE_LIMIT });
        }
        let dim = 1usize << self.n_qubits;
        let mut u = nalgebra::DMatrix::<C64>::zeros(dim, dim);
        for k in 0..dim {
            let mut s = StateVector::basis(self.n_qubits, k)?;
            self.apply(&mut s);
            for (r, a) in s.amps.iter().enumerate() {
                u[(r, k)] = *a;
            }
        }
        Ok(u)
    }
}

fn single_qubit(state: &mut StateVector, q: usize, m: [[C64; 2]; 2]) {
    let bit = 1usize << (state.n_qubits - 1 - q);
    for i in 0..state.amps.len() {
        if i & bit == 0 {
            let (a0, a1) = (state.amps[i], state.amps[i | bit]);
            state.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            state.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub fn apply_gate(state: &mut StateVector, g: &Gate) {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match *g {
        Gate::H(q) => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            single_qubit(state, q, [[h, h], [h, -h]]);
        }
        Gate::S(q) => single_qubit(state, q, [[one, z], [z, C64::new(0.0, 1.0)]]),
        Gate::Sdg(q) => single_qubit(state, q, [[one, z], [z, C64::new(0.0, -1.0)]]),
        Gate::Rz(q, a) => single_qubit(state, q, [[C64::from_polar(1.0, -a / 2.0), z], [z, C64::from_polar(1.0, a / 2.0)]]),
        Gate::Rx(q, a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            single_qubit(state, q, [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]]);
        }
        Gate::Cx(c, t) => {
            let n = state.n_qubits;
            let (cb, tb) = (1usize << (n - 1 - c), 1usize << (n - 1 - t));
            for i in 0..state.amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    state.amps.swap(i, i | tb);
                }
            }
        }
    }
}

/// Circuit for exp(−iθ·c·P) where `string = c·P` with real c.
pub fn synth_pauli_exp(string: &PauliString, theta: f64) -> Result<Circuit> {
    let axes: &Axes = &string.axes;
    if string.coeff.im.abs() > 1e-12 {
        return Err(LgtError::Unphysical(format!("exponent coefficient {} is not real", string.coeff)));
    }
    let angle = theta * string.coeff.re;
    let mut c = Circuit::new(axes.n_qubits());
    let support = axes.support_qubits();
    if support.is_empty() {
        c.global_phase = -angle;
        return Ok(c);
    }
    let mut pre = Vec::new();
    for &q in &support {
        match axes.get(q) {
            PauliAxis::X => pre.push(Gate::H(q)),
            PauliAxis::Y => {
                pre.push(Gate::Sdg(q));
                pre.push(Gate::H(q));
            }
            _ => {}
        }
    }
    let ladder: Vec<Gate> = support.windows(2).map(|w| Gate::Cx(w[0], w[1])).collect();
    let target = *support.last().unwrap();
    for g in pre.iter().chain(&ladder) {
        c.push(*g)?;
    }
    c.push(Gate::Rz(target, 2.0 * angle))?;
    for g in ladder.iter().rev() {
        c.push(*g)?;
    }
    for g in pre.iter().rev() {
        c.push(match *g {
            Gate::Sdg(q) => Gate::S(q),
            other => other,
        })?;
    }
    Ok(c)
}

/// One first-order Trotter step: per-string circuits concatenated in operator order.
pub fn synth_trotter_step(h: &PauliOperator, dt: f64) -> Result<Circuit> {
    let mut c = Circuit::new(h.n_qubits());
    for (axes, coeff) in h.terms() {
        let s = PauliString { coeff: C64::new(coeff.re, 0.0), axes: axes.clone() };
        c.append(&synth_pauli_exp(&s, dt)?);
    }
    Ok(c)
}

pub fn export_qasm(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "qreg q[{}];", c.n_qubits);
    if c.global_phase != 0.0 {
        let _ = writeln!(s, "// global_phase {:?}", c.global_phase);
    }
    for g in &c.gates {
        let _ = match *g {
            Gate::H(q) => writeln!(s, "h q[{q}];"),
            Gate::S(q) => writeln!(s, "s q[{q}];"),
            Gate::Sdg(q) => writeln!(s, "sdg q[{q}];"),
            Gate::Rz(q, a) => writeln!(s, "rz({a:?}) q[{q}];"),
            Gate::Rx(q, a) => writeln!(s, "rx({a:?}) q[{q}];"),
            Gate::Cx(a, b) => writeln!(s, "cx q[{a}],q[{b}];"),
        };
    }
    s
}

fn parse_operand(s: &str) -> Result<usize> {
    let s = s.trim();
    s.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| LgtError::Parse(format!("bad qubit operand '{s}'")))
}

/// Parses the subset of OpenQASM 2.0 emitted by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut phase = 0.0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("// global_phase") {
            phase = rest.trim().parse().map_err(|_| LgtError::Parse(format!("line {}: bad global phase", lineno + 1)))?;
            continue;
        }
        if line.is_empty() || line.starts_with("//") || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line.strip_suffix(';').ok_or_else(|| LgtError::Parse(format!("line {}: missing ';'", lineno + 1)))?;
        if let Some(r) = stmt.strip_prefix("qreg") {
            let n = parse_operand(r)?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| LgtError::Parse("gate before qreg declaration".into()))?;
        let (head, args) = stmt.split_once(' ').ok_or_else(|| LgtError::Parse(format!("line {}: '{stmt}'", lineno + 1)))?;
        let angle = |h: &str| -> Result<f64> {
            h.split_once('(')
                .and_then(|(_, r)| r.strip_suffix(')'))
                .and_then(|a| a.trim().parse().ok())
                .ok_or_else(|| LgtError::Parse(format!("line {}: bad angle in '{h}'", lineno + 1)))
        };
        let gate = match head {
            "h" => Gate::H(parse_operand(args)?),
            "s" => Gate::S(parse_operand(args)?),
            "sdg" => Gate::Sdg(parse_operand(args)?),
            "cx" => {
                let (a, b) = args.split_once(',').ok_or_else(|| LgtError::Parse(format!("line {}: cx needs two operands", lineno + 1)))?;
                Gate::Cx(parse_operand(a)?, parse_operand(b)?)
            }
            h if h.starts_with("rz(") => Gate::Rz(parse_operand(args)?, angle(h)?),
            h if h.starts_with("rx(") => Gate::Rx(parse_operand(args)?, angle(h)?),
            other => return Err(LgtError::Parse(format!("line {}: unsupported gate '{other}'", lineno + 1))),
        };
        c.push(gate)?;
    }
    let mut c = circuit.ok_or_else(|| LgtError::Parse("no qreg declaration".into()))?;
    c.global_phase = phase;
    Ok(c)
}
