//! JSON scenario configs, built-in presets, and the run / resources / qasm drivers.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circuits::{export_qasm, synth_trotter_step, GateCounts};
use crate::dynamics::{trotter_evolve, ExactMethod, Ordering, Propagator, Readout, SiteLabel, StateVector, TrotterPlan};
use crate::error::{LgtError, Result};
use crate::gauge::SpinSystem;
use crate::hamiltonian::{GaussCharge, LatticeSystem, ModelParams};
use crate::lattice::{qubit_totals, Encoding, LatticeSpec};
use crate::matter::MappingKind;
use crate::pauli::PauliOperator;
use crate::resources::{cnot_per_trotter_step, predict_pauli_counts, scaling_table, ResourceRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "vacuum_decay")]
    VacuumDecay,
    #[serde(rename = "string_breaking_1d")]
    StringBreaking1d,
    #[serde(rename = "double_plaquette_2d")]
    DoublePlaquette2d,
    #[serde(rename = "resource_report")]
    ResourceReport,
    #[serde(rename = "custom")]
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub m: f64,
    pub r: f64,
    pub a: f64,
    pub e: f64,
    /// Gauss penalty weight; `null` selects 10·max(m, e²/2).
    #[serde(default)]
    pub lambda: Option<f64>,
}

impl ModelConfig {
    pub fn params(&self) -> ModelParams {
        let p = ModelParams::new(self.m, self.r, self.a, self.e);
        match self.lambda {
            Some(l) => p.with_lambda(l),
            None => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    /// Every site in its Dirac-sea vacuum, every dynamical link at zero flux.
    Vacuum,
    /// Unit flux along the direction-0 links through the origin row, zero elsewhere.
    FluxString,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(NamedState),
    Explicit { sites: Vec<String>, fluxes: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegisterTable {
    pub lattice: LatticeSpec,
    pub spins: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TotalCase {
    pub lattice: LatticeSpec,
    pub spin: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSection {
    /// Spins for the per-link string-count table.
    #[serde(default)]
    pub link_spins: Vec<f64>,
    #[serde(default)]
    pub encodings: Vec<Encoding>,
    #[serde(default)]
    pub register_tables: Vec<RegisterTable>,
    /// Whole-lattice Hamiltonian string totals.
    #[serde(default)]
    pub totals: Vec<TotalCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub lattice: LatticeSpec,
    pub model: ModelConfig,
    pub mapping: MappingKind,
    pub encoding: Encoding,
    pub spin: f64,
    pub theta: Vec<f64>,
    #[serde(default)]
    pub gauss_charge: GaussCharge,
    pub dt: Vec<f64>,
    pub total_time: f64,
    pub initial_state: InitialState,
    pub exact: bool,
    pub exact_method: ExactMethod,
    pub ordering: Ordering,
    #[serde(default)]
    pub probe_times: Vec<f64>,
    pub top_labels: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub resources: ResourceSection,
}

fn lattice_json(d: usize, extents: &[usize], boundary: &str, statics: Value) -> Value {
    json!({ "d": d, "extents": extents, "boundary": boundary, "static_links": statics })
}

/// Fully specified configuration of a named scenario.
pub fn preset(kind: ScenarioKind) -> Value {
    let common = json!({
        "mapping": "jw",
        "encoding": "log",
        "gauss_charge": "mapped",
        "exact": true,
        "exact_method": "auto",
        "ordering": "canonical",
        "top_labels": 12,
        "output": null,
        "resources": {}
    });
    let specific = match kind {
        ScenarioKind::VacuumDecay => json!({
            "scenario": "vacuum_decay",
            "lattice": lattice_json(1, &[3], "periodic", json!([])),
            "model": { "m": 0.5, "r": 1.0, "a": 0.5, "e": std::f64::consts::SQRT_2, "lambda": null },
            "spin": 1.0,
            "theta": [0.0],
            "dt": [0.1, 0.05, 0.01],
            "total_time": 2.0,
            "initial_state": "vacuum",
            "probe_times": [0.4]
        }),
        ScenarioKind::StringBreaking1d => json!({
            "scenario": "string_breaking_1d",
            "lattice": lattice_json(1, &[3], "open", json!([
                { "site": [-1], "dir": 0, "flux": 1.0 },
                { "site": [2], "dir": 0, "flux": 1.0 }
            ])),
            "model": { "m": 0.4, "r": 1.0, "a": 0.4, "e": 2.0, "lambda": null },
            "spin": 1.0,
            "theta": [0.0],
            "dt": [0.1, 0.05, 0.01],
            "total_time": 2.0,
            "initial_state": "flux_string",
            "probe_times": [1.0, 2.0]
        }),
        ScenarioKind::DoublePlaquette2d => json!({
            "scenario": "double_plaquette_2d",
            "lattice": lattice_json(2, &[3, 2], "open", json!([
                { "site": [-1, 0], "dir": 0, "flux": 1.0 },
                { "site": [2, 0], "dir": 0, "flux": 1.0 }
            ])),
            "model": { "m": 0.4, "r": 1.0, "a": 0.4, "e": 2.0, "lambda": null },
            "spin": 0.5,
            "theta": [0.5, 0.5],
            "dt": [0.05, 0.025, 0.012],
            "total_time": 1.2,
            "initial_state": "flux_string",
            "exact_method": "krylov",
            "probe_times": [0.6, 1.2]
        }),
        ScenarioKind::ResourceReport => json!({
            "scenario": "resource_report",
            "lattice": lattice_json(2, &[4, 4], "periodic", json!([])),
            "model": { "m": 0.5, "r": 1.0, "a": 0.5, "e": 1.0, "lambda": null },
            "spin": 1.0,
            "theta": [0.0, 0.0],
            "dt": [0.1],
            "total_time": 0.1,
            "initial_state": "vacuum",
            "exact": false,
            "resources": {
                "link_spins": [0.5, 1.0, 1.5, 2.0, 3.0, 3.5, 7.5, 15.5, 31.5, 63.5, 127.5, 255.5],
                "encodings": ["log", "linear"],
                "register_tables": [
                    { "lattice": lattice_json(2, &[2, 3], "open", json!([])), "spins": [0.5, 1.0, 1.5, 3.5] },
                    { "lattice": lattice_json(2, &[4, 4], "open", json!([])), "spins": [0.5, 1.0, 1.5, 3.5, 7.5] },
                    { "lattice": lattice_json(2, &[10, 10], "open", json!([])), "spins": [1.0, 1.5, 3.5, 7.5] },
                    { "lattice": lattice_json(2, &[100, 100], "open", json!([])), "spins": [1.0, 1.5, 3.5, 7.5, 15.5] },
                    { "lattice": lattice_json(3, &[2, 2, 2], "open", json!([])), "spins": [0.5, 1.0, 1.5, 3.5] },
                    { "lattice": lattice_json(3, &[4, 4, 4], "open", json!([])), "spins": [1.0, 1.5, 3.5, 7.5, 15.5] },
                    { "lattice": lattice_json(3, &[10, 10, 10], "open", json!([])), "spins": [1.0, 1.5, 7.5, 15.5, 31.5] },
                    { "lattice": lattice_json(3, &[100, 100, 100], "open", json!([])), "spins": [1.0, 1.5, 3.5, 7.5, 15.5, 127.5, 255.5] }
                ],
                "totals": [
                    { "lattice": lattice_json(2, &[4, 4], "periodic", json!([])), "spin": 1.0 },
                    { "lattice": lattice_json(2, &[4, 4], "periodic", json!([])), "spin": 1.5 },
                    { "lattice": lattice_json(2, &[4, 4], "open", json!([])), "spin": 1.5 }
                ]
            }
        }),
        ScenarioKind::Custom => json!({ "scenario": "custom", "probe_times": [], "total_time": 1.0, "dt": [0.1] }),
    };
    let mut base = common;
    merge(&mut base, specific);
    base
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() && k != "lattice" => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

impl ScenarioConfig {
    /// Overlays the user JSON on the preset named by its `scenario` field.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let user: Value = serde_json::from_str(text).map_err(|e| LgtError::config("<root>", e.to_string()))?;
        let name = user.get("scenario").cloned().ok_or_else(|| LgtError::config("scenario", "missing field"))?;
        let kind: ScenarioKind = serde_json::from_value(name).map_err(|e| LgtError::config("scenario", e.to_string()))?;
        let mut full = preset(kind);
        merge(&mut full, user);
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(full).map_err(|e| {
            let path = e.path().to_string();
            LgtError::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| LgtError::config(path.as_ref().display().to_string(), e.to_string()))?;
        Self::from_json_str(&text)
    }

    pub fn preset(kind: ScenarioKind) -> Self {
        serde_json::from_value(preset(kind)).expect("built-in preset deserializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate().map_err(|e| prefix("lattice", e))?;
        self.model.params().validate().map_err(|e| prefix("model", e))?;
        SpinSystem::new(self.spin).map_err(|e| LgtError::config("spin", e.to_string()))?;
        if !(self.total_time > 0.0) {
            return Err(LgtError::config("total_time", "must be positive"));
        }
        if self.dt.is_empty() {
            return Err(LgtError::config("dt", "at least one time step is required"));
        }
        for (i, &dt) in self.dt.iter().enumerate() {
            let steps = self.total_time / dt;
            if !(dt > 0.0) || (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                return Err(LgtError::config(format!("dt[{i}]"), format!("{dt} must be positive and divide total_time {}", self.total_time)));
            }
        }
        for (i, &t) in self.probe_times.iter().enumerate() {
            if !(0.0..=self.total_time + 1e-12).contains(&t) {
                return Err(LgtError::config(format!("probe_times[{i}]"), format!("{t} outside [0, total_time]")));
            }
        }
        if ![0, 1, self.lattice.d].contains(&self.theta.len()) {
            return Err(LgtError::config("theta", format!("expected 1 or {} values", self.lattice.d)));
        }
        Ok(())
    }

    pub fn spin_system(&self) -> SpinSystem {
        SpinSystem::new(self.spin).expect("validated spin")
    }

    pub fn system(&self) -> Result<LatticeSystem> {
        Ok(LatticeSystem::new(self.lattice.clone(), self.spin_system(), self.encoding, self.mapping, &self.theta)?.with_gauss_charge(self.gauss_charge))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

fn prefix(field: &str, e: LgtError) -> LgtError {
    match e {
        LgtError::Config { path, msg } => LgtError::config(format!("{field}.{path}"), msg),
        other => LgtError::config(field, other.to_string()),
    }
}

fn parse_site(s: &str) -> Result<SiteLabel> {
    Ok(match s {
        "o" | "vacuum" => SiteLabel::Vacuum,
        "p" | "particle" => SiteLabel::Particle,
        "a" | "antiparticle" => SiteLabel::Antiparticle,
        "b" | "pair" => SiteLabel::Pair,
        other => return Err(LgtError::config("initial_state.sites", format!("unknown site label '{other}'"))),
    })
}

/// Basis state for an initial-state label under the system's site and flux conventions.
pub fn initial_state(label: &InitialState, sys: &LatticeSystem) -> Result<StateVector> {
    let ro = Readout::new(sys);
    let n_links = sys.lattice.links().len();
    match label {
        InitialState::Named(NamedState::Vacuum) => ro.vacuum(),
        InitialState::Named(NamedState::FluxString) => {
            let fluxes: Vec<f64> = sys
                .lattice
                .links()
                .iter()
                .map(|l| {
                    let on_row = sys.lattice.coords(l.site).iter().skip(1).all(|&c| c == 0);
                    if l.dir == 0 && on_row {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            ro.configuration_state(&vec![SiteLabel::Vacuum; sys.lattice.n_sites()], &fluxes)
        }
        InitialState::Explicit { sites, fluxes } => {
            if fluxes.len() != n_links {
                return Err(LgtError::config("initial_state.fluxes", format!("expected {n_links} values")));
            }
            let labels = sites.iter().map(|s| parse_site(s)).collect::<Result<Vec<_>>>()?;
            ro.configuration_state(&labels, fluxes)
        }
    }
}

/// One time series: exact reference or a Trotter run at a given Δt.
#[derive(Clone, Debug)]
pub struct Curve {
    pub dt: Option<f64>,
    pub times: Vec<f64>,
    pub loschmidt: Vec<f64>,
    pub particle_number: Vec<f64>,
    pub distributions: Vec<BTreeMap<String, f64>>,
}

impl Curve {
    pub fn name(&self) -> String {
        match self.dt {
            None => "exact".into(),
            Some(dt) => format!("trotter_dt{dt}"),
        }
    }

    pub fn index_at(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() < 1e-9)
    }

    pub fn probability(&self, t: f64, label: &str) -> Option<f64> {
        self.index_at(t).map(|i| self.distributions[i].get(label).copied().unwrap_or(0.0))
    }

    pub fn loschmidt_at(&self, t: f64) -> Option<f64> {
        self.index_at(t).map(|i| self.loschmidt[i])
    }
}

/// Everything produced by a dynamics run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub n_qubits: usize,
    pub n_pauli: usize,
    pub n_cnot: usize,
    pub curves: Vec<Curve>,
    pub labels: Vec<String>,
}

pub const REL_ERROR_FLOOR: f64 = 1e-3;

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl RunReport {
    pub fn exact(&self) -> Option<&Curve> {
        self.curves.iter().find(|c| c.dt.is_none())
    }

    pub fn trotter(&self, dt: f64) -> Option<&Curve> {
        self.curves.iter().find(|c| c.dt.is_some_and(|d| (d - dt).abs() < 1e-12))
    }

    /// Largest |G_trotter − G_exact| over the Trotter curve's time points.
    pub fn max_abs_error(&self, dt: f64) -> Option<f64> {
        let ex = self.exact()?;
        let tr = self.trotter(dt)?;
        tr.times.iter().zip(&tr.loschmidt).map(|(&t, &g)| ex.loschmidt_at(t).map(|e| (g - e).abs())).try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
    }

    fn curve_csv(&self, c: &Curve) -> String {
        let ex = self.exact();
        let mut s = String::from("t,loschmidt,abs_error,rel_error,total_particle_number");
        for l in &self.labels {
            let _ = write!(s, ",{}", csv_field(l));
        }
        s.push_str(",other\n");
        for (i, &t) in c.times.iter().enumerate() {
            let g = c.loschmidt[i];
            let (abs, rel) = match (c.dt, ex.and_then(|e| e.loschmidt_at(t))) {
                (Some(_), Some(e)) => {
                    let a = (g - e).abs();
                    (format!("{a:.12}"), format!("{:.12}", a / e.max(REL_ERROR_FLOOR)))
                }
                _ => (String::new(), String::new()),
            };
            let _ = write!(s, "{t:.6},{g:.12},{abs},{rel},{:.12}", c.particle_number[i]);
            let dist = &c.distributions[i];
            let mut listed = 0.0;
            for l in &self.labels {
                let p = dist.get(l).copied().unwrap_or(0.0);
                listed += p;
                let _ = write!(s, ",{p:.12}");
            }
            let total: f64 = dist.values().sum();
            let _ = writeln!(s, ",{:.12}", (total - listed).max(0.0));
        }
        s
    }

    pub fn metadata(&self) -> Value {
        let errors: BTreeMap<String, Option<f64>> = self.config.dt.iter().map(|&dt| (format!("{dt}"), self.max_abs_error(dt))).collect();
        let probes: BTreeMap<String, Value> = self
            .config
            .probe_times
            .iter()
            .filter_map(|&t| {
                let c = self.exact().or_else(|| self.curves.last())?;
                let i = c.index_at(t)?;
                let mut top: Vec<(&String, &f64)> = c.distributions[i].iter().collect();
                top.sort_by(|a, b| b.1.total_cmp(a.1).then(a.0.cmp(b.0)));
                let top: serde_json::Map<String, Value> = top.into_iter().take(self.config.top_labels).map(|(k, v)| (k.clone(), json!(v))).collect();
                Some((format!("{t}"), json!({ "curve": c.name(), "loschmidt": c.loschmidt[i], "configurations": top })))
            })
            .collect();
        json!({
            "config": self.config.to_json(),
            "lambda_used": self.config.model.params().lambda,
            "n_qubits": self.n_qubits,
            "n_pauli": self.n_pauli,
            "n_cnot_per_step": self.n_cnot,
            "seed": null,
            "error_definitions": {
                "abs_error": "|G_trotter(t) - G_exact(t)| with G = |<phi0|phi(t)>|^2",
                "rel_error": format!("abs_error / max(G_exact(t), {REL_ERROR_FLOOR})")
            },
            "labels": self.labels,
            "max_abs_error": errors,
            "probes": probes
        })
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| LgtError::io(dir, e))?;
        let mut written = Vec::new();
        for c in &self.curves {
            let p = dir.join(format!("{}.csv", c.name()));
            std::fs::write(&p, self.curve_csv(c)).map_err(|e| LgtError::io(&p, e))?;
            written.push(p);
        }
        let p = dir.join("metadata.json");
        let text = serde_json::to_string_pretty(&self.metadata()).expect("metadata serializes");
        std::fs::write(&p, text + "\n").map_err(|e| LgtError::io(&p, e))?;
        written.push(p);
        Ok(written)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{:?}: {} qubits, {} Pauli strings, {} CNOTs per Trotter step\n",
            self.config.scenario, self.n_qubits, self.n_pauli, self.n_cnot
        );
        for c in &self.curves {
            let last = c.times.len() - 1;
            let _ = write!(s, "  {:<18} G(T={:.3}) = {:.6}  N = {:.6}", c.name(), c.times[last], c.loschmidt[last], c.particle_number[last]);
            if let Some(dt) = c.dt {
                if let Some(e) = self.max_abs_error(dt) {
                    let _ = write!(s, "  max|dG| = {e:.3e}");
                }
            }
            s.push('\n');
        }
        for &t in &self.config.probe_times {
            if let Some(c) = self.exact().or_else(|| self.curves.last()) {
                if let Some(i) = c.index_at(t) {
                    let mut top: Vec<_> = c.distributions[i].iter().collect();
                    top.sort_by(|a, b| b.1.total_cmp(a.1).then(a.0.cmp(b.0)));
                    let _ = writeln!(s, "  configurations at t={t} ({}):", c.name());
                    for (l, p) in top.into_iter().take(self.config.top_labels) {
                        let _ = writeln!(s, "    {l:<24} {:6.2}%", 100.0 * p);
                    }
                }
            }
        }
        s
    }
}

/// Per-basis-state label and particle-number cache.
struct LabelCache<'a> {
    ro: Readout<'a>,
    sys: &'a LatticeSystem,
    ids: Vec<u32>,
    numbers: Vec<f64>,
    names: Vec<String>,
    by_name: HashMap<String, u32>,
}

impl<'a> LabelCache<'a> {
    fn new(sys: &'a LatticeSystem) -> Self {
        let dim = 1usize << sys.n_qubits();
        LabelCache { ro: Readout::new(sys), sys, ids: vec![u32::MAX; dim], numbers: vec![0.0; dim], names: Vec::new(), by_name: HashMap::new() }
    }

    fn lookup(&mut self, idx: usize) -> (u32, f64) {
        if self.ids[idx] != u32::MAX {
            return (self.ids[idx], self.numbers[idx]);
        }
        let label = self.ro.label(idx).to_string();
        let occ = self.ro.occupations(idx);
        let ns = self.sys.layout.n_spinor;
        let g0 = &self.sys.clifford.gammas[0];
        let number: f64 = occ
            .chunks(ns)
            .map(|c| (0..ns).filter(|&a| c[a]).map(|a| g0[(a, a)].re).sum::<f64>() + ns as f64 / 2.0)
            .sum();
        let next = self.names.len() as u32;
        let id = *self.by_name.entry(label.clone()).or_insert_with(|| {
            self.names.push(label);
            next
        });
        self.ids[idx] = id;
        self.numbers[idx] = number;
        (id, number)
    }

    fn measure(&mut self, s: &StateVector) -> (f64, BTreeMap<String, f64>) {
        let mut acc: HashMap<u32, f64> = HashMap::new();
        let mut number = 0.0;
        for (idx, a) in s.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p < 1e-16 {
                continue;
            }
            let (id, n) = self.lookup(idx);
            *acc.entry(id).or_insert(0.0) += p;
            number += p * n;
        }
        let dist = acc.into_iter().map(|(id, p)| (self.names[id as usize].clone(), p)).collect();
        (number, dist)
    }
}

fn time_key(t: f64) -> i64 {
    (t * 1e9).round() as i64
}

/// Runs the configured dynamics: one exact reference (if enabled) and one Trotter curve per Δt.
pub fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let sys = cfg.system()?;
    let n = sys.n_qubits();
    if n > crate::dynamics::STATE_LIMIT {
        return Err(LgtError::SizeLimit { what: "statevector qubits", size: n, limit: crate::dynamics::STATE_LIMIT });
    }
    let terms = sys.assemble(&cfg.model.params())?;
    let h = terms.total.clone();
    let psi0 = initial_state(&cfg.initial_state, &sys)?;
    let mut cache = LabelCache::new(&sys);
    let mut curves = Vec::new();

    let mut grid: Vec<f64> = Vec::new();
    for &dt in &cfg.dt {
        let steps = (cfg.total_time / dt).round() as usize;
        grid.extend((0..=steps).map(|k| k as f64 * dt));
    }
    grid.extend(cfg.probe_times.iter().copied());
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| time_key(*a) == time_key(*b));

    if cfg.exact {
        let prop = Propagator::new(&h, cfg.exact_method)?;
        let mut c = Curve { dt: None, times: Vec::new(), loschmidt: Vec::new(), particle_number: Vec::new(), distributions: Vec::new() };
        let mut state = psi0.clone();
        let mut now = 0.0;
        for &t in &grid {
            if t > now {
                state = prop.evolve(&state, t - now);
                now = t;
            }
            let (num, dist) = cache.measure(&state);
            c.times.push(t);
            c.loschmidt.push(psi0.inner(&state).norm_sqr());
            c.particle_number.push(num);
            c.distributions.push(dist);
        }
        curves.push(c);
    }

    let groups = [&terms.mass, &terms.hopp_wilson, &terms.elec, &terms.plaq, &terms.gauss.scale_re(cfg.model.params().lambda)];
    for &dt in &cfg.dt {
        let plan = match cfg.ordering {
            Ordering::ByTermGroup => TrotterPlan::new(&groups, dt, cfg.total_time, cfg.ordering)?,
            _ => TrotterPlan::new(&[&h], dt, cfg.total_time, cfg.ordering)?,
        };
        let mut c = Curve { dt: Some(dt), times: Vec::new(), loschmidt: Vec::new(), particle_number: Vec::new(), distributions: Vec::new() };
        let mut state = psi0.clone();
        trotter_evolve(&mut state, &plan, |_, t, s| {
            let (num, dist) = cache.measure(s);
            c.times.push(t);
            c.loschmidt.push(psi0.inner(s).norm_sqr());
            c.particle_number.push(num);
            c.distributions.push(dist);
        });
        curves.push(c);
    }

    let reference = curves.iter().find(|c| c.dt.is_none()).or_else(|| curves.last()).expect("at least one curve");
    let mut peak: BTreeMap<String, f64> = BTreeMap::new();
    for d in &reference.distributions {
        for (l, &p) in d {
            let e = peak.entry(l.clone()).or_insert(0.0);
            *e = e.max(p);
        }
    }
    let mut ranked: Vec<(String, f64)> = peak.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let labels = ranked.into_iter().take(cfg.top_labels).map(|x| x.0).collect();

    Ok(RunReport {
        config: cfg.clone(),
        n_qubits: n,
        n_pauli: h.len(),
        n_cnot: cnot_per_trotter_step(&h),
        curves,
        labels,
    })
}

/// Largest predicted string count for which a Hamiltonian is assembled explicitly in reports.
pub const ASSEMBLY_LIMIT: u128 = 2_000_000;

/// Per-term rows for one lattice Hamiltonian: exact where it can be assembled, closed form always.
pub fn hamiltonian_rows(spec: &LatticeSpec, spin: f64, enc: Encoding, cfg: &ScenarioConfig) -> Result<Vec<ResourceRow>> {
    let s = SpinSystem::new(spin)?;
    let q = qubit_totals(spec, s.two_s, enc);
    let pred = predict_pauli_counts(spec, s, enc, cfg.model.r)?;
    let tag = spec.tag();
    let exact = if pred.total() <= ASSEMBLY_LIMIT {
        let theta = vec![0.0; spec.d];
        let sys = LatticeSystem::new(spec.clone(), s, enc, cfg.mapping, &theta)?.with_gauss_charge(cfg.gauss_charge);
        Some(sys.assemble(&cfg.model.params())?)
    } else {
        None
    };
    let row = |term: &str, op: Option<&PauliOperator>, formula: Option<u128>| ResourceRow {
        term: format!("{term}[{tag}]"),
        spin,
        encoding: enc,
        n_pauli_exact: op.map(|o| o.len() as u128),
        n_pauli_formula: formula,
        n_cnot: op.map(|o| cnot_per_trotter_step(o) as u128),
        n_qubits_fermionic: q.fermionic,
        n_qubits_gauge: q.gauge,
    };
    let e = exact.as_ref();
    let no_gauss = e.map(|t| crate::pauli::sum_operators(t.total.n_qubits(), [&t.mass, &t.hopp_wilson, &t.elec, &t.plaq].into_iter()));
    Ok(vec![
        row("mass", e.map(|t| &t.mass), Some(pred.mass)),
        row("hopping", e.map(|t| &t.hopp_wilson), Some(pred.hopping)),
        row("electric", e.map(|t| &t.elec), Some(pred.electric)),
        row("plaquette", e.map(|t| &t.plaq), Some(pred.plaquette)),
        row("hamiltonian", no_gauss.as_ref(), Some(pred.total())),
        row("gauss_penalty", e.map(|t| &t.gauss), None),
        row("total_with_gauss", e.map(|t| &t.total), None),
    ])
}

/// Resource rows for a config: its own Hamiltonian, plus the report tables when configured.
pub fn resources(cfg: &ScenarioConfig) -> Result<Vec<ResourceRow>> {
    cfg.validate()?;
    let mut rows = hamiltonian_rows(&cfg.lattice, cfg.spin, cfg.encoding, cfg)?;
    let r = &cfg.resources;
    if !r.link_spins.is_empty() {
        let encs = if r.encodings.is_empty() { vec![cfg.encoding] } else { r.encodings.clone() };
        rows.extend(scaling_table(&cfg.lattice, &r.link_spins, &encs)?);
    }
    for table in &r.register_tables {
        table.lattice.validate().map_err(|e| prefix("resources.register_tables.lattice", e))?;
        for &spin in &table.spins {
            let s = SpinSystem::new(spin)?;
            let q = qubit_totals(&table.lattice, s.two_s, cfg.encoding);
            rows.push(ResourceRow {
                term: format!("register[{}]", table.lattice.tag()),
                spin,
                encoding: cfg.encoding,
                n_pauli_exact: None,
                n_pauli_formula: None,
                n_cnot: None,
                n_qubits_fermionic: q.fermionic,
                n_qubits_gauge: q.gauge,
            });
        }
    }
    for case in &r.totals {
        rows.extend(hamiltonian_rows(&case.lattice, case.spin, cfg.encoding, cfg)?);
    }
    Ok(rows)
}

/// QASM text and gate counts of one first-order Trotter step at the config's first Δt.
pub fn trotter_step_qasm(cfg: &ScenarioConfig) -> Result<(String, GateCounts)> {
    cfg.validate()?;
    let sys = cfg.system()?;
    let terms = sys.assemble(&cfg.model.params())?;
    let (h, _) = terms.drop_identity();
    let c = synth_trotter_step(&h, cfg.dt[0])?;
    Ok((export_qasm(&c), c.counts()))
}
