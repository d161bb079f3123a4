//! Hypercubic lattices, their links and plaquettes, and the qubit register layout.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{LgtError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

/// A classical boundary link carrying a fixed flux (units of e).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaticLink {
    pub site: Vec<i64>,
    pub dir: usize,
    pub flux: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub d: usize,
    pub extents: Vec<usize>,
    pub boundary: Boundary,
    #[serde(default)]
    pub static_links: Vec<StaticLink>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub site: usize,
    pub dir: usize,
}

/// Elementary loop at `site` spanned by directions `k < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Plaquette {
    pub site: usize,
    pub k: usize,
    pub j: usize,
}

/// Ends of a link as seen from a site for the Gauss law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinkEnd {
    Dynamic(usize),
    Static(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCounts {
    pub n_sites: u64,
    pub n_links: u64,
    pub n_plaquettes: u64,
}

/// Enumerated lattice geometry.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub spec: LatticeSpec,
    strides: Vec<usize>,
    n_sites: usize,
    links: Vec<Link>,
    link_index: HashMap<Link, usize>,
    plaquettes: Vec<Plaquette>,
    statics: Vec<(Vec<i64>, usize, f64)>,
}

impl LatticeSpec {
    pub fn new(extents: &[usize], boundary: Boundary) -> Self {
        LatticeSpec { d: extents.len(), extents: extents.to_vec(), boundary, static_links: Vec::new() }
    }

    pub fn chain(n: usize, boundary: Boundary) -> Self {
        Self::new(&[n], boundary)
    }

    pub fn with_static(mut self, site: &[i64], dir: usize, flux: f64) -> Self {
        self.static_links.push(StaticLink { site: site.to_vec(), dir, flux });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(LgtError::config("lattice.d", "dimension must be at least 1"));
        }
        if self.extents.len() != self.d {
            return Err(LgtError::config("lattice.extents", format!("expected {} extents, got {}", self.d, self.extents.len())));
        }
        if let Some(i) = self.extents.iter().position(|&e| e == 0) {
            return Err(LgtError::config(format!("lattice.extents[{i}]"), "extent must be at least 1"));
        }
        for (i, s) in self.static_links.iter().enumerate() {
            let path = format!("lattice.static_links[{i}]");
            if self.boundary != Boundary::Open {
                return Err(LgtError::config(path, "static links require open boundaries"));
            }
            if s.site.len() != self.d || s.dir >= self.d {
                return Err(LgtError::config(path, "site/dir do not match the lattice dimension"));
            }
            let inside = |c: &[i64]| c.iter().zip(&self.extents).all(|(&x, &n)| x >= 0 && (x as usize) < n);
            let mut head = s.site.clone();
            head[s.dir] += 1;
            let (a, b) = (inside(&s.site), inside(&head));
            if a && b {
                return Err(LgtError::config(path, "link lies inside the dynamical region"));
            }
            if !a && !b {
                return Err(LgtError::config(path, "link does not touch the lattice"));
            }
        }
        Ok(())
    }

    /// Short label such as `4x4_periodic`.
    pub fn tag(&self) -> String {
        let ext: Vec<String> = self.extents.iter().map(|e| e.to_string()).collect();
        let b = match self.boundary {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        };
        format!("{}_{}", ext.join("x"), b)
    }

    pub fn n_sites(&self) -> u64 {
        self.extents.iter().map(|&e| e as u64).product()
    }

    /// Closed-form site, link and plaquette counts (no enumeration).
    pub fn counts(&self) -> LatticeCounts {
        let ns = self.n_sites();
        let along = |k: usize| -> u64 {
            let n = self.extents[k] as u64;
            match self.boundary {
                Boundary::Periodic => n,
                Boundary::Open => n - 1,
            }
        };
        let others = |skip: &[usize]| -> u64 {
            (0..self.d).filter(|i| !skip.contains(i)).map(|i| self.extents[i] as u64).product()
        };
        let n_links = (0..self.d).map(|k| along(k) * others(&[k])).sum();
        let mut n_plaquettes = 0;
        for k in 0..self.d {
            for j in k + 1..self.d {
                n_plaquettes += along(k) * along(j) * others(&[k, j]);
            }
        }
        LatticeCounts { n_sites: ns, n_links, n_plaquettes }
    }
}

/// Spinor components for spatial dimension `d` (2^{d/2} for even d, 2^{(d+1)/2} for odd d).
pub fn n_spinor(d: usize) -> usize {
    if d % 2 == 0 {
        1 << (d / 2)
    } else {
        1 << d.div_ceil(2)
    }
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Self> {
        spec.validate()?;
        let d = spec.d;
        let mut strides = vec![1usize; d];
        for k in (0..d.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * spec.extents[k + 1];
        }
        let n_sites = spec.extents.iter().product();
        let mut lat = Lattice {
            spec,
            strides,
            n_sites,
            links: Vec::new(),
            link_index: HashMap::new(),
            plaquettes: Vec::new(),
            statics: Vec::new(),
        };
        for s in 0..n_sites {
            for k in 0..d {
                if lat.neighbor(s, k).is_some() {
                    let l = Link { site: s, dir: k };
                    lat.link_index.insert(l, lat.links.len());
                    lat.links.push(l);
                }
            }
        }
        for s in 0..n_sites {
            for k in 0..d {
                for j in k + 1..d {
                    if lat.neighbor(s, k).is_some() && lat.neighbor(s, j).is_some() {
                        lat.plaquettes.push(Plaquette { site: s, k, j });
                    }
                }
            }
        }
        lat.statics = lat.spec.static_links.iter().map(|s| (s.site.clone(), s.dir, s.flux)).collect();
        Ok(lat)
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        (0..self.d()).map(|k| (site / self.strides[k]) % self.spec.extents[k]).collect()
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    /// Site reached by one step in `+k`, if it exists.
    pub fn neighbor(&self, site: usize, k: usize) -> Option<usize> {
        let mut c = self.coords(site);
        let n = self.spec.extents[k];
        if c[k] + 1 < n {
            c[k] += 1;
        } else if self.spec.boundary == Boundary::Periodic {
            c[k] = 0;
        } else {
            return None;
        }
        Some(self.site_index(&c))
    }

    /// Site reached by one step in `-k`, if it exists.
    pub fn neighbor_back(&self, site: usize, k: usize) -> Option<usize> {
        let mut c = self.coords(site);
        if c[k] > 0 {
            c[k] -= 1;
        } else if self.spec.boundary == Boundary::Periodic {
            c[k] = self.spec.extents[k] - 1;
        } else {
            return None;
        }
        Some(self.site_index(&c))
    }

    pub fn link_id(&self, link: Link) -> Option<usize> {
        self.link_index.get(&link).copied()
    }

    /// Normalizes a link given as (site, ±k) to its positive-direction form.
    pub fn canonical_link(&self, site: usize, k: usize, forward: bool) -> Option<Link> {
        if forward {
            self.neighbor(site, k).map(|_| Link { site, dir: k })
        } else {
            self.neighbor_back(site, k).map(|s| Link { site: s, dir: k })
        }
    }

    /// The four links of a plaquette in traversal order: (x,k), (x+k,j), (x+j,k), (x,j).
    pub fn plaquette_links(&self, p: Plaquette) -> [usize; 4] {
        let xk = self.neighbor(p.site, p.k).expect("plaquette corner");
        let xj = self.neighbor(p.site, p.j).expect("plaquette corner");
        let get = |s, d| self.link_id(Link { site: s, dir: d }).expect("plaquette edge");
        [get(p.site, p.k), get(xk, p.j), get(xj, p.k), get(p.site, p.j)]
    }

    /// Links entering (`x - k̂ → x`) and leaving (`x → x + k̂`) a site, including static boundary links.
    pub fn gauss_links(&self, site: usize) -> (Vec<LinkEnd>, Vec<LinkEnd>) {
        let mut incoming = Vec::new();
        let mut outgoing = Vec::new();
        let c: Vec<i64> = self.coords(site).iter().map(|&x| x as i64).collect();
        for k in 0..self.d() {
            if let Some(l) = self.canonical_link(site, k, false) {
                incoming.push(LinkEnd::Dynamic(self.link_index[&l]));
            }
            if let Some(l) = self.canonical_link(site, k, true) {
                outgoing.push(LinkEnd::Dynamic(self.link_index[&l]));
            }
        }
        for (s, dir, flux) in &self.statics {
            if *s == c {
                outgoing.push(LinkEnd::Static(*flux));
            }
            let mut head = s.clone();
            head[*dir] += 1;
            if head == c {
                incoming.push(LinkEnd::Static(*flux));
            }
        }
        (incoming, outgoing)
    }
}

/// Gauge-field encoding of one link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[serde(alias = "logarithmic")]
    Log,
    Linear,
}

/// Qubits per link for a spin-S truncation.
pub fn qubits_per_link(two_s: u64, enc: Encoding) -> u64 {
    let d_s = two_s + 1;
    match enc {
        Encoding::Log => 64 - (d_s - 1).leading_zeros() as u64,
        Encoding::Linear => d_s,
    }
}

/// Position of fermionic modes and link registers on the qubit line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub n_spinor: usize,
    pub qubits_per_link: usize,
    pub n_sites: usize,
    pub n_links: usize,
    pub n_fermionic: usize,
    pub n_gauge: usize,
    pub n_total: usize,
}

/// Register totals that may exceed what can be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitTotals {
    pub fermionic: u64,
    pub gauge: u64,
    pub total: u64,
}

impl RegisterLayout {
    pub fn new(lattice: &Lattice, two_s: u64, enc: Encoding) -> Self {
        let n_spinor = n_spinor(lattice.d());
        let qpl = qubits_per_link(two_s, enc) as usize;
        let n_fermionic = lattice.n_sites() * n_spinor;
        let n_gauge = lattice.links().len() * qpl;
        RegisterLayout {
            n_spinor,
            qubits_per_link: qpl,
            n_sites: lattice.n_sites(),
            n_links: lattice.links().len(),
            n_fermionic,
            n_gauge,
            n_total: n_fermionic + n_gauge,
        }
    }

    pub fn mode(&self, site: usize, component: usize) -> usize {
        site * self.n_spinor + component
    }

    pub fn link_offset(&self, link: usize) -> usize {
        self.n_fermionic + link * self.qubits_per_link
    }

    pub fn link_qubits(&self, link: usize) -> std::ops::Range<usize> {
        let o = self.link_offset(link);
        o..o + self.qubits_per_link
    }
}

/// Qubit totals from the closed-form lattice counts.
pub fn qubit_totals(spec: &LatticeSpec, two_s: u64, enc: Encoding) -> QubitTotals {
    let c = spec.counts();
    let fermionic = c.n_sites * n_spinor(spec.d) as u64;
    let gauge = c.n_links * qubits_per_link(two_s, enc);
    QubitTotals { fermionic, gauge, total: fermionic + gauge }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_counts() {
        let lat = Lattice::new(LatticeSpec::chain(3, Boundary::Periodic)).unwrap();
        assert_eq!((lat.n_sites(), lat.links().len(), lat.plaquettes().len()), (3, 3, 0));
        let open = Lattice::new(LatticeSpec::chain(3, Boundary::Open)).unwrap();
        assert_eq!(open.links().len(), 2);
    }

    #[test]
    fn double_plaquette_geometry() {
        let lat = Lattice::new(LatticeSpec::new(&[3, 2], Boundary::Open)).unwrap();
        assert_eq!((lat.n_sites(), lat.links().len(), lat.plaquettes().len()), (6, 7, 2));
        let c = lat.spec.counts();
        assert_eq!((c.n_sites, c.n_links, c.n_plaquettes), (6, 7, 2));
    }

    #[test]
    fn cube_geometry() {
        let lat = Lattice::new(LatticeSpec::new(&[2, 2, 2], Boundary::Open)).unwrap();
        assert_eq!((lat.n_sites(), lat.links().len(), lat.plaquettes().len()), (8, 12, 6));
    }

    #[test]
    fn periodic_counts_match_enumeration() {
        for ext in [vec![4, 4], vec![3, 2], vec![2, 3, 2]] {
            for b in [Boundary::Open, Boundary::Periodic] {
                let spec = LatticeSpec::new(&ext, b);
                let lat = Lattice::new(spec.clone()).unwrap();
                let c = spec.counts();
                assert_eq!(c.n_links as usize, lat.links().len(), "{ext:?} {b:?}");
                assert_eq!(c.n_plaquettes as usize, lat.plaquettes().len(), "{ext:?} {b:?}");
            }
        }
    }

    #[test]
    fn link_normalization() {
        let lat = Lattice::new(LatticeSpec::new(&[3, 3], Boundary::Periodic)).unwrap();
        for s in 0..lat.n_sites() {
            for k in 0..2 {
                let t = lat.neighbor(s, k).unwrap();
                assert_eq!(lat.canonical_link(s, k, true), lat.canonical_link(t, k, false));
            }
        }
    }

    #[test]
    fn layouts() {
        let lat = Lattice::new(LatticeSpec::new(&[2, 3], Boundary::Open)).unwrap();
        let l = RegisterLayout::new(&lat, 2, Encoding::Log);
        assert_eq!((l.n_total, l.n_fermionic, l.n_gauge), (26, 12, 14));
        let lat = Lattice::new(LatticeSpec::new(&[4, 4], Boundary::Open)).unwrap();
        let l = RegisterLayout::new(&lat, 2, Encoding::Log);
        assert_eq!((l.n_total, l.n_fermionic, l.n_gauge), (80, 32, 48));
        let lat = Lattice::new(LatticeSpec::chain(2, Boundary::Open)).unwrap();
        let l = RegisterLayout::new(&lat, 1, Encoding::Log);
        assert_eq!(l.n_fermionic + l.qubits_per_link, 5);
        assert_eq!(l.link_qubits(0), 4..5);
    }

    #[test]
    fn spinor_rule() {
        assert_eq!([n_spinor(1), n_spinor(2), n_spinor(3)], [2, 2, 4]);
    }

    #[test]
    fn static_links_validated() {
        let ok = LatticeSpec::chain(3, Boundary::Open).with_static(&[-1], 0, 1.0).with_static(&[2], 0, 1.0);
        let lat = Lattice::new(ok).unwrap();
        let (inc, out) = lat.gauss_links(0);
        assert_eq!(inc, vec![LinkEnd::Static(1.0)]);
        assert_eq!(out, vec![LinkEnd::Dynamic(0)]);
        let (_, out) = lat.gauss_links(2);
        assert_eq!(out, vec![LinkEnd::Static(1.0)]);
        let inside = LatticeSpec::chain(3, Boundary::Open).with_static(&[0], 0, 1.0);
        assert!(inside.validate().is_err());
        let periodic = LatticeSpec::chain(3, Boundary::Periodic).with_static(&[-1], 0, 1.0);
        assert!(periodic.validate().is_err());
    }
}
