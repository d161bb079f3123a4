//! Weighted sums of Pauli strings.
//!
//! Axes are packed two bits per qubit (I=00, X=01, Y=10, Z=11) with qubit 0 in the
//! most significant position of the first word, so comparing the packed words
//! orders strings lexicographically with I < X < Y < Z.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{LgtError, Result};

pub type C64 = Complex64;

/// Default magnitude below which coefficients are treated as exact zeros.
pub const DROP_TOL: f64 = 1e-12;

/// Largest register converted to or from a dense matrix.
pub const DENSE_LIMIT: usize = 12;

const QUBITS_PER_WORD: usize = 32;
const LOW: u64 = 0x5555_5555_5555_5555;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    fn code(self) -> u64 {
        match self {
            PauliAxis::I => 0,
            PauliAxis::X => 1,
            PauliAxis::Y => 2,
            PauliAxis::Z => 3,
        }
    }

    fn from_code(c: u64) -> Self {
        match c & 3 {
            0 => PauliAxis::I,
            1 => PauliAxis::X,
            2 => PauliAxis::Y,
            _ => PauliAxis::Z,
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    /// Single-qubit product `self * other` as (axis, power of i).
    pub fn mul(self, other: PauliAxis) -> (PauliAxis, u8) {
        let a = Axes::from_axes(&[self]);
        let b = Axes::from_axes(&[other]);
        let (p, k) = a.mul(&b);
        (p.get(0), k)
    }
}

/// Packed axis sequence of an n-qubit Pauli string (no coefficient).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axes {
    words: SmallVec<[u64; 2]>,
    n: usize,
}

#[inline]
fn shift_of(q: usize) -> u32 {
    (62 - 2 * (q % QUBITS_PER_WORD)) as u32
}

impl Axes {
    pub fn identity(n: usize) -> Self {
        let nw = n.div_ceil(QUBITS_PER_WORD).max(1);
        Axes { words: SmallVec::from_elem(0, nw), n }
    }

    pub fn from_axes(axes: &[PauliAxis]) -> Self {
        let mut a = Axes::identity(axes.len());
        for (q, &p) in axes.iter().enumerate() {
            a.set(q, p);
        }
        a
    }

    /// Builds a string with the given axis on each listed qubit.
    pub fn from_sparse(n: usize, ops: &[(usize, PauliAxis)]) -> Self {
        let mut a = Axes::identity(n);
        for &(q, p) in ops {
            a.set(q, p);
        }
        a
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, q: usize) -> PauliAxis {
        debug_assert!(q < self.n);
        PauliAxis::from_code(self.words[q / QUBITS_PER_WORD] >> shift_of(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: PauliAxis) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let w = &mut self.words[q / QUBITS_PER_WORD];
        let s = shift_of(q);
        *w = (*w & !(3u64 << s)) | (p.code() << s);
    }

    pub fn support(&self) -> usize {
        self.words
            .iter()
            .map(|&w| ((w | (w >> 1)) & LOW).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Qubits carrying a non-identity axis, ascending.
    pub fn support_qubits(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != PauliAxis::I).collect()
    }

    /// Product of two strings as (axes, k) meaning `i^k * axes`.
    pub fn mul(&self, other: &Axes) -> (Axes, u8) {
        assert_eq!(self.n, other.n, "Pauli string length mismatch");
        let mut out = Axes::identity(self.n);
        let mut phase: i64 = 0;
        for (i, (&a, &b)) in self.words.iter().zip(other.words.iter()).enumerate() {
            let (la, ha) = (a & LOW, (a >> 1) & LOW);
            let (lb, hb) = (b & LOW, (b >> 1) & LOW);
            let (xa, ya, za) = (la & !ha, ha & !la, ha & la);
            let (xb, yb, zb) = (lb & !hb, hb & !lb, hb & lb);
            let plus = (xa & yb) | (ya & zb) | (za & xb);
            let minus = (xa & zb) | (ya & xb) | (za & yb);
            phase += plus.count_ones() as i64 - minus.count_ones() as i64;
            let xr = (la ^ ha) ^ (lb ^ hb);
            let zr = ha ^ hb;
            out.words[i] = (zr << 1) | (xr ^ zr);
        }
        (out, phase.rem_euclid(4) as u8)
    }

    pub fn commutes_with(&self, other: &Axes) -> bool {
        let mut anti = 0u32;
        for (&a, &b) in self.words.iter().zip(other.words.iter()) {
            let (la, ha) = (a & LOW, (a >> 1) & LOW);
            let (lb, hb) = (b & LOW, (b >> 1) & LOW);
            let (xa, za) = (la ^ ha, ha);
            let (xb, zb) = (lb ^ hb, hb);
            anti += ((xa & zb) ^ (za & xb)).count_ones();
        }
        anti % 2 == 0
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &Axes) -> Axes {
        let mut out = Axes::identity(self.n + other.n);
        for q in 0..self.n {
            out.set(q, self.get(q));
        }
        for q in 0..other.n {
            out.set(self.n + q, other.get(q));
        }
        out
    }

    /// Places this string on qubits `offset..offset+len` of an `n`-qubit register.
    pub fn embed(&self, offset: usize, n: usize) -> Axes {
        let mut out = Axes::identity(n);
        for q in 0..self.n {
            out.set(offset + q, self.get(q));
        }
        out
    }

    /// Bit masks over computational basis indices, where qubit q is bit `n-1-q`.
    /// Returns (x mask, z mask, number of Y factors).
    pub fn masks(&self) -> (u64, u64, u32) {
        assert!(self.n <= 64, "masks require at most 64 qubits");
        let (mut xm, mut zm, mut ny) = (0u64, 0u64, 0u32);
        for q in 0..self.n {
            let bit = 1u64 << (self.n - 1 - q);
            match self.get(q) {
                PauliAxis::I => {}
                PauliAxis::X => xm |= bit,
                PauliAxis::Y => {
                    xm |= bit;
                    zm |= bit;
                    ny += 1;
                }
                PauliAxis::Z => zm |= bit,
            }
        }
        (xm, zm, ny)
    }

    pub fn from_masks(n: usize, xm: u64, zm: u64) -> Axes {
        let mut a = Axes::identity(n);
        for q in 0..n {
            let b = n - 1 - q;
            let p = match ((xm >> b) & 1, (zm >> b) & 1) {
                (0, 0) => PauliAxis::I,
                (1, 0) => PauliAxis::X,
                (1, 1) => PauliAxis::Y,
                _ => PauliAxis::Z,
            };
            a.set(q, p);
        }
        a
    }
}

impl fmt::Display for Axes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Axes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Axes({self})")
    }
}

impl FromStr for Axes {
    type Err = LgtError;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .chars()
            .map(|c| PauliAxis::from_char(c).ok_or_else(|| LgtError::Parse(format!("bad Pauli axis '{c}' in \"{s}\""))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Axes::from_axes(&axes))
    }
}

pub fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A single Pauli string with a complex coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    pub coeff: C64,
    pub axes: Axes,
}

impl PauliString {
    pub fn new(coeff: C64, axes: Axes) -> Self {
        PauliString { coeff, axes }
    }

    pub fn parse(coeff: C64, axes: &str) -> Result<Self> {
        Ok(PauliString { coeff, axes: axes.parse()? })
    }

    pub fn n_qubits(&self) -> usize {
        self.axes.n_qubits()
    }

    pub fn support(&self) -> usize {
        self.axes.support()
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits() != other.n_qubits() {
            return Err(LgtError::LengthMismatch(self.n_qubits(), other.n_qubits()));
        }
        let (axes, k) = self.axes.mul(&other.axes);
        Ok(PauliString { coeff: self.coeff * other.coeff * i_pow(k), axes })
    }
}

/// Term counts split by coefficient type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub n_real: usize,
    pub n_imag: usize,
    pub n_mixed: usize,
}

impl Classification {
    pub fn total(&self) -> usize {
        self.n_real + self.n_imag + self.n_mixed
    }
}

/// Weighted sum of Pauli strings in canonical order with no repeated axes.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliOperator {
    n: usize,
    terms: Vec<(Axes, C64)>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: [f64; 2],
    axes: String,
}

impl PauliOperator {
    pub fn zero(n: usize) -> Self {
        PauliOperator { n, terms: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, C64::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        Self::from_terms(n, vec![(Axes::identity(n), c)])
    }

    pub fn single(axes: Axes, c: C64) -> Self {
        let n = axes.n_qubits();
        Self::from_terms(n, vec![(axes, c)])
    }

    /// Parses `[(coeff, "XIZ"), ...]`.
    pub fn parse(terms: &[(C64, &str)]) -> Result<Self> {
        let n = terms.first().map(|t| t.1.len()).unwrap_or(0);
        let mut v = Vec::with_capacity(terms.len());
        for &(c, s) in terms {
            let a: Axes = s.parse()?;
            if a.n_qubits() != n {
                return Err(LgtError::LengthMismatch(n, a.n_qubits()));
            }
            v.push((a, c));
        }
        Ok(Self::from_terms(n, v))
    }

    /// Builds an operator merging duplicates and dropping terms below `DROP_TOL`.
    pub fn from_terms(n: usize, terms: Vec<(Axes, C64)>) -> Self {
        Self::from_terms_tol(n, terms, DROP_TOL)
    }

    pub fn from_terms_tol(n: usize, mut terms: Vec<(Axes, C64)>, tol: f64) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Axes, C64)> = Vec::with_capacity(terms.len());
        for (a, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == a => last.1 += c,
                _ => out.push((a, c)),
            }
        }
        out.retain(|(_, c)| c.norm() >= tol);
        PauliOperator { n, terms: out }
    }

    fn from_map(n: usize, map: HashMap<Axes, C64>) -> Self {
        Self::from_terms(n, map.into_iter().collect())
    }

    /// Re-applies merging and the drop threshold with a custom tolerance.
    pub fn simplify(&self, tol: f64) -> Self {
        Self::from_terms_tol(self.n, self.terms.clone(), tol)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Axes, C64)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = PauliString> + '_ {
        self.terms.iter().map(|(a, c)| PauliString::new(*c, a.clone()))
    }

    pub fn coeff(&self, axes: &Axes) -> C64 {
        self.terms
            .binary_search_by(|t| t.0.cmp(axes))
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    pub fn coeff_of(&self, axes: &str) -> C64 {
        axes.parse().map(|a| self.coeff(&a)).unwrap_or_default()
    }

    pub fn add(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, other.n, "operator size mismatch");
        let mut v = self.terms.clone();
        v.extend(other.terms.iter().cloned());
        Self::from_terms(self.n, v)
    }

    pub fn sub(&self, other: &PauliOperator) -> PauliOperator {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn add_scaled(&self, other: &PauliOperator, c: C64) -> PauliOperator {
        self.add(&other.scale(c))
    }

    pub fn scale(&self, c: C64) -> PauliOperator {
        Self::from_terms(self.n, self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect())
    }

    pub fn scale_re(&self, c: f64) -> PauliOperator {
        self.scale(C64::new(c, 0.0))
    }

    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, other.n, "operator size mismatch");
        let mut map: HashMap<Axes, C64> = HashMap::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (p, k) = a.mul(b);
                *map.entry(p).or_default() += ca * cb * i_pow(k);
            }
        }
        Self::from_map(self.n, map)
    }

    pub fn dagger(&self) -> PauliOperator {
        PauliOperator { n: self.n, terms: self.terms.iter().map(|(a, c)| (a.clone(), c.conj())).collect() }
    }

    /// `self + self†`.
    pub fn plus_hc(&self) -> PauliOperator {
        self.add(&self.dagger())
    }

    pub fn commutator(&self, other: &PauliOperator) -> PauliOperator {
        let mut map: HashMap<Axes, C64> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.commutes_with(b) {
                    continue;
                }
                let (p, k) = a.mul(b);
                *map.entry(p).or_default() += 2.0 * ca * cb * i_pow(k);
            }
        }
        Self::from_map(self.n, map)
    }

    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        let mut v = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                v.push((a.tensor(b), ca * cb));
            }
        }
        Self::from_terms(self.n + other.n, v)
    }

    /// Places this operator on qubits `offset..offset+n_qubits()` of an `n`-qubit register.
    pub fn embed(&self, offset: usize, n: usize) -> PauliOperator {
        assert!(offset + self.n <= n, "embedding exceeds register");
        let terms = self.terms.iter().map(|(a, c)| (a.embed(offset, n), *c)).collect();
        PauliOperator { n, terms }
    }

    pub fn classify(&self) -> Classification {
        let mut c = Classification::default();
        for (_, x) in &self.terms {
            let re = x.re.abs() >= DROP_TOL;
            let im = x.im.abs() >= DROP_TOL;
            match (re, im) {
                (true, true) => c.n_mixed += 1,
                (false, true) => c.n_imag += 1,
                _ => c.n_real += 1,
            }
        }
        c
    }

    /// True when every coefficient is real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(_, c)| c.im.abs() < tol)
    }

    /// Removes the identity string and returns it as a scalar shift.
    pub fn drop_identity(&self) -> (PauliOperator, C64) {
        let mut shift = C64::default();
        let terms = self
            .terms
            .iter()
            .filter(|(a, c)| {
                if a.is_identity() {
                    shift += c;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (PauliOperator { n: self.n, terms }, shift)
    }

    pub fn max_support(&self) -> usize {
        self.terms.iter().map(|(a, _)| a.support()).max().unwrap_or(0)
    }

    pub fn norm1(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, |a, x| a + x)
    }

    pub fn approx_eq(&self, other: &PauliOperator, tol: f64) -> bool {
        self.n == other.n && self.sub(other).terms.iter().all(|(_, c)| c.norm() < tol)
    }

    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        if self.n > DENSE_LIMIT {
            return Err(LgtError::SizeLimit { what: "dense matrix qubits", size: self.n, limit: DENSE_LIMIT });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (a, c) in &self.terms {
            let (xm, zm, ny) = a.masks();
            let base = c * i_pow((ny % 4) as u8);
            for col in 0..dim {
                let sign = if (col as u64 & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(col ^ xm as usize, col)] += base * sign;
            }
        }
        Ok(m)
    }

    /// Hilbert-Schmidt decomposition `λ_P = Tr(P M) / 2^n`.
    pub fn decompose_matrix(m: &DMatrix<C64>) -> Result<PauliOperator> {
        Self::decompose_matrix_tol(m, DROP_TOL)
    }

    pub fn decompose_matrix_tol(m: &DMatrix<C64>, tol: f64) -> Result<PauliOperator> {
        let dim = m.nrows();
        if dim != m.ncols() {
            return Err(LgtError::LengthMismatch(m.nrows(), m.ncols()));
        }
        if !dim.is_power_of_two() {
            return Err(LgtError::NotPowerOfTwo(dim));
        }
        let n = dim.trailing_zeros() as usize;
        if n > DENSE_LIMIT {
            return Err(LgtError::SizeLimit { what: "dense matrix qubits", size: n, limit: DENSE_LIMIT });
        }
        let mut terms = Vec::new();
        let mut v = vec![C64::default(); dim];
        for xm in 0..dim {
            let mut any = false;
            for (c, slot) in v.iter_mut().enumerate() {
                *slot = m[(c, c ^ xm)];
                any |= slot.norm() > 0.0;
            }
            if !any {
                continue;
            }
            walsh_hadamard(&mut v);
            for (zm, w) in v.iter().enumerate() {
                let ny = (xm & zm).count_ones();
                let lam = w * i_pow((ny % 4) as u8) / dim as f64;
                if lam.norm() >= tol {
                    terms.push((Axes::from_masks(n, xm as u64, zm as u64), lam));
                }
            }
        }
        Ok(Self::from_terms_tol(n, terms, tol))
    }

    pub fn to_json(&self) -> String {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(a, c)| TermJson { coeff: [c.re, c.im], axes: a.to_string() })
            .collect();
        serde_json::to_string(&v).expect("serializing plain data cannot fail")
    }

    pub fn from_json(s: &str) -> Result<PauliOperator> {
        let v: Vec<TermJson> = serde_json::from_str(s).map_err(|e| LgtError::Parse(e.to_string()))?;
        let n = v.first().map(|t| t.axes.len()).unwrap_or(0);
        let mut terms = Vec::with_capacity(v.len());
        for t in v {
            let a: Axes = t.axes.parse()?;
            if a.n_qubits() != n {
                return Err(LgtError::LengthMismatch(n, a.n_qubits()));
            }
            terms.push((a, C64::new(t.coeff[0], t.coeff[1])));
        }
        // keep coefficients bit-exact: only sort and merge, never drop
        Ok(Self::from_terms_tol(n, terms, 0.0))
    }
}

/// Sums a collection of operators on the same register in one merge pass.
pub fn sum_operators<'a, I: IntoIterator<Item = &'a PauliOperator>>(n: usize, ops: I) -> PauliOperator {
    let mut v = Vec::new();
    for op in ops {
        assert_eq!(op.n_qubits(), n, "operator size mismatch");
        v.extend(op.terms().iter().cloned());
    }
    PauliOperator::from_terms(n, v)
}

/// In-place unnormalized Walsh-Hadamard transform: `out[z] = Σ_c (-1)^{|c∧z|} in[c]`.
pub fn walsh_hadamard(v: &mut [C64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {}", c.re, c.im, a)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::parse(c(1., 0.), "X").unwrap();
        let y = PauliString::parse(c(1., 0.), "Y").unwrap();
        let p = x.multiply(&y).unwrap();
        assert_eq!(p.axes.to_string(), "Z");
        assert_eq!(p.coeff, c(0., 1.));
        assert_eq!(PauliAxis::Y.mul(PauliAxis::X), (PauliAxis::Z, 3));
        assert_eq!(PauliAxis::Z.mul(PauliAxis::X), (PauliAxis::Y, 1));
    }

    #[test]
    fn disjoint_and_square() {
        let a = PauliString::parse(c(1., 0.), "XI").unwrap();
        let b = PauliString::parse(c(1., 0.), "IX").unwrap();
        assert_eq!(a.multiply(&b).unwrap().axes.to_string(), "XX");
        let k = c(0.3, -1.7);
        let p = PauliString::parse(k, "XYZIZ").unwrap();
        let q = PauliString::parse(1.0 / k, "XYZIZ").unwrap();
        let r = p.multiply(&q).unwrap();
        assert!(r.axes.is_identity());
        assert!((r.coeff - c(1., 0.)).norm() < 1e-15);
    }

    #[test]
    fn length_mismatch_is_error() {
        let a = PauliString::parse(c(1., 0.), "X").unwrap();
        let b = PauliString::parse(c(1., 0.), "XX").unwrap();
        assert!(matches!(a.multiply(&b), Err(LgtError::LengthMismatch(1, 2))));
    }

    #[test]
    fn simplify_merges_and_drops() {
        let op = PauliOperator::parse(&[(c(1., 0.), "Z"), (c(1., 0.), "Z")]).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coeff_of("Z"), c(2., 0.));
        let zero = PauliOperator::parse(&[(c(1., 0.), "X"), (c(-1., 0.), "X")]).unwrap();
        assert!(zero.is_empty());
        let tiny = PauliOperator::from_terms_tol(1, vec![("Y".parse().unwrap(), c(1e-14, 0.))], 0.0);
        assert_eq!(tiny.len(), 1);
        assert!(tiny.simplify(1e-12).is_empty());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let op = PauliOperator::parse(&[(c(1., 0.), "ZI"), (c(1., 0.), "IX"), (c(1., 0.), "YZ"), (c(1., 0.), "XX")]).unwrap();
        let names: Vec<String> = op.terms().iter().map(|t| t.0.to_string()).collect();
        assert_eq!(names, ["IX", "XX", "YZ", "ZI"]);
    }

    #[test]
    fn long_strings_cross_word_boundary() {
        let n = 70;
        let mut a = Axes::identity(n);
        a.set(0, PauliAxis::X);
        a.set(31, PauliAxis::Y);
        a.set(32, PauliAxis::Z);
        a.set(69, PauliAxis::Y);
        assert_eq!(a.support(), 4);
        assert_eq!(a.get(32), PauliAxis::Z);
        let mut b = Axes::identity(n);
        b.set(31, PauliAxis::Z);
        b.set(69, PauliAxis::X);
        let (p, k) = a.mul(&b);
        // YZ = iX, YX = -iZ
        assert_eq!(p.get(31), PauliAxis::X);
        assert_eq!(p.get(69), PauliAxis::Z);
        assert_eq!(k, 0);
        let s: Axes = a.to_string().parse().unwrap();
        assert_eq!(s, a);
    }

    #[test]
    fn decompose_simple_matrices() {
        let z = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let op = PauliOperator::decompose_matrix(&z).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coeff_of("Z"), c(1., 0.));
        let id = DMatrix::<C64>::identity(4, 4);
        let op = PauliOperator::decompose_matrix(&id).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coeff_of("II"), c(1., 0.));
        let bad = DMatrix::<C64>::identity(3, 3);
        assert!(matches!(PauliOperator::decompose_matrix(&bad), Err(LgtError::NotPowerOfTwo(3))));
    }

    #[test]
    fn to_matrix_examples() {
        let m = PauliOperator::parse(&[(c(0.5, 0.), "X"), (c(0.5, 0.), "Y")]).unwrap().to_matrix().unwrap();
        assert!((m[(0, 1)] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((m[(1, 0)] - c(0.5, 0.5)).norm() < 1e-15);
        assert_eq!(m[(0, 0)], c(0., 0.));
        let big = PauliOperator::identity(13);
        assert!(big.to_matrix().unwrap_err().is_resource_limit());
    }

    #[test]
    fn classify_counts() {
        let op = PauliOperator::parse(&[(c(2., 0.), "X"), (c(0., 3.), "Y")]).unwrap();
        let k = op.classify();
        assert_eq!((k.n_real, k.n_imag, k.n_mixed), (1, 1, 0));
        assert_eq!(k.total(), op.len());
    }

    #[test]
    fn tensor_commutator_support() {
        let x = PauliOperator::parse(&[(c(1., 0.), "X")]).unwrap();
        let y = PauliOperator::parse(&[(c(1., 0.), "Y")]).unwrap();
        let z = PauliOperator::parse(&[(c(1., 0.), "Z")]).unwrap();
        let t = x.tensor(&z);
        assert_eq!(t.len(), 1);
        assert_eq!(t.coeff_of("XZ"), c(1., 0.));
        let k = x.commutator(&y);
        assert_eq!(k.len(), 1);
        assert_eq!(k.coeff_of("Z"), c(0., 2.));
        assert_eq!("XIZY".parse::<Axes>().unwrap().support(), 3);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let op = PauliOperator::parse(&[(c(0.1, 1.0 / 3.0), "XIZY"), (c(-2.5e-7, 0.0), "ZZZZ")]).unwrap();
        let s = op.to_json();
        assert!(s.contains("\"axes\":\"XIZY\""));
        let back = PauliOperator::from_json(&s).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn drop_identity_reports_shift() {
        let op = PauliOperator::parse(&[(c(1.5, 0.), "II"), (c(1., 0.), "ZZ")]).unwrap();
        let (rest, shift) = op.drop_identity();
        assert_eq!(rest.len(), 1);
        assert_eq!(shift, c(1.5, 0.));
    }

    #[test]
    fn walsh_hadamard_two_points() {
        let mut v = vec![c(1., 0.), c(2., 0.)];
        walsh_hadamard(&mut v);
        assert_eq!(v, vec![c(3., 0.), c(-1., 0.)]);
    }
}
