//! Dense state and observable types shared by the whole crate.
//!
//! Density operators are full 2^n x 2^n complex matrices; 12 qubits
//! (a 4096^2 matrix, ~268 MB) is the documented ceiling. Exactness is the
//! point here, not scale.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

/// Normalised pure state on `n` qubits.
#[derive(Debug, Clone)]
pub struct PureState {
    amp: Array1<Complex64>,
}

impl PureState {
    pub fn try_new(amp: Array1<Complex64>) -> Result<Self> {
        let dim = amp.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "amplitude vector of length {dim} is not a qubit register"
            )));
        }
        let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL}"
            )));
        }
        Ok(Self { amp })
    }

    /// Computational basis state; bit `q` of `bits` sets qubit `q` to |1>.
    pub fn basis_state(n: usize, bits: usize) -> Self {
        let mut amp = Array1::zeros(1 << n);
        amp[bits] = Complex64::new(1.0, 0.0);
        Self { amp }
    }

    pub fn n(&self) -> usize {
        self.amp.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amp
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_density(&self) -> DensityOperator {
        let dim = self.dim();
        let mut mat = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = self.amp[i] * self.amp[j].conj();
            }
        }
        DensityOperator { mat }
    }

    /// U |psi> for a k-qubit unitary on the listed qubits.
    pub fn apply_unitary(&self, u: &Array2<Complex64>, qubits: &[usize]) -> Result<PureState> {
        check_gate(u, qubits, self.n())?;
        let offsets = local_offsets(qubits);
        let sub = offsets.len();
        let mut out = self.amp.clone();
        let mut scratch = vec![Complex64::new(0.0, 0.0); sub];
        for base in BaseIndices::new(self.n(), qubits) {
            for (l, off) in offsets.iter().enumerate() {
                scratch[l] = out[base + off];
            }
            for (lo, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (li, s) in scratch.iter().enumerate() {
                    acc += u[(lo, li)] * s;
                }
                out[base + off] = acc;
            }
        }
        // Unitarity has been checked; renormalisation is not needed.
        Ok(PureState { amp: out })
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<PureState> {
        if p.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "pauli on {} qubits applied to {}-qubit state",
                p.n(),
                self.n()
            )));
        }
        Ok(PureState {
            amp: p.apply_to_vector(&self.amp.view()),
        })
    }
}

/// Unit-trace operator on `n` qubits. Physical states are Hermitian and
/// (up to numerical noise) positive; symmetry-expanded quasi-states are
/// built through [`DensityOperator::quasi`] and may be neither.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: Array2<Complex64>,
}

impl DensityOperator {
    /// Validated physical constructor: unit trace and Hermitian.
    pub fn try_new(mat: Array2<Complex64>) -> Result<Self> {
        let op = Self::quasi(mat)?;
        let h = op.hermiticity_defect();
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "matrix deviates from Hermitian by {h:.3e}"
            )));
        }
        Ok(op)
    }

    /// Unit-trace check only. Symmetry expansion produces operators that are
    /// not positive semi-definite and in general not Hermitian either.
    pub fn quasi(mat: Array2<Complex64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || !r.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "{r}x{c} matrix is not a square qubit-register operator"
            )));
        }
        let tr: Complex64 = mat.diag().sum();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {tr} deviates from 1 beyond {TRACE_TOL}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1 << n;
        let mut mat = Array2::zeros((dim, dim));
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            mat[(i, i)] = p;
        }
        Self { mat }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut mat = Array2::zeros((dim, dim));
        for (i, &p) in probs.iter().enumerate() {
            mat[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::try_new(mat)
    }

    pub fn n(&self) -> usize {
        self.mat.nrows().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diag().sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn expect_pauli(&self, p: &PauliString) -> Result<Complex64> {
        if p.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "pauli on {} qubits against {}-qubit state",
                p.n(),
                self.n()
            )));
        }
        Ok(p.trace_with(&self.mat.view()))
    }

    /// U rho U^dag for a k-qubit unitary on the listed qubits.
    pub fn apply_unitary(&self, u: &Array2<Complex64>, qubits: &[usize]) -> Result<DensityOperator> {
        check_gate(u, qubits, self.n())?;
        let mut mat = self.mat.clone();
        apply_left(&mut mat, u, qubits);
        apply_right_dagger(&mut mat, u, qubits);
        Ok(DensityOperator { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: Array2<Complex64>) -> Self {
        Self { mat }
    }
}

/// Hermitian observable: a real linear combination of signed Pauli words.
#[derive(Debug, Clone)]
pub struct Observable {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, p)| p.n())
            .ok_or_else(|| Error::InvalidState("observable needs at least one term".into()))?;
        if terms.iter().any(|(_, p)| p.n() != n) {
            return Err(Error::DimensionMismatch(
                "observable terms act on different qubit counts".into(),
            ));
        }
        Ok(Self { n, terms })
    }

    pub fn from_pauli(p: PauliString) -> Self {
        Self {
            n: p.n(),
            terms: vec![(1.0, p)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pauli(PauliString::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(c, p)| (c * factor, p.clone())).collect(),
        }
    }

    /// Merge duplicate words (folding signs into coefficients) and drop
    /// negligible terms.
    pub fn simplified(&self) -> Self {
        use std::collections::HashMap;
        let mut acc: HashMap<Vec<crate::pauli::Pauli>, f64> = HashMap::new();
        for (c, p) in &self.terms {
            *acc.entry(p.letters().to_vec()).or_insert(0.0) += c * p.sign().value();
        }
        let mut terms: Vec<(f64, PauliString)> = acc
            .into_iter()
            .filter(|(_, c)| c.abs() > 1e-15)
            .map(|(letters, c)| (c, PauliString::new(letters, crate::pauli::Sign::Plus)))
            .collect();
        terms.sort_by(|a, b| a.1.letters().cmp(b.1.letters()));
        if terms.is_empty() {
            terms.push((0.0, PauliString::identity(self.n)));
        }
        Self { n: self.n, terms }
    }

    /// Operator product. Accumulates complex coefficients so that imaginary
    /// cross terms may cancel; fails only if a net imaginary part survives.
    pub fn mul(&self, other: &Observable) -> Result<Observable> {
        use std::collections::HashMap;
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "observable product on mismatched registers".into(),
            ));
        }
        let mut acc: HashMap<Vec<crate::pauli::Pauli>, Complex64> = HashMap::new();
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                let (letters, ipow) = mul_letters(pa, pb);
                let mut coef = Complex64::new(ca * cb * pa.sign().value() * pb.sign().value(), 0.0);
                coef *= match ipow {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                *acc.entry(letters).or_insert(Complex64::new(0.0, 0.0)) += coef;
            }
        }
        let scale: f64 = acc.values().map(|c| c.norm()).sum::<f64>().max(1.0);
        let mut terms = Vec::new();
        for (letters, c) in acc {
            if c.norm() < 1e-14 * scale {
                continue;
            }
            if c.im.abs() > 1e-10 * scale {
                return Err(Error::ImaginaryPhase);
            }
            terms.push((c.re, PauliString::new(letters, crate::pauli::Sign::Plus)));
        }
        terms.sort_by(|a, b| a.1.letters().cmp(b.1.letters()));
        if terms.is_empty() {
            terms.push((0.0, PauliString::identity(self.n)));
        }
        Ok(Observable { n: self.n, terms })
    }

    pub fn expectation(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "observable on {} qubits against {}-qubit state",
                self.n,
                rho.n()
            )));
        }
        let mut acc = 0.0;
        for (c, p) in &self.terms {
            acc += c * p.sign().value() * p.with_sign(crate::pauli::Sign::Plus).trace_with(&rho.matrix().view()).re;
        }
        Ok(acc)
    }

    pub fn expectation_pure(&self, psi: &PureState) -> Result<f64> {
        if psi.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "observable on {} qubits against {}-qubit state",
                self.n,
                psi.n()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, p) in &self.terms {
            let pv = p.apply_to_vector(&psi.amplitudes().view());
            let overlap: Complex64 = psi
                .amplitudes()
                .iter()
                .zip(pv.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            acc += overlap * *c;
        }
        Ok(acc.re)
    }

    pub fn apply_to_vector(&self, psi: &PureState) -> Result<Array1<Complex64>> {
        if psi.n() != self.n {
            return Err(Error::DimensionMismatch(
                "observable applied to mismatched state".into(),
            ));
        }
        let mut out = Array1::zeros(psi.dim());
        for (c, p) in &self.terms {
            let pv = p.apply_to_vector(&psi.amplitudes().view());
            out = out + pv.mapv(|z| z * *c);
        }
        Ok(out)
    }

    /// Dense matrix; intended for few-qubit tests.
    pub fn matrix(&self) -> Array2<Complex64> {
        let dim = 1 << self.n;
        let mut out = Array2::zeros((dim, dim));
        for (c, p) in &self.terms {
            out = out + p.matrix().mapv(|z| z * *c);
        }
        out
    }
}

fn mul_letters(a: &PauliString, b: &PauliString) -> (Vec<crate::pauli::Pauli>, u8) {
    // Same product table as PauliString::mul but keeping the raw i-power.
    use crate::pauli::Pauli::*;
    let mut ipow = 0u8;
    let mut letters = Vec::with_capacity(a.n());
    for (&x, &y) in a.letters().iter().zip(b.letters()) {
        let (p, k) = match (x, y) {
            (I, p) | (p, I) => (p, 0),
            (X, X) | (Y, Y) | (Z, Z) => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
        };
        ipow = (ipow + k) % 4;
        letters.push(p);
    }
    (letters, ipow)
}

/// Tr(O rho).
pub fn expect(rho: &DensityOperator, obs: &Observable) -> Result<f64> {
    obs.expectation(rho)
}

/// <psi0| rho |psi0>. May exceed [0, 1] for symmetry-expanded quasi-states.
pub fn fidelity_with_pure(rho: &DensityOperator, psi0: &PureState) -> Result<f64> {
    if rho.n() != psi0.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit state against {}-qubit reference",
            rho.n(),
            psi0.n()
        )));
    }
    let rho_psi = rho.matrix().dot(psi0.amplitudes());
    let val: Complex64 = psi0
        .amplitudes()
        .iter()
        .zip(rho_psi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(val.re)
}

fn check_gate(u: &Array2<Complex64>, qubits: &[usize], n: usize) -> Result<()> {
    let k = qubits.len();
    let sub = 1usize << k;
    if u.dim() != (sub, sub) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} gate on {k} qubits",
            u.nrows(),
            u.ncols()
        )));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
    }
    // ||U^dag U - I||_max
    let mut worst = 0.0f64;
    for i in 0..sub {
        for j in 0..sub {
            let mut acc = Complex64::new(0.0, 0.0);
            for k2 in 0..sub {
                acc += u[(k2, i)].conj() * u[(k2, j)];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - Complex64::new(expect, 0.0)).norm());
        }
    }
    if worst > UNITARY_TOL {
        return Err(Error::NotUnitary(worst));
    }
    Ok(())
}

/// Offsets of the 2^k local basis states inside the full register:
/// local bit `i` lives on qubit `qubits[i]`.
fn local_offsets(qubits: &[usize]) -> Vec<usize> {
    let sub = 1usize << qubits.len();
    (0..sub)
        .map(|l| {
            let mut off = 0usize;
            for (i, &q) in qubits.iter().enumerate() {
                if (l >> i) & 1 == 1 {
                    off |= 1 << q;
                }
            }
            off
        })
        .collect()
}

/// Iterator over base indices with zeros on the gate qubits.
struct BaseIndices {
    sorted: Vec<usize>,
    count: usize,
    next: usize,
}

impl BaseIndices {
    fn new(n: usize, qubits: &[usize]) -> Self {
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        Self {
            sorted,
            count: 1 << (n - qubits.len()),
            next: 0,
        }
    }
}

impl Iterator for BaseIndices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.next >= self.count {
            return None;
        }
        let mut base = self.next;
        for &q in &self.sorted {
            base = ((base >> q) << (q + 1)) | (base & ((1 << q) - 1));
        }
        self.next += 1;
        Some(base)
    }
}

/// mat <- (U on qubits) . mat
fn apply_left(mat: &mut Array2<Complex64>, u: &Array2<Complex64>, qubits: &[usize]) {
    let n = mat.nrows().trailing_zeros() as usize;
    let dim = mat.nrows();
    let offsets = local_offsets(qubits);
    let sub = offsets.len();
    let mut rows: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; sub];
    for base in BaseIndices::new(n, qubits) {
        for (l, off) in offsets.iter().enumerate() {
            for c in 0..dim {
                rows[l][c] = mat[(base + off, c)];
            }
        }
        for (lo, off) in offsets.iter().enumerate() {
            let r = base + off;
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for li in 0..sub {
                    acc += u[(lo, li)] * rows[li][c];
                }
                mat[(r, c)] = acc;
            }
        }
    }
}

/// mat <- mat . (U on qubits)^dag
fn apply_right_dagger(mat: &mut Array2<Complex64>, u: &Array2<Complex64>, qubits: &[usize]) {
    let n = mat.nrows().trailing_zeros() as usize;
    let dim = mat.nrows();
    let offsets = local_offsets(qubits);
    let sub = offsets.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); sub];
    for base in BaseIndices::new(n, qubits) {
        for r in 0..dim {
            for (l, off) in offsets.iter().enumerate() {
                scratch[l] = mat[(r, base + off)];
            }
            for (co, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (ci, s) in scratch.iter().enumerate() {
                    acc += *s * u[(co, ci)].conj();
                }
                mat[(r, base + off)] = acc;
            }
        }
    }
}
