//! Symmetry expansion: expansion operators, expanded estimates, absolute
//! infidelity, the detectable/undetectable bias split, sampling costs and
//! crossover sample counts.
//!
//! An expansion scheme is a non-negative weight vector over a set of
//! symmetry operators. The expanded estimate of an observable O is
//! <O Gamma> / <Gamma> with Gamma the weighted mean of the operators;
//! uniform weights over a full group recover symmetry verification, the
//! singleton {I} recovers the unmitigated estimate.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, Sign};
use crate::simulator::SimulationResult;
use crate::state::{expect, fidelity_with_pure, DensityOperator, Observable, PureState};

/// A list of commutation-unchecked symmetry operators; `is_group` records
/// whether the list is closed under multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrySet {
    elements: Vec<PauliString>,
    is_group: bool,
}

impl SymmetrySet {
    pub fn new(elements: Vec<PauliString>) -> Result<Self> {
        let n = elements
            .first()
            .map(|p| p.n())
            .ok_or_else(|| Error::InvalidState("empty symmetry set".into()))?;
        if elements.iter().any(|p| p.n() != n) {
            return Err(Error::DimensionMismatch(
                "symmetry set mixes qubit counts".into(),
            ));
        }
        let is_group = {
            let mut closed = true;
            'outer: for a in &elements {
                for b in &elements {
                    match a.mul(b) {
                        Ok(prod) => {
                            if !elements.contains(&prod) {
                                closed = false;
                                break 'outer;
                            }
                        }
                        Err(_) => {
                            closed = false;
                            break 'outer;
                        }
                    }
                }
            }
            closed
        };
        Ok(Self { elements, is_group })
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn n(&self) -> usize {
        self.elements[0].n()
    }

    pub fn is_group(&self) -> bool {
        self.is_group
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.elements.contains(p)
    }
}

/// Non-negative weights over a symmetry set, not all zero.
#[derive(Debug, Clone)]
pub struct ExpansionScheme {
    ops: SymmetrySet,
    weights: Vec<f64>,
}

impl ExpansionScheme {
    pub fn new(ops: SymmetrySet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != ops.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} operators",
                weights.len(),
                ops.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidState(
                "expansion weights must be finite and non-negative".into(),
            ));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::ZeroWeightSum);
        }
        Ok(Self { ops, weights })
    }

    pub fn uniform(ops: SymmetrySet) -> Self {
        let weights = vec![1.0; ops.len()];
        Self { ops, weights }
    }

    pub fn ops(&self) -> &SymmetrySet {
        &self.ops
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Normalised weights w_G / sum(w).
    pub fn normalised_weights(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

/// Per-scheme bias and cost bundle; the row type of all output tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeReport {
    /// <Gamma_w> on the noisy state.
    pub gamma_expect: f64,
    /// F_w = <rho0> / <Gamma_w>.
    pub fidelity: f64,
    /// |1 - F_w|.
    pub abs_infidelity: f64,
    /// Undetectable bias B_u.
    pub b_undet: f64,
    /// Detectable bias B_d.
    pub b_det: f64,
    /// Sampling cost <Gamma_w>^-2.
    pub cost: f64,
    /// Expanded observable estimate Tr(O rho_w).
    pub obs_value: f64,
    /// Signed relative bias of the observable estimate.
    pub rel_bias_obs: f64,
}

/// Minimum sample count for a small-bias scheme to beat a small-cost one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverReport {
    pub n_star: f64,
    pub c_a: f64,
    pub c_b: f64,
    pub eps_a: f64,
    pub eps_b: f64,
}

/// Gamma_w = sum w_G G / sum w_G as a Hermitian observable.
pub fn expansion_operator(scheme: &ExpansionScheme) -> Result<Observable> {
    let weights = scheme.normalised_weights();
    let terms: Vec<(f64, PauliString)> = weights
        .into_iter()
        .zip(scheme.ops.elements())
        .map(|(w, g)| (w, g.clone()))
        .collect();
    Observable::new(terms)
}

/// <Gamma_w> on rho.
pub fn gamma_expect(rho: &DensityOperator, scheme: &ExpansionScheme) -> Result<f64> {
    expect(rho, &expansion_operator(scheme)?)
}

/// Expanded estimate <O Gamma_w> / <Gamma_w>.
pub fn expanded_value(
    rho: &DensityOperator,
    scheme: &ExpansionScheme,
    obs: &Observable,
) -> Result<f64> {
    let gamma = expansion_operator(scheme)?;
    let g = expect(rho, &gamma)?;
    if g.abs() < 1e-12 {
        return Err(Error::DegenerateNormalisation(g));
    }
    let og = obs.mul(&gamma)?;
    Ok(expect(rho, &og)? / g)
}

/// The symmetry-expanded quasi-state Gamma_w rho / <Gamma_w>. Unit trace,
/// generally neither Hermitian nor positive.
pub fn expanded_state(rho: &DensityOperator, scheme: &ExpansionScheme) -> Result<DensityOperator> {
    let gamma = expansion_operator(scheme)?;
    let g = expect(rho, &gamma)?;
    if g.abs() < 1e-12 {
        return Err(Error::DegenerateNormalisation(g));
    }
    let dim = rho.dim();
    let mut mat: Array2<Complex64> = Array2::zeros((dim, dim));
    for (c, p) in gamma.terms() {
        let signed = *c * p.sign().value();
        mat = mat
            + p.with_sign(Sign::Plus)
                .left_mul_matrix(&rho.matrix().view())
                .mapv(|z| z * signed);
    }
    DensityOperator::quasi(mat.mapv(|z| z / g))
}

/// Full bias/cost report for one scheme against the noisy simulation
/// outcome. `group` must be the full symmetry group; `obs` is the physical
/// observable (the energy in the benchmark experiments).
pub fn scheme_report(
    result: &SimulationResult,
    scheme: &ExpansionScheme,
    group: &SymmetrySet,
    obs: &Observable,
) -> Result<SchemeReport> {
    if !group.is_group() {
        return Err(Error::InvalidState(
            "bias decomposition needs the full symmetry group".into(),
        ));
    }
    let gamma = gamma_expect(&result.rho, scheme)?;
    if gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(gamma));
    }
    let pi = gamma_expect(&result.rho, &ExpansionScheme::uniform(group.clone()))?;
    let raw_fidelity = fidelity_with_pure(&result.rho, &result.rho0)?;
    let fidelity = raw_fidelity / gamma;
    let b_undet = (pi - raw_fidelity) / gamma;
    let b_det = (gamma - pi) / gamma;
    let abs_infidelity = (1.0 - fidelity).abs();
    let cost = gamma.powi(-2);
    let obs_value = expanded_value(&result.rho, scheme, obs)?;
    let ideal = obs.expectation_pure(&result.rho0)?;
    let rel_bias_obs = 1.0 - obs_value / ideal;
    Ok(SchemeReport {
        gamma_expect: gamma,
        fidelity,
        abs_infidelity,
        b_undet,
        b_det,
        cost,
        obs_value,
        rel_bias_obs,
    })
}

/// Absolute infidelities of the unmitigated, verified and G-expanded schemes
/// for a single non-trivial symmetry with undetectable/detectable error
/// probabilities (p_u, p_d).
pub fn simple_example_biases(p_u: f64, p_d: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&p_u) || !(0.0..=1.0).contains(&p_d) || p_u + p_d > 1.0 {
        return Err(Error::InvalidState(format!(
            "error probabilities ({p_u}, {p_d}) are not a sub-unit pair"
        )));
    }
    let ver_den = 1.0 - p_d;
    let exp_den = 1.0 - 2.0 * p_d;
    if ver_den.abs() < 1e-12 || exp_den.abs() < 1e-12 {
        return Err(Error::SingularDenominator);
    }
    Ok((
        p_u + p_d,
        p_u / ver_den,
        ((p_u - p_d) / exp_den).abs(),
    ))
}

/// N* = (C_a - C_b) / (eps_b^2 - eps_a^2), with absolute infidelity as the
/// bias proxy. Scheme `a` is the small-bias one.
pub fn crossover_samples(report_a: &SchemeReport, report_b: &SchemeReport) -> Result<CrossoverReport> {
    let eps_a = report_a.abs_infidelity;
    let eps_b = report_b.abs_infidelity;
    let den = eps_b * eps_b - eps_a * eps_a;
    if den.abs() < 1e-15 {
        return Err(Error::EqualBiases);
    }
    Ok(CrossoverReport {
        n_star: (report_a.cost - report_b.cost) / den,
        c_a: report_a.cost,
        c_b: report_b.cost,
        eps_a,
        eps_b,
    })
}

/// Unitary conjugation actions under which symmetry operators may be
/// identified: another Pauli, or a relabelling of qubits (the form a
/// spin-exchange or other spatial symmetry takes here).
#[derive(Debug, Clone)]
pub enum Conjugator {
    Pauli(PauliString),
    Permutation(Vec<usize>),
}

impl Conjugator {
    fn apply(&self, g: &PauliString) -> PauliString {
        match self {
            // S G S^-1 for Pauli S: same word, sign flipped iff they
            // anticommute.
            Conjugator::Pauli(s) => {
                if s.commutes_with(g) {
                    g.clone()
                } else {
                    g.with_sign(g.sign().flipped())
                }
            }
            Conjugator::Permutation(perm) => g.permuted(perm),
        }
    }
}

/// Partition of a symmetry group under G ~ S G S^-1.
#[derive(Debug, Clone)]
pub struct EquivalencePartition {
    pub classes: Vec<Vec<PauliString>>,
    /// Lexicographically smallest member of each class.
    pub representatives: Vec<PauliString>,
}

/// Partitions `group` into classes equivalent under conjugation by the
/// given operators (assumed by the caller to commute with the noisy state).
pub fn equivalence_partition(group: &SymmetrySet, commuting: &[Conjugator]) -> EquivalencePartition {
    let elements = group.elements();
    let mut parent: Vec<usize> = (0..elements.len()).collect();

    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }

    for (i, g) in elements.iter().enumerate() {
        for conj in commuting {
            let image = conj.apply(g);
            if let Some(j) = elements.iter().position(|e| *e == image) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut classes: Vec<Vec<PauliString>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..elements.len() {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => classes[k].push(elements[i].clone()),
            None => {
                roots.push(r);
                classes.push(vec![elements[i].clone()]);
            }
        }
    }
    let representatives = classes
        .iter()
        .map(|c| c.iter().min().expect("non-empty class").clone())
        .collect();
    EquivalencePartition { classes, representatives }
}

/// Splits a quasi-state into its ideal component and the unit-trace
/// erroneous remainder: rho_w = F rho0 + (1 - F) rho_eps.
pub fn noiseless_decomposition(
    rho_w: &DensityOperator,
    psi0: &PureState,
) -> Result<(f64, DensityOperator)> {
    let f = fidelity_with_pure(rho_w, psi0)?;
    if (1.0 - f).abs() < 1e-12 {
        return Err(Error::UnitFidelity);
    }
    // (1 - rho0) rho_w = rho_w - psi0 (psi0^dag rho_w)
    let dim = rho_w.dim();
    let row = {
        // psi0^dag rho_w as a row vector.
        let mut row = vec![Complex64::new(0.0, 0.0); dim];
        for (i, r) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += psi0.amplitudes()[k].conj() * rho_w.matrix()[(k, i)];
            }
            *r = acc;
        }
        row
    };
    let mut mat = rho_w.matrix().clone();
    for i in 0..dim {
        for j in 0..dim {
            mat[(i, j)] -= psi0.amplitudes()[i] * row[j];
        }
    }
    let rho_eps = DensityOperator::quasi(mat.mapv(|z| z / (1.0 - f)))?;
    Ok((f, rho_eps))
}

/// Three-level diagonal test state with prescribed ideal-state overlap,
/// projector expectation and expansion-operator expectation.
///
/// Returns (rho, psi0, group {I, G}, scheme) on two qubits with
/// psi0 = |00>, G = Z on qubit 1. Requires f <= pi and
/// 2 pi - 1 <= gamma <= 1.
pub fn synthetic_three_level(
    f: f64,
    pi: f64,
    gamma: f64,
) -> Result<(DensityOperator, PureState, SymmetrySet, ExpansionScheme)> {
    if !(0.0..=1.0).contains(&f) || f > pi || pi > 1.0 {
        return Err(Error::InvalidState(format!(
            "need 0 <= f <= pi <= 1, got f={f}, pi={pi}"
        )));
    }
    let g_expect = 2.0 * pi - 1.0;
    if gamma < g_expect - 1e-12 || gamma > 1.0 {
        return Err(Error::InvalidState(format!(
            "gamma={gamma} outside [{g_expect}, 1] reachable with two operators"
        )));
    }
    let rho = DensityOperator::from_diagonal(&[f, pi - f, 1.0 - pi, 0.0])?;
    let psi0 = PureState::basis_state(2, 0);
    let g: PauliString = "IZ".parse().expect("valid word");
    let set = SymmetrySet::new(vec![PauliString::identity(2), g])?;
    // w_I + w_G (2 pi - 1) = gamma (w_I + w_G)
    let w_g = 1.0 - gamma;
    let w_i = gamma - g_expect;
    let weights = if w_i + w_g <= 0.0 {
        vec![1.0, 0.0] // gamma = 1 degenerate case
    } else {
        vec![w_i, w_g]
    };
    let scheme = ExpansionScheme::new(set.clone(), weights)?;
    Ok((rho, psi0, set, scheme))
}
