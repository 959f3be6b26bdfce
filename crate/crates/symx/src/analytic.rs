//! Poisson-limit predictions of fidelities, symmetry expectations, biases
//! and sampling costs, plus the small-bias expansion-scheme search.
//!
//! Under a mean circuit error count mu with Markovian locations, the
//! probability of zero errors is e^-mu, and a Pauli symmetry whose
//! detectable error fraction is f sees <G> ~ e^{-2 f mu}: an even number
//! of detectable errors passes the parity test, an odd number flips it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expansion::{ExpansionScheme, SymmetrySet};
use crate::hubbard::LatticeSpec;
use crate::noise::NoiseKind;
use crate::pauli::{Pauli, PauliString};

/// Exact fraction as a reduced numerator/denominator pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0);
        let g = gcd(num.max(1), den);
        let g = if num == 0 { den } else { g };
        Self { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Detectable error fraction per symmetry, with the effective damaging
/// fraction f_eps used for fidelity estimates (1 by default: crude but
/// standard).
#[derive(Debug, Clone)]
pub struct DetectableFractions {
    fractions: HashMap<PauliString, f64>,
    pub f_eps: f64,
}

impl DetectableFractions {
    pub fn new(entries: Vec<(PauliString, f64)>, f_eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f_eps) {
            return Err(Error::InvalidState(format!("f_eps = {f_eps} outside [0,1]")));
        }
        let mut fractions = HashMap::new();
        for (g, f) in entries {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidState(format!("fraction {f} outside [0,1]")));
            }
            if g.is_identity() && f != 0.0 {
                return Err(Error::InvalidState("f_I must be 0".into()));
            }
            fractions.insert(g, f);
        }
        Ok(Self { fractions, f_eps })
    }

    pub fn get(&self, g: &PauliString) -> Result<f64> {
        if g.is_identity() {
            return Ok(0.0);
        }
        self.fractions.get(g).copied().ok_or(Error::MissingFraction)
    }

    pub fn with_f_eps(mut self, f_eps: f64) -> Self {
        self.f_eps = f_eps;
        self
    }
}

/// Probability of an error-free run: e^-mu.
pub fn poisson_p0(mu: f64) -> f64 {
    (-mu).exp()
}

/// <G> ~ e^{-2 f_G mu}.
pub fn predict_symmetry_expect(f_g: f64, mu: f64) -> f64 {
    (-2.0 * f_g * mu).exp()
}

/// <Gamma_w> ~ weighted mean of e^{-2 f_G mu}.
pub fn predict_gamma(
    scheme: &ExpansionScheme,
    fractions: &DetectableFractions,
    mu: f64,
) -> Result<f64> {
    let weights = scheme.normalised_weights();
    let mut acc = 0.0;
    for (w, g) in weights.iter().zip(scheme.ops().elements()) {
        acc += w * predict_symmetry_expect(fractions.get(g)?, mu);
    }
    Ok(acc)
}

/// <Pi> ~ (1/|G|) sum e^{-2 f_G mu} over the group's fractions (f_I = 0
/// included by the caller).
pub fn predict_projector(group_fractions: &[f64], mu: f64) -> f64 {
    group_fractions
        .iter()
        .map(|f| predict_symmetry_expect(*f, mu))
        .sum::<f64>()
        / group_fractions.len() as f64
}

/// Product form for independent generators: prod (1 + e^{-2 f mu}) / 2.
pub fn predict_projector_independent(generator_fractions: &[f64], mu: f64) -> f64 {
    generator_fractions
        .iter()
        .map(|f| (1.0 + predict_symmetry_expect(*f, mu)) / 2.0)
        .product()
}

/// Location classes of the benchmark circuits: gates across the spin
/// sectors alternate with gates inside each sector, giving layer weights
/// (1/2, 1/4, 1/4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LocationClass {
    AcrossSectors,
    WithinUp,
    WithinDown,
}

/// Counts, by exhaustive enumeration over the error set of one location of
/// the given class, how many error components anticommute with the parity
/// operator's restriction there. Returns (detectable, total).
fn count_detectable(kind: NoiseKind, class: LocationClass, sym: ParitySector) -> (u64, u64) {
    // Restriction of the parity operator to a location of this class:
    // across-sector gates touch one up and one down qubit, within-sector
    // gates two qubits of that sector.
    let letters_at = |up: bool| -> Pauli {
        let covered = match sym {
            ParitySector::Up => up,
            ParitySector::Down => !up,
            ParitySector::Total => true,
        };
        if covered {
            Pauli::Z
        } else {
            Pauli::I
        }
    };
    match kind {
        NoiseKind::Depolarising2Q => {
            let (ra, rb) = match class {
                LocationClass::AcrossSectors => (letters_at(true), letters_at(false)),
                LocationClass::WithinUp => (letters_at(true), letters_at(true)),
                LocationClass::WithinDown => (letters_at(false), letters_at(false)),
            };
            let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
            let mut detectable = 0;
            for a in all {
                for b in all {
                    if a == Pauli::I && b == Pauli::I {
                        continue;
                    }
                    let anticommutes =
                        (a.anticommutes(ra) as usize + b.anticommutes(rb) as usize) % 2 == 1;
                    if anticommutes {
                        detectable += 1;
                    }
                }
            }
            (detectable, 15)
        }
        NoiseKind::BitFlip1Q => {
            // Single-qubit X error against the restriction on that qubit.
            let up = matches!(class, LocationClass::WithinUp | LocationClass::AcrossSectors);
            let r = letters_at(up);
            ((Pauli::X.anticommutes(r)) as u64, 1)
        }
    }
}

/// Which spin sector a parity operator covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParitySector {
    Up,
    Down,
    Total,
}

/// Exhaustive-enumeration cross-check of the detectable fraction for one
/// parity operator, using the alternating-layer weights.
pub fn brute_force_fraction(kind: NoiseKind, sym: ParitySector) -> Ratio {
    match kind {
        NoiseKind::Depolarising2Q => {
            // Gate-location classes weighted (2, 1, 1) / 4.
            let classes = [
                (2u64, LocationClass::AcrossSectors),
                (1, LocationClass::WithinUp),
                (1, LocationClass::WithinDown),
            ];
            let mut num = 0;
            let mut den = 0;
            for (w, class) in classes {
                let (d, t) = count_detectable(kind, class, sym);
                num += w * d;
                den += w * t;
            }
            Ratio::new(num, den)
        }
        NoiseKind::BitFlip1Q => {
            // Qubit-location classes: half on each sector.
            let classes = [(1u64, LocationClass::WithinUp), (1, LocationClass::WithinDown)];
            let mut num = 0;
            let mut den = 0;
            for (w, class) in classes {
                let (d, t) = count_detectable(kind, class, sym);
                num += w * d;
                den += w * t;
            }
            Ratio::new(num, den)
        }
    }
}

/// Detectable fractions of the number-parity symmetries for the benchmark
/// noise models: depolarising gives f_tot = 8/15, f_up/down = 2/5; bit flip
/// gives 1 and 1/2. f_eps defaults to 1.
pub fn detectable_fractions(kind: NoiseKind, lattice: &LatticeSpec) -> Result<DetectableFractions> {
    let syms = crate::hubbard::symmetries(lattice);
    let (f_sector, f_total) = match kind {
        NoiseKind::Depolarising2Q => (2.0 / 5.0, 8.0 / 15.0),
        NoiseKind::BitFlip1Q => (0.5, 1.0),
    };
    DetectableFractions::new(
        vec![
            (PauliString::identity(lattice.qubits()), 0.0),
            (syms.g_up, f_sector),
            (syms.g_down, f_sector),
            (syms.g_tot, f_total),
        ],
        1.0,
    )
}

/// First-order and exact predicted bias plus sampling cost of the uniform
/// expansion over a set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedScheme {
    /// mu |sum (2 f_F - f_eps)| / |F|.
    pub first_order_bias: f64,
    /// |1 - |F| e^{-f_eps mu} / sum e^{-2 f_F mu}|.
    pub exact_bias: f64,
    /// |F|^2 / (sum e^{-2 f_F mu})^2.
    pub cost: f64,
}

pub fn predicted_bias_and_cost(
    set: &SymmetrySet,
    fractions: &DetectableFractions,
    mu: f64,
) -> Result<PredictedScheme> {
    let fs: Vec<f64> = set
        .elements()
        .iter()
        .map(|g| fractions.get(g))
        .collect::<Result<_>>()?;
    let m = fs.len() as f64;
    let sum_exp: f64 = fs.iter().map(|f| predict_symmetry_expect(*f, mu)).sum();
    let first_order_bias =
        mu * fs.iter().map(|f| 2.0 * f - fractions.f_eps).sum::<f64>().abs() / m;
    let exact_bias = (1.0 - m * (-fractions.f_eps * mu).exp() / sum_exp).abs();
    let cost = (m / sum_exp).powi(2);
    Ok(PredictedScheme { first_order_bias, exact_bias, cost })
}

/// Default threshold: the predicted bias of full-group verification.
pub fn default_delta(group: &SymmetrySet, fractions: &DetectableFractions, mu: f64) -> Result<f64> {
    let fs: Vec<f64> = group
        .elements()
        .iter()
        .map(|g| fractions.get(g))
        .collect::<Result<_>>()?;
    let pi = predict_projector(&fs, mu);
    Ok((1.0 - (-fractions.f_eps * mu).exp() / pi).abs())
}

#[derive(Debug, Clone)]
pub enum SearchMode<'a> {
    /// Uses measured expectation values of the symmetry operators.
    Measured(&'a HashMap<PauliString, f64>),
    /// Uses e^{-2 f mu} predictions from detectable fractions.
    Analytic,
}

/// Outcome of the small-bias search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Every enumerated candidate subset of the threshold set.
    pub candidate_sets: Vec<Vec<PauliString>>,
    pub chosen: SymmetrySet,
    pub predicted_bias: f64,
    pub predicted_cost: f64,
    pub delta: f64,
}

/// When the best candidate undershoots the fidelity proxy and another
/// candidate overshoots it by a comparable amount, the overshooting one is
/// preferred: the true fidelity is lower-bounded by e^{-mu}, so the larger
/// expansion expectation is both less biased and cheaper. "Comparable"
/// is within this factor.
const STRADDLE_FACTOR: f64 = 2.0;
const TIE_EPS: f64 = 1e-9;

/// Enumerates every non-empty subset of the threshold set R (operators whose
/// expectation sits within delta of the fidelity proxy e^{-f_eps mu}) and
/// returns the subset minimising the predicted bias.
pub fn search_small_bias(
    group: &SymmetrySet,
    fractions: &DetectableFractions,
    mu: f64,
    delta: f64,
    mode: SearchMode<'_>,
) -> Result<SearchResult> {
    let target = (-fractions.f_eps * mu).exp();

    let expect_of = |g: &PauliString| -> Result<f64> {
        match &mode {
            SearchMode::Measured(map) => map.get(g).copied().ok_or(Error::MissingFraction),
            SearchMode::Analytic => Ok(predict_symmetry_expect(fractions.get(g)?, mu)),
        }
    };

    // Threshold set R.
    let mut r_set: Vec<(PauliString, f64)> = Vec::new();
    for g in group.elements() {
        let e = expect_of(g)?;
        if e >= target / (1.0 + delta) - 1e-12 && e <= target / (1.0 - delta).max(1e-300) + 1e-12 {
            r_set.push((g.clone(), e));
        }
    }
    if r_set.is_empty() {
        return Err(Error::EmptyThresholdSet { mu, delta });
    }

    // Signed deviation of the scheme expectation from the proxy, and the
    // mode-specific objective |deviation|.
    let signed_deviation = |subset: &[usize]| -> Result<f64> {
        match &mode {
            SearchMode::Measured(_) => {
                let mean: f64 =
                    subset.iter().map(|&i| r_set[i].1).sum::<f64>() / subset.len() as f64;
                Ok(mean - target)
            }
            SearchMode::Analytic => {
                let mut sum = 0.0;
                for &i in subset {
                    sum += 2.0 * fractions.get(&r_set[i].0)? - fractions.f_eps;
                }
                Ok(-mu * sum / subset.len() as f64)
            }
        }
    };
    let gamma_of = |subset: &[usize]| -> f64 {
        subset.iter().map(|&i| r_set[i].1).sum::<f64>() / subset.len() as f64
    };

    let m = r_set.len();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for mask in 1usize..(1 << m) {
        candidates.push((0..m).filter(|i| (mask >> i) & 1 == 1).collect());
    }

    // Pass 1: global minimum of the objective with exact ties broken toward
    // larger scheme expectation (and enumeration order after that).
    let mut best: Option<(usize, f64, f64)> = None; // (index, |dev|, gamma)
    let mut deviations = Vec::with_capacity(candidates.len());
    for (idx, subset) in candidates.iter().enumerate() {
        let dev = signed_deviation(subset)?;
        deviations.push(dev);
        let obj = dev.abs();
        let gamma = gamma_of(subset);
        let better = match &best {
            None => true,
            Some((_, b_obj, b_gamma)) => {
                obj < b_obj - TIE_EPS || ((obj - b_obj).abs() <= TIE_EPS && gamma > b_gamma + TIE_EPS)
            }
        };
        if better {
            best = Some((idx, obj, gamma));
        }
    }
    let (mut best_idx, best_obj, _) = best.expect("non-empty candidate list");

    // Pass 2: straddle preference. If the winner sits below the proxy,
    // switch to the best candidate sitting above it when that candidate is
    // within STRADDLE_FACTOR of the winning distance.
    if deviations[best_idx] < -TIE_EPS {
        let mut above: Option<(usize, f64, f64)> = None;
        for (idx, subset) in candidates.iter().enumerate() {
            if deviations[idx] <= TIE_EPS {
                continue;
            }
            let obj = deviations[idx].abs();
            let gamma = gamma_of(subset);
            let better = match &above {
                None => true,
                Some((_, b_obj, b_gamma)) => {
                    obj < b_obj - TIE_EPS
                        || ((obj - b_obj).abs() <= TIE_EPS && gamma > b_gamma + TIE_EPS)
                }
            };
            if better {
                above = Some((idx, obj, gamma));
            }
        }
        if let Some((idx, obj, _)) = above {
            if obj <= STRADDLE_FACTOR * best_obj {
                best_idx = idx;
            }
        }
    }

    let chosen_elements: Vec<PauliString> = candidates[best_idx]
        .iter()
        .map(|&i| r_set[i].0.clone())
        .collect();
    let chosen = SymmetrySet::new(chosen_elements)?;
    let gamma = gamma_of(&candidates[best_idx]);
    let predicted_bias = (1.0 - target / gamma).abs();
    let predicted_cost = gamma.powi(-2);
    Ok(SearchResult {
        candidate_sets: candidates
            .iter()
            .map(|subset| subset.iter().map(|&i| r_set[i].0.clone()).collect())
            .collect(),
        chosen,
        predicted_bias,
        predicted_cost,
        delta,
    })
}
