//! Two-qubit depolarising and single-qubit bit-flip channels, parametrised
//! by the mean circuit error count mu.
//!
//! Depolarising convention: D(rho) = (1-p) rho + p/15 sum_{P != I} P rho P
//! over the 15 non-identity two-qubit Paulis, so p is the total error
//! probability of the location. mu = locations * p.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    Depolarising2Q,
    BitFlip1Q,
}

impl NoiseKind {
    /// Error locations contributed by one two-qubit gate.
    pub fn locations_per_gate(self) -> usize {
        match self {
            NoiseKind::Depolarising2Q => 1,
            NoiseKind::BitFlip1Q => 2,
        }
    }
}

impl std::fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseKind::Depolarising2Q => write!(f, "depolarising"),
            NoiseKind::BitFlip1Q => write!(f, "bitflip"),
        }
    }
}

/// Mean-error-count noise model for a circuit with a known number of
/// error locations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub mu: f64,
    pub locations: usize,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, mu: f64, locations: usize) -> Result<Self> {
        if locations == 0 {
            return Err(Error::InvalidState("noise spec needs >= 1 location".into()));
        }
        if !(mu >= 0.0) {
            return Err(Error::InvalidState(format!("mu = {mu} must be >= 0")));
        }
        Ok(Self { kind, mu, locations })
    }

    /// Per-location probability p = mu / locations.
    pub fn per_location_probability(&self) -> Result<f64> {
        mu_to_p(self)
    }
}

/// p = mu / locations under the linear location model.
pub fn mu_to_p(spec: &NoiseSpec) -> Result<f64> {
    let p = spec.mu / spec.locations as f64;
    if p >= 1.0 {
        return Err(Error::ProbabilityOverflow(p));
    }
    Ok(p)
}

/// 16-term two-qubit depolarising channel on the given pair.
///
/// Implemented through the twirl identity
/// (1/16) sum_{all P} P rho P = I/4 (x) Tr_pair(rho),
/// which gives the same output as the explicit Kraus sum in one pass.
pub fn apply_depolarising(
    rho: &DensityOperator,
    pair: (usize, usize),
    p: f64,
) -> Result<DensityOperator> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::BadProbability(p));
    }
    let n = rho.n();
    for q in [pair.0, pair.1] {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
    }
    if pair.0 == pair.1 {
        return Err(Error::IndexOutOfRange { index: pair.1, n });
    }
    let q = 16.0 * p / 15.0;
    let keep = 1.0 - q;
    let offsets = pair_offsets(pair);
    let mask = (1usize << pair.0) | (1usize << pair.1);
    let src = rho.matrix();
    let mut out = src.mapv(|z| z * keep);
    let bases: Vec<usize> = base_indices(n, mask);
    for &bi in &bases {
        for &bj in &bases {
            let mut s = Complex64::new(0.0, 0.0);
            for &off in &offsets {
                s += src[(bi + off, bj + off)];
            }
            let add = s * (q / 4.0);
            for &off in &offsets {
                out[(bi + off, bj + off)] += add;
            }
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// (1-p) rho + p X rho X on one qubit.
pub fn apply_bitflip(rho: &DensityOperator, qubit: usize, p: f64) -> Result<DensityOperator> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::BadProbability(p));
    }
    let n = rho.n();
    if qubit >= n {
        return Err(Error::IndexOutOfRange { index: qubit, n });
    }
    let m = 1usize << qubit;
    let dim = rho.dim();
    let src = rho.matrix();
    let mut out = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            out[(i, j)] = src[(i, j)] * (1.0 - p) + src[(i ^ m, j ^ m)] * p;
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(out))
}

fn pair_offsets(pair: (usize, usize)) -> [usize; 4] {
    let (a, b) = pair;
    [0, 1 << a, 1 << b, (1 << a) | (1 << b)]
}

fn base_indices(n: usize, mask: usize) -> Vec<usize> {
    let count = 1usize << (n - 2);
    let mut sorted = [mask.trailing_zeros() as usize, 0];
    sorted[1] = (mask & !(1 << sorted[0])).trailing_zeros() as usize;
    if sorted[0] > sorted[1] {
        sorted.swap(0, 1);
    }
    (0..count)
        .map(|j| {
            let mut base = j;
            for &q in &sorted {
                base = ((base >> q) << (q + 1)) | (base & ((1 << q) - 1));
            }
            base
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliString, Sign};
    use crate::state::{expect, DensityOperator, Observable, PureState};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_state(n: usize, seed: u64) -> DensityOperator {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let u = crate::linalg::random_unitary(1 << n, &mut rng);
        let mut probs = ndarray::Array2::zeros((1 << n, 1 << n));
        let mut total = 0.0;
        for i in 0..(1 << n) {
            let w: f64 = rng.gen_range(0.0..1.0);
            probs[(i, i)] = Complex64::new(w, 0.0);
            total += w;
        }
        probs = probs.mapv(|z| z / total);
        let dag = u.t().mapv(|z| z.conj());
        DensityOperator::try_new(u.dot(&probs).dot(&dag)).unwrap()
    }

    /// Literal 16-term Kraus oracle.
    fn depolarise_brute_force(rho: &DensityOperator, pair: (usize, usize), p: f64) -> ndarray::Array2<Complex64> {
        let n = rho.n();
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut acc = rho.matrix().mapv(|z| z * (1.0 - p));
        for a in letters {
            for b in letters {
                if a == Pauli::I && b == Pauli::I {
                    continue;
                }
                let mut word = vec![Pauli::I; n];
                word[pair.0] = a;
                word[pair.1] = b;
                let word = PauliString::new(word, Sign::Plus);
                acc = acc + word.conjugate_matrix(&rho.matrix().view()).mapv(|z| z * (p / 15.0));
            }
        }
        acc
    }

    #[test]
    fn depolarising_matches_brute_force_kraus() {
        let rho = random_state(3, 42);
        for pair in [(0usize, 1usize), (2, 0), (1, 2)] {
            let fast = apply_depolarising(&rho, pair, 0.23).unwrap();
            let slow = depolarise_brute_force(&rho, pair, 0.23);
            for (a, b) in fast.matrix().iter().zip(slow.iter()) {
                assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
                assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_probability_is_identity_channel() {
        let rho = random_state(2, 1);
        let out = apply_depolarising(&rho, (0, 1), 0.0).unwrap();
        for (a, b) in out.matrix().iter().zip(rho.matrix().iter()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
        }
        let out = apply_bitflip(&rho, 1, 0.0).unwrap();
        for (a, b) in out.matrix().iter().zip(rho.matrix().iter()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn uniform_mixing_point_gives_maximally_mixed_pair() {
        let rho = DensityOperator::from_pure(&PureState::basis_state(2, 0));
        let out = apply_depolarising(&rho, (0, 1), 15.0 / 16.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(out.matrix()[(i, j)].re, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(out.matrix()[(i, j)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn depolarised_zz_expectation() {
        let p = 0.3;
        let rho = DensityOperator::from_pure(&PureState::basis_state(2, 0));
        let out = apply_depolarising(&rho, (0, 1), p).unwrap();
        let zz = Observable::from_pauli("ZZ".parse().unwrap());
        assert_abs_diff_eq!(expect(&out, &zz).unwrap(), 1.0 - 16.0 * p / 15.0, epsilon = 1e-12);
    }

    #[test]
    fn bitflip_examples() {
        let rho = DensityOperator::from_pure(&PureState::basis_state(1, 0));
        let half = apply_bitflip(&rho, 0, 0.5).unwrap();
        assert_abs_diff_eq!(half.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(half.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);

        let p = 0.17;
        let out = apply_bitflip(&rho, 0, p).unwrap();
        let z = Observable::from_pauli("Z".parse().unwrap());
        assert_abs_diff_eq!(expect(&out, &z).unwrap(), 1.0 - 2.0 * p, epsilon = 1e-14);
    }

    #[test]
    fn channels_preserve_trace_hermiticity_positivity() {
        for seed in 0..10u64 {
            let rho = random_state(2, seed);
            let out = apply_depolarising(&rho, (0, 1), 0.4).unwrap();
            assert_abs_diff_eq!(out.trace().re, 1.0, epsilon = 1e-12);
            assert!(out.hermiticity_defect() < 1e-12);
            assert!(crate::linalg::min_eigenvalue(out.matrix()) > -1e-10);

            let out = apply_bitflip(&rho, 0, 0.4).unwrap();
            assert_abs_diff_eq!(out.trace().re, 1.0, epsilon = 1e-12);
            assert!(out.hermiticity_defect() < 1e-12);
            assert!(crate::linalg::min_eigenvalue(out.matrix()) > -1e-10);
        }
    }

    #[test]
    fn depolarising_commutes_with_pauli_conjugation() {
        let rho = random_state(2, 9);
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for a in letters {
            for b in letters {
                let word = PauliString::new(vec![a, b], Sign::Plus);
                let conj_first = DensityOperator::try_new(
                    word.conjugate_matrix(&rho.matrix().view()),
                )
                .unwrap();
                let route1 = apply_depolarising(&conj_first, (0, 1), 0.2).unwrap();
                let depol_first = apply_depolarising(&rho, (0, 1), 0.2).unwrap();
                let route2 = word.conjugate_matrix(&depol_first.matrix().view());
                for (x, y) in route1.matrix().iter().zip(route2.iter()) {
                    assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-12);
                    assert_abs_diff_eq!(x.im, y.im, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn mu_to_p_examples() {
        let spec = NoiseSpec::new(NoiseKind::Depolarising2Q, 1.0, 144).unwrap();
        assert_abs_diff_eq!(mu_to_p(&spec).unwrap(), 1.0 / 144.0, epsilon = 1e-15);

        let spec = NoiseSpec::new(NoiseKind::BitFlip1Q, 1.0, 288).unwrap();
        assert_abs_diff_eq!(mu_to_p(&spec).unwrap(), 1.0 / 288.0, epsilon = 1e-15);

        let spec = NoiseSpec::new(NoiseKind::Depolarising2Q, 0.0, 144).unwrap();
        assert_abs_diff_eq!(mu_to_p(&spec).unwrap(), 0.0, epsilon = 1e-15);

        let spec = NoiseSpec::new(NoiseKind::Depolarising2Q, 200.0, 144).unwrap();
        assert!(matches!(mu_to_p(&spec), Err(Error::ProbabilityOverflow(_))));
    }

    #[test]
    fn bad_probability_rejected() {
        let rho = random_state(2, 2);
        assert!(matches!(
            apply_depolarising(&rho, (0, 1), 1.0),
            Err(Error::BadProbability(_))
        ));
        assert!(matches!(
            apply_bitflip(&rho, 0, -0.1),
            Err(Error::BadProbability(_))
        ));
    }
}
