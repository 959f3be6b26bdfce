//! Shot-level Monte-Carlo verification of the sampling-cost formulas.
//!
//! Each circuit run measures the observable together with one symmetry
//! operator drawn from the scheme's weight distribution; composing the two
//! +-1 results gives one sample each of O.Gamma and Gamma, and the quotient
//! of sample means estimates the expanded value. Direct verification is
//! simulated by post-selecting runs where every group generator reads +1.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::expansion::ExpansionScheme;
use crate::pauli::PauliString;
use crate::state::DensityOperator;

/// One sampled circuit run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    /// Sampled +-1 outcome of the drawn symmetry operator.
    pub g_outcome: i8,
    /// Sampled +-1 outcome of observable-times-symmetry.
    pub og_outcome: i8,
    /// Index of the drawn symmetry in the scheme.
    pub which_g: usize,
}

/// Empirical-versus-predicted estimator variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub empirical_var: f64,
    pub predicted_var: f64,
    pub n: usize,
    pub trials: usize,
    pub z_score: f64,
}

/// First and second moments of a pair of per-run variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientStats {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub cov: f64,
}

/// Splitmix-style stream derivation so trials are schedule-independent.
fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Exact joint +-1 outcome distribution of a commuting Pauli pair,
/// p[(s, t)] indexed by ((1-s)/2, (1-t)/2).
fn joint_distribution(
    rho: &DensityOperator,
    obs: &PauliString,
    g: &PauliString,
) -> Result<[[f64; 2]; 2]> {
    let o = rho.expect_pauli(obs)?.re;
    let ge = rho.expect_pauli(g)?.re;
    let og = rho.expect_pauli(&obs.mul(g)?)?.re;
    let mut p = [[0.0; 2]; 2];
    for (si, s) in [(0usize, 1.0f64), (1, -1.0)] {
        for (ti, t) in [(0usize, 1.0f64), (1, -1.0)] {
            let val = (1.0 + s * o + t * ge + s * t * og) / 4.0;
            if val < -1e-9 {
                return Err(Error::InvalidState(format!(
                    "joint outcome probability {val} < 0"
                )));
            }
            p[si][ti] = val.max(0.0);
        }
    }
    Ok(p)
}

/// Draws `n` shots of the scheme on the exact joint outcome distribution.
pub fn sample_expansion_shots(
    rho: &DensityOperator,
    scheme: &ExpansionScheme,
    obs: &PauliString,
    n: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if n < 1 {
        return Err(Error::InvalidState("need at least one shot".into()));
    }
    let tables = shot_tables(rho, scheme, obs)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| tables.draw(&mut rng)).collect())
}

/// Precomputed cumulative tables for fast repeated sampling.
struct ShotTables {
    g_cum: Vec<f64>,
    // Per symmetry: cumulative over the four (s, t) outcomes in the order
    // (+,+), (+,-), (-,+), (-,-).
    outcome_cum: Vec<[f64; 4]>,
}

impl ShotTables {
    fn draw<R: Rng>(&self, rng: &mut R) -> ShotRecord {
        let u: f64 = rng.gen();
        let which_g = self
            .g_cum
            .iter()
            .position(|c| u <= *c)
            .unwrap_or(self.g_cum.len() - 1);
        let v: f64 = rng.gen();
        let cum = &self.outcome_cum[which_g];
        let k = cum.iter().position(|c| v <= *c).unwrap_or(3);
        let (s, t) = match k {
            0 => (1i8, 1i8),
            1 => (1, -1),
            2 => (-1, 1),
            _ => (-1, -1),
        };
        ShotRecord {
            g_outcome: t,
            og_outcome: s * t,
            which_g,
        }
    }
}

fn shot_tables(
    rho: &DensityOperator,
    scheme: &ExpansionScheme,
    obs: &PauliString,
) -> Result<ShotTables> {
    for g in scheme.ops().elements() {
        if !obs.commutes_with(g) {
            return Err(Error::NonCommutingObservable);
        }
    }
    let weights = scheme.normalised_weights();
    let mut g_cum = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        g_cum.push(acc);
    }
    let mut outcome_cum = Vec::with_capacity(weights.len());
    for g in scheme.ops().elements() {
        let p = joint_distribution(rho, obs, g)?;
        let flat = [p[0][0], p[0][1], p[1][0], p[1][1]];
        let mut cum = [0.0; 4];
        let mut a = 0.0;
        for (i, v) in flat.iter().enumerate() {
            a += v;
            cum[i] = a;
        }
        outcome_cum.push(cum);
    }
    Ok(ShotTables { g_cum, outcome_cum })
}

/// Quotient of sample means: mean(OG) / mean(G).
pub fn ratio_estimate(records: &[ShotRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InvalidState("no shots".into()));
    }
    let og: i64 = records.iter().map(|r| r.og_outcome as i64).sum();
    let g: i64 = records.iter().map(|r| r.g_outcome as i64).sum();
    if g == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(og as f64 / g as f64)
}

/// Delta-method variance of a quotient of sample means after n runs.
pub fn quotient_variance(stats: &QuotientStats, n: usize) -> Result<f64> {
    if stats.mean_b == 0.0 {
        return Err(Error::ZeroMeanDenominator);
    }
    let c = stats.mean_a / stats.mean_b;
    Ok((stats.var_a - 2.0 * c * stats.cov + c * c * stats.var_b)
        / (n as f64 * stats.mean_b * stats.mean_b))
}

/// Runs `trials` independent expansion estimates of `n` shots each and
/// compares the empirical variance with
/// (1 - 2 <O_w><O> + <O_w>^2) / (n <Gamma_w>^2).
pub fn verify_cost_formulas(
    rho: &DensityOperator,
    scheme: &ExpansionScheme,
    obs: &PauliString,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<VarianceReport> {
    let tables = shot_tables(rho, scheme, obs)?;
    let gamma = crate::expansion::gamma_expect(rho, scheme)?;
    let o_w = crate::expansion::expanded_value(
        rho,
        scheme,
        &crate::state::Observable::from_pauli(obs.clone()),
    )?;
    let o_plain = rho.expect_pauli(obs)?.re;
    let predicted_var = (1.0 - 2.0 * o_w * o_plain + o_w * o_w) / (n as f64 * gamma * gamma);

    let mut estimates = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, trial as u64));
        let mut og: i64 = 0;
        let mut g: i64 = 0;
        for _ in 0..n {
            let rec = tables.draw(&mut rng);
            og += rec.og_outcome as i64;
            g += rec.g_outcome as i64;
        }
        if g == 0 {
            return Err(Error::ZeroDenominator);
        }
        estimates.push(og as f64 / g as f64);
    }
    Ok(report_from(estimates, predicted_var, n))
}

/// Direct-verification counterpart: runs are post-selected on every listed
/// generator reading +1, and the empirical variance is compared with
/// (1 - <O_dir>^2) / (n <Pi>).
pub fn verify_direct_cost(
    rho: &DensityOperator,
    generators: &[PauliString],
    obs: &PauliString,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<VarianceReport> {
    for g in generators {
        if !obs.commutes_with(g) {
            return Err(Error::NonCommutingObservable);
        }
    }
    let m = generators.len();
    let ops_count = m + 1;
    // Expectation of each subset product of [obs, g_1, ..., g_m].
    let mut subset_expect = vec![0.0f64; 1 << ops_count];
    for mask in 0..(1usize << ops_count) {
        let mut word = PauliString::identity(rho.n());
        for (i, op) in std::iter::once(obs).chain(generators.iter()).enumerate() {
            if (mask >> i) & 1 == 1 {
                word = word.mul(op)?;
            }
        }
        subset_expect[mask] = rho.expect_pauli(&word)?.re;
    }
    // Joint distribution over outcome vectors.
    let outcomes = 1usize << ops_count;
    let mut probs = vec![0.0f64; outcomes];
    for (v, p) in probs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (mask, e) in subset_expect.iter().enumerate() {
            let parity = (mask & v).count_ones() % 2;
            let sign = if parity == 0 { 1.0 } else { -1.0 };
            acc += sign * e;
        }
        *p = (acc / outcomes as f64).max(0.0);
    }
    let mut cum = Vec::with_capacity(outcomes);
    let mut a = 0.0;
    for p in &probs {
        a += p;
        cum.push(a);
    }

    // Exact <Pi> and <O_dir> from the generator expansion of the projector.
    let gen_masks = 1usize << m;
    let mut pi = 0.0;
    let mut o_pi = 0.0;
    for gm in 0..gen_masks {
        let full = gm << 1; // generator bits sit above the observable bit
        pi += subset_expect[full];
        o_pi += subset_expect[full | 1];
    }
    pi /= gen_masks as f64;
    o_pi /= gen_masks as f64;
    if pi <= 0.0 {
        return Err(Error::ZeroMeanDenominator);
    }
    let o_dir = o_pi / pi;
    let predicted_var = (1.0 - o_dir * o_dir) / (n as f64 * pi);

    let mut estimates = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, trial as u64));
        let mut accepted: i64 = 0;
        let mut signed: i64 = 0;
        for _ in 0..n {
            let u: f64 = rng.gen();
            let v = cum.iter().position(|c| u <= *c).unwrap_or(outcomes - 1);
            // Bit i of v set means operator i read -1.
            let pass = (v >> 1) == 0;
            if pass {
                accepted += 1;
                signed += if v & 1 == 0 { 1 } else { -1 };
            }
        }
        if accepted == 0 {
            return Err(Error::ZeroDenominator);
        }
        estimates.push(signed as f64 / accepted as f64);
    }
    Ok(report_from(estimates, predicted_var, n))
}

fn report_from(estimates: Vec<f64>, predicted_var: f64, n: usize) -> VarianceReport {
    let trials = estimates.len();
    let mean = estimates.iter().sum::<f64>() / trials as f64;
    let empirical_var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (trials as f64 - 1.0);
    // Var(s^2) ~ 2 sigma^4 / (trials - 1) under approximate normality.
    let stderr = predicted_var * (2.0 / (trials as f64 - 1.0)).sqrt();
    let z_score = (empirical_var - predicted_var).abs() / stderr;
    VarianceReport {
        empirical_var,
        predicted_var,
        n,
        trials,
        z_score,
    }
}

/// Two-qubit state with prescribed expectations of a commuting observable
/// pair: O = XX, G = ZZ, and <OG> = og on their (signed) product. Useful
/// as a fully-controlled sampling target.
pub fn synthetic_commuting_pair_state(
    o: f64,
    g: f64,
    og: f64,
) -> Result<(DensityOperator, PauliString, PauliString)> {
    let obs: PauliString = "XX".parse()?;
    let sym: PauliString = "ZZ".parse()?;
    let prod = obs.mul(&sym)?;
    // Outcome probabilities (1 + s o + t g + st og) / 4 must be a
    // distribution.
    for s in [1.0, -1.0] {
        for t in [1.0, -1.0] {
            if (1.0 + s * o + t * g + s * t * og) / 4.0 < 0.0 {
                return Err(Error::InvalidState(format!(
                    "expectations ({o}, {g}, {og}) are not jointly realisable"
                )));
            }
        }
    }
    // rho = (I + o O + g G + og OG)/4; the product word already carries its
    // sign, so <OG> = og exactly.
    let dim = 4;
    let mut mat: Array2<Complex64> = Array2::eye(dim).mapv(|z: Complex64| z / dim as f64);
    for (coef, word) in [(o, &obs), (g, &sym), (og, &prod)] {
        mat = mat + word.matrix().mapv(|z| z * (coef / dim as f64));
    }
    let rho = DensityOperator::try_new(mat)?;
    Ok((rho, obs, sym))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{expanded_value, ExpansionScheme, SymmetrySet};
    use crate::state::{Observable, PureState};
    use approx::assert_abs_diff_eq;

    fn scheme_over(ops: Vec<PauliString>) -> ExpansionScheme {
        ExpansionScheme::uniform(SymmetrySet::new(ops).unwrap())
    }

    #[test]
    fn synthetic_state_hits_requested_expectations() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        assert_abs_diff_eq!(rho.expect_pauli(&obs).unwrap().re, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.expect_pauli(&sym).unwrap().re, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rho.expect_pauli(&obs.mul(&sym).unwrap()).unwrap().re,
            0.2,
            epsilon = 1e-12
        );
        assert!(crate::linalg::min_eigenvalue(rho.matrix()) > -1e-12);
    }

    #[test]
    fn stabilised_state_always_passes() {
        let psi = PureState::basis_state(2, 0);
        let rho = DensityOperator::from_pure(&psi);
        let g: PauliString = "ZZ".parse().unwrap();
        let obs: PauliString = "ZI".parse().unwrap();
        let records =
            sample_expansion_shots(&rho, &scheme_over(vec![g]), &obs, 500, 7).unwrap();
        assert!(records.iter().all(|r| r.g_outcome == 1));
    }

    #[test]
    fn identity_scheme_recovers_plain_mean() {
        let (rho, obs, _) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let scheme = scheme_over(vec![PauliString::identity(2)]);
        let n = 40_000;
        let records = sample_expansion_shots(&rho, &scheme, &obs, n, 3).unwrap();
        let mean: f64 =
            records.iter().map(|r| r.og_outcome as f64).sum::<f64>() / n as f64;
        // 3 sigma with sigma^2 = (1 - 0.09)/n.
        let sigma = ((1.0 - 0.09) / n as f64).sqrt();
        assert!((mean - 0.3).abs() < 3.0 * sigma, "mean {mean} off");
        assert!(records.iter().all(|r| r.g_outcome == 1));
    }

    #[test]
    fn ratio_converges_to_expanded_value() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let scheme = scheme_over(vec![sym]);
        let exact = expanded_value(&rho, &scheme, &Observable::from_pauli(obs.clone())).unwrap();
        assert_abs_diff_eq!(exact, 0.2 / 0.6, epsilon = 1e-12);
        let n = 100_000;
        let records = sample_expansion_shots(&rho, &scheme, &obs, n, 11).unwrap();
        let est = ratio_estimate(&records).unwrap();
        // Delta-method sigma.
        let var = quotient_variance(
            &QuotientStats {
                mean_a: 0.2,
                mean_b: 0.6,
                var_a: 1.0 - 0.04,
                var_b: 1.0 - 0.36,
                cov: 0.3 - 0.2 * 0.6,
            },
            n,
        )
        .unwrap();
        assert!((est - exact).abs() < 3.0 * var.sqrt(), "estimate {est} vs {exact}");
    }

    #[test]
    fn ratio_estimate_examples() {
        let all_ones = vec![
            ShotRecord { g_outcome: 1, og_outcome: 1, which_g: 0 };
            8
        ];
        assert_abs_diff_eq!(ratio_estimate(&all_ones).unwrap(), 1.0, epsilon = 1e-15);

        let alternating: Vec<ShotRecord> = (0..10)
            .map(|i| ShotRecord {
                g_outcome: 1,
                og_outcome: if i % 2 == 0 { 1 } else { -1 },
                which_g: 0,
            })
            .collect();
        assert_abs_diff_eq!(ratio_estimate(&alternating).unwrap(), 0.0, epsilon = 1e-15);

        // Stream with means (0.3, 0.6) -> ratio 0.5.
        let mut stream = Vec::new();
        for i in 0..20 {
            stream.push(ShotRecord {
                og_outcome: if i < 13 { 1 } else { -1 },
                g_outcome: if i < 16 { 1 } else { -1 },
                which_g: 0,
            });
        }
        assert_abs_diff_eq!(ratio_estimate(&stream).unwrap(), 0.5, epsilon = 1e-15);

        let zero_g: Vec<ShotRecord> = (0..2)
            .map(|i| ShotRecord {
                g_outcome: if i == 0 { 1 } else { -1 },
                og_outcome: 1,
                which_g: 0,
            })
            .collect();
        assert!(matches!(ratio_estimate(&zero_g), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn quotient_variance_cases() {
        // All-zero moments give zero variance.
        let stats = QuotientStats { mean_a: 0.3, mean_b: 0.5, var_a: 0.0, var_b: 0.0, cov: 0.0 };
        assert_abs_diff_eq!(quotient_variance(&stats, 100).unwrap(), 0.0, epsilon = 1e-15);

        // Substituting the +-1 moment structure reproduces the closed form.
        let (o, g, og) = (0.3, 0.6, 0.2);
        let o_w: f64 = og / g;
        let stats = QuotientStats {
            mean_a: og,
            mean_b: g,
            var_a: 1.0 - og * og,
            var_b: 1.0 - g * g,
            cov: o - og * g,
        };
        let n = 1000;
        let closed = (1.0 - 2.0 * o_w * o + o_w * o_w) / (n as f64 * g * g);
        assert_abs_diff_eq!(quotient_variance(&stats, n).unwrap(), closed, epsilon = 1e-15);

        let bad = QuotientStats { mean_a: 1.0, mean_b: 0.0, var_a: 0.0, var_b: 0.0, cov: 0.0 };
        assert!(matches!(
            quotient_variance(&bad, 10),
            Err(Error::ZeroMeanDenominator)
        ));
    }

    #[test]
    fn bootstrap_agrees_with_delta_method() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let scheme = scheme_over(vec![sym]);
        let n = 20_000;
        let records = sample_expansion_shots(&rho, &scheme, &obs, n, 19).unwrap();

        // Bootstrap the ratio.
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let resamples = 10_000;
        let mut values = Vec::with_capacity(resamples);
        for _ in 0..resamples {
            let mut og: i64 = 0;
            let mut g: i64 = 0;
            for _ in 0..n {
                let rec = records[rng.gen_range(0..n)];
                og += rec.og_outcome as i64;
                g += rec.g_outcome as i64;
            }
            values.push(og as f64 / g as f64);
        }
        let mean = values.iter().sum::<f64>() / resamples as f64;
        let boot_var =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (resamples - 1) as f64;

        // Delta method with the sample moments.
        let mean_og = records.iter().map(|r| r.og_outcome as f64).sum::<f64>() / n as f64;
        let mean_g = records.iter().map(|r| r.g_outcome as f64).sum::<f64>() / n as f64;
        let cov = records
            .iter()
            .map(|r| (r.og_outcome as f64 - mean_og) * (r.g_outcome as f64 - mean_g))
            .sum::<f64>()
            / n as f64;
        let stats = QuotientStats {
            mean_a: mean_og,
            mean_b: mean_g,
            var_a: 1.0 - mean_og * mean_og,
            var_b: 1.0 - mean_g * mean_g,
            cov,
        };
        let delta = quotient_variance(&stats, n).unwrap();
        assert!(
            (boot_var - delta).abs() / delta < 0.10,
            "bootstrap {boot_var} vs delta {delta}"
        );
    }

    #[test]
    fn expansion_variance_matches_prediction() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let scheme = scheme_over(vec![sym]);
        let report = verify_cost_formulas(&rho, &scheme, &obs, 10_000, 200, 5).unwrap();
        assert!(report.z_score < 3.0, "z = {}", report.z_score);

        // Scheme {I} reduces to the unmitigated variance (1 - <O>^2)/n.
        let id = scheme_over(vec![PauliString::identity(2)]);
        let report = verify_cost_formulas(&rho, &id, &obs, 10_000, 100, 6).unwrap();
        assert_abs_diff_eq!(
            report.predicted_var,
            (1.0 - 0.09) / 10_000.0,
            epsilon = 1e-12
        );
        assert!(report.z_score < 3.0);
    }

    #[test]
    fn direct_verification_variance_matches_prediction() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let report = verify_direct_cost(&rho, &[sym], &obs, 10_000, 200, 8).unwrap();
        assert!(report.z_score < 3.0, "z = {}", report.z_score);
        // <Pi> = 0.8, <O_dir> = (0.3 + 0.2)/2/0.8.
        let pi: f64 = 0.8;
        let o_dir: f64 = 0.25 / 0.8;
        assert_abs_diff_eq!(
            report.predicted_var,
            (1.0 - o_dir * o_dir) / (10_000.0 * pi),
            epsilon = 1e-12
        );

        // Maximally mixed state: <Pi> = 0.5, <O_dir> = 0 -> Var = 2/n.
        let mixed = DensityOperator::maximally_mixed(2);
        let report = verify_direct_cost(
            &mixed,
            &["ZZ".parse().unwrap()],
            &"XX".parse().unwrap(),
            1000,
            50,
            2,
        )
        .unwrap();
        assert_abs_diff_eq!(report.predicted_var, 2.0 / 1000.0, epsilon = 1e-12);
    }

    #[test]
    fn empirical_cost_ratios() {
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.3, 0.6, 0.2).unwrap();
        let n = 10_000;
        let unmit_var = (1.0 - 0.09) / n as f64;

        let scheme = scheme_over(vec![sym.clone()]);
        let exp_report = verify_cost_formulas(&rho, &scheme, &obs, n, 600, 31).unwrap();
        let gamma: f64 = 0.6;
        let ratio = exp_report.empirical_var / unmit_var;
        assert!(
            (ratio / gamma.powi(-2) - 1.0).abs() < 0.15,
            "expansion cost ratio {ratio}"
        );

        let dir_report = verify_direct_cost(&rho, &[sym], &obs, n, 600, 37).unwrap();
        let pi: f64 = 0.8;
        let ratio = dir_report.empirical_var / unmit_var;
        assert!(
            (ratio / pi.recip() - 1.0).abs() < 0.15,
            "direct cost ratio {ratio}"
        );
    }

    #[test]
    fn ratio_estimator_bias_shrinks_with_n() {
        // State chosen for a sizeable O(1/n) quotient bias with a safely
        // non-zero denominator mean.
        let (rho, obs, sym) = synthetic_commuting_pair_state(0.5, 0.35, -0.1).unwrap();
        let scheme = scheme_over(vec![sym]);
        let exact: f64 = -0.1 / 0.35;
        let plan = [(100usize, 2000usize), (1000, 2800), (10_000, 280)];
        let mut biases = Vec::new();
        for (i, (n, trials)) in plan.iter().enumerate() {
            let mut sum = 0.0;
            for t in 0..*trials {
                let records = sample_expansion_shots(
                    &rho,
                    &scheme,
                    &obs,
                    *n,
                    derive_seed(1234 + i as u64, t as u64),
                )
                .unwrap();
                sum += ratio_estimate(&records).unwrap();
            }
            biases.push((sum / *trials as f64 - exact).abs());
        }
        assert!(
            biases[0] > biases[1] && biases[1] > biases[2],
            "|bias| not decreasing: {biases:?}"
        );
    }

    #[test]
    fn non_commuting_observable_rejected() {
        let rho = DensityOperator::maximally_mixed(2);
        let scheme = scheme_over(vec!["ZI".parse().unwrap()]);
        let obs: PauliString = "XI".parse().unwrap();
        assert!(matches!(
            sample_expansion_shots(&rho, &scheme, &obs, 10, 0),
            Err(Error::NonCommutingObservable)
        ));
    }
}
