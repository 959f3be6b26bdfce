//! Seed x mu sweep over the configured schemes.

use rayon::prelude::*;
use symx::expansion::scheme_report;
use symx::hubbard::{build_circuit, hamiltonian, ideal_state, symmetries, NoisyCircuit};
use symx::noise::NoiseSpec;
use symx::simulator::simulate;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::schemes::{parse_all, NamedScheme};

/// One (scheme, mu, accepted seed) table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: String,
    pub mu: f64,
    pub seed: u64,
    pub gamma: f64,
    pub eps_h: f64,
    pub eps_rho0: f64,
    pub b_undet: f64,
    pub b_det: f64,
    pub cost: f64,
    pub energy0: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<ResultRow>,
    pub accepted_seeds: Vec<u64>,
    /// (seed, ideal energy) pairs rejected by the filter.
    pub rejected_seeds: Vec<(u64, f64)>,
}

/// Builds every seed's circuit, filters on the ideal energy magnitude,
/// simulates each retained (seed, mu) point once and evaluates every
/// scheme on it. Rows come back in canonical (scheme, mu, seed) order, so
/// repeated runs of the same config produce identical output.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    config.validate()?;
    let spec = config.lattice.spec();
    let h = hamiltonian(&spec);
    let syms = symmetries(&spec);
    let schemes: Vec<NamedScheme> = parse_all(&config.schemes, &spec)?;

    let mut accepted: Vec<(u64, NoisyCircuit, f64)> = Vec::new();
    let mut rejected_seeds = Vec::new();
    for &seed in &config.seeds {
        let circuit = build_circuit(&spec, spec.default_layers(), seed)?;
        let energy = h.expectation_pure(&ideal_state(&circuit))?;
        if energy.abs() > config.energy_filter {
            accepted.push((seed, circuit, energy));
        } else {
            rejected_seeds.push((seed, energy));
        }
    }
    if accepted.is_empty() {
        return Err(CliError::AllSeedsFiltered(config.energy_filter));
    }

    let points: Vec<(usize, f64)> = (0..accepted.len())
        .flat_map(|i| config.mu_grid.iter().map(move |&mu| (i, mu)))
        .collect();

    let mut rows: Vec<ResultRow> = points
        .par_iter()
        .map(|&(idx, mu)| -> Result<Vec<ResultRow>> {
            let (seed, circuit, energy0) = &accepted[idx];
            let noise = NoiseSpec::new(config.noise, mu, circuit.noise_location_count(config.noise))?;
            let result = simulate(circuit, &noise)?;
            let mut out = Vec::with_capacity(schemes.len());
            for named in &schemes {
                let report = scheme_report(&result, &named.scheme, &syms.group, &h)?;
                out.push(ResultRow {
                    scheme: named.name.clone(),
                    mu,
                    seed: *seed,
                    gamma: report.gamma_expect,
                    eps_h: report.rel_bias_obs.abs(),
                    eps_rho0: report.abs_infidelity,
                    b_undet: report.b_undet,
                    b_det: report.b_det,
                    cost: report.cost,
                    energy0: *energy0,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let scheme_index = |name: &str| config.schemes.iter().position(|s| s == name).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| {
        scheme_index(&a.scheme)
            .cmp(&scheme_index(&b.scheme))
            .then(a.mu.partial_cmp(&b.mu).unwrap())
            .then(a.seed.cmp(&b.seed))
    });

    Ok(SweepOutput {
        rows,
        accepted_seeds: accepted.iter().map(|(s, _, _)| *s).collect(),
        rejected_seeds,
    })
}

/// Mean of a row field over seeds for one (scheme, mu) cell.
pub fn cell_mean<F: Fn(&ResultRow) -> f64>(
    rows: &[ResultRow],
    scheme: &str,
    mu: f64,
    field: F,
) -> Option<f64> {
    let values: Vec<f64> = rows
        .iter()
        .filter(|r| r.scheme == scheme && (r.mu - mu).abs() < 1e-12)
        .map(&field)
        .collect();
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
