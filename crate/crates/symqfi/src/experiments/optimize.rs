//! Derivative-free search for ground states with large QFI.
//!
//! The objective (coefficients -> ground-state QFI) is cheap, low
//! dimensional and non-smooth at level crossings, so a restarted pattern
//! search fits better than gradient methods: poll all +-sigma coordinate
//! steps, move to the best improvement and expand, otherwise shrink.
//! Positive rescaling of the coefficients leaves the ground state alone,
//! so the search lives on the unit sphere; iterates are re-normalized
//! after every accepted move to stop step sizes from silently shrinking
//! relative to the point. Degenerate ground states score negative
//! infinity, which steers the search away from crossings instead of
//! chasing ill-defined values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{
    derive_sample_seed, BuiltinGenerator, ExperimentError, Result, SERIES_OPTIMIZE,
};
use crate::encoding::{collective_encoding, qfi_upper_bound, CollectiveEncoding};
use crate::hamiltonian::{assemble, ground_state, symmetrize, PiHamiltonianSpec};
use crate::qfi::qfi_symmetric;
use crate::symspace::{count_correlators, CorrelatorCache};

const SIGMA_START: f64 = 0.5;
const SIGMA_MAX: f64 = 1.0;
const SIGMA_STOP: f64 = 1e-6;
const EXPAND: f64 = 1.6;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    pub n_qubits: u32,
    pub k: u32,
    pub generator: BuiltinGenerator,
    pub theta: f64,
    pub restarts: u32,
    /// Poll evaluations allowed per restart; the scoring of each restart's
    /// random start point is not charged. Zero degrades to pure random
    /// multistart.
    pub budget: u64,
    pub master_seed: u64,
    pub degeneracy_tol: f64,
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub best_spec: PiHamiltonianSpec,
    pub best_qfi: f64,
    /// Restart that produced the winner (first on ties).
    pub best_restart: u32,
    /// Total objective evaluations across all restarts, start points
    /// included.
    pub evaluations: u64,
    /// Product-encoding ceiling N^2 seminorm(K)^2 at the same theta.
    pub upper_bound: f64,
}

struct RestartOutcome {
    score: f64,
    coefficients: Vec<f64>,
    evaluations: u64,
}

fn score_point(
    config: &OptimizeConfig,
    encoding: &CollectiveEncoding,
    coefficients: &[f64],
    cache: &CorrelatorCache,
) -> Result<f64> {
    let spec = PiHamiltonianSpec::new(config.n_qubits, config.k, coefficients.to_vec(), None)?;
    let h = symmetrize(&assemble(&spec, cache)?)?;
    let gs = ground_state(&h, config.degeneracy_tol)?;
    if gs.degenerate {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(qfi_symmetric(&gs.state, encoding)?.value)
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
}

fn run_restart(
    config: &OptimizeConfig,
    encoding: &CollectiveEncoding,
    restart: u32,
    cache: &CorrelatorCache,
) -> Result<RestartOutcome> {
    let seed = derive_sample_seed(
        config.master_seed,
        config.n_qubits,
        config.k,
        SERIES_OPTIMIZE,
        restart as u64,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = count_correlators(config.k) as usize;
    let mut x: Vec<f64> = (0..dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    normalize(&mut x);

    let mut evaluations = 1u64;
    let mut fx = score_point(config, encoding, &x, cache)?;

    let mut budget_left = config.budget;
    let mut sigma = SIGMA_START;
    while sigma > SIGMA_STOP && budget_left > 0 {
        let mut best_move: Option<(f64, usize, f64)> = None;
        'poll: for i in 0..dim {
            for delta in [sigma, -sigma] {
                if budget_left == 0 {
                    break 'poll;
                }
                let mut y = x.clone();
                y[i] += delta;
                let fy = score_point(config, encoding, &y, cache)?;
                evaluations += 1;
                budget_left -= 1;
                if best_move.is_none_or(|(f, _, _)| fy > f) {
                    best_move = Some((fy, i, delta));
                }
            }
        }
        match best_move {
            Some((fy, i, delta)) if fy > fx => {
                x[i] += delta;
                // Scale invariance of the objective makes this a pure
                // reparametrization; fy still scores the new point.
                normalize(&mut x);
                fx = fy;
                sigma = (sigma * EXPAND).min(SIGMA_MAX);
            }
            _ => sigma *= SHRINK,
        }
    }

    Ok(RestartOutcome { score: fx, coefficients: x, evaluations })
}

/// Maximize the ground-state QFI over Hamiltonian coefficients for a
/// fixed (N, k, generator, theta). Deterministic for a given master seed
/// and independent of how restarts are scheduled.
pub fn optimize_qfi(config: &OptimizeConfig, cache: &CorrelatorCache) -> Result<OptimizeOutcome> {
    if config.restarts == 0 {
        return Err(ExperimentError::NoRestarts);
    }
    if !config.theta.is_finite() {
        return Err(ExperimentError::BadTheta(config.theta));
    }
    let gen = config.generator.model();
    let encoding = collective_encoding(&gen, config.theta, config.n_qubits)?;

    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| run_restart(config, &encoding, restart, cache))
        .collect::<Result<Vec<_>>>()?;

    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let mut best: Option<(usize, &RestartOutcome)> = None;
    for (i, outcome) in outcomes.iter().enumerate() {
        if best.is_none_or(|(_, b)| outcome.score > b.score) {
            best = Some((i, outcome));
        }
    }
    let (best_restart, winner) = best.expect("at least one restart ran");
    if !winner.score.is_finite() {
        return Err(ExperimentError::AllDegenerate);
    }

    let best_spec =
        PiHamiltonianSpec::new(config.n_qubits, config.k, winner.coefficients.clone(), None)?;
    Ok(OptimizeOutcome {
        best_spec,
        best_qfi: winner.score,
        best_restart: best_restart as u32,
        evaluations,
        upper_bound: qfi_upper_bound(&gen, config.theta, config.n_qubits),
    })
}
