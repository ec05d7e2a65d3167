//! Monte Carlo block error rate estimation.
//!
//! Each trial samples a Pauli error from the channel, decodes its syndrome and
//! classifies the residual `E · E^BP`: a non-trivial residual syndrome is a
//! detected failure, a residual outside the stabilizer group is a logical
//! (undetected) failure.
//!
//! Trial `t` at sweep point `i` draws from its own ChaCha stream keyed by the
//! master seed, so results do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bp::{ChannelPrior, DecodeConfig};
use crate::code::{ResidualClass, StabilizerCode};
use crate::error::{Error, Result};
use crate::heuristics::{decode_with_heuristics, HeuristicDecode};
use crate::pauli::{Pauli, PauliOperator};

/// Two-sided 95% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Success,
    Detected,
    Logical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub classification: Classification,
    pub iterations_used: usize,
    pub perturbations: usize,
    pub error_weight: usize,
}

/// Independent per-qubit draw from the channel.
pub fn sample_error(prior: &ChannelPrior, rng: &mut impl Rng) -> PauliOperator {
    let paulis: Vec<Pauli> = prior
        .probs()
        .iter()
        .map(|p| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (i, &pi) in p.iter().enumerate() {
                acc += pi;
                if u < acc {
                    return Pauli::from_index(i);
                }
            }
            // u landed in the rounding gap above the cumulative sum
            Pauli::from_index(p.iter().rposition(|&pi| pi > 0.0).unwrap_or(0))
        })
        .collect();
    PauliOperator::from_paulis(&paulis)
}

pub fn classify(
    code: &StabilizerCode,
    error: &PauliOperator,
    correction: &PauliOperator,
) -> Result<Classification> {
    Ok(match code.residual_class(&error.multiply(correction)?)? {
        ResidualClass::Detectable => Classification::Detected,
        ResidualClass::Stabilizer => Classification::Success,
        ResidualClass::Logical => Classification::Logical,
    })
}

/// Decodes a given error and classifies the result.
pub fn run_trial_with_error(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    config: &DecodeConfig,
    error: &PauliOperator,
) -> Result<(TrialOutcome, HeuristicDecode)> {
    let syndrome = code.syndrome(error)?;
    let decoded = decode_with_heuristics(code, prior, &syndrome, config)?;
    let outcome = TrialOutcome {
        classification: classify(code, error, &decoded.result.correction)?,
        iterations_used: decoded.result.iterations_used,
        perturbations: decoded.events.len(),
        error_weight: error.weight(),
    };
    Ok((outcome, decoded))
}

/// Samples an error, then decodes with a decoder seed drawn from the same stream.
pub fn run_trial(
    code: &StabilizerCode,
    prior: &ChannelPrior,
    config: &DecodeConfig,
    rng: &mut impl Rng,
) -> Result<TrialOutcome> {
    let error = sample_error(prior, rng);
    let config = DecodeConfig {
        seed: rng.gen(),
        ..*config
    };
    Ok(run_trial_with_error(code, prior, &config, &error)?.0)
}

/// The RNG for one trial of one sweep point.
pub fn trial_rng(master_seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 40) | trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub epsilons: Vec<f64>,
    /// Trials per sweep point (upper bound when early stopping).
    pub trials: u64,
    pub decode: DecodeConfig,
    pub master_seed: u64,
    /// Stop a sweep point once this many failures were seen (checked between batches).
    pub early_stop_failures: Option<u64>,
    /// Trials dispatched per parallel batch; part of the determinism contract
    /// when early stopping is on.
    pub batch_size: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![0.01],
            trials: 1000,
            decode: DecodeConfig::default(),
            master_seed: 0,
            early_stop_failures: Some(100),
            batch_size: 256,
        }
    }
}

/// Aggregate statistics at one depolarizing strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub epsilon: f64,
    pub trials: u64,
    pub failures: u64,
    pub detected: u64,
    pub logical: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_iterations: f64,
    pub interventions: u64,
    pub stopped_early: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub points: Vec<PointStats>,
}

impl SimStats {
    pub fn total_failures(&self) -> u64 {
        self.points.iter().map(|p| p.failures).sum()
    }

    pub fn total_logical(&self) -> u64 {
        self.points.iter().map(|p| p.logical).sum()
    }

    /// Fraction of failures that were undetected logical errors.
    pub fn logical_fraction(&self) -> f64 {
        let f = self.total_failures();
        if f == 0 {
            0.0
        } else {
            self.total_logical() as f64 / f as f64
        }
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

pub fn run_simulation(code: &StabilizerCode, config: &SimConfig) -> Result<SimStats> {
    config.decode.validate()?;
    if config.batch_size == 0 {
        return Err(Error::InvalidConfig("batch_size must be positive".into()));
    }
    let mut points = Vec::with_capacity(config.epsilons.len());
    for (i, &epsilon) in config.epsilons.iter().enumerate() {
        let prior = ChannelPrior::depolarizing(code.num_qubits(), epsilon)?;
        let (mut trials, mut detected, mut logical, mut iterations, mut interventions) =
            (0u64, 0u64, 0u64, 0u64, 0u64);
        let mut stopped_early = false;
        while trials < config.trials {
            let end = (trials + config.batch_size).min(config.trials);
            let outcomes = (trials..end)
                .into_par_iter()
                .map(|t| {
                    run_trial(
                        code,
                        &prior,
                        &config.decode,
                        &mut trial_rng(config.master_seed, i, t),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            for o in &outcomes {
                match o.classification {
                    Classification::Success => {}
                    Classification::Detected => detected += 1,
                    Classification::Logical => logical += 1,
                }
                iterations += o.iterations_used as u64;
                interventions += o.perturbations as u64;
            }
            trials = end;
            if let Some(target) = config.early_stop_failures {
                if detected + logical >= target && trials < config.trials {
                    stopped_early = true;
                    break;
                }
            }
        }
        let failures = detected + logical;
        let (ci_low, ci_high) = wilson_interval(failures, trials, Z_95);
        if logical > 0 {
            log::warn!(
                "epsilon {epsilon}: {logical} undetected logical failures out of {failures}"
            );
        }
        points.push(PointStats {
            epsilon,
            trials,
            failures,
            detected,
            logical,
            bler: if trials > 0 {
                failures as f64 / trials as f64
            } else {
                0.0
            },
            ci_low,
            ci_high,
            mean_iterations: if trials > 0 {
                iterations as f64 / trials as f64
            } else {
                0.0
            },
            interventions,
            stopped_early,
        });
    }
    Ok(SimStats { points })
}

pub const CSV_HEADER: &str =
    "epsilon,trials,failures,detected,logical,bler,ci_low,ci_high,mean_iterations";

pub fn stats_to_csv(stats: &SimStats) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &stats.points {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.4}\n",
            p.epsilon,
            p.trials,
            p.failures,
            p.detected,
            p.logical,
            p.bler,
            p.ci_low,
            p.ci_high,
            p.mean_iterations
        ));
    }
    out
}

/// JSON report with the full configuration and a fingerprint of the code.
pub fn stats_to_json(
    code: &StabilizerCode,
    config: &SimConfig,
    stats: &SimStats,
) -> serde_json::Value {
    serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "code": {
            "n": code.num_qubits(),
            "m": code.num_checks(),
            "k": code.num_logical(),
            "fingerprint": code.fingerprint(),
        },
        "config": config,
        "logical_fraction": stats.logical_fraction(),
        "points": stats.points,
    })
}

/// `steps` log-spaced values from `lo` to `hi` inclusive.
pub fn log_sweep(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && steps >= 1) {
        return Err(Error::InvalidConfig(format!(
            "sweep {lo}:{hi}:{steps} needs 0 < lo <= hi and at least one step"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..steps)
        .map(|i| (a + (b - a) * i as f64 / (steps - 1) as f64).exp())
        .collect())
}
