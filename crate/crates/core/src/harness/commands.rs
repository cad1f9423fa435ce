use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::adversary::{
    binding_attack_best_pair, committer_noise_strategy, sample_challenges, worst_view_distance,
    BindingStrategy, BindingWitness, NoiseMode,
};
use crate::bits::BitWord;
use crate::capacity::ChannelSpec;
use crate::channel::NoiseControl;
use crate::entropy::{
    self, check_chain_rules, max_entropy, min_entropy, shannon_entropy, smooth_max_entropy,
    smooth_min_entropy, Distribution, JointDistribution,
};
use crate::error::{Error, Result};
use crate::protocol::{run_honest_session, FailureReason, Transcript, Verdict};

use super::{trial_rng, ExperimentConfig, Report};

#[derive(Serialize)]
struct CapacityRow {
    gamma: f64,
    delta: f64,
    theta: f64,
    capacity: Option<f64>,
    trivial: bool,
}

/// One row per `(gamma, delta)` pair of the grid. An invalid pair fails the
/// whole table; a trivial one gets an empty capacity.
pub fn capacity_table(gammas: &[f64], deltas: &[f64]) -> Result<Report> {
    let mut rows = Vec::with_capacity(gammas.len() * deltas.len());
    for &gamma in gammas {
        for &delta in deltas {
            let spec = ChannelSpec::new(gamma, delta)?;
            let trivial = spec.is_trivial();
            rows.push(CapacityRow {
                gamma,
                delta,
                theta: spec.theta(),
                capacity: if trivial {
                    None
                } else {
                    Some(spec.commitment_capacity()?)
                },
                trivial,
            });
        }
    }
    Report::new("capacity", &(), &rows, &())
}

/// Channel noise for the sessions of a soundness run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionNoise {
    Honest,
    Committer(NoiseMode),
}

impl std::str::FromStr for SessionNoise {
    type Err = Error;

    /// `honest`, or a committer noise mode.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(SessionNoise::Honest),
            other => other.parse().map(SessionNoise::Committer),
        }
    }
}

#[derive(Serialize)]
struct Echo<'a, T: Serialize> {
    #[serde(flatten)]
    config: &'a ExperimentConfig,
    ell1: usize,
    ell2: usize,
    k: usize,
    strategy: T,
}

fn echo<'a, T: Serialize>(config: &'a ExperimentConfig, strategy: T) -> Result<Echo<'a, T>> {
    let p = config.params()?;
    Ok(Echo {
        config,
        ell1: p.ell1,
        ell2: p.ell2,
        k: p.k,
        strategy,
    })
}

#[derive(Serialize)]
struct SessionRecord {
    trial: usize,
    accepted: bool,
    failure_reason: Option<FailureReason>,
    distance: usize,
}

#[derive(Serialize)]
struct SoundnessSummary {
    trials: usize,
    accepted: usize,
    acceptance_rate: f64,
    failures: BTreeMap<&'static str, usize>,
    hamming_rejection_rate: f64,
    rate: f64,
    capacity: f64,
}

/// Honest sessions; reports acceptance and the first failed check of every
/// rejection.
pub fn soundness(config: &ExperimentConfig, noise: SessionNoise) -> Result<Report> {
    let params = config.params()?;
    let spec = params.channel;
    let control = match noise {
        SessionNoise::Honest => NoiseControl::HonestRandom,
        SessionNoise::Committer(mode) => committer_noise_strategy(&spec, mode)?,
    };
    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial as u64);
            let c = BitWord::random(params.k, &mut rng);
            let s = run_honest_session(c, &spec, &params, control, &mut rng)?;
            Ok(SessionRecord {
                trial,
                accepted: s.verdict.accepted(),
                failure_reason: s.verdict.failure_reason(),
                distance: s.distance(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failures: BTreeMap<&'static str, usize> =
        FailureReason::ALL.iter().map(|r| (r.name(), 0)).collect();
    for r in &records {
        if let Some(f) = r.failure_reason {
            *failures.entry(f.name()).or_default() += 1;
        }
    }
    let accepted = records.iter().filter(|r| r.accepted).count();
    let hamming = failures["hamming-low"] + failures["hamming-high"];
    let trials = records.len().max(1) as f64;
    let summary = SoundnessSummary {
        trials: records.len(),
        accepted,
        acceptance_rate: accepted as f64 / trials,
        failures,
        hamming_rejection_rate: hamming as f64 / trials,
        rate: params.rate(),
        capacity: spec.commitment_capacity()?,
    };
    Report::new("soundness", &echo(config, noise)?, &records, &summary)
}

#[derive(Serialize)]
struct BindingRecord {
    trial: usize,
    viable: usize,
    honest_viable: bool,
    success: bool,
    witness: Option<BindingWitness>,
}

#[derive(Serialize)]
struct BindingSummary {
    trials: usize,
    successes: usize,
    success_fraction: f64,
    budget: f64,
    viable_at_most_one: f64,
    witnesses_verified: bool,
}

/// Binding attempts with exhaustive inner search. The budget is
/// `(8n + 1)^2 2^-ell2`.
pub fn binding(config: &ExperimentConfig, strategy: BindingStrategy) -> Result<Report> {
    let params = config.params()?;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial as u64);
            let t = binding_attack_best_pair(&params, strategy, &mut rng)?;
            Ok(BindingRecord {
                trial,
                viable: t.viable,
                honest_viable: t.honest_viable,
                success: t.witness.is_some(),
                witness: t.witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses_verified = true;
    for w in records.iter().filter_map(|r| r.witness.as_ref()) {
        witnesses_verified &= w.is_valid()?;
    }
    let successes = records.iter().filter(|r| r.success).count();
    let trials = records.len().max(1) as f64;
    let n = params.n as f64;
    let summary = BindingSummary {
        trials: records.len(),
        successes,
        success_fraction: successes as f64 / trials,
        budget: (8.0 * n + 1.0).powi(2) * (-(params.ell2 as f64)).exp2(),
        viable_at_most_one: records.iter().filter(|r| r.viable <= 1).count() as f64 / trials,
        witnesses_verified,
    };
    Report::new("binding", &echo(config, strategy)?, &records, &summary)
}

#[derive(Serialize)]
struct ConcealingRecord {
    t: f64,
    distance: f64,
    min_entropy: f64,
    lhl_bound: f64,
    within_lhl: bool,
}

#[derive(Serialize)]
struct ConcealingSummary {
    challenges: usize,
    max_distance: f64,
    all_within_lhl: bool,
}

/// Exact view distances over a grid of verifier noise levels, each the worst
/// over `config.trials` sampled challenge pairs. The default grid is
/// `gamma`, the midpoint and `delta`.
pub fn concealing(config: &ExperimentConfig, noise_grid: Option<&[f64]>) -> Result<Report> {
    let params = config.params()?;
    let default = [
        config.gamma,
        0.5 * (config.gamma + config.delta),
        config.delta,
    ];
    let grid = noise_grid.unwrap_or(&default);
    let challenges = sample_challenges(&params, config.trials, &mut trial_rng(config.seed, 0))?;
    let records = grid
        .par_iter()
        .map(|&t| {
            let d = worst_view_distance(&params, t, &challenges)?;
            Ok(ConcealingRecord {
                t,
                distance: d.distance,
                min_entropy: d.min_entropy,
                lhl_bound: d.lhl_bound,
                within_lhl: d.distance <= d.lhl_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = ConcealingSummary {
        challenges: challenges.len(),
        max_distance: records.iter().map(|r| r.distance).fold(0.0, f64::max),
        all_within_lhl: records.iter().all(|r| r.within_lhl),
    };
    Report::new("concealing", &echo(config, ())?, &records, &summary)
}

/// A named distribution or joint table for [`entropy`].
#[derive(Debug, Clone)]
pub enum EntropyInput {
    Distribution(String, Distribution),
    Joint(String, JointDistribution),
}

#[derive(Serialize, Default)]
struct EntropyRecord {
    input: String,
    eps: f64,
    min_entropy: Option<f64>,
    max_entropy: Option<f64>,
    shannon: Option<f64>,
    smooth_min: Option<f64>,
    smooth_max: Option<f64>,
    cond_min_entropy: Option<f64>,
    cond_max_entropy: Option<f64>,
    smooth_min_lower: Option<f64>,
    smooth_min_upper: Option<f64>,
    smooth_max_lower: Option<f64>,
    smooth_max_upper: Option<f64>,
    chain_rules_hold: Option<bool>,
}

/// Entropies of each input at each `eps`. For a joint the first axis is
/// conditioned on the rest; with three axes the chain rules are checked at
/// `eps' = eps` and `eps1 = eps2 = eps / 4`.
pub fn entropy(inputs: &[EntropyInput], eps: &[f64]) -> Result<Report> {
    let mut records = Vec::new();
    for input in inputs {
        for &e in eps {
            let record = match input {
                EntropyInput::Distribution(name, d) => EntropyRecord {
                    input: name.clone(),
                    eps: e,
                    min_entropy: Some(min_entropy(d)),
                    max_entropy: Some(max_entropy(d)),
                    shannon: Some(shannon_entropy(d)),
                    smooth_min: Some(smooth_min_entropy(d, e)?),
                    smooth_max: Some(smooth_max_entropy(d, e)?),
                    ..Default::default()
                },
                EntropyInput::Joint(name, j) => {
                    let given: Vec<usize> = (1..j.names().len()).collect();
                    let c = j.conditional(&[0], &given)?;
                    let b = c.smooth(e)?;
                    let chain = if j.names().len() == 3 && e > 0.0 && 2.0 * e < 1.0 {
                        Some(check_chain_rules(j, e, e, e / 4.0, e / 4.0)?.holds())
                    } else {
                        None
                    };
                    EntropyRecord {
                        input: name.clone(),
                        eps: e,
                        cond_min_entropy: Some(entropy::conditional_min_entropy(j)?),
                        cond_max_entropy: Some(entropy::conditional_max_entropy(j)?),
                        smooth_min_lower: Some(b.min_lower),
                        smooth_min_upper: Some(b.min_upper),
                        smooth_max_lower: Some(b.max_lower),
                        smooth_max_upper: Some(b.max_upper),
                        chain_rules_hold: chain,
                        ..Default::default()
                    }
                }
            };
            records.push(record);
        }
    }
    #[derive(Serialize)]
    struct Config<'a> {
        eps: &'a [f64],
    }
    Report::new("entropy", &Config { eps }, &records, &())
}

#[derive(Serialize)]
struct SessionDump {
    transcript: Transcript,
    verdict: Verdict,
    x: String,
    y: String,
    c: String,
    distance: usize,
}

/// One honest session with its full transcript and private words.
pub fn run_session(config: &ExperimentConfig, noise: SessionNoise) -> Result<Report> {
    let params = config.params()?;
    let spec = params.channel;
    let control = match noise {
        SessionNoise::Honest => NoiseControl::HonestRandom,
        SessionNoise::Committer(mode) => committer_noise_strategy(&spec, mode)?,
    };
    let mut rng = trial_rng(config.seed, 0);
    let c = BitWord::random(params.k, &mut rng);
    let s = run_honest_session(c, &spec, &params, control, &mut rng)?;
    let dump = SessionDump {
        distance: s.distance(),
        transcript: s.transcript,
        verdict: s.verdict,
        x: s.x.to_hex(),
        y: s.y.to_hex(),
        c: s.c.to_hex(),
    };
    Report::new("run", &echo(config, noise)?, &[dump], &())
}
