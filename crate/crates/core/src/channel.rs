//! Simulation of the `(gamma, delta)` unfair noisy channel.
//!
//! The channel is an in-process call: every bit of the input word is flipped
//! independently with the crossover probability `t`. Honest runs draw `t`
//! uniformly from `[gamma, delta]` once per transmitted word and never expose
//! it; a cheating party fixes `t` anywhere in that interval.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use crate::bits::BitWord;
use crate::capacity::ChannelSpec;
use crate::error::{Error, Result};

/// Slack for real-valued distance thresholds.
const THRESHOLD_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseControl {
    HonestRandom,
    Fixed(f64),
}

impl NoiseControl {
    pub fn fixed(spec: &ChannelSpec, t: f64) -> Result<Self> {
        check_crossover(spec, t)?;
        Ok(NoiseControl::Fixed(t))
    }
}

fn check_crossover(spec: &ChannelSpec, t: f64) -> Result<()> {
    if t >= spec.gamma() && t <= spec.delta() {
        Ok(())
    } else {
        Err(Error::NoiseOutOfRange {
            t,
            lo: spec.gamma(),
            hi: spec.delta(),
        })
    }
}

/// One `(gamma, delta)`-UNC from committer to verifier.
#[derive(Debug, Clone, Copy)]
pub struct UnfairChannel {
    spec: ChannelSpec,
}

impl UnfairChannel {
    pub fn new(spec: ChannelSpec) -> Self {
        UnfairChannel { spec }
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn transmit<R: Rng + ?Sized>(
        &self,
        x: &BitWord,
        control: NoiseControl,
        rng: &mut R,
    ) -> Result<BitWord> {
        let t = match control {
            NoiseControl::HonestRandom => rng.random_range(self.spec.gamma()..=self.spec.delta()),
            NoiseControl::Fixed(t) => {
                check_crossover(&self.spec, t)?;
                t
            }
        };
        Ok(bsc(x, t, rng))
    }

    /// Sends `x` through BSC(gamma) and then BSC(theta_v). The first stage is
    /// the noise nobody controls; the second is the part a cheater can tune.
    pub fn transmit_cascade<R: Rng + ?Sized>(
        &self,
        x: &BitWord,
        theta_v: f64,
        rng: &mut R,
    ) -> Result<(BitWord, BitWord)> {
        let max = self.spec.theta();
        if !(0.0..=max).contains(&theta_v) {
            return Err(Error::NoiseOutOfRange {
                t: theta_v,
                lo: 0.0,
                hi: max,
            });
        }
        let intermediate = bsc(x, self.spec.gamma(), rng);
        let output = bsc(&intermediate, theta_v, rng);
        Ok((intermediate, output))
    }
}

/// Binary symmetric channel with crossover `t`.
pub fn bsc<R: Rng + ?Sized>(x: &BitWord, t: f64, rng: &mut R) -> BitWord {
    let mut y = x.clone();
    if t <= 0.0 {
        return y;
    }
    let flip = Bernoulli::new(t).expect("crossover in [0, 1]");
    for i in 0..y.len() {
        if flip.sample(rng) {
            y.flip(i);
        }
    }
    y
}

pub fn hamming_distance(a: &BitWord, b: &BitWord) -> Result<usize> {
    a.check_len(b.len())?;
    Ok(a.limbs()
        .iter()
        .zip(b.limbs())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// `HD(x, y) <= delta n + epsilon n`. Only the upper bound applies here; the
/// opening test adds a lower bound of its own.
pub fn compatible(x: &BitWord, y: &BitWord, spec: &ChannelSpec, epsilon: f64) -> Result<bool> {
    let hd = hamming_distance(x, y)?;
    let n = x.len() as f64;
    Ok(hd as f64 <= spec.delta() * n + epsilon * n + THRESHOLD_SLACK)
}
