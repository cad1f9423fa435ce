//! Cheating parties and exact oracles at small `n`.
//!
//! Binding: a committer that plays the commit phase and afterwards looks for
//! two words it could open to different messages. The search runs over the
//! viable set, which is every word the verifier would still accept given what
//! the verifier holds. Words are enumerated in Hamming shells around `y`.
//!
//! Concealment: a verifier that fixes both hash challenges and the channel
//! noise. The distance between its views under `c = 0` and `c = 1` is exact:
//! `x` and the noise are summed out explicitly and the extractor seed
//! `(a, b)` analytically. For one message bit the view distance is
//! `sum_{y, e, a} 2^-n |sum_x P(x, y, e) (-1)^{r_a . x}|`, where `r_a` is the
//! linear form `x -> trunc_1(a x)`, so a Walsh-Hadamard transform of each
//! `(y, e)` slice gives every `a` at once. The offset `b` only flips the sign.

use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::bits::BitWord;
use crate::capacity::{ChannelSpec, ProtocolParams};
use crate::channel::{NoiseControl, UnfairChannel};
use crate::error::{Error, Result};
use crate::hashing::{
    extract, leftover_hash_bound, sample_twise_hash, sample_two_universal, HashDescriptor,
    HashFamily,
};
use crate::protocol::{Transcript, Verdict};

/// Largest `n` for viable-set enumeration.
pub const MAX_VIABLE_N: usize = 24;
/// Largest `n` for the exact concealment oracle.
pub const MAX_CONCEALING_N: usize = 10;
/// Extractors the best-response committer tries.
const EXT_TRIES: usize = 16;

/// How a cheating party sets the channel noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    MinNoise,
    MaxNoise,
    Fixed(f64),
}

impl FromStr for NoiseMode {
    type Err = Error;

    /// `min-noise`, `max-noise` or `fixed:<t>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-noise" => Ok(NoiseMode::MinNoise),
            "max-noise" => Ok(NoiseMode::MaxNoise),
            _ => match s.strip_prefix("fixed:").map(str::parse::<f64>) {
                Some(Ok(t)) => Ok(NoiseMode::Fixed(t)),
                _ => Err(Error::Parse(format!(
                    "noise mode {s:?} is not min-noise, max-noise or fixed:<t>"
                ))),
            },
        }
    }
}

pub fn committer_noise_strategy(spec: &ChannelSpec, mode: NoiseMode) -> Result<NoiseControl> {
    let t = match mode {
        NoiseMode::MinNoise => spec.gamma(),
        NoiseMode::MaxNoise => spec.delta(),
        NoiseMode::Fixed(t) => t,
    };
    NoiseControl::fixed(spec, t)
}

/// Every word the verifier would still accept, given `y` and the hash
/// checks announced so far.
#[derive(Debug, Clone, PartialEq)]
pub struct ViableSet {
    pub y: BitWord,
    pub window: RangeInclusive<usize>,
    pub checks: usize,
    pub members: Vec<BitWord>,
}

impl ViableSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &BitWord) -> bool {
        self.members.contains(x)
    }
}

fn check_small(n: usize, max: usize, what: &str) -> Result<()> {
    if n > max {
        return Err(Error::InstanceTooLarge(format!(
            "{what} needs n <= {max}, got {n}"
        )));
    }
    Ok(())
}

/// Masks of `w` set bits among the low `n`, in increasing order.
fn shell(n: usize, w: usize) -> impl Iterator<Item = u64> {
    let end = 1u64 << n;
    let first = if w == 0 { 0 } else { (1u64 << w) - 1 };
    let mut next = (w <= n).then_some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ < end).then_some(succ)
        };
        Some(cur)
    })
}

/// Enumerates the window around `y` shell by shell and keeps the words that
/// pass every `(hash, expected output)` check.
pub fn enumerate_viable(
    y: &BitWord,
    checks: &[(HashDescriptor, BitWord)],
    params: &ProtocolParams,
) -> Result<ViableSet> {
    let n = params.n;
    check_small(n, MAX_VIABLE_N, "viable-set enumeration")?;
    y.check_len(n)?;
    for (g, e) in checks {
        e.check_len(g.output_bits())?;
        if g.input_bits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: g.input_bits(),
            });
        }
    }
    let window = params.window_distances();
    let base = y.as_u64();
    let mut members = Vec::new();
    for w in window.clone() {
        'word: for mask in shell(n, w) {
            let x = BitWord::from_u64(base ^ mask, n);
            for (g, e) in checks {
                if g.eval(&x)? != *e {
                    continue 'word;
                }
            }
            members.push(x);
        }
    }
    Ok(ViableSet {
        y: y.clone(),
        window,
        checks: checks.len(),
        members,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BindingStrategy {
    pub noise: NoiseMode,
    /// Choose the extractor after seeing both challenges, to split the words
    /// near `x` that share its hash values.
    pub best_response_ext: bool,
}

impl Default for BindingStrategy {
    fn default() -> Self {
        BindingStrategy {
            noise: NoiseMode::MinNoise,
            best_response_ext: false,
        }
    }
}

/// Two openings of one transcript to different messages.
#[derive(Debug, Clone, Serialize)]
pub struct BindingWitness {
    pub transcript: Transcript,
    #[serde(serialize_with = "hex")]
    pub y: BitWord,
    #[serde(serialize_with = "hex")]
    pub x0: BitWord,
    #[serde(serialize_with = "hex")]
    pub c0: BitWord,
    #[serde(serialize_with = "hex")]
    pub x1: BitWord,
    #[serde(serialize_with = "hex")]
    pub c1: BitWord,
}

fn hex<S: serde::Serializer>(w: &BitWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_hex())
}

impl BindingWitness {
    /// Replays both openings through the verifier.
    pub fn verdicts(&self) -> Result<(Verdict, Verdict)> {
        let nu = self.transcript.params.nu;
        Ok((
            self.transcript
                .verify_open(&self.y, &self.x0, &self.c0, nu)?,
            self.transcript
                .verify_open(&self.y, &self.x1, &self.c1, nu)?,
        ))
    }

    pub fn is_valid(&self) -> Result<bool> {
        let (a, b) = self.verdicts()?;
        Ok(a.accepted() && b.accepted() && self.c0 != self.c1)
    }
}

/// One binding attempt.
#[derive(Debug, Clone, Serialize)]
pub struct BindingTrial {
    pub viable: usize,
    pub honest_viable: bool,
    pub witness: Option<BindingWitness>,
}

/// Words within `radius` of `x` agreeing with `x` on both challenges.
fn hash_twins(
    x: &BitWord,
    g1: &HashDescriptor,
    g2: &HashDescriptor,
    radius: usize,
) -> Result<Vec<BitWord>> {
    let n = x.len();
    let (e1, e2) = (g1.eval(x)?, g2.eval(x)?);
    let mut out = Vec::new();
    for w in 1..=radius.min(n) {
        for mask in shell(n, w) {
            let z = BitWord::from_u64(x.as_u64() ^ mask, n);
            if g2.eval(&z)? == e2 && g1.eval(&z)? == e1 {
                out.push(z);
            }
        }
    }
    Ok(out)
}

fn best_response_ext<R: Rng + ?Sized>(
    x: &BitWord,
    twins: &[BitWord],
    k: usize,
    rng: &mut R,
) -> Result<HashDescriptor> {
    let own = |ext: &HashDescriptor| extract(ext, x);
    let mut best = sample_two_universal(x.len(), k, rng)?;
    let mut best_split = usize::MAX;
    for attempt in 0..EXT_TRIES {
        let ext = if attempt == 0 {
            best.clone()
        } else {
            sample_two_universal(x.len(), k, rng)?
        };
        let mine = own(&ext)?;
        let mut split = 0;
        for z in twins {
            if extract(&ext, z)? != mine {
                split += 1;
            }
        }
        if best_split == usize::MAX || split > best_split {
            best_split = split;
            best = ext;
        }
    }
    Ok(best)
}

/// Plays the commit phase as a committer with noise set by `strategy`, then
/// searches the viable set for two words with different openings. The honest
/// `x` is preferred as the first opening.
pub fn binding_attack_best_pair<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: BindingStrategy,
    rng: &mut R,
) -> Result<BindingTrial> {
    let n = params.n;
    check_small(n, MAX_VIABLE_N, "binding search")?;
    let spec = params.channel;
    let noise = committer_noise_strategy(&spec, strategy.noise)?;

    let x = BitWord::random(n, rng);
    let c = BitWord::random(params.k, rng);
    let y = UnfairChannel::new(spec).transmit(&x, noise, rng)?;
    let g1 = sample_twise_hash(4 * n, n, params.ell1, rng)?;
    let e1 = g1.eval(&x)?;
    let g2 = sample_two_universal(n, params.ell2, rng)?;
    let e2 = g2.eval(&x)?;
    let ext = if strategy.best_response_ext {
        let radius = 2 * *params.window_distances().end();
        best_response_ext(&x, &hash_twins(&x, &g1, &g2, radius)?, params.k, rng)?
    } else {
        sample_two_universal(n, params.k, rng)?
    };
    let d = c.xor(&extract(&ext, &x)?)?;
    let transcript = Transcript {
        params: params.clone(),
        g1: g1.clone(),
        e1: e1.clone(),
        g2: g2.clone(),
        e2: e2.clone(),
        ext,
        d,
    };

    let viable = enumerate_viable(&y, &[(g1, e1), (g2, e2)], params)?;
    let honest_viable = viable.contains(&x);
    let mut openings = Vec::with_capacity(viable.len());
    if honest_viable {
        openings.push((x.clone(), c.clone()));
    }
    for z in viable.members.iter().filter(|z| **z != x) {
        openings.push((z.clone(), transcript.opened_message(z)?));
    }
    let witness = openings.first().and_then(|(x0, c0)| {
        openings
            .iter()
            .find(|(_, c1)| c1 != c0)
            .map(|(x1, c1)| BindingWitness {
                transcript: transcript.clone(),
                y: y.clone(),
                x0: x0.clone(),
                c0: c0.clone(),
                x1: x1.clone(),
                c1: c1.clone(),
            })
    });
    // a witness built on the first opening exists iff any pair does
    Ok(BindingTrial {
        viable: viable.len(),
        honest_viable,
        witness,
    })
}

/// Exact view distance for one verifier noise level and fixed challenges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViewDistance {
    pub t: f64,
    pub distance: f64,
    /// `min_{y, e} H_inf(X | Y = y, E = e)` with `E` both hash outputs.
    pub min_entropy: f64,
    /// Leftover-hash distance at `min_entropy` for one output bit.
    pub lhl_bound: f64,
}

fn check_concealing(
    params: &ProtocolParams,
    g1: &HashDescriptor,
    g2: &HashDescriptor,
) -> Result<()> {
    check_small(params.n, MAX_CONCEALING_N, "the exact concealment oracle")?;
    if params.k != 1 {
        return Err(Error::Constraint(format!(
            "the exact concealment oracle takes k = 1, got {}",
            params.k
        )));
    }
    for (g, ell) in [(g1, params.ell1), (g2, params.ell2)] {
        if g.input_bits() != params.n || g.output_bits() != ell {
            return Err(Error::HashParams(format!(
                "challenge must map {} bits to {ell}, got {} to {}",
                params.n,
                g.input_bits(),
                g.output_bits()
            )));
        }
    }
    Ok(())
}

/// In-place Walsh-Hadamard transform.
fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
}

/// The linear form `x -> trunc_1(a x)` as a bit mask, for every `a`.
fn extractor_forms(n: usize) -> Result<Vec<u64>> {
    let zero = BitWord::zeros(n);
    let basis: Vec<BitWord> = (0..n).map(|i| BitWord::from_u64(1 << i, n)).collect();
    (0..1u64 << n)
        .map(|a| {
            let ext = HashDescriptor::from_coefficients(
                HashFamily::TwoUniversalLinear,
                n,
                1,
                &[zero.clone(), BitWord::from_u64(a, n)],
            )?;
            let mut form = 0u64;
            for (i, e) in basis.iter().enumerate() {
                if ext.eval(e)?.get(0) {
                    form |= 1 << i;
                }
            }
            Ok(form)
        })
        .collect()
}

/// Both hash outputs of every word, packed as `e1 | e2 << ell1`.
fn challenge_outputs(n: usize, g1: &HashDescriptor, g2: &HashDescriptor) -> Result<Vec<u64>> {
    let ell1 = g1.output_bits();
    (0..1u64 << n)
        .map(|x| {
            let x = BitWord::from_u64(x, n);
            let e1 = if ell1 == 0 { 0 } else { g1.eval(&x)?.as_u64() };
            let e2 = if g2.output_bits() == 0 {
                0
            } else {
                g2.eval(&x)?.as_u64()
            };
            Ok(e1 | e2 << ell1)
        })
        .collect()
}

/// Exact distance with `t` unchecked, so tests can go outside `[gamma, delta]`.
fn view_distance_unchecked(
    params: &ProtocolParams,
    t: f64,
    g1: &HashDescriptor,
    g2: &HashDescriptor,
) -> Result<ViewDistance> {
    let n = params.n;
    let size = 1usize << n;
    let forms = extractor_forms(n)?;
    let outputs = challenge_outputs(n, g1, g2)?;
    let classes = 1u64 << (params.ell1 + params.ell2);
    // P(x) P(y | x) by the weight of x ^ y
    let noise: Vec<f64> = (0..size)
        .map(|z| {
            let w = z.count_ones() as i32;
            t.powi(w) * (1.0 - t).powi(n as i32 - w) / size as f64
        })
        .collect();

    let mut distance = 0.0;
    let mut min_entropy = f64::INFINITY;
    let mut slice = vec![0.0; size];
    for e in 0..classes {
        for y in 0..size {
            let mut max = 0.0f64;
            for (x, v) in slice.iter_mut().enumerate() {
                *v = if outputs[x] == e { noise[x ^ y] } else { 0.0 };
                max = max.max(*v);
            }
            walsh_hadamard(&mut slice);
            let mass = slice[0];
            if mass > 0.0 {
                min_entropy = min_entropy.min(-(max / mass).log2());
            }
            distance += forms.iter().map(|&r| slice[r as usize].abs()).sum::<f64>();
        }
    }
    distance /= size as f64;
    Ok(ViewDistance {
        t,
        distance,
        min_entropy,
        lhl_bound: leftover_hash_bound(min_entropy, params.k),
    })
}

/// Exact statistical distance between the verifier's views of a commitment
/// to 0 and to 1, for channel noise `t` and challenges `g1`, `g2`.
pub fn concealing_view_distance(
    params: &ProtocolParams,
    t: f64,
    g1: &HashDescriptor,
    g2: &HashDescriptor,
) -> Result<ViewDistance> {
    check_concealing(params, g1, g2)?;
    NoiseControl::fixed(&params.channel, t)?;
    view_distance_unchecked(params, t, g1, g2)
}

/// Challenge pairs drawn as an honest verifier would.
pub fn sample_challenges<R: Rng + ?Sized>(
    params: &ProtocolParams,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(HashDescriptor, HashDescriptor)>> {
    (0..count)
        .map(|_| {
            Ok((
                sample_twise_hash(4 * params.n, params.n, params.ell1, rng)?,
                sample_two_universal(params.n, params.ell2, rng)?,
            ))
        })
        .collect()
}

/// The largest distance over the given challenge pairs.
pub fn worst_view_distance(
    params: &ProtocolParams,
    t: f64,
    challenges: &[(HashDescriptor, HashDescriptor)],
) -> Result<ViewDistance> {
    let mut worst: Option<ViewDistance> = None;
    for (g1, g2) in challenges {
        let d = concealing_view_distance(params, t, g1, g2)?;
        if worst.is_none_or(|w| d.distance > w.distance) {
            worst = Some(d);
        }
    }
    worst.ok_or_else(|| Error::Constraint("no challenges to evaluate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::ChannelSpec;
    use crate::entropy::Conditional;
    use crate::protocol::FailureReason;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(
        gamma: f64,
        delta: f64,
        n: usize,
        ell1: usize,
        ell2: usize,
        nu: f64,
    ) -> ProtocolParams {
        let spec = ChannelSpec::new(gamma, delta).unwrap();
        ProtocolParams::with_lengths(spec, n, ell1, ell2, 1, nu).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shells_are_complete() {
        for n in 0..=10 {
            for w in 0..=n + 1 {
                let masks: Vec<u64> = shell(n, w).collect();
                let expect = if w > n { 0 } else { binomial(n, w) };
                assert_eq!(masks.len(), expect, "n={n} w={w}");
                assert!(masks
                    .iter()
                    .all(|m| m.count_ones() as usize == w && *m < 1 << n));
                assert!(masks.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn noise_modes() {
        let spec = ChannelSpec::new(0.1, 0.15).unwrap();
        assert_eq!(
            committer_noise_strategy(&spec, NoiseMode::MinNoise).unwrap(),
            NoiseControl::Fixed(0.1)
        );
        assert_eq!(
            committer_noise_strategy(&spec, NoiseMode::MaxNoise).unwrap(),
            NoiseControl::Fixed(0.15)
        );
        assert!(committer_noise_strategy(&spec, "fixed:0.12".parse().unwrap()).is_ok());
        assert!(committer_noise_strategy(&spec, NoiseMode::Fixed(0.2)).is_err());
        assert!("fixed:x".parse::<NoiseMode>().is_err());
    }

    #[test]
    fn viable_set_without_checks_is_the_window() {
        let p = params(0.1, 0.15, 12, 0, 0, 0.02);
        let y = BitWord::from_u64(0b1011_0010_0111, 12);
        let set = enumerate_viable(&y, &[], &p).unwrap();
        let expect: usize = p.window_distances().map(|w| binomial(12, w)).sum();
        assert_eq!(set.len(), expect);
        assert_eq!(expect, 12 + 66);
        assert!(
            enumerate_viable(&BitWord::zeros(25), &[], &params(0.1, 0.15, 25, 0, 0, 0.0)).is_err()
        );
    }

    #[test]
    fn checks_only_shrink_the_viable_set() {
        let p = params(0.1, 0.15, 12, 4, 3, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let y = BitWord::random(12, &mut rng);
            let g1 = sample_twise_hash(48, 12, 4, &mut rng).unwrap();
            let g2 = sample_two_universal(12, 3, &mut rng).unwrap();
            let x = BitWord::random(12, &mut rng);
            let checks = [
                (g1.clone(), g1.eval(&x).unwrap()),
                (g2.clone(), g2.eval(&x).unwrap()),
            ];
            let none = enumerate_viable(&y, &[], &p).unwrap();
            let one = enumerate_viable(&y, &checks[..1], &p).unwrap();
            let two = enumerate_viable(&y, &checks, &p).unwrap();
            assert!(one.members.iter().all(|m| none.contains(m)));
            assert!(two.members.iter().all(|m| one.contains(m)));
        }
    }

    #[test]
    fn witnesses_replay_and_ext_determines_the_message() {
        let p = params(0.1, 0.15, 10, 0, 0, 0.05);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        for _ in 0..50 {
            let trial = binding_attack_best_pair(&p, BindingStrategy::default(), &mut rng).unwrap();
            if let Some(w) = trial.witness {
                assert!(w.is_valid().unwrap());
                found += 1;
                // the same word with the other message is rejected
                let mut other = w.c0.clone();
                other.flip(0);
                let v = w.transcript.verify_open(&w.y, &w.x0, &other, p.nu).unwrap();
                assert_eq!(v.failure_reason(), Some(FailureReason::MessageMismatch));
            }
        }
        // without hashes nearly every window holds two words with distinct images
        assert!(found >= 45, "{found}");
    }

    #[test]
    fn honest_word_is_viable_when_in_window() {
        let p = params(0.1, 0.15, 12, 6, 4, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let strategy = BindingStrategy {
                best_response_ext: true,
                ..Default::default()
            };
            let trial = binding_attack_best_pair(&p, strategy, &mut rng).unwrap();
            if trial.honest_viable {
                assert!(trial.viable >= 1);
            }
            if let Some(w) = trial.witness {
                assert!(w.is_valid().unwrap());
            }
        }
    }

    /// Enumerates every `(a, b, x, noise)` and compares full view laws.
    fn brute_force_distance(
        p: &ProtocolParams,
        t: f64,
        g1: &HashDescriptor,
        g2: &HashDescriptor,
    ) -> f64 {
        let n = p.n;
        let size = 1usize << n;
        let (c1, c2) = (1usize << p.ell1, 1usize << p.ell2);
        // view (y, e1, e2, a, b, d) packed densely
        let index = |y: usize, e1: usize, e2: usize, a: usize, b: usize, d: bool| {
            ((((y * c1 + e1) * c2 + e2) * size + a) * size + b) * 2 + d as usize
        };
        let cells = size * c1 * c2 * size * size * 2;
        let mut laws = [vec![0.0f64; cells], vec![0.0f64; cells]];
        let words: Vec<BitWord> = (0..size as u64).map(|x| BitWord::from_u64(x, n)).collect();
        let outs: Vec<(usize, usize)> = words
            .iter()
            .map(|w| {
                (
                    g1.eval(w).unwrap().as_u64() as usize,
                    g2.eval(w).unwrap().as_u64() as usize,
                )
            })
            .collect();
        for a in 0..size {
            for b in 0..size {
                let ext = HashDescriptor::from_coefficients(
                    HashFamily::TwoUniversalLinear,
                    n,
                    1,
                    &[words[b].clone(), words[a].clone()],
                )
                .unwrap();
                for (x, xw) in words.iter().enumerate() {
                    let bit = ext.eval(xw).unwrap().get(0);
                    let (e1, e2) = outs[x];
                    for z in 0..size {
                        let w = z.count_ones() as i32;
                        let pr =
                            t.powi(w) * (1.0 - t).powi(n as i32 - w) / (size * size * size) as f64;
                        for (c, law) in laws.iter_mut().enumerate() {
                            law[index(x ^ z, e1, e2, a, b, bit ^ (c == 1))] += pr;
                        }
                    }
                }
            }
        }
        0.5 * laws[0]
            .iter()
            .zip(&laws[1])
            .map(|(p0, p1)| (p0 - p1).abs())
            .sum::<f64>()
    }

    #[test]
    fn analytic_distance_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(n, ell1, ell2) in &[(4, 1, 1), (5, 2, 0), (6, 1, 2), (6, 0, 0)] {
            let p = params(0.2, 0.3, n, ell1, ell2, 0.0);
            let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
            for t in [0.2, 0.25, 0.3] {
                let exact = concealing_view_distance(&p, t, &g1, &g2).unwrap();
                let brute = brute_force_distance(&p, t, &g1, &g2);
                assert!(
                    (exact.distance - brute).abs() < 1e-10,
                    "n={n} t={t}: {} vs {brute}",
                    exact.distance
                );
            }
        }
    }

    #[test]
    fn min_entropy_matches_conditional_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let p = params(0.2, 0.3, 6, 1, 1, 0.0);
        let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
        let t: f64 = 0.2;
        let mut rows = vec![vec![0.0; 64]; 64 * 4];
        for x in 0..64u64 {
            let xw = BitWord::from_u64(x, 6);
            let e = g1.eval(&xw).unwrap().as_u64() | g2.eval(&xw).unwrap().as_u64() << 1;
            for y in 0..64u64 {
                let w = (x ^ y).count_ones() as i32;
                rows[(e * 64 + y) as usize][x as usize] = t.powi(w) * (1.0 - t).powi(6 - w) / 64.0;
            }
        }
        let c = Conditional::from_rows(rows).unwrap();
        let exact = concealing_view_distance(&p, t, &g1, &g2).unwrap();
        assert!((exact.min_entropy - c.min_entropy()).abs() < 1e-9);
    }

    #[test]
    fn independent_output_leaks_only_the_zero_extractor() {
        // at t = 1/2 the verifier learns nothing about x from y; with no
        // hashes only a = 0, where the pad is b alone, reveals c
        let p = params(0.2, 0.3, 6, 0, 0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
        let d = view_distance_unchecked(&p, 0.5, &g1, &g2).unwrap();
        assert!((d.distance - 1.0 / 64.0).abs() < 1e-15);
        assert!((d.min_entropy - 6.0).abs() < 1e-12);
    }

    #[test]
    fn distance_falls_as_noise_rises() {
        let p = params(0.2, 0.3, 8, 1, 1, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
        let mut last = f64::INFINITY;
        for t in [0.2, 0.22, 0.24, 0.26, 0.28, 0.3] {
            let d = concealing_view_distance(&p, t, &g1, &g2).unwrap().distance;
            assert!(d < last, "t={t}: {d} >= {last}");
            last = d;
        }
    }

    #[test]
    fn concealment_oracle_preconditions() {
        let p = params(0.1, 0.15, 11, 1, 1, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
        assert!(concealing_view_distance(&p, 0.1, &g1, &g2).is_err());
        let p = params(0.1, 0.15, 8, 1, 1, 0.0);
        let (g1, g2) = sample_challenges(&p, 1, &mut rng).unwrap().remove(0);
        assert!(concealing_view_distance(&p, 0.2, &g1, &g2).is_err());
        assert!(concealing_view_distance(&p, 0.12, &g1, &g2).is_ok());
    }
}
