//! The commitment and opening phases as two explicit state machines.
//!
//! Commit phase, with the noisy channel between steps 1 and 2:
//!
//! 1. the committer draws a uniform `x` of `n` bits and sends it over the
//!    unfair channel; the verifier receives `y`;
//! 2. the verifier sends `g1`, drawn from the `4n`-wise independent family
//!    with `ell1` output bits;
//! 3. the committer answers `e1 = g1(x)`;
//! 4. the verifier sends `g2`, drawn from the two-universal family with
//!    `ell2` output bits;
//! 5. the committer draws an extractor `ext` with `k` output bits and sends
//!    `e2 = g2(x)`, `ext` and `d = c ^ ext(x)`.
//!
//! Opening: the committer reveals `(x, c)` and the verifier accepts iff the
//! Hamming distance to `y` lies in the window and every check recomputes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitWord;
use crate::capacity::{ChannelSpec, ProtocolParams};
use crate::channel::{hamming_distance, NoiseControl, UnfairChannel};
use crate::error::{Error, Result};
use crate::hashing::{
    extract, sample_twise_hash, sample_two_universal, HashDescriptor, HashFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    AwaitingG1,
    AwaitingG2,
    Committed,
    Opened,
}

impl Phase {
    fn name(self) -> &'static str {
        match self {
            Phase::AwaitingG1 => "awaiting-g1",
            Phase::AwaitingG2 => "awaiting-g2",
            Phase::Committed => "committed",
            Phase::Opened => "opened",
        }
    }
}

/// Step-5 message from committer to verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitMessage {
    pub d: BitWord,
    pub e2: BitWord,
    pub ext: HashDescriptor,
}

#[derive(Debug, Clone)]
pub struct Committer {
    params: ProtocolParams,
    c: BitWord,
    x: BitWord,
    phase: Phase,
}

impl Committer {
    /// Step 1. Returns the committer and the word to put on the channel.
    pub fn start<R: Rng + ?Sized>(
        c: BitWord,
        params: &ProtocolParams,
        rng: &mut R,
    ) -> Result<(Self, BitWord)> {
        c.check_len(params.k)?;
        let x = BitWord::random(params.n, rng);
        let committer = Committer {
            params: params.clone(),
            c,
            x: x.clone(),
            phase: Phase::AwaitingG1,
        };
        Ok((committer, x))
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    fn expect(&self, phase: Phase, what: &'static str) -> Result<()> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(Error::OutOfOrder {
                expected: what,
                phase: self.phase.name(),
            })
        }
    }

    /// Step 3.
    pub fn respond1(&mut self, g1: &HashDescriptor) -> Result<BitWord> {
        self.expect(Phase::AwaitingG1, "g1")?;
        check_descriptor(
            g1,
            HashFamily::PolyTwise,
            self.params.n,
            self.params.ell1,
            "g1",
        )?;
        let e1 = g1.eval(&self.x)?;
        self.phase = Phase::AwaitingG2;
        Ok(e1)
    }

    /// Step 5. The extractor is the committer's own choice.
    pub fn respond2<R: Rng + ?Sized>(
        &mut self,
        g2: &HashDescriptor,
        rng: &mut R,
    ) -> Result<CommitMessage> {
        self.expect(Phase::AwaitingG2, "g2")?;
        check_descriptor(
            g2,
            HashFamily::TwoUniversalLinear,
            self.params.n,
            self.params.ell2,
            "g2",
        )?;
        let e2 = g2.eval(&self.x)?;
        let ext = sample_two_universal(self.params.n, self.params.k, rng)?;
        let d = self.c.xor(&extract(&ext, &self.x)?)?;
        self.phase = Phase::Committed;
        Ok(CommitMessage { d, e2, ext })
    }

    /// Reveals `(x, c)`. May be repeated once committed.
    pub fn open(&mut self) -> Result<(BitWord, BitWord)> {
        if self.phase != Phase::Opened {
            self.expect(Phase::Committed, "open")?;
        }
        self.phase = Phase::Opened;
        Ok((self.x.clone(), self.c.clone()))
    }
}

fn check_descriptor(
    g: &HashDescriptor,
    family: HashFamily,
    n: usize,
    ell: usize,
    name: &str,
) -> Result<()> {
    let independence_ok = match family {
        HashFamily::PolyTwise => g.independence() == 4 * n,
        HashFamily::TwoUniversalLinear => true,
    };
    if g.family() != family || g.input_bits() != n || g.output_bits() != ell || !independence_ok {
        return Err(Error::HashParams(format!(
            "{name} must be {family} on {n} bits with {ell} output bits, got {} on {} bits with {} output bits and t = {}",
            g.family(),
            g.input_bits(),
            g.output_bits(),
            g.independence()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Verifier {
    params: ProtocolParams,
    y: BitWord,
    g1: HashDescriptor,
    e1: Option<BitWord>,
    g2: Option<HashDescriptor>,
    message: Option<CommitMessage>,
    phase: Phase,
}

impl Verifier {
    /// Step 2, on receipt of `y`.
    pub fn challenge1<R: Rng + ?Sized>(
        y: BitWord,
        params: &ProtocolParams,
        rng: &mut R,
    ) -> Result<(Self, HashDescriptor)> {
        y.check_len(params.n)?;
        let g1 = sample_twise_hash(4 * params.n, params.n, params.ell1, rng)?;
        let v = Verifier {
            params: params.clone(),
            y,
            g1: g1.clone(),
            e1: None,
            g2: None,
            message: None,
            phase: Phase::AwaitingG1,
        };
        Ok((v, g1))
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn received(&self) -> &BitWord {
        &self.y
    }

    fn expect(&self, phase: Phase, what: &'static str) -> Result<()> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(Error::OutOfOrder {
                expected: what,
                phase: self.phase.name(),
            })
        }
    }

    /// Step 4: takes `e1` and returns `g2`.
    pub fn challenge2<R: Rng + ?Sized>(
        &mut self,
        e1: BitWord,
        rng: &mut R,
    ) -> Result<HashDescriptor> {
        self.expect(Phase::AwaitingG1, "e1")?;
        e1.check_len(self.params.ell1)?;
        let g2 = sample_two_universal(self.params.n, self.params.ell2, rng)?;
        self.e1 = Some(e1);
        self.g2 = Some(g2.clone());
        self.phase = Phase::AwaitingG2;
        Ok(g2)
    }

    /// End of the commit phase.
    pub fn receive_commit(&mut self, message: CommitMessage) -> Result<()> {
        self.expect(Phase::AwaitingG2, "commit message")?;
        message.d.check_len(self.params.k)?;
        message.e2.check_len(self.params.ell2)?;
        check_descriptor(
            &message.ext,
            HashFamily::TwoUniversalLinear,
            self.params.n,
            self.params.k,
            "ext",
        )?;
        self.message = Some(message);
        self.phase = Phase::Committed;
        Ok(())
    }

    pub fn transcript(&self) -> Result<Transcript> {
        if self.phase != Phase::Committed {
            return Err(Error::OutOfOrder {
                expected: "completed commit phase",
                phase: self.phase.name(),
            });
        }
        let (Some(e1), Some(g2), Some(m)) = (&self.e1, &self.g2, &self.message) else {
            unreachable!("committed phase has every message");
        };
        Ok(Transcript {
            params: self.params.clone(),
            g1: self.g1.clone(),
            e1: e1.clone(),
            g2: g2.clone(),
            e2: m.e2.clone(),
            ext: m.ext.clone(),
            d: m.d.clone(),
        })
    }

    /// The opening test with the window width `nu`.
    pub fn verify_open(&self, x: &BitWord, c: &BitWord, nu: f64) -> Result<Verdict> {
        self.transcript()?.verify_open(&self.y, x, c, nu)
    }
}

/// Why an opening was rejected; the first failing check in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    HammingLow,
    HammingHigh,
    Hash1Mismatch,
    Hash2Mismatch,
    MessageMismatch,
}

impl FailureReason {
    pub const ALL: [FailureReason; 5] = [
        FailureReason::HammingLow,
        FailureReason::HammingHigh,
        FailureReason::Hash1Mismatch,
        FailureReason::Hash2Mismatch,
        FailureReason::MessageMismatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FailureReason::HammingLow => "hamming-low",
            FailureReason::HammingHigh => "hamming-high",
            FailureReason::Hash1Mismatch => "hash1-mismatch",
            FailureReason::Hash2Mismatch => "hash2-mismatch",
            FailureReason::MessageMismatch => "message-mismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "VerdictRecord", try_from = "VerdictRecord")]
pub struct Verdict {
    failure: Option<FailureReason>,
}

impl Verdict {
    pub const ACCEPT: Verdict = Verdict { failure: None };

    pub fn reject(reason: FailureReason) -> Self {
        Verdict {
            failure: Some(reason),
        }
    }

    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failure_reason(&self) -> Option<FailureReason> {
        self.failure
    }
}

#[derive(Serialize, Deserialize)]
struct VerdictRecord {
    accepted: bool,
    failure_reason: Option<FailureReason>,
}

impl From<Verdict> for VerdictRecord {
    fn from(v: Verdict) -> Self {
        VerdictRecord {
            accepted: v.accepted(),
            failure_reason: v.failure,
        }
    }
}

impl TryFrom<VerdictRecord> for Verdict {
    type Error = String;

    fn try_from(r: VerdictRecord) -> std::result::Result<Self, String> {
        if r.accepted != r.failure_reason.is_none() {
            return Err("accepted must hold exactly when failure_reason is absent".into());
        }
        Ok(Verdict {
            failure: r.failure_reason,
        })
    }
}

/// The public conversation of one commit phase plus its parameters. The
/// received word `y` is the verifier's private input and is not part of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub params: ProtocolParams,
    pub g1: HashDescriptor,
    pub e1: BitWord,
    pub g2: HashDescriptor,
    pub e2: BitWord,
    pub ext: HashDescriptor,
    pub d: BitWord,
}

impl Transcript {
    fn validate(&self) -> Result<()> {
        let p = &self.params;
        check_descriptor(&self.g1, HashFamily::PolyTwise, p.n, p.ell1, "g1")?;
        check_descriptor(&self.g2, HashFamily::TwoUniversalLinear, p.n, p.ell2, "g2")?;
        check_descriptor(&self.ext, HashFamily::TwoUniversalLinear, p.n, p.k, "ext")?;
        self.e1.check_len(p.ell1)?;
        self.e2.check_len(p.ell2)?;
        self.d.check_len(p.k)
    }

    /// The opening test against received word `y`.
    pub fn verify_open(&self, y: &BitWord, x: &BitWord, c: &BitWord, nu: f64) -> Result<Verdict> {
        let p = self.params.clone().with_nu(nu)?;
        y.check_len(p.n)?;
        x.check_len(p.n)?;
        c.check_len(p.k)?;
        let window = p.window_distances();
        let hd = hamming_distance(x, y)?;
        if hd < *window.start() {
            return Ok(Verdict::reject(FailureReason::HammingLow));
        }
        if hd > *window.end() {
            return Ok(Verdict::reject(FailureReason::HammingHigh));
        }
        if self.g1.eval(x)? != self.e1 {
            return Ok(Verdict::reject(FailureReason::Hash1Mismatch));
        }
        if self.g2.eval(x)? != self.e2 {
            return Ok(Verdict::reject(FailureReason::Hash2Mismatch));
        }
        if self.opened_message(x)? != *c {
            return Ok(Verdict::reject(FailureReason::MessageMismatch));
        }
        Ok(Verdict::ACCEPT)
    }

    /// `ext(x) ^ d`: the only message `x` can be opened to.
    pub fn opened_message(&self, x: &BitWord) -> Result<BitWord> {
        extract(&self.ext, x)?.xor(&self.d)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct TranscriptRecord {
    params: ProtocolParams,
    g1: String,
    e1: String,
    g2: String,
    e2: String,
    ext: String,
    d: String,
}

impl Serialize for Transcript {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TranscriptRecord {
            params: self.params.clone(),
            g1: self.g1.to_hex(),
            e1: self.e1.to_hex(),
            g2: self.g2.to_hex(),
            e2: self.e2.to_hex(),
            ext: self.ext.to_hex(),
            d: self.d.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Transcript {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TranscriptRecord::deserialize(d)?;
        let parse = || -> Result<Transcript> {
            let p = &r.params;
            let t = Transcript {
                g1: HashDescriptor::from_hex(&r.g1)?,
                e1: BitWord::from_hex(&r.e1, p.ell1)?,
                g2: HashDescriptor::from_hex(&r.g2)?,
                e2: BitWord::from_hex(&r.e2, p.ell2)?,
                ext: HashDescriptor::from_hex(&r.ext)?,
                d: BitWord::from_hex(&r.d, p.k)?,
                params: r.params.clone(),
            };
            t.validate()?;
            Ok(t)
        };
        parse().map_err(serde::de::Error::custom)
    }
}

/// Everything one honest run produced, public and private.
#[derive(Debug, Clone)]
pub struct HonestSession {
    pub transcript: Transcript,
    pub verdict: Verdict,
    pub x: BitWord,
    pub y: BitWord,
    pub c: BitWord,
}

impl HonestSession {
    pub fn distance(&self) -> usize {
        hamming_distance(&self.x, &self.y).expect("x and y have length n")
    }
}

/// Runs both phases between honest parties, with `noise` driving the channel.
pub fn run_honest_session<R: Rng + ?Sized>(
    c: BitWord,
    spec: &ChannelSpec,
    params: &ProtocolParams,
    noise: NoiseControl,
    rng: &mut R,
) -> Result<HonestSession> {
    let channel = UnfairChannel::new(*spec);
    let (mut committer, x) = Committer::start(c, params, rng)?;
    let y = channel.transmit(&x, noise, rng)?;
    let (mut verifier, g1) = Verifier::challenge1(y, params, rng)?;
    let e1 = committer.respond1(&g1)?;
    let g2 = verifier.challenge2(e1, rng)?;
    let message = committer.respond2(&g2, rng)?;
    verifier.receive_commit(message)?;
    let (x_open, c_open) = committer.open()?;
    let verdict = verifier.verify_open(&x_open, &c_open, params.nu)?;
    Ok(HonestSession {
        transcript: verifier.transcript()?,
        verdict,
        x: x_open,
        y: verifier.y,
        c: c_open,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::derive_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> ProtocolParams {
        let spec = ChannelSpec::new(0.1, 0.15).unwrap();
        derive_params(spec, 256, 0.05, 0.05, 0.12, 0.02).unwrap()
    }

    fn committed(seed: u64) -> (Committer, Verifier) {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = BitWord::random(p.k, &mut rng);
        let (mut a, x) = Committer::start(c, &p, &mut rng).unwrap();
        let y = UnfairChannel::new(p.channel)
            .transmit(&x, NoiseControl::HonestRandom, &mut rng)
            .unwrap();
        let (mut b, g1) = Verifier::challenge1(y, &p, &mut rng).unwrap();
        let e1 = a.respond1(&g1).unwrap();
        let g2 = b.challenge2(e1, &mut rng).unwrap();
        let m = a.respond2(&g2, &mut rng).unwrap();
        b.receive_commit(m).unwrap();
        (a, b)
    }

    #[test]
    fn start_checks_message_length() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(Committer::start(BitWord::zeros(p.k + 1), &p, &mut rng).is_err());
        let (_, x1) =
            Committer::start(BitWord::zeros(p.k), &p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let (_, x2) =
            Committer::start(BitWord::zeros(p.k), &p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(x1, x2);
    }

    #[test]
    fn challenge_shapes() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut v, g1) = Verifier::challenge1(BitWord::zeros(p.n), &p, &mut rng).unwrap();
        assert_eq!(g1.independence(), 4 * p.n);
        assert_eq!(g1.output_bits(), p.ell1);
        assert_eq!(g1.family(), HashFamily::PolyTwise);
        let g2 = v.challenge2(BitWord::zeros(p.ell1), &mut rng).unwrap();
        assert_eq!(g2.output_bits(), p.ell2);
        assert_eq!(g2.family(), HashFamily::TwoUniversalLinear);
    }

    #[test]
    fn out_of_order_calls_leave_state_alone() {
        let p = small();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut a, _) = Committer::start(BitWord::zeros(p.k), &p, &mut rng).unwrap();
        let g2 = sample_two_universal(p.n, p.ell2, &mut rng).unwrap();
        assert!(matches!(
            a.respond2(&g2, &mut rng),
            Err(Error::OutOfOrder { .. })
        ));
        assert!(matches!(a.open(), Err(Error::OutOfOrder { .. })));
        assert_eq!(a.phase(), Phase::AwaitingG1);
        // a g2-shaped descriptor is refused as g1
        assert!(a.respond1(&g2).is_err());
        assert_eq!(a.phase(), Phase::AwaitingG1);

        let (mut v, _) = Verifier::challenge1(BitWord::zeros(p.n), &p, &mut rng).unwrap();
        assert!(v.transcript().is_err());
        assert!(v
            .verify_open(&BitWord::zeros(p.n), &BitWord::zeros(p.k), p.nu)
            .is_err());
        assert!(v.challenge2(BitWord::zeros(p.ell1 + 1), &mut rng).is_err());
        assert_eq!(v.phase(), Phase::AwaitingG1);
    }

    #[test]
    fn honest_open_is_accepted_and_repeatable() {
        let (mut a, b) = committed(4);
        let (x, c) = a.open().unwrap();
        assert_eq!(a.open().unwrap(), (x.clone(), c.clone()));
        let t = b.transcript().unwrap();
        assert_eq!(t.opened_message(&x).unwrap(), c);
        assert_eq!(t.e1, t.g1.eval(&x).unwrap());
        assert_eq!(t.e2.len(), b.params().ell2);
        assert_eq!(t.d.len(), b.params().k);
        assert!(b.verify_open(&x, &c, b.params().nu).unwrap().accepted());
    }

    #[test]
    fn rejection_reasons() {
        let (mut a, b) = committed(5);
        let (x, c) = a.open().unwrap();
        let nu = b.params().nu;

        let mut c_bad = c.clone();
        c_bad.flip(0);
        let v = b.verify_open(&x, &c_bad, nu).unwrap();
        assert_eq!(v.failure_reason(), Some(FailureReason::MessageMismatch));
        assert!(!v.accepted());

        let y = b.received().clone();
        let v = b.verify_open(&y, &c, nu).unwrap();
        assert_eq!(v.failure_reason(), Some(FailureReason::HammingLow));

        let mut far = y.clone();
        for i in 0..far.len() {
            far.flip(i);
        }
        let v = b.verify_open(&far, &c, nu).unwrap();
        assert_eq!(v.failure_reason(), Some(FailureReason::HammingHigh));

        // one flip keeps the distance inside the window but breaks g1
        let mut x1 = x.clone();
        let hd = hamming_distance(&x, &y).unwrap();
        let i = (0..x.len())
            .find(|&i| (x.get(i) != y.get(i)) == (hd > 32))
            .unwrap();
        x1.flip(i);
        let v = b.verify_open(&x1, &c, nu).unwrap();
        assert_eq!(v.failure_reason(), Some(FailureReason::Hash1Mismatch));
    }

    #[test]
    fn transcript_json_round_trip() {
        let (mut a, b) = committed(6);
        let (x, c) = a.open().unwrap();
        let t = b.transcript().unwrap();
        let json = t.to_json().unwrap();
        let at: Vec<usize> = ["params", "g1", "e1", "g2", "e2", "ext", "d"]
            .iter()
            .map(|k| json.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]), "{json}");
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value.as_object().unwrap().len(), 7);
        assert_eq!(value["params"].as_object().unwrap().len(), 10);
        let back = Transcript::from_json(&json).unwrap();
        assert_eq!(back, t);
        let y = b.received();
        assert_eq!(
            back.verify_open(y, &x, &c, 0.02).unwrap(),
            t.verify_open(y, &x, &c, 0.02).unwrap()
        );
        // tampering with a length is caught on load
        let bad = json.replace(&format!("\"d\":\"{}\"", t.d.to_hex()), "\"d\":\"000\"");
        assert!(Transcript::from_json(&bad).is_err());
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::reject(FailureReason::Hash2Mismatch);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"accepted":false,"failure_reason":"hash2-mismatch"}"#);
        assert_eq!(serde_json::from_str::<Verdict>(&s).unwrap(), v);
        assert!(serde_json::from_str::<Verdict>(
            r#"{"accepted":true,"failure_reason":"hamming-low"}"#
        )
        .is_err());
    }

    #[test]
    fn session_is_deterministic() {
        let p = small();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = BitWord::random(p.k, &mut rng);
            run_honest_session(c, &p.channel, &p, NoiseControl::HonestRandom, &mut rng).unwrap()
        };
        let (s1, s2) = (run(7), run(7));
        assert_eq!(s1.transcript, s2.transcript);
        assert_eq!(s1.y, s2.y);
        assert!(s1.verdict.accepted());
    }
}
