//! Protocol invariants checked on random small instances.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unc_commit::adversary::enumerate_viable;
use unc_commit::bits::BitWord;
use unc_commit::capacity::{ChannelSpec, ProtocolParams};
use unc_commit::channel::{hamming_distance, NoiseControl, UnfairChannel};
use unc_commit::error::Error;
use unc_commit::hashing::{sample_twise_hash, sample_two_universal};
use unc_commit::protocol::{
    run_honest_session, CommitMessage, Committer, Phase, Transcript, Verifier,
};

fn params(n: usize, ell1: usize, ell2: usize, k: usize, nu: f64) -> ProtocolParams {
    let spec = ChannelSpec::new(0.1, 0.15).unwrap();
    ProtocolParams::with_lengths(spec, n, ell1, ell2, k, nu).unwrap()
}

fn tiny() -> impl Strategy<Value = ProtocolParams> {
    (
        6usize..=12,
        0usize..=6,
        0usize..=6,
        1usize..=3,
        prop_oneof![Just(0.0), Just(0.02), Just(0.1)],
    )
        .prop_map(|(n, a, b, k, nu)| params(n, a.min(n), b.min(n), k, nu))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The accepted openings of a transcript are exactly the window words
    /// that match both hashes, each paired with the one message the
    /// extractor and pad allow.
    #[test]
    fn accepted_openings_are_a_function_of_the_word(p in tiny(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = BitWord::random(p.k, &mut rng);
        let s = run_honest_session(c, &p.channel, &p, NoiseControl::HonestRandom, &mut rng).unwrap();
        let t = &s.transcript;
        let window = p.window_distances();

        let mut accepted = Vec::new();
        for xv in 0..1u64 << p.n {
            let x = BitWord::from_u64(xv, p.n);
            for cv in 0..1u64 << p.k {
                let c = BitWord::from_u64(cv, p.k);
                if t.verify_open(&s.y, &x, &c, p.nu).unwrap().accepted() {
                    accepted.push((x.clone(), c));
                }
            }
        }

        let mut expected = Vec::new();
        for xv in 0..1u64 << p.n {
            let x = BitWord::from_u64(xv, p.n);
            if window.contains(&hamming_distance(&x, &s.y).unwrap())
                && t.g1.eval(&x).unwrap() == t.e1
                && t.g2.eval(&x).unwrap() == t.e2
            {
                let c = t.ext.eval(&x).unwrap().xor(&t.d).unwrap();
                expected.push((x, c));
            }
        }
        prop_assert_eq!(&accepted, &expected);

        let mut viable = enumerate_viable(
            &s.y,
            &[(t.g1.clone(), t.e1.clone()), (t.g2.clone(), t.e2.clone())],
            &p,
        )
        .unwrap()
        .members;
        viable.sort_by_key(|x| x.as_u64());
        let words: Vec<BitWord> = expected.into_iter().map(|(x, _)| x).collect();
        prop_assert_eq!(viable, words);
    }

    #[test]
    fn honest_verdict_is_window_membership(
        n in 16usize..160,
        seed in any::<u64>(),
        nu in prop_oneof![Just(0.0), Just(0.02)],
    ) {
        let p = params(n, n / 4, n / 8, (n / 8).max(1), nu);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = BitWord::random(p.k, &mut rng);
        let s = run_honest_session(c, &p.channel, &p, NoiseControl::HonestRandom, &mut rng).unwrap();
        prop_assert_eq!(s.verdict.accepted(), p.window_distances().contains(&s.distance()));
    }
}

/// Runs the commit phase by hand so the verifier object stays available.
fn committed(p: &ProtocolParams, seed: u64) -> (Committer, Verifier) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = BitWord::random(p.k, &mut rng);
    let (mut a, x) = Committer::start(c, p, &mut rng).unwrap();
    let y = UnfairChannel::new(p.channel)
        .transmit(&x, NoiseControl::HonestRandom, &mut rng)
        .unwrap();
    let (mut b, g1) = Verifier::challenge1(y, p, &mut rng).unwrap();
    let e1 = a.respond1(&g1).unwrap();
    let g2 = b.challenge2(e1, &mut rng).unwrap();
    b.receive_commit(a.respond2(&g2, &mut rng).unwrap())
        .unwrap();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A transcript read back from JSON gives the live verifier's verdict
    /// on any opening.
    #[test]
    fn replayed_transcript_gives_identical_verdicts(
        seed in any::<u64>(),
        flips in proptest::collection::vec(0usize..96, 0..4),
        flip_c in any::<bool>(),
    ) {
        let p = params(96, 40, 12, 8, 0.02);
        let (mut a, b) = committed(&p, seed);
        let (mut x, mut c) = a.open().unwrap();
        for i in flips {
            x.flip(i);
        }
        if flip_c {
            c.flip(0);
        }
        let json = b.transcript().unwrap().to_json().unwrap();
        let replayed = Transcript::from_json(&json).unwrap();
        prop_assert_eq!(&replayed, &b.transcript().unwrap());
        let live = b.verify_open(&x, &c, p.nu).unwrap();
        let again = replayed.verify_open(b.received(), &x, &c, p.nu).unwrap();
        prop_assert_eq!(live, again);
    }
}

#[derive(Debug, Clone, Copy)]
enum Call {
    Respond1,
    Respond2,
    Open,
    Challenge2,
    ReceiveCommit,
    Transcript,
    VerifyOpen,
}

fn call() -> impl Strategy<Value = Call> {
    prop_oneof![
        Just(Call::Respond1),
        Just(Call::Respond2),
        Just(Call::Open),
        Just(Call::Challenge2),
        Just(Call::ReceiveCommit),
        Just(Call::Transcript),
        Just(Call::VerifyOpen),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Calls in the wrong phase fail with an ordering error and leave both
    /// parties able to finish a normal run.
    #[test]
    fn out_of_order_calls_do_not_corrupt_state(
        seed in any::<u64>(),
        calls in proptest::collection::vec(call(), 0..12),
    ) {
        let p = params(64, 30, 8, 6, 0.02);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = BitWord::random(p.k, &mut rng);
        let (mut a, x) = Committer::start(c.clone(), &p, &mut rng).unwrap();
        let y = UnfairChannel::new(p.channel)
            .transmit(&x, NoiseControl::HonestRandom, &mut rng)
            .unwrap();
        let (mut b, g1) = Verifier::challenge1(y, &p, &mut rng).unwrap();

        let mut e1 = None;
        let mut g2 = None;
        let mut message: Option<CommitMessage> = None;
        let mut answered = None;
        for call in calls {
            let (pa, pb) = (a.phase(), b.phase());
            let ok = match call {
                Call::Respond1 => a.respond1(&g1).map(|e| e1 = Some(e)),
                Call::Respond2 => {
                    let g = g2.clone().unwrap_or_else(|| sample_two_universal(p.n, p.ell2, &mut rng).unwrap());
                    a.respond2(&g, &mut rng).map(|m| {
                        message = Some(m);
                        answered = Some(g);
                    })
                }
                Call::Open => a.open().map(drop),
                Call::Challenge2 => {
                    let e = e1.clone().unwrap_or_else(|| BitWord::zeros(p.ell1));
                    b.challenge2(e, &mut rng).map(|g| g2 = Some(g))
                }
                Call::ReceiveCommit => {
                    let m = message.clone().unwrap_or_else(|| CommitMessage {
                        d: BitWord::zeros(p.k),
                        e2: BitWord::zeros(p.ell2),
                        ext: sample_two_universal(p.n, p.k, &mut rng).unwrap(),
                    });
                    b.receive_commit(m)
                }
                Call::Transcript => b.transcript().map(drop),
                Call::VerifyOpen => b.verify_open(&x, &c, p.nu).map(drop),
            };
            match ok {
                Ok(()) => {}
                Err(e) => {
                    prop_assert!(
                        matches!(e, Error::OutOfOrder { .. }),
                        "{call:?} failed with {e}"
                    );
                    prop_assert_eq!((a.phase(), b.phase()), (pa, pb));
                }
            }
        }

        // finish whatever is left in protocol order, reusing the messages
        // already exchanged
        if a.phase() == Phase::AwaitingG1 {
            e1 = Some(a.respond1(&g1).unwrap());
        }
        if b.phase() == Phase::AwaitingG1 {
            g2 = Some(b.challenge2(e1.clone().unwrap(), &mut rng).unwrap());
        }
        if a.phase() == Phase::AwaitingG2 {
            let g = g2.clone().unwrap_or_else(|| sample_two_universal(p.n, p.ell2, &mut rng).unwrap());
            message = Some(a.respond2(&g, &mut rng).unwrap());
            answered = Some(g);
        }
        if b.phase() == Phase::AwaitingG2 {
            b.receive_commit(message.clone().unwrap()).unwrap();
        }
        let (xo, co) = a.open().unwrap();
        prop_assert_eq!((&xo, &co), (&x, &c));
        let t = b.transcript().unwrap();
        prop_assert_eq!(&t.g1, &g1);
        // when both sides saw the same exchange, an honest
        // opening is judged on the window alone
        let m = message.unwrap();
        let consistent = Some(&t.e1) == e1.as_ref() && Some(&t.g2) == answered.as_ref();
        if consistent && t.e2 == m.e2 && t.d == m.d {
            let v = b.verify_open(&xo, &co, p.nu).unwrap();
            let hd = hamming_distance(&xo, b.received()).unwrap();
            prop_assert_eq!(v.accepted(), p.window_distances().contains(&hd));
        }
    }
}

#[test]
fn g1_uses_the_full_independence() {
    let p = params(12, 8, 6, 1, 0.02);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut a, _) = Committer::start(BitWord::zeros(1), &p, &mut rng).unwrap();
    let short = sample_twise_hash(2 * p.n, p.n, p.ell1, &mut rng).unwrap();
    assert!(a.respond1(&short).is_err());
    assert_eq!(a.phase(), Phase::AwaitingG1);
}
