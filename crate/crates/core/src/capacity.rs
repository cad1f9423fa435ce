//! Channel parameters, the commitment capacity `h(gamma) - h(theta)` and the
//! derivation of integer protocol lengths from real-valued rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparisons between capacity-type quantities.
pub const CAPACITY_TOLERANCE: f64 = 1e-12;

/// Slack used when rounding `n * rate` to an integer, so that products that
/// are integers in exact arithmetic are not pushed across by float error.
const ROUNDING_SLACK: f64 = 1e-9;

/// Binary entropy `h(p) = -p log2 p - (1 - p) log2 (1 - p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    Ok(h(p))
}

pub(crate) fn h(p: f64) -> f64 {
    fn term(q: f64) -> f64 {
        if q == 0.0 {
            0.0
        } else {
            -q * q.log2()
        }
    }
    term(p) + term(1.0 - p)
}

/// A `(gamma, delta)` unfair noisy channel: the crossover probability lies
/// somewhere in `[gamma, delta]` and a cheating party may pick it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    gamma: f64,
    delta: f64,
}

impl ChannelSpec {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if gamma > 0.0 && gamma < delta && delta < 0.5 {
            Ok(ChannelSpec { gamma, delta })
        } else {
            Err(Error::InvalidChannel { gamma, delta })
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Crossover of the adversary-controlled stage when the channel is viewed
    /// as BSC(gamma) followed by BSC(theta).
    pub fn theta(&self) -> f64 {
        (self.delta - self.gamma) / (1.0 - 2.0 * self.gamma)
    }

    /// `delta >= 2 gamma (1 - gamma)`; the boundary itself counts as trivial.
    pub fn is_trivial(&self) -> bool {
        self.delta >= 2.0 * self.gamma * (1.0 - self.gamma) - CAPACITY_TOLERANCE
    }

    /// `h(gamma) - h(theta)` bits per channel use.
    pub fn commitment_capacity(&self) -> Result<f64> {
        if self.is_trivial() {
            return Err(Error::TrivialChannel {
                gamma: self.gamma,
                delta: self.delta,
            });
        }
        Ok(h(self.gamma) - h(self.theta()))
    }
}

pub fn theta_of(spec: &ChannelSpec) -> f64 {
    spec.theta()
}

pub fn is_trivial(spec: &ChannelSpec) -> bool {
    spec.is_trivial()
}

pub fn commitment_capacity(spec: &ChannelSpec) -> Result<f64> {
    spec.commitment_capacity()
}

/// Concrete parameters of one protocol instance.
///
/// `ell1` and `ell2` are the output lengths of the two hash challenges and `k`
/// the message length. Rates are kept alongside so that reports can echo them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    pub channel: ChannelSpec,
    pub n: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub nu: f64,
    pub ell1: usize,
    pub ell2: usize,
    pub k: usize,
    pub theta: f64,
}

/// Derives integer lengths from rates. Hash output lengths round up and the
/// message length rounds down.
pub fn derive_params(
    channel: ChannelSpec,
    n: usize,
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    nu: f64,
) -> Result<ProtocolParams> {
    let capacity = channel.commitment_capacity()?;
    if n == 0 {
        return Err(Error::Constraint("n must be positive".into()));
    }
    if !(alpha1 > 0.0 && alpha2 > 0.0) {
        return Err(Error::Constraint(format!(
            "alpha1 = {alpha1} and alpha2 = {alpha2} must be positive"
        )));
    }
    if beta <= alpha1 + alpha2 {
        return Err(Error::Constraint(format!(
            "beta = {beta} must exceed alpha1 + alpha2 = {}",
            alpha1 + alpha2
        )));
    }
    if capacity <= beta {
        return Err(Error::Constraint(format!(
            "beta = {beta} must be below the capacity {capacity}"
        )));
    }
    check_nu(nu)?;
    let theta = channel.theta();
    let nf = n as f64;
    let ell1 = (nf * (h(theta) + alpha1) - ROUNDING_SLACK).ceil() as usize;
    let ell2 = (nf * alpha2 - ROUNDING_SLACK).ceil() as usize;
    let k = (nf * (capacity - beta) + ROUNDING_SLACK).floor() as i64;
    if k < 1 {
        return Err(Error::RateExhausted { k, n });
    }
    if ell1 > n || ell2 > n {
        return Err(Error::Constraint(format!(
            "hash output lengths ({ell1}, {ell2}) exceed n = {n}"
        )));
    }
    Ok(ProtocolParams {
        channel,
        n,
        alpha1,
        alpha2,
        beta,
        nu,
        ell1,
        ell2,
        k: k as usize,
        theta,
    })
}

fn check_nu(nu: f64) -> Result<()> {
    if nu >= 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::Constraint(format!("nu = {nu} must be non-negative")))
    }
}

impl ProtocolParams {
    /// Parameters with explicit lengths, for instances far below the
    /// asymptotic regime (the exact oracles run at n around 10). The rates
    /// are back-filled from the lengths and need not satisfy
    /// `beta > alpha1 + alpha2`.
    pub fn with_lengths(
        channel: ChannelSpec,
        n: usize,
        ell1: usize,
        ell2: usize,
        k: usize,
        nu: f64,
    ) -> Result<Self> {
        let capacity = channel.commitment_capacity()?;
        check_nu(nu)?;
        if n == 0 || k == 0 || k > n || ell1 > n || ell2 > n {
            return Err(Error::Constraint(format!(
                "need 1 <= k <= n and ell1, ell2 <= n; got n = {n}, ell1 = {ell1}, ell2 = {ell2}, k = {k}"
            )));
        }
        let theta = channel.theta();
        let nf = n as f64;
        Ok(ProtocolParams {
            channel,
            n,
            alpha1: ell1 as f64 / nf - h(theta),
            alpha2: ell2 as f64 / nf,
            beta: capacity - k as f64 / nf,
            nu,
            ell1,
            ell2,
            k,
            theta,
        })
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        self.nu = nu;
        Ok(self)
    }

    /// Commitment rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Acceptance window `[gamma n - nu n, delta n + nu n]` for the Hamming
    /// distance between the opened word and the received word.
    pub fn hamming_window(&self) -> (f64, f64) {
        let n = self.n as f64;
        (
            (self.channel.gamma() - self.nu) * n,
            (self.channel.delta() + self.nu) * n,
        )
    }

    /// Integer distances accepted by the window.
    pub fn window_distances(&self) -> std::ops::RangeInclusive<usize> {
        let (lo, hi) = self.hamming_window();
        let lo = (lo - ROUNDING_SLACK).ceil().max(0.0) as usize;
        let hi = ((hi + ROUNDING_SLACK).floor().max(-1.0) as i64).min(self.n as i64);
        if hi < lo as i64 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        lo..=hi as usize
    }
}

/// Wire form of [`ProtocolParams`], field names as they appear in transcripts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ParamsRecord {
    pub gamma: f64,
    pub delta: f64,
    pub n: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub nu: f64,
    pub ell1: usize,
    pub ell2: usize,
    pub k: usize,
}

impl From<&ProtocolParams> for ParamsRecord {
    fn from(p: &ProtocolParams) -> Self {
        ParamsRecord {
            gamma: p.channel.gamma(),
            delta: p.channel.delta(),
            n: p.n,
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            beta: p.beta,
            nu: p.nu,
            ell1: p.ell1,
            ell2: p.ell2,
            k: p.k,
        }
    }
}

impl TryFrom<ParamsRecord> for ProtocolParams {
    type Error = Error;

    fn try_from(r: ParamsRecord) -> Result<Self> {
        let channel = ChannelSpec::new(r.gamma, r.delta)?;
        let mut p = ProtocolParams::with_lengths(channel, r.n, r.ell1, r.ell2, r.k, r.nu)?;
        p.alpha1 = r.alpha1;
        p.alpha2 = r.alpha2;
        p.beta = r.beta;
        Ok(p)
    }
}

impl Serialize for ProtocolParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProtocolParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ParamsRecord::deserialize(d)?;
        ProtocolParams::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(g: f64, d: f64) -> ChannelSpec {
        ChannelSpec::new(g, d).unwrap()
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // mpmath at 40 digits: 0.33729006661701387875...
        assert!((binary_entropy(0.0625).unwrap() - 0.337290).abs() < 1e-6);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn construction_rejects_bad_channels() {
        for (g, d) in [(0.0, 0.1), (0.2, 0.1), (0.2, 0.2), (0.1, 0.5), (-0.1, 0.2)] {
            assert!(ChannelSpec::new(g, d).is_err(), "({g}, {d})");
        }
    }

    #[test]
    fn theta_values() {
        assert!((spec(0.1, 0.15).theta() - 0.0625).abs() < 1e-15);
        assert!((spec(0.1, 0.3).theta() - 0.25).abs() < 1e-15);
        assert!(spec(0.25, 0.25 + 1e-12).theta() < 1e-11);
    }

    #[test]
    fn capacity_values() {
        let c = spec(0.1, 0.15).commitment_capacity().unwrap();
        assert!((c - 0.13171).abs() < 1e-4);
        let c = spec(0.2, 0.25).commitment_capacity().unwrap();
        assert!((c - (h(0.2) - h(1.0 / 12.0))).abs() < 1e-6);
        // fair limit recovers h(gamma)
        let c = spec(0.2, 0.2 + 1e-9).commitment_capacity().unwrap();
        assert!((c - h(0.2)).abs() < 1e-6);
        assert!(matches!(
            spec(0.1, 0.18).commitment_capacity(),
            Err(Error::TrivialChannel { .. })
        ));
    }

    #[test]
    fn triviality_boundary() {
        assert!(spec(0.1, 0.18).is_trivial());
        assert!(!spec(0.1, 0.15).is_trivial());
        assert!(spec(0.25, 0.40).is_trivial());
    }

    #[test]
    fn derive_params_example() {
        let p = derive_params(spec(0.1, 0.15), 1024, 0.05, 0.05, 0.12, 0.02).unwrap();
        assert_eq!((p.ell1, p.ell2, p.k), (397, 52, 11));
        assert!(p.ell1 as f64 >= 1024.0 * (h(p.theta) + 0.05));
        assert!(p.ell2 as f64 >= 1024.0 * 0.05);
        assert!(p.k as f64 <= 1024.0 * (spec(0.1, 0.15).commitment_capacity().unwrap() - 0.12));
    }

    #[test]
    fn derive_params_errors() {
        assert!(matches!(
            derive_params(spec(0.1, 0.15), 1024, 0.05, 0.05, 0.1, 0.02),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            derive_params(spec(0.1, 0.18), 1024, 0.05, 0.05, 0.12, 0.02),
            Err(Error::TrivialChannel { .. })
        ));
        assert!(matches!(
            derive_params(spec(0.1, 0.15), 64, 0.05, 0.05, 0.12, 0.02),
            Err(Error::RateExhausted { .. })
        ));
        assert!(derive_params(spec(0.1, 0.15), 1024, 0.05, 0.05, 0.12, -0.01).is_err());
    }

    #[test]
    fn exact_integer_products_are_not_rounded_past() {
        // 1000 * 0.05 is 50.000000000000007 in binary floating point
        let p = derive_params(spec(0.1, 0.15), 1000, 0.05, 0.05, 0.12, 0.02).unwrap();
        assert_eq!(p.ell2, 50);
    }

    #[test]
    fn reference_config_headroom() {
        let s = spec(0.1, 0.15);
        let p = derive_params(s, 4096, 0.05, 0.05, 0.12, 0.02).unwrap();
        assert_eq!((p.ell1, p.ell2, p.k), (1587, 205, 47));
        let eta = 0.01;
        assert!(((p.ell1 + p.ell2) as f64) < 4096.0 * (h(0.1) - eta));
        assert!(p.rate() <= s.commitment_capacity().unwrap());
    }

    #[test]
    fn window_distances_match_real_bounds() {
        let p = ProtocolParams::with_lengths(spec(0.1, 0.15), 1000, 0, 0, 1, 0.02).unwrap();
        assert_eq!(p.window_distances(), 80..=170);
        let p = p.with_nu(0.2).unwrap();
        assert_eq!(p.window_distances(), 0..=350);
    }

    #[test]
    fn params_json_round_trip() {
        let p = derive_params(spec(0.1, 0.15), 1024, 0.05, 0.05, 0.12, 0.02).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: ProtocolParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn cascade_identity(g in 0.001f64..0.49, frac in 0.001f64..0.999) {
            let d = g + frac * (0.5 - g);
            prop_assume!(d < 0.5 && d > g);
            let s = spec(g, d);
            let t = s.theta();
            prop_assert!((g * (1.0 - t) + (1.0 - g) * t - d).abs() < 1e-12);
            prop_assert!(t > 0.0 && t < 0.5);
        }

        #[test]
        fn entropy_symmetric(p in 0.0f64..=1.0) {
            prop_assert!((h(p) - h(1.0 - p)).abs() < 1e-12);
        }

        #[test]
        fn capacity_decreases_in_delta(g in 0.01f64..0.4, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let top = (2.0 * g * (1.0 - g)).min(0.5);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let d1 = g + (top - g) * (0.001 + 0.998 * lo);
            let d2 = g + (top - g) * (0.001 + 0.998 * hi);
            prop_assume!(d1 < d2 && d2 < top - 1e-9);
            let c1 = spec(g, d1).commitment_capacity().unwrap();
            let c2 = spec(g, d2).commitment_capacity().unwrap();
            prop_assert!(c1 >= c2 - CAPACITY_TOLERANCE);
            prop_assert!(c1 <= h(g) + CAPACITY_TOLERANCE);
        }
    }
}
