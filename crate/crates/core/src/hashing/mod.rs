//! Hash families over bit strings, built on GF(2^n) polynomial evaluation.
//!
//! A member of either family is a polynomial `p(z) = sum_{i<t} c_i z^i` with
//! uniformly random coefficients in GF(2^n). The input word is read as a field
//! element, `p` is evaluated there, and the `ell` low-order bits of the result
//! are the output.
//!
//! * [`HashFamily::PolyTwise`]: `t` coefficients, so outputs on any `t`
//!   distinct inputs are jointly uniform. The protocol's first challenge uses
//!   `t = 4n`.
//! * [`HashFamily::TwoUniversalLinear`]: the `t = 2` case `a x + b`, used for
//!   the second challenge and for the committer's extractor.

pub mod census;
pub mod field;
mod irreducible;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bits::BitWord;
use crate::error::{Error, Result};

use field::KaratsubaPlan;
pub use field::{FieldSpec, Multiplier};

/// Coefficients per block in the blocked evaluation.
const EVAL_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HashFamily {
    PolyTwise,
    TwoUniversalLinear,
}

impl HashFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            HashFamily::PolyTwise => "poly-twise",
            HashFamily::TwoUniversalLinear => "two-universal-linear",
        }
    }
}

impl fmt::Display for HashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl serde::Serialize for HashFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl FromStr for HashFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly-twise" => Ok(HashFamily::PolyTwise),
            "two-universal-linear" => Ok(HashFamily::TwoUniversalLinear),
            other => Err(Error::Parse(format!("unknown hash family {other:?}"))),
        }
    }
}

/// One member of a hash family; the coefficients are the seed.
#[derive(Clone, PartialEq, Eq)]
pub struct HashDescriptor {
    family: HashFamily,
    field: FieldSpec,
    output_bits: usize,
    independence: usize,
    /// `independence` elements of `field.limbs()` limbs each, `c_0` first.
    coefficients: Vec<u64>,
}

fn check_shape(n: usize, ell: usize, t: usize) -> Result<FieldSpec> {
    if ell > n {
        return Err(Error::HashParams(format!(
            "output length {ell} exceeds input length {n}"
        )));
    }
    if t < 2 {
        return Err(Error::HashParams(format!(
            "independence t = {t} must be at least 2"
        )));
    }
    FieldSpec::new(n)
}

/// Draws a member of the `t`-wise independent family `{0,1}^n -> {0,1}^ell`.
pub fn sample_twise_hash<R: Rng + ?Sized>(
    t: usize,
    n: usize,
    ell: usize,
    rng: &mut R,
) -> Result<HashDescriptor> {
    sample(HashFamily::PolyTwise, t, n, ell, rng)
}

/// Draws `x -> trunc_ell(a x + b)` with `a`, `b` uniform.
pub fn sample_two_universal<R: Rng + ?Sized>(
    n: usize,
    ell: usize,
    rng: &mut R,
) -> Result<HashDescriptor> {
    sample(HashFamily::TwoUniversalLinear, 2, n, ell, rng)
}

fn sample<R: Rng + ?Sized>(
    family: HashFamily,
    t: usize,
    n: usize,
    ell: usize,
    rng: &mut R,
) -> Result<HashDescriptor> {
    let field = check_shape(n, ell, t)?;
    let limbs = field.limbs();
    let mut coefficients = Vec::with_capacity(t * limbs);
    for _ in 0..t {
        coefficients.extend_from_slice(BitWord::random(n, rng).limbs());
    }
    Ok(HashDescriptor {
        family,
        field,
        output_bits: ell,
        independence: t,
        coefficients,
    })
}

impl HashDescriptor {
    pub fn from_coefficients(
        family: HashFamily,
        n: usize,
        ell: usize,
        coefficients: &[BitWord],
    ) -> Result<Self> {
        let t = coefficients.len();
        if family == HashFamily::TwoUniversalLinear && t != 2 {
            return Err(Error::HashParams(format!(
                "two-universal-linear takes 2 coefficients, got {t}"
            )));
        }
        let field = check_shape(n, ell, t)?;
        let mut flat = Vec::with_capacity(t * field.limbs());
        for c in coefficients {
            c.check_len(n)?;
            flat.extend_from_slice(c.limbs());
        }
        Ok(HashDescriptor {
            family,
            field,
            output_bits: ell,
            independence: t,
            coefficients: flat,
        })
    }

    pub fn family(&self) -> HashFamily {
        self.family
    }

    pub fn input_bits(&self) -> usize {
        self.field.width()
    }

    pub fn output_bits(&self) -> usize {
        self.output_bits
    }

    pub fn independence(&self) -> usize {
        self.independence
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coefficient(&self, i: usize) -> BitWord {
        let l = self.field.limbs();
        BitWord::from_limbs(
            self.coefficients[i * l..(i + 1) * l].to_vec(),
            self.input_bits(),
        )
    }

    pub fn coefficients(&self) -> impl Iterator<Item = BitWord> + '_ {
        (0..self.independence).map(|i| self.coefficient(i))
    }

    /// `trunc_ell(p(x))`.
    pub fn eval(&self, x: &BitWord) -> Result<BitWord> {
        x.check_len(self.input_bits())?;
        let mut m = Multiplier::new(self.field);
        let value = if self.independence > 2 * EVAL_BLOCK {
            self.eval_blocked(&mut m, x.limbs())
        } else {
            self.eval_horner(&mut m, x.limbs())
        };
        Ok(BitWord::from_limbs(value, self.input_bits()).truncated(self.output_bits))
    }

    fn coeff(&self, i: usize) -> &[u64] {
        let l = self.field.limbs();
        &self.coefficients[i * l..(i + 1) * l]
    }

    fn eval_horner(&self, m: &mut Multiplier, x: &[u64]) -> Vec<u64> {
        let l = self.field.limbs();
        let mut acc = self.coeff(self.independence - 1).to_vec();
        let mut next = vec![0u64; l];
        for i in (0..self.independence - 1).rev() {
            m.mul_into(&acc, x, &mut next);
            for (a, c) in next.iter_mut().zip(self.coeff(i)) {
                *a ^= c;
            }
            std::mem::swap(&mut acc, &mut next);
        }
        acc
    }

    /// Horner's rule in `x^B` over blocks of `B` coefficients. Inside a block
    /// the products `c_i x^r` are summed as Karatsuba leaf products, so there
    /// is one recombination and one reduction per block.
    fn eval_blocked(&self, m: &mut Multiplier, x: &[u64]) -> Vec<u64> {
        let l = self.field.limbs();
        let plan = KaratsubaPlan::new(l);
        let (eo, ep) = (plan.operand_len(), plan.product_len());
        let mut scratch = vec![0u64; plan.scratch_len()];
        let mut power = vec![0u64; l];
        power[0] = 1;
        let mut next = vec![0u64; l];
        let mut expanded_powers = vec![0u64; EVAL_BLOCK * eo];
        for r in 0..EVAL_BLOCK {
            plan.expand(
                &power,
                &mut expanded_powers[r * eo..(r + 1) * eo],
                &mut scratch,
            );
            m.mul_into(&power, x, &mut next);
            std::mem::swap(&mut power, &mut next);
        }
        let stride = power;

        let mut acc = vec![0u64; l];
        let mut leaves = vec![0u64; ep];
        let mut expanded = vec![0u64; eo];
        let mut wide = vec![0u64; 2 * l];
        let blocks = self.independence.div_ceil(EVAL_BLOCK);
        for j in (0..blocks).rev() {
            let start = j * EVAL_BLOCK;
            let end = (start + EVAL_BLOCK).min(self.independence);
            leaves.fill(0);
            for i in start..end {
                let r = i - start;
                plan.expand(self.coeff(i), &mut expanded, &mut scratch);
                plan.accumulate(
                    &expanded,
                    &expanded_powers[r * eo..(r + 1) * eo],
                    &mut leaves,
                );
            }
            plan.combine(&leaves, &mut wide, &mut scratch);
            m.mul_into(&acc, &stride, &mut next);
            m.reduce_into(&mut wide, &mut acc);
            for (a, v) in acc.iter_mut().zip(&next) {
                *a ^= v;
            }
        }
        acc
    }

    /// Serialized form: `tag:n:ell:t:` followed by the coefficients `c_0`
    /// first, each as `ceil(n / 4)` hex digits of its bit-word hex form.
    pub fn to_hex(&self) -> String {
        let mut s = format!(
            "{}:{}:{}:{}:",
            self.family,
            self.input_bits(),
            self.output_bits,
            self.independence
        );
        s.reserve(self.independence * self.input_bits().div_ceil(4));
        for c in self.coefficients() {
            s.push_str(&c.to_hex());
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let mut parts = s.splitn(5, ':');
        let mut next = |what: &str| {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("hash descriptor is missing its {what}")))
        };
        let family: HashFamily = next("family tag")?.parse()?;
        let parse_num = |v: &str, what: &str| {
            v.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {what} {v:?}: {e}")))
        };
        let n = parse_num(next("input length")?, "input length")?;
        let ell = parse_num(next("output length")?, "output length")?;
        let t = parse_num(next("independence")?, "independence")?;
        let body = next("coefficients")?;
        let digits = n.div_ceil(4);
        if body.len() != digits * t {
            return Err(Error::Parse(format!(
                "expected {} coefficient hex digits, found {}",
                digits * t,
                body.len()
            )));
        }
        if !body.is_ascii() {
            return Err(Error::Parse("non-ASCII coefficient data".into()));
        }
        let coefficients = (0..t)
            .map(|i| BitWord::from_hex(&body[i * digits..(i + 1) * digits], n))
            .collect::<Result<Vec<_>>>()?;
        HashDescriptor::from_coefficients(family, n, ell, &coefficients)
    }
}

impl fmt::Debug for HashDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HashDescriptor")
            .field("family", &self.family)
            .field("input_bits", &self.input_bits())
            .field("output_bits", &self.output_bits)
            .field("independence", &self.independence)
            .finish_non_exhaustive()
    }
}

/// `Ext(x)` for a two-universal member; the caller XORs it onto the message.
pub fn extract(desc: &HashDescriptor, x: &BitWord) -> Result<BitWord> {
    if desc.family() != HashFamily::TwoUniversalLinear {
        return Err(Error::HashParams(format!(
            "extractor must be two-universal-linear, got {}",
            desc.family()
        )));
    }
    desc.eval(x)
}

pub fn eval_hash(desc: &HashDescriptor, x: &BitWord) -> Result<BitWord> {
    desc.eval(x)
}

/// Leftover-hash distance `1/2 sqrt(2^(ell - m))` for a source of min-entropy
/// `m` hashed to `ell` bits.
pub fn leftover_hash_bound(min_entropy: f64, ell: usize) -> f64 {
    0.5 * (ell as f64 - min_entropy).exp2().sqrt()
}
