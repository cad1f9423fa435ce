//! Exhaustive censuses over the whole seed space of a small hash family.
//!
//! These evaluate `sum_i c_i x^i` term by term from a product table rather
//! than through [`HashDescriptor::eval`](super::HashDescriptor::eval), so they
//! double as an independent check of the Horner evaluation.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{FieldSpec, HashFamily, Multiplier};

/// Largest number of (seed, input) evaluations a census will attempt.
const MAX_WORK: u128 = 1 << 33;
const MAX_DOMAIN_BITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairwiseCensus {
    pub family: HashFamily,
    pub n: usize,
    pub ell: usize,
    pub independence: usize,
    pub seeds: u128,
    pub pairs_per_seed: u128,
    pub collisions: u128,
}

impl PairwiseCensus {
    /// Probability over the seed that two fixed distinct inputs collide,
    /// averaged over all pairs.
    pub fn rate(&self) -> f64 {
        self.collisions as f64 / (self.seeds as f64 * self.pairs_per_seed as f64)
    }

    /// Whether the collision probability is exactly `2^-ell`.
    pub fn is_exactly_universal(&self) -> bool {
        self.collisions << self.ell == self.seeds * self.pairs_per_seed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCensus {
    pub points: Vec<u64>,
    pub ell: usize,
    pub seeds: u128,
    /// Indexed by the outputs packed `ell` bits per point, first point lowest.
    pub counts: Vec<u64>,
}

impl TupleCensus {
    /// Every joint output value occurs for the same number of seeds.
    pub fn is_uniform(&self) -> bool {
        let cells = self.counts.len() as u128;
        self.seeds.is_multiple_of(cells)
            && self.counts.iter().all(|&c| c as u128 == self.seeds / cells)
    }

    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

fn independence_for(family: HashFamily, t: usize) -> Result<usize> {
    match family {
        HashFamily::TwoUniversalLinear if t != 2 => Err(Error::HashParams(format!(
            "two-universal-linear has independence 2, not {t}"
        ))),
        _ if t < 2 => Err(Error::HashParams(format!(
            "independence t = {t} must be at least 2"
        ))),
        _ => Ok(t),
    }
}

struct SmallField {
    n: usize,
    table: Vec<u16>,
}

impl SmallField {
    fn new(n: usize) -> Result<Self> {
        if n > MAX_DOMAIN_BITS {
            return Err(Error::InstanceTooLarge(format!(
                "census domain of {n} bits exceeds {MAX_DOMAIN_BITS}"
            )));
        }
        let spec = FieldSpec::new(n)?;
        let mut m = Multiplier::new(spec);
        let size = 1usize << n;
        let mut table = vec![0u16; size * size];
        let mut out = [0u64];
        for a in 0..size {
            for b in a..size {
                m.mul_into(&[a as u64], &[b as u64], &mut out);
                table[a * size + b] = out[0] as u16;
                table[b * size + a] = out[0] as u16;
            }
        }
        Ok(SmallField { n, table })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        self.table[((a as usize) << self.n) | b as usize] as u64
    }

    fn pow(&self, x: u64, e: usize) -> u64 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }
}

/// Exact pairwise collision count over every seed and every unordered pair
/// of distinct inputs.
pub fn pairwise_collision_census(
    family: HashFamily,
    t: usize,
    n: usize,
    ell: usize,
) -> Result<PairwiseCensus> {
    let t = independence_for(family, t)?;
    if ell > n {
        return Err(Error::HashParams(format!(
            "output length {ell} exceeds {n}"
        )));
    }
    let seed_bits = n * t;
    let work = 1u128
        .checked_shl((seed_bits + n) as u32)
        .unwrap_or(u128::MAX);
    if n > MAX_DOMAIN_BITS || work > MAX_WORK {
        return Err(Error::InstanceTooLarge(format!(
            "pairwise census over 2^{seed_bits} seeds x 2^{n} inputs"
        )));
    }
    let field = SmallField::new(n)?;
    let size = 1u64 << n;
    let mask = (1u64 << ell) - 1;
    let powers: Vec<Vec<u64>> = (0..size)
        .map(|x| (0..t).map(|i| field.pow(x, i)).collect())
        .collect();
    let mut collisions = 0u128;
    let mut buckets = vec![0u64; 1 << ell];
    let seeds = 1u64 << seed_bits;
    for seed in 0..seeds {
        buckets.fill(0);
        for pw in &powers {
            let mut v = 0;
            for (i, &p) in pw.iter().enumerate() {
                let c = (seed >> (n * i)) & (size - 1);
                v ^= field.mul(c, p);
            }
            buckets[(v & mask) as usize] += 1;
        }
        collisions += buckets
            .iter()
            .map(|&b| (b as u128) * (b as u128).saturating_sub(1) / 2)
            .sum::<u128>();
    }
    Ok(PairwiseCensus {
        family,
        n,
        ell,
        independence: t,
        seeds: seeds as u128,
        pairs_per_seed: (size as u128) * (size as u128 - 1) / 2,
        collisions,
    })
}

/// Exact joint distribution of `(h(x_1), ..., h(x_q))` over all seeds.
///
/// Any `q` is accepted; uniformity is only implied for `q <= t`.
pub fn tuple_census(
    family: HashFamily,
    t: usize,
    n: usize,
    ell: usize,
    points: &[u64],
) -> Result<TupleCensus> {
    let t = independence_for(family, t)?;
    if ell > n {
        return Err(Error::HashParams(format!(
            "output length {ell} exceeds {n}"
        )));
    }
    let size = 1u64 << n.min(63);
    for (i, &p) in points.iter().enumerate() {
        if p >= size {
            return Err(Error::HashParams(format!(
                "point {p} outside the {n}-bit domain"
            )));
        }
        if points[..i].contains(&p) {
            return Err(Error::HashParams(format!(
                "point {p} repeated; points must be distinct"
            )));
        }
    }
    let out_bits = ell * points.len();
    let seed_bits = n * t;
    if n > MAX_DOMAIN_BITS || out_bits > 24 || seed_bits > 33 {
        return Err(Error::InstanceTooLarge(format!(
            "tuple census over 2^{seed_bits} seeds with {out_bits} output bits"
        )));
    }
    let field = SmallField::new(n)?;
    let mask = (1u64 << ell) - 1;
    // contrib[i][c]: packed outputs contributed by coefficient c_i = c
    let contrib: Vec<Vec<u32>> = (0..t)
        .map(|i| {
            let powers: Vec<u64> = points.iter().map(|&x| field.pow(x, i)).collect();
            (0..size)
                .map(|c| {
                    powers.iter().enumerate().fold(0u32, |acc, (j, &p)| {
                        acc | (((field.mul(c, p) & mask) as u32) << (j * ell))
                    })
                })
                .collect()
        })
        .collect();
    let mut counts = vec![0u64; 1 << out_bits];
    fn walk(level: usize, acc: u32, contrib: &[Vec<u32>], counts: &mut [u64]) {
        if level == 0 {
            for &v in &contrib[0] {
                counts[(acc ^ v) as usize] += 1;
            }
        } else {
            for &v in &contrib[level] {
                walk(level - 1, acc ^ v, contrib, counts);
            }
        }
    }
    walk(t - 1, 0, &contrib, &mut counts);
    Ok(TupleCensus {
        points: points.to_vec(),
        ell,
        seeds: 1u128 << seed_bits,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitWord;
    use crate::hashing::HashDescriptor;

    #[test]
    fn census_table_agrees_with_horner() {
        let field = SmallField::new(8).unwrap();
        let coeffs = [0x53u64, 0xca, 0x01, 0x9e];
        let words: Vec<BitWord> = coeffs.iter().map(|&c| BitWord::from_u64(c, 8)).collect();
        let d = HashDescriptor::from_coefficients(HashFamily::PolyTwise, 8, 8, &words).unwrap();
        for x in 0..256u64 {
            let direct = coeffs
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc ^ field.mul(c, field.pow(x, i)));
            assert_eq!(d.eval(&BitWord::from_u64(x, 8)).unwrap().as_u64(), direct);
        }
    }

    #[test]
    fn two_universal_small() {
        let c = pairwise_collision_census(HashFamily::TwoUniversalLinear, 2, 4, 2).unwrap();
        assert!(c.is_exactly_universal(), "{c:?}");
    }

    #[test]
    fn rejects_oversized_and_degenerate() {
        assert!(matches!(
            pairwise_collision_census(HashFamily::PolyTwise, 4, 12, 4),
            Err(Error::InstanceTooLarge(_))
        ));
        assert!(matches!(
            tuple_census(HashFamily::PolyTwise, 2, 8, 4, &[3, 3]),
            Err(Error::HashParams(_))
        ));
        assert!(tuple_census(HashFamily::TwoUniversalLinear, 3, 4, 2, &[1, 2]).is_err());
    }

    #[test]
    fn beyond_t_points_is_not_uniform() {
        // a x + b at three points: the third output is pinned by the first two
        let c = tuple_census(HashFamily::PolyTwise, 2, 6, 6, &[1, 2, 3]).unwrap();
        assert!(!c.is_uniform());
        assert_eq!(c.support(), 1 << 12);
    }
}
