//! Smooth min- and max-entropy of a single distribution.
//!
//! Smooth min-entropy: the best distribution within distance `eps` caps
//! every atom at a level `lambda` and spreads the removed mass over atoms
//! below it, so the optimum is `lambda* = max(1 / N, lambda_eps)` with
//! `sum_x (P(x) - lambda_eps)^+ = eps` over an alphabet of `N` labels.
//!
//! Smooth max-entropy: removing atoms costs their mass, so the optimum drops
//! the smallest atoms while the removed mass stays within `eps`.

use crate::error::{Error, Result};

use super::Distribution;

/// Budget for deleting mass at smoothing `eps`, with relative slack for
/// rounding in accumulated sums.
pub(super) fn budget(eps: f64) -> f64 {
    eps * (1.0 + 1e-9)
}

pub(super) fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            name: "epsilon",
            value: eps,
            range: "[0, 1)",
        })
    }
}

/// Water level for masses sorted in decreasing order over an alphabet of
/// `alphabet` symbols (masses beyond the slice are zero).
pub(super) fn water_level(sorted_desc: &[f64], alphabet: usize, eps: f64) -> f64 {
    let floor = 1.0 / alphabet as f64;
    let mut mass = 0.0;
    for (j, &p) in sorted_desc.iter().enumerate() {
        mass += p;
        let next = sorted_desc.get(j + 1).copied().unwrap_or(0.0);
        if mass > eps {
            let level = (mass - eps) / (j + 1) as f64;
            if level >= next {
                return level.max(floor);
            }
        }
    }
    floor
}

pub fn smooth_min_entropy(p: &Distribution, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let mut sorted = p.probs().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(-water_level(&sorted, p.len(), eps).log2())
}

/// Number of atoms left after deleting the smallest ones within budget `eps`.
pub(super) fn surviving_atoms(masses: &[f64], eps: f64) -> usize {
    let mut positive: Vec<f64> = masses.iter().copied().filter(|&m| m > 0.0).collect();
    positive.sort_by(|a, b| a.total_cmp(b));
    let mut removed = 0.0;
    let mut left = positive.len();
    for &m in &positive {
        if left <= 1 || removed + m > budget(eps) {
            break;
        }
        removed += m;
        left -= 1;
    }
    left
}

pub fn smooth_max_entropy(p: &Distribution, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok((surviving_atoms(p.probs(), eps) as f64).log2())
}

/// `ln C(n, w)` for every `w`.
fn ln_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(acc);
    for i in 0..n {
        acc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        out.push(acc);
    }
    out
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Weight classes of `Bernoulli(p)^n` ordered by atom mass, largest first:
/// `(ln count, ln atom mass, class mass)`.
fn bernoulli_classes(p: f64, n: usize) -> Result<Vec<(f64, f64, f64)>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability {
            name: "p",
            value: p,
            range: "(0, 1)",
        });
    }
    let ln_c = ln_binomials(n);
    let mut classes: Vec<(f64, f64, f64)> = (0..=n)
        .map(|w| {
            let ln_atom = w as f64 * p.ln() + (n - w) as f64 * (-p).ln_1p();
            (ln_c[w], ln_atom, (ln_c[w] + ln_atom).exp())
        })
        .collect();
    classes.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(classes)
}

/// Smooth min-entropy of `n` i.i.d. `Bernoulli(p)` bits, computed over the
/// `n + 1` weight classes in the log domain (class sizes overflow `f64`).
pub fn smooth_min_entropy_iid_bernoulli(p: f64, n: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let classes = bernoulli_classes(p, n)?;
    let mut mass = 0.0;
    let mut ln_count = f64::NEG_INFINITY;
    for (j, &(lc, _, m)) in classes.iter().enumerate() {
        mass += m;
        ln_count = ln_add(ln_count, lc);
        if mass > eps {
            let ln_level = (mass - eps).ln() - ln_count;
            let next = classes.get(j + 1).map_or(f64::NEG_INFINITY, |c| c.1);
            if ln_level >= next {
                return Ok((-ln_level / std::f64::consts::LN_2).min(n as f64));
            }
        }
    }
    Ok(n as f64)
}

/// Smooth max-entropy of `n` i.i.d. `Bernoulli(p)` bits.
pub fn smooth_max_entropy_iid_bernoulli(p: f64, n: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let classes = bernoulli_classes(p, n)?;
    let mut removed = 0.0;
    // smallest atoms first
    let mut kept = f64::NEG_INFINITY;
    let mut deleting = true;
    for &(lc, la, m) in classes.iter().rev() {
        if !deleting {
            kept = ln_add(kept, lc);
            continue;
        }
        if removed + m <= budget(eps) {
            removed += m;
            continue;
        }
        deleting = false;
        // part of this class fits the remaining budget
        let ln_fit = ((budget(eps) - removed).max(0.0)).ln() - la;
        let fit = ln_fit.exp().floor();
        let frac = if fit > 0.0 {
            (fit.ln() - lc).exp()
        } else {
            0.0
        };
        kept = ln_add(kept, lc + (-frac.min(1.0)).ln_1p());
    }
    if kept == f64::NEG_INFINITY {
        // everything but one atom fits in the budget
        return Ok(0.0);
    }
    Ok((kept / std::f64::consts::LN_2).max(0.0))
}
