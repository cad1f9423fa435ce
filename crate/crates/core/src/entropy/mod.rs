//! Entropies of explicit finite distributions. All logarithms are base 2.
//!
//! Smoothing stays inside the probability simplex over the listed alphabet:
//! a smoothed distribution may move mass onto labels of probability zero but
//! never onto labels that are not listed.

mod conditional;
pub mod io;
mod smooth;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use conditional::{
    check_chain_rules, check_chain_rules_with, conditional_max_entropy, conditional_min_entropy,
    smooth_conditional_entropies, ChainRuleReport, Conditional, Directions, InequalityCheck,
    SmoothBounds,
};
pub use smooth::{
    smooth_max_entropy, smooth_max_entropy_iid_bernoulli, smooth_min_entropy,
    smooth_min_entropy_iid_bernoulli,
};

/// Allowed deviation of the total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

fn check_masses(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::Distribution("empty support".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::Distribution(format!(
            "mass {p} is not a finite non-negative number"
        )));
    }
    Ok(probs.iter().sum())
}

fn check_normalized(total: f64) -> Result<()> {
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Distribution(format!(
            "masses sum to {total}, not 1 within {NORMALIZATION_TOLERANCE}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

fn check_labels(labels: &[String], count: usize) -> Result<()> {
    if labels.len() != count {
        return Err(Error::Distribution(format!(
            "{} labels for {count} probabilities",
            labels.len()
        )));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(Error::Distribution(format!("label {dup:?} repeated")));
    }
    Ok(())
}

impl Distribution {
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        check_labels(&labels, probs.len())?;
        check_normalized(check_masses(&probs)?)?;
        Ok(Distribution { labels, probs })
    }

    /// Labels `0, 1, ...`.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs)
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(labels: Vec<String>, weights: &[f64]) -> Result<Self> {
        check_labels(&labels, weights.len())?;
        let total = check_masses(weights)?;
        if total <= 0.0 {
            return Err(Error::Distribution("weights sum to zero".into()));
        }
        let probs = weights.iter().map(|w| w / total).collect();
        Ok(Distribution { labels, probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        Self::from_probs(vec![1.0 / size as f64; size])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, label: &str) -> f64 {
        self.labels
            .iter()
            .position(|l| l == label)
            .map_or(0.0, |i| self.probs[i])
    }
}

/// `H_inf = -log max_x P(x)`.
pub fn min_entropy(p: &Distribution) -> f64 {
    let max = p.probs.iter().cloned().fold(0.0, f64::max);
    -max.log2()
}

/// `H_0 = log |{x : P(x) > 0}|`.
pub fn max_entropy(p: &Distribution) -> f64 {
    (p.probs.iter().filter(|&&q| q > 0.0).count() as f64).log2()
}

pub fn shannon_entropy(p: &Distribution) -> f64 {
    -p.probs
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|q| q * q.log2())
        .sum::<f64>()
}

/// Half the L1 distance, matching atoms by label; a label missing on one
/// side has mass zero there.
pub fn statistical_distance(p: &Distribution, q: &Distribution) -> f64 {
    let mut diff: BTreeMap<&str, f64> = BTreeMap::new();
    for (l, &m) in p.labels.iter().zip(&p.probs) {
        *diff.entry(l).or_default() += m;
    }
    for (l, &m) in q.labels.iter().zip(&q.probs) {
        *diff.entry(l).or_default() -= m;
    }
    0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
}

/// A table over two or three named axes, the first axis varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    names: Vec<String>,
    labels: Vec<Vec<String>>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(names: Vec<String>, labels: Vec<Vec<String>>, probs: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&names.len()) || names.len() != labels.len() {
            return Err(Error::Distribution(format!(
                "a joint needs 2 or 3 axes with labels, got {} names and {} label lists",
                names.len(),
                labels.len()
            )));
        }
        let cells: usize = labels.iter().map(|l| l.len()).product();
        if cells != probs.len() {
            return Err(Error::Distribution(format!(
                "table has {} entries, axes need {cells}",
                probs.len()
            )));
        }
        check_normalized(check_masses(&probs)?)?;
        Ok(JointDistribution {
            names,
            labels,
            probs,
        })
    }

    /// Axes `X, Y[, Z]` labelled `0, 1, ...`, table in row-major order.
    pub fn from_table(dims: &[usize], probs: Vec<f64>) -> Result<Self> {
        let names = ["X", "Y", "Z"]
            .iter()
            .take(dims.len())
            .map(|s| s.to_string())
            .collect();
        let labels = dims
            .iter()
            .map(|&d| (0..d).map(|i| i.to_string()).collect())
            .collect();
        Self::new(names, labels, probs)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn axis_labels(&self, axis: usize) -> &[String] {
        &self.labels[axis]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn index_of(&self, flat: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut idx = vec![0; dims.len()];
        let mut rest = flat;
        for a in (0..dims.len()).rev() {
            idx[a] = rest % dims[a];
            rest /= dims[a];
        }
        idx
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        for (i, &a) in axes.iter().enumerate() {
            if a >= self.names.len() || axes[..i].contains(&a) {
                return Err(Error::Distribution(format!("invalid axis list {axes:?}")));
            }
        }
        Ok(())
    }

    fn pack(&self, idx: &[usize], axes: &[usize]) -> usize {
        axes.iter()
            .fold(0, |acc, &a| acc * self.labels[a].len() + idx[a])
    }

    /// Marginal over `axes`, labels joined with `,`.
    pub fn marginal(&self, axes: &[usize]) -> Result<Distribution> {
        self.check_axes(axes)?;
        if axes.is_empty() {
            return Err(Error::Distribution("marginal over no axes".into()));
        }
        let size: usize = axes.iter().map(|&a| self.labels[a].len()).product();
        let mut probs = vec![0.0; size];
        for (flat, &p) in self.probs.iter().enumerate() {
            probs[self.pack(&self.index_of(flat), axes)] += p;
        }
        let mut labels = vec![String::new(); size];
        for (i, label) in labels.iter_mut().enumerate() {
            let mut rest = i;
            let mut parts = Vec::with_capacity(axes.len());
            for &a in axes.iter().rev() {
                let d = self.labels[a].len();
                parts.push(self.labels[a][rest % d].as_str());
                rest /= d;
            }
            parts.reverse();
            *label = parts.join(",");
        }
        Ok(Distribution { labels, probs })
    }

    /// The table of `P(target, given)` with one row per value of `given`;
    /// remaining axes are summed out. `given` may be empty.
    pub fn conditional(&self, target: &[usize], given: &[usize]) -> Result<Conditional> {
        let all: Vec<usize> = target.iter().chain(given).copied().collect();
        self.check_axes(&all)?;
        if target.is_empty() {
            return Err(Error::Distribution(
                "conditional with no target axis".into(),
            ));
        }
        let tsize: usize = target.iter().map(|&a| self.labels[a].len()).product();
        let gsize: usize = given.iter().map(|&a| self.labels[a].len()).product();
        let mut rows = vec![vec![0.0; tsize]; gsize];
        for (flat, &p) in self.probs.iter().enumerate() {
            let idx = self.index_of(flat);
            rows[self.pack(&idx, given)][self.pack(&idx, target)] += p;
        }
        Conditional::from_rows(rows)
    }
}
