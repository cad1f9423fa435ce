//! Conditional entropies over a table with one row per conditioning value.
//!
//! Exact smooth conditional entropies need a linear program over the joint
//! `eps`-ball. Instead each of the four quantities gets a certified bound:
//!
//! * smooth min, lower: an explicit smoothing that caps every row at a common
//!   conditional level, or empties the row into the others when cheaper;
//! * smooth min, upper: any smoothing keeps `sum_y max_x P(x, y)` within
//!   `eps` of the original, and a row heavier than `eps` survives with its
//!   largest atom reduced by at most `eps`;
//! * smooth max, upper: an explicit smoothing that prunes every row to a
//!   common support size or empties it;
//! * smooth max, lower: joint support over the number of rows, and the
//!   greedy support of any row heavier than `eps`.

use crate::error::{Error, Result};

use super::smooth::{budget, check_eps, surviving_atoms};
use super::JointDistribution;

/// Slack for the chain-rule comparisons.
const CHAIN_SLACK: f64 = 1e-9;
/// Rows may sum to 1 within this before being renormalized.
const ROW_TOLERANCE: f64 = 1e-9;

/// `rows[y][x] = P(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    rows: Vec<Vec<f64>>,
    width: usize,
}

/// Certified bounds on the smooth conditional entropies at one `eps`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SmoothBounds {
    pub min_lower: f64,
    pub min_upper: f64,
    pub max_lower: f64,
    pub max_upper: f64,
}

impl Conditional {
    pub fn from_rows(mut rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Distribution(
                "rows must be non-empty and of equal length".into(),
            ));
        }
        let mut total = 0.0;
        for row in &rows {
            total += super::check_masses(row)?;
        }
        if (total - 1.0).abs() > ROW_TOLERANCE {
            return Err(Error::Distribution(format!("table sums to {total}, not 1")));
        }
        for row in &mut rows {
            for m in row.iter_mut() {
                *m /= total;
            }
        }
        Ok(Conditional { rows, width })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Size of the target alphabet.
    pub fn width(&self) -> usize {
        self.width
    }

    fn row_masses(&self) -> impl Iterator<Item = (f64, f64, &Vec<f64>)> + '_ {
        self.rows.iter().map(|r| {
            let mass: f64 = r.iter().sum();
            let max = r.iter().cloned().fold(0.0, f64::max);
            (mass, max, r)
        })
    }

    /// `min_y H_inf(X | Y = y)` over rows of positive mass.
    pub fn min_entropy(&self) -> f64 {
        self.row_masses()
            .filter(|(m, _, _)| *m > 0.0)
            .map(|(m, max, _)| -(max / m).log2())
            .fold(f64::INFINITY, f64::min)
    }

    /// `-log sum_y max_x P(x, y)`, the guessing form.
    pub fn average_min_entropy(&self) -> f64 {
        -self.row_masses().map(|(_, max, _)| max).sum::<f64>().log2()
    }

    /// `max_y H_0(X | Y = y)`.
    pub fn max_entropy(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|&&m| m > 0.0).count())
            .max()
            .map_or(0.0, |c| (c as f64).log2())
    }

    /// Mass that must move to bring every row's conditional maximum down to
    /// `level` (or to empty the row).
    fn capping_cost(&self, level: f64) -> f64 {
        self.row_masses()
            .map(|(mass, _, row)| {
                let cap = level * mass;
                let cost: f64 = row.iter().map(|&m| (m - cap).max(0.0)).sum();
                cost.min(mass)
            })
            .sum()
    }

    /// Mass that must move to bring every row's support down to `size`.
    fn pruning_cost(&self, size: usize) -> f64 {
        self.rows
            .iter()
            .map(|row| {
                let mut pos: Vec<f64> = row.iter().copied().filter(|&m| m > 0.0).collect();
                let mass: f64 = pos.iter().sum();
                if pos.len() <= size {
                    return 0.0;
                }
                pos.sort_by(|a, b| a.total_cmp(b));
                let cost: f64 = pos[..pos.len() - size].iter().sum();
                cost.min(mass)
            })
            .sum()
    }

    pub fn smooth(&self, eps: f64) -> Result<SmoothBounds> {
        check_eps(eps)?;
        let log_width = (self.width as f64).log2();

        // smooth min, lower: bisect on the common level
        let exact_min = self.min_entropy();
        let (mut lo, mut hi) = (exact_min, log_width);
        if self.capping_cost(2f64.powf(-hi)) <= budget(eps) {
            lo = hi;
        } else {
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if self.capping_cost(2f64.powf(-mid)) <= budget(eps) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let min_lower = lo;

        // smooth min, upper
        let guess: f64 = self.row_masses().map(|(_, max, _)| max).sum();
        let mut min_upper = if guess - eps > 0.0 {
            -(guess - eps).log2()
        } else {
            log_width
        };
        let floor = 1.0 / self.width as f64;
        for (mass, max, _) in self.row_masses() {
            if mass > eps && max > eps {
                min_upper = min_upper.min(-((max - eps) / mass).max(floor).log2());
            }
        }
        let min_upper = min_upper.min(log_width).max(min_lower);

        // smooth max, upper: smallest common support within budget
        let largest = self
            .rows
            .iter()
            .map(|r| r.iter().filter(|&&m| m > 0.0).count())
            .max()
            .unwrap_or(1);
        let size = (1..=largest)
            .find(|&s| self.pruning_cost(s) <= budget(eps))
            .unwrap_or(largest);
        let max_upper = (size as f64).log2();

        // smooth max, lower
        let cells: Vec<f64> = self.rows.iter().flatten().copied().collect();
        let joint = (surviving_atoms(&cells, eps) as f64).log2() - (self.rows.len() as f64).log2();
        let mut max_lower = joint.max(0.0);
        for (mass, _, row) in self.row_masses() {
            if mass > eps {
                max_lower = max_lower.max((surviving_atoms(row, eps) as f64).log2());
            }
        }
        let max_lower = max_lower.min(max_upper);

        Ok(SmoothBounds {
            min_lower,
            min_upper,
            max_lower,
            max_upper,
        })
    }
}

fn first_given_rest(j: &JointDistribution) -> Result<Conditional> {
    let rest: Vec<usize> = (1..j.names().len()).collect();
    j.conditional(&[0], &rest)
}

/// `H_inf(X | rest) = min_y H_inf(X | Y = y)`, `X` the first axis.
pub fn conditional_min_entropy(j: &JointDistribution) -> Result<f64> {
    Ok(first_given_rest(j)?.min_entropy())
}

/// `H_0(X | rest) = max_y H_0(X | Y = y)`.
pub fn conditional_max_entropy(j: &JointDistribution) -> Result<f64> {
    Ok(first_given_rest(j)?.max_entropy())
}

/// (lower bound on smooth min, upper bound on smooth max) of the first axis
/// given the others.
pub fn smooth_conditional_entropies(j: &JointDistribution, eps: f64) -> Result<(f64, f64)> {
    let b = first_given_rest(j)?.smooth(eps)?;
    Ok((b.min_lower, b.max_upper))
}

/// Which side of each bound pair the chain-rule check reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directions {
    /// The larger side of every inequality is bounded from above and the
    /// smaller side from below; true inequalities always pass.
    Valid,
    /// The opposite reading, as a self-test that the check can fail.
    Swapped,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    /// Bound on the side claimed to be larger.
    pub larger: f64,
    /// Bound on the side claimed to be smaller.
    pub smaller: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainRuleReport {
    pub checks: Vec<InequalityCheck>,
}

impl ChainRuleReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub fn check_chain_rules(
    j: &JointDistribution,
    eps: f64,
    eps_prime: f64,
    eps1: f64,
    eps2: f64,
) -> Result<ChainRuleReport> {
    check_chain_rules_with(j, eps, eps_prime, eps1, eps2, Directions::Valid)
}

/// Both chains for a joint over `X, Y, Z`:
///
/// ```text
/// Hmin^{e+e'}(XY|Z) - Hmin^{e'}(Y|Z) >= Hmin^e(X|YZ)
///     >= Hmin^{e1}(XY|Z) - H0^{e2}(Y|Z) - log(1/(e - e1 - e2))
/// H0^{e+e'}(XY|Z) - H0^{e'}(Y|Z) <= H0^e(X|YZ)
///     <= H0^{e1}(XY|Z) - Hmin^{e2}(Y|Z) + log(1/(e - e1 - e2))
/// ```
pub fn check_chain_rules_with(
    j: &JointDistribution,
    eps: f64,
    eps_prime: f64,
    eps1: f64,
    eps2: f64,
    directions: Directions,
) -> Result<ChainRuleReport> {
    if j.names().len() != 3 {
        return Err(Error::Distribution(
            "chain rules need a joint over X, Y, Z".into(),
        ));
    }
    for e in [eps, eps_prime, eps1, eps2, eps + eps_prime] {
        check_eps(e)?;
    }
    if eps - eps1 - eps2 <= 0.0 {
        return Err(Error::Constraint(format!(
            "need eps > eps1 + eps2, got {eps} <= {eps1} + {eps2}"
        )));
    }
    let xy_z = j.conditional(&[0, 1], &[2])?;
    let y_z = j.conditional(&[1], &[2])?;
    let x_yz = j.conditional(&[0], &[1, 2])?;
    let log_term = -(eps - eps1 - eps2).log2();

    let xy_z_sum = xy_z.smooth(eps + eps_prime)?;
    let y_z_prime = y_z.smooth(eps_prime)?;
    let x_yz_e = x_yz.smooth(eps)?;
    let xy_z_1 = xy_z.smooth(eps1)?;
    let y_z_2 = y_z.smooth(eps2)?;

    let valid = directions == Directions::Valid;
    // (upper, lower) of each side, swapped on request
    let pick = |upper: f64, lower: f64| {
        if valid {
            (upper, lower)
        } else {
            (lower, upper)
        }
    };

    let mut checks = Vec::with_capacity(4);
    let mut push = |name, larger: f64, smaller: f64| {
        checks.push(InequalityCheck {
            name,
            larger,
            smaller,
            holds: larger + CHAIN_SLACK >= smaller,
        })
    };

    // larger side read from above, smaller side from below
    let a1 = pick(
        xy_z_sum.min_upper - y_z_prime.min_lower,
        xy_z_sum.min_lower - y_z_prime.min_upper,
    );
    let b1 = pick(x_yz_e.min_upper, x_yz_e.min_lower);
    push("min-chain-left", a1.0, b1.1);

    let c2 = pick(
        xy_z_1.min_upper - y_z_2.max_lower - log_term,
        xy_z_1.min_lower - y_z_2.max_upper - log_term,
    );
    push("min-chain-right", b1.0, c2.1);

    let a3 = pick(
        xy_z_sum.max_upper - y_z_prime.max_lower,
        xy_z_sum.max_lower - y_z_prime.max_upper,
    );
    let b3 = pick(x_yz_e.max_upper, x_yz_e.max_lower);
    push("max-chain-left", b3.0, a3.1);

    let c4 = pick(
        xy_z_1.max_upper - y_z_2.min_lower + log_term,
        xy_z_1.max_lower - y_z_2.min_upper + log_term,
    );
    push("max-chain-right", c4.0, b3.1);

    Ok(ChainRuleReport { checks })
}
