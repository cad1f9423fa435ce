//! Text formats.
//!
//! A distribution is one `label probability` pair per line. A joint is a
//! tab-separated table in long form with a header naming the axes and a
//! final `p` column (shown here with spaces):
//!
//! ```text
//! X  Y  p
//! 0  0  0.45
//! 0  1  0.05
//! 1  0  0.05
//! 1  1  0.45
//! ```
//!
//! Axis labels are ordered by first appearance and absent cells have mass
//! zero. Blank lines and lines starting with `#` are skipped in both formats.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::{Distribution, JointDistribution};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_prob(field: &str, line: usize) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {field:?} is not a number")))
}

pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    for (n, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        match (fields.next(), fields.next(), fields.next()) {
            (Some(label), Some(p), None) => {
                labels.push(label.to_string());
                probs.push(parse_prob(p, n)?);
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {n}: expected `label probability`"
                )))
            }
        }
    }
    Distribution::new(labels, probs)
}

pub fn write_distribution(d: &Distribution) -> String {
    let mut out = String::new();
    for (l, p) in d.labels().iter().zip(d.probs()) {
        let _ = writeln!(out, "{l} {p}");
    }
    out
}

pub fn parse_joint(text: &str) -> Result<JointDistribution> {
    let mut lines = content_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty joint table".into()))?;
    let head: Vec<&str> = header.split('\t').map(str::trim).collect();
    if head.len() < 3 || head.last() != Some(&"p") {
        return Err(Error::Parse(format!(
            "header must name 2 or 3 axes then `p`, got {header:?}"
        )));
    }
    let axes = head.len() - 1;
    let names: Vec<String> = head[..axes].iter().map(|s| s.to_string()).collect();
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); axes];
    let mut index: Vec<HashMap<String, usize>> = vec![HashMap::new(); axes];
    let mut entries = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != axes + 1 {
            return Err(Error::Parse(format!(
                "line {n}: expected {} fields, got {}",
                axes + 1,
                fields.len()
            )));
        }
        let mut cell = Vec::with_capacity(axes);
        for a in 0..axes {
            let next = labels[a].len();
            let i = *index[a].entry(fields[a].to_string()).or_insert_with(|| {
                labels[a].push(fields[a].to_string());
                next
            });
            cell.push(i);
        }
        entries.push((n, cell, parse_prob(fields[axes], n)?));
    }
    let dims: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    let mut probs = vec![0.0; dims.iter().product()];
    let mut seen = vec![false; probs.len()];
    for (n, cell, p) in entries {
        let flat = cell.iter().zip(&dims).fold(0, |acc, (&i, &d)| acc * d + i);
        if std::mem::replace(&mut seen[flat], true) {
            return Err(Error::Parse(format!("line {n}: cell listed twice")));
        }
        probs[flat] = p;
    }
    JointDistribution::new(names, labels, probs)
}

/// Every cell, zeros included.
pub fn write_joint(j: &JointDistribution) -> String {
    let dims = j.dims();
    let mut out = j.names().join("\t");
    out.push_str("\tp\n");
    for (flat, p) in j.probs().iter().enumerate() {
        let mut rest = flat;
        let mut idx = vec![0; dims.len()];
        for a in (0..dims.len()).rev() {
            idx[a] = rest % dims[a];
            rest /= dims[a];
        }
        for (a, &i) in idx.iter().enumerate() {
            out.push_str(&j.axis_labels(a)[i]);
            out.push('\t');
        }
        let _ = writeln!(out, "{p}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_round_trip() {
        let d = parse_distribution("# coin\nheads 0.25\n\ntails 0.75\n").unwrap();
        assert_eq!(d.labels(), &["heads", "tails"]);
        assert_eq!(parse_distribution(&write_distribution(&d)).unwrap(), d);
        assert!(parse_distribution("a 0.5 extra\n").is_err());
        assert!(parse_distribution("a half\n").is_err());
        assert!(parse_distribution("a 0.5\nb 0.4\n").is_err());
    }

    #[test]
    fn joint_round_trip() {
        let text = "X\tY\tZ\tp\n0\ta\tu\t0.5\n1\tb\tu\t0.25\n1\ta\tv\t0.25\n";
        let j = parse_joint(text).unwrap();
        assert_eq!(j.dims(), vec![2, 2, 2]);
        assert_eq!(j.probs()[0b011], 0.0);
        assert_eq!(j.probs()[0b110], 0.25);
        assert_eq!(parse_joint(&write_joint(&j)).unwrap(), j);
    }

    #[test]
    fn joint_errors() {
        assert!(parse_joint("").is_err());
        assert!(parse_joint("X\tp\n0\t1\n").is_err());
        assert!(parse_joint("X\tY\tq\n0\t0\t1\n").is_err());
        assert!(parse_joint("X\tY\tp\n0\t0\t0.5\n0\t0\t0.5\n").is_err());
        assert!(parse_joint("X\tY\tp\n0\t0\n").is_err());
    }
}
