//! Experiment configuration, seeding and report emission for the CLI.
//!
//! Every command returns a [`Report`]: the configuration it ran, one record
//! per trial or table row, and a summary. Reports contain no timing, so a
//! rerun with the same flags and seed renders byte-identical output.

mod commands;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::capacity::{derive_params, ChannelSpec, ProtocolParams};
use crate::error::{Error, Result};

pub use commands::{
    binding, capacity_table, concealing, entropy, run_session, soundness, EntropyInput,
    SessionNoise,
};

/// Explicit hash and message lengths, for instances too small to derive
/// them from rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lengths {
    pub ell1: usize,
    pub ell2: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub gamma: f64,
    pub delta: f64,
    pub n: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub nu: f64,
    pub lengths: Option<Lengths>,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// The Monte Carlo reference: `(0.1, 0.15)`, `n = 4096`.
    pub fn reference() -> Self {
        ExperimentConfig {
            gamma: 0.1,
            delta: 0.15,
            n: 4096,
            alpha1: 0.05,
            alpha2: 0.05,
            beta: 0.12,
            nu: 0.02,
            lengths: None,
            trials: 1000,
            seed: 0,
        }
    }

    /// Exact concealment instance: one message bit from ten channel uses.
    /// The channel is noisy enough that the view distance can drop below
    /// 0.05; at `(0.1, 0.15)` it is at least `0.9^10`.
    pub fn tiny_concealing() -> Self {
        ExperimentConfig {
            gamma: 0.4,
            delta: 0.45,
            n: 10,
            lengths: Some(Lengths {
                ell1: 1,
                ell2: 1,
                k: 1,
            }),
            trials: 16,
            ..Self::reference()
        }
    }

    /// Binding instance: the reference channel at `n = 12`, with 14 hash bits
    /// against the 78 words of the window.
    pub fn tiny_binding() -> Self {
        ExperimentConfig {
            n: 12,
            lengths: Some(Lengths {
                ell1: 8,
                ell2: 6,
                k: 1,
            }),
            ..Self::reference()
        }
    }

    pub fn spec(&self) -> Result<ChannelSpec> {
        ChannelSpec::new(self.gamma, self.delta)
    }

    /// Validated protocol parameters. Rates are used unless explicit lengths
    /// are set.
    pub fn params(&self) -> Result<ProtocolParams> {
        let spec = self.spec()?;
        match self.lengths {
            Some(l) => ProtocolParams::with_lengths(spec, self.n, l.ell1, l.ell2, l.k, self.nu),
            None => derive_params(spec, self.n, self.alpha1, self.alpha2, self.beta, self.nu),
        }
    }
}

/// Stream `trial` of the generator keyed by `seed`. Trials never share a
/// stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!(
                "unknown format {other:?}, expected jsonl or csv"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub records: Vec<Value>,
    pub summary: Value,
}

impl Report {
    pub(crate) fn new<C: Serialize, R: Serialize, S: Serialize>(
        command: &str,
        config: &C,
        records: &[R],
        summary: &S,
    ) -> Result<Self> {
        Ok(Report {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            records: records
                .iter()
                .map(serde_json::to_value)
                .collect::<serde_json::Result<_>>()?,
            summary: serde_json::to_value(summary)?,
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Jsonl => self.to_jsonl(),
            Format::Csv => self.to_csv(),
        }
    }

    /// A header line with the command and config, one line per record, and
    /// a summary line.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        if !self.config.is_null() {
            let head = serde_json::json!({ "command": self.command, "config": self.config });
            out.push_str(&serde_json::to_string(&head)?);
            out.push('\n');
        }
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        if !self.summary.is_null() {
            out.push_str(&serde_json::to_string(
                &serde_json::json!({ "summary": self.summary }),
            )?);
            out.push('\n');
        }
        Ok(out)
    }

    /// The records as a table; config and summary ride along as `#` lines.
    /// Nested values are written as JSON text and `null` as an empty cell.
    pub fn to_csv(&self) -> Result<String> {
        let mut columns: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        for r in &self.records {
            let Value::Object(map) = r else {
                return Err(Error::Parse("csv records must be objects".into()));
            };
            for key in map.keys() {
                if seen.insert(key.clone()) {
                    columns.push(key.clone());
                }
            }
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&columns).map_err(csv_error)?;
        for r in &self.records {
            let row = columns.iter().map(|c| match r.get(c) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            });
            writer.write_record(row).map_err(csv_error)?;
        }
        let table = writer
            .into_inner()
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = String::new();
        if !self.config.is_null() {
            out.push_str(&format!("# {} {}\n", self.command, self.config));
        }
        out.push_str(&String::from_utf8(table).map_err(|e| Error::Parse(e.to_string()))?);
        if !self.summary.is_null() {
            out.push_str(&format!("# summary {}\n", self.summary));
        }
        Ok(out)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}
