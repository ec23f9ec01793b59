use anyhow::{bail, ensure};
use serde::{Deserialize, Serialize};

use crate::args::Cli;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub wall_seconds: f64,
    pub threads: usize,
    /// Tracer steps, where the command counts them.
    pub steps: Option<u64>,
}

/// One JSON object per run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub artifact_version: String,
    pub command: String,
    pub config: Cli,
    pub status: Status,
    pub error: Option<String>,
    pub payload: serde_json::Value,
    pub metrics: Metrics,
}

impl ResultRecord {
    pub fn new(
        config: Cli,
        outcome: Result<(serde_json::Value, Option<u64>), String>,
        metrics: Metrics,
    ) -> Self {
        let (status, error, payload, steps) = match outcome {
            Ok((payload, steps)) => (Status::Ok, None, payload, steps),
            Err(e) => (Status::Error, Some(e), serde_json::Value::Null, None),
        };
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.name().to_string(),
            config,
            status,
            error,
            payload,
            metrics: Metrics { steps, ..metrics },
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema version {}", self.schema_version);
        }
        ensure!(
            self.command == self.config.command.name(),
            "command does not match config"
        );
        match self.status {
            Status::Ok => ensure!(
                self.error.is_none() && !self.payload.is_null(),
                "ok record without payload"
            ),
            Status::Error => ensure!(
                self.error.is_some() && self.payload.is_null(),
                "error record without message"
            ),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> anyhow::Result<ResultRecord> {
        let r: ResultRecord = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }
}
