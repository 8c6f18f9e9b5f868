//! Report envelope, manifests and the exit-code contract.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;
use turan_core::constructions::ConstructionError;
use turan_core::multipartite::MultipartiteError;
use turan_core::search::{SearchError, ZykovError};
use turan_core::stability::StabilityError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Exit code 3; `progress` is reported as a partial result.
    #[error("{message}")]
    Budget { message: String, progress: Value },
    /// Exit code 4.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget { .. } => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExhausted { visited, budget } => CliError::Budget {
                message: e.to_string(),
                progress: json!({ "visited": visited, "budget": budget }),
            },
            SearchError::Pool(_) => CliError::Invariant(e.to_string()),
            SearchError::OrderTooLarge { .. } | SearchError::InvalidInstance(_) | SearchError::Graph(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<MultipartiteError> for CliError {
    fn from(e: MultipartiteError) -> Self {
        match e {
            MultipartiteError::BudgetExceeded { needed, budget } => CliError::Budget {
                message: e.to_string(),
                progress: json!({ "needed": needed.to_string(), "budget": budget }),
            },
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::BudgetExceeded { budget } => CliError::Budget {
                message: e.to_string(),
                progress: json!({ "budget": budget }),
            },
            StabilityError::InvariantViolation(m) => CliError::Invariant(m),
            StabilityError::Search(s) => s.into(),
            StabilityError::Multipartite(m) => m.into(),
            StabilityError::InvalidK | StabilityError::InvalidInstance(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<ZykovError> for CliError {
    fn from(e: ZykovError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What was run and with which parameters. Worker count is deliberately
/// absent, so reports match across `--jobs`.
pub struct Manifest {
    command: &'static str,
    instance: Map<String, Value>,
    budgets: Map<String, Value>,
    seed: u64,
    started: Instant,
    timing: bool,
}

impl Manifest {
    pub fn new(command: &'static str, seed: u64, timing: bool) -> Self {
        Manifest {
            command,
            instance: Map::new(),
            budgets: Map::new(),
            seed,
            started: Instant::now(),
            timing,
        }
    }

    pub fn instance(mut self, key: &str, value: impl Serialize) -> Self {
        self.instance.insert(key.into(), serde_json::to_value(value).expect("plain data"));
        self
    }

    pub fn budget(mut self, key: &str, value: impl Serialize) -> Self {
        self.budgets.insert(key.into(), serde_json::to_value(value).expect("plain data"));
        self
    }

    fn to_json(&self) -> Value {
        let mut m = json!({
            "command": self.command,
            "instance": self.instance,
            "seeds": { "seed": self.seed },
            "budgets": self.budgets,
            "toolVersion": env!("CARGO_PKG_VERSION"),
        });
        if self.timing {
            m["wallTimeMs"] = json!(self.started.elapsed().as_millis() as u64);
        }
        m
    }

    pub fn report(&self, result: impl Serialize) -> String {
        let v = json!({
            "schemaVersion": SCHEMA_VERSION,
            "manifest": self.to_json(),
            "result": serde_json::to_value(result).expect("plain data"),
        });
        serde_json::to_string_pretty(&v).expect("serialisable")
    }

    pub fn partial(&self, err: &CliError) -> Option<String> {
        let CliError::Budget { message, progress } = err else {
            return None;
        };
        let v = json!({
            "schemaVersion": SCHEMA_VERSION,
            "manifest": self.to_json(),
            "partial": true,
            "error": { "kind": "budgetExceeded", "message": message, "progress": progress },
        });
        Some(serde_json::to_string_pretty(&v).expect("serialisable"))
    }
}
