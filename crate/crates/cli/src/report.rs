use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID_CHANNEL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const ZERO: u8 = 3;
    pub const UNKNOWN: u8 = 4;
    pub const PRECONDITION: u8 = 5;
    pub const PROTOCOL_ERRORS: u8 = 6;
    pub const ORACLE_DISAGREES: u8 = 7;
}

/// Everything printed on stdout. Two runs with the same channel file, command
/// line and seed differ only in `wall_clock_s`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    /// SHA-256 of the channel file bytes; absent when the file could not be read.
    pub channel_digest: Option<String>,
    pub command: &'static str,
    pub parameters: Value,
    pub results: Value,
    pub wall_clock_s: f64,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// What a subcommand hands back to `main`.
pub struct Done {
    pub results: Value,
    pub code: u8,
    /// One-line human summary for `--verbose`.
    pub summary: String,
}

impl Done {
    pub fn new(results: impl Serialize, code: u8, summary: impl Into<String>) -> Self {
        Done {
            results: serde_json::to_value(results).expect("results serialize"),
            code,
            summary: summary.into(),
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    pub detail: Option<Value>,
}

impl Failure {
    pub fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
            detail: None,
        }
    }
}

impl From<sdchan_core::Error> for Failure {
    fn from(e: sdchan_core::Error) -> Self {
        use sdchan_core::Error as E;
        let message = e.to_string();
        match e {
            E::Parse(_) => Failure::new(exit::INVALID_CHANNEL, "parse", message),
            E::Validation(report) => Failure {
                detail: serde_json::to_value(&report).ok(),
                ..Failure::new(exit::INVALID_CHANNEL, "validation", message)
            },
            E::PrecondFailed(_) => Failure::new(exit::PRECONDITION, "precondition_failed", message),
            E::NoConvergence(r) => Failure {
                detail: serde_json::to_value(r.report()).ok(),
                ..Failure::new(exit::USAGE, "no_convergence", message)
            },
            E::UnsupportedModel(_) => Failure::new(exit::USAGE, "unsupported_model", message),
            E::UnsupportedRegime(_) => Failure::new(exit::USAGE, "unsupported_regime", message),
            E::AlphabetTooLarge { .. } => Failure::new(exit::USAGE, "alphabet_too_large", message),
            E::BudgetExceeded { .. } => Failure::new(exit::USAGE, "budget_exceeded", message),
            E::Index { .. } | E::InvalidArgument(_) => Failure::new(exit::USAGE, "invalid_argument", message),
        }
    }
}

#[derive(Serialize)]
struct ErrorResults<'a> {
    error: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: &'a Option<Value>,
}

pub struct Emitter {
    started: Instant,
    pub command: &'static str,
    pub parameters: Value,
    pub digest: Option<String>,
    pub verbose: bool,
}

impl Emitter {
    pub fn new(command: &'static str, parameters: Value, verbose: bool) -> Self {
        Emitter {
            started: Instant::now(),
            command,
            parameters,
            digest: None,
            verbose,
        }
    }

    pub fn finish(self, outcome: Result<Done, Failure>) -> ExitCode {
        let (results, code, summary) = match outcome {
            Ok(done) => (done.results, done.code, done.summary),
            Err(f) => {
                let results = serde_json::to_value(ErrorResults {
                    error: f.kind,
                    message: &f.message,
                    detail: &f.detail,
                })
                .expect("error serializes");
                (results, f.code, format!("error: {}", f.message))
            }
        };
        let report = Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            channel_digest: self.digest,
            command: self.command,
            parameters: self.parameters,
            results,
            wall_clock_s: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        // A closed pipe downstream is not our failure.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        if self.verbose {
            eprintln!("{}: {} (exit {code})", self.command, summary);
        }
        ExitCode::from(code)
    }
}
