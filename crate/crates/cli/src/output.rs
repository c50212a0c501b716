//! JSON and CSV emission with a reproducibility header.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const TOOL: &str = "sre-purity";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    /// First 16 hex digits of the SHA-256 of the canonical JSON config.
    pub config_hash: String,
}

impl Meta {
    pub fn new<C: Serialize>(command: &'static str, seed: u64, config: &C) -> CliResult<Self> {
        Ok(Meta {
            tool: TOOL,
            version: VERSION,
            command,
            seed,
            config_hash: config_hash(config)?,
        })
    }
}

pub fn config_hash<C: Serialize>(config: &C) -> CliResult<String> {
    let canonical = serde_json::to_string(config)?;
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(16);
    for b in &digest[..8] {
        write!(hex, "{b:02x}").expect("writing to a String");
    }
    Ok(hex)
}

#[derive(Serialize)]
struct Document<'a, C: Serialize, R: Serialize> {
    meta: &'a Meta,
    config: &'a C,
    result: &'a R,
}

pub fn to_json<C: Serialize, R: Serialize>(
    meta: &Meta,
    config: &C,
    result: &R,
) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Document {
        meta,
        config,
        result,
    })?;
    s.push('\n');
    Ok(s)
}

/// `#`-prefixed metadata lines, then a header row and one row per record.
pub fn to_csv<R: Serialize>(
    meta: &Meta,
    extra: &[(&str, String)],
    rows: &[R],
) -> CliResult<String> {
    let mut out = String::new();
    writeln!(out, "# tool={} version={}", meta.tool, meta.version).expect("String");
    writeln!(
        out,
        "# command={} seed={} config_hash={}",
        meta.command, meta.seed, meta.config_hash
    )
    .expect("String");
    for (k, v) in extra {
        writeln!(out, "# {k}={v}").expect("String");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    out.push_str(&String::from_utf8(body).map_err(|e| CliError::Serialize(e.to_string()))?);
    Ok(out)
}

/// Writes to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
