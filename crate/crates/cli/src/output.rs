//! Output documents and atomic file writes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

pub const TOOL: &str = "potts";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every JSON document carries the tool version and the parsed arguments.
#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    result: &'a R,
}

pub fn json_document<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Result<String, CliError> {
    let env = Envelope { tool: TOOL, version: VERSION, command, config, result };
    let mut text = serde_json::to_string_pretty(&env).map_err(CliError::internal)?;
    text.push('\n');
    Ok(text)
}

/// CSV with a two-line `#` preamble echoing the version and config.
pub fn csv_document<C: Serialize>(
    command: &str,
    config: &C,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<String, CliError> {
    let config = serde_json::to_string(config).map_err(CliError::internal)?;
    let mut out = format!("# {TOOL} {VERSION} {command}\n# config: {config}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(CliError::internal)?;
    for row in rows {
        w.write_record(row).map_err(CliError::internal)?;
    }
    let bytes = w.into_inner().map_err(CliError::internal)?;
    out.push_str(&String::from_utf8(bytes).map_err(CliError::internal)?);
    Ok(out)
}

/// Writes `text` to `path` through a sibling temporary file and a rename, or
/// to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(CliError::io)
        }
        Some(path) => write_atomic(path, text.as_bytes()),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("output path `{}` has no file name", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(CliError::io)
}
