//! `key = value` configuration files, merged beneath command-line flags.

use crate::error::{usage, CliError};
use std::ffi::OsString;

const GLOBAL_VALUE_FLAGS: [&str; 2] = ["--config", "--threads"];

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`, got {line:?}", i + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(usage(format!("config line {}: empty key", i + 1)));
        }
        entries.push(Entry { key, value, line: i + 1 });
    }
    Ok(entries)
}

/// Index of the subcommand token in `argv`.
fn subcommand_position(argv: &[OsString], names: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let tok = argv[i].to_string_lossy();
        if GLOBAL_VALUE_FLAGS.contains(&tok.as_ref()) {
            i += 2;
            continue;
        }
        if names.iter().any(|n| n == tok.as_ref()) {
            return Some(i);
        }
        i += 1;
    }
    None
}

/// Inserts config entries as flags directly after the subcommand, so that
/// flags the user typed (which come later) override them.
pub fn merge(argv: &[OsString], entries: &[Entry], command: &clap::Command) -> Result<Vec<OsString>, CliError> {
    let names: Vec<String> = command.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let pos = subcommand_position(argv, &names).ok_or_else(|| usage("no subcommand given"))?;
    let name = argv[pos].to_string_lossy().into_owned();
    let sub = command.find_subcommand(&name).expect("subcommand exists");
    let known: Vec<&str> = sub
        .get_arguments()
        .filter_map(|a| a.get_long())
        .filter(|l| !matches!(*l, "help" | "version" | "config"))
        .collect();
    let mut inserted = Vec::new();
    for e in entries {
        if e.key == "config" {
            return Err(usage(format!("config line {}: `config` cannot be set from a config file", e.line)));
        }
        if !known.contains(&e.key.as_str()) && e.key != "threads" {
            return Err(usage(format!(
                "config line {}: unknown key `{}` for `{name}` (known: {})",
                e.line,
                e.key,
                known.join(", ")
            )));
        }
        inserted.push(OsString::from(format!("--{}={}", e.key, e.value)));
    }
    let mut merged = argv[..=pos].to_vec();
    merged.extend(inserted);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}
