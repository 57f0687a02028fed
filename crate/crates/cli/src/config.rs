//! `key=value` config files merged into the argument list.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, CommandFactory};

use crate::{Cli, CliError, CliResult};

/// Reads a config file: one `key=value` per line, `#` comments and blank
/// lines ignored. Keys may use `-` or `_`.
pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value, got {line:?}", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("config key {key} given twice")));
        }
    }
    Ok(out)
}

/// Replaces `--config FILE` by the file's entries as flags, skipping any key
/// already given on the command line.
pub fn expand(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let strs: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    let mut kept = Vec::with_capacity(argv.len());
    let mut i = 0;
    while i < strs.len() {
        if strs[i] == "--config" {
            let v = strs.get(i + 1).ok_or_else(|| CliError::Config("--config needs a file".into()))?;
            path = Some(v.clone());
            i += 2;
            continue;
        }
        if let Some(v) = strs[i].strip_prefix("--config=") {
            path = Some(v.to_string());
            i += 1;
            continue;
        }
        kept.push(argv[i].clone());
        i += 1;
    }
    let Some(path) = path else { return Ok(argv) };
    let entries = read_config(Path::new(&path))?;
    let sub_name = strs.get(1).cloned().unwrap_or_default();
    let command = Cli::command();
    let sub = command
        .find_subcommand(&sub_name)
        .ok_or_else(|| CliError::Config(format!("--config needs a subcommand, got {sub_name:?}")))?;
    for (key, value) in entries {
        let flag = format!("--{key}");
        let given = strs.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .filter(|_| key != "config")
            .ok_or_else(|| CliError::Config(format!("unknown config key {key} for {sub_name}")))?;
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => kept.push(flag.into()),
                "false" => {}
                other => return Err(CliError::Config(format!("config key {key} expects true/false, got {other}"))),
            },
            _ => {
                kept.push(flag.into());
                kept.push(value.into());
            }
        }
    }
    Ok(kept)
}
