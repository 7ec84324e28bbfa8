//! `key=value` configuration files.
//!
//! Entries become long flags inserted right after the subcommand path, so
//! anything given on the command line (which comes later) wins. Keys the
//! chosen subcommand does not accept are ignored, which lets one file serve
//! several commands.

use std::path::Path;

use clap::{ArgMatches, Command};

use crate::CliError;

pub fn read(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input(format!("{}:{}: expected key=value", path.display(), lineno + 1)));
        };
        entries.push((key.trim().replace('_', "-"), value.trim().to_string()));
    }
    Ok(entries)
}

/// Names of the nested subcommands selected in `matches`.
pub fn subcommand_path(matches: &ArgMatches) -> Vec<String> {
    let mut path = Vec::new();
    let mut current = matches;
    while let Some((name, sub)) = current.subcommand() {
        path.push(name.to_string());
        current = sub;
    }
    path
}

/// Rebuilds `argv` as `prog, path..., config flags..., user flags...`.
pub fn splice(root: &Command, argv: &[String], path: &[String], entries: &[(String, String)]) -> Vec<String> {
    let mut leaf = root.clone();
    for name in path {
        leaf = leaf.find_subcommand(name).cloned().expect("path comes from a successful parse");
    }
    let known = |cmd: &Command, key: &str| cmd.get_arguments().find(|a| a.get_long() == Some(key)).cloned();

    let mut spliced: Vec<String> = argv.iter().take(1).cloned().collect();
    spliced.extend(path.iter().cloned());
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let Some(arg) = known(&leaf, key).or_else(|| known(root, key)) else { continue };
        if arg.get_action().takes_values() {
            spliced.push(format!("--{key}"));
            spliced.push(value.clone());
        } else if matches!(value.as_str(), "true" | "yes" | "1") {
            spliced.push(format!("--{key}"));
        }
    }
    let mut pending = path.iter().peekable();
    for token in argv.iter().skip(1) {
        if pending.peek().is_some_and(|name| *name == token) {
            pending.next();
        } else {
            spliced.push(token.clone());
        }
    }
    spliced
}
