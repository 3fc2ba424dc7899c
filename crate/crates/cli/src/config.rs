//! Flat `key = value` config files, spliced into the argument list so clap
//! validates them like flags. File values go first and the command line wins.

use std::ffi::OsString;
use std::fs;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

/// Pulls `--config FILE` (or `--config=FILE`) out of `args`.
fn take_config_path(args: &mut Vec<OsString>) -> Result<Option<OsString>, CliError> {
    for i in 0..args.len() {
        let arg = args[i].to_string_lossy().into_owned();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::config("--config needs a file path"));
            }
            let path = args.remove(i + 1);
            args.remove(i);
            return Ok(Some(path));
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            args.remove(i);
            return Ok(Some(path.into()));
        }
    }
    Ok(None)
}

/// `(key, value)` pairs; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            return Err(CliError::config(format!("config line {}: empty key", lineno + 1)));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

/// Long flag names accepted by `subcommand`, or by any subcommand when `None`.
fn known_keys(subcommand: Option<&str>) -> Vec<String> {
    let cmd = Cli::command();
    cmd.get_subcommands()
        .filter(|s| subcommand.is_none_or(|name| s.get_name() == name))
        .flat_map(|s| s.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect::<Vec<_>>())
        .collect()
}

/// Expands any `--config` file into flags placed right after the subcommand.
/// Keys that belong to other subcommands are ignored so one file can serve all.
pub fn expand_args(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = take_config_path(&mut args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::config(format!("cannot read config file {}: {e}", path.to_string_lossy())))?;
    let entries = parse_config(&text)?;

    let subcommand = args.get(1).map(|s| s.to_string_lossy().into_owned());
    let accepted = match subcommand.as_deref() {
        Some(name) if Cli::command().find_subcommand(name).is_some() => known_keys(Some(name)),
        _ => return Err(CliError::config("--config must follow a subcommand")),
    };
    let all = known_keys(None);
    let mut injected = Vec::new();
    for (key, value) in entries {
        if !all.contains(&key) {
            return Err(CliError::config(format!("unknown config key `{key}`")));
        }
        if accepted.contains(&key) {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }
    args.splice(2..2, injected);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn comments_and_spacing() {
        let entries = parse_config("# table run\nA = -300\n  basis-degree=10\n\nnu = \"auto\"\n").unwrap();
        assert_eq!(
            entries,
            vec![
                ("A".to_string(), "-300".to_string()),
                ("basis-degree".to_string(), "10".to_string()),
                ("nu".to_string(), "auto".to_string())
            ]
        );
    }

    #[test]
    fn malformed_line_rejected() {
        assert!(matches!(parse_config("A -300"), Err(CliError::Config(_))));
    }

    #[test]
    fn no_config_is_passthrough() {
        let args = os(&["tra-spectrum", "spectrum", "--A", "-300"]);
        assert_eq!(expand_args(args.clone()).unwrap(), args);
    }

    #[test]
    fn file_values_precede_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "A = -300\nB = 5\nstate = 2\n").unwrap();
        let args = os(&["tra-spectrum", "spectrum", "--config", path.to_str().unwrap(), "--B", "6"]);
        let out = expand_args(args).unwrap();
        // `state` belongs to another subcommand and is dropped
        assert_eq!(out, os(&["tra-spectrum", "spectrum", "--A=-300", "--B=5", "--B", "6"]));
    }

    #[test]
    fn unknown_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "alpha = 1\n").unwrap();
        let args = os(&["tra-spectrum", "spectrum", "--config", path.to_str().unwrap()]);
        assert!(matches!(expand_args(args), Err(CliError::Config(_))));
    }
}
