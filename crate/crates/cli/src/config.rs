//! `key = value` configuration files, merged into the argument list so that
//! explicit flags win.

use crate::error::{io_err, CliError, Result};
use std::ffi::OsString;
use std::path::Path;

/// Parse `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                msg: format!("bad key `{key}`"),
            });
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Rewrite `argv` so the options from any `--config FILE` are inserted right
/// after the subcommand, ahead of the explicit flags. With clap's
/// `args_override_self`, the later (explicit) occurrence then wins.
///
/// `key = true` becomes a bare `--key`; `key = false` is dropped.
pub fn merge_config_args(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config_path = None;
    let mut i = 0;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy();
        if arg == "--config" {
            config_path = argv.get(i + 1).map(|p| p.clone().into());
            i += 1;
        } else if let Some(p) = arg.strip_prefix("--config=") {
            config_path = Some(std::path::PathBuf::from(p));
        }
        i += 1;
    }
    let Some(path) = config_path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    let mut injected = Vec::new();
    for (key, value) in parse_config(&text, &path)? {
        if key == "config" {
            return Err(CliError::Config {
                path,
                line: 0,
                msg: "config files cannot include other config files".into(),
            });
        }
        match value.as_str() {
            "true" => injected.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => {
                injected.push(OsString::from(format!("--{key}")));
                injected.push(OsString::from(value));
            }
        }
    }
    // argv[0] is the program, argv[1] the subcommand.
    let split = argv.len().min(2);
    let mut out = argv[..split].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}
