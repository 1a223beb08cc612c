//! `--params <file.json>` support.
//!
//! The file holds a flat JSON object using flag names as keys (`kl_steps` or
//! `kl-steps`). Its entries are spliced in as flags directly after the
//! subcommand, ahead of the command-line flags, so the latter win.

use std::ffi::OsString;

use crate::error::CliError;

pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--params" {
            path = Some(
                it.next()
                    .ok_or_else(|| CliError::Usage("--params needs a file path".into()))?,
            );
        } else if let Some(p) = s.strip_prefix("--params=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.to_string_lossy())))?;
    let flags = to_flags(&text)?;
    // Program name and subcommand come first.
    let split = rest.len().min(2);
    let tail = rest.split_off(split);
    rest.extend(flags);
    rest.extend(tail);
    Ok(rest)
}

fn to_flags(text: &str) -> Result<Vec<OsString>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("malformed params file: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Usage("params file must hold a JSON object".into()))?;
    let mut flags = Vec::with_capacity(2 * obj.len());
    for (key, v) in obj {
        let v = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Bool(b) => b.to_string(),
            _ => {
                return Err(CliError::Usage(format!(
                    "params key '{key}' must be a string, number or boolean"
                )))
            }
        };
        flags.push(OsString::from(format!("--{}", key.replace('_', "-"))));
        flags.push(OsString::from(v));
    }
    Ok(flags)
}
