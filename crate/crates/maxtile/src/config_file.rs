//! `key = value` config files mapped onto long command-line options.
//!
//! `seed = 7` becomes `--seed=7`; `true` turns a key into a bare flag and
//! `false` drops it. Blank lines and lines starting with `#` are ignored.

use std::ffi::OsString;

use crate::io::ReadError;

pub fn parse(text: &str) -> Result<Vec<OsString>, ReadError> {
    let mut args = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ReadError::Parse {
            line: k + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(ReadError::Parse {
                line: k + 1,
                message: format!("bad key `{key}`"),
            });
        }
        match value.trim() {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            v => args.push(format!("--{key}={v}").into()),
        }
    }
    Ok(args)
}

/// Inserts the options of any `--config FILE` right after the subcommand,
/// so options given on the command line still win.
pub fn expand(args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a file")?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
    let extra = parse(&text).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
    let at = rest
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
        .map_or(rest.len(), |p| p + 1);
    rest.splice(at..at, extra);
    Ok(rest)
}
