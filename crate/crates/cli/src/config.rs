//! Flat `key=value` config files, merged in front of the command line so
//! that explicit flags win.

use std::fs;

/// Expands `--config <path>` into flags placed right after the subcommand.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        if a == "--config" {
            path = Some(iter.next().ok_or("--config needs a path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let (subcommand, flags) = parse(&text)?;

    let position = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|p| p + 1);
    let insert_at = match (position, subcommand) {
        (Some(p), _) => p + 1,
        (None, Some(sub)) => {
            rest.insert(1, sub);
            2
        }
        (None, None) => {
            return Err("no subcommand given on the command line or in the config".into())
        }
    };
    rest.splice(insert_at..insert_at, flags);
    Ok(rest)
}

fn parse(text: &str) -> Result<(Option<String>, Vec<String>), String> {
    let mut subcommand = None;
    let mut flags = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", no + 1))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() {
            return Err(format!("config line {}: empty key", no + 1));
        }
        match (key.as_str(), value) {
            ("subcommand", v) => subcommand = Some(v.to_string()),
            (_, "true") => flags.push(format!("--{key}")),
            (_, "false") => {}
            (_, v) => flags.push(format!("--{key}={v}")),
        }
    }
    Ok((subcommand, flags))
}
