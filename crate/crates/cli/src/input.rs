use std::fmt::Display;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;

/// Parses `a,b,...` into exactly `N` values.
pub fn list<T, const N: usize>(s: &str) -> Result<[T; N], String>
where
    T: FromStr,
    T::Err: Display,
{
    let items = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| format!("`{}`: {e}", x.trim()))
        })
        .collect::<Result<Vec<T>, String>>()?;
    let got = items.len();
    items
        .try_into()
        .map_err(|_| format!("expected {N} comma-separated values, got {got}"))
}

/// Inline JSON or the contents of a file (`-` is stdin). Parse errors carry
/// the line and column.
pub fn read_json(inline: Option<&str>, file: Option<&Path>) -> Result<Value> {
    let (text, origin) = match (inline, file) {
        (Some(s), None) => (s.to_string(), "--json".to_string()),
        (None, Some(p)) if p == Path::new("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            (s, "stdin".to_string())
        }
        (None, Some(p)) => (
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            p.display().to_string(),
        ),
        (Some(_), Some(_)) => bail!("--json and --file are mutually exclusive"),
        (None, None) => bail!("one of --json or --file is required"),
    };
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "malformed JSON in {origin} at line {}, column {}: {e}",
            e.line(),
            e.column()
        )
    })
}
