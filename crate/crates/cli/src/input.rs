use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rkforge::tableau::{lookup, parse_tableau};
use rkforge::{AnyTableau, QSqrt5};

/// Misuse of the command line; mapped to exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn load(input: &str) -> Result<AnyTableau> {
    if let Some(key) = input.strip_prefix("catalog:") {
        return lookup(key)
            .map(|e| AnyTableau::Exact(e.tableau))
            .ok_or_else(|| usage(format!("no catalog entry named `{key}`")));
    }
    let text = fs::read_to_string(input).map_err(|e| usage(format!("cannot read {input}: {e}")))?;
    parse_tableau(&text).map_err(|e| usage(format!("{input}: {e}")))
}

pub fn exact_arg(flag: &str, value: &str) -> Result<QSqrt5> {
    value.parse().map_err(|e| usage(format!("--{flag} {value}: {e}")))
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
