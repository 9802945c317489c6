use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use geolab_core::SCHEMA_VERSION;
use serde::Serialize;

#[derive(Serialize)]
struct Report<'a, C, R> {
    schema_version: u32,
    command: &'a str,
    exit_code: u8,
    config: C,
    result: R,
}

/// Writes the JSON report, plus `csv` when `out` names a `.csv` file.
pub fn emit<C: Serialize, R: Serialize>(
    command: &str,
    exit_code: u8,
    config: C,
    result: R,
    out: Option<&Path>,
    csv: Option<String>,
) -> Result<()> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command,
        exit_code,
        config,
        result,
    };
    let mut json = geolab_core::json::to_string(&report)?;
    json.push('\n');
    let Some(out) = out else {
        print!("{json}");
        return Ok(());
    };
    if out.extension().is_some_and(|e| e == "csv") {
        let Some(csv) = csv else {
            bail!("--out: {command} has no CSV view; use a .json path");
        };
        write(out, &csv)?;
        write(&out.with_extension("json"), &json)
    } else {
        write(out, &json)
    }
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}
