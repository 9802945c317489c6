use std::fs;

use anyhow::{anyhow, Context, Result};
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::GeodesicCandidate;
use geolab_core::semitube::SemitubeBase;
use serde::de::DeserializeOwned;

fn text(field: &str, arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("--{field}: cannot read {arg:?}"))
    }
}

/// Inline JSON or a JSON file.
pub fn json<T: DeserializeOwned>(field: &str, arg: &str) -> Result<T> {
    let t = text(field, arg)?;
    serde_json::from_str(&t).map_err(|e| anyhow!("--{field}: {e}"))
}

pub fn domain(arg: &str) -> Result<DomainDescriptor> {
    match DomainDescriptor::builtin(arg) {
        Ok(d) => Ok(d),
        Err(_) if arg.ends_with(".json") || arg.trim_start().starts_with('{') => {
            json("domain", arg)
        }
        Err(e) => Err(anyhow!("--domain: {e}")),
    }
}

pub fn base(arg: &str) -> Result<SemitubeBase> {
    match SemitubeBase::builtin(arg) {
        Ok(b) => Ok(b),
        Err(_) if arg.ends_with(".json") || arg.trim_start().starts_with('{') => json("base", arg),
        Err(e) => Err(anyhow!("--base: {e}")),
    }
}

/// A bare candidate, or any report holding one under `result.candidate`.
pub fn candidate(arg: &str) -> Result<GeodesicCandidate> {
    let value: serde_json::Value = json("candidate", arg)?;
    let inner = value.pointer("/result/candidate").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| anyhow!("--candidate: {e}"))
}
