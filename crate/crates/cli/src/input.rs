//! Parsing of command-line values: groups, fractions, tuples and JSON
//! arguments given inline or as file paths.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;
use rpp_core::group::{Elem, GroupSpec, Tuple, DEFAULT_CAP};
use serde::de::DeserializeOwned;

/// Environment variable overriding the default enumeration cap.
pub const CAP_ENV: &str = "RPP_CAP";

pub fn default_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// Text of a JSON argument: inline when it starts with `{` or `[`,
/// otherwise the contents of the named file.
pub fn json_text(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("cannot read {arg}"))
    }
}

pub fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = json_text(arg)?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", short(arg)))
}

fn short(arg: &str) -> String {
    if arg.len() > 40 {
        format!("{}...", &arg[..40])
    } else {
        arg.to_string()
    }
}

/// `Z6`, `Z2+Z4`, `Z2xZ2xZ6`, `S3`, or a JSON group (inline or file).
pub fn parse_group(arg: &str) -> Result<GroupSpec> {
    let s = arg.trim();
    if let Some(k) = s.strip_prefix('S').and_then(|k| k.parse::<usize>().ok()) {
        return Ok(GroupSpec::symmetric(k)?);
    }
    let parts: Vec<&str> = s.split(['+', 'x']).collect();
    if parts.iter().all(|p| p.starts_with('Z')) {
        let factors = parts
            .iter()
            .map(|p| p[1..].parse::<u32>().map_err(|_| anyhow!("bad cyclic factor {p}")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(GroupSpec::abelian(&factors)?);
    }
    read_json(s)
}

/// `1/4`, `3` or a decimal such as `0.25`.
pub fn parse_ratio(arg: &str) -> Result<Ratio<u64>> {
    let s = arg.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        if b == 0 {
            bail!("zero denominator in {s}");
        }
        return Ok(Ratio::new(a, b));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let den = 10u64.checked_pow(frac.len() as u32).ok_or_else(|| anyhow!("too many digits in {s}"))?;
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse()? };
        let frac: u64 = frac.parse()?;
        return Ok(Ratio::new(whole * den + frac, den));
    }
    Ok(Ratio::from_integer(s.parse()?))
}

/// `[0,1,2]`, `0,1,2` or `012` (single-digit coordinates).
pub fn parse_tuple(arg: &str) -> Result<Tuple> {
    let s = arg.trim().trim_start_matches('[').trim_end_matches(']');
    let coords: Vec<Elem> = if s.contains(',') {
        s.split(',').map(|c| c.trim().parse::<Elem>()).collect::<Result<_, _>>()?
    } else if s.is_empty() {
        Vec::new()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as Elem).ok_or_else(|| anyhow!("bad coordinate {c}")))
            .collect::<Result<_>>()?
    };
    Ok(Tuple::new(coords))
}
