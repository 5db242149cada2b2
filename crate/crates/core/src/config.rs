//! Plain-text configuration files.
//!
//! A digit-set file holds `key = value` lines:
//!
//! ```text
//! # the demo set
//! schedule = recurrence k0=5      # or: explicit 5,10,30,120
//! a1 = 1/2
//! a2 = 1/4
//! ```
//!
//! `schedule` may be omitted, in which case the default recurrence for the
//! two parameters is used. A product file lists factor files, relative to
//! its own directory, and an optional power:
//!
//! ```text
//! factor = s.cfg
//! factor = t.cfg
//! power = 2
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::digit_sets::{DigitSetSpec, ScheduleSpec};
use crate::error::{Error, Result};
use crate::product::ProductSpec;
use crate::rational::{parse_rational, Rational};

struct Line<'a> {
    number: usize,
    key: String,
    value: &'a str,
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn lines<'a>(text: &'a str, path: &Path) -> Result<Vec<Line<'a>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_error(path, number, format!("expected `key = value`, found `{content}`")))?;
        out.push(Line {
            number,
            key: key.trim().to_ascii_lowercase(),
            value: value.trim(),
        });
    }
    Ok(out)
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn parse_uint(text: &str) -> Option<BigUint> {
    text.parse::<BigUint>().ok()
}

fn parse_schedule(value: &str, path: &Path, line: usize) -> Result<ScheduleSpec> {
    let lowered = value.to_ascii_lowercase();
    if let Some(rest) = lowered.strip_prefix("recurrence") {
        let rest = strip_ws(rest);
        let k0 = rest
            .strip_prefix("k0=")
            .and_then(parse_uint)
            .ok_or_else(|| parse_error(path, line, format!("expected `recurrence k0=<int>`, found `{value}`")))?;
        Ok(ScheduleSpec::Recurrence { k0 })
    } else if let Some(rest) = lowered.strip_prefix("explicit") {
        let rest = strip_ws(rest);
        let ks = rest
            .split(',')
            .map(|t| parse_uint(t).ok_or_else(|| parse_error(path, line, format!("`{t}` is not a non-negative integer"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScheduleSpec::Explicit(ks))
    } else {
        Err(parse_error(
            path,
            line,
            format!("schedule must start with `recurrence` or `explicit`, found `{value}`"),
        ))
    }
}

fn parse_param(value: &str, path: &Path, line: usize) -> Result<Rational> {
    parse_rational(&strip_ws(value)).ok_or_else(|| parse_error(path, line, format!("`{value}` is not a rational p/q")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, path: &Path, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(parse_error(path, line, format!("duplicate key `{key}`")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses digit-set text; `path` only labels errors.
pub fn parse_spec(text: &str, path: &Path) -> Result<DigitSetSpec> {
    let (mut schedule, mut a1, mut a2) = (None, None, None);
    let mut last_line = 0;
    for line in lines(text, path)? {
        last_line = line.number;
        match line.key.as_str() {
            "schedule" => {
                let s = parse_schedule(line.value, path, line.number)?;
                set_once(&mut schedule, s, "schedule", path, line.number)?;
            }
            "a1" => set_once(&mut a1, parse_param(line.value, path, line.number)?, "a1", path, line.number)?,
            "a2" => set_once(&mut a2, parse_param(line.value, path, line.number)?, "a2", path, line.number)?,
            other => return Err(parse_error(path, line.number, format!("unknown key `{other}`"))),
        }
    }
    let end = last_line.max(1);
    let a1 = a1.ok_or_else(|| parse_error(path, end, "missing `a1`"))?;
    let a2 = a2.ok_or_else(|| parse_error(path, end, "missing `a2`"))?;
    Ok(match schedule {
        Some(schedule) => DigitSetSpec::new(schedule, a1, a2),
        None => DigitSetSpec::with_default_schedule(a1, a2),
    })
}

pub fn load_spec(path: &Path) -> Result<DigitSetSpec> {
    parse_spec(&read(path)?, path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductConfig {
    /// Factor files in product order, already resolved against the config directory.
    pub factors: Vec<PathBuf>,
    pub power: usize,
}

pub fn parse_product(text: &str, path: &Path) -> Result<ProductConfig> {
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut factors = Vec::new();
    let mut power = None;
    let mut last_line = 0;
    for line in lines(text, path)? {
        last_line = line.number;
        match line.key.as_str() {
            "factor" => {
                if line.value.is_empty() {
                    return Err(parse_error(path, line.number, "empty factor path"));
                }
                factors.push(base.join(line.value));
            }
            "power" => {
                let d = strip_ws(line.value)
                    .parse::<usize>()
                    .ok()
                    .filter(|d| *d >= 1)
                    .ok_or_else(|| parse_error(path, line.number, format!("power must be a positive integer, found `{}`", line.value)))?;
                set_once(&mut power, d, "power", path, line.number)?;
            }
            other => return Err(parse_error(path, line.number, format!("unknown key `{other}`"))),
        }
    }
    if factors.is_empty() {
        return Err(parse_error(path, last_line.max(1), "no `factor` lines"));
    }
    Ok(ProductConfig {
        factors,
        power: power.unwrap_or(1),
    })
}

pub fn load_product_config(path: &Path) -> Result<ProductConfig> {
    parse_product(&read(path)?, path)
}

impl ProductConfig {
    pub fn specs(&self) -> Result<Vec<DigitSetSpec>> {
        self.factors.iter().map(|p| load_spec(p)).collect()
    }

    /// Validates every factor to `depth` and raises the product to `power`.
    pub fn build(&self, depth: usize) -> Result<ProductSpec> {
        let specs = self
            .specs()?
            .iter()
            .map(|s| s.validate(depth))
            .collect::<Result<Vec<_>>>()?;
        ProductSpec::from_specs(specs)?.power(self.power)
    }
}
