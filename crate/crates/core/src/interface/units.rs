//! Unit-suffixed numbers such as `"10ns"`, `"0.1pJ"` or `"1000Gbps"`.
//!
//! Scaling is done by shifting the decimal exponent before parsing, so
//! `"0.1pJ"` yields exactly the same double as the literal `1e-13`.

use serde::{Deserialize, Deserializer, Serialize};

/// Physical dimension of a configurable value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Counts, cycles and bits: no unit suffix.
    Plain,
    Time,
    Energy,
    Bandwidth,
    Power,
}

impl Dimension {
    fn units(self) -> &'static [(&'static str, i32)] {
        match self {
            Dimension::Plain => &[],
            Dimension::Time => &[("s", 0), ("ms", -3), ("us", -6), ("µs", -6), ("ns", -9), ("ps", -12)],
            Dimension::Energy => {
                &[("J", 0), ("mJ", -3), ("uJ", -6), ("µJ", -6), ("nJ", -9), ("pJ", -12), ("fJ", -15), ("aJ", -18)]
            }
            Dimension::Bandwidth => &[("bps", 0), ("Kbps", 3), ("kbps", 3), ("Mbps", 6), ("Gbps", 9), ("Tbps", 12)],
            Dimension::Power => &[("W", 0), ("mW", -3), ("kW", 3)],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dimension::Plain => "plain number",
            Dimension::Time => "time",
            Dimension::Energy => "energy",
            Dimension::Bandwidth => "bandwidth",
            Dimension::Power => "power",
        }
    }
}

/// Parses `"<number>[ ]<unit>"` in the given dimension. A bare number is
/// taken as SI.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| {
            let exponent_sign = (c == '+' || c == '-') && i > 0 && matches!(text.as_bytes()[i - 1], b'e' | b'E');
            !(c.is_ascii_digit()
                || c == '.'
                || c == 'e'
                || c == 'E'
                || exponent_sign
                || (i == 0 && (c == '-' || c == '+')))
        })
        .map_or(text.len(), |(i, _)| i);
    let (number, unit) = (&text[..split], text[split..].trim());
    // A trailing 'e' belongs to no exponent: "5e" is not a number.
    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(i) => (&number[..i], number[i + 1..].parse::<i32>().map_err(|_| format!("`{text}` is not a number"))?),
        None => (number, 0),
    };
    if mantissa.is_empty() || mantissa.parse::<f64>().is_err() {
        return Err(format!("`{text}` is not a number"));
    }
    let shift = if unit.is_empty() {
        0
    } else {
        dim.units().iter().find(|(u, _)| *u == unit).map(|&(_, e)| e).ok_or_else(|| {
            let known: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
            if known.is_empty() {
                format!("unit `{unit}` not allowed: expected a {}", dim.name())
            } else {
                format!("unit `{unit}` is not a {} unit (expected one of {})", dim.name(), known.join(", "))
            }
        })?
    };
    let value: f64 =
        format!("{mantissa}e{}", exponent + shift).parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is out of range"));
    }
    Ok(value)
}

/// A JSON number or a unit-suffixed string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    pub fn resolve(&self, dim: Dimension) -> Result<f64, String> {
        match self {
            NumOrText::Num(v) => Ok(*v),
            NumOrText::Text(t) => parse_quantity(t, dim),
        }
    }
}

impl From<f64> for NumOrText {
    fn from(v: f64) -> Self {
        NumOrText::Num(v)
    }
}

fn optional<'de, D: Deserializer<'de>>(d: D, dim: Dimension) -> Result<Option<f64>, D::Error> {
    match Option::<NumOrText>::deserialize(d)? {
        None => Ok(None),
        Some(v) => v.resolve(dim).map(Some).map_err(serde::de::Error::custom),
    }
}

pub(crate) fn plain<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    optional(d, Dimension::Plain)
}

pub(crate) fn time<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    optional(d, Dimension::Time)
}

pub(crate) fn energy<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    optional(d, Dimension::Energy)
}

pub(crate) fn bandwidth<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    optional(d, Dimension::Bandwidth)
}

pub(crate) fn power<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    optional(d, Dimension::Power)
}
