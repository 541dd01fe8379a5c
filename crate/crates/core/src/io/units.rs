//! Unit-suffixed quantities for config files: `"100um"`, `"10 mm"`, `"1deg"`.
//! Bare numbers are SI.

use serde::de::{self, Deserializer, Visitor};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Angle,
    Any,
}

/// `(suffix, multiplier, divisor)`; metric prefixes divide so that `"100um"` is exactly `1e-4`.
type Unit = (&'static str, f64, f64);

const LENGTH_UNITS: &[Unit] = &[
    ("nm", 1.0, 1e9),
    ("um", 1.0, 1e6),
    ("µm", 1.0, 1e6),
    ("μm", 1.0, 1e6),
    ("mm", 1.0, 1e3),
    ("cm", 1.0, 1e2),
    ("m", 1.0, 1.0),
];

const ANGLE_UNITS: &[Unit] = &[
    ("mrad", 1.0, 1e3),
    ("rad", 1.0, 1.0),
    ("deg", std::f64::consts::PI, 180.0),
    ("°", std::f64::consts::PI, 180.0),
];

/// Parses a number with an optional unit suffix into SI.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && t[i + 1..]
                        .starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` does not start with a number"))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    let tables: &[&[Unit]] = match dim {
        Dimension::Length => &[LENGTH_UNITS],
        Dimension::Angle => &[ANGLE_UNITS],
        Dimension::Any => &[LENGTH_UNITS, ANGLE_UNITS],
    };
    tables
        .iter()
        .flat_map(|t| t.iter())
        .find(|(u, _, _)| *u == unit)
        .map(|(_, mul, div)| value * mul / div)
        .ok_or_else(|| format!("unknown unit `{unit}` in `{text}`"))
}

struct QuantityVisitor(Dimension);

impl<'de> Visitor<'de> for QuantityVisitor {
    type Value = f64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number in SI units or a string with a unit suffix")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        parse_quantity(v, self.0).map_err(E::custom)
    }
}

pub fn length<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    d.deserialize_any(QuantityVisitor(Dimension::Length))
}

pub fn angle<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    d.deserialize_any(QuantityVisitor(Dimension::Angle))
}

pub fn quantity<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    d.deserialize_any(QuantityVisitor(Dimension::Any))
}

pub fn quantity_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    #[derive(serde::Deserialize)]
    struct Q(#[serde(deserialize_with = "quantity")] f64);
    let v: Vec<Q> = serde::Deserialize::deserialize(d)?;
    Ok(v.into_iter().map(|q| q.0).collect())
}
