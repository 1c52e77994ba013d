//! JSON bba documents.
//!
//! ```json
//! {
//!   "frame": ["a", "b", "c"],
//!   "masses": [
//!     {"set": ["a"], "mass": 0.5},
//!     {"set": ["a", "b", "c"], "mass": 0.5}
//!   ]
//! }
//! ```
//!
//! Output is canonical: entries sorted by ascending mask value, set labels
//! in frame order, reals written with 17 significant digits. Rewriting a
//! written document reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::MassFunction;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BbaDocument {
    frame: Vec<String>,
    masses: Vec<MassEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassEntry {
    set: Vec<String>,
    mass: f64,
}

pub fn parse_bba(text: &str) -> Result<MassFunction> {
    let doc: BbaDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let frame = Arc::new(Frame::new(doc.frame)?);
    let entries = doc
        .masses
        .iter()
        .map(|e| Ok((frame.parse_subset(&e.set)?, e.mass)))
        .collect::<Result<Vec<_>>>()?;
    MassFunction::new(frame, entries)
}

/// Parses a bba against an existing frame; the document's frame must match.
pub fn parse_bba_in(frame: &Arc<Frame>, text: &str) -> Result<MassFunction> {
    let m = parse_bba(text)?;
    if m.frame() != frame.as_ref() {
        return Err(Error::FrameMismatch);
    }
    MassFunction::new(frame.clone(), m.iter())
}

pub fn to_json(m: &MassFunction) -> String {
    let frame = m.frame();
    let mut out = String::from("{\n  \"frame\": [");
    out.push_str(&join_quoted(frame.labels().iter().map(String::as_str)));
    out.push_str("],\n  \"masses\": [");
    for (i, (set, mass)) in m.sorted_entries().into_iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"set\": [{}], \"mass\": {}}}",
            join_quoted(frame.names_of(set).into_iter()),
            format_real(mass)
        );
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn read_bba(path: impl AsRef<Path>) -> Result<MassFunction> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_bba(&text)
}

pub fn write_bba(path: impl AsRef<Path>, m: &MassFunction) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(m)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn join_quoted<'a>(labels: impl Iterator<Item = &'a str>) -> String {
    labels
        .map(|l| serde_json::to_string(l).expect("string serialization cannot fail"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Formats `x` with 17 significant digits, trailing zeros trimmed, like C's
/// `%.17g`. The output is a valid JSON number and parses back to `x`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        // Not representable in JSON; masses are always finite.
        return "null".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-5..17).contains(&exp) {
        let (lead, frac) = digits.split_at(1);
        let frac = frac.trim_end_matches('0');
        return if frac.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{frac}e{exp}")
        };
    }

    let body = if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    };
    format!("{sign}{body}")
}
