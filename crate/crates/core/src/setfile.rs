//! Plain-text set files: one non-negative decimal integer per line, strictly
//! ascending, `#` comment lines ignored, trailing newline optional.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::intset::IntSet;

pub fn parse_set(text: &str) -> Result<IntSet> {
    let mut set = IntSet::new();
    let mut last: Option<usize> = None;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(set);
    }
    for (idx, raw) in body.split('\n').enumerate() {
        let line = idx + 1;
        let entry = raw.strip_suffix('\r').unwrap_or(raw);
        if entry.starts_with('#') {
            continue;
        }
        if entry.is_empty() || !entry.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse {
                line,
                message: format!("expected a non-negative decimal integer, found {entry:?}"),
            });
        }
        let value: usize = entry.parse().map_err(|_| Error::Parse {
            line,
            message: format!("integer out of range: {entry}"),
        })?;
        if value > crate::intset::MAX_ELEMENT {
            return Err(Error::Parse {
                line,
                message: format!("{value} exceeds the largest supported element"),
            });
        }
        if let Some(prev) = last {
            if value <= prev {
                return Err(Error::Parse {
                    line,
                    message: format!("{value} does not exceed the previous entry {prev}"),
                });
            }
        }
        last = Some(value);
        set.insert(value);
    }
    Ok(set)
}

pub fn format_set(set: &IntSet) -> String {
    let mut out = String::new();
    for x in set {
        writeln!(out, "{x}").unwrap();
    }
    out
}
