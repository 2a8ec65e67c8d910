//! Step-token text format and its JSON embedding.
//!
//! A walk is written as comma-separated signed one-based axis tokens:
//! `"+2,+1,+2"` is north, east, north. The empty string is the length-0
//! walk. Text and JSON record steps only, so parsed walks start at the
//! origin.

use serde::{Deserialize, Serialize};

use super::{check_dim, Step, Walk};
use crate::error::{Error, Result};

impl Walk {
    /// Parse the step text format for dimension `d`.
    pub fn parse(text: &str, d: usize) -> Result<Walk> {
        check_dim(d)?;
        let text = text.trim();
        if text.is_empty() {
            return Walk::trivial(d);
        }
        let steps = text
            .split(',')
            .enumerate()
            .map(|(position, token)| parse_token(token.trim(), position, d))
            .collect::<Result<Vec<_>>>()?;
        Walk::from_steps(d, &steps)
    }
}

fn parse_token(token: &str, position: usize, d: usize) -> Result<Step> {
    let malformed = || Error::MalformedToken {
        token: token.to_string(),
        position,
    };
    let (positive, digits) = match token.as_bytes().first() {
        Some(b'+') => (true, &token[1..]),
        Some(b'-') => (false, &token[1..]),
        _ => return Err(malformed()),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let axis: usize = digits.parse().map_err(|_| malformed())?;
    if axis == 0 || axis > d {
        return Err(Error::AxisOutOfRange {
            token: token.to_string(),
            axis,
            dim: d,
        });
    }
    Ok(Step::new(axis - 1, positive))
}

/// JSON form of a walk: `{"d":2,"steps":"+2,+1,+2"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkJson {
    pub d: usize,
    pub steps: String,
}

impl From<&Walk> for WalkJson {
    fn from(w: &Walk) -> Self {
        WalkJson {
            d: w.dim(),
            steps: w.to_string(),
        }
    }
}

impl TryFrom<WalkJson> for Walk {
    type Error = Error;
    fn try_from(j: WalkJson) -> Result<Walk> {
        Walk::parse(&j.steps, j.d)
    }
}

impl Serialize for Walk {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WalkJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Walk {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = WalkJson::deserialize(d)?;
        Walk::try_from(j).map_err(serde::de::Error::custom)
    }
}
