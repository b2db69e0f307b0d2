use std::fmt;
use std::sync::LazyLock;

use chrono::{NaiveDate, NaiveTime};
use regex::Regex;
use serde::{Deserialize, Serialize};

/// Datatype inferred for a literal from its lexical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiteralType {
    Text,
    #[serde(rename = "URL")]
    Url,
    Integer,
    Float,
    Boolean,
    Date,
    DateTime,
    Time,
    Duration,
    Undetermined,
}

impl LiteralType {
    /// The schema.org datatype name, or `None` for [`LiteralType::Undetermined`].
    pub fn datatype_name(self) -> Option<&'static str> {
        Some(match self {
            LiteralType::Text => "Text",
            LiteralType::Url => "URL",
            LiteralType::Integer => "Integer",
            LiteralType::Float => "Float",
            LiteralType::Boolean => "Boolean",
            LiteralType::Date => "Date",
            LiteralType::DateTime => "DateTime",
            LiteralType::Time => "Time",
            LiteralType::Duration => "Duration",
            LiteralType::Undetermined => return None,
        })
    }
}

impl fmt::Display for LiteralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.datatype_name().unwrap_or("Undetermined"))
    }
}

static DATE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\d{4})-(\d{2})-(\d{2})$").unwrap());
static TIME: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(\d{2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?(?:Z|[+-]\d{2}(?::?\d{2})?)?$").unwrap());
static INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[+-]?\d+$").unwrap());
static FLOAT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?$").unwrap());
static DURATION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^P(?:(\d+(?:\.\d+)?)Y)?(?:(\d+(?:\.\d+)?)M)?(?:(\d+(?:\.\d+)?)W)?(?:(\d+(?:\.\d+)?)D)?(T(?:(\d+(?:\.\d+)?)H)?(?:(\d+(?:\.\d+)?)M)?(?:(\d+(?:\.\d+)?)S)?)?$").unwrap()
});

pub(crate) fn parse_iso_date(s: &str) -> Option<NaiveDate> {
    let caps = DATE.captures(s)?;
    NaiveDate::from_ymd_opt(caps[1].parse().ok()?, caps[2].parse().ok()?, caps[3].parse().ok()?)
}

fn is_time(s: &str) -> bool {
    let Some(caps) = TIME.captures(s) else {
        return false;
    };
    let hour: u32 = caps[1].parse().unwrap_or(99);
    let minute: u32 = caps[2].parse().unwrap_or(99);
    let second: u32 = caps.get(3).map_or(Some(0), |m| m.as_str().parse().ok()).unwrap_or(99);
    NaiveTime::from_hms_opt(hour, minute, second).is_some()
}

fn is_date_time(s: &str) -> bool {
    match s.split_once(['T', 't']) {
        Some((date, time)) => parse_iso_date(date).is_some() && is_time(time),
        None => false,
    }
}

fn is_duration(s: &str) -> bool {
    let Some(caps) = DURATION.captures(s) else {
        return false;
    };
    let date_part = (1..=4).any(|i| caps.get(i).is_some());
    let time_part = (6..=8).any(|i| caps.get(i).is_some());
    // `T` must be followed by at least one component.
    let dangling_t = caps.get(5).is_some() && !time_part;
    (date_part || time_part) && !dangling_t
}

fn is_web_url(s: &str) -> bool {
    url::Url::parse(s).map(|u| matches!(u.scheme(), "http" | "https") && u.has_host()).unwrap_or(false)
}

/// Classifies a raw literal by its lexical form. Only the empty string is
/// [`LiteralType::Undetermined`]; surrounding whitespace is ignored for
/// classification.
pub fn classify_literal(raw: &str) -> LiteralType {
    if raw.is_empty() {
        return LiteralType::Undetermined;
    }
    let s = raw.trim();
    if parse_iso_date(s).is_some() {
        LiteralType::Date
    } else if is_date_time(s) {
        LiteralType::DateTime
    } else if is_time(s) {
        LiteralType::Time
    } else if s.starts_with('P') && is_duration(s) {
        LiteralType::Duration
    } else if s == "true" || s == "false" {
        LiteralType::Boolean
    } else if INTEGER.is_match(s) {
        LiteralType::Integer
    } else if FLOAT.is_match(s) {
        LiteralType::Float
    } else if is_web_url(s) {
        LiteralType::Url
    } else {
        LiteralType::Text
    }
}
