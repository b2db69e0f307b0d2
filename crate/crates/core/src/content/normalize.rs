//! Normal forms shared by page extraction and value scoring.

use std::sync::OnceLock;

use chrono::NaiveDate;
use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use url::{Position, Url};

/// Reading of `D/M/YYYY` style dates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DateOrder {
    #[default]
    DayFirst,
    MonthFirst,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DecimalSeparator {
    #[default]
    Point,
    Comma,
}

/// Compatibility-normalized, lowercased tokens split on anything that is
/// not alphanumeric.
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized: String = text.nfkc().flat_map(char::to_lowercase).collect();
    normalized.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_owned).collect()
}

/// Lowercase scheme and host, no fragment, no trailing slash; the query
/// is kept. Relative inputs are resolved against `base` when given.
pub fn normalize_url(raw: &str, base: Option<&Url>) -> Option<String> {
    let raw = raw.trim();
    let url = match base {
        Some(base) => base.join(raw).ok()?,
        None => Url::parse(raw).ok()?,
    };
    if !matches!(url.scheme(), "http" | "https") || url.host_str().is_none() {
        return None;
    }
    let mut out = url[..Position::AfterPath].trim_end_matches('/').to_owned();
    if let Some(query) = url.query() {
        out.push('?');
        out.push_str(query);
    }
    Some(out)
}

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

fn month_number(name: &str) -> Option<u32> {
    let name = name.trim_end_matches('.').to_lowercase();
    if name.len() < 3 {
        return None;
    }
    MONTHS
        .iter()
        .position(|m| *m == name || (name.len() == 3 && m.starts_with(&name)) || (name == "sept" && *m == "september"))
        .map(|i| i as u32 + 1)
}

fn date_regexes() -> &'static [Regex; 4] {
    static RE: OnceLock<[Regex; 4]> = OnceLock::new();
    RE.get_or_init(|| {
        [
            Regex::new(r"\b(\d{4})-(\d{2})-(\d{2})\b").unwrap(),
            Regex::new(r"\b(\d{1,2})\.(\d{1,2})\.(\d{4})\b").unwrap(),
            Regex::new(r"\b(\d{1,2})/(\d{1,2})/(\d{4})\b").unwrap(),
            Regex::new(r"(?i)\b([a-z]{3,9}\.?)\s+(\d{1,2})(?:st|nd|rd|th)?,?\s+(\d{4})\b").unwrap(),
        ]
    })
}

fn ymd(y: &str, m: &str, d: &str) -> Option<NaiveDate> {
    NaiveDate::from_ymd_opt(y.parse().ok()?, m.parse().ok()?, d.parse().ok()?)
}

/// Calendar dates written in `text`: ISO `YYYY-MM-DD`, `D.M.YYYY`,
/// `D/M/YYYY` (or `M/D/YYYY`), and `Month D, YYYY` with English names.
pub fn scan_dates(text: &str, order: DateOrder) -> Vec<NaiveDate> {
    let [iso, dotted, slashed, named] = date_regexes();
    let mut out = Vec::new();
    out.extend(iso.captures_iter(text).filter_map(|c| ymd(&c[1], &c[2], &c[3])));
    out.extend(dotted.captures_iter(text).filter_map(|c| ymd(&c[3], &c[2], &c[1])));
    out.extend(slashed.captures_iter(text).filter_map(|c| match order {
        DateOrder::DayFirst => ymd(&c[3], &c[2], &c[1]),
        DateOrder::MonthFirst => ymd(&c[3], &c[1], &c[2]),
    }));
    out.extend(named.captures_iter(text).filter_map(|c| {
        let month = month_number(&c[1])?;
        NaiveDate::from_ymd_opt(c[3].parse().ok()?, month, c[2].parse().ok()?)
    }));
    out
}

fn number_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[-+]?\d(?:[\d.,]*\d)?").unwrap())
}

/// Every numeral in `text`, normalized with [`normalize_number`].
pub fn scan_numbers(text: &str, decimal: DecimalSeparator) -> Vec<String> {
    number_regex().find_iter(text).filter_map(|m| normalize_number(m.as_str(), decimal)).collect()
}

/// Canonical decimal form: currency symbols, whitespace and thousands
/// separators removed, `.` as decimal point, no redundant zeros.
///
/// The other separator is read as a decimal mark when unambiguous: it
/// occurs once, the configured one does not occur, and it is not followed
/// by exactly three digits.
pub fn normalize_number(raw: &str, decimal: DecimalSeparator) -> Option<String> {
    let cleaned: String = raw.chars().filter(|c| !c.is_whitespace() && !is_currency_symbol(*c) && *c != '\'').collect();
    let (sign, body) = match cleaned.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", cleaned.strip_prefix('+').unwrap_or(&cleaned)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
        return None;
    }
    let (mark, other) = match decimal {
        DecimalSeparator::Point => ('.', ','),
        DecimalSeparator::Comma => (',', '.'),
    };
    let marks = body.matches(mark).count();
    let others = body.matches(other).count();
    let (decimal_mark, grouping) = if marks == 0 && others == 1 && body.split(other).nth(1).map(str::len) != Some(3) {
        (other, mark)
    } else {
        (mark, other)
    };
    if body.matches(decimal_mark).count() > 1 {
        return None;
    }
    let body: String = body.chars().filter(|c| *c != grouping).collect();
    let (int_part, frac_part) = body.split_once(decimal_mark).unwrap_or((&body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let int_part = int_part.trim_start_matches('0');
    let frac_part = frac_part.trim_end_matches('0');
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    let mut out = String::new();
    if !(int_part == "0" && frac_part.is_empty()) {
        out.push_str(sign);
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    Some(out)
}

fn is_currency_symbol(c: char) -> bool {
    matches!(
        c,
        '$' | '€'
            | '£'
            | '¥'
            | '₹'
            | '₽'
            | '₩'
            | '₺'
            | '₪'
            | '₫'
            | '฿'
            | '¢'
            | '₴'
            | '₦'
            | '₱'
            | '₲'
            | '₡'
    )
}

/// Splits an enumeration member name at case boundaries:
/// `InStoreOnly` → `In Store Only`.
pub fn split_camel_case(name: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = name.chars().collect();
    for (i, c) in chars.iter().enumerate() {
        if i > 0 && c.is_uppercase() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                out.push(' ');
            }
        }
        out.push(*c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let tokens = tokenize("Hotel Alpenhof-Zillertal, ﬁne Ｆügen!");
        assert_eq!(tokens, ["hotel", "alpenhof", "zillertal", "fine", "fügen"]);
        assert_eq!(tokenize(" ,; ").len(), 0);
    }

    #[test]
    fn urls() {
        let base = Url::parse("https://x.example/a/b.html").unwrap();
        assert_eq!(normalize_url("/offers", Some(&base)).unwrap(), "https://x.example/offers");
        assert_eq!(normalize_url("HTTPS://WWW.Example.com/x/#top", None).unwrap(), "https://www.example.com/x");
        assert_eq!(normalize_url("https://example.com/", None).unwrap(), "https://example.com");
        assert_eq!(normalize_url("https://example.com/p/?q=1#f", None).unwrap(), "https://example.com/p?q=1");
        assert_eq!(normalize_url("mailto:a@b.c", None), None);
        assert_eq!(normalize_url("relative", None), None);
    }

    #[test]
    fn dates() {
        let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).unwrap();
        let text = "On 2020-05-01, 3.4.2021 and 02/03/2022; also March 7, 2023 and Sept. 9th 2024. Not 31.02.2020.";
        assert_eq!(
            scan_dates(text, DateOrder::DayFirst),
            [d(2020, 5, 1), d(2021, 4, 3), d(2022, 3, 2), d(2023, 3, 7), d(2024, 9, 9)]
        );
        assert_eq!(scan_dates("02/03/2022", DateOrder::MonthFirst), [d(2022, 2, 3)]);
        assert!(scan_dates("Mayday 5, 2020", DateOrder::DayFirst).is_empty());
    }

    #[test]
    fn numbers() {
        let point = |s| normalize_number(s, DecimalSeparator::Point);
        assert_eq!(point("12.50").as_deref(), Some("12.5"));
        assert_eq!(point("€ 1,299.00").as_deref(), Some("1299"));
        assert_eq!(point("12,50").as_deref(), Some("12.5"));
        assert_eq!(point("1,234").as_deref(), Some("1234"));
        assert_eq!(point("007").as_deref(), Some("7"));
        assert_eq!(point("-0.0").as_deref(), Some("0"));
        assert_eq!(point("1.2.3"), None);
        let comma = |s| normalize_number(s, DecimalSeparator::Comma);
        assert_eq!(comma("1.299,00 €").as_deref(), Some("1299"));
        assert_eq!(comma("4.5").as_deref(), Some("4.5"));
        assert_eq!(comma("1.500").as_deref(), Some("1500"));
        assert_eq!(scan_numbers("Price: $1,299.00, rating 4.5/5.", DecimalSeparator::Point), ["1299", "4.5", "5"]);
    }

    #[test]
    fn camel_case() {
        assert_eq!(split_camel_case("InStoreOnly"), "In Store Only");
        assert_eq!(split_camel_case("EventScheduled"), "Event Scheduled");
        assert_eq!(split_camel_case("HTMLDocument"), "HTML Document");
    }
}
