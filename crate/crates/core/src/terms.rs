//! Helpers for schema.org term names.

const SCHEMA_PREFIXES: [&str; 3] = ["http://schema.org/", "https://schema.org/", "schema:"];

/// Strips a schema.org namespace prefix, if any. Names without a known
/// prefix are returned unchanged.
pub fn strip_schema_prefix(name: &str) -> &str {
    SCHEMA_PREFIXES.iter().find_map(|prefix| name.strip_prefix(prefix)).unwrap_or(name)
}

/// Returns the bare term name when `name` carries a schema.org prefix.
pub fn schema_term(name: &str) -> Option<&str> {
    SCHEMA_PREFIXES.iter().find_map(|prefix| name.strip_prefix(prefix))
}
