//! Line-oriented parser for sister-city listing pages.
//!
//! The accepted grammar is deliberately small:
//!
//! * `== City ==` / `=== City ===` headings set the source city; the page's
//!   scope label supplies its country.
//! * `* [[Partner]], Country` and `* [[Partner|Display]], Country` list items
//!   yield one pairing each. When no country text follows the link, a
//!   `City, Country` link target is used as fallback.
//!
//! Everything else is ignored, except template/table markup and malformed
//! list items, which are reported as per-line warnings rather than dropped
//! silently.

use std::fmt;

use crate::ingest::{PairingOrigin, RawPairing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarningKind {
    UnbalancedBrackets,
    MissingCountry,
    MissingLink,
    ItemOutsideSection,
    OutOfGrammar,
}

/// A line the parser could not turn into a pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub text: String,
    pub kind: ParseWarningKind,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = match self.kind {
            ParseWarningKind::UnbalancedBrackets => "unbalanced link brackets",
            ParseWarningKind::MissingCountry => "no partner country and no resolvable link target",
            ParseWarningKind::MissingLink => "list item has no [[...]] link",
            ParseWarningKind::ItemOutsideSection => "list item before any city heading",
            ParseWarningKind::OutOfGrammar => "template or table markup is out of grammar",
        };
        write!(f, "line {}: {} ({:?})", self.line, reason, self.text)
    }
}

#[derive(Debug, Default)]
pub struct ParsedListing {
    pub pairings: Vec<RawPairing>,
    pub warnings: Vec<ParseWarning>,
}

/// Parse one wikitext page; `page_scope` is the country (or region) label the
/// page covers and becomes the source country of every pairing.
pub fn parse_wikitext_listing(page_text: &str, page_scope: &str) -> ParsedListing {
    let mut out = ParsedListing::default();
    let mut current_city: Option<String> = None;

    for (i, raw_line) in page_text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(heading) = parse_heading(line) {
            current_city = Some(heading);
            continue;
        }
        if line.starts_with("{{") || line.starts_with("{|") {
            out.warnings.push(ParseWarning {
                line: line_no,
                text: raw_line.to_string(),
                kind: ParseWarningKind::OutOfGrammar,
            });
            continue;
        }
        if let Some(item) = line.strip_prefix('*') {
            let warn = |kind| ParseWarning {
                line: line_no,
                text: raw_line.to_string(),
                kind,
            };
            let Some(source_city) = current_city.as_deref() else {
                out.warnings.push(warn(ParseWarningKind::ItemOutsideSection));
                continue;
            };
            match parse_list_item(item.trim_start_matches('*').trim()) {
                Ok((city, country)) => {
                    match RawPairing::new(
                        source_city,
                        page_scope,
                        &city,
                        &country,
                        PairingOrigin::Wikitext,
                    ) {
                        Ok(pairing) if pairing.source() != pairing.target() => {
                            out.pairings.push(pairing)
                        }
                        // A city twinned with itself is a parse artifact here.
                        Ok(_) => out.warnings.push(warn(ParseWarningKind::MissingCountry)),
                        Err(_) => out.warnings.push(warn(ParseWarningKind::MissingCountry)),
                    }
                }
                Err(kind) => out.warnings.push(warn(kind)),
            }
        }
        // Prose and other markup is outside the grammar and skipped quietly.
    }
    out
}

/// `== City ==` or `=== City ===`; other heading depths are out of grammar
/// and ignored like prose.
fn parse_heading(line: &str) -> Option<String> {
    let leading = line.chars().take_while(|&c| c == '=').count();
    if !(2..=3).contains(&leading) {
        return None;
    }
    let trailing = line.chars().rev().take_while(|&c| c == '=').count();
    if trailing != leading {
        return None;
    }
    let title = line[leading..line.len() - trailing].trim();
    (!title.is_empty()).then(|| title.to_string())
}

/// Parse the body of a list item (after the leading `*`) into
/// (partner city, partner country).
fn parse_list_item(item: &str) -> Result<(String, String), ParseWarningKind> {
    let Some(open) = item.find("[[") else {
        return Err(if item.contains("]]") {
            ParseWarningKind::UnbalancedBrackets
        } else {
            ParseWarningKind::MissingLink
        });
    };
    let after_open = &item[open + 2..];
    let Some(close) = after_open.find("]]") else {
        return Err(ParseWarningKind::UnbalancedBrackets);
    };
    let link = &after_open[..close];
    if link.contains("[[") {
        return Err(ParseWarningKind::UnbalancedBrackets);
    }
    // [[Target|Display]] -> identity comes from the link target.
    let target = link.split('|').next().unwrap_or("").trim();
    if target.is_empty() {
        return Err(ParseWarningKind::MissingLink);
    }

    let tail = after_open[close + 2..]
        .trim_start()
        .trim_start_matches(',')
        .trim();
    let tail_country = extract_country(tail);

    if let Some(country) = tail_country {
        // Strip a redundant ", Country" disambiguator from the link target.
        let city = match target.rsplit_once(',') {
            Some((head, suffix))
                if suffix.trim().eq_ignore_ascii_case(&country) && !head.trim().is_empty() =>
            {
                head.trim().to_string()
            }
            _ => target.to_string(),
        };
        return Ok((city, country));
    }

    // No country text after the link: fall back to a "City, Country" target.
    if let Some((city, country)) = target.rsplit_once(',') {
        let (city, country) = (city.trim(), country.trim());
        if !city.is_empty() && !country.is_empty() {
            return Ok((city.to_string(), country.to_string()));
        }
    }
    Err(ParseWarningKind::MissingCountry)
}

/// Pull a country name out of the text following the link. Accepts plain
/// text or a single `[[...]]` wikilink; anything else is unusable.
fn extract_country(tail: &str) -> Option<String> {
    if tail.is_empty() {
        return None;
    }
    if tail.contains("{{") {
        return None;
    }
    if let Some(rest) = tail.strip_prefix("[[") {
        let inner = rest.find("]]").map(|close| &rest[..close])?;
        let name = inner.split('|').next().unwrap_or("").trim();
        return (!name.is_empty()).then(|| name.to_string());
    }
    if tail.contains("[[") || tail.contains("]]") {
        return None;
    }
    let name = tail.trim();
    (!name.is_empty()).then(|| name.to_string())
}
