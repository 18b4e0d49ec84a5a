//! The word grammar: letters separated by `.`, inverse suffix `^-1`,
//! identities `id:<vertex>`, and parenthesized powers `(w)^n` which expand
//! textually before letter parsing. The leftmost letter applies last, so
//! `b.a` denotes the composition "first a, then b".

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    Identity(String),
    /// State id and whether the letter carries the `^-1` suffix.
    State(String, bool),
}

/// Expands `(w)^n` groups textually. A negative exponent reverses the inner
/// word and toggles each letter's inverse suffix; `^0` expands to an empty
/// group which is only valid for isotropy words (resolved downstream).
fn expand_powers(text: &str) -> Result<String> {
    let mut out = String::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'(' {
            let mut depth = 1;
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && depth > 0 {
                match bytes[j] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    _ => {}
                }
                j += 1;
            }
            if depth != 0 {
                return Err(Error::Parse("unbalanced parenthesis in word".into()));
            }
            let inner = &text[start..j - 1];
            let inner = expand_powers(inner)?;
            // Expect ^<int> after the group.
            if j >= bytes.len() || bytes[j] != b'^' {
                return Err(Error::Parse("parenthesized group must carry ^<n>".into()));
            }
            let mut k = j + 1;
            if k < bytes.len() && (bytes[k] == b'-' || bytes[k] == b'+') {
                k += 1;
            }
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let n: i64 = text[j + 1..k]
                .parse()
                .map_err(|_| Error::Parse("bad exponent in word".into()))?;
            let unit = if n >= 0 {
                inner.clone()
            } else {
                invert_word_text(&inner)?
            };
            let mut reps = Vec::new();
            for _ in 0..n.unsigned_abs() {
                reps.push(unit.clone());
            }
            let expanded = reps.join(".");
            if !expanded.is_empty() {
                if !out.is_empty() && !out.ends_with('.') {
                    out.push('.');
                }
                out.push_str(&expanded);
            } else {
                // ^0: mark an explicit empty group for the resolver.
                if !out.is_empty() && !out.ends_with('.') {
                    out.push('.');
                }
                out.push_str("()"); // handled below as an error if it survives
            }
            i = k;
            // Swallow a following '.' so joins stay well-formed.
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                if !out.is_empty() && !out.ends_with('.') {
                    out.push('.');
                }
            }
        } else {
            out.push(bytes[i] as char);
            i += 1;
        }
    }
    Ok(out)
}

/// Textual inverse: reverse the letters and toggle each `^-1` suffix.
fn invert_word_text(text: &str) -> Result<String> {
    let letters: Vec<&str> = text.split('.').filter(|s| !s.is_empty()).collect();
    let mut parts = Vec::new();
    for l in letters.iter().rev() {
        if let Some(stripped) = l.strip_suffix("^-1") {
            parts.push(stripped.to_string());
        } else if l.starts_with("id:") {
            parts.push((*l).to_string());
        } else {
            parts.push(format!("{l}^-1"));
        }
    }
    Ok(parts.join("."))
}

pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    let expanded = expand_powers(text)?;
    let mut letters = Vec::new();
    for raw in expanded.split('.') {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if raw == "()" {
            return Err(Error::Parse(
                "power ^0 of a group is only supported as a whole word like (w)^0".into(),
            ));
        }
        if let Some(v) = raw.strip_prefix("id:") {
            let v = v.strip_suffix("^-1").unwrap_or(v); // inverse of identity
            letters.push(Letter::Identity(v.to_string()));
        } else if let Some(id) = raw.strip_suffix("^-1") {
            letters.push(Letter::State(id.to_string(), true));
        } else {
            letters.push(Letter::State(raw.to_string(), false));
        }
    }
    if letters.is_empty() {
        return Err(Error::Parse("word has no letters".into()));
    }
    Ok(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_letters() {
        assert_eq!(
            parse_word("b.a").unwrap(),
            vec![
                Letter::State("b".into(), false),
                Letter::State("a".into(), false)
            ]
        );
        assert_eq!(
            parse_word("id:v").unwrap(),
            vec![Letter::Identity("v".into())]
        );
        assert_eq!(
            parse_word("a^-1").unwrap(),
            vec![Letter::State("a".into(), true)]
        );
    }

    #[test]
    fn powers_expand() {
        assert_eq!(
            parse_word("(b.a)^2").unwrap(),
            parse_word("b.a.b.a").unwrap(),
        );
        assert_eq!(
            parse_word("(b.a)^-1").unwrap(),
            parse_word("a^-1.b^-1").unwrap(),
        );
        assert_eq!(
            parse_word("(b.a)^-2").unwrap(),
            parse_word("a^-1.b^-1.a^-1.b^-1").unwrap(),
        );
        assert_eq!(
            parse_word("(a^-1.b^-1)^-2").unwrap(),
            parse_word("b.a.b.a").unwrap(),
        );
    }

    #[test]
    fn bad_words() {
        assert!(parse_word("(b.a").is_err());
        assert!(parse_word("(b.a)").is_err());
        assert!(parse_word("").is_err());
    }
}
