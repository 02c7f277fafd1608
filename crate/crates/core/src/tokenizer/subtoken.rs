use super::stemmer::porter2;

/// Sub-tokens shorter than this are glued onto a neighbour.
pub const MIN_SUBTOKEN_LEN: usize = 3;
/// Sub-tokens longer than this are stemmed.
pub const STEM_MIN_LEN: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Upper,
    Lower,
    Digit,
    Separator,
}

fn class(c: char) -> Class {
    if c.is_uppercase() {
        Class::Upper
    } else if c.is_ascii_digit() || c.is_numeric() {
        Class::Digit
    } else if c.is_alphabetic() {
        Class::Lower
    } else {
        Class::Separator
    }
}

/// Splits an identifier on snake and camel case boundaries and lowercases the parts.
///
/// Boundaries are underscores (and any other non-alphanumeric character), a lowercase
/// letter or digit followed by an uppercase letter, and the last capital of an uppercase
/// run that is followed by a lowercase letter (`HTTPServer` -> `http`, `server`). Digits
/// stay with the segment before them.
pub fn split_subtokens(token: &str) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    let mut parts = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let cls = class(c);
        if cls == Class::Separator {
            if !current.is_empty() {
                parts.push(std::mem::take(&mut current));
            }
            continue;
        }
        if cls == Class::Upper && !current.is_empty() {
            let prev = class(chars[i - 1]);
            let next_lower = chars.get(i + 1).is_some_and(|&n| class(n) == Class::Lower);
            let boundary = matches!(prev, Class::Lower | Class::Digit) || (prev == Class::Upper && next_lower);
            if boundary {
                parts.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        parts.push(current);
    }
    parts
}

/// Glues sub-tokens shorter than three characters onto the preceding long sub-token, or the
/// following one when nothing long precedes them. If every part is short they collapse into
/// one.
pub fn merge_short(subtokens: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(subtokens.len());
    let mut leading = String::new();
    for part in subtokens {
        if part.chars().count() >= MIN_SUBTOKEN_LEN {
            let mut merged = std::mem::take(&mut leading);
            merged.push_str(part);
            out.push(merged);
        } else if let Some(last) = out.last_mut() {
            last.push_str(part);
        } else {
            leading.push_str(part);
        }
    }
    if out.is_empty() && !leading.is_empty() {
        out.push(leading);
    }
    out
}

/// Stems sub-tokens longer than six characters; shorter ones pass through.
pub fn stem(subtoken: &str) -> String {
    if subtoken.chars().count() > STEM_MIN_LEN {
        porter2(subtoken)
    } else {
        subtoken.to_string()
    }
}

/// Full per-identifier pipeline: split, merge, stem.
pub fn subtokenize(token: &str) -> Vec<String> {
    merge_short(&split_subtokens(token)).iter().map(|s| stem(s)).collect()
}
