//! Text form of group ring elements: `"1 - a + 2*b^-1"`.

use std::sync::Arc;

use crate::groups::Group;
use crate::ring::RingDescriptor;
use crate::word::Word;

use super::{GroupRingElement, GroupRingError};

pub(super) fn format_element(x: &GroupRingElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (w, c)) in x.terms().enumerate() {
        let negative = c.reads_negative();
        let mag = if negative {
            c.checked_neg().expect("negatable")
        } else {
            *c
        };
        let body = if w.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            w.to_string()
        } else {
            format!("{mag}*{w}")
        };
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// Splits at top-level `+`/`-` signs, skipping exponent signs and
/// signs inside quaternion parentheses.
fn signed_terms(text: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut depth = 0usize;
    let mut prev: Option<char> = None;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        let is_sign = (c == '+' || c == '-') && depth == 0 && prev != Some('^');
        if is_sign {
            if !current.trim().is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
                negative = false;
            }
            if c == '-' {
                negative = !negative;
            }
        } else {
            current.push(c);
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    terms.push((negative, current));
    terms
}

pub(super) fn parse_element(
    text: &str,
    ring: RingDescriptor,
    group: Arc<Group>,
) -> Result<GroupRingElement, GroupRingError> {
    let bad = || GroupRingError::Parse(text.to_string());
    let m = group.generator_count();
    let mut terms = Vec::new();
    for (negative, term) in signed_terms(text) {
        let term = term.trim();
        if term.is_empty() {
            return Err(bad());
        }
        let (coeff, word) = if let Ok(c) = ring.parse_value(term) {
            (c, Word::identity())
        } else if term.starts_with(|c: char| c.is_ascii_digit() || c == '(') {
            let star = term.find(")*").map(|i| i + 1).or_else(|| term.find('*'));
            let star = star.ok_or_else(bad)?;
            let c = ring.parse_value(&term[..star]).map_err(|_| bad())?;
            let rest = term[star + 1..].trim();
            if rest.is_empty() {
                return Err(bad());
            }
            let w = Word::parse(rest, m).map_err(|_| bad())?;
            (c, w)
        } else {
            (ring.one(), Word::parse(term, m).map_err(|_| bad())?)
        };
        let coeff = if negative { coeff.checked_neg()? } else { coeff };
        terms.push((word, coeff));
    }
    GroupRingElement::from_terms(ring, group, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, GroupSpec};

    #[test]
    fn round_trips() {
        let f2 = make_group(&GroupSpec::Free(2)).unwrap();
        let z = RingDescriptor::Integers;
        for s in ["0", "1 - a + 2*b^-1", "-a", "-3 + a^2b^-1", "a - 2*ab"] {
            let x = parse_element(s, z, f2.clone()).unwrap();
            assert_eq!(format_element(&x), s);
        }
        let q = RingDescriptor::Rationals;
        let x = parse_element("1/2 - 3/4*a", q, f2.clone()).unwrap();
        assert_eq!(format_element(&x), "1/2 - 3/4*a");
        let h = RingDescriptor::Quaternions;
        let x = parse_element("(0,1,-1,0)*a - b", h, f2.clone()).unwrap();
        assert_eq!(format_element(&x), "(0,1,-1,0)*a - b");
    }

    #[test]
    fn rejects_garbage() {
        let f2 = make_group(&GroupSpec::Free(2)).unwrap();
        let z = RingDescriptor::Integers;
        for s in ["", "1 +", "c", "2*", "x*a"] {
            assert!(parse_element(s, z, f2.clone()).is_err(), "{s}");
        }
    }
}
