//! Ordinals below `w^w` in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse ordinal `{text}`: {reason}")]
pub struct OrdinalParseError {
    pub text: String,
    pub reason: String,
}

/// `w^e1*c1 + ... + w^ek*ck` with `e1 > ... > ek` and every `ci >= 1`.
/// The empty sum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn finite(n: u64) -> Self {
        Self::monomial(0, n)
    }

    pub fn omega() -> Self {
        Self::monomial(1, 1)
    }

    /// `w^exponent * coefficient`.
    pub fn monomial(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(exponent, coefficient)] }
        }
    }

    /// Build from (exponent, coefficient) pairs already in normal form.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Option<Self> {
        let ok = terms.iter().all(|&(_, c)| c >= 1) && terms.windows(2).all(|w| w[0].0 > w[1].0);
        ok.then_some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e > 0)
    }

    pub fn successor(&self) -> Self {
        self.add(&Ordinal::finite(1))
    }

    /// Ordinal sum: terms of `self` below the leading exponent of `other`
    /// are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, lead_coeff)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|&(e, _)| e >= lead).collect();
        match terms.last_mut() {
            Some((e, c)) if *e == lead => *c += lead_coeff,
            _ => terms.push((lead, lead_coeff)),
        }
        terms.extend(other.terms.iter().skip(1).copied());
        Ordinal { terms }
    }

    /// `0, 1, .., n-1` as ordinals.
    pub fn first_n(n: u64) -> Vec<Ordinal> {
        (0..n).map(Ordinal::finite).collect()
    }
}

/// Lexicographic comparison of normal forms.
pub fn ord_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (x, y) in a.terms.iter().zip(&b.terms) {
        let c = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
        if c != Ordering::Equal {
            return c;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b)
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        ord_compare(self, other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

fn parse_summand(text: &str, s: &str) -> Result<Ordinal, OrdinalParseError> {
    let err = |reason: &str| OrdinalParseError { text: text.to_string(), reason: reason.to_string() };
    let num = |t: &str| -> Result<u64, OrdinalParseError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(&format!("`{t}` is not a natural number")));
        }
        t.parse().map_err(|_| err("number out of range"))
    };
    let Some(rest) = s.strip_prefix('w') else {
        return Ok(Ordinal::finite(num(s)?));
    };
    let (exp_part, coeff) = match rest.split_once('*') {
        Some((e, c)) => (e, num(c)?),
        None => (rest, 1),
    };
    let exponent = if exp_part.is_empty() {
        1
    } else if let Some(e) = exp_part.strip_prefix('^') {
        u32::try_from(num(e)?).map_err(|_| err("exponent out of range"))?
    } else {
        return Err(err(&format!("unexpected `{exp_part}`")));
    };
    if coeff == 0 {
        return Err(err("coefficient must be positive"));
    }
    Ok(Ordinal::monomial(exponent, coeff))
}

/// Parses `w^k*c + ... + c0`. Sums that are not in normal form are
/// evaluated with ordinal addition.
impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(OrdinalParseError { text: text.to_string(), reason: "empty".into() });
        }
        compact
            .split('+')
            .map(|s| parse_summand(text, s))
            .try_fold(Ordinal::zero(), |acc, s| s.map(|s| acc.add(&s)))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(ord_compare(&o("w"), &o("5")), Ordering::Greater);
        assert_eq!(ord_compare(&o("w*2 + 1"), &o("w*2 + 1")), Ordering::Equal);
        assert_eq!(ord_compare(&o("w^2"), &o("w*9 + 7")), Ordering::Greater);
        assert!(o("0") < o("1"));
        assert!(o("w + 3") < o("w*2"));
    }

    #[test]
    fn additions() {
        assert_eq!(ord_add(&o("1"), &o("w")), o("w"));
        assert_eq!(ord_add(&o("w"), &o("1")).to_string(), "w + 1");
        assert_eq!(ord_add(&o("w + 3"), &o("w*2")), o("w*3"));
        assert_eq!(ord_add(&o("w^2 + w"), &o("w^2*2 + 4")), o("w^2*3 + 4"));
    }

    #[test]
    fn rendering() {
        for s in ["0", "7", "w", "w*2", "w^2", "w^3*4 + w*2 + 1", "w^2 + 5"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("w*2+1"), o("w*2 + 1"));
        assert_eq!(o("1 + w"), o("w"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "w^", "w*0", "x", "w^2*", "3w", "w**2"] {
            assert!(bad.parse::<Ordinal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn limits_and_successors() {
        assert!(o("w*2").is_limit());
        assert!(!o("w*2 + 1").is_limit());
        assert!(o("12").is_finite());
        assert_eq!(o("w").successor(), o("w + 1"));
        assert!(Ordinal::from_terms(vec![(1, 1), (2, 1)]).is_none());
    }
}
