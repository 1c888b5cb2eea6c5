//! Small-rational helpers: the `"a/b"` text form used in reports and on the
//! command line.

use num_rational::Rational64;

/// Formats as `a/b`, always with an explicit denominator.
pub fn to_fraction_string(q: &Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `a`, `a/b` or a finite decimal such as `2.5`. Signs are allowed.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim().replace('\u{2212}', "-");
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().ok()?;
        let b: i64 = b.trim().parse().ok()?;
        return (b != 0).then(|| Rational64::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let negative = int.starts_with('-');
        let whole: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().ok()?,
        };
        let scale = 10i64.pow(frac.len() as u32);
        let num = whole.checked_mul(scale)?.checked_add(frac.parse::<i64>().ok()?)?;
        return Some(Rational64::new(if negative { -num } else { num }, scale));
    }
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

/// `serde(with = ...)` adapter storing a [`Rational64`] as `"a/b"`.
pub mod serde_fraction {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("5/2"), Some(Rational64::new(5, 2)));
        assert_eq!(parse_rational("3"), Some(Rational64::from_integer(3)));
        assert_eq!(parse_rational("2.5"), Some(Rational64::new(5, 2)));
        assert_eq!(parse_rational("-0.25"), Some(Rational64::new(-1, 4)));
        assert_eq!(parse_rational("\u{2212}1/3"), Some(Rational64::new(-1, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(to_fraction_string(&Rational64::from_integer(1)), "1/1");
    }
}
