//! Compact decimal expressions for large integers: `982149821766199295999`,
//! `10^1000+4351`, `1e16`, `2^89-1`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse integer expression {input:?}: {reason}")]
pub struct BigExprError {
    pub input: String,
    pub reason: String,
}

const MAX_EXPONENT: u64 = 1_000_000;

fn parse_atom(s: &str) -> Result<BigInt, String> {
    if s.is_empty() {
        return Err("empty term".into());
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a decimal integer"));
    }
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

fn parse_exponent(s: &str) -> Result<usize, String> {
    let e = parse_atom(s)?;
    match e.to_u64() {
        Some(v) if v <= MAX_EXPONENT => Ok(v as usize),
        _ => Err(format!("exponent {s} too large")),
    }
}

fn parse_term(s: &str) -> Result<BigInt, String> {
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m = parse_atom(m)?;
        return Ok(m * num_traits::pow(BigInt::from(10), parse_exponent(e)?));
    }
    if let Some((b, e)) = s.split_once('^') {
        return Ok(num_traits::pow(parse_atom(b)?, parse_exponent(e)?));
    }
    parse_atom(s)
}

/// Parses a sum/difference of terms, each a decimal integer, `a^b` or `aEb`.
pub fn parse_big_int(input: &str) -> Result<BigInt, BigExprError> {
    let err = |reason: String| BigExprError {
        input: input.to_string(),
        reason,
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty input".into()));
    }
    let mut total = BigInt::from(0);
    let mut sign = 1;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        start = 1;
        i = 1;
    }
    loop {
        if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
            let term = parse_term(&s[start..i]).map_err(err)?;
            if sign < 0 {
                total -= term;
            } else {
                total += term;
            }
            if i == bytes.len() {
                break;
            }
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            start = i + 1;
        }
        i += 1;
    }
    Ok(total)
}

/// Like [`parse_big_int`] but rejects negative values.
pub fn parse_big_uint(input: &str) -> Result<num_bigint::BigUint, BigExprError> {
    let v = parse_big_int(input)?;
    if v.is_negative() {
        return Err(BigExprError {
            input: input.to_string(),
            reason: "value is negative".into(),
        });
    }
    Ok(v.magnitude().clone())
}

/// Short human-readable rendering: full digits up to 40, otherwise
/// leading digits and length.
pub fn abbreviate(n: &BigInt) -> String {
    let s = n.to_string();
    if s.len() <= 40 {
        s
    } else {
        format!("{}...{} ({} digits)", &s[..12], &s[s.len() - 8..], s.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn forms() {
        assert_eq!(parse_big_int("31").unwrap(), BigInt::from(31));
        assert_eq!(parse_big_int("1e16").unwrap(), BigInt::from(10u64.pow(16)));
        assert_eq!(parse_big_int("2^10-1").unwrap(), BigInt::from(1023));
        assert_eq!(parse_big_int("-5+2").unwrap(), BigInt::from(-3));
        let p = parse_big_int("10^1000+4351").unwrap();
        assert_eq!(p.to_string().len(), 1001);
        assert!(p.to_string().ends_with("4351"));
        assert_eq!(
            parse_big_int("982149821766199295999").unwrap(),
            BigInt::from_str("982149821766199295999").unwrap()
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "10^", "1e", "2^^3", "1.5", "+", "10^99999999"] {
            assert!(parse_big_int(bad).is_err(), "{bad:?}");
        }
        assert!(parse_big_uint("-1").is_err());
    }
}
