//! Exact rational arithmetic helpers.
//!
//! All quantities in the toolkit (weights, capacities, demands, dual values,
//! flows) are arbitrary-precision rationals in canonical reduced form with a
//! positive denominator. Input literals come in three shapes: integers
//! (`"3"`, `"-2"`), finite decimals (`"0.5"`, which is exactly `1/2`), and
//! explicit fractions (`"7/3"`, denominator required positive).

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Canonical rational type used throughout the toolkit.
pub type Rat = num_rational::BigRational;

/// Error raised when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid rational literal {:?}: {}",
            self.input, self.reason
        )
    }
}

impl core::error::Error for ParseRatError {}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p / q`; panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

fn err(input: &str, reason: &'static str) -> ParseRatError {
    ParseRatError {
        input: input.to_string(),
        reason,
    }
}

fn parse_bigint(s: &str, whole: &str) -> Result<BigInt, ParseRatError> {
    if s.is_empty() {
        return Err(err(whole, "empty numeric part"));
    }
    let (sign, digits) = match s.as_bytes()[0] {
        b'-' => (-1, &s[1..]),
        b'+' => (1, &s[1..]),
        _ => (1, s),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(whole, "expected decimal digits"));
    }
    let mut value = BigInt::zero();
    for b in digits.bytes() {
        value = value * 10 + (b - b'0');
    }
    Ok(if sign < 0 { -value } else { value })
}

/// Parses a rational literal: `"3"`, `"-2"`, `"0.5"`, `".25"`, or `"7/3"`.
///
/// Decimal literals are converted exactly (`"0.5"` becomes `1/2`); fraction
/// literals require a positive denominator.
pub fn parse_rat(input: &str) -> Result<Rat, ParseRatError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(err(input, "empty literal"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let numer = parse_bigint(p, input)?;
        let denom = parse_bigint(q, input)?;
        if !denom.is_positive() {
            return Err(err(input, "denominator must be positive"));
        }
        return Ok(Rat::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(input, "expected digits after decimal point"));
        }
        let negative = int_part.starts_with('-');
        let int_value = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            parse_bigint(int_part, input)?
        };
        let frac_value = parse_bigint(frac_part, input)?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let magnitude = int_value.abs() * &scale + frac_value;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(numer, scale));
    }
    Ok(Rat::from_integer(parse_bigint(s, input)?))
}

/// Canonical string form: `"p"` when the value is an integer, `"p/q"`
/// otherwise (reduced, positive denominator). This is the form every file
/// format in the toolkit emits.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Decimal approximation with `sig` significant digits, for human-facing
/// convenience columns. Not used in any algorithmic path.
pub fn rat_to_decimal(r: &Rat, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let denom = r.denom().clone();
    // exp10 = floor(log10 |r|): scale |numer|/denom into [1, 10).
    let mut exp10: i64 = 0;
    let mut lo = r.numer().abs();
    while lo < denom {
        lo *= 10;
        exp10 -= 1;
    }
    while lo >= denom.clone() * 10 {
        lo /= 10;
        exp10 += 1;
    }
    // Digits of |r| * 10^(sig - 1 - exp10), rounded to nearest.
    let mut scaled = r.numer().abs();
    let mut shift = sig as i64 - 1 - exp10;
    let mut denom_scaled = denom;
    if shift >= 0 {
        scaled *= BigInt::from(10).pow(shift as u32);
    } else {
        denom_scaled *= BigInt::from(10).pow((-shift) as u32);
    }
    // Round to nearest, ties away from zero.
    let (mut digits_int, rem) = num_integer::Integer::div_rem(&scaled, &denom_scaled);
    if &rem * 2 >= denom_scaled {
        digits_int += 1;
        // Rounding may carry into one more digit (e.g. 999.9 -> 1000).
        if digits_int == BigInt::from(10).pow(sig as u32) {
            digits_int /= 10;
            shift -= 1;
        }
    }
    let digit_str = digits_int.to_string();
    let point = digit_str.len() as i64 - shift; // digit count before the decimal point
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(digit_str.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (point as usize) >= digit_str.len() {
        out.push_str(&digit_str);
        for _ in 0..(point as usize - digit_str.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digit_str[..point as usize]);
        let tail = digit_str[point as usize..].trim_end_matches('0');
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
    }
    out
}

/// Exact decimal expansion if the value terminates within `max_digits`
/// fractional digits, `None` otherwise.
pub fn rat_decimal_exact(r: &Rat, max_digits: usize) -> Option<String> {
    let mut denom = r.denom().clone();
    // Terminating iff denom = 2^a * 5^b.
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&denom % &two).is_zero() {
        denom /= &two;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
    }
    if denom != BigInt::from(1) {
        return None;
    }
    let negative = r.is_negative();
    let numer = r.numer().abs();
    let (int_part, mut rem) = num_integer::Integer::div_rem(&numer, r.denom());
    let mut out = String::new();
    if negative && !r.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if rem.is_zero() {
        return Some(out);
    }
    out.push('.');
    for _ in 0..max_digits {
        rem *= 10;
        let (digit, next) = num_integer::Integer::div_rem(&rem, r.denom());
        out.push((b'0' + digit.to_u8().unwrap_or(0)) as char);
        rem = next;
        if rem.is_zero() {
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integer_decimal_and_fraction_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-2").unwrap(), rat_int(-2));
        assert_eq!(parse_rat("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(".25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rat("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "abc", "1/0", "1/-2", "1.2.3", "2.", "--3", "1 / 2"] {
            assert!(parse_rat(bad).is_err(), "accepted {:?}", bad);
        }
    }

    #[test]
    fn canonical_form_is_reduced() {
        assert_eq!(rat_to_string(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(rat_to_string(&parse_rat("0.5").unwrap()), "1/2");
        assert_eq!(rat_to_string(&parse_rat("8/4").unwrap()), "2");
    }

    #[test]
    fn decimal_approximation() {
        assert_eq!(rat_to_decimal(&rat(1, 2), 6), "0.5");
        assert_eq!(rat_to_decimal(&rat(1, 3), 6), "0.333333");
        assert_eq!(rat_to_decimal(&rat(-7, 3), 6), "-2.33333");
        assert_eq!(rat_to_decimal(&rat_int(0), 6), "0");
        assert_eq!(rat_to_decimal(&rat_int(1250), 3), "1250");
    }

    #[test]
    fn exact_expansion_detects_termination() {
        assert_eq!(rat_decimal_exact(&rat(1, 2), 30).as_deref(), Some("0.5"));
        assert_eq!(
            rat_decimal_exact(&rat(-3, 8), 30).as_deref(),
            Some("-0.375")
        );
        assert_eq!(rat_decimal_exact(&rat(5, 1), 30).as_deref(), Some("5"));
        assert_eq!(rat_decimal_exact(&rat(1, 3), 30), None);
    }

    proptest! {
        #[test]
        fn parse_roundtrips_canonical_form(p in -10_000i64..10_000, q in 1i64..500) {
            let value = rat(p, q);
            let text = rat_to_string(&value);
            prop_assert_eq!(parse_rat(&text).unwrap(), value);
        }

        #[test]
        fn decimal_literals_are_exact(n in 0u64..100_000, d in 0usize..6) {
            use alloc::format;
            let text = format!("{}.{:0width$}", n, 7u64, width = d + 1);
            let parsed = parse_rat(&text).unwrap();
            let scale = BigInt::from(10).pow(d as u32 + 1);
            let expected = Rat::new(BigInt::from(n) * &scale + 7, scale);
            prop_assert_eq!(parsed, expected);
        }
    }
}
