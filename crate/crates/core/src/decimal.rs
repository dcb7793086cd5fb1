//! Decimal rendering of exact ratios.

use num_traits::Zero;

use crate::vocab::Rational;

/// Exact decimal expansion when the ratio terminates (1, 0.9, 0.001),
/// otherwise `numer/denom`.
pub fn exact_decimal(r: Rational) -> String {
    let (n, d) = (*r.numer(), *r.denom());
    let mut rest = d;
    for p in [2u64, 5] {
        while rest % p == 0 {
            rest /= p;
        }
    }
    if rest != 1 {
        return format!("{n}/{d}");
    }
    let int = n / d;
    let mut rem = n % d;
    if rem.is_zero() {
        return int.to_string();
    }
    let mut digits = String::new();
    while rem != 0 {
        rem *= 10;
        digits.push(char::from(b'0' + (rem / d) as u8));
        rem %= d;
    }
    format!("{int}.{digits}")
}

/// Round half up to `places` fractional digits.
pub fn round_decimal(r: Rational, places: u32) -> String {
    let scale = 10u128.pow(places);
    let n = u128::from(*r.numer()) * scale;
    let d = u128::from(*r.denom());
    let scaled = (2 * n + d) / (2 * d);
    if places == 0 {
        return scaled.to_string();
    }
    let int = scaled / scale;
    let frac = scaled % scale;
    format!("{int}.{frac:0width$}", width = places as usize)
}

/// `r` as a percentage rounded half up to `places` digits, without the sign.
pub fn percent(r: Rational, places: u32) -> String {
    round_decimal(r * Rational::from(100), places)
}
