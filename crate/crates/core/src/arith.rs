//! Small exact-arithmetic helpers shared by the other modules.
//!
//! Public data is carried as `BigInt`/`BigRational`. The enumeration kernels
//! work on `i128` with checked operations; every overflow surfaces as
//! [`Error::Overflow`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_i128(v: &BigInt, what: &'static str) -> Result<i128> {
    v.to_i128().ok_or(Error::Overflow(what))
}

pub fn to_u64(v: &BigInt, what: &'static str) -> Result<u64> {
    v.to_u64().ok_or(Error::Overflow(what))
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(x: &[Rat], u: &[BigInt]) -> Rat {
    x.iter()
        .zip(u)
        .fold(Rat::zero(), |acc, (xi, ui)| acc + xi * rat_int(ui))
}

pub fn norm_sq(u: &[BigInt]) -> BigInt {
    u.iter().map(|x| x * x).sum()
}

pub fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

/// Smallest nonnegative integer `k` with `k^2 > r`.
pub fn least_root_above(r: &Rat) -> BigInt {
    if r.is_negative() {
        return BigInt::zero();
    }
    let fl = r.floor().to_integer();
    fl.sqrt() + 1
}

pub(crate) fn ck_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("integer kernel"))
}

pub(crate) fn ck_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("integer kernel"))
}

pub(crate) fn ck_sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow("integer kernel"))
}

pub(crate) fn ck_dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (x, y)| ck_add(acc, ck_mul(*x, *y)?))
}

pub(crate) fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

pub(crate) fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

pub(crate) fn gcd_i128(values: &[i128]) -> i128 {
    values.iter().fold(0i128, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_root_above_matches_definition() {
        for (n, d) in [(0, 1), (1, 1), (81, 1), (80, 1), (9, 4), (5, 2), (1, 3)] {
            let r = rat(n, d);
            let k = least_root_above(&r);
            assert!(rat_int(&(&k * &k)) > r);
            let km = &k - 1;
            assert!(km < BigInt::zero() || rat_int(&(&km * &km)) <= r);
        }
    }

    #[test]
    fn rounding_divisions() {
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(ceil_div(7, -2), -3);
    }

    #[test]
    fn rational_rendering_keeps_denominator() {
        assert_eq!(fmt_rat(&rat(81, 1)), "81/1");
        assert_eq!(fmt_rat(&rat(2, 4)), "1/2");
        assert_eq!(fmt_rat(&rat(-3, 6)), "-1/2");
    }
}
