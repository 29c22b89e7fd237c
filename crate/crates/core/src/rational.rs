//! Exact rational time values.
//!
//! Every timestamp, reset point and clock value in the crate is a
//! [`Q`]. Floating point never enters the semantics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Largest integer `<= x`.
pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn floor_i64(x: &Q) -> i64 {
    floor(x).to_i64().expect("time value out of i64 range")
}

/// Fractional part in `[0, 1)`.
pub fn fract(x: &Q) -> Q {
    x - Q::from_integer(floor(x))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn same_fract(a: &Q, b: &Q) -> bool {
    is_integer(&(a - b))
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / q(2)
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

/// Parses `3`, `1/2`, `0.25` or `-2.5`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let bad = || Error::Parse {
        line: 0,
        col: 0,
        msg: format!("bad rational `{s}`"),
    };
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let ip: BigInt = if i.is_empty() || i == "-" {
            BigInt::zero()
        } else {
            i.parse().map_err(|_| bad())?
        };
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let fp: BigInt = f.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), f.len());
        let frac = Q::new(fp, scale);
        let ip = Q::from_integer(ip.abs());
        let v = ip + frac;
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Shortest exact text: integers plain, others as `num/den`.
pub fn fmt_q(x: &Q) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal text when the value has a short terminating expansion, else `num/den`.
pub fn fmt_q_dec(x: &Q) -> String {
    if is_integer(x) {
        return x.numer().to_string();
    }
    let mut d = x.denom().clone();
    for p in [2u32, 5] {
        while (&d % p).is_zero() {
            d /= p;
        }
    }
    if !d.is_one() {
        return fmt_q(x);
    }
    for digits in 1..=12usize {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = x * Q::from_integer(scale.clone());
        if is_integer(&scaled) {
            let n = scaled.to_integer();
            let neg = n.is_negative();
            let n = n.abs();
            let ip = &n / &scale;
            let fp = &n % &scale;
            let fs = format!("{:0>width$}", fp.to_string(), width = digits);
            return format!("{}{}.{}", if neg { "-" } else { "" }, ip, fs);
        }
    }
    fmt_q(x)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("1/2").unwrap(), qf(1, 2));
        assert_eq!(parse_q("0.25").unwrap(), qf(1, 4));
        assert_eq!(parse_q("3.7").unwrap(), qf(37, 10));
        assert_eq!(parse_q("-2.5").unwrap(), qf(-5, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn floor_and_fract_of_negatives() {
        assert_eq!(floor(&qf(-36, 10)), BigInt::from(-4));
        assert_eq!(fract(&qf(-36, 10)), qf(4, 10));
        assert!(same_fract(&qf(34, 10), &qf(-36, 10)));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(fmt_q_dec(&qf(37, 10)), "3.7");
        assert_eq!(fmt_q_dec(&qf(1, 3)), "1/3");
        assert_eq!(fmt_q_dec(&qf(-1, 4)), "-0.25");
    }
}
