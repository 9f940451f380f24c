use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Accepts "num/den" or a bare integer.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Canonical "num/den", lowest terms, positive denominator.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub(crate) fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap_or(0)
}

/// Image in Z/p, or None when p divides the denominator.
pub fn to_mod_p(x: &Q, p: u64) -> Option<u64> {
    let d = big_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    let n = big_mod(x.numer(), p);
    Some(mul_mod(n, inv_mod(d, p), p))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62 in decreasing order.
pub(crate) fn large_primes() -> impl Iterator<Item = u64> {
    (0..).map(|i| (1u64 << 62) - 1 - 2 * i).filter(|&n| is_prime(n))
}

/// r/s ≡ a (mod m) with |r|, |s| ≤ √(m/2), if one exists.
pub(crate) fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Q::new(r1, t1))
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// The rational with least denominator in the closed interval [lo, hi].
pub fn simplest_between(lo: &Q, hi: &Q) -> Q {
    debug_assert!(lo <= hi);
    let fl = floor(lo);
    let fq = Q::from_integer(fl.clone());
    if &fq == lo {
        return fq;
    }
    let up = Q::from_integer(fl.clone() + 1);
    if &up <= hi {
        // smallest-magnitude integer in the interval
        if lo.is_negative() && hi.is_positive() {
            return Q::zero();
        }
        if hi.is_negative() || hi.is_zero() {
            return Q::from_integer(floor(hi));
        }
        return up;
    }
    let inner = simplest_between(&(Q::one() / (hi - &fq)), &(Q::one() / (lo - &fq)));
    fq + Q::one() / inner
}
