//! Coefficient rings for Laurent series.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Q = BigRational;

/// Builds the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A commutative ring containing the rationals.
///
/// `try_inv` returns `None` for non-units; `root` returns an exact k-th root
/// when one is available in the ring.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_q(q: &Q) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn root(&self, _k: u32) -> Option<Self> {
        None
    }

    fn from_int(n: i64) -> Self {
        Self::from_q(&qi(n))
    }

    fn scale(&self, c: &Q) -> Self {
        self.clone() * Self::from_q(c)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Integer power, negative exponents through `try_inv`.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            self.try_inv().map(|x| x.pow((-e) as u32))
        }
    }
}

/// Exact k-th root of a big integer, if any.
pub fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of a rational, if any.
pub fn q_root(x: &Q, k: u32) -> Option<Q> {
    let n = int_root(x.numer(), k)?;
    let d = int_root(x.denom(), k)?;
    Some(Q::new(n, d))
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn root(&self, k: u32) -> Option<Self> {
        q_root(self, k)
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_q(q: &Q) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn root(&self, k: u32) -> Option<Self> {
        if *self > 0.0 {
            Some(self.powf(1.0 / k as f64))
        } else if *self < 0.0 && k % 2 == 1 {
            Some(-(-self).powf(1.0 / k as f64))
        } else if *self == 0.0 {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Γ(x)/Γ(p+1+x) = 1/(x(x+1)⋯(x+p)).
pub fn gamma_ratio(x: &Q, p: u32) -> Q {
    let mut den = <Q as One>::one();
    for k in 0..=p {
        den *= x + qi(k as i64);
    }
    den.recip()
}

/// Even double factorial (2p)!!, with (2·0)!! = 1.
pub fn even_double_factorial(p: u32) -> Q {
    let mut acc = <Q as One>::one();
    for k in 1..=p {
        acc *= qi(2 * k as i64);
    }
    acc
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(q_root(&q(16, 81), 4), Some(q(2, 3)));
        assert_eq!(q_root(&q(2, 1), 2), None);
        assert_eq!(q_root(&q(-8, 27), 3), Some(q(-2, 3)));
    }

    #[test]
    fn gamma_ratio_matches_functional_equation() {
        let x = q(1, 2);
        assert_eq!(gamma_ratio(&x, 0), q(2, 1));
        assert_eq!(gamma_ratio(&x, 1), q(4, 3));
        assert_eq!(gamma_ratio(&x, 2), q(8, 15));
    }

    #[test]
    fn double_factorial() {
        assert_eq!(even_double_factorial(0), qi(1));
        assert_eq!(even_double_factorial(3), qi(48));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3/4", "-7", "0", "-12/5"] {
            assert_eq!(q_to_string(&parse_q(s).unwrap()), s);
        }
    }
}
