//! First-order dual numbers `v + ε·d`, ε² = 0.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Scalar, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Dual<C> {
    pub v: C,
    pub d: C,
}

impl<C: Scalar> Dual<C> {
    pub fn new(v: C, d: C) -> Self {
        Dual { v, d }
    }

    pub fn constant(v: C) -> Self {
        Dual { v, d: C::zero() }
    }

    pub fn variable(v: C) -> Self {
        Dual { v, d: C::one() }
    }
}

impl<C: Scalar> Add for Dual<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl<C: Scalar> Sub for Dual<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl<C: Scalar> Neg for Dual<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.d)
    }
}

impl<C: Scalar> Mul for Dual<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.v.clone() * o.d + self.d * o.v.clone();
        Dual::new(self.v * o.v, d)
    }
}

impl<C: Scalar> Scalar for Dual<C> {
    fn zero() -> Self {
        Dual::constant(C::zero())
    }
    fn one() -> Self {
        Dual::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.is_zero()
    }
    fn from_q(q: &Q) -> Self {
        Dual::constant(C::from_q(q))
    }
    fn try_inv(&self) -> Option<Self> {
        let iv = self.v.try_inv()?;
        let d = -(self.d.clone() * iv.clone() * iv.clone());
        Some(Dual::new(iv, d))
    }
    fn root(&self, k: u32) -> Option<Self> {
        let r = self.v.root(k)?;
        if self.d.is_zero() {
            return Some(Dual::constant(r));
        }
        let denom = (r.pow(k - 1) * C::from_int(k as i64)).try_inv()?;
        Some(Dual::new(r, self.d.clone() * denom))
    }
    fn scale(&self, c: &Q) -> Self {
        Dual::new(self.v.scale(c), self.d.scale(c))
    }
}
