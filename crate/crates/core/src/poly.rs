//! Sparse multivariate Laurent polynomials over Q.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so polynomials in
//! different numbers of variables combine freely and `zero`/`one` need no
//! variable count.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{q_root, q_to_string, qi, Scalar, Q};

pub type Monomial = Vec<i32>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn exp_at(m: &Monomial, i: usize) -> i32 {
    m.get(i).copied().unwrap_or(0)
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| exp_at(a, i) + exp_at(b, i)).collect())
}

impl Poly {
    pub fn constant(c: Q) -> Self {
        Poly::term(c, Vec::new())
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(m), c);
        }
        Poly { terms }
    }

    /// The variable with index `i` (0-based).
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Poly::term(Q::one(), m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[i32]) -> Q {
        self.terms
            .get(&trim(m.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    fn insert_add(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = exp_at(m, i);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            if m2.len() <= i {
                m2.resize(i + 1, 0);
            }
            m2[i] -= 1;
            out.insert_add(trim(m2), c * qi(e as i64));
        }
        out
    }

    /// Evaluates at `x`; fails on a zero value raised to a negative power.
    pub fn eval<C: Scalar>(&self, x: &[C]) -> Option<C> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = C::from_q(c);
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    t = t * x.get(i)?.powi(e as i64)?;
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Number of variables actually occurring.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Weighted degree of every monomial.
    pub fn weighted_degrees(&self, weights: &[Q]) -> Vec<(Monomial, Q)> {
        self.terms
            .keys()
            .map(|m| {
                let d = m
                    .iter()
                    .enumerate()
                    .fold(Q::zero(), |acc, (i, &e)| acc + &weights[i] * qi(e as i64));
                (m.clone(), d)
            })
            .collect()
    }

    /// Maps a monomial key to a display string with variable names.
    pub fn monomial_string(m: &Monomial, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("x{}", i + 1));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!(
                "({})*{}",
                q_to_string(c),
                Poly::monomial_string(m, names)
            ));
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("w{i}")).collect();
        write!(f, "{}", self.to_string_with(&names))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.insert_add(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.insert_add(m, -c);
        }
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.insert_add(mono_mul(a, b), ca * cb);
            }
        }
        out
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_q(q: &Q) -> Self {
        Poly::constant(q.clone())
    }
    /// Only single terms are units.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(Poly::term(c.recip(), m.iter().map(|e| -e).collect()))
    }
    fn root(&self, k: u32) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if m.iter().any(|e| e % k as i32 != 0) {
            return None;
        }
        let r = q_root(c, k)?;
        Some(Poly::term(r, m.iter().map(|e| e / k as i32).collect()))
    }
    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn laurent_monomial_inverse() {
        let x = Poly::var(1).scale(&q(3, 2));
        let inv = x.try_inv().unwrap();
        assert_eq!(x * inv, Poly::one());
    }

    #[test]
    fn derivative_of_negative_power() {
        let p = Poly::var(0).try_inv().unwrap();
        assert_eq!(p.deriv(0), Poly::term(q(-1, 1), vec![-2]));
    }

    #[test]
    fn eval_with_negative_exponents() {
        let p = Poly::var(0) * Poly::var(1).try_inv().unwrap();
        assert_eq!(p.eval(&[q(3, 1), q(2, 1)]), Some(q(3, 2)));
    }
}
