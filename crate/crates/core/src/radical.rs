//! Elements of a single radical extension Q(ρ), ρ^d = r.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::scalar::{q_root, Scalar, Q};

/// The defining data of Q(ρ): ρ^degree = radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalField {
    pub degree: u32,
    pub radicand: Q,
}

/// A polynomial in ρ of degree < d with rational coefficients.
///
/// Values built from plain rationals carry no field and adopt the field of
/// whatever they are combined with. Mixing two different fields panics: only
/// one generator is allowed per computation.
#[derive(Clone)]
pub struct Radical {
    field: Option<RadicalField>,
    coeffs: Vec<Q>,
}

impl Radical {
    pub fn rational(x: Q) -> Self {
        Radical {
            field: None,
            coeffs: vec![x],
        }
    }

    /// The generator ρ of Q(ρ), ρ^d = r.
    pub fn generator(degree: u32, radicand: Q) -> Self {
        assert!(degree >= 1 && !radicand.is_zero());
        if degree == 1 {
            return Radical::rational(radicand);
        }
        let mut coeffs = vec![Q::zero(); degree as usize];
        coeffs[1] = Q::one();
        Radical {
            field: Some(RadicalField { degree, radicand }),
            coeffs,
        }
    }

    pub fn from_parts(field: Option<RadicalField>, coeffs: Vec<Q>) -> Self {
        Radical { field, coeffs }.normalized()
    }

    pub fn field(&self) -> Option<&RadicalField> {
        self.field.as_ref()
    }

    /// Coefficients of ρ^0, ρ^1, ….
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Q::zero());
        }
        self
    }

    fn join(a: &Option<RadicalField>, b: &Option<RadicalField>) -> Option<RadicalField> {
        match (a, b) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) => {
                assert_eq!(f, g, "radical values from different extensions");
                Some(f.clone())
            }
        }
    }

    fn get(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// Multiplication matrix columns of `self` acting on Q(ρ).
    fn inverse_in_field(&self, f: &RadicalField) -> Option<Radical> {
        let d = f.degree as usize;
        // Column j is self·ρ^j reduced.
        let mut mat = vec![vec![Q::zero(); d]; d];
        for j in 0..d {
            let mut basis = vec![Q::zero(); d];
            basis[j] = Q::one();
            let e = Radical {
                field: Some(f.clone()),
                coeffs: basis,
            };
            let prod = self.clone() * e;
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = prod.get(i);
            }
        }
        let mut rhs = vec![Q::zero(); d];
        rhs[0] = Q::one();
        let x = solve(mat, rhs)?;
        Some(Radical::from_parts(Some(f.clone()), x))
    }
}

fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.get(i) == other.get(i))
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·ρ")?,
                _ => write!(f, "{c}·ρ^{i}")?,
            }
        }
        if let Some(fl) = &self.field {
            write!(f, " [ρ^{}={}]", fl.degree, fl.radicand)?;
        }
        Ok(())
    }
}

impl Add for Radical {
    type Output = Radical;
    fn add(self, rhs: Radical) -> Radical {
        let field = Radical::join(&self.field, &rhs.field);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.get(i) + rhs.get(i)).collect();
        Radical { field, coeffs }.normalized()
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(self, rhs: Radical) -> Radical {
        self + (-rhs)
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical {
            field: self.field,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        let field = Radical::join(&self.field, &rhs.field);
        let mut prod = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        if let Some(f) = &field {
            let d = f.degree as usize;
            for k in (d..prod.len()).rev() {
                let c = std::mem::replace(&mut prod[k], Q::zero());
                if !c.is_zero() {
                    prod[k - d] += c * &f.radicand;
                }
            }
            prod.truncate(d);
        }
        Radical {
            field,
            coeffs: prod,
        }
        .normalized()
    }
}

impl Scalar for Radical {
    fn zero() -> Self {
        Radical::rational(Q::zero())
    }
    fn one() -> Self {
        Radical::rational(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn from_q(q: &Q) -> Self {
        Radical::rational(q.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        if let Some(x) = self.as_rational() {
            if x.is_zero() {
                return None;
            }
            return Some(Radical {
                field: self.field.clone(),
                coeffs: vec![x.recip()],
            });
        }
        let f = self.field.clone()?;
        self.inverse_in_field(&f)
    }
    /// Rational roots when they exist; otherwise the generator of Q(x^{1/k}),
    /// provided it agrees with the field already in use.
    fn root(&self, k: u32) -> Option<Self> {
        let x = self.as_rational()?;
        if let Some(r) = q_root(&x, k) {
            return Some(Radical {
                field: self.field.clone(),
                coeffs: vec![r],
            });
        }
        if x.is_zero() || (x.is_negative() && k.is_multiple_of(2)) {
            return None;
        }
        let g = Radical::generator(k, x);
        match &self.field {
            None => Some(g),
            Some(f) if Some(f) == g.field.as_ref() => Some(g),
            Some(_) => None,
        }
    }
}
