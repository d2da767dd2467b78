//! Parity-tagged truncated Laurent series.
//!
//! A series is either a Laurent polynomial (finite), an expansion at infinity
//! known for exponents `>= lo`, or an expansion at zero known for exponents
//! `<= hi`. Arithmetic tracks the window on which coefficients are exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result, Window};
use crate::scalar::{qi, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn of_exponent(e: i64) -> Parity {
        if e % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn admits(self, e: i64) -> bool {
        match self {
            Parity::Mixed => true,
            p => p == Parity::of_exponent(e),
        }
    }

    fn times(self, o: Parity) -> Parity {
        match (self, o) {
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Mixed => Parity::Mixed,
        }
    }
}

/// Where a series is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Infinity,
    Zero,
    Finite,
}

/// Residue locations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum At {
    Zero,
    Infinity,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Plus,
    Minus,
    Geq(i64),
    Leq(i64),
    Pi,
}

#[derive(Clone)]
pub struct Series<C> {
    parity: Parity,
    coeffs: BTreeMap<i64, C>,
    lo: Option<i64>,
    hi: Option<i64>,
}

/// The parity tag only matters for truncated series.
impl<C: PartialEq> PartialEq for Series<C> {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
            && self.lo == o.lo
            && self.hi == o.hi
            && ((self.lo.is_none() && self.hi.is_none()) || self.parity == o.parity)
    }
}

impl<C: Scalar> Default for Series<C> {
    fn default() -> Self {
        Series::zero()
    }
}

fn infer_parity<'a>(keys: impl Iterator<Item = &'a i64>) -> Parity {
    let mut seen_even = false;
    let mut seen_odd = false;
    for &k in keys {
        if k % 2 == 0 {
            seen_even = true;
        } else {
            seen_odd = true;
        }
    }
    match (seen_even, seen_odd) {
        (_, false) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::Mixed,
    }
}

impl<C: Scalar> Series<C> {
    pub fn zero() -> Self {
        Series {
            parity: Parity::Even,
            coeffs: BTreeMap::new(),
            lo: None,
            hi: None,
        }
    }

    pub fn one() -> Self {
        Series::monomial(C::one(), 0)
    }

    pub fn monomial(c: C, e: i64) -> Self {
        Series::from_terms([(e, c)])
    }

    pub fn constant(c: C) -> Self {
        Series::monomial(c, 0)
    }

    /// A Laurent polynomial; parity is inferred from the support.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            let entry = coeffs.entry(e).or_insert_with(C::zero);
            *entry = entry.clone() + c;
        }
        coeffs.retain(|_, c: &mut C| !c.is_zero());
        let parity = infer_parity(coeffs.keys());
        Series {
            parity,
            coeffs,
            lo: None,
            hi: None,
        }
    }

    /// Builds a series with explicit parity tag and window; coefficients
    /// outside the window are dropped.
    pub fn with_window(
        parity: Parity,
        terms: impl IntoIterator<Item = (i64, C)>,
        window: Window,
    ) -> Result<Self> {
        if window.lo.is_some() && window.hi.is_some() {
            return Err(Error::IncompatibleSides);
        }
        let mut s = Series::from_terms(terms);
        s.coeffs.retain(|e, _| window.contains(*e));
        if s.coeffs.keys().any(|&e| !parity.admits(e)) {
            return Err(Error::ParityViolation);
        }
        s.parity = parity;
        s.lo = window.lo;
        s.hi = window.hi;
        Ok(s)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Parity of the actual support (`Even` for the zero series).
    pub fn support_parity(&self) -> Parity {
        infer_parity(self.coeffs.keys())
    }

    pub fn with_parity(mut self, p: Parity) -> Result<Self> {
        if self.coeffs.keys().any(|&e| !p.admits(e)) {
            return Err(Error::ParityViolation);
        }
        self.parity = p;
        Ok(self)
    }

    pub fn window(&self) -> Window {
        Window {
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn side(&self) -> Side {
        match (self.lo, self.hi) {
            (None, None) => Side::Finite,
            (Some(_), None) => Side::Infinity,
            (None, Some(_)) => Side::Zero,
            (Some(_), Some(_)) => unreachable!("two-sided truncation is never constructed"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.side() == Side::Finite
    }

    /// True if the series is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.is_finite() && self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&i64, &C)> {
        self.coeffs.iter()
    }

    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn bottom(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient of z^e, checked against the trusted window.
    pub fn coeff(&self, e: i64) -> Result<C> {
        if !self.window().contains(e) {
            return Err(Error::UntrustedRegion {
                needed: e,
                window: self.window(),
            });
        }
        Ok(self.coeff_unchecked(e))
    }

    pub fn coeff_unchecked(&self, e: i64) -> C {
        self.coeffs.get(&e).cloned().unwrap_or_else(C::zero)
    }

    /// Largest exponent the true series can carry.
    fn effective_top(&self) -> Option<i64> {
        let known = self.top();
        match self.lo {
            Some(l) => Some(known.map_or(l - 1, |t| t.max(l - 1))),
            None => known,
        }
    }

    /// Smallest exponent the true series can carry.
    fn effective_bottom(&self) -> Option<i64> {
        let known = self.bottom();
        match self.hi {
            Some(h) => Some(known.map_or(h + 1, |b| b.min(h + 1))),
            None => known,
        }
    }

    fn check_sides(&self, o: &Self) -> Result<()> {
        match (self.side(), o.side()) {
            (Side::Infinity, Side::Zero) | (Side::Zero, Side::Infinity) => {
                Err(Error::IncompatibleSides)
            }
            _ => Ok(()),
        }
    }

    fn combine_parity(&self, o: &Self) -> Parity {
        if self.coeffs.is_empty() && self.is_finite() {
            return o.parity;
        }
        if o.coeffs.is_empty() && o.is_finite() {
            return self.parity;
        }
        if self.parity == o.parity {
            self.parity
        } else {
            Parity::Mixed
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_sides(o)?;
        let lo = max_opt(self.lo, o.lo);
        let hi = min_opt(self.hi, o.hi);
        let w = Window { lo, hi };
        let mut coeffs = BTreeMap::new();
        for (&e, c) in self.coeffs.iter().chain(o.coeffs.iter()) {
            if !w.contains(e) {
                continue;
            }
            let entry = coeffs.entry(e).or_insert_with(C::zero);
            *entry = entry.clone() + c.clone();
        }
        coeffs.retain(|_, c: &mut C| !c.is_zero());
        Ok(Series {
            parity: self.combine_parity(o),
            coeffs,
            lo,
            hi,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            parity: self.parity,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() && self.is_finite() {
            return Series {
                parity: self.parity,
                ..Series::zero()
            };
        }
        let mut coeffs: BTreeMap<i64, C> = self
            .coeffs
            .iter()
            .map(|(&e, x)| (e, x.clone() * c.clone()))
            .collect();
        coeffs.retain(|_, x| !x.is_zero());
        Series {
            parity: self.parity,
            coeffs,
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&C::from_q(c))
    }

    /// Multiplies by z^k.
    pub fn shift(&self, k: i64) -> Self {
        let parity = if k % 2 == 0 {
            self.parity
        } else {
            self.parity.flip()
        };
        Series {
            parity,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
            lo: self.lo.map(|l| l + k),
            hi: self.hi.map(|h| h + k),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_sides(o)?;
        let parity = self.parity.times(o.parity);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Ok(Series {
                parity,
                ..Series::zero()
            });
        }
        let mut lo: Option<i64> = None;
        let mut hi: Option<i64> = None;
        if let (Some(l), Some(t)) = (self.lo, o.effective_top()) {
            lo = max_opt(lo, Some(l + t));
        }
        if let (Some(l), Some(t)) = (o.lo, self.effective_top()) {
            lo = max_opt(lo, Some(l + t));
        }
        if let (Some(h), Some(b)) = (self.hi, o.effective_bottom()) {
            hi = min_opt(hi, Some(h + b));
        }
        if let (Some(h), Some(b)) = (o.hi, self.effective_bottom()) {
            hi = min_opt(hi, Some(h + b));
        }
        let w = Window { lo, hi };
        let mut coeffs: BTreeMap<i64, C> = BTreeMap::new();
        let ovec: Vec<(i64, &C)> = o.coeffs.iter().map(|(&e, c)| (e, c)).collect();
        for (&i, a) in &self.coeffs {
            for &(j, b) in &ovec {
                let k = i + j;
                if !w.contains(k) {
                    continue;
                }
                let t = a.clone() * b.clone();
                match coeffs.get_mut(&k) {
                    Some(x) => *x = x.clone() + t,
                    None => {
                        coeffs.insert(k, t);
                    }
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Series {
            parity,
            coeffs,
            lo,
            hi,
        })
    }

    /// Product of several factors.
    pub fn product(factors: &[&Self]) -> Result<Self> {
        let mut acc = Series::one();
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&e, _)| e != 0)
            .map(|(&e, c)| (e - 1, c.clone() * C::from_int(e)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series {
            parity: self.parity.flip(),
            coeffs,
            lo: self.lo.map(|l| l - 1),
            hi: self.hi.map(|h| h - 1),
        }
    }

    /// z → 1/z.
    pub fn reflect(&self) -> Self {
        Series {
            parity: self.parity,
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
            lo: self.hi.map(|h| -h),
            hi: self.lo.map(|l| -l),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut coeffs: BTreeMap<i64, D> = self.coeffs.iter().map(|(&e, c)| (e, f(c))).collect();
        coeffs.retain(|_, c| !c.is_zero());
        Series {
            parity: self.parity,
            coeffs,
            lo: self.lo,
            hi: self.hi,
        }
    }

    /// Restricts to exponents in `[a, b]`.
    fn restrict(&self, a: Option<i64>, b: Option<i64>) -> Self {
        let sel = Window { lo: a, hi: b };
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&e, _)| sel.contains(e))
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        let lo = match (self.lo, a) {
            (Some(l), Some(a)) if a >= l => None,
            (l, _) => l,
        };
        let hi = match (self.hi, b) {
            (Some(h), Some(b)) if b <= h => None,
            (h, _) => h,
        };
        Series {
            parity: self.parity,
            coeffs,
            lo,
            hi,
        }
    }

    pub fn project(&self, sel: Selector) -> Result<Self> {
        let need_lo = |s: i64| -> Result<()> {
            match self.lo {
                Some(l) if l > s => Err(Error::UntrustedRegion {
                    needed: s,
                    window: self.window(),
                }),
                _ => Ok(()),
            }
        };
        let need_hi = |s: i64| -> Result<()> {
            match self.hi {
                Some(h) if h < s => Err(Error::UntrustedRegion {
                    needed: s,
                    window: self.window(),
                }),
                _ => Ok(()),
            }
        };
        match sel {
            Selector::Plus => {
                need_lo(0)?;
                Ok(self.restrict(Some(0), None))
            }
            Selector::Minus => {
                need_hi(-1)?;
                Ok(self.restrict(None, Some(-1)))
            }
            Selector::Geq(s) => {
                need_lo(s)?;
                Ok(self.restrict(Some(s), None))
            }
            Selector::Leq(s) => {
                need_hi(s)?;
                Ok(self.restrict(None, Some(s)))
            }
            Selector::Pi => {
                let p = self.project(Selector::Plus)?;
                let m = self.project(Selector::Minus)?;
                p.sub(&m)
            }
        }
    }

    pub fn plus(&self) -> Result<Self> {
        self.project(Selector::Plus)
    }

    pub fn minus(&self) -> Result<Self> {
        self.project(Selector::Minus)
    }

    pub fn residue(&self, at: At) -> Result<C> {
        match (at, self.side()) {
            (At::Infinity, Side::Zero) | (At::Zero, Side::Infinity) => {
                return Err(Error::IncompatibleSides)
            }
            _ => {}
        }
        let c = self.coeff(-1)?;
        Ok(match at {
            At::Infinity => -c,
            _ => c,
        })
    }

    /// Drops trust below `lo` (for expansions at infinity) to shrink work.
    pub fn truncate_below(&self, lo: i64) -> Self {
        if self.side() == Side::Zero {
            return self.clone();
        }
        let lo = max_opt(self.lo, Some(lo));
        Series {
            parity: self.parity,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&e, _)| lo.is_none_or(|l| e >= l))
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
            lo,
            hi: self.hi,
        }
    }

    /// Drops trust above `hi` (for expansions at zero).
    pub fn truncate_above(&self, hi: i64) -> Self {
        self.reflect().truncate_below(-hi).reflect()
    }

    /// Leading term on the given side: (exponent, coefficient).
    pub fn leading(&self, side: Side) -> Result<(i64, C)> {
        match (side, self.side()) {
            (Side::Infinity, Side::Zero) | (Side::Zero, Side::Infinity) => {
                return Err(Error::IncompatibleSides)
            }
            _ => {}
        }
        let entry = match side {
            Side::Zero => self.coeffs.iter().next(),
            _ => self.coeffs.iter().next_back(),
        };
        let (&e, c) = entry.ok_or(Error::ZeroLeadingTerm)?;
        Ok((e, c.clone()))
    }

    /// `f^α` expanded on `side` (Infinity or Zero) to `depth` exponent steps
    /// beyond the leading term. `leading_root^den(α)` must equal the leading
    /// coefficient; the result has leading coefficient `leading_root^num(α)`.
    pub fn fractional_power(
        &self,
        alpha: &Q,
        leading_root: &C,
        side: Side,
        depth: i64,
    ) -> Result<Self> {
        let (e, c) = self.leading(side)?;
        let ae = alpha * qi(e);
        if !ae.is_integer() {
            return Err(Error::NonIntegerLeadingExponent);
        }
        let ae = ae.to_integer().to_i64().expect("exponent overflow");
        let den = alpha
            .denom()
            .to_u32()
            .expect("exponent denominator overflow");
        let num = alpha.numer().to_i64().expect("exponent numerator overflow");
        if leading_root.pow(den) != c {
            return Err(Error::RootMismatch);
        }
        let lead = leading_root.powi(num).ok_or(Error::ZeroLeadingTerm)?;
        let cinv = c.try_inv().ok_or(Error::ZeroLeadingTerm)?;
        let sign = if side == Side::Zero { 1 } else { -1 };
        let known = match side {
            Side::Zero => self.hi.map(|h| h - e),
            _ => self.lo.map(|l| e - l),
        };
        let d = known.map_or(depth, |k| k.min(depth)).max(0);
        // Normalized tail F_k, k = 1..d.
        let f: Vec<(usize, C)> = (1..=d)
            .filter_map(|k| {
                let x = self.coeff_unchecked(e + sign * k);
                if x.is_zero() {
                    None
                } else {
                    Some((k as usize, x * cinv.clone()))
                }
            })
            .collect();
        let mut g: Vec<C> = vec![C::one()];
        let a1 = alpha + Q::one();
        for k in 1..=d as usize {
            let mut acc = C::zero();
            for (j, fj) in &f {
                if *j > k {
                    break;
                }
                let w = (&a1 * qi(*j as i64) - qi(k as i64)) / qi(k as i64);
                if w.is_zero() || g[k - j].is_zero() {
                    continue;
                }
                acc = acc + (fj.clone() * g[k - j].clone()).scale(&w);
            }
            g.push(acc);
        }
        let terms = g
            .into_iter()
            .enumerate()
            .map(|(k, gk)| (ae + sign * k as i64, gk * lead.clone()));
        let window = match side {
            Side::Zero => Window {
                lo: None,
                hi: Some(ae + d),
            },
            _ => Window {
                lo: Some(ae - d),
                hi: None,
            },
        };
        let parity = if self.parity == Parity::Mixed || self.support_parity() == Parity::Mixed {
            Parity::Mixed
        } else {
            Parity::of_exponent(ae)
        };
        Series::with_window(parity, terms, window)
    }

    /// Integer power; negative powers are expanded on `side`.
    pub fn powi(&self, k: i64, side: Side, depth: i64) -> Result<Self> {
        if k >= 0 {
            let mut acc = Series::one();
            let mut base = self.clone();
            let mut k = k;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul(&base)?;
                }
                k >>= 1;
                if k > 0 {
                    base = base.mul(&base)?;
                }
            }
            return Ok(acc);
        }
        let (_, c) = self.leading(side)?;
        self.fractional_power(&qi(k), &c, side, depth)
    }

    pub fn inv(&self, side: Side, depth: i64) -> Result<Self> {
        self.powi(-1, side, depth)
    }

    /// `self / den` with `den` inverted on `side` to `depth` steps.
    pub fn div(&self, den: &Self, side: Side, depth: i64) -> Result<Self> {
        self.mul(&den.inv(side, depth)?)
    }

    /// Compositional inverse of `f(w) = c·w + …`. On `Side::Infinity` the
    /// corrections have lower exponents, on `Side::Zero` higher ones.
    pub fn compositional_inverse(&self, side: Side, depth: i64) -> Result<Self> {
        match side {
            Side::Zero => self.compinv_zero(depth),
            _ => {
                let (e, _) = self.leading(Side::Infinity)?;
                if e != 1 {
                    return Err(Error::NotNearIdentity(format!("leading exponent {e}")));
                }
                let phi = self.reflect().inv(Side::Zero, depth)?;
                let psi = phi.compinv_zero(depth)?;
                Ok(psi.inv(Side::Zero, depth)?.reflect())
            }
        }
    }

    fn compinv_zero(&self, depth: i64) -> Result<Self> {
        let (e, c) = self.leading(Side::Zero)?;
        if e != 1 {
            return Err(Error::NotNearIdentity(format!("leading exponent {e}")));
        }
        let cinv = c
            .try_inv()
            .ok_or_else(|| Error::NotNearIdentity("leading coefficient not invertible".into()))?;
        let nmax = match self.hi {
            Some(h) => h.min(depth + 1),
            None => depth + 1,
        }
        .max(1) as usize;
        // P(t) = t/φ(t), dense up to t^{nmax-1}.
        let mut phi_t = vec![C::zero(); nmax];
        for (k, slot) in phi_t.iter_mut().enumerate() {
            *slot = self.coeff_unchecked(k as i64 + 1);
        }
        let mut p = vec![C::zero(); nmax];
        p[0] = cinv.clone();
        for k in 1..nmax {
            let mut acc = C::zero();
            for j in 1..=k {
                if !phi_t[j].is_zero() && !p[k - j].is_zero() {
                    acc = acc + phi_t[j].clone() * p[k - j].clone();
                }
            }
            p[k] = -(acc * cinv.clone());
        }
        let mut pn = vec![C::one()];
        pn.resize(nmax, C::zero());
        let mut out = Vec::new();
        for n in 1..=nmax {
            pn = trunc_mul(&pn, &p, nmax);
            let c = pn[n - 1].scale(&Q::new(1.into(), (n as i64).into()));
            out.push((n as i64, c));
        }
        let parity = match self.support_parity() {
            Parity::Odd => Parity::Odd,
            _ => Parity::Mixed,
        };
        let window = Window {
            lo: None,
            hi: Some(nmax as i64),
        };
        Series::with_window(parity, out, window)
    }

    /// Exact quotient of two Laurent polynomials, `None` if `den` does not
    /// divide `self`.
    pub fn exact_div(&self, den: &Self) -> Option<Self> {
        if !self.is_finite() || !den.is_finite() {
            return None;
        }
        let (dt, dc) = den.leading(Side::Infinity).ok()?;
        let db = den.bottom()?;
        let dinv = dc.try_inv()?;
        let Some(floor) = self.bottom().map(|b| b - db) else {
            return Some(Series::zero());
        };
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(rt) = rem.top() {
            let e = rt - dt;
            if e < floor {
                return None;
            }
            let c = rem.coeff_unchecked(rt) * dinv.clone();
            rem = rem.sub(&den.shift(e).scale(&c)).ok()?;
            quot.push((e, c));
        }
        Some(Series::from_terms(quot))
    }

    /// Exact equality on the intersection of the two trusted windows.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let w = Window {
            lo: max_opt(self.lo, o.lo),
            hi: min_opt(self.hi, o.hi),
        };
        self.coeffs
            .keys()
            .chain(o.coeffs.keys())
            .filter(|e| w.contains(**e))
            .all(|&e| self.coeff_unchecked(e) == o.coeff_unchecked(e))
    }

    /// Common window used by `agrees_with`.
    pub fn common_window(&self, o: &Self) -> Window {
        Window {
            lo: max_opt(self.lo, o.lo),
            hi: min_opt(self.hi, o.hi),
        }
    }

    pub fn euler_shift(&self, m: u32) -> Result<Self> {
        // α − (z/2m) α′
        let d = self
            .derivative()
            .shift(1)
            .scale_q(&Q::new(1.into(), (2 * m as i64).into()));
        self.sub(&d)
    }
}

fn trunc_mul<C: Scalar>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Scalar> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})z^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.side() {
            Side::Finite => Ok(()),
            _ => write!(f, " on {}", self.window()),
        }
    }
}

/// Shorthand for a rational Laurent polynomial from `(exponent, num, den)`.
pub fn qseries(terms: &[(i64, i64, i64)]) -> Series<Q> {
    Series::from_terms(terms.iter().map(|&(e, n, d)| (e, crate::scalar::q(n, d))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn projections() {
        let f = qseries(&[(3, 1, 1), (1, 2, 1), (-1, 5, 1)]);
        assert_eq!(f.minus().unwrap(), qseries(&[(-1, 5, 1)]));
        let g = qseries(&[(2, 1, 1), (0, -3, 1), (-2, 4, 1)]);
        assert_eq!(
            g.project(Selector::Pi).unwrap(),
            qseries(&[(2, 1, 1), (0, -3, 1), (-2, -4, 1)])
        );
        let h = qseries(&[(4, 1, 1), (1, 1, 1), (0, 1, 1)]);
        assert_eq!(
            h.project(Selector::Geq(1)).unwrap(),
            qseries(&[(4, 1, 1), (1, 1, 1)])
        );
    }

    #[test]
    fn arithmetic_examples() {
        let a = qseries(&[(1, 1, 1), (-1, 1, 1)]);
        let b = qseries(&[(1, 1, 1), (-1, -1, 1)]);
        assert_eq!(a.mul(&b).unwrap(), qseries(&[(2, 1, 1), (-2, -1, 1)]));
        let f = qseries(&[(4, 1, 1), (-2, 3, 1)]);
        assert_eq!(f.derivative(), qseries(&[(3, 4, 1), (-3, -6, 1)]));
    }

    #[test]
    fn division_at_infinity() {
        let den = qseries(&[(2, 1, 1), (0, 1, 1)]);
        let r = Series::one().div(&den, Side::Infinity, 6).unwrap();
        for (e, c) in [(-2, 1), (-4, -1), (-6, 1), (-8, -1)] {
            assert_eq!(r.coeff(e).unwrap(), qi(c));
        }
        let back = r.mul(&den).unwrap();
        assert!(back.agrees_with(&Series::one()));
        assert!(back.window().lo.unwrap() <= -4);
    }

    #[test]
    fn residues() {
        let f = qseries(&[(1, 1, 1), (-1, 3, 1), (-3, 7, 1)]);
        assert_eq!(f.residue(At::Infinity).unwrap(), qi(-3));
        assert_eq!(qseries(&[(-1, 5, 1)]).residue(At::Circle).unwrap(), qi(5));
        assert_eq!(qseries(&[(-2, 1, 1)]).residue(At::Zero).unwrap(), qi(0));
    }

    #[test]
    fn fractional_powers() {
        let z2 = qseries(&[(2, 1, 1)]);
        let r = z2
            .fractional_power(&q(1, 2), &qi(1), Side::Infinity, 8)
            .unwrap();
        assert!(r.agrees_with(&qseries(&[(1, 1, 1)])));
        let f = qseries(&[(-2, 4, 1)]);
        let r = f.fractional_power(&q(1, 2), &qi(2), Side::Zero, 8).unwrap();
        assert!(r.agrees_with(&qseries(&[(-1, 2, 1)])));
        assert_eq!(
            f.fractional_power(&q(1, 2), &qi(3), Side::Zero, 8),
            Err(Error::RootMismatch)
        );
        let g = qseries(&[(1, 1, 1)]);
        assert_eq!(
            g.fractional_power(&q(1, 2), &qi(1), Side::Infinity, 8),
            Err(Error::NonIntegerLeadingExponent)
        );
    }

    #[test]
    fn compositional_inverse_examples() {
        let t = q(3, 7);
        let f = Series::from_terms([(1, qi(1)), (-1, t.clone())]);
        let g = f.compositional_inverse(Side::Infinity, 10).unwrap();
        assert_eq!(g.coeff(1).unwrap(), qi(1));
        assert_eq!(g.coeff(-1).unwrap(), -t.clone());
        assert_eq!(g.coeff(-3).unwrap(), -(&t * &t));
        let id = qseries(&[(1, 1, 1)])
            .compositional_inverse(Side::Infinity, 8)
            .unwrap();
        assert!(id.agrees_with(&qseries(&[(1, 1, 1)])));
    }
}
