//! Points of M_{m,n}, flat coordinates and the Frobenius structure.

mod chart;
mod euler;
mod metric;
mod product;

pub mod diag;

pub use chart::{charge, degree, mu, FlatChart};
pub use euler::{
    euler_apply, euler_field, euler_field_v, g_forward, g_inverse, intersection_cot,
    intersection_kernel_coeff, intersection_tan, intersection_tan_residue, Component,
};
pub use metric::{
    coordinate_covector, coordinate_vector, eta_inverse, eta_map, k_hat_matrix, k_matrix, metric,
    pair, unity_covector,
};
pub use product::{c_closed, c_direct, cot_product, tan_product};

use std::fmt;

use crate::error::{Error, Result};
use num_traits::ToPrimitive;

use crate::scalar::{q, Scalar};
use crate::series::{Parity, Series, Side};

/// Flat coordinate labels t^i, h^j, ĥ^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    T(i64),
    H(u32),
    HHat(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::T(i) => write!(f, "t{i}"),
            Label::H(j) => write!(f, "h{j}"),
            Label::HHat(k) => write!(f, "hh{k}"),
        }
    }
}

impl Label {
    /// All h and ĥ labels for the given (m, n).
    pub fn finite_labels(m: u32, n: u32) -> Vec<Label> {
        (1..=m)
            .map(Label::H)
            .chain((1..=n).map(Label::HHat))
            .collect()
    }

    /// All labels with |i| ≤ t_range.
    pub fn all(m: u32, n: u32, t_range: i64) -> Vec<Label> {
        (-t_range..=t_range)
            .map(Label::T)
            .chain(Label::finite_labels(m, n))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every series is a Laurent polynomial.
    Polynomial,
    /// w, ζ and a are expansions at infinity.
    Truncated,
}

/// A tangent vector (∂a, ∂â).
#[derive(Clone, PartialEq)]
pub struct TangentVec<C> {
    pub xi: Series<C>,
    pub xihat: Series<C>,
}

/// A cotangent vector (ω, ω̂).
#[derive(Clone, PartialEq)]
pub struct CoTangentVec<C> {
    pub om: Series<C>,
    pub omhat: Series<C>,
}

impl<C: Scalar> fmt::Debug for TangentVec<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.xi, self.xihat)
    }
}

impl<C: Scalar> fmt::Debug for CoTangentVec<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.om, self.omhat)
    }
}

impl<C: Scalar> fmt::Debug for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Point")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("mode", &self.mode)
            .field("w", &self.w)
            .field("l", &self.l)
            .finish()
    }
}

impl<C: Scalar> TangentVec<C> {
    pub fn new(xi: Series<C>, xihat: Series<C>) -> Self {
        TangentVec { xi, xihat }
    }

    pub fn zero() -> Self {
        TangentVec::new(Series::zero(), Series::zero())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(TangentVec::new(
            self.xi.add(&o.xi)?,
            self.xihat.add(&o.xihat)?,
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(TangentVec::new(
            self.xi.sub(&o.xi)?,
            self.xihat.sub(&o.xihat)?,
        ))
    }

    pub fn scale(&self, c: &C) -> Self {
        TangentVec::new(self.xi.scale(c), self.xihat.scale(c))
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.xi.agrees_with(&o.xi) && self.xihat.agrees_with(&o.xihat)
    }

    /// ∂ζ = ξ − ξ̂.
    pub fn dzeta(&self) -> Result<Series<C>> {
        self.xi.sub(&self.xihat)
    }

    /// ∂l = ξ₊ + ξ̂₋.
    pub fn dl(&self) -> Result<Series<C>> {
        self.xi.plus()?.add(&self.xihat.minus()?)
    }
}

impl<C: Scalar> CoTangentVec<C> {
    pub fn new(om: Series<C>, omhat: Series<C>) -> Self {
        CoTangentVec { om, omhat }
    }

    pub fn zero() -> Self {
        CoTangentVec::new(
            Series::zero().with_parity(Parity::Odd).unwrap(),
            Series::zero().with_parity(Parity::Odd).unwrap(),
        )
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(CoTangentVec::new(
            self.om.add(&o.om)?,
            self.omhat.add(&o.omhat)?,
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(CoTangentVec::new(
            self.om.sub(&o.om)?,
            self.omhat.sub(&o.omhat)?,
        ))
    }

    pub fn scale(&self, c: &C) -> Self {
        CoTangentVec::new(self.om.scale(c), self.omhat.scale(c))
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.om.agrees_with(&o.om) && self.omhat.agrees_with(&o.omhat)
    }
}

/// A point (a, â) of M_{m,n} with its derived series.
#[derive(Clone)]
pub struct Point<C> {
    m: u32,
    n: u32,
    depth: i64,
    mode: Mode,
    w: Series<C>,
    l: Series<C>,
    zeta: Series<C>,
    a: Series<C>,
    ahat: Series<C>,
    rho: C,
}

pub const DEFAULT_DEPTH: i64 = 16;

fn check_l<C: Scalar>(m: u32, n: u32, l: &Series<C>) -> Result<()> {
    if !l.is_finite() {
        return Err(Error::BadSupport("l must be a Laurent polynomial".into()));
    }
    if l.support_parity() != Parity::Even {
        return Err(Error::ParityViolation);
    }
    let (top, bot) = (2 * m as i64, -2 * n as i64);
    if l.terms().any(|(&e, _)| e > top || e < bot) {
        return Err(Error::BadSupport(format!(
            "l must be supported in [{bot}, {top}]"
        )));
    }
    if l.coeff_unchecked(top) != C::one() {
        return Err(Error::BadLeadingTerm(format!(
            "l must have unit z^{top} coefficient"
        )));
    }
    if l.coeff_unchecked(bot).is_zero() {
        return Err(Error::ZeroBottomCoefficient);
    }
    Ok(())
}

impl<C: Scalar> Point<C> {
    /// Builds the point with a = ζ₋ + l, â = −ζ₊ + l, ζ = w², choosing the
    /// principal 2n-th root of the bottom coefficient of l.
    pub fn from_w_l(m: u32, n: u32, w: Series<C>, l: Series<C>) -> Result<Self> {
        check_l(m, n, &l)?;
        let b = l.coeff_unchecked(-2 * n as i64);
        let rho = b.root(2 * n).ok_or(Error::NoExactRoot)?;
        Point::from_w_l_root(m, n, w, l, rho)
    }

    /// As `from_w_l`, with an explicit root ρ, ρ^{2n} = l_{−2n}.
    pub fn from_w_l_root(m: u32, n: u32, w: Series<C>, l: Series<C>, rho: C) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::BadSupport("m and n must be positive".into()));
        }
        check_l(m, n, &l)?;
        if !w.is_finite() {
            return Err(Error::BadSupport("w must be a Laurent polynomial".into()));
        }
        if w.is_exact_zero() || w.support_parity() != Parity::Odd {
            return Err(Error::BadLeadingTerm("w must be odd".into()));
        }
        let (e, c) = w.leading(Side::Infinity)?;
        if e != 1 || c != C::one() {
            return Err(Error::BadLeadingTerm("w must be z + lower terms".into()));
        }
        if rho.pow(2 * n) != l.coeff_unchecked(-2 * n as i64) {
            return Err(Error::RootMismatch);
        }
        let w = w.with_parity(Parity::Odd)?;
        Point::assemble(m, n, DEFAULT_DEPTH, Mode::Polynomial, w, l, rho)
    }

    /// Accepts raw (a, â) together with a witness w, w² = a − â.
    pub fn from_a_ahat(
        m: u32,
        n: u32,
        a: &Series<C>,
        ahat: &Series<C>,
        w: Series<C>,
    ) -> Result<Self> {
        let zeta = a.sub(ahat)?;
        if w.mul(&w)? != zeta {
            return Err(Error::InconsistentChart("w² differs from a − â".into()));
        }
        let l = a.plus()?.add(&ahat.minus()?)?;
        let pt = Point::from_w_l(m, n, w, l)?;
        if pt.a != *a || pt.ahat != *ahat {
            return Err(Error::BadSupport("a or â outside the coset".into()));
        }
        Ok(pt)
    }

    fn assemble(
        m: u32,
        n: u32,
        depth: i64,
        mode: Mode,
        w: Series<C>,
        l: Series<C>,
        rho: C,
    ) -> Result<Self> {
        let zeta = w.mul(&w)?;
        let a = zeta.minus()?.add(&l)?.with_parity(Parity::Even)?;
        let ahat = zeta.plus()?.neg().add(&l)?.with_parity(Parity::Even)?;
        Ok(Point {
            m,
            n,
            depth,
            mode,
            w,
            l,
            zeta,
            a,
            ahat,
            rho,
        })
    }

    /// Same point with a different expansion depth.
    pub fn with_depth(mut self, depth: i64) -> Self {
        self.depth = depth;
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn depth(&self) -> i64 {
        self.depth
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn w(&self) -> &Series<C> {
        &self.w
    }
    pub fn l(&self) -> &Series<C> {
        &self.l
    }
    pub fn zeta(&self) -> &Series<C> {
        &self.zeta
    }
    pub fn a(&self) -> &Series<C> {
        &self.a
    }
    pub fn ahat(&self) -> &Series<C> {
        &self.ahat
    }
    /// ρ with ρ^{2n} = v̂_{−n}; the leading coefficient of χ̂.
    pub fn rho(&self) -> &C {
        &self.rho
    }

    /// φ = a + â.
    pub fn phi(&self) -> Result<Series<C>> {
        self.a.add(&self.ahat)
    }

    /// Depth for an expansion at infinity whose leading exponent is `lead`,
    /// so that it is trusted down to z^{−K}.
    pub(crate) fn inf_steps(&self, lead: i64) -> i64 {
        lead.max(0) + self.depth + self.pad()
    }

    /// Margin absorbing window loss in products with Laurent polynomials.
    pub(crate) fn pad(&self) -> i64 {
        2 * (self.m + self.n) as i64 + 4
    }

    /// Depth for an expansion at zero with leading exponent `lead`.
    pub(crate) fn zero_steps(&self, lead: i64) -> i64 {
        (-lead).max(0) + self.depth + self.pad()
    }

    /// w^k, at infinity for negative k.
    pub fn w_pow(&self, k: i64) -> Result<Series<C>> {
        if k >= 0 {
            return self.w.powi(k, Side::Infinity, 0);
        }
        self.w.powi(k, Side::Infinity, self.inf_steps(k))
    }

    /// χ^k = l^{k/2m} at infinity.
    pub fn chi_pow(&self, k: i64) -> Result<Series<C>> {
        let alpha = q(k, 2 * self.m as i64);
        self.l
            .fractional_power(&alpha, &C::one(), Side::Infinity, self.inf_steps(k))
    }

    /// χ̂^k = l^{k/2n} at zero, leading coefficient ρ^k.
    pub fn chihat_pow(&self, k: i64) -> Result<Series<C>> {
        let alpha = q(k, 2 * self.n as i64);
        let den = alpha.denom().to_u32().expect("small exponent");
        let root = self.rho.pow(2 * self.n / den);
        self.l
            .fractional_power(&alpha, &root, Side::Zero, self.zero_steps(-k))
    }

    /// χ^k χ′.
    pub fn chi_pow_d(&self, k: i64) -> Result<Series<C>> {
        self.chi_pow(k)?.mul(&self.chi_pow(1)?.derivative())
    }

    /// χ̂^k χ̂′.
    pub fn chihat_pow_d(&self, k: i64) -> Result<Series<C>> {
        self.chihat_pow(k)?.mul(&self.chihat_pow(1)?.derivative())
    }

    /// w^k w′.
    pub fn w_pow_d(&self, k: i64) -> Result<Series<C>> {
        self.w_pow(k)?.mul(&self.w.derivative())
    }

    /// 1/ζ′ at infinity.
    pub fn inv_dzeta(&self, extra: i64) -> Result<Series<C>> {
        self.zeta
            .derivative()
            .inv(Side::Infinity, self.depth + self.pad() + extra)
    }

    /// 1/l′ at infinity or zero.
    pub fn inv_dl(&self, side: Side, extra: i64) -> Result<Series<C>> {
        let dl = self.l.derivative();
        match side {
            Side::Zero => dl.inv(Side::Zero, self.depth + self.pad() + extra),
            _ => dl.inv(Side::Infinity, self.depth + self.pad() + extra),
        }
    }
}
