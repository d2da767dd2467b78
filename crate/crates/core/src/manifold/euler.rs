use super::{cot_product, pair, CoTangentVec, Point, TangentVec};
use crate::error::{Error, Result};
use crate::scalar::{q, Scalar};
use crate::series::{At, Parity, Selector, Series, Side};

/// Which of the two series a, â.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    A,
    AHat,
}

/// E(α) = α − (z/2m)α′.
pub fn euler_apply<C: Scalar>(pt: &Point<C>, which: Component) -> Result<Series<C>> {
    match which {
        Component::A => pt.a().euler_shift(pt.m()),
        Component::AHat => pt.ahat().euler_shift(pt.m()),
    }
}

/// The Euler field as (E(a), E(â)).
pub fn euler_field<C: Scalar>(pt: &Point<C>) -> Result<TangentVec<C>> {
    Ok(TangentVec::new(
        euler_apply(pt, Component::A)?,
        euler_apply(pt, Component::AHat)?,
    ))
}

/// The Euler field from its expression in the coordinates v_i, v̂_j.
pub fn euler_field_v<C: Scalar>(pt: &Point<C>) -> Result<TangentVec<C>> {
    let m = pt.m() as i64;
    let a = pt.a();
    let xi = Series::with_window(
        Parity::Even,
        a.terms()
            .filter(|(&e, _)| e <= 2 * m - 2)
            .map(|(&e, c)| {
                let i = (e + 2) / 2;
                (e, c.scale(&q(m + 1 - i, m)))
            })
            .collect::<Vec<_>>(),
        a.window(),
    )?;
    let ahat = pt.ahat();
    let xihat = Series::with_window(
        Parity::Even,
        ahat.terms()
            .map(|(&e, c)| (e, c.scale(&q(m - e / 2, m))))
            .collect::<Vec<_>>(),
        ahat.window(),
    )?;
    Ok(TangentVec::new(xi, xihat))
}

/// The intersection form (ω₁, ω₂)* = ⟨ω₁·ω₂, E⟩.
pub fn intersection_cot<C: Scalar>(
    pt: &Point<C>,
    o1: &CoTangentVec<C>,
    o2: &CoTangentVec<C>,
) -> Result<C> {
    pair(&cot_product(pt, o1, o2)?, &euler_field(pt)?)
}

/// The map g: T* → T with ⟨ω₁, g(ω₂)⟩ = (ω₁, ω₂)*.
pub fn g_forward<C: Scalar>(pt: &Point<C>, om: &CoTangentVec<C>) -> Result<TangentVec<C>> {
    let (a, ah) = (pt.a(), pt.ahat());
    let (da, dah) = (a.derivative(), ah.derivative());
    let x = a.mul(&om.om)?.add(&ah.mul(&om.omhat)?)?;
    let y = da.mul(&om.om)?.add(&dah.mul(&om.omhat)?)?;
    let xi = da.mul(&x.minus()?)?.sub(&a.mul(&y.minus()?)?)?;
    let xihat = dah.mul(&x.plus()?)?.neg().add(&ah.mul(&y.plus()?)?)?;
    Ok(TangentVec::new(
        xi.with_parity(Parity::Even)?,
        xihat.with_parity(Parity::Even)?,
    ))
}

/// D = a â′ − a′ â.
fn wronskian<C: Scalar>(pt: &Point<C>) -> Result<Series<C>> {
    let (a, ah) = (pt.a(), pt.ahat());
    let d = a.mul(&ah.derivative())?.sub(&a.derivative().mul(ah)?)?;
    if d.is_exact_zero() {
        return Err(Error::DegeneratePoint("a â′ − a′ â vanishes".into()));
    }
    Ok(d)
}

/// Q = (â ξ − a ξ̂)/(a â′ − a′ â), which is a Laurent polynomial for
/// every ξ in the image of g on a polynomial point.
fn g_quotient<C: Scalar>(pt: &Point<C>, xi: &TangentVec<C>) -> Result<Series<C>> {
    let d = wronskian(pt)?;
    let num = pt.ahat().mul(&xi.xi)?.sub(&pt.a().mul(&xi.xihat)?)?;
    if num.is_exact_zero() {
        return Ok(Series::zero());
    }
    num.exact_div(&d)
        .ok_or_else(|| Error::CircleQuotient("a â′ − a′ â does not divide the numerator".into()))
}

/// g⁻¹: T → T*.
pub fn g_inverse<C: Scalar>(pt: &Point<C>, xi: &TangentVec<C>) -> Result<CoTangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    let qt = g_quotient(pt, xi)?;
    let qp = qt.plus()?;
    let qm = qt.minus()?;
    let extra_inf = qp.top().unwrap_or(0).max(0) + 2 * m;
    let inv_a = pt
        .a()
        .inv(Side::Infinity, pt.depth() + pt.pad() + extra_inf)?;
    let om = inv_a.mul(&qp)?.project(Selector::Geq(1 - 2 * m))?;
    let extra_zero = (-qm.bottom().unwrap_or(0)).max(0) + 2 * n;
    let inv_ah = pt
        .ahat()
        .inv(Side::Zero, pt.depth() + pt.pad() + extra_zero)?;
    let omhat = inv_ah.mul(&qm)?.project(Selector::Leq(2 * n - 1))?.neg();
    Ok(CoTangentVec::new(
        om.with_parity(Parity::Odd)?,
        omhat.with_parity(Parity::Odd)?,
    ))
}

/// (ξ₁, ξ₂) = ⟨g⁻¹ξ₁, ξ₂⟩.
pub fn intersection_tan<C: Scalar>(
    pt: &Point<C>,
    x1: &TangentVec<C>,
    x2: &TangentVec<C>,
) -> Result<C> {
    pair(&g_inverse(pt, x1)?, x2)
}

/// (ξ₁, ξ₂) as −res ∂₁log(a/â)·∂₂log(a/â)/∂_z log(a/â), using
/// ∂log(a/â) = Q·D/(a â) and D/(a â) = â′/â − a′/a.
pub fn intersection_tan_residue<C: Scalar>(
    pt: &Point<C>,
    x1: &TangentVec<C>,
    x2: &TangentVec<C>,
) -> Result<C> {
    let qq = g_quotient(pt, x1)?.mul(&g_quotient(pt, x2)?)?;
    if qq.is_exact_zero() {
        return Ok(C::zero());
    }
    let up = qq.top().unwrap_or(0).max(0) + 2;
    let down = (-qq.bottom().unwrap_or(0)).max(0) + 2;
    let la = pt
        .a()
        .derivative()
        .div(pt.a(), Side::Infinity, pt.depth() + pt.pad() + up)?;
    let lah = pt
        .ahat()
        .derivative()
        .div(pt.ahat(), Side::Zero, pt.depth() + pt.pad() + down)?;
    let r0 = qq.mul(&lah)?.residue(At::Circle)?;
    let r1 = qq.mul(&la)?.residue(At::Circle)?;
    Ok(r0 - r1)
}

/// (dv_i, dv_k)* read off from the generating kernel
/// (q a′(q) a(p) − p a′(p) a(q))/(q² − p²), as the coefficient of
/// p^{2i−2} q^{2k−2}.
pub fn intersection_kernel_coeff<C: Scalar>(pt: &Point<C>, i: i64, k: i64) -> Result<C> {
    let a = pt.a();
    if !a.is_finite() {
        return Err(Error::CircleQuotient(
            "a is not a Laurent polynomial".into(),
        ));
    }
    let (ep, eq) = (2 * i - 2, 2 * k - 2);
    let terms: Vec<(i64, C)> = a.terms().map(|(&e, c)| (e, c.clone())).collect();
    let mut acc = C::zero();
    for (r, ar) in &terms {
        for (s, as_) in &terms {
            if r <= s {
                continue;
            }
            let d = (r - s) / 2;
            // p^{s + 2(d−1−u)} q^{s + 2u}
            let u2 = eq - s;
            if u2 < 0 || u2 % 2 != 0 {
                continue;
            }
            let u = u2 / 2;
            if u > d - 1 || ep != s + 2 * (d - 1 - u) {
                continue;
            }
            acc = acc + (ar.clone() * as_.clone()).scale(&q(r - s, 1));
        }
    }
    Ok(acc)
}
