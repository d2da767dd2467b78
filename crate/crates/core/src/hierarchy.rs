//! Loop-space calculus for the principal two-component BKP hierarchy.
//!
//! A loop point is a `Point<Poly>` whose coefficients are polynomials in
//! the loop variable x, stored as variable 0 of `Poly`.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{mu, CoTangentVec, Label, Point, TangentVec};
use crate::poly::Poly;
use crate::scalar::{even_double_factorial, gamma_ratio, q, qi, Scalar, Q};
use crate::series::{At, Parity, Selector, Series, Side};

pub type LoopSeries = Series<Poly>;
pub type LoopPoint = Point<Poly>;

/// The loop variable x.
pub fn x() -> Poly {
    Poly::var(0)
}

/// Coefficientwise ∂/∂x.
pub fn dx(f: &LoopSeries) -> LoopSeries {
    f.map(|c| c.deriv(0))
}

/// {f, g} = ∂_z f ∂_x g − ∂_z g ∂_x f.
pub fn bracket(f: &LoopSeries, g: &LoopSeries) -> Result<LoopSeries> {
    f.derivative()
        .mul(&dx(g))?
        .sub(&g.derivative().mul(&dx(f))?)
}

/// The constant loop through a point.
pub fn lift(pt: &Point<Q>) -> Result<LoopPoint> {
    let c = |s: &Series<Q>| s.map(|v| Poly::constant(v.clone()));
    Ok(Point::from_w_l_root(
        pt.m(),
        pt.n(),
        c(pt.w()),
        c(pt.l()),
        Poly::constant(pt.rho().clone()),
    )?
    .with_depth(pt.depth()))
}

/// Evaluates every coefficient at x = x0.
pub fn at_x(f: &LoopSeries, x0: &Q) -> Series<Q> {
    f.map(|c| c.eval(std::slice::from_ref(x0)).expect("polynomial in x"))
}

fn s_h(m: u32, j: u32) -> Q {
    q(2 * (m as i64 - j as i64) + 1, 2 * m as i64)
}

fn s_hhat(n: u32, k: u32) -> Q {
    q(2 * (n as i64 - k as i64) + 1, 2 * n as i64)
}

/// a^α at infinity.
pub fn a_power<C: Scalar>(pt: &Point<C>, alpha: &Q) -> Result<Series<C>> {
    let lead = (alpha * qi(2 * pt.m() as i64))
        .to_integer()
        .to_i64()
        .unwrap_or(0);
    pt.a().fractional_power(
        alpha,
        &C::one(),
        Side::Infinity,
        lead.max(0) + pt.depth() + 2 * (pt.m() + pt.n()) as i64 + 4,
    )
}

/// â^α at zero, with leading coefficient a power of ρ.
pub fn ahat_power<C: Scalar>(pt: &Point<C>, alpha: &Q) -> Result<Series<C>> {
    let n = pt.n();
    let den = alpha.denom().to_u32().expect("small exponent");
    if !(2 * n).is_multiple_of(den) {
        return Err(Error::NonIntegerLeadingExponent);
    }
    let root = pt.rho().pow(2 * n / den);
    let lead = (alpha * qi(2 * n as i64))
        .to_integer()
        .to_i64()
        .unwrap_or(0);
    pt.ahat().fractional_power(
        alpha,
        &root,
        Side::Zero,
        lead.max(0) + pt.depth() + 2 * (pt.m() + n) as i64 + 4,
    )
}

/// The function A_{u,p} generating the Lax flow ∂/∂T^{u,p}.
pub fn a_up<C: Scalar>(pt: &Point<C>, u: Label, p: u32) -> Result<Series<C>> {
    let (m, n) = (pt.m(), pt.n());
    match u {
        Label::T(i) => {
            let c = (qi(2 * i + 1) * even_double_factorial(p)).recip();
            let f = pt
                .w_pow(2 * i + 1)?
                .mul(&pt.phi()?.powi(p as i64, Side::Infinity, 0)?)?;
            Ok(f.scale_q(&c))
        }
        Label::H(j) => {
            let s = s_h(m, j);
            let c = gamma_ratio(&s, p) / qi(2 * m as i64);
            Ok(a_power(pt, &(qi(p as i64) + s))?.scale_q(&c))
        }
        Label::HHat(k) => {
            let s = s_hhat(n, k);
            let c = gamma_ratio(&s, p) / qi(2 * n as i64);
            Ok(ahat_power(pt, &(qi(p as i64) + s))?.scale_q(&c))
        }
    }
}

/// θ_{u,p}, the density of the Hamiltonian H_{u,p−1}.
pub fn theta_density<C: Scalar>(pt: &Point<C>, u: Label, p: u32) -> Result<C> {
    let (m, n) = (pt.m(), pt.n());
    match u {
        Label::T(_) => a_up(pt, u, p)?.residue(At::Circle),
        Label::H(j) => {
            let s = s_h(m, j);
            let c = gamma_ratio(&s, p) / qi(2 * m as i64);
            Ok(-a_power(pt, &(qi(p as i64) + s))?
                .residue(At::Infinity)?
                .scale(&c))
        }
        Label::HHat(k) => {
            let s = s_hhat(n, k);
            let c = gamma_ratio(&s, p) / qi(2 * n as i64);
            Ok(ahat_power(pt, &(qi(p as i64) + s))?
                .residue(At::Zero)?
                .scale(&c))
        }
    }
}

fn clip<C: Scalar>(pt: &Point<C>, om: Series<C>, omhat: Series<C>) -> Result<CoTangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    Ok(CoTangentVec::new(
        om.project(Selector::Geq(1 - 2 * m))?
            .with_parity(Parity::Odd)?,
        omhat
            .project(Selector::Leq(2 * n - 1))?
            .with_parity(Parity::Odd)?,
    ))
}

/// Γ(s)/(Γ(p+1+s)), equal to 1 at p = −1.
fn gamma_coef(s: &Q, p: i64) -> Q {
    if p < 0 {
        qi(1)
    } else {
        gamma_ratio(s, p as u32)
    }
}

/// dH_{u,p}, the gradient of ∫θ_{u,p+1} dx, for p ≥ −1. The p = −1
/// gradients are those of the Casimirs of P₁.
pub fn hamiltonian_gradient<C: Scalar>(pt: &Point<C>, u: Label, p: i64) -> Result<CoTangentVec<C>> {
    if p < -1 {
        return Err(Error::BadSupport("gradient index must be ≥ −1".into()));
    }
    let (m, n) = (pt.m(), pt.n());
    match u {
        Label::T(i) => {
            let pp = (p + 1) as u32;
            let c = (qi(2 * i + 1) * even_double_factorial(pp)).recip();
            let phi = pt.phi()?;
            let x = pt
                .w_pow(2 * i - 1)?
                .mul(&phi.powi(pp as i64, Side::Infinity, 0)?)?
                .scale_q(&(q(2 * i + 1, 2) * &c));
            let y = if p >= 0 {
                pt.w_pow(2 * i + 1)?
                    .mul(&phi.powi(p, Side::Infinity, 0)?)?
                    .scale_q(&(qi(pp as i64) * &c))
            } else {
                Series::zero()
            };
            clip(pt, x.add(&y)?, y.sub(&x)?)
        }
        Label::H(j) => {
            let s = s_h(m, j);
            let c = gamma_coef(&s, p) / qi(2 * m as i64);
            clip(pt, a_power(pt, &(qi(p) + s))?.scale_q(&c), Series::zero())
        }
        Label::HHat(k) => {
            let s = s_hhat(n, k);
            let c = gamma_coef(&s, p) / qi(2 * n as i64);
            clip(
                pt,
                Series::zero(),
                ahat_power(pt, &(qi(p) + s))?.scale_q(&c),
            )
        }
    }
}

/// First Poisson operator P₁.
pub fn poisson1(pt: &LoopPoint, w: &CoTangentVec<Poly>) -> Result<TangentVec<Poly>> {
    let (a, ah) = (pt.a(), pt.ahat());
    let b = bracket(a, &w.om)?.add(&bracket(ah, &w.omhat)?)?;
    let s = w.om.add(&w.omhat)?;
    let xi = bracket(a, &s.minus()?)?.sub(&b.minus()?)?;
    let xihat = b.plus()?.sub(&bracket(ah, &s.plus()?)?)?;
    Ok(TangentVec::new(
        xi.with_parity(Parity::Even)?,
        xihat.with_parity(Parity::Even)?,
    ))
}

/// Second Poisson operator P₂.
pub fn poisson2(pt: &LoopPoint, w: &CoTangentVec<Poly>) -> Result<TangentVec<Poly>> {
    let (a, ah) = (pt.a(), pt.ahat());
    let b = bracket(a, &w.om)?.add(&bracket(ah, &w.omhat)?)?;
    let s = a.mul(&w.om)?.add(&ah.mul(&w.omhat)?)?;
    let xi = bracket(a, &s.minus()?)?.sub(&a.mul(&b.minus()?)?)?;
    let xihat = ah.mul(&b.plus()?)?.sub(&bracket(ah, &s.plus()?)?)?;
    Ok(TangentVec::new(
        xi.with_parity(Parity::Even)?,
        xihat.with_parity(Parity::Even)?,
    ))
}

/// (∂a/∂T^{u,p}, ∂â/∂T^{u,p}) = ({−(A)_−, a}, {(A)_+, â}).
pub fn lax_rhs(pt: &LoopPoint, u: Label, p: u32) -> Result<TangentVec<Poly>> {
    let big_a = a_up(pt, u, p)?;
    let xi = bracket(&big_a.minus()?.neg(), pt.a())?;
    let xihat = bracket(&big_a.plus()?, pt.ahat())?;
    Ok(TangentVec::new(
        xi.with_parity(Parity::Even)?,
        xihat.with_parity(Parity::Even)?,
    ))
}

/// Outcome of an identity check between flows.
#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub u: String,
    pub p: u32,
    pub pass: bool,
    pub witness: Option<String>,
}

fn first_mismatch(x: &TangentVec<Poly>, y: &TangentVec<Poly>) -> Option<String> {
    for (name, f, g) in [("ξ", &x.xi, &y.xi), ("ξ̂", &x.xihat, &y.xihat)] {
        if !f.agrees_with(g) {
            let w = f.common_window(g);
            let e = f
                .terms()
                .chain(g.terms())
                .map(|(e, _)| *e)
                .find(|&e| w.contains(e) && f.coeff_unchecked(e) != g.coeff_unchecked(e));
            return Some(format!("{name} differs at z^{}", e.unwrap_or(0)));
        }
    }
    None
}

/// P₁(dH_{u,p}) = (p + 1/2 + μ_u)^{−1} P₂(dH_{u,p−1}) = Lax flow of T^{u,p}.
pub fn recursion_check(pt: &LoopPoint, u: Label, p: u32) -> Result<FlowReport> {
    if p == 0 {
        return Err(Error::BadSupport("recursion needs p ≥ 1".into()));
    }
    let lax = lax_rhs(pt, u, p)?;
    let p1 = poisson1(pt, &hamiltonian_gradient(pt, u, p as i64)?)?;
    let factor = (qi(p as i64) + q(1, 2) + mu(u, pt.m(), pt.n())).recip();
    let p2 =
        poisson2(pt, &hamiltonian_gradient(pt, u, p as i64 - 1)?)?.scale(&Poly::constant(factor));
    let witness = first_mismatch(&p1, &lax)
        .map(|w| format!("P1 vs Lax: {w}"))
        .or_else(|| first_mismatch(&p2, &lax).map(|w| format!("P2 vs Lax: {w}")));
    Ok(FlowReport {
        u: format!("{u:?}"),
        p,
        pass: witness.is_none(),
        witness,
    })
}

/// Time of the dispersionless two-component BKP hierarchy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BkpTime {
    /// s_k, generated by λ = a^{1/2m}.
    S(u32),
    /// ŝ_k, generated by λ̂ = â^{1/2n}.
    SHat(u32),
}

fn check_odd(k: u32) -> Result<()> {
    if k.is_multiple_of(2) {
        return Err(Error::BadSupport(format!("BKP time index {k} must be odd")));
    }
    Ok(())
}

/// λ^k at infinity.
pub fn lambda_pow<C: Scalar>(pt: &Point<C>, k: i64) -> Result<Series<C>> {
    a_power(pt, &q(k, 2 * pt.m() as i64))
}

/// λ̂^k at zero.
pub fn lambdahat_pow<C: Scalar>(pt: &Point<C>, k: i64) -> Result<Series<C>> {
    ahat_power(pt, &q(k, 2 * pt.n() as i64))
}

/// Flow of (a, â) along s_k or ŝ_k.
pub fn bkp_rhs(pt: &LoopPoint, t: BkpTime) -> Result<TangentVec<Poly>> {
    let gen = match t {
        BkpTime::S(k) => {
            check_odd(k)?;
            lambda_pow(pt, k as i64)?.plus()?
        }
        BkpTime::SHat(k) => {
            check_odd(k)?;
            lambdahat_pow(pt, k as i64)?.minus()?.neg()
        }
    };
    Ok(TangentVec::new(
        bracket(&gen, pt.a())?.with_parity(Parity::Even)?,
        bracket(&gen, pt.ahat())?.with_parity(Parity::Even)?,
    ))
}

/// Gradient of H_k (S) or Ĥ_k (SHat).
pub fn bkp_gradient<C: Scalar>(pt: &Point<C>, t: BkpTime) -> Result<CoTangentVec<C>> {
    match t {
        BkpTime::S(k) => clip(
            pt,
            lambda_pow(pt, k as i64 - 2 * pt.m() as i64)?,
            Series::zero(),
        ),
        BkpTime::SHat(k) => clip(
            pt,
            Series::zero(),
            lambdahat_pow(pt, k as i64 - 2 * pt.n() as i64)?,
        ),
    }
}

/// P₂(dH_k) = P₁(dH_{k+2m}) = ∂/∂s_k, and likewise for ŝ_k.
pub fn bkp_biham_check(pt: &LoopPoint, t: BkpTime) -> Result<FlowReport> {
    let (shift, label) = match t {
        BkpTime::S(k) => (BkpTime::S(k + 2 * pt.m()), format!("s_{k}")),
        BkpTime::SHat(k) => (BkpTime::SHat(k + 2 * pt.n()), format!("ŝ_{k}")),
    };
    let flow = bkp_rhs(pt, t)?;
    let p1 = poisson1(pt, &bkp_gradient(pt, shift)?)?;
    let p2 = poisson2(pt, &bkp_gradient(pt, t)?)?;
    let witness = first_mismatch(&p1, &flow)
        .map(|w| format!("P1 vs flow: {w}"))
        .or_else(|| first_mismatch(&p2, &flow).map(|w| format!("P2 vs flow: {w}")));
    Ok(FlowReport {
        u: label,
        p: 0,
        pass: witness.is_none(),
        witness,
    })
}

/// The BKP time matched with T^{u,p}, and the factor c with
/// ∂/∂T^{u,p} = c ∂/∂s.
pub fn bkp_time_of(u: Label, p: u32, m: u32, n: u32) -> Option<(BkpTime, Q)> {
    match u {
        Label::H(j) => {
            let k = 2 * m * p + 2 * m - 2 * j + 1;
            Some((BkpTime::S(k), gamma_ratio(&s_h(m, j), p) / qi(2 * m as i64)))
        }
        Label::HHat(k) => {
            let kk = 2 * n * p + 2 * n - 2 * k + 1;
            Some((
                BkpTime::SHat(kk),
                gamma_ratio(&s_hhat(n, k), p) / qi(2 * n as i64),
            ))
        }
        Label::T(_) => None,
    }
}
