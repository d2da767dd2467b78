use super::{
    coordinate_vector, eta_inverse, eta_map, metric, CoTangentVec, Label, Point, TangentVec,
};
use crate::error::Result;
use crate::scalar::{q, Scalar};
use crate::series::{At, Parity, Selector, Series, Side};

/// Product on the cotangent space.
pub fn cot_product<C: Scalar>(
    pt: &Point<C>,
    o1: &CoTangentVec<C>,
    o2: &CoTangentVec<C>,
) -> Result<CoTangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    let da = pt.a().derivative();
    let dah = pt.ahat().derivative();
    let w1a = o1.om.mul(&da)?;
    let w2a = o2.om.mul(&da)?;
    let h1a = o1.omhat.mul(&dah)?;
    let h2a = o2.omhat.mul(&dah)?;
    let first = o2
        .om
        .mul(&w1a.plus()?)?
        .sub(&o2.om.mul(&h1a.minus()?)?)?
        .sub(&o1.om.mul(&w2a.minus()?)?)?
        .sub(&o1.om.mul(&h2a.minus()?)?)?
        .project(Selector::Geq(1 - 2 * m))?;
    let second = o2
        .omhat
        .mul(&w1a.plus()?)?
        .add(&o2.omhat.mul(&h1a.plus()?)?)?
        .add(&o1.omhat.mul(&w2a.plus()?)?)?
        .sub(&o1.omhat.mul(&h2a.minus()?)?)?
        .project(Selector::Leq(2 * n - 1))?;
    Ok(CoTangentVec::new(
        first.with_parity(Parity::Odd)?,
        second.with_parity(Parity::Odd)?,
    ))
}

/// ξ₁·ξ₂ = η(η⁻¹ξ₁ · η⁻¹ξ₂).
pub fn tan_product<C: Scalar>(
    pt: &Point<C>,
    x1: &TangentVec<C>,
    x2: &TangentVec<C>,
) -> Result<TangentVec<C>> {
    let o1 = eta_inverse(pt, x1)?;
    let o2 = eta_inverse(pt, x2)?;
    eta_map(pt, &cot_product(pt, &o1, &o2)?)
}

/// c(∂u, ∂v, ∂s) = ⟨∂u·∂v, ∂s⟩.
pub fn c_direct<C: Scalar>(pt: &Point<C>, u: Label, v: Label, s: Label) -> Result<C> {
    let xu = coordinate_vector(pt, u)?;
    let xv = coordinate_vector(pt, v)?;
    let xs = coordinate_vector(pt, s)?;
    metric(pt, &tan_product(pt, &xu, &xv)?, &xs)
}

fn rank(u: &Label) -> u8 {
    match u {
        Label::T(_) => 0,
        Label::H(_) => 1,
        Label::HHat(_) => 2,
    }
}

fn pi<C: Scalar>(f: &Series<C>) -> Result<Series<C>> {
    f.project(Selector::Pi)
}

fn res<C: Scalar>(f: &Series<C>) -> Result<C> {
    f.residue(At::Circle)
}

/// c(∂u, ∂v, ∂s) from the closed residue formulas.
pub fn c_closed<C: Scalar>(pt: &Point<C>, u: Label, v: Label, s: Label) -> Result<C> {
    let mut ls = [u, v, s];
    ls.sort_by_key(rank);
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    let wd = |k: i64| pt.w_pow_d(k);
    let cd = |k: i64| pt.chi_pow_d(k);
    let hd = |k: i64| pt.chihat_pow_d(k);
    let half = C::from_q(&q(1, 2));
    use Label::*;
    match ls {
        [T(i1), T(i2), T(i3)] => {
            let dw = pt.w().derivative();
            let sum = 2 * (i1 + i2 + i3 - 1);
            let mut br = pt.w_pow(2 * i1 + 2 * i2 - 1)?.mul(&pi(&wd(2 * i3)?)?)?;
            br = br.add(&pt.w_pow(2 * i1 + 2 * i3 - 1)?.mul(&pi(&wd(2 * i2)?)?)?)?;
            br = br.add(&pt.w_pow(2 * i2 + 2 * i3 - 1)?.mul(&pi(&wd(2 * i1)?)?)?)?;
            br = br.sub(&pt.w_pow(sum)?.mul(&pi(&wd(1)?)?)?)?;
            let first = res(&dw.mul(&br)?)?;
            let second = res(&pt.l().derivative().mul(&wd(sum)?)?)?;
            Ok(-(first + second).scale(&q(1, 4)))
        }
        [T(i1), T(i2), H(j)] => {
            let f = wd(2 * i1 + 2 * i2 - 1)?.minus()?;
            let g = cd(2 * m - 2 * j as i64)?.plus()?;
            Ok(-res(&f.mul(&g)?)? * half)
        }
        [T(i1), T(i2), HHat(k)] => {
            let f = wd(2 * i1 + 2 * i2 - 1)?.plus()?;
            let g = hd(2 * n - 2 * k as i64)?.minus()?;
            Ok(res(&f.mul(&g)?)? * half)
        }
        [T(i), H(j1), H(j2)] => {
            let f = cd(2 * m - 2 * (j1 + j2) as i64 + 1)?.plus()?;
            let g = wd(2 * i)?.minus()?;
            Ok(-res(&f.mul(&g)?)?.scale(&q(1, 2 * m)))
        }
        [H(j1), H(j2), HHat(k)] => {
            let f = cd(2 * m - 2 * (j1 + j2) as i64 + 1)?.plus()?;
            let g = hd(2 * n - 2 * k as i64)?.minus()?;
            Ok(-res(&f.mul(&g)?)?.scale(&q(1, 2 * m)))
        }
        [T(i), HHat(k1), HHat(k2)] => {
            let f = hd(2 * n - 2 * (k1 + k2) as i64 + 1)?.minus()?;
            let g = wd(2 * i)?.plus()?;
            Ok(-res(&f.mul(&g)?)?.scale(&q(1, 2 * n)))
        }
        [H(j), HHat(k1), HHat(k2)] => {
            let f = hd(2 * n - 2 * (k1 + k2) as i64 + 1)?.minus()?;
            let g = cd(2 * m - 2 * j as i64)?.plus()?;
            Ok(-res(&f.mul(&g)?)?.scale(&q(1, 2 * n)))
        }
        [H(j1), H(j2), H(j3)] => {
            let f = wd(1)?.minus()?;
            let g = cd(2 * m - 2 * (j1 + j2 + j3) as i64 + 2)?.plus()?;
            let first = res(&f.mul(&g)?)?.scale(&q(1, 2 * m * m));
            let mut p = Series::one();
            for j in [j1, j2, j3] {
                p = p.mul(&cd(2 * m - 2 * j as i64)?.plus()?)?;
            }
            let extra = p.top().unwrap_or(0).max(0);
            let r = p
                .mul(&pt.inv_dl(Side::Infinity, extra)?)?
                .residue(At::Infinity)?;
            Ok(-first - r)
        }
        [HHat(k1), HHat(k2), HHat(k3)] => {
            let f = wd(1)?.plus()?;
            let g = hd(2 * n - 2 * (k1 + k2 + k3) as i64 + 2)?.minus()?;
            let first = res(&f.mul(&g)?)?.scale(&q(1, 2 * n * n));
            let mut p = Series::one();
            for k in [k1, k2, k3] {
                p = p.mul(&hd(2 * n - 2 * k as i64)?.minus()?)?;
            }
            let extra = (-p.bottom().unwrap_or(0)).max(0);
            let r = p.mul(&pt.inv_dl(Side::Zero, extra)?)?.residue(At::Zero)?;
            Ok(first + r)
        }
        [T(_), H(_), HHat(_)] => Ok(C::zero()),
        _ => unreachable!("labels sorted by family"),
    }
}
