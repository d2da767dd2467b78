use super::{CoTangentVec, Label, Point, TangentVec};
use crate::error::{Error, Result};
use crate::scalar::{q, Scalar};
use crate::series::{At, Parity, Selector, Series, Side};

/// ∂/∂u as the pair (∂a, ∂â).
pub fn coordinate_vector<C: Scalar>(pt: &Point<C>, u: Label) -> Result<TangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    match u {
        Label::T(i) => {
            // ∂ζ = −w^{2i} w′, ∂l = 0.
            let dz = pt.w_pow_d(2 * i)?.neg();
            Ok(TangentVec::new(dz.minus()?, dz.plus()?.neg()))
        }
        Label::H(j) => {
            let k = 2 * m - 2 * j as i64;
            let dl = pt.chi_pow_d(k)?.plus()?;
            Ok(TangentVec::new(dl.clone(), dl))
        }
        Label::HHat(k) => {
            let e = 2 * n - 2 * k as i64;
            let dl = pt.chihat_pow_d(e)?.minus()?.neg();
            Ok(TangentVec::new(dl.clone(), dl))
        }
    }
}

/// du as the pair (ω, ω̂).
pub fn coordinate_covector<C: Scalar>(pt: &Point<C>, u: Label) -> Result<CoTangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    let lo = Selector::Geq(-2 * m + 1);
    let hi = Selector::Leq(2 * n - 1);
    let zero = || Series::zero().with_parity(Parity::Odd).unwrap();
    match u {
        Label::T(i) => {
            let f = pt.w_pow(-2 * i - 1)?;
            Ok(CoTangentVec::new(f.project(lo)?.neg(), f.project(hi)?))
        }
        Label::H(j) => {
            let f = pt.chi_pow(2 * j as i64 - 2 * m - 1)?;
            Ok(CoTangentVec::new(f.project(lo)?, zero()))
        }
        Label::HHat(k) => {
            let f = pt.chihat_pow(2 * k as i64 - 2 * n - 1)?;
            Ok(CoTangentVec::new(zero(), f.project(hi)?))
        }
    }
}

/// e* = (z^{−2m+1}/2m, 0).
pub fn unity_covector<C: Scalar>(pt: &Point<C>) -> CoTangentVec<C> {
    let m = pt.m() as i64;
    CoTangentVec::new(
        Series::monomial(C::from_q(&q(1, 2 * m)), 1 - 2 * m),
        Series::zero().with_parity(Parity::Odd).unwrap(),
    )
}

/// ⟨ω, ξ⟩ = res_c(ωξ + ω̂ξ̂).
pub fn pair<C: Scalar>(om: &CoTangentVec<C>, xi: &TangentVec<C>) -> Result<C> {
    let s = om.om.mul(&xi.xi)?.add(&om.omhat.mul(&xi.xihat)?)?;
    s.residue(At::Circle)
}

/// The map η: T* → T.
pub fn eta_map<C: Scalar>(pt: &Point<C>, om: &CoTangentVec<C>) -> Result<TangentVec<C>> {
    let da = pt.a().derivative();
    let dah = pt.ahat().derivative();
    let sum = om.om.add(&om.omhat)?;
    let mix = om.om.mul(&da)?.add(&om.omhat.mul(&dah)?)?;
    let xi = da.mul(&sum.minus()?)?.sub(&mix.minus()?)?;
    let xihat = dah.mul(&sum.plus()?)?.neg().add(&mix.plus()?)?;
    Ok(TangentVec::new(
        xi.with_parity(Parity::Even)?,
        xihat.with_parity(Parity::Even)?,
    ))
}

/// K_m: lower-triangular Toeplitz with first column (2m, (2m−2)v_m, …, 2v_2).
pub fn k_matrix<C: Scalar>(pt: &Point<C>) -> Vec<Vec<C>> {
    let m = pt.m() as i64;
    let col: Vec<C> = (0..m)
        .map(|r| {
            let e = 2 * m - 2 * r;
            pt.a().coeff_unchecked(e).scale(&q(e, 1))
        })
        .collect();
    toeplitz(&col)
}

/// K̂_n: lower-triangular Toeplitz with first column
/// (2n v̂_{−n}, (2n−2) v̂_{−n+1}, …, 2 v̂_{−1}).
pub fn k_hat_matrix<C: Scalar>(pt: &Point<C>) -> Vec<Vec<C>> {
    let n = pt.n() as i64;
    let col: Vec<C> = (0..n)
        .map(|r| {
            let e = -2 * n + 2 * r;
            pt.ahat().coeff_unchecked(e).scale(&q(-e, 1))
        })
        .collect();
    toeplitz(&col)
}

fn toeplitz<C: Scalar>(col: &[C]) -> Vec<Vec<C>> {
    let d = col.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i >= j {
                        col[i - j].clone()
                    } else {
                        C::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Solves a lower-triangular system by forward substitution.
fn solve_lower<C: Scalar>(mat: &[Vec<C>], rhs: &[C]) -> Result<Vec<C>> {
    let mut x: Vec<C> = Vec::with_capacity(rhs.len());
    for i in 0..rhs.len() {
        let mut acc = rhs[i].clone();
        for (j, xj) in x.iter().enumerate() {
            acc = acc - mat[i][j].clone() * xj.clone();
        }
        let d = mat[i][i].try_inv().ok_or(Error::SingularKMatrix)?;
        x.push(acc * d);
    }
    Ok(x)
}

/// η⁻¹: T → T*.
pub fn eta_inverse<C: Scalar>(pt: &Point<C>, xi: &TangentVec<C>) -> Result<CoTangentVec<C>> {
    let (m, n) = (pt.m() as i64, pt.n() as i64);
    let dz = xi.dzeta()?;
    let extra = dz.top().unwrap_or(0).max(0);
    let qt = dz.mul(&pt.inv_dzeta(extra)?)?;
    let om_plus = qt.plus()?.neg();
    let omhat_minus = qt.minus()?;
    // ξ_i = Σ_k α_{i−1+k} ω̃_{−k}, α_r = 2r·a_{2r}.
    let rhs: Vec<C> = (0..m)
        .map(|r| xi.xi.coeff(2 * (m - r) - 2))
        .collect::<Result<_>>()?;
    let tilde = solve_lower(&k_matrix(pt), &rhs)?;
    let mut om_terms: Vec<(i64, C)> = om_plus.terms().map(|(&e, c)| (e, c.clone())).collect();
    for (k, t) in tilde.iter().enumerate() {
        let e = -2 * k as i64 - 1;
        om_terms.push((e, t.clone() - omhat_minus.coeff(e)?));
    }
    let om = Series::from_terms(om_terms).with_parity(Parity::Odd)?;
    // ξ̂_{−n+r} = Σ β τ, solved through K̂_n.
    let rhs: Vec<C> = (0..n)
        .map(|r| xi.xihat.coeff(-2 * n + 2 * r))
        .collect::<Result<_>>()?;
    let tau = solve_lower(&k_hat_matrix(pt), &rhs)?;
    let mut hat_plus = Vec::new();
    for (k, t) in tau.iter().enumerate() {
        let e = 2 * k as i64 + 1;
        hat_plus.push((e, t.clone() - om.coeff_unchecked(e)));
    }
    let omhat = omhat_minus
        .add(&Series::from_terms(hat_plus))?
        .with_parity(Parity::Odd)?;
    Ok(CoTangentVec::new(om, omhat))
}

/// The flat metric ⟨ξ₁, ξ₂⟩.
pub fn metric<C: Scalar>(pt: &Point<C>, x1: &TangentVec<C>, x2: &TangentVec<C>) -> Result<C> {
    let dz = x1.dzeta()?.mul(&x2.dzeta()?)?;
    let dl = x1.dl()?.mul(&x2.dl()?)?;
    let mut total = C::zero();
    if !dz.is_exact_zero() {
        let extra = dz.top().unwrap_or(0).max(0);
        total = total - dz.mul(&pt.inv_dzeta(extra)?)?.residue(At::Circle)?;
    }
    if !dl.is_exact_zero() {
        let up = dl.top().unwrap_or(0).max(0);
        let down = (-dl.bottom().unwrap_or(0)).max(0);
        total = total
            - dl.mul(&pt.inv_dl(Side::Infinity, up)?)?
                .residue(At::Infinity)?;
        total = total - dl.mul(&pt.inv_dl(Side::Zero, down)?)?.residue(At::Zero)?;
    }
    Ok(total)
}
