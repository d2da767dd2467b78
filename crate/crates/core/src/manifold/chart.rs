use std::collections::BTreeMap;

use super::{Label, Mode, Point};
use crate::error::{Error, Result};
use crate::scalar::{q, qi, Scalar, Q};
use crate::series::{At, Parity, Series, Side};

/// Values of the flat coordinates at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatChart<C> {
    pub m: u32,
    pub n: u32,
    pub t: BTreeMap<i64, C>,
    pub h: Vec<C>,
    pub hhat: Vec<C>,
}

/// Quasi-homogeneity degree of a flat coordinate.
pub fn degree(u: Label, m: u32, n: u32) -> Q {
    let (m, n) = (m as i64, n as i64);
    match u {
        Label::T(i) => q(m * (1 - 2 * i) + 1, 2 * m),
        Label::H(j) => q(j as i64, m),
        Label::HHat(k) => q(2 * k as i64 - 1, 2 * n) + q(1, 2 * m),
    }
}

/// The spectrum μ_u.
pub fn mu(u: Label, m: u32, n: u32) -> Q {
    let (m, n) = (m as i64, n as i64);
    match u {
        Label::T(i) => qi(i),
        Label::H(j) => q(m - 2 * j as i64 + 1, 2 * m),
        Label::HHat(k) => q(n - 2 * k as i64 + 1, 2 * n),
    }
}

/// The charge d_m = 1 − 1/m.
pub fn charge(m: u32) -> Q {
    qi(1) - q(1, m as i64)
}

impl<C: Scalar> FlatChart<C> {
    pub fn get(&self, u: Label) -> Option<C> {
        match u {
            Label::T(i) => Some(self.t.get(&i).cloned().unwrap_or_else(C::zero)),
            Label::H(j) => self.h.get(j as usize - 1).cloned(),
            Label::HHat(k) => self.hhat.get(k as usize - 1).cloned(),
        }
    }

    /// Reads off the flat coordinates of `pt` for |i| ≤ t_range.
    pub fn of_point(pt: &Point<C>, t_range: i64) -> Result<Self> {
        let (m, n) = (pt.m(), pt.n());
        let mut t = BTreeMap::new();
        for i in -t_range..=t_range {
            let r = pt.w_pow(1 - 2 * i)?.residue(At::Circle)?;
            t.insert(i, r.scale(&q(2, 2 * i - 1)));
        }
        let mut h = Vec::new();
        for j in 1..=m as i64 {
            let r = pt.chi_pow(2 * j - 1)?.residue(At::Infinity)?;
            h.push(r.scale(&q(-2 * m as i64, 2 * j - 1)));
        }
        let mut hhat = Vec::new();
        for k in 1..=n as i64 {
            let r = pt.chihat_pow(2 * k - 1)?.residue(At::Zero)?;
            hhat.push(r.scale(&q(2 * n as i64, 2 * k - 1)));
        }
        Ok(FlatChart { m, n, t, h, hhat })
    }

    /// Rebuilds the point from its flat coordinates. Only t^i with i ≤ 1
    /// may be nonzero, so that z(w) is an expansion at infinity.
    pub fn reconstruct(&self, depth: i64) -> Result<Point<C>> {
        let (m, n) = (self.m, self.n);
        if self.h.len() != m as usize || self.hhat.len() != n as usize {
            return Err(Error::InconsistentChart(
                "h or ĥ coordinates missing".into(),
            ));
        }
        if self.t.iter().any(|(&i, c)| i > 1 && !c.is_zero()) {
            return Err(Error::InconsistentChart(
                "t^i with i > 1 is not supported in truncated mode".into(),
            ));
        }
        let t1 = self.t.get(&1).cloned().unwrap_or_else(C::zero);
        if t1.is_zero() {
            return Err(Error::NotNearIdentity("t^1 vanishes".into()));
        }
        if self.hhat[0].is_zero() {
            return Err(Error::InconsistentChart("ĥ^1 vanishes".into()));
        }
        let pad = 2 * (m + n) as i64 + 4;
        let steps = depth + pad + 2 * m as i64;
        // z(w) = Σ t^i/2 w^{2i−1}, inverted at infinity.
        let zw = Series::from_terms(self.t.iter().map(|(&i, c)| (2 * i - 1, c.scale(&q(1, 2)))))
            .with_parity(Parity::Odd)?;
        let w = zw.compositional_inverse(Side::Infinity, steps)?;
        // z(χ) = χ − Σ h^j/2m χ^{1−2j}.
        let mut zchi = vec![(1, C::one())];
        for (j, h) in self.h.iter().enumerate() {
            zchi.push((-(2 * j as i64) - 1, -h.scale(&q(1, 2 * m as i64))));
        }
        let chi = Series::from_terms(zchi)
            .with_parity(Parity::Odd)?
            .compositional_inverse(Side::Infinity, 4 * m as i64 + 4)?;
        let lplus = chi.powi(2 * m as i64, Side::Infinity, 0)?.plus()?;
        // z(y) = Σ ĥ^k/2n y^{2k−1}, y = 1/χ̂.
        let zy = Series::from_terms(
            self.hhat
                .iter()
                .enumerate()
                .map(|(k, c)| (2 * k as i64 + 1, c.scale(&q(1, 2 * n as i64)))),
        )
        .with_parity(Parity::Odd)?;
        let y = zy.compositional_inverse(Side::Zero, 4 * n as i64 + 4)?;
        let lminus = y
            .powi(-2 * n as i64, Side::Zero, 4 * n as i64 + 4)?
            .minus()?;
        let l = lplus.add(&lminus)?;
        let l = Series::from_terms(l.terms().map(|(&e, c)| (e, c.clone())));
        let rho = self.hhat[0].scale(&q(1, 2 * n as i64));
        let pt = Point::assemble(m, n, depth, Mode::Truncated, w, l, rho)?;
        super::check_l(m, n, pt.l())?;
        Ok(pt)
    }
}
